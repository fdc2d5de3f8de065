use num_integer::Integer;
use num_rational::Rational64;
use std::time::Instant;

use super::{FitInstance, FitResult, Status};
use crate::error::{Error, Result};
use crate::vector::{UserModel, Variant};

/// Largest dimension enumerated for binary models (`2^20` vertices).
pub const BINARY_ENUMERATION_LIMIT: usize = 20;
/// Largest dimension enumerated for ternary models (`3^13` vertices).
pub const TERNARY_ENUMERATION_LIMIT: usize = 13;

/// Exhaustive minimization, used as the reference for every other solver.
///
/// Vertices are visited in lexicographic order and only strict improvements
/// replace the incumbent, so the lexicographically smallest optimum wins.
pub fn solve_brute_force(inst: &FitInstance, variant: Variant) -> Result<FitResult> {
    let n = inst.dim();
    let limit = match variant {
        Variant::Binary => BINARY_ENUMERATION_LIMIT,
        Variant::Ternary => TERNARY_ENUMERATION_LIMIT,
    };
    if n > limit {
        return Err(Error::Capacity { what: "enumeration dimension", size: n, limit });
    }
    let start = Instant::now();

    // Scale every target to a common denominator.
    let den = inst.dratings().iter().fold(1i64, |acc, d| acc.lcm(d.value().denom()));
    let targets: Vec<i64> = inst
        .dratings()
        .iter()
        .map(|d| d.value().numer() * (den / d.value().denom()))
        .collect();
    let bits: Vec<&[bool]> = inst.items().iter().map(|it| it.bits()).collect();

    let values = variant.values();
    let contribution = |bit: bool, x: i8| -> i64 {
        let hit = match variant {
            Variant::Binary => (bit as i8) != x,
            Variant::Ternary => (bit && x == -1) || (!bit && x == 1),
        };
        hit as i64
    };

    // Odometer over value indices; the last coordinate moves fastest.
    let mut digits = vec![0usize; n];
    let mut coords: Vec<i8> = vec![values[0]; n];
    let mut dist: Vec<i64> = bits
        .iter()
        .map(|b| (0..n).map(|j| contribution(b[j], coords[j])).sum())
        .collect();

    let eval = |dist: &[i64]| -> i64 {
        dist.iter().zip(&targets).map(|(&d, &t)| (d * den - t).abs()).sum()
    };

    let mut best = eval(&dist);
    let mut best_coords = coords.clone();
    let mut visited = 1u64;

    'outer: loop {
        let mut j = n;
        loop {
            if j == 0 {
                break 'outer;
            }
            j -= 1;
            let old = coords[j];
            let carry = digits[j] + 1 == values.len();
            digits[j] = if carry { 0 } else { digits[j] + 1 };
            let new = values[digits[j]];
            coords[j] = new;
            for (d, b) in dist.iter_mut().zip(&bits) {
                *d += contribution(b[j], new) - contribution(b[j], old);
            }
            if !carry {
                break;
            }
        }
        visited += 1;
        let obj = eval(&dist);
        if obj < best {
            best = obj;
            best_coords.clone_from(&coords);
        }
    }

    let model = UserModel::from_trusted(variant, best_coords);
    let result = FitResult::new(inst, model, Status::Optimal, visited, start.elapsed())?;
    debug_assert_eq!(result.objective, Rational64::new(best, den));
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rating::DRating;
    use crate::scale::{AttributeSpace, RatingScale};
    use crate::vector::ItemVector;
    use num_traits::Zero;

    fn inst(n: usize, items: &[&str], deltas: &[i64]) -> FitInstance {
        let space = AttributeSpace::anonymous(n, RatingScale::whole_stars(5).unwrap()).unwrap();
        FitInstance::new(
            space,
            items.iter().enumerate().map(|(k, b)| ItemVector::from_bit_str(format!("i{k}"), b).unwrap()).collect(),
            deltas.iter().map(|&d| DRating::from_integer(d as usize, n).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn two_item_binary() {
        let r = solve_brute_force(&inst(2, &["00", "11"], &[0, 2]), Variant::Binary).unwrap();
        assert_eq!(r.model.coords(), &[0, 0]);
        assert_eq!(r.objective, Rational64::zero());
        assert_eq!(r.status, Status::Optimal);
        assert_eq!(r.iterations, 4);
    }

    #[test]
    fn item_itself_is_optimal() {
        let r = solve_brute_force(&inst(4, &["1011"], &[0]), Variant::Binary).unwrap();
        assert_eq!(r.model.coords(), &[1, 0, 1, 1]);
        assert_eq!(r.objective, Rational64::zero());
    }

    #[test]
    fn ternary_lexicographic_winner() {
        let r = solve_brute_force(&inst(2, &["11"], &[2]), Variant::Ternary).unwrap();
        assert_eq!(r.model.coords(), &[-1, -1]);
        assert_eq!(r.objective, Rational64::zero());
        assert_eq!(r.iterations, 9);
    }

    #[test]
    fn capacity_limits() {
        let wide = "0".repeat(14);
        let i = inst(14, &[&wide], &[0]);
        assert!(matches!(solve_brute_force(&i, Variant::Ternary), Err(Error::Capacity { .. })));
        assert!(solve_brute_force(&i, Variant::Binary).is_ok());
    }
}
