//! Synthetic users with a planted model, for solver and harness checks.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::distance::distance;
use crate::error::{Error, Result};
use crate::rating::{distance_to_star, DRating, RatingRecord};
use crate::scale::{AttributeSpace, RatingScale};
use crate::vector::{ItemVector, UserModel, Variant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Supervision {
    /// Each rating carries the exact distance to the planted model.
    DistanceExact,
    /// Only the star level derived from the distance is kept.
    StarRounded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticConfig {
    pub user_id: String,
    pub n: usize,
    pub s: usize,
    pub items: usize,
    pub variant: Variant,
    pub supervision: Supervision,
    /// Probability of moving a star-rounded rating one level up or down.
    pub noise: f64,
    pub seed: u64,
}

impl SyntheticConfig {
    pub fn new(n: usize, items: usize, seed: u64) -> Self {
        SyntheticConfig {
            user_id: format!("synthetic-{seed}"),
            n,
            s: 5,
            items,
            variant: Variant::Binary,
            supervision: Supervision::DistanceExact,
            noise: 0.0,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::domain("synthetic data needs n >= 1"));
        }
        if self.s < 2 {
            return Err(Error::domain("synthetic data needs s >= 2"));
        }
        if !(0.0..=1.0).contains(&self.noise) {
            return Err(Error::domain(format!("noise {} outside [0, 1]", self.noise)));
        }
        if self.items == 0 {
            return Err(Error::domain("synthetic data needs at least one item"));
        }
        if self.n < 64 && self.items as u128 > 1u128 << self.n {
            return Err(Error::Capacity { what: "distinct items", size: self.items, limit: 1usize << self.n });
        }
        Ok(())
    }
}

/// Draws distinct uniform items, a uniform planted model of the configured
/// variant, and ratings derived from the item-to-model distances. Returns
/// the data set and the planted model.
pub fn generate_synthetic(config: &SyntheticConfig) -> Result<(Dataset, UserModel)> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = config.n;

    let mut seen = HashSet::with_capacity(config.items);
    let mut items = Vec::with_capacity(config.items);
    while items.len() < config.items {
        let bits: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
        if seen.insert(bits.clone()) {
            items.push(ItemVector::new(format!("item{}", items.len() + 1), bits));
        }
    }

    let values = config.variant.values();
    let coords: Vec<i8> = (0..n).map(|_| values[rng.gen_range(0..values.len())]).collect();
    let planted = UserModel::new(config.variant, coords)?;

    let scale = RatingScale::whole_stars(config.s)?;
    let space = AttributeSpace::anonymous(n, scale)?;
    let mut ratings = Vec::with_capacity(items.len());
    for item in &items {
        let d = distance(item, &planted)?;
        let mut level = distance_to_star(d, &space)?;
        let target = match config.supervision {
            Supervision::DistanceExact => Some(DRating::from_integer(d, n)?),
            Supervision::StarRounded => {
                if config.noise > 0.0 && rng.gen_bool(config.noise) {
                    level = perturb(level, config.s, rng.gen());
                }
                None
            }
        };
        let mut record = RatingRecord::new(item.id.clone(), level as f64, space.scale())?;
        record.target = target;
        ratings.push(record);
    }
    let dataset = Dataset::new(config.user_id.clone(), space, items, ratings)?;
    Ok((dataset, planted))
}

/// One level up or down, bouncing off the ends of the scale.
fn perturb(level: usize, s: usize, up: bool) -> usize {
    match (up, level) {
        (true, l) if l < s => l + 1,
        (true, l) => l - 1,
        (false, 1) => 2,
        (false, l) => l - 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{objective, solve_brute_force};
    use num_traits::Zero;

    #[test]
    fn distance_exact_admits_zero() {
        for variant in [Variant::Binary, Variant::Ternary] {
            let mut config = SyntheticConfig::new(8, 30, 5);
            config.variant = variant;
            let (data, planted) = generate_synthetic(&config).unwrap();
            let inst = data.full_instance().unwrap();
            assert!(objective(&inst, &planted).unwrap().is_zero());
            assert!(solve_brute_force(&inst, variant).unwrap().objective.is_zero());
        }
    }

    #[test]
    fn star_rounded_planted_objective() {
        let mut config = SyntheticConfig::new(10, 40, 11);
        config.supervision = Supervision::StarRounded;
        let (data, planted) = generate_synthetic(&config).unwrap();
        let inst = data.full_instance().unwrap();
        let planted_obj = objective(&inst, &planted).unwrap();
        // sum |d - tau(tau^-1(d))|
        let space = data.space();
        let mut expected = num_rational::Rational64::zero();
        for item in data.items() {
            let d = distance(item, &planted).unwrap();
            let back = crate::rating::star_to_drating(distance_to_star(d, space).unwrap(), space).unwrap();
            let dev = num_rational::Rational64::from_integer(d as i64) - back.value();
            expected += if dev < num_rational::Rational64::zero() { -dev } else { dev };
        }
        assert_eq!(planted_obj, expected);
        assert!(solve_brute_force(&inst, Variant::Binary).unwrap().objective <= planted_obj);
    }

    #[test]
    fn deterministic_and_distinct() {
        let mut config = SyntheticConfig::new(6, 40, 3);
        config.supervision = Supervision::StarRounded;
        config.noise = 0.3;
        let a = generate_synthetic(&config).unwrap();
        let b = generate_synthetic(&config).unwrap();
        assert_eq!(a, b);
        let unique: HashSet<_> = a.0.items().iter().map(|it| it.bits().to_vec()).collect();
        assert_eq!(unique.len(), 40);
    }

    #[test]
    fn too_many_items() {
        let config = SyntheticConfig::new(3, 9, 0);
        assert!(matches!(generate_synthetic(&config), Err(Error::Capacity { .. })));
        assert!(generate_synthetic(&SyntheticConfig::new(3, 8, 0)).is_ok());
    }

    #[test]
    fn perturb_stays_in_range() {
        assert_eq!(perturb(5, 5, true), 4);
        assert_eq!(perturb(1, 5, false), 2);
        assert_eq!(perturb(3, 5, true), 4);
    }
}
