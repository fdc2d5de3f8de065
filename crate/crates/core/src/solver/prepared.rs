//! Integer-scaled, column-major view of a fit instance used by the search
//! routines. All d-ratings are multiplied by the lcm of their denominators
//! so deviations become exact `i64` arithmetic.

use num_integer::Integer;
use num_rational::Rational64;

use super::FitInstance;
use crate::distance::{binary_mismatch, penalized};
use crate::vector::Variant;

pub(crate) struct Prepared {
    pub n: usize,
    pub m: usize,
    pub scale: i64,
    /// `delta_i * scale`
    pub targets: Vec<i64>,
    /// `columns[j][i]` is bit `j` of item `i`.
    pub columns: Vec<Vec<bool>>,
}

impl Prepared {
    pub fn new(inst: &FitInstance) -> Self {
        let scale = inst.dratings().iter().fold(1i64, |acc, d| acc.lcm(d.value().denom()));
        let targets = inst
            .dratings()
            .iter()
            .map(|d| {
                let v = d.value();
                v.numer() * (scale / v.denom())
            })
            .collect();
        let n = inst.dim();
        let m = inst.len();
        let columns = (0..n).map(|j| inst.items().iter().map(|it| it.bits()[j]).collect()).collect();
        Prepared { n, m, scale, targets, columns }
    }

    #[inline]
    pub fn error(&self, i: usize, dist: i64) -> i64 {
        (dist * self.scale - self.targets[i]).abs()
    }

    pub fn distances(&self, variant: Variant, coords: &[i8]) -> Vec<i64> {
        let mut dist = vec![0i64; self.m];
        for (j, col) in self.columns.iter().enumerate() {
            let x = coords[j];
            for (i, &bit) in col.iter().enumerate() {
                if contributes(variant, bit, x) {
                    dist[i] += 1;
                }
            }
        }
        dist
    }

    pub fn total_error(&self, dist: &[i64]) -> i64 {
        dist.iter().enumerate().map(|(i, &d)| self.error(i, d)).sum()
    }

    pub fn to_rational(&self, scaled: i64) -> Rational64 {
        Rational64::new(scaled, self.scale)
    }
}

#[inline]
pub(crate) fn contributes(variant: Variant, bit: bool, x: i8) -> bool {
    match variant {
        Variant::Binary => binary_mismatch(bit, x),
        Variant::Ternary => penalized(bit, x),
    }
}
