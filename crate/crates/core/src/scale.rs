//! Rating scales and attribute spaces.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Raw values closer than this are treated as the same level.
const RAW_EPS: f64 = 1e-9;

/// An ordered list of admissible raw rating values.
///
/// The value at position `k` has level `k + 1`, so levels run over `1..=s`.
/// Spacing is assumed uniform: whole stars `1..=5` or half stars `0.5..=5.0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct RatingScale {
    raw_levels: Vec<f64>,
}

impl RatingScale {
    pub fn new(raw_levels: Vec<f64>) -> Result<Self> {
        if raw_levels.len() < 2 {
            return Err(Error::domain(format!(
                "a rating scale needs at least 2 levels, got {}",
                raw_levels.len()
            )));
        }
        if raw_levels.iter().any(|r| !r.is_finite()) {
            return Err(Error::domain("rating scale levels must be finite"));
        }
        if raw_levels.windows(2).any(|w| w[1] - w[0] <= RAW_EPS) {
            return Err(Error::domain("rating scale levels must be strictly increasing"));
        }
        Ok(RatingScale { raw_levels })
    }

    /// `1.0, 2.0, ..., s`.
    pub fn whole_stars(s: usize) -> Result<Self> {
        Self::new((1..=s).map(|k| k as f64).collect())
    }

    /// `0.5, 1.0, ..., 5.0`: ten levels.
    pub fn half_stars() -> Self {
        Self::new((1..=10).map(|k| k as f64 * 0.5).collect()).expect("static scale")
    }

    /// Number of levels `s`.
    pub fn levels(&self) -> usize {
        self.raw_levels.len()
    }

    pub fn raw_levels(&self) -> &[f64] {
        &self.raw_levels
    }

    /// Raw value of a 1-based level.
    pub fn raw(&self, level: usize) -> Result<f64> {
        if level == 0 || level > self.levels() {
            return Err(Error::domain(format!("level {level} outside 1..={}", self.levels())));
        }
        Ok(self.raw_levels[level - 1])
    }

    /// Distance in raw units between adjacent levels.
    pub fn step(&self) -> f64 {
        self.raw_levels[1] - self.raw_levels[0]
    }

    /// 1-based index of `raw` among the admissible values.
    pub fn rating_to_level(&self, raw: f64) -> Result<usize> {
        self.raw_levels
            .iter()
            .position(|level| (level - raw).abs() <= RAW_EPS)
            .map(|k| k + 1)
            .ok_or_else(|| {
                Error::domain(format!(
                    "rating {raw} is not an admissible level of the scale {:?}",
                    self.raw_levels
                ))
            })
    }
}

impl TryFrom<Vec<f64>> for RatingScale {
    type Error = Error;

    fn try_from(raw_levels: Vec<f64>) -> Result<Self> {
        RatingScale::new(raw_levels)
    }
}

impl From<RatingScale> for Vec<f64> {
    fn from(scale: RatingScale) -> Self {
        scale.raw_levels
    }
}

/// The ordered attribute set together with the rating scale used over it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeSpace {
    names: Vec<String>,
    scale: RatingScale,
}

impl AttributeSpace {
    pub fn new(names: Vec<String>, scale: RatingScale) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::domain("an attribute space needs at least one attribute"));
        }
        let mut seen = HashSet::with_capacity(names.len());
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::domain(format!("duplicate attribute name {name:?}")));
            }
        }
        Ok(AttributeSpace { names, scale })
    }

    /// Anonymous attributes `a1..an`.
    pub fn anonymous(n: usize, scale: RatingScale) -> Result<Self> {
        Self::new((1..=n).map(|j| format!("a{j}")).collect(), scale)
    }

    /// Dimension `n`.
    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn scale(&self) -> &RatingScale {
        &self.scale
    }

    /// Number of rating levels `s`.
    pub fn levels(&self) -> usize {
        self.scale.levels()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_lookup() {
        let whole = RatingScale::whole_stars(5).unwrap();
        assert_eq!(whole.rating_to_level(5.0).unwrap(), 5);
        assert_eq!(whole.rating_to_level(1.0).unwrap(), 1);

        let half = RatingScale::half_stars();
        assert_eq!(half.levels(), 10);
        assert_eq!(half.rating_to_level(0.5).unwrap(), 1);
        assert_eq!(half.rating_to_level(3.5).unwrap(), 7);
        assert!(half.rating_to_level(3.7).is_err());
        assert_eq!(half.step(), 0.5);
    }

    #[test]
    fn scale_validation() {
        assert!(RatingScale::new(vec![1.0]).is_err());
        assert!(RatingScale::new(vec![2.0, 1.0]).is_err());
        assert!(RatingScale::new(vec![1.0, 1.0]).is_err());
        assert!(RatingScale::whole_stars(2).is_ok());
    }

    #[test]
    fn space_validation() {
        let scale = RatingScale::whole_stars(5).unwrap();
        assert!(AttributeSpace::new(vec![], scale.clone()).is_err());
        assert!(AttributeSpace::new(vec!["a".into(), "a".into()], scale.clone()).is_err());
        let space = AttributeSpace::anonymous(3, scale).unwrap();
        assert_eq!(space.dim(), 3);
        assert_eq!(space.names()[2], "a3");
    }
}
