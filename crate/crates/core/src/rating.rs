//! Conversions between star levels and target distances (d-ratings).

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scale::{AttributeSpace, RatingScale};

/// A target distance in `[0, n]`, kept as an exact rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DRating(Rational64);

impl DRating {
    /// Checked constructor: `value` must lie in `[0, n]`.
    pub fn new(value: Rational64, n: usize) -> Result<Self> {
        if value < Rational64::zero() || value > Rational64::from_integer(n as i64) {
            return Err(Error::domain(format!("d-rating {value} outside [0, {n}]")));
        }
        Ok(DRating(value))
    }

    pub fn from_integer(d: usize, n: usize) -> Result<Self> {
        Self::new(Rational64::from_integer(d as i64), n)
    }

    pub fn value(self) -> Rational64 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for DRating {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Parses `"7"` or `"7/2"`. Range checking happens in [`DRating::new`].
pub fn parse_rational(s: &str) -> Result<Rational64> {
    Rational64::from_str(s.trim())
        .map_err(|e| Error::parse(format!("rational {s:?}"), e.to_string()))
}

impl Serialize for DRating {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for DRating {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        let value = parse_rational(&s).map_err(serde::de::Error::custom)?;
        if value < Rational64::zero() {
            return Err(serde::de::Error::custom(format!("negative d-rating {value}")));
        }
        Ok(DRating(value))
    }
}

/// One rating given by the user.
#[derive(Debug, Clone, PartialEq)]
pub struct RatingRecord {
    pub item_id: String,
    pub raw: f64,
    /// 1-based index of `raw` in the scale.
    pub level: usize,
    /// Exact target distance overriding the one derived from `level`.
    /// Only synthetic distance-exact data sets carry it.
    pub target: Option<DRating>,
}

impl RatingRecord {
    pub fn new(item_id: impl Into<String>, raw: f64, scale: &RatingScale) -> Result<Self> {
        let level = scale.rating_to_level(raw)?;
        Ok(RatingRecord { item_id: item_id.into(), raw, level, target: None })
    }

    /// The d-rating used when fitting.
    pub fn drating(&self, space: &AttributeSpace) -> Result<DRating> {
        match self.target {
            Some(t) => DRating::new(t.value(), space.dim()),
            None => star_to_drating(self.level, space),
        }
    }
}

/// Maps a star level to a target distance: `n - n(level-1)/(s-1)`.
pub fn star_to_drating(level: usize, space: &AttributeSpace) -> Result<DRating> {
    let s = space.levels();
    if level == 0 || level > s {
        return Err(Error::domain(format!("level {level} outside 1..={s}")));
    }
    let n = space.dim() as i64;
    let value = Rational64::new(n * (s - level) as i64, (s - 1) as i64);
    DRating::new(value, space.dim())
}

/// Maps a distance back to a star level: `s - round(delta (s-1) / n)`,
/// rounding exact halves up.
pub fn drating_to_star(delta: Rational64, space: &AttributeSpace) -> Result<usize> {
    let n = space.dim();
    let s = space.levels();
    if delta < Rational64::zero() || delta > Rational64::from_integer(n as i64) {
        return Err(Error::domain(format!("distance {delta} outside [0, {n}]")));
    }
    let scaled = delta * Rational64::from_integer((s - 1) as i64) / Rational64::from_integer(n as i64);
    // floor(q + 1/2) = floor((2p + q) / 2q) for q = p/den
    let (p, den) = (*scaled.numer(), *scaled.denom());
    let rounded = Integer::div_floor(&(2 * p + den), &(2 * den));
    Ok(s - rounded as usize)
}

/// [`drating_to_star`] for an integer distance.
pub fn distance_to_star(distance: usize, space: &AttributeSpace) -> Result<usize> {
    drating_to_star(Rational64::from_integer(distance as i64), space)
}
