//! Item and user vertices of the hypercube.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An item's binary attribute vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ItemVector {
    pub id: String,
    bits: Vec<bool>,
}

impl ItemVector {
    pub fn new(id: impl Into<String>, bits: Vec<bool>) -> Self {
        ItemVector { id: id.into(), bits }
    }

    /// Parses a `0`/`1` string such as `"0110"`.
    pub fn from_bit_str(id: impl Into<String>, bits: &str) -> Result<Self> {
        let id = id.into();
        let bits = parse_bits(bits)
            .map_err(|message| Error::parse(format!("item {id:?}"), message))?;
        Ok(ItemVector { id, bits })
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn dim(&self) -> usize {
        self.bits.len()
    }

    pub fn bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    /// Keeps only the coordinates listed in `keep` (in that order).
    pub(crate) fn project(&self, keep: &[usize]) -> ItemVector {
        ItemVector { id: self.id.clone(), bits: keep.iter().map(|&j| self.bits[j]).collect() }
    }
}

fn parse_bits(s: &str) -> std::result::Result<Vec<bool>, String> {
    s.chars()
        .enumerate()
        .map(|(k, c)| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(format!("invalid bit {other:?} at position {}", k + 1)),
        })
        .collect()
}

/// Which objective a user model belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Coordinates in `{0,1}`, fitted with the Hamming distance.
    Binary,
    /// Coordinates in `{-1,0,1}`, fitted with the don't-care distance.
    Ternary,
}

impl Variant {
    /// Admissible coordinate values in lexicographic order.
    pub fn values(self) -> &'static [i8] {
        match self {
            Variant::Binary => &[0, 1],
            Variant::Ternary => &[-1, 0, 1],
        }
    }

    /// Name of the corresponding fitting algorithm.
    pub fn algorithm(self) -> &'static str {
        match self {
            Variant::Binary => "algo1",
            Variant::Ternary => "algo2",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Binary => "binary",
            Variant::Ternary => "ternary",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "binary" | "algo1" => Ok(Variant::Binary),
            "ternary" | "algo2" => Ok(Variant::Ternary),
            other => Err(Error::domain(format!("unknown model variant {other:?}"))),
        }
    }
}

/// A fitted user vertex.
///
/// Orders lexicographically by coordinates, which is the tie-break used by
/// every exact solver.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawModel", into = "RawModel")]
pub struct UserModel {
    variant: Variant,
    coords: Vec<i8>,
}

impl UserModel {
    pub fn new(variant: Variant, coords: Vec<i8>) -> Result<Self> {
        let allowed = variant.values();
        if let Some(bad) = coords.iter().find(|c| !allowed.contains(c)) {
            return Err(Error::domain(format!("coordinate {bad} is not admissible for a {variant} model")));
        }
        Ok(UserModel { variant, coords })
    }

    pub fn binary(bits: &[bool]) -> Self {
        UserModel { variant: Variant::Binary, coords: bits.iter().map(|&b| b as i8).collect() }
    }

    pub fn ternary(coords: Vec<i8>) -> Result<Self> {
        Self::new(Variant::Ternary, coords)
    }

    /// Crate-internal constructor for coordinates already known to be admissible.
    pub(crate) fn from_trusted(variant: Variant, coords: Vec<i8>) -> Self {
        debug_assert!(coords.iter().all(|c| variant.values().contains(c)));
        UserModel { variant, coords }
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn coords(&self) -> &[i8] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// The same vertex seen as a ternary model (`0 -> -1`, `1 -> 1`).
    /// Ternary models are returned unchanged.
    pub fn to_ternary(&self) -> UserModel {
        match self.variant {
            Variant::Ternary => self.clone(),
            Variant::Binary => UserModel {
                variant: Variant::Ternary,
                coords: self.coords.iter().map(|&c| 2 * c - 1).collect(),
            },
        }
    }

    /// Compact text form: `0110` for binary, `-0+` for ternary.
    pub fn code(&self) -> String {
        self.coords
            .iter()
            .map(|&c| match (self.variant, c) {
                (Variant::Binary, 0) => '0',
                (Variant::Binary, _) => '1',
                (Variant::Ternary, -1) => '-',
                (Variant::Ternary, 0) => '0',
                (Variant::Ternary, _) => '+',
            })
            .collect()
    }

    /// Parses the form written by [`UserModel::code`].
    pub fn from_code(variant: Variant, code: &str) -> Result<Self> {
        let coords = code
            .chars()
            .map(|ch| match (variant, ch) {
                (Variant::Binary, '0') | (Variant::Ternary, '0') => Ok(0),
                (Variant::Binary, '1') | (Variant::Ternary, '+') => Ok(1),
                (Variant::Ternary, '-') => Ok(-1),
                _ => Err(Error::parse("model code", format!("unexpected {ch:?} in a {variant} model"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        UserModel::new(variant, coords)
    }
}

#[derive(Serialize, Deserialize)]
struct RawModel {
    variant: Variant,
    coords: Vec<i8>,
}

impl TryFrom<RawModel> for UserModel {
    type Error = Error;

    fn try_from(raw: RawModel) -> Result<Self> {
        UserModel::new(raw.variant, raw.coords)
    }
}

impl From<UserModel> for RawModel {
    fn from(model: UserModel) -> Self {
        RawModel { variant: model.variant, coords: model.coords }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_strings() {
        let v = ItemVector::from_bit_str("a", "0110").unwrap();
        assert_eq!(v.bits(), &[false, true, true, false]);
        assert_eq!(v.bit_string(), "0110");
        assert!(ItemVector::from_bit_str("a", "01x0").is_err());
    }

    #[test]
    fn model_validation() {
        assert!(UserModel::new(Variant::Binary, vec![0, 1, -1]).is_err());
        assert!(UserModel::new(Variant::Ternary, vec![0, 1, -1]).is_ok());
        assert!(UserModel::new(Variant::Ternary, vec![2]).is_err());
    }

    #[test]
    fn codes_and_embedding() {
        let b = UserModel::binary(&[true, false, true]);
        assert_eq!(b.code(), "101");
        let t = b.to_ternary();
        assert_eq!(t.coords(), &[1, -1, 1]);
        assert_eq!(t.code(), "+-+");
        assert_eq!(UserModel::from_code(Variant::Ternary, "+-0").unwrap().coords(), &[1, -1, 0]);
        assert_eq!(UserModel::from_code(Variant::Binary, "101").unwrap(), b);
        assert!(UserModel::from_code(Variant::Binary, "1-1").is_err());
    }

    #[test]
    fn lexicographic_order() {
        let a = UserModel::ternary(vec![-1, 1]).unwrap();
        let b = UserModel::ternary(vec![0, -1]).unwrap();
        assert!(a < b);
    }
}
