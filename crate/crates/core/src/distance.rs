//! The two item-to-user distances.

use crate::error::{Error, Result};
use crate::vector::{ItemVector, UserModel, Variant};

fn check_dims(item: &ItemVector, model: &UserModel) -> Result<()> {
    if item.dim() != model.dim() {
        return Err(Error::DimensionMismatch { expected: model.dim(), found: item.dim() });
    }
    Ok(())
}

/// Number of coordinates where the item and a binary model differ.
pub fn hamming(item: &ItemVector, model: &UserModel) -> Result<usize> {
    if model.variant() != Variant::Binary {
        return Err(Error::domain("the Hamming distance needs a binary model"));
    }
    check_dims(item, model)?;
    Ok(item
        .bits()
        .iter()
        .zip(model.coords())
        .filter(|(&b, &x)| b as i8 != x)
        .count())
}

/// Don't-care distance: counts coordinates with `v=1, x=-1` or `v=0, x=1`.
/// Zero coordinates of `x` never contribute.
pub fn ternary_distance(item: &ItemVector, model: &UserModel) -> Result<usize> {
    if model.variant() != Variant::Ternary {
        return Err(Error::domain("the don't-care distance needs a ternary model"));
    }
    check_dims(item, model)?;
    Ok(item
        .bits()
        .iter()
        .zip(model.coords())
        .filter(|(&b, &x)| penalized(b, x))
        .count())
}

/// Dispatches on the model variant.
pub fn distance(item: &ItemVector, model: &UserModel) -> Result<usize> {
    match model.variant() {
        Variant::Binary => hamming(item, model),
        Variant::Ternary => ternary_distance(item, model),
    }
}

/// Ternary coordinate contribution (`x` in `{-1,0,1}`).
#[inline]
pub(crate) fn penalized(bit: bool, x: i8) -> bool {
    match x {
        1 => !bit,
        0 => false,
        _ => bit,
    }
}

/// Binary coordinate contribution (`x` in `{0,1}`).
#[inline]
pub(crate) fn binary_mismatch(bit: bool, x: i8) -> bool {
    bit as i8 != x
}
