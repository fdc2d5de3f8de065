use serde::{Deserialize, Serialize};

use crate::distance::distance;
use crate::error::{Error, Result};
use crate::rating::distance_to_star;
use crate::scale::{AttributeSpace, RatingScale};
use crate::vector::{ItemVector, UserModel};

/// Predicted star level of an item: the model's distance to it (Hamming or
/// don't-care, by variant) mapped back onto the scale.
pub fn predict(model: &UserModel, item: &ItemVector, space: &AttributeSpace) -> Result<usize> {
    if model.dim() != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), found: model.dim() });
    }
    distance_to_star(distance(item, model)?, space)
}

/// Mean absolute error in level units and in raw rating units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mae {
    pub levels: f64,
    pub raw: f64,
}

pub fn mean_absolute_error(predicted: &[usize], actual: &[usize], scale: &RatingScale) -> Result<Mae> {
    if predicted.len() != actual.len() {
        return Err(Error::domain(format!(
            "{} predictions for {} actual ratings",
            predicted.len(),
            actual.len()
        )));
    }
    if predicted.is_empty() {
        return Err(Error::domain("mean absolute error of an empty set"));
    }
    let total: usize = predicted.iter().zip(actual).map(|(&p, &a)| p.abs_diff(a)).sum();
    let levels = total as f64 / predicted.len() as f64;
    Ok(Mae { levels, raw: levels * scale.step() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(n: usize) -> AttributeSpace {
        AttributeSpace::anonymous(n, RatingScale::whole_stars(5).unwrap()).unwrap()
    }

    #[test]
    fn worked_example() {
        // 7 mismatches out of 20
        let item = ItemVector::new("i", vec![false; 20]);
        let mut bits = vec![false; 20];
        bits[..7].iter_mut().for_each(|b| *b = true);
        assert_eq!(predict(&UserModel::binary(&bits), &item, &space(20)).unwrap(), 4);
    }

    #[test]
    fn identity_and_complement() {
        let item = ItemVector::from_bit_str("i", "10110").unwrap();
        let same = UserModel::binary(item.bits());
        let flipped: Vec<bool> = item.bits().iter().map(|b| !b).collect();
        assert_eq!(predict(&same, &item, &space(5)).unwrap(), 5);
        assert_eq!(predict(&UserModel::binary(&flipped), &item, &space(5)).unwrap(), 1);
        assert!(predict(&same, &item, &space(4)).is_err());
    }

    #[test]
    fn mae_examples() {
        let scale = RatingScale::whole_stars(5).unwrap();
        assert_eq!(mean_absolute_error(&[3, 4], &[3, 4], &scale).unwrap().levels, 0.0);
        assert_eq!(mean_absolute_error(&[1, 2, 3, 4, 5], &[1, 2, 3, 4, 4], &scale).unwrap().levels, 0.2);
        assert_eq!(mean_absolute_error(&[1, 1], &[5, 5], &scale).unwrap().levels, 4.0);
        assert!(mean_absolute_error(&[], &[], &scale).is_err());
        assert!(mean_absolute_error(&[1], &[1, 2], &scale).is_err());
        let half = RatingScale::half_stars();
        let mae = mean_absolute_error(&[1, 3], &[2, 3], &half).unwrap();
        assert_eq!(mae.levels, 0.5);
        assert_eq!(mae.raw, 0.25);
    }
}
