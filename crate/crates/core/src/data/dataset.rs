//! Single-user data sets and their JSON file format.
//!
//! ```json
//! {
//!   "user_id": "u1",
//!   "scale": [1.0, 2.0, 3.0, 4.0, 5.0],
//!   "attributes": ["italian", "cheap", "outdoor"],
//!   "items": [{ "id": "r1", "bits": "101" }],
//!   "ratings": [{ "item_id": "r1", "raw": 4.0 }]
//! }
//! ```
//!
//! A rating may carry an optional `"drating": "p/q"` with the exact target
//! distance; synthetic distance-exact data sets use it.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rating::{DRating, RatingRecord};
use crate::scale::{AttributeSpace, RatingScale};
use crate::solver::FitInstance;
use crate::vector::ItemVector;

/// Items rated by one user, with exactly one rating per item.
///
/// `ratings()[k]` is the rating of `items()[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    user_id: String,
    space: AttributeSpace,
    items: Vec<ItemVector>,
    ratings: Vec<RatingRecord>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadOptions {
    /// Keep attribute columns that no item has.
    pub keep_empty_attributes: bool,
}

impl Dataset {
    /// Validates the invariants and aligns ratings with items.
    pub fn new(
        user_id: impl Into<String>,
        space: AttributeSpace,
        items: Vec<ItemVector>,
        ratings: Vec<RatingRecord>,
    ) -> Result<Self> {
        let user_id = user_id.into();
        let n = space.dim();
        let mut index = HashMap::with_capacity(items.len());
        for (k, item) in items.iter().enumerate() {
            if item.dim() != n {
                return Err(Error::schema(
                    format!("items[{k}] ({:?})", item.id),
                    format!("bit string has length {} but there are {n} attributes", item.dim()),
                ));
            }
            if index.insert(item.id.as_str(), k).is_some() {
                return Err(Error::schema(format!("items[{k}]"), format!("duplicate item id {:?}", item.id)));
            }
        }
        let mut slots: Vec<Option<RatingRecord>> = vec![None; items.len()];
        for (k, rating) in ratings.into_iter().enumerate() {
            let context = format!("ratings[{k}] ({:?})", rating.item_id);
            let &pos = index
                .get(rating.item_id.as_str())
                .ok_or_else(|| Error::schema(&context, "rating references an unknown item"))?;
            let level = space.scale().rating_to_level(rating.raw).map_err(|e| Error::schema(&context, e.to_string()))?;
            if level != rating.level {
                return Err(Error::schema(&context, format!("level {} does not match raw {}", rating.level, rating.raw)));
            }
            if let Some(t) = rating.target {
                DRating::new(t.value(), n).map_err(|e| Error::schema(&context, e.to_string()))?;
            }
            if slots[pos].is_some() {
                return Err(Error::schema(&context, "item is rated more than once"));
            }
            slots[pos] = Some(rating);
        }
        let ratings = slots
            .into_iter()
            .zip(&items)
            .map(|(slot, item)| {
                slot.ok_or_else(|| Error::schema(format!("item {:?}", item.id), "item has no rating"))
            })
            .collect::<Result<Vec<_>>>()?;
        if items.is_empty() {
            return Err(Error::schema("items", "a data set needs at least one rated item"));
        }
        Ok(Dataset { user_id, space, items, ratings })
    }

    pub fn user_id(&self) -> &str {
        &self.user_id
    }

    pub fn space(&self) -> &AttributeSpace {
        &self.space
    }

    pub fn items(&self) -> &[ItemVector] {
        &self.items
    }

    pub fn ratings(&self) -> &[RatingRecord] {
        &self.ratings
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Removes attributes that no item has.
    ///
    /// Data sets carrying exact d-ratings are left untouched: their targets
    /// are distances in the full space.
    pub fn drop_empty_attributes(self) -> Result<Self> {
        if self.ratings.iter().any(|r| r.target.is_some()) {
            return Ok(self);
        }
        let keep: Vec<usize> = (0..self.dim()).filter(|&j| self.items.iter().any(|it| it.bits()[j])).collect();
        if keep.len() == self.dim() {
            return Ok(self);
        }
        if keep.is_empty() {
            return Err(Error::schema("attributes", "no item has any attribute"));
        }
        let names = keep.iter().map(|&j| self.space.names()[j].clone()).collect();
        let space = AttributeSpace::new(names, self.space.scale().clone())?;
        let items = self.items.iter().map(|it| it.project(&keep)).collect();
        Ok(Dataset { user_id: self.user_id, space, items, ratings: self.ratings })
    }

    /// Fit instance over the items at `indices` (in the given order).
    pub fn fit_instance(&self, indices: &[usize]) -> Result<FitInstance> {
        let items = indices.iter().map(|&k| self.items[k].clone()).collect();
        let dratings = indices
            .iter()
            .map(|&k| self.ratings[k].drating(&self.space))
            .collect::<Result<Vec<_>>>()?;
        FitInstance::new(self.space.clone(), items, dratings)
    }

    /// Fit instance over every item.
    pub fn full_instance(&self) -> Result<FitInstance> {
        let all: Vec<usize> = (0..self.len()).collect();
        self.fit_instance(&all)
    }

    pub fn to_json(&self) -> String {
        let file = DatasetFile {
            user_id: self.user_id.clone(),
            scale: self.space.scale().raw_levels().to_vec(),
            attributes: self.space.names().to_vec(),
            items: self.items.iter().map(|it| ItemEntry { id: it.id.clone(), bits: it.bit_string() }).collect(),
            ratings: self
                .ratings
                .iter()
                .map(|r| RatingEntry { item_id: r.item_id.clone(), raw: r.raw, drating: r.target })
                .collect(),
        };
        let mut out = serde_json::to_string_pretty(&file).expect("data set serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str, options: LoadOptions) -> Result<Self> {
        from_json_with_context(text, "data set", options)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatasetFile {
    user_id: String,
    scale: Vec<f64>,
    attributes: Vec<String>,
    items: Vec<ItemEntry>,
    ratings: Vec<RatingEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ItemEntry {
    id: String,
    bits: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RatingEntry {
    item_id: String,
    raw: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    drating: Option<DRating>,
}

fn from_json_with_context(text: &str, context: &str, options: LoadOptions) -> Result<Dataset> {
    let file: DatasetFile = serde_json::from_str(text).map_err(|e| {
        Error::parse(context, format!("malformed JSON at line {} column {}: {e}", e.line(), e.column()))
    })?;
    let scale = RatingScale::new(file.scale).map_err(|e| Error::schema(format!("{context}: scale"), e.to_string()))?;
    let space = AttributeSpace::new(file.attributes, scale)
        .map_err(|e| Error::schema(format!("{context}: attributes"), e.to_string()))?;
    let mut seen = HashSet::new();
    let mut items = Vec::with_capacity(file.items.len());
    for (k, entry) in file.items.into_iter().enumerate() {
        let item = ItemVector::from_bit_str(entry.id, &entry.bits)
            .map_err(|e| Error::schema(format!("{context}: items[{k}]"), e.to_string()))?;
        if item.dim() != space.dim() {
            return Err(Error::schema(
                format!("{context}: items[{k}] ({:?})", item.id),
                format!("bit string has length {} but there are {} attributes", item.dim(), space.dim()),
            ));
        }
        if !seen.insert(item.id.clone()) {
            return Err(Error::schema(format!("{context}: items[{k}]"), format!("duplicate item id {:?}", item.id)));
        }
        items.push(item);
    }
    let mut ratings = Vec::with_capacity(file.ratings.len());
    for (k, entry) in file.ratings.into_iter().enumerate() {
        let mut record = RatingRecord::new(entry.item_id.clone(), entry.raw, space.scale()).map_err(|e| {
            Error::schema(format!("{context}: ratings[{k}] ({:?})", entry.item_id), e.to_string())
        })?;
        record.target = entry.drating;
        ratings.push(record);
    }
    let dataset = Dataset::new(file.user_id, space, items, ratings)
        .map_err(|e| prefix_context(e, context))?;
    if options.keep_empty_attributes {
        Ok(dataset)
    } else {
        dataset.drop_empty_attributes().map_err(|e| prefix_context(e, context))
    }
}

fn prefix_context(err: Error, context: &str) -> Error {
    match err {
        Error::Schema { context: inner, message } => Error::schema(format!("{context}: {inner}"), message),
        other => other,
    }
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    load_dataset_with(path, LoadOptions::default())
}

pub fn load_dataset_with(path: impl AsRef<Path>, options: LoadOptions) -> Result<Dataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_json_with_context(&text, &path.display().to_string(), options)
}

pub fn write_dataset(path: impl AsRef<Path>, dataset: &Dataset) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, dataset.to_json()).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"user_id":"u","scale":[1,2,3,4,5],"attributes":["a"],
        "items":[{"id":"i1","bits":"1"}],"ratings":[{"item_id":"i1","raw":4}]}"#;

    fn load(text: &str) -> Result<Dataset> {
        Dataset::from_json(text, LoadOptions::default())
    }

    #[test]
    fn minimal_file() {
        let d = load(MINIMAL).unwrap();
        assert_eq!(d.dim(), 1);
        assert_eq!(d.len(), 1);
        assert_eq!(d.ratings()[0].level, 4);
    }

    #[test]
    fn length_mismatch_names_item() {
        let text = r#"{"user_id":"u","scale":[1,2,3,4,5],"attributes":["a","b","c"],
            "items":[{"id":"pizza","bits":"01"}],"ratings":[{"item_id":"pizza","raw":4}]}"#;
        let err = load(text).unwrap_err();
        assert!(matches!(err, Error::Schema { .. }));
        assert!(err.to_string().contains("pizza"), "{err}");
        assert!(err.to_string().contains("length 2"), "{err}");
    }

    #[test]
    fn inadmissible_rating() {
        let text = r#"{"user_id":"u","scale":[0.5,1,1.5,2,2.5,3,3.5,4,4.5,5],"attributes":["a"],
            "items":[{"id":"m","bits":"1"}],"ratings":[{"item_id":"m","raw":3.7}]}"#;
        let err = load(text).unwrap_err();
        assert!(err.to_string().contains("3.7"), "{err}");
        assert!(err.to_string().contains("ratings[0]"), "{err}");
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = load("{\"user_id\": \"u\",\n  \"scale\": [1,2,}").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn duplicate_and_missing() {
        let dup = r#"{"user_id":"u","scale":[1,2],"attributes":["a"],
            "items":[{"id":"x","bits":"1"},{"id":"x","bits":"0"}],"ratings":[{"item_id":"x","raw":1}]}"#;
        assert!(load(dup).unwrap_err().to_string().contains("duplicate item id"));
        let unrated = r#"{"user_id":"u","scale":[1,2],"attributes":["a"],
            "items":[{"id":"x","bits":"1"},{"id":"y","bits":"0"}],"ratings":[{"item_id":"x","raw":1}]}"#;
        assert!(load(unrated).unwrap_err().to_string().contains("no rating"));
        let unknown = r#"{"user_id":"u","scale":[1,2],"attributes":["a"],
            "items":[{"id":"x","bits":"1"}],"ratings":[{"item_id":"x","raw":1},{"item_id":"z","raw":2}]}"#;
        assert!(load(unknown).unwrap_err().to_string().contains("unknown item"));
        let twice = r#"{"user_id":"u","scale":[1,2],"attributes":["a"],
            "items":[{"id":"x","bits":"1"}],"ratings":[{"item_id":"x","raw":1},{"item_id":"x","raw":2}]}"#;
        assert!(load(twice).unwrap_err().to_string().contains("more than once"));
    }

    #[test]
    fn empty_columns_dropped_unless_kept() {
        let text = r#"{"user_id":"u","scale":[1,2,3],"attributes":["a","b","c"],
            "items":[{"id":"x","bits":"100"},{"id":"y","bits":"101"}],
            "ratings":[{"item_id":"y","raw":3},{"item_id":"x","raw":1}]}"#;
        let d = load(text).unwrap();
        assert_eq!(d.space().names(), &["a".to_string(), "c".to_string()]);
        assert_eq!(d.items()[1].bit_string(), "11");
        // ratings are aligned with items
        assert_eq!(d.ratings()[0].item_id, "x");
        let kept = Dataset::from_json(text, LoadOptions { keep_empty_attributes: true }).unwrap();
        assert_eq!(kept.dim(), 3);
    }

    #[test]
    fn targets_round_trip() {
        let text = r#"{"user_id":"u","scale":[1,2,3],"attributes":["a","b"],
            "items":[{"id":"x","bits":"10"}],"ratings":[{"item_id":"x","raw":2,"drating":"3/2"}]}"#;
        let d = load(text).unwrap();
        // exact targets keep the full space
        assert_eq!(d.dim(), 2);
        assert_eq!(d.ratings()[0].target.unwrap().to_string(), "3/2");
        assert_eq!(load(&d.to_json()).unwrap(), d);
    }
}
