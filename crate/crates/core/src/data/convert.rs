//! Builds a single-user data set from a generic items CSV and ratings CSV.
//!
//! Items come either wide (an id column followed by one column per
//! attribute) or long (one `item, attribute, value` triple per row, as in
//! tag-relevance dumps). Values at or above the cutoff become a `1` bit.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::Read;
use std::path::Path;

use super::Dataset;
use crate::error::{Error, Result};
use crate::rating::RatingRecord;
use crate::scale::{AttributeSpace, RatingScale};
use crate::vector::ItemVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ItemsLayout {
    Wide,
    Long,
}

#[derive(Debug, Clone)]
pub struct ConvertOptions {
    /// User to extract; required when the ratings file holds several.
    pub user: Option<String>,
    pub layout: ItemsLayout,
    pub cutoff: f64,
    pub scale: RatingScale,
    pub item_column: String,
    pub user_column: String,
    pub rating_column: String,
    /// Long layout only.
    pub attribute_column: String,
    /// Long layout only.
    pub value_column: String,
    pub keep_empty_attributes: bool,
}

impl Default for ConvertOptions {
    fn default() -> Self {
        ConvertOptions {
            user: None,
            layout: ItemsLayout::Wide,
            cutoff: 0.5,
            scale: RatingScale::whole_stars(5).expect("static scale"),
            item_column: "item_id".into(),
            user_column: "user_id".into(),
            rating_column: "rating".into(),
            attribute_column: "attribute".into(),
            value_column: "value".into(),
            keep_empty_attributes: false,
        }
    }
}

pub fn convert_files(items: impl AsRef<Path>, ratings: impl AsRef<Path>, options: &ConvertOptions) -> Result<Dataset> {
    let open = |p: &Path| File::open(p).map_err(|e| Error::io(p, e));
    convert(open(items.as_ref())?, open(ratings.as_ref())?, options)
}

pub fn convert<R1: Read, R2: Read>(items: R1, ratings: R2, options: &ConvertOptions) -> Result<Dataset> {
    let (names, table) = match options.layout {
        ItemsLayout::Wide => read_wide(items, options)?,
        ItemsLayout::Long => read_long(items, options)?,
    };
    let (user_id, rated) = read_ratings(ratings, options)?;

    let space = AttributeSpace::new(names, options.scale.clone())?;
    let mut vectors = Vec::with_capacity(rated.len());
    let mut records = Vec::with_capacity(rated.len());
    for (item_id, raw) in rated {
        let bits = table
            .get(&item_id)
            .ok_or_else(|| Error::schema("items", format!("rated item {item_id:?} has no attribute row")))?;
        vectors.push(ItemVector::new(item_id.clone(), bits.clone()));
        let record = RatingRecord::new(item_id.clone(), raw, space.scale())
            .map_err(|e| Error::schema(format!("ratings: item {item_id:?}"), e.to_string()))?;
        records.push(record);
    }
    let dataset = Dataset::new(user_id, space, vectors, records)?;
    if options.keep_empty_attributes {
        Ok(dataset)
    } else {
        dataset.drop_empty_attributes()
    }
}

type AttributeTable = (Vec<String>, HashMap<String, Vec<bool>>);

fn column(headers: &csv::StringRecord, name: &str, file: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| Error::schema(file, format!("missing column `{name}`")))
}

fn parse_value(s: &str, context: impl FnOnce() -> String) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|e| Error::schema(context(), format!("{s:?}: {e}")))
}

fn read_wide<R: Read>(reader: R, options: &ConvertOptions) -> Result<AttributeTable> {
    let mut r = csv::Reader::from_reader(reader);
    let headers = r.headers().map_err(|e| Error::schema("items", e.to_string()))?.clone();
    let id_col = column(&headers, &options.item_column, "items")?;
    let attr_cols: Vec<usize> = (0..headers.len()).filter(|&c| c != id_col).collect();
    let names = attr_cols.iter().map(|&c| headers[c].to_string()).collect();
    let mut table = HashMap::new();
    for (k, rec) in r.records().enumerate() {
        let line = k + 2;
        let rec = rec.map_err(|e| Error::schema(format!("items: row {line}"), e.to_string()))?;
        let bits = attr_cols
            .iter()
            .map(|&c| parse_value(&rec[c], || format!("items: row {line}")).map(|v| v >= options.cutoff))
            .collect::<Result<Vec<_>>>()?;
        if table.insert(rec[id_col].to_string(), bits).is_some() {
            return Err(Error::schema(format!("items: row {line}"), format!("duplicate item {:?}", &rec[id_col])));
        }
    }
    Ok((names, table))
}

fn read_long<R: Read>(reader: R, options: &ConvertOptions) -> Result<AttributeTable> {
    let mut r = csv::Reader::from_reader(reader);
    let headers = r.headers().map_err(|e| Error::schema("items", e.to_string()))?.clone();
    let id_col = column(&headers, &options.item_column, "items")?;
    let attr_col = column(&headers, &options.attribute_column, "items")?;
    let value_col = column(&headers, &options.value_column, "items")?;

    let mut names: Vec<String> = Vec::new();
    let mut attr_index: HashMap<String, usize> = HashMap::new();
    let mut on: HashMap<String, HashSet<usize>> = HashMap::new();
    for (k, rec) in r.records().enumerate() {
        let line = k + 2;
        let rec = rec.map_err(|e| Error::schema(format!("items: row {line}"), e.to_string()))?;
        let attr = rec[attr_col].to_string();
        let j = *attr_index.entry(attr.clone()).or_insert_with(|| {
            names.push(attr);
            names.len() - 1
        });
        let value = parse_value(&rec[value_col], || format!("items: row {line}"))?;
        let entry = on.entry(rec[id_col].to_string()).or_default();
        if value >= options.cutoff {
            entry.insert(j);
        }
    }
    let n = names.len();
    let table = on.into_iter().map(|(id, set)| (id, (0..n).map(|j| set.contains(&j)).collect())).collect();
    Ok((names, table))
}

fn read_ratings<R: Read>(reader: R, options: &ConvertOptions) -> Result<(String, Vec<(String, f64)>)> {
    let mut r = csv::Reader::from_reader(reader);
    let headers = r.headers().map_err(|e| Error::schema("ratings", e.to_string()))?.clone();
    let user_col = column(&headers, &options.user_column, "ratings")?;
    let item_col = column(&headers, &options.item_column, "ratings")?;
    let rating_col = column(&headers, &options.rating_column, "ratings")?;

    let mut by_user: Vec<(String, Vec<(String, f64)>)> = Vec::new();
    for (k, rec) in r.records().enumerate() {
        let line = k + 2;
        let rec = rec.map_err(|e| Error::schema(format!("ratings: row {line}"), e.to_string()))?;
        let user = &rec[user_col];
        if options.user.as_deref().is_some_and(|u| u != user) {
            continue;
        }
        let raw = parse_value(&rec[rating_col], || format!("ratings: row {line}"))?;
        let pos = match by_user.iter().position(|(u, _)| u == user) {
            Some(p) => p,
            None => {
                by_user.push((user.to_string(), Vec::new()));
                by_user.len() - 1
            }
        };
        by_user[pos].1.push((rec[item_col].to_string(), raw));
    }
    match by_user.len() {
        0 => Err(Error::schema("ratings", match &options.user {
            Some(u) => format!("no ratings for user {u:?}"),
            None => "no ratings".to_string(),
        })),
        1 => Ok(by_user.pop().expect("one user")),
        k => Err(Error::schema("ratings", format!("{k} users present; choose one with the user option"))),
    }
}
