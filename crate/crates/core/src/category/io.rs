//! JSON category files.
//!
//! ```json
//! {
//!   "name": "fibonacci",
//!   "labels": ["1", "tau"],
//!   "dual": [0, 1],
//!   "fusion": [[0,0,0], [0,1,1], [1,0,1], [1,1,0], [1,1,1]],
//!   "dims": [1.0, 1.618033988749895],
//!   "f_symbols": [{"key": [1,1,1,1,1,1], "re": -0.618, "im": 0.0}]
//! }
//! ```
//!
//! A fusion entry may carry an explicit multiplicity as a fourth element,
//! which must be 0 or 1. `name` and `f_symbols` are optional.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Category, FKey, FSymbolTable, FusionRing, Label, QuantumDims};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct FileEntry {
    key: Vec<i64>,
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Debug, Deserialize)]
struct CategoryFile {
    #[serde(default)]
    name: Option<String>,
    labels: Vec<String>,
    dual: Vec<i64>,
    fusion: Vec<Vec<i64>>,
    dims: Vec<f64>,
    #[serde(default)]
    f_symbols: Vec<FileEntry>,
}

fn to_label(x: i64, n: usize, what: &str) -> Result<Label> {
    if x < 0 || x as usize >= n {
        return Err(Error::Structure(format!("{what} refers to label {x} outside 0..{n}")));
    }
    Ok(Label(x as u8))
}

/// Parses a category from JSON text. Only structural invariants are checked.
pub fn parse_category(text: &str, fallback_name: &str) -> Result<Category> {
    let file: CategoryFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let n = file.labels.len();
    if file.dual.len() != n {
        return Err(Error::Structure(format!("{} dual entries for {n} labels", file.dual.len())));
    }
    let dual = file.dual.iter().map(|&d| to_label(d, n, "dual")).collect::<Result<Vec<_>>>()?;

    let mut triples = Vec::with_capacity(file.fusion.len());
    for t in &file.fusion {
        let mult = match t.len() {
            3 => 1,
            4 => t[3],
            _ => return Err(Error::Parse(format!("fusion entry {t:?} must have 3 or 4 elements"))),
        };
        if !(0..=1).contains(&mult) {
            return Err(Error::Structure(format!(
                "fusion entry {t:?} has multiplicity {mult}; only 0 or 1 is supported"
            )));
        }
        if mult == 1 {
            triples.push([to_label(t[0], n, "fusion")?, to_label(t[1], n, "fusion")?, to_label(t[2], n, "fusion")?]);
        }
    }
    let ring = FusionRing::new(dual, triples)?;

    let mut entries: BTreeMap<FKey, Complex64> = BTreeMap::new();
    for e in &file.f_symbols {
        if e.key.len() != 6 {
            return Err(Error::Parse(format!("F key {:?} must have 6 labels", e.key)));
        }
        let mut key = [Label::VACUUM; 6];
        for (slot, &x) in key.iter_mut().zip(&e.key) {
            *slot = to_label(x, n, "F key")?;
        }
        if entries.insert(key, Complex64::new(e.re, e.im)).is_some() {
            return Err(Error::Structure(format!("duplicate F key {:?}", e.key)));
        }
    }

    let name = file.name.unwrap_or_else(|| fallback_name.to_string());
    Category::new(name, file.labels, ring, QuantumDims::new(file.dims), FSymbolTable::new(n, entries))
}

/// Loads a category file. The file stem is used when the file has no `name`.
pub fn load_category(path: impl AsRef<Path>) -> Result<Category> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("category");
    parse_category(&text, stem)
}

/// Serializes a category to JSON with one fusion triple or F entry per line.
pub fn category_to_json(cat: &Category) -> String {
    let ring = cat.ring();
    let name = serde_json::to_string(cat.name()).expect("string serializes");
    let labels = compact(&cat.label_names().to_vec());
    let dual: Vec<i64> = cat.labels().map(|l| ring.dual(l).0 as i64).collect();
    let fusion: Vec<String> =
        ring.triples().into_iter().map(|t| compact(&t.iter().map(|l| l.0 as i64).collect::<Vec<_>>())).collect();
    let entries: Vec<String> = cat
        .fsymbols()
        .iter()
        .map(|(k, v)| compact(&FileEntry { key: k.iter().map(|l| l.0 as i64).collect(), re: v.re, im: v.im }))
        .collect();
    let block = |rows: &[String]| {
        if rows.is_empty() {
            "[]".to_string()
        } else {
            format!("[\n    {}\n  ]", rows.join(",\n    "))
        }
    };
    format!(
        "{{\n  \"name\": {name},\n  \"labels\": {labels},\n  \"dual\": {},\n  \"fusion\": {},\n  \"dims\": {},\n  \"f_symbols\": {}\n}}",
        compact(&dual),
        block(&fusion),
        compact(&cat.dims().as_slice().to_vec()),
        block(&entries),
    )
}

fn compact<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("value serializes")
}

pub fn save_category(cat: &Category, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, category_to_json(cat) + "\n").map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z2: &str = r#"{
        "labels": ["0", "1"], "dual": [0, 1],
        "fusion": [[0,0,0],[0,1,1],[1,0,1],[1,1,0]],
        "dims": [1.0, 1.0]
    }"#;

    #[test]
    fn parses_ring_only_file() {
        let cat = parse_category(Z2, "z2").unwrap();
        assert_eq!(cat.num_labels(), 2);
        assert_eq!(cat.name(), "z2");
        assert!(!cat.has_f_data());
    }

    #[test]
    fn rejects_non_involutive_dual() {
        let text = r#"{"labels":["0","a","b"],"dual":[0,2,0],"fusion":[],"dims":[1,1,1]}"#;
        let err = parse_category(text, "x").unwrap_err();
        assert_eq!(err.kind(), "structure");
    }

    #[test]
    fn rejects_multiplicity_two() {
        let text = r#"{"labels":["0"],"dual":[0],"fusion":[[0,0,0,2]],"dims":[1]}"#;
        assert_eq!(parse_category(text, "x").unwrap_err().kind(), "structure");
    }

    #[test]
    fn malformed_json_is_parse_error() {
        assert_eq!(parse_category("{labels: oops", "x").unwrap_err().kind(), "parse");
    }

    #[test]
    fn f_key_on_inadmissible_tree_is_rejected() {
        let text = r#"{"labels":["0","1"],"dual":[0,1],
            "fusion":[[0,0,0],[0,1,1],[1,0,1],[1,1,0]],"dims":[1,1],
            "f_symbols":[{"key":[1,1,1,1,1,1],"re":1.0,"im":0.0}]}"#;
        assert_eq!(parse_category(text, "x").unwrap_err().kind(), "structure");
    }
}
