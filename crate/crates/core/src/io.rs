//! JSON poset documents and subset notation.
//!
//! A document looks like
//!
//! ```json
//! { "elements": ["a", "b"], "covers": [["a", "b"]], "sets": { "A": ["b"] } }
//! ```
//!
//! `sets` is optional and holds named subsets as element-name lists.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::poset::FinitePoset;
use crate::subset::SubsetMask;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetDocument {
    pub elements: Vec<String>,
    #[serde(default)]
    pub covers: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sets: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("field `{field}`: {source}")]
    Invalid {
        field: &'static str,
        #[source]
        source: Error,
    },
}

impl PosetDocument {
    pub fn parse(text: &str) -> std::result::Result<Self, DocumentError> {
        serde_json::from_str(text).map_err(|e| DocumentError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn from_poset(space: &FinitePoset) -> Self {
        PosetDocument {
            elements: space.labels().to_vec(),
            covers: space
                .covers()
                .iter()
                .map(|&(lo, hi)| (space.label(lo).to_owned(), space.label(hi).to_owned()))
                .collect(),
            sets: BTreeMap::new(),
        }
    }

    pub fn with_sets(mut self, space: &FinitePoset, sets: &BTreeMap<String, SubsetMask>) -> Self {
        self.sets = sets
            .iter()
            .map(|(name, s)| {
                let labels = s.labels(space).into_iter().map(str::to_owned).collect();
                (name.clone(), labels)
            })
            .collect();
        self
    }

    pub fn build(&self) -> std::result::Result<(FinitePoset, BTreeMap<String, SubsetMask>), DocumentError> {
        let covers: Vec<(&str, &str)> = self
            .covers
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        let labels: Vec<&str> = self.elements.iter().map(String::as_str).collect();
        let space = FinitePoset::from_covers(&labels, &covers).map_err(|source| DocumentError::Invalid {
            field: match source {
                Error::DuplicateLabel(_) | Error::TooLarge { .. } => "elements",
                _ => "covers",
            },
            source,
        })?;
        let sets = self
            .sets
            .iter()
            .map(|(name, members)| {
                SubsetMask::from_labels(&space, members)
                    .map(|m| (name.clone(), m))
                    .map_err(|source| DocumentError::Invalid { field: "sets", source })
            })
            .collect::<std::result::Result<_, _>>()?;
        Ok((space, sets))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes") + "\n"
    }
}

/// Parses a subset written as a JSON array of names, `{a,b}`, a 0/1 string
/// of the space's length, or the name of a set in `named`.
pub fn parse_subset(
    space: &FinitePoset,
    named: &BTreeMap<String, SubsetMask>,
    text: &str,
) -> Result<SubsetMask> {
    let t = text.trim();
    if let Some(s) = named.get(t) {
        return Ok(*s);
    }
    if t.starts_with('[') {
        let names: Vec<String> =
            serde_json::from_str(t).map_err(|_| Error::UnknownElement(t.to_owned()))?;
        return SubsetMask::from_labels(space, &names);
    }
    if let Some(inner) = t.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
        let names: Vec<&str> = inner
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        return SubsetMask::from_labels(space, &names);
    }
    if !t.is_empty() && t.chars().all(|c| c == '0' || c == '1') {
        let flags: Vec<bool> = t.chars().map(|c| c == '1').collect();
        return SubsetMask::from_bools(space, &flags);
    }
    if t.is_empty() && space.is_empty() {
        return Ok(SubsetMask::empty(space));
    }
    Err(Error::UnknownElement(t.to_owned()))
}

/// Parses a k-partition written as a digit string (base 36) in element order.
pub fn parse_partition(space: &FinitePoset, k: usize, text: &str) -> Result<crate::KPartition> {
    let colors = text
        .trim()
        .chars()
        .map(|c| c.to_digit(36).map(|d| d as usize).ok_or_else(|| Error::UnknownElement(c.to_string())))
        .collect::<Result<Vec<_>>>()?;
    crate::KPartition::new(space, k, colors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::chain;

    #[test]
    fn round_trip() {
        let doc = PosetDocument::parse(r#"{"elements":["a","b","c"],"covers":[["a","b"],["b","c"]],"sets":{"T":["c"]}}"#).unwrap();
        let (space, sets) = doc.build().unwrap();
        assert_eq!(space.len(), 3);
        assert_eq!(sets["T"].to_bit_string(), "001");
        let again = PosetDocument::from_poset(&space).with_sets(&space, &sets);
        assert_eq!(again, doc);
        assert_eq!(PosetDocument::parse(&again.to_json()).unwrap(), doc);
    }

    #[test]
    fn errors_carry_context() {
        let err = PosetDocument::parse("{\n \"elements\": [1]\n}").unwrap_err();
        assert!(matches!(err, DocumentError::Syntax { line: 2, .. }), "{err}");
        let cyc = PosetDocument::parse(r#"{"elements":["a","b"],"covers":[["a","b"],["b","a"]]}"#)
            .unwrap()
            .build()
            .unwrap_err();
        assert!(matches!(cyc, DocumentError::Invalid { field: "covers", source: Error::Cycle(..) }));
        let dup = PosetDocument::parse(r#"{"elements":["a","a"]}"#).unwrap().build().unwrap_err();
        assert!(matches!(dup, DocumentError::Invalid { field: "elements", .. }));
    }

    #[test]
    fn subset_notations() {
        let l2 = chain(2);
        let named = BTreeMap::new();
        let want = SubsetMask::from_indices(&l2, [1]).unwrap();
        assert_eq!(parse_subset(&l2, &named, "{1}").unwrap(), want);
        assert_eq!(parse_subset(&l2, &named, r#"["1"]"#).unwrap(), want);
        assert_eq!(parse_subset(&l2, &named, "01").unwrap(), want);
        assert_eq!(parse_subset(&l2, &named, "{}").unwrap(), SubsetMask::empty(&l2));
        assert!(parse_subset(&l2, &named, "{7}").is_err());
        assert!(parse_subset(&l2, &named, "011").is_err());
    }

    #[test]
    fn partition_notation() {
        let l3 = chain(3);
        assert_eq!(parse_partition(&l3, 3, "012").unwrap().colors(), &[0, 1, 2]);
        assert!(parse_partition(&l3, 2, "012").is_err());
    }
}
