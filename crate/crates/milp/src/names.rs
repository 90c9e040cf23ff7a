//! Name mangling for file formats with restricted identifiers.
//!
//! Structured names such as `energy[3,17]` rarely fit a format's identifier
//! rules. When any name in a category is unusable, every name in that
//! category is replaced by a positional code and the originals are kept in a
//! [`NameMap`], which is written next to the model as JSON.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::FormatError;

/// Maps names as written in a file back to model names. Entries exist only
/// for names that were changed; everything else maps to itself.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NameMap {
    pub model: String,
    pub objective: String,
    pub columns: BTreeMap<String, String>,
    pub rows: BTreeMap<String, String>,
}

impl NameMap {
    pub fn column<'a>(&'a self, written: &'a str) -> &'a str {
        self.columns.get(written).map(String::as_str).unwrap_or(written)
    }

    pub fn row<'a>(&'a self, written: &'a str) -> &'a str {
        self.rows.get(written).map(String::as_str).unwrap_or(written)
    }

    pub fn is_identity(&self) -> bool {
        self.columns.is_empty() && self.rows.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("name map serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn write(&self, path: &Path) -> Result<(), FormatError> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self, FormatError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Returns the written form of each name: either `rename(name)` for every
/// entry (when all results are valid and distinct) or `{prefix}{index:07}`.
pub(crate) fn assign(
    originals: &[String],
    prefix: char,
    rename: impl Fn(&str) -> String,
    valid: impl Fn(&str) -> bool,
    reserved: &HashSet<String>,
) -> Vec<String> {
    let renamed: Vec<String> = originals.iter().map(|s| rename(s)).collect();
    let mut seen = HashSet::new();
    let ok = renamed
        .iter()
        .all(|s| valid(s) && !reserved.contains(s) && seen.insert(s.as_str()));
    if ok {
        renamed
    } else {
        (0..originals.len()).map(|k| format!("{prefix}{k:07}")).collect()
    }
}

pub(crate) fn record(map: &mut BTreeMap<String, String>, written: &[String], originals: &[String]) {
    for (w, o) in written.iter().zip(originals) {
        if w != o {
            map.insert(w.clone(), o.clone());
        }
    }
}

/// Fixed-format MPS identifiers: 1 to 8 printable characters, no blanks.
pub fn valid_mps_name(s: &str) -> bool {
    !s.is_empty() && s.len() <= 8 && s.chars().all(|c| c.is_ascii_graphic()) && !s.starts_with('$')
}

/// LP-text identifiers: the usual CPLEX character set, not starting with a
/// digit or a period, and never readable as a number.
pub fn valid_lp_name(s: &str) -> bool {
    const EXTRA: &str = "!\"#$%&()/,.;?@_`'{}|~";
    let Some(first) = s.chars().next() else {
        return false;
    };
    s.len() <= 255
        && !first.is_ascii_digit()
        && first != '.'
        && s.parse::<f64>().is_err()
        && s.chars().all(|c| c.is_ascii_alphanumeric() || EXTRA.contains(c))
        && !matches!(
            s.to_ascii_lowercase().as_str(),
            "free" | "inf" | "infinity" | "end" | "st" | "bounds" | "binary" | "binaries"
                | "general" | "generals" | "integers"
        )
}
