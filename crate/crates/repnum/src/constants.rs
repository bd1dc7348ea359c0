//! The fitted-constants file: one `key = value # provenance` per line.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

pub const DEFAULT_PATH: &str = "./repnum-constants.txt";
pub const FORMAT_VERSION: u32 = 1;

/// Keys written by calibration.
pub mod keys {
    pub const VERSION: &str = "format_version";
    /// Slope for the `r1 - r1*` gap bound.
    pub const GAP_C: &str = "gap_c";
    pub const GAMMA1: &str = "gamma1";
    pub const GAMMA2: &str = "gamma2";
    pub const SECONDARY_H: &str = "secondary_h";
    pub const SECONDARY_H_SPREAD: &str = "secondary_h_spread";
    pub const SHAPE_MAX: &str = "shape_max";
    pub const TAU_GROWTH_MAX: &str = "tau_growth_max";
    pub const TAU_GROWTH_ARG: &str = "tau_growth_arg";

    pub const FITTED: [&str; 8] =
        [GAP_C, GAMMA1, GAMMA2, SECONDARY_H, SECONDARY_H_SPREAD, SHAPE_MAX, TAU_GROWTH_MAX, TAU_GROWTH_ARG];
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub value: f64,
    pub provenance: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Constants {
    entries: BTreeMap<String, Entry>,
}

#[derive(Debug)]
pub enum ConstantsError {
    Missing(PathBuf),
    Io(io::Error),
    Parse { line: usize, message: String },
    MissingKey(String),
}

impl fmt::Display for ConstantsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstantsError::Missing(p) => {
                write!(f, "constants file {} not found; run `repnum calibrate` first", p.display())
            }
            ConstantsError::Io(e) => write!(f, "constants file: {e}"),
            ConstantsError::Parse { line, message } => write!(f, "constants file line {line}: {message}"),
            ConstantsError::MissingKey(k) => {
                write!(f, "constants file has no `{k}`; run `repnum calibrate` to refit")
            }
        }
    }
}

impl std::error::Error for ConstantsError {}

impl Constants {
    pub fn parse(text: &str) -> Result<Self, ConstantsError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let (body, provenance) = match raw.split_once('#') {
                Some((b, p)) => (b, p.trim()),
                None => (raw, ""),
            };
            if body.trim().is_empty() {
                continue;
            }
            let err = |message: String| ConstantsError::Parse { line: i + 1, message };
            let (key, value) = body.split_once('=').ok_or_else(|| err("expected `key = value`".into()))?;
            let key = key.trim();
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(err(format!("bad key `{key}`")));
            }
            let value: f64 = value.trim().parse().map_err(|_| err(format!("bad number `{}`", value.trim())))?;
            entries.insert(key.to_string(), Entry { value, provenance: provenance.to_string() });
        }
        Ok(Constants { entries })
    }

    pub fn load(path: &Path) -> Result<Self, ConstantsError> {
        match fs::read_to_string(path) {
            Ok(text) => Self::parse(&text),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Err(ConstantsError::Missing(path.to_path_buf())),
            Err(e) => Err(ConstantsError::Io(e)),
        }
    }

    pub fn save(&self, path: &Path) -> io::Result<()> {
        fs::write(path, self.to_string())
    }

    pub fn set(&mut self, key: &str, value: f64, provenance: impl Into<String>) {
        self.entries.insert(key.to_string(), Entry { value, provenance: provenance.into() });
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.entries.get(key).map(|e| e.value)
    }

    pub fn require(&self, key: &str) -> Result<f64, ConstantsError> {
        self.get(key).ok_or_else(|| ConstantsError::MissingKey(key.to_string()))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &Entry)> {
        self.entries.iter().map(|(k, e)| (k.as_str(), e))
    }
}

impl fmt::Display for Constants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, e) in &self.entries {
            // Debug output of f64 is the shortest decimal that parses back to the same value.
            if e.provenance.is_empty() {
                writeln!(f, "{k} = {:?}", e.value)?;
            } else {
                writeln!(f, "{k} = {:?} # {}", e.value, e.provenance)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut c = Constants::default();
        c.set("gamma2", 0.1 + 0.2, "fit");
        c.set("x", 1e300, "");
        let back = Constants::parse(&c.to_string()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.get("gamma2"), Some(0.1 + 0.2));
    }

    #[test]
    fn comments_and_errors() {
        let c = Constants::parse("# header\n\n a_b = 2.5 # from somewhere\n").unwrap();
        assert_eq!(c.get("a_b"), Some(2.5));
        assert!(matches!(Constants::parse("k 2"), Err(ConstantsError::Parse { line: 1, .. })));
        assert!(matches!(Constants::parse("k = two"), Err(ConstantsError::Parse { .. })));
        assert!(c.require("nope").is_err());
    }
}
