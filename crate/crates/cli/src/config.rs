//! `key = value` configuration files with `[section]` headers.
//!
//! Keys before the first header belong to the unnamed top-level section.
//! Full-line comments start with `#`. Unknown sections and keys are errors.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown section [{name}]")]
    UnknownSection { line: usize, name: String },
    #[error("line {line}: unknown key '{key}' in {section}")]
    UnknownKey { line: usize, section: String, key: String },
    #[error("line {line}: duplicate key '{key}' in {section}")]
    DuplicateKey { line: usize, section: String, key: String },
    #[error("line {line}: invalid value for '{key}': {msg}")]
    Invalid { line: usize, key: String, msg: String },
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
}

/// Accepted keys per section; `""` is the top level.
pub const SCHEMA: &[(&str, &[&str])] = &[
    ("", &["seed", "size"]),
    ("array", &["variant", "rows", "cols", "vdd", "t_clk_ns"]),
    ("maxmin", &["mode", "encoding", "width", "words", "batch"]),
    ("compare", &["size", "calibration", "scaling_exponent"]),
    ("netlist", &["ops", "sa_delay_ns", "library"]),
    ("simulate", &["ops", "words"]),
    ("cost", &["charge", "leak", "gate", "bitline", "bitline_load"]),
];

fn section_label(s: &str) -> String {
    if s.is_empty() {
        "top level".to_string()
    } else {
        format!("[{s}]")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Config {
    values: BTreeMap<(String, String), (usize, String)>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Config::default();
        let mut section = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            if let Some(rest) = content.strip_prefix('[') {
                let name = rest.strip_suffix(']').ok_or_else(|| ConfigError::Syntax {
                    line,
                    msg: format!("unterminated section header '{content}'"),
                })?;
                let name = name.trim().to_ascii_lowercase();
                if name.is_empty() || !SCHEMA.iter().any(|(s, _)| *s == name) {
                    return Err(ConfigError::UnknownSection { line, name });
                }
                section = name;
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line,
                msg: format!("expected 'key = value', got '{content}'"),
            })?;
            let key = key.trim().to_ascii_lowercase();
            let allowed = SCHEMA
                .iter()
                .find(|(s, _)| *s == section)
                .map_or(&[][..], |(_, k)| *k);
            if !allowed.contains(&key.as_str()) {
                return Err(ConfigError::UnknownKey {
                    line,
                    section: section_label(&section),
                    key,
                });
            }
            let slot = (section.clone(), key.clone());
            if cfg.values.contains_key(&slot) {
                return Err(ConfigError::DuplicateKey {
                    line,
                    section: section_label(&section),
                    key,
                });
            }
            cfg.values.insert(slot, (line, value.trim().to_string()));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?;
        Self::parse(&text)
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.values
            .get(&(section.to_string(), key.to_string()))
            .map(|(_, v)| v.as_str())
    }

    /// Parsed value of `section.key`, if present.
    pub fn parsed<T>(&self, section: &str, key: &str) -> Result<Option<T>, ConfigError>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        match self.values.get(&(section.to_string(), key.to_string())) {
            None => Ok(None),
            Some((line, v)) => v.parse().map(Some).map_err(|e: T::Err| ConfigError::Invalid {
                line: *line,
                key: key.to_string(),
                msg: e.to_string(),
            }),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_and_top_level_keys() {
        let cfg = Config::parse(
            "seed = 7\n# comment\n[array]\nvariant = and_st\nrows=64\n\n[netlist]\nops = write 0 1010; read 0\n",
        )
        .unwrap();
        assert_eq!(cfg.parsed::<u64>("", "seed").unwrap(), Some(7));
        assert_eq!(cfg.get("array", "variant"), Some("and_st"));
        assert_eq!(cfg.parsed::<usize>("array", "rows").unwrap(), Some(64));
        assert_eq!(cfg.get("netlist", "ops"), Some("write 0 1010; read 0"));
        assert_eq!(cfg.get("array", "cols"), None);
    }

    #[test]
    fn unknown_keys_and_sections_are_rejected() {
        assert_eq!(
            Config::parse("[array]\ncolour = red\n"),
            Err(ConfigError::UnknownKey {
                line: 2,
                section: "[array]".into(),
                key: "colour".into()
            })
        );
        assert!(matches!(
            Config::parse("[arrays]\n"),
            Err(ConfigError::UnknownSection { line: 1, .. })
        ));
        assert!(matches!(Config::parse("rows = 3\n"), Err(ConfigError::UnknownKey { .. })));
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(Config::parse("[array\n"), Err(ConfigError::Syntax { .. })));
        assert!(matches!(Config::parse("[array]\nrows\n"), Err(ConfigError::Syntax { .. })));
        assert!(matches!(
            Config::parse("[array]\nrows=1\nrows=2\n"),
            Err(ConfigError::DuplicateKey { line: 3, .. })
        ));
        let cfg = Config::parse("[array]\nrows = many\n").unwrap();
        assert!(matches!(
            cfg.parsed::<usize>("array", "rows"),
            Err(ConfigError::Invalid { line: 2, .. })
        ));
    }
}
