//! Plain-text `key = value` configuration files.
//!
//! One setting per line, `#` starts a comment, lists are comma-separated.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Setting {
    pub key: String,
    pub value: String,
    /// 1-based.
    pub line: usize,
}

impl Setting {
    pub fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            message: format!("{}: {}", self.key, message.into()),
        }
    }

    pub fn parse<T: std::str::FromStr>(&self) -> Result<T> {
        self.value
            .parse()
            .map_err(|_| self.error(format!("cannot parse {:?}", self.value)))
    }

    /// Comma-separated items, trimmed, empties dropped.
    pub fn list(&self) -> Vec<String> {
        self.value
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(String::from)
            .collect()
    }
}

pub fn parse_settings(text: &str) -> Result<Vec<Setting>> {
    let mut out: Vec<Setting> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: i + 1,
            message: format!("expected `key = value`, got {line:?}"),
        })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(Error::Parse {
                line: i + 1,
                message: "empty key".into(),
            });
        }
        if let Some(prev) = out.iter().find(|s| s.key == key) {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("{key} already set on line {}", prev.line),
            });
        }
        out.push(Setting {
            key: key.to_string(),
            value: value.trim().to_string(),
            line: i + 1,
        });
    }
    Ok(out)
}
