//! `key = value` configuration files, one pair per line, `#` starts a comment.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, CliResult};

#[derive(Debug, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(format!("reading {}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let mut values = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Parse(format!("config line {}: expected key = value", k + 1)))?;
            let key = key.trim().replace('_', "-");
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> CliResult<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.values
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|e| CliError::Parse(format!("config key '{key}' = '{v}': {e}")))
            })
            .transpose()
    }

    /// Flag value if given, else the config file value, else `default`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> CliResult<T>
    where
        T::Err: std::fmt::Display,
    {
        Ok(match flag {
            Some(v) => v,
            None => self.get(key)?.unwrap_or(default),
        })
    }

    pub fn pick_opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> CliResult<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        Ok(match flag {
            Some(v) => Some(v),
            None => self.get(key)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs_and_comments() {
        let c = Config::parse("# sweep\nn = 3\n\ngamma=0.25 # decay\ntotal_time = 2\n").unwrap();
        assert_eq!(c.get::<usize>("n").unwrap(), Some(3));
        assert_eq!(c.get::<f64>("gamma").unwrap(), Some(0.25));
        assert_eq!(c.get::<f64>("total-time").unwrap(), Some(2.0));
        assert_eq!(c.get::<f64>("nu").unwrap(), None);
        assert_eq!(c.pick(Some(5usize), "n", 1).unwrap(), 5);
        assert_eq!(c.pick(None, "n", 1usize).unwrap(), 3);
        assert_eq!(c.pick(None, "steps", 7usize).unwrap(), 7);
    }

    #[test]
    fn rejects_malformed() {
        assert!(Config::parse("just words").is_err());
        let c = Config::parse("n = three").unwrap();
        assert!(matches!(c.get::<usize>("n"), Err(CliError::Parse(_))));
    }
}
