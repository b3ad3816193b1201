//! Flat `key = value` configuration files.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use anyhow::{Context, Result};

use crate::UsageError;

/// Every key any subcommand understands. Keys are the long flag names;
/// underscores are accepted in place of dashes.
pub const KNOWN_KEYS: &[&str] = &[
    "d",
    "ell",
    "R",
    "sigma",
    "lambda",
    "omega",
    "method",
    "eps",
    "tol",
    "d-list",
    "ell-list",
    "omega-min",
    "omega-max",
    "omega-steps",
    "out",
    "preset",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| UsageError(format!("config line {}: expected `key = value`, got {raw:?}", i + 1)))?;
            let key = key.trim().replace('_', "-");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(UsageError(format!("config line {}: unknown key {key:?}", i + 1)).into());
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Config { values })
    }

    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(Config::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading config {}", p.display()))?;
                Config::parse(&text)
            }
        }
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| UsageError(format!("config key {key}: cannot parse {v:?}")).into()),
        }
    }
}

/// Flag value if given, else the config value, else nothing.
pub fn layered<T: FromStr>(flag: Option<T>, config: &Config, key: &str) -> Result<Option<T>> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => config.get(key),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_underscores() {
        let c = Config::parse("# header\nsigma = 2 # wide\nomega_steps=10\n\n").unwrap();
        assert_eq!(c.get::<f64>("sigma").unwrap(), Some(2.0));
        assert_eq!(c.get::<usize>("omega-steps").unwrap(), Some(10));
        assert_eq!(c.get::<f64>("lambda").unwrap(), None);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_lines() {
        assert!(Config::parse("colour = red").is_err());
        assert!(Config::parse("sigma 2").is_err());
        assert!(Config::parse("sigma = two").unwrap().get::<f64>("sigma").is_err());
    }

    #[test]
    fn flag_wins_over_config() {
        let c = Config::parse("sigma = 2").unwrap();
        assert_eq!(layered(Some(3.0), &c, "sigma").unwrap(), Some(3.0));
        assert_eq!(layered(None::<f64>, &c, "sigma").unwrap(), Some(2.0));
    }
}
