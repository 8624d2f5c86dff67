//! Flat key-value configuration files mirroring the command-line flags.
//!
//! ```text
//! # comment
//! kappa = 0.2
//! delta = 0.01
//! backend = gauss
//! ```
//!
//! Flags given on the command line take precedence; unknown keys are rejected.

use std::collections::BTreeMap;
use std::path::Path;

pub const KNOWN_KEYS: &[&str] = &[
    "backend", "tol", "seed", "workers", "force", "kappa", "delta", "rounds", "l",
    "resolution", "eps", "r", "gates", "trials", "out", "csv",
];

#[derive(Debug, Default, Clone)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        Config::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Config, String> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected 'key = value'", lineno + 1))?;
            let key = k.trim().to_lowercase();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(format!("line {}: unknown key '{key}'", lineno + 1));
            }
            values.insert(key, v.trim().to_string());
        }
        Ok(Config { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    pub fn get_parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, String> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| format!("config key '{key}': cannot parse '{v}'")),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects_unknown_keys() {
        let c = Config::parse("kappa = 0.2\n# comment\ndelta = 0.01\n").unwrap();
        assert_eq!(c.get("kappa"), Some("0.2"));
        assert_eq!(c.get_parsed::<f64>("delta").unwrap(), Some(0.01));
        assert!(Config::parse("wibble = 3\n").is_err());
        assert!(Config::parse("kappa 0.2\n").is_err());
    }
}
