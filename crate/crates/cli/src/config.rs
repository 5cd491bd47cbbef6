//! `key = value` config files. Command-line flags override every key.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};

pub const KEYS: [&str; 13] = [
    "prime", "seed", "trials", "json", "confirmations", "max-primes", "n", "a", "b", "m", "r", "out", "max-cols",
];

#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("line {}: expected key=value, got {raw:?}", lineno + 1);
            };
            let key = key.trim().replace('_', "-");
            if !KEYS.contains(&key.as_str()) {
                bail!("line {}: unknown key {key:?} (known: {})", lineno + 1, KEYS.join(", "));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| anyhow::anyhow!("config key {key}: {e}")),
        }
    }

    pub fn get_range<T: std::str::FromStr + Copy>(&self, key: &str) -> Result<Option<(T, T)>>
    where
        T::Err: std::fmt::Display,
    {
        self.values.get(key).map(|v| parse_range(v)).transpose()
    }
}

/// `7` or `lo..hi` (inclusive).
pub fn parse_range<T: std::str::FromStr + Copy>(text: &str) -> Result<(T, T)>
where
    T::Err: std::fmt::Display,
{
    let one = |s: &str| -> Result<T> { s.trim().parse().map_err(|e| anyhow::anyhow!("bad bound {s:?}: {e}")) };
    match text.split_once("..") {
        Some((lo, hi)) => Ok((one(lo)?, one(hi.trim_start_matches('='))?)),
        None => {
            let x = one(text)?;
            Ok((x, x))
        }
    }
}
