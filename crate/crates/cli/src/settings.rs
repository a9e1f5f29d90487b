//! Flat `key = value` settings. Later layers override earlier ones.

use std::collections::BTreeMap;

use crate::error::{config_err, CliError};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    map: BTreeMap<String, String>,
}

impl Settings {
    /// Parses one `key = value` per line; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut s = Settings::default();
        s.merge_text(text)?;
        Ok(s)
    }

    pub fn merge_text(&mut self, text: &str) -> Result<(), CliError> {
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = split_pair(line).map_err(|e| config_err(format!("line {}: {e}", no + 1)))?;
            self.set(k, v);
        }
        Ok(())
    }

    /// Applies a `KEY=VALUE` override.
    pub fn apply_override(&mut self, pair: &str) -> Result<(), CliError> {
        let (k, v) = split_pair(pair).map_err(|e| config_err(format!("--set {pair}: {e}")))?;
        self.set(k, v);
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) {
        self.map.insert(key.trim().to_string(), value.trim().to_string());
    }

    pub fn remove(&mut self, key: &str) -> Option<String> {
        self.map.remove(key)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(String::as_str)
    }

    pub fn as_map(&self) -> &BTreeMap<String, String> {
        &self.map
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.get(key).map(|v| parse_number(v).map_err(|e| config_err(format!("{key}: {e}")))).transpose()
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        Ok(self.f64(key)?.unwrap_or(default))
    }

    pub fn require_f64(&self, key: &str) -> Result<f64, CliError> {
        self.f64(key)?.ok_or_else(|| config_err(format!("missing {key}")))
    }

    pub fn usize(&self, key: &str) -> Result<Option<usize>, CliError> {
        self.get(key)
            .map(|v| v.parse::<usize>().map_err(|_| config_err(format!("{key}: expected a non-negative integer, got '{v}'"))))
            .transpose()
    }

    pub fn bool(&self, key: &str) -> Result<Option<bool>, CliError> {
        self.get(key)
            .map(|v| match v {
                "true" | "yes" | "1" => Ok(true),
                "false" | "no" | "0" => Ok(false),
                _ => Err(config_err(format!("{key}: expected true or false, got '{v}'"))),
            })
            .transpose()
    }

    /// Comma-separated list; an empty value gives an empty list.
    pub fn list(&self, key: &str) -> Option<Vec<String>> {
        self.get(key).map(|v| v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect())
    }

    pub fn to_text(&self) -> String {
        self.map.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}

fn split_pair(s: &str) -> Result<(&str, &str), String> {
    let (k, v) = s.split_once('=').ok_or("expected KEY=VALUE")?;
    if k.trim().is_empty() {
        return Err("empty key".into());
    }
    Ok((k.trim(), v.trim()))
}

/// A decimal number or a fraction `p/q`.
pub fn parse_number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| format!("bad number '{s}'"))?;
            let q: f64 = q.trim().parse().map_err(|_| format!("bad number '{s}'"))?;
            p / q
        }
        None => s.parse().map_err(|_| format!("bad number '{s}'"))?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_overrides_and_fractions() {
        let mut s = Settings::parse("# header\nmodel = merton\n t = 1/12 # monthly\n\nalphas=0.9, 0.99\n").unwrap();
        assert_eq!(s.get("model"), Some("merton"));
        assert!((s.require_f64("t").unwrap() - 1.0 / 12.0).abs() < 1e-16);
        assert_eq!(s.list("alphas").unwrap(), vec!["0.9", "0.99"]);
        s.apply_override("model=vg").unwrap();
        assert_eq!(s.get("model"), Some("vg"));
        assert!(s.apply_override("novalue").is_err());
        assert!(Settings::parse("= 3").is_err());
        s.set("x", "1/0");
        assert!(s.f64("x").is_err());
    }
}
