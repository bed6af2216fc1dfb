//! `key=value` config files and the flag/config/default merge.

use crate::CliError;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;
use std::str::FromStr;

/// Keys a config file may set; the same names as the long flags.
pub const KEYS: &[&str] = &[
    "kd", "kd-min", "kd-max", "points", "y0", "a", "x0", "tol", "out", "format", "svg", "fast", "kind", "x", "y",
    "x-min", "x-max", "y-min", "y-max", "nx", "ny", "a-min", "a-max", "a-points", "y0-min", "y0-max", "y0-points",
    "reps",
];

#[derive(Debug, Default, Clone)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", no + 1)))?;
            let k = k.trim().trim_start_matches("--").replace('_', "-");
            if !KEYS.contains(&k.as_str()) {
                return Err(CliError::Usage(format!("config line {}: unknown key '{k}'", no + 1)));
            }
            values.insert(k, v.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Flag value if given, else the config entry, else `default`.
    pub fn pick<T: FromConfig>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.raw(key) {
            Some(s) => T::from_config(s).map_err(|e| CliError::Usage(format!("config key {key}: {e}"))),
            None => Ok(default),
        }
    }

    pub fn pick_opt<T: FromConfig>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.raw(key)
            .map(|s| T::from_config(s).map_err(|e| CliError::Usage(format!("config key {key}: {e}"))))
            .transpose()
    }
}

pub trait FromConfig: Sized {
    fn from_config(s: &str) -> Result<Self, String>;
}

/// A real number; `2.5pi`, `pi` and `-0.1` are all accepted.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let (num, scale) = match t.strip_suffix("pi") {
        Some(rest) => (rest.trim_end_matches('*').trim(), PI),
        None => (t, 1.0),
    };
    let v = if num.is_empty() {
        1.0
    } else if num == "-" {
        -1.0
    } else {
        f64::from_str(num).map_err(|_| format!("'{s}' is not a number"))?
    };
    let v = v * scale;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

pub fn parse_real_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(parse_real).collect()
}

impl FromConfig for f64 {
    fn from_config(s: &str) -> Result<Self, String> {
        parse_real(s)
    }
}

impl FromConfig for Vec<f64> {
    fn from_config(s: &str) -> Result<Self, String> {
        parse_real_list(s)
    }
}

impl FromConfig for usize {
    fn from_config(s: &str) -> Result<Self, String> {
        s.trim().parse().map_err(|_| format!("'{s}' is not a count"))
    }
}

impl FromConfig for bool {
    fn from_config(s: &str) -> Result<Self, String> {
        match s.trim() {
            "true" | "1" | "yes" => Ok(true),
            "false" | "0" | "no" => Ok(false),
            _ => Err(format!("'{s}' is not a boolean")),
        }
    }
}

impl FromConfig for String {
    fn from_config(s: &str) -> Result<Self, String> {
        Ok(s.to_string())
    }
}

impl FromConfig for std::path::PathBuf {
    fn from_config(s: &str) -> Result<Self, String> {
        Ok(s.into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_with_pi() {
        assert_eq!(parse_real("2.5pi").unwrap(), 2.5 * PI);
        assert_eq!(parse_real("pi").unwrap(), PI);
        assert_eq!(parse_real("-pi").unwrap(), -PI);
        assert_eq!(parse_real("0.5*pi").unwrap(), 0.5 * PI);
        assert_eq!(parse_real("-0.1").unwrap(), -0.1);
        assert!(parse_real("x").is_err());
        assert!(parse_real("inf").is_err());
    }

    #[test]
    fn config_precedence() {
        let c = Config::parse("# comment\nkd-min = 1.5pi\npoints=10\ny0=0.1,0.2\n").unwrap();
        assert_eq!(c.pick(None, "kd-min", 0.0).unwrap(), 1.5 * PI);
        assert_eq!(c.pick(Some(3.0), "kd-min", 0.0).unwrap(), 3.0);
        assert_eq!(c.pick(None, "points", 5usize).unwrap(), 10);
        assert_eq!(c.pick(None, "y0", vec![]).unwrap(), vec![0.1, 0.2]);
        assert_eq!(c.pick(None, "tol", 1e-12).unwrap(), 1e-12);
        assert!(Config::parse("bogus=1").is_err());
        assert!(Config::parse("kd").is_err());
    }
}
