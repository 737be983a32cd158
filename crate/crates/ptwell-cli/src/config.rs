//! Key=value configuration files. Lines hold `key = value` pairs, `#`
//! starts a comment, blank lines are ignored. Keys use the long flag names
//! (`gamma-min`, `out-states`, ...). Resolution precedence everywhere is
//! flags > config file > built-in defaults.

use crate::CliError;
use std::collections::HashMap;
use std::path::Path;

#[derive(Debug, Default)]
pub struct Config {
    values: HashMap<String, String>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        let mut values = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Usage(format!(
                    "config {}:{}: expected `key = value`, got `{raw}`",
                    path.display(),
                    lineno + 1
                )));
            };
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { values })
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("config key `{key}`: cannot parse `{raw}`"))),
        }
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.get(key)
    }

    pub fn get_usize(&self, key: &str) -> Result<Option<usize>, CliError> {
        self.get(key)
    }

    pub fn get_string(&self, key: &str) -> Option<String> {
        self.values.get(key).cloned()
    }
}

/// Resolves one value through the precedence chain; a missing required
/// value is a usage error naming the flag.
pub fn resolve<T>(
    flag: Option<T>,
    from_config: Result<Option<T>, CliError>,
    default: Option<T>,
    name: &str,
) -> Result<T, CliError> {
    if let Some(v) = flag {
        return Ok(v);
    }
    if let Some(v) = from_config? {
        return Ok(v);
    }
    default.ok_or_else(|| CliError::Usage(format!("missing required value --{name}")))
}
