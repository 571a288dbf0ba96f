//! Flat JSON configuration mirroring the long flags.
//!
//! Precedence is explicit flags, then the config file, then built-in
//! defaults. The file is a single flat object whose keys use the long flag
//! spellings, so `{"poly": "x^4", "qmax": 200000}` means the same thing as
//! `--poly x^4 --qmax 200000`.

use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::CliError;

const KNOWN_KEYS: &[&str] = &[
    "seed", "tolerance", "threads", "out",
    "poly", "qmax", "check", "factors", "group", "budget", "trials",
    "n", "q", "q-grid", "set", "export", "sample-cap", "power-degree",
    "wreath-n", "named", "gens", "symmetric", "samples", "report",
    "bivariate", "cross-check",
];

pub struct FileConfig {
    map: Map<String, Value>,
}

fn bad(key: &str, wanted: &str) -> CliError {
    CliError::Usage(format!("config key `{key}` must be {wanted}"))
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(FileConfig { map: Map::new() });
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        let Value::Object(map) = value else {
            return Err(CliError::Usage(format!(
                "config {}: expected a flat JSON object",
                path.display()
            )));
        };
        for key in map.keys() {
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!(
                    "config {}: unknown key `{key}`",
                    path.display()
                )));
            }
        }
        Ok(FileConfig { map })
    }

    pub fn u64(&self, flag: Option<u64>, key: &str) -> Result<Option<u64>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v.as_u64().map(Some).ok_or_else(|| bad(key, "a nonnegative integer")),
        }
    }

    pub fn u32(&self, flag: Option<u32>, key: &str) -> Result<Option<u32>, CliError> {
        match self.u64(flag.map(u64::from), key)? {
            None => Ok(None),
            Some(v) => u32::try_from(v).map(Some).map_err(|_| bad(key, "a 32-bit integer")),
        }
    }

    pub fn usize(&self, flag: Option<usize>, key: &str) -> Result<Option<usize>, CliError> {
        match self.u64(flag.map(|v| v as u64), key)? {
            None => Ok(None),
            Some(v) => usize::try_from(v).map(Some).map_err(|_| bad(key, "an integer")),
        }
    }

    pub fn string(&self, flag: Option<String>, key: &str) -> Result<Option<String>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v.as_str().map(|s| Some(s.to_string())).ok_or_else(|| bad(key, "a string")),
        }
    }

    pub fn path(&self, flag: Option<PathBuf>, key: &str) -> Result<Option<PathBuf>, CliError> {
        Ok(self.string(flag.map(|p| p.display().to_string()), key)?.map(PathBuf::from))
    }

    pub fn flag(&self, flag: bool, key: &str) -> Result<bool, CliError> {
        if flag {
            return Ok(true);
        }
        match self.map.get(key) {
            None => Ok(false),
            Some(v) => v.as_bool().ok_or_else(|| bad(key, "a boolean")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn config_file(body: &str) -> (tempfile::TempDir, PathBuf) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("config.json");
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(body.as_bytes()).unwrap();
        (dir, path)
    }

    #[test]
    fn flags_win_over_file_values() {
        let (_dir, path) = config_file(r#"{"qmax": 500, "poly": "x^2", "bivariate": true}"#);
        let cfg = FileConfig::load(Some(&path)).unwrap();
        assert_eq!(cfg.u64(Some(1000), "qmax").unwrap(), Some(1000));
        assert_eq!(cfg.u64(None, "qmax").unwrap(), Some(500));
        assert_eq!(cfg.string(None, "poly").unwrap().as_deref(), Some("x^2"));
        assert_eq!(cfg.string(None, "check").unwrap(), None);
        assert!(cfg.flag(false, "bivariate").unwrap());
        assert!(!cfg.flag(false, "cross-check").unwrap());
    }

    #[test]
    fn malformed_configs_are_usage_errors() {
        let (_dir, path) = config_file(r#"{"qqmax": 500}"#);
        assert!(matches!(FileConfig::load(Some(&path)), Err(CliError::Usage(_))));
        let (_dir, path) = config_file("[1, 2]");
        assert!(matches!(FileConfig::load(Some(&path)), Err(CliError::Usage(_))));
        let (_dir, path) = config_file(r#"{"qmax": "many"}"#);
        let cfg = FileConfig::load(Some(&path)).unwrap();
        assert!(matches!(cfg.u64(None, "qmax"), Err(CliError::Usage(_))));
    }
}
