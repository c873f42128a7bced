use std::path::{Path, PathBuf};

use procsim::families::{self, MIN_DIM};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct JudgeSettings {
    pub endpoint: String,
    pub timeout_ms: u64,
    pub retries: u32,
    pub backoff_ms: u64,
    /// Maximum judge requests in flight.
    pub concurrency: usize,
}

impl Default for JudgeSettings {
    fn default() -> Self {
        let j = procsim::matchkit::JudgeConfig::default();
        Self {
            endpoint: j.endpoint,
            timeout_ms: j.timeout_ms,
            retries: j.retries,
            backoff_ms: j.backoff_ms,
            concurrency: 4,
        }
    }
}

impl JudgeSettings {
    pub fn client(&self) -> procsim::matchkit::JudgeConfig {
        procsim::matchkit::JudgeConfig {
            endpoint: self.endpoint.clone(),
            timeout_ms: self.timeout_ms,
            retries: self.retries,
            backoff_ms: self.backoff_ms,
        }
    }
}

/// The JSON config document. Every field is optional; command-line flags
/// override it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub output_dir: PathBuf,
    pub width: usize,
    pub height: usize,
    pub seed: u64,
    pub judge: JudgeSettings,
    /// Families used by `gallery`; `None` enables all of them.
    pub families: Option<Vec<String>>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            output_dir: PathBuf::from("out"),
            width: 512,
            height: 512,
            seed: 1,
            judge: JudgeSettings::default(),
            families: None,
        }
    }
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let cfg = match path {
            None => Config::default(),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", p.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::Usage(format!("malformed config {}: {e}", p.display())))?
            }
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        check_dims(self.width, self.height)?;
        if self.judge.concurrency == 0 {
            return Err(CliError::Usage("judge.concurrency must be at least 1".into()));
        }
        if let Some(names) = &self.families {
            for n in names {
                families::family(n)?;
            }
        }
        Ok(())
    }

    pub fn enabled_families(&self) -> Vec<&'static str> {
        let all = families::families().iter().map(|f| f.name);
        match &self.families {
            None => all.collect(),
            Some(names) => all.filter(|n| names.iter().any(|m| m == n)).collect(),
        }
    }
}

pub fn check_dims(width: usize, height: usize) -> Result<(), CliError> {
    if width < MIN_DIM || height < MIN_DIM {
        return Err(CliError::InvalidParams(format!(
            "image must be at least {MIN_DIM}x{MIN_DIM}, got {width}x{height}"
        )));
    }
    Ok(())
}

/// Parses `WxH`.
pub fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected WIDTHxHEIGHT, got `{s}`"))?;
    let parse = |v: &str| v.trim().parse::<usize>().map_err(|_| format!("bad dimension `{v}`"));
    Ok((parse(w)?, parse(h)?))
}
