use std::path::Path;

use clap::ValueEnum;
use serde::Deserialize;
use sftkit::complex::Caps;
use sftkit::verify::Settings;
use sftkit::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    Json,
    Text,
}

/// Limits and output format; every field of a config file is optional.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub recoding_cap: usize,
    #[serde(rename = "L_cap")]
    pub l_cap: usize,
    #[serde(rename = "M_cap")]
    pub m_cap: usize,
    pub period_cap: usize,
    pub level_window: u32,
    pub output: Output,
}

impl Default for Config {
    fn default() -> Self {
        Config { recoding_cap: 8, l_cap: 4, m_cap: 4, period_cap: 6, level_window: 2, output: Output::Json }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("{}: cannot read: {e}", path.display())))?;
        let c: Config = serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        c.validate().map_err(|m| Error::Input(format!("{}: {m}", path.display())))?;
        Ok(c)
    }

    fn validate(&self) -> std::result::Result<(), String> {
        let caps = [
            ("recoding_cap", self.recoding_cap),
            ("L_cap", self.l_cap),
            ("M_cap", self.m_cap),
            ("period_cap", self.period_cap),
            ("level_window", self.level_window as usize),
        ];
        match caps.iter().find(|(_, v)| *v == 0) {
            Some((name, _)) => Err(format!("{name} must be positive")),
            None => Ok(()),
        }
    }

    pub fn settings(&self) -> Settings {
        Settings {
            caps: Caps { recoding: self.recoding_cap, l: self.l_cap, m: self.m_cap },
            period_cap: self.period_cap,
            level_window: self.level_window,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_settings() {
        let s = Config::default().settings();
        assert_eq!((s.caps.recoding, s.caps.l, s.caps.m, s.period_cap, s.level_window), (8, 4, 4, 6, 2));
    }

    #[test]
    fn partial_file_keeps_defaults() {
        let c: Config = serde_json::from_str(r#"{"L_cap": 2, "output": "text"}"#).unwrap();
        assert_eq!((c.l_cap, c.m_cap, c.output), (2, 4, Output::Text));
    }

    #[test]
    fn zero_cap_is_rejected() {
        let c: Config = serde_json::from_str(r#"{"period_cap": 0}"#).unwrap();
        assert_eq!(c.validate().unwrap_err(), "period_cap must be positive");
    }
}
