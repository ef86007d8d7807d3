//! Engine configuration from a TOML file and command-line flags.
//!
//! The file named by `--config` (or `PRESSTYPE_CONFIG`) holds any subset of
//! the engine settings; flags win over the file, the file wins over the
//! defaults.
//!
//! ```toml
//! remap_lo = 0.05
//! remap_hi = 0.55
//! layout = ["A", "B", "C", "SP", "BS"]
//! ```

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use presstype_core::{ConfigOverrides, EngineConfig, LayoutConfig, Symbol};

#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// TOML file with engine settings.
    #[arg(long = "config", env = "PRESSTYPE_CONFIG", value_name = "FILE")]
    pub file: Option<PathBuf>,
    /// Comma-separated symbols, backspace last, e.g. "A,B,C,SP,BS".
    #[arg(long, value_name = "SYMBOLS", conflicts_with = "layout_len")]
    pub layout: Option<String>,
    /// Generated layout with this many symbols (backspace included).
    #[arg(long, value_name = "N")]
    pub layout_len: Option<usize>,
    #[arg(long)]
    pub remap_lo: Option<f64>,
    #[arg(long)]
    pub remap_hi: Option<f64>,
    #[arg(long)]
    pub buffer_size: Option<usize>,
    #[arg(long)]
    pub nominal_rate: Option<f64>,
    /// Seconds before hold-delete starts repeating.
    #[arg(long)]
    pub hold_delete_delay: Option<f64>,
    /// Hold-delete repeats per second.
    #[arg(long)]
    pub hold_delete_rate: Option<f64>,
    #[arg(long)]
    pub hold_threshold: Option<f64>,
}

pub fn parse_layout(spec: &str) -> Result<LayoutConfig> {
    let symbols = spec
        .split(',')
        .map(|s| s.trim().parse::<Symbol>())
        .collect::<Result<Vec<_>, _>>()
        .with_context(|| format!("bad layout {spec:?}"))?;
    Ok(LayoutConfig::new(symbols)?)
}

impl ConfigArgs {
    fn file_overrides(&self) -> Result<ConfigOverrides> {
        let Some(path) = &self.file else {
            return Ok(ConfigOverrides::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    fn flag_overrides(&self) -> Result<ConfigOverrides> {
        let layout = match (&self.layout, self.layout_len) {
            (Some(spec), _) => Some(parse_layout(spec)?),
            (None, Some(n)) => Some(LayoutConfig::with_len(n)?),
            (None, None) => None,
        };
        Ok(ConfigOverrides {
            layout,
            remap_lo: self.remap_lo,
            remap_hi: self.remap_hi,
            buffer_size: self.buffer_size,
            nominal_rate: self.nominal_rate,
            hold_delete_delay: self.hold_delete_delay,
            hold_delete_rate: self.hold_delete_rate,
            hold_threshold: self.hold_threshold,
        })
    }

    pub fn overrides(&self) -> Result<ConfigOverrides> {
        Ok(self.file_overrides()?.merge(self.flag_overrides()?))
    }

    pub fn resolve(&self) -> Result<EngineConfig> {
        Ok(self.overrides()?.apply(&EngineConfig::default())?)
    }
}
