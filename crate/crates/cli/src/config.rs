//! Experiment configuration files.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use hankel_spectra::multipliers::{MultiplierJson, MultiplierSpec};
use hankel_spectra::symbols::{PCSymbol, SymbolJson};
use hankel_spectra::C64;

use crate::CliError;

/// Where the symbol comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SymbolSource {
    /// `"gamma"`, `"psi"` or `"pair"` (jumps `±1` at `e^{±iπ/3}`).
    Builtin(String),
    Pair { angle: f64, re: f64, im: f64 },
    Inline(SymbolJson),
    /// Path to a symbol JSON file, relative to the config file.
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub symbol: SymbolSource,
    #[serde(default = "default_multipliers")]
    pub multipliers: Vec<MultiplierJson>,
    pub t_grid: Vec<f64>,
    #[serde(rename = "N_grid")]
    pub n_grid: Vec<usize>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

fn default_multipliers() -> Vec<MultiplierJson> {
    vec![MultiplierJson::Square {}]
}

fn default_tol() -> f64 {
    1e-2
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

/// A validated configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub symbol: PCSymbol,
    pub multipliers: Vec<MultiplierSpec>,
    pub t_grid: Vec<f64>,
    pub n_grid: Vec<usize>,
    pub tol: f64,
    pub seed: u64,
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let raw: ConfigFile = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_file(raw, path.parent().unwrap_or(Path::new(".")))
    }

    /// Validates a parsed config; relative paths resolve against `base`.
    pub fn from_file(raw: ConfigFile, base: &Path) -> Result<Self, CliError> {
        let bad = |m: String| CliError::Config(m);
        if raw.n_grid.is_empty() || raw.n_grid.iter().any(|n| *n < 2) || raw.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("N_grid must be non-empty, strictly increasing, with every N ≥ 2".into()));
        }
        if raw.t_grid.is_empty() || raw.t_grid.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(bad("t_grid must be non-empty and strictly positive".into()));
        }
        if !(raw.tol > 0.0 && raw.tol < 1.0) {
            return Err(bad(format!("tol must lie in (0,1), got {}", raw.tol)));
        }
        if raw.multipliers.is_empty() {
            return Err(bad("at least one multiplier is required".into()));
        }
        let multipliers = raw
            .multipliers
            .iter()
            .map(MultiplierSpec::from_json)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| bad(e.to_string()))?;
        let mut names: Vec<String> = multipliers.iter().map(|m| m.name()).collect();
        names.sort();
        names.dedup();
        if names.len() != multipliers.len() {
            return Err(bad("multipliers must be distinct".into()));
        }
        let symbol = resolve_symbol(&raw.symbol, base)?;
        let output_dir = if raw.output_dir.is_absolute() { raw.output_dir } else { base.join(raw.output_dir) };
        Ok(ExperimentConfig {
            symbol,
            multipliers,
            t_grid: raw.t_grid,
            n_grid: raw.n_grid,
            tol: raw.tol,
            seed: raw.seed,
            output_dir,
        })
    }
}

pub fn resolve_symbol(source: &SymbolSource, base: &Path) -> Result<PCSymbol, CliError> {
    let bad = |m: String| CliError::Config(m);
    match source {
        SymbolSource::Builtin(name) => match name.as_str() {
            "gamma" => Ok(PCSymbol::hilbert()),
            "psi" => Ok(PCSymbol::psi()),
            "pair" => Ok(PCSymbol::conjugate_pair(PI / 3.0, C64::new(1.0, 0.0)).map_err(|e| bad(e.to_string()))?),
            other => Err(bad(format!("unknown builtin symbol {other:?}; expected gamma, psi or pair"))),
        },
        SymbolSource::Pair { angle, re, im } => {
            PCSymbol::conjugate_pair(*angle, C64::new(*re, *im)).map_err(|e| bad(e.to_string()))
        }
        SymbolSource::Inline(json) => PCSymbol::from_json(json).map_err(|e| bad(e.to_string())),
        SymbolSource::File(path) => {
            let path = if path.is_absolute() { path.clone() } else { base.join(path) };
            let text = std::fs::read_to_string(&path)
                .map_err(|e| bad(format!("cannot read symbol file {}: {e}", path.display())))?;
            let json: SymbolJson =
                serde_json::from_str(&text).map_err(|e| bad(format!("{}: {e}", path.display())))?;
            PCSymbol::from_json(&json).map_err(|e| bad(e.to_string()))
        }
    }
}
