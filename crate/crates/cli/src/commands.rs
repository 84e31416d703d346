//! `predict` and `sweep`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use hankel_spectra::format_float;
use hankel_spectra::sections::SectionOptions;
use hankel_spectra::spectra::{
    density_fits, gaps_from_summaries, sweep_summaries, write_sweep_csv, CountMode, SpectralSummary,
};
use hankel_spectra::symbols::{hilbert_density, Band, PCSymbol, Sign};

use crate::{CliError, ExperimentConfig};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictionRow {
    pub t: f64,
    pub c: f64,
    pub predicted: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted_plus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted_minus: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandEntry {
    pub band: String,
    pub lo: [f64; 2],
    pub hi: [f64; 2],
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictReport {
    pub symbol_id: String,
    pub symmetric: bool,
    pub rows: Vec<PredictionRow>,
    pub bands: Vec<String>,
    pub band_detail: Vec<BandEntry>,
    pub includes_zero: bool,
    pub unpaired_jumps: bool,
    pub ac_spectrum: Vec<String>,
    pub ac_multiplicities: Vec<f64>,
}

fn fmt_real(x: f64) -> String {
    format!("{}", x + 0.0)
}

fn fmt_point(re: f64, im: f64) -> String {
    if im == 0.0 {
        fmt_real(re)
    } else if re == 0.0 {
        format!("{}i", fmt_real(im))
    } else {
        format!("{}{}{}i", fmt_real(re), if im < 0.0 { "-" } else { "+" }, fmt_real(im.abs()))
    }
}

/// `[lo,hi]` with shortest round-trip endpoints, e.g. `[-1,1]`.
pub fn format_band(b: &Band) -> String {
    format!("[{},{}]", fmt_point(b.lo.re, b.lo.im), fmt_point(b.hi.re, b.hi.im))
}

pub fn predict_report(sym: &PCSymbol, t_grid: &[f64]) -> Result<PredictReport, CliError> {
    let symmetric = sym.is_symmetric();
    let rows = t_grid
        .iter()
        .map(|&t| {
            let signed = |s| if symmetric { sym.predicted_logdens_signed(t, s).map(Some) } else { Ok(None) };
            Ok(PredictionRow {
                t,
                c: hilbert_density(t)?,
                predicted: sym.predicted_logdens(t)?,
                predicted_plus: signed(Sign::Plus)?,
                predicted_minus: signed(Sign::Minus)?,
            })
        })
        .collect::<Result<Vec<_>, hankel_spectra::Error>>()?;
    let bands = sym.essential_spectrum_bands();
    let ac = sym.ac_spectrum_modulus();
    Ok(PredictReport {
        symbol_id: sym.id().into(),
        symmetric,
        rows,
        bands: bands.bands.iter().map(format_band).collect(),
        band_detail: bands
            .bands
            .iter()
            .map(|b| BandEntry { band: format_band(b), lo: [b.lo.re, b.lo.im], hi: [b.hi.re, b.hi.im], degenerate: b.degenerate })
            .collect(),
        includes_zero: bands.includes_zero,
        unpaired_jumps: bands.unpaired_flag,
        ac_spectrum: ac.interval.iter().map(|(a, b)| format!("[{},{}]", fmt_real(*a), fmt_real(*b))).collect(),
        ac_multiplicities: ac.moduli,
    })
}

fn out_dir(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<PathBuf, CliError> {
    let dir = out.map(Path::to_path_buf).unwrap_or_else(|| cfg.output_dir.clone());
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

/// Writes `predict.json` and returns the report.
pub fn cmd_predict(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<PredictReport, CliError> {
    let report = predict_report(&cfg.symbol, &cfg.t_grid)?;
    let dir = out_dir(cfg, out)?;
    let text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Internal(e.to_string()))?;
    fs::write(dir.join("predict.json"), text + "\n")?;
    Ok(report)
}

/// File name stem for a multiplier, e.g. `oblique_0.5_1`.
pub fn file_stem(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' }).collect()
}

pub const GAP_HEADER: &str = "t,N,multiplier_a,multiplier_b,gap";

/// Writes `sweep_<multiplier>.csv` per multiplier and, with two or more
/// multipliers, `gaps.csv` for every pair. Returns the files written.
pub fn cmd_sweep(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<Vec<PathBuf>, CliError> {
    let opts = SectionOptions { tol: cfg.tol, ..SectionOptions::default() };
    // Check the memory cap before doing any work.
    for m in &cfg.multipliers {
        for &n in &cfg.n_grid {
            let dim = m.effective_dimension(n, cfg.tol)?;
            if dim > opts.max_dim {
                return Err(CliError::Resource(format!(
                    "N={n} with {} needs dimension {dim}, cap is {}",
                    m.name(),
                    opts.max_dim
                )));
            }
        }
    }
    let dir = out_dir(cfg, out)?;
    let mut written = Vec::new();
    let mut all: Vec<(String, Vec<(usize, SpectralSummary)>)> = Vec::new();
    for m in &cfg.multipliers {
        let summaries = sweep_summaries(&cfg.symbol, m, &cfg.n_grid, &opts)?;
        let fits = density_fits(&cfg.symbol, &summaries, &cfg.t_grid)?;
        let path = dir.join(format!("sweep_{}.csv", file_stem(&m.name())));
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, cfg.symbol.id(), &m.name(), &fits)?;
        fs::write(&path, buf)?;
        written.push(path);
        all.push((m.name(), summaries));
    }
    if all.len() >= 2 {
        let mut buf = Vec::new();
        writeln!(buf, "{GAP_HEADER}")?;
        for &t in &cfg.t_grid {
            for a in 0..all.len() {
                for b in a + 1..all.len() {
                    let gaps = gaps_from_summaries(&all[a].1, &all[b].1, t, CountMode::Singular)?;
                    for (g, n) in gaps.iter().zip(&cfg.n_grid) {
                        writeln!(buf, "{},{},{},{},{}", format_float(t), n, all[a].0, all[b].0, g)?;
                    }
                }
            }
        }
        let path = dir.join("gaps.csv");
        fs::write(&path, buf)?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use hankel_spectra::symbols::PCSymbol;

    #[test]
    fn band_strings() {
        let b = |s: &PCSymbol| predict_report(s, &[0.2]).unwrap().bands;
        assert_eq!(b(&PCSymbol::psi()), vec!["[-1,1]"]);
        assert_eq!(b(&PCSymbol::hilbert()), vec!["[0,1]"]);
        assert!(b(&PCSymbol::zero()).is_empty());
    }

    #[test]
    fn psi_predictions_double_the_density() {
        let r = predict_report(&PCSymbol::psi(), &[0.2, 0.5]).unwrap();
        for row in &r.rows {
            assert!((row.predicted - 2.0 * row.c).abs() < 1e-15);
            assert_eq!(row.predicted_plus, Some(row.c));
        }
        let z = predict_report(&PCSymbol::zero(), &[0.2]).unwrap();
        assert_eq!(z.rows[0].predicted, 0.0);
        assert!(z.ac_spectrum.is_empty());
    }

    #[test]
    fn stems() {
        assert_eq!(file_stem("oblique_0.5_-1"), "oblique_0.5_-1");
        assert_eq!(file_stem("my rule/2"), "my_rule_2");
        assert_eq!(file_stem("abel_poisson"), "abel_poisson");
    }
}
