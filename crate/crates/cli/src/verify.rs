//! Verification suites: closed forms, random inequality checks, trace
//! identities and density sweeps.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use faer::Mat;
use serde::Serialize;

use hankel_spectra::factored::PoissonFactor;
use hankel_spectra::linalg::{schatten_norm, RandomMatrices};
use hankel_spectra::model::{
    poisson_hilbert_trace1, poisson_hilbert_trace2, sech_moment, trace_difference_check, Polynomial,
};
use hankel_spectra::multipliers::MultiplierSpec;
use hankel_spectra::sections::{build_poisson_section, SectionOptions};
use hankel_spectra::spectra::{matrix_summary, ols_slope, sweep_summaries, trace_moment, CountMode, SpectralSummary};
use hankel_spectra::symbols::{hilbert_density, PCSymbol, Sign};
use hankel_spectra::{Error, C64};

use crate::{CliError, ExperimentConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Formulas,
    Inequalities,
    Traces,
    Density,
    All,
}

impl Suite {
    pub fn parse(name: &str) -> Result<Suite, CliError> {
        Ok(match name {
            "formulas" => Suite::Formulas,
            "inequalities" => Suite::Inequalities,
            "traces" => Suite::Traces,
            "density" => Suite::Density,
            "all" => Suite::All,
            other => {
                return Err(CliError::Config(format!(
                    "unknown suite {other:?}; expected formulas, inequalities, traces, density or all"
                )))
            }
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Formulas => "formulas",
            Suite::Inequalities => "inequalities",
            Suite::Traces => "traces",
            Suite::Density => "density",
            Suite::All => "all",
        }
    }
}

/// One check: `value` is compared against `bound`, in the direction given by
/// the check itself.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub bound: f64,
    pub detail: String,
}

impl Check {
    /// Passes when `value ≤ bound`.
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64, detail: impl Into<String>) -> Check {
        Check { name: name.into(), passed: value <= bound, value, bound, detail: detail.into() }
    }

    /// Passes when `value < bound`.
    pub fn below(name: impl Into<String>, value: f64, bound: f64, detail: impl Into<String>) -> Check {
        Check { name: name.into(), passed: value < bound, value, bound, detail: detail.into() }
    }

    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let detail = if self.detail.is_empty() { String::new() } else { format!(" ({})", self.detail) };
        format!("{status} {}: value={:e} bound={:e}{detail}", self.name, self.value, self.bound)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// Number of random instances per inequality family.
pub const INSTANCES: usize = 200;

/// Runs a suite. Without a config, the density suite uses a small γ sweep.
pub fn run_suite(suite: Suite, cfg: Option<&ExperimentConfig>) -> Result<VerifyReport, CliError> {
    let seed = cfg.map_or(0, |c| c.seed);
    let mut checks = Vec::new();
    if matches!(suite, Suite::Formulas | Suite::All) {
        checks.extend(formulas()?);
    }
    if matches!(suite, Suite::Inequalities | Suite::All) {
        checks.extend(inequalities(seed)?);
    }
    if matches!(suite, Suite::Traces | Suite::All) {
        checks.extend(traces()?);
    }
    if matches!(suite, Suite::Density | Suite::All) {
        let fallback;
        let cfg = match cfg {
            Some(c) => c,
            None => {
                fallback = default_density_config();
                &fallback
            }
        };
        checks.extend(density(cfg)?);
    }
    Ok(VerifyReport { suite: suite.name().into(), seed, passed: checks.iter().all(|c| c.passed), checks })
}

/// Runs a suite and writes `verify_<suite>.json` to `out`, or to the config's
/// output directory.
pub fn cmd_verify(suite: Suite, cfg: Option<&ExperimentConfig>, out: Option<&Path>) -> Result<VerifyReport, CliError> {
    let report = run_suite(suite, cfg)?;
    let dir = out.map(Path::to_path_buf).or_else(|| cfg.map(|c| c.output_dir.clone()));
    if let Some(dir) = dir {
        fs::create_dir_all(&dir)?;
        let text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Internal(e.to_string()))?;
        fs::write(dir.join(format!("verify_{}.json", suite.name())), text + "\n")?;
    }
    Ok(report)
}

fn default_density_config() -> ExperimentConfig {
    ExperimentConfig {
        symbol: PCSymbol::hilbert(),
        multipliers: vec![MultiplierSpec::square(), MultiplierSpec::fejer()],
        t_grid: vec![0.2],
        n_grid: vec![64, 128, 256, 512],
        tol: 1e-2,
        seed: 0,
        output_dir: "out".into(),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Closed forms for `γ̂`, `ψ̂`, `c(t)`, sech moments and the essential spectrum.
pub fn formulas() -> Result<Vec<Check>, CliError> {
    let g = PCSymbol::hilbert();
    let p = PCSymbol::psi();
    let mut gamma_err: f64 = 0.0;
    let mut psi_err: f64 = 0.0;
    for j in 0..4096u64 {
        gamma_err = gamma_err.max((g.canonical_fourier_coeff(j) - C64::new(1.0 / (PI * (j as f64 + 1.0)), 0.0)).norm());
        let psi = if j == 0 { 1.0 } else { 2.0 * (PI * j as f64 / 2.0).sin() / (PI * j as f64) };
        psi_err = psi_err.max((p.canonical_fourier_coeff(j) - C64::new(psi, 0.0)).norm());
    }
    let mut out = vec![
        Check::at_most("gamma_coefficients", gamma_err, 1e-14, "max over j < 4096"),
        Check::at_most("psi_coefficients", psi_err, 1e-14, "max over j < 4096"),
    ];
    // High-precision reference values of arcsech(t)/π².
    let reference = [(0.2, 0.23227189017911906), (0.5, 0.13343573292354629), (0.9, 0.04733171554998707)];
    let c_err = reference.iter().map(|(t, c)| Ok(rel(hilbert_density(*t)?, *c))).collect::<Result<Vec<f64>, Error>>()?;
    out.push(Check::at_most("hilbert_density_values", c_err.iter().cloned().fold(0.0, f64::max), 1e-14, "t = 0.2, 0.5, 0.9"));
    let grid: Vec<f64> = (1..1000).map(|i| i as f64 / 1000.0).collect();
    let mut monotone = true;
    for w in grid.windows(2) {
        monotone &= hilbert_density(w[0])? > hilbert_density(w[1])?;
    }
    out.push(Check::at_most("hilbert_density_decreasing", if monotone { 0.0 } else { 1.0 }, 0.0, "on (0,1)"));
    out.push(Check::at_most("hilbert_density_endpoint", hilbert_density(1.0)?.abs(), 0.0, "c(1) = 0"));
    let exact = [1.0, 2.0 / PI, 0.5, 4.0 / (3.0 * PI)];
    let mut sech_err: f64 = 0.0;
    for (m, e) in (1..=4).zip(exact) {
        sech_err = sech_err.max((sech_moment(m)?.value - e).abs());
    }
    out.push(Check::at_most("sech_moments", sech_err, 1e-10, "m = 1..4"));
    let band = |s: &PCSymbol| s.essential_spectrum_bands().bands.iter().map(|b| (b.lo, b.hi)).collect::<Vec<_>>();
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let ok = band(&g) == vec![(zero, one)] && band(&p) == vec![(-one, one)];
    out.push(Check::at_most("essential_spectrum_bands", if ok { 0.0 } else { 1.0 }, 0.0, "gamma [0,1], psi [-1,1]"));
    let ac = p.ac_spectrum_modulus();
    let ok = ac.interval == Some((0.0, 1.0)) && ac.multiplicity_at(0.5) == 2;
    out.push(Check::at_most("ac_spectrum", if ok { 0.0 } else { 1.0 }, 0.0, "psi [0,1] with multiplicity 2"));
    Ok(out)
}

fn count(s: &SpectralSummary, t: f64, mode: CountMode) -> Result<usize, Error> {
    Ok(s.count(t, mode)?.value)
}

/// Counting bound, both Weyl forms and the trace-difference inequality on
/// seeded random matrices; `value` is the number of violations.
pub fn inequalities(seed: u64) -> Result<Vec<Check>, CliError> {
    let mut g = RandomMatrices::new(seed);
    let mut lemma = 0usize;
    for i in 0..INSTANCES {
        let dim = 4 + i % 29;
        let scale = 1.0 + 3.0 * g.uniform(0.0, 1.0);
        let a = g.general(dim, dim)?;
        let k = Mat::from_fn(dim, dim, |r, c| a[(r, c)] * scale);
        let s = matrix_summary(&k)?;
        for p in [1.0, 2.0] {
            let norm = schatten_norm(&s.singular_values, p).powf(p);
            for t in [0.1, 0.5, 1.0] {
                if count(&s, t, CountMode::Singular)? as f64 > norm / t.powf(p) {
                    lemma += 1;
                }
            }
        }
    }
    let mut weyl = 0usize;
    let mut weyl_signed = 0usize;
    for i in 0..INSTANCES {
        let dim = 3 + i % 20;
        let t = g.uniform(0.1, 1.8);
        let s = t * g.uniform(0.05, 0.95);
        let (a, b) = (g.general(dim, dim)?, g.general(dim, dim)?);
        let (sa, sb, sab) = (matrix_summary(&a)?, matrix_summary(&b)?, matrix_summary(&(&a + &b))?);
        if count(&sab, t, CountMode::Singular)? > count(&sa, t - s, CountMode::Singular)? + count(&sb, s, CountMode::Singular)? {
            weyl += 1;
        }
        let (ha, hb) = (g.hermitian(dim)?, g.hermitian(dim)?);
        let (sa, sb, sab) = (matrix_summary(&ha)?, matrix_summary(&hb)?, matrix_summary(&(&ha + &hb))?);
        for mode in [CountMode::Plus, CountMode::Minus] {
            if count(&sab, t, mode)? > count(&sa, t - s, mode)? + count(&sb, s, mode)? {
                weyl_signed += 1;
            }
        }
    }
    let mut ls = 0usize;
    let mut worst: f64 = 0.0;
    for i in 0..INSTANCES {
        let dim = [8, 16, 32][i % 3];
        let b = g.hermitian(dim)?;
        let keep: Vec<bool> = (0..dim).map(|_| g.coin()).collect();
        let degree = 2 + g.uniform_index(5);
        let mut coeffs: Vec<f64> = (0..=degree).map(|_| g.uniform(-1.0, 1.0)).collect();
        coeffs[0] = 0.0;
        let r = trace_difference_check(&b, &keep, &Polynomial::new(coeffs))?;
        if !r.holds {
            ls += 1;
        }
        if r.bound > 0.0 {
            worst = worst.max(r.difference.abs() / r.bound);
        }
    }
    let n = INSTANCES;
    Ok(vec![
        Check::at_most("counting_bound", lemma as f64, 0.0, format!("{n} matrices, p = 1, 2, t = 0.1, 0.5, 1")),
        Check::at_most("weyl_singular", weyl as f64, 0.0, format!("{n} pairs")),
        Check::at_most("weyl_signed", weyl_signed as f64, 0.0, format!("{n} Hermitian pairs, both signs")),
        Check::at_most("trace_difference", ls as f64, 0.0, format!("{n} instances, worst |difference|/bound {worst:.3}")),
    ])
}

/// Exact Poisson trace identities on auto-sized sections.
pub fn exact_trace_checks(radii: &[f64]) -> Result<Vec<Check>, CliError> {
    let opts = SectionOptions { tol: 1e-5, ..SectionOptions::default() };
    let mut out = Vec::new();
    for &r in radii {
        let s = build_poisson_section(&PCSymbol::hilbert(), r, 0, &opts)?;
        let t1 = trace_moment(&s, 1)?.re;
        let t2 = trace_moment(&s, 2)?.re;
        drop(s);
        out.push(Check::at_most(format!("poisson_trace_m1_r{r}"), rel(t1, poisson_hilbert_trace1(r)), 1e-8, "relative"));
        out.push(Check::at_most(format!("poisson_trace_m2_r{r}"), rel(t2, poisson_hilbert_trace2(r)), 1e-8, "relative"));
    }
    Ok(out)
}

/// Relative errors of `Tr Γ^{(r)}(γ̂)^m / |log(1−r)|` against `sech_moment(m)/(2π)`
/// along `r = 1 − 2^{−k}`.
pub fn appendix_errors(m: u32, ks: &[i32]) -> Result<Vec<f64>, CliError> {
    let target = sech_moment(m)?.value / (2.0 * PI);
    ks.iter()
        .map(|&k| {
            let r = 1.0 - 2f64.powi(-k);
            let f = PoissonFactor::new(&PCSymbol::hilbert(), r)?;
            Ok(rel(f.trace_moment(m)?.re / (1.0 - r).ln().abs(), target))
        })
        .collect()
}

pub fn traces() -> Result<Vec<Check>, CliError> {
    let mut out = exact_trace_checks(&[0.9, 0.99, 0.999])?;
    let ks: Vec<i32> = (6..=14).collect();
    for m in 1..=3 {
        let e = appendix_errors(m, &ks)?;
        let (first, last) = (e[0], e[e.len() - 1]);
        out.push(Check::at_most(format!("appendix_ratio_m{m}"), last, 0.25, "relative error at k = 14"));
        out.push(Check::below(format!("appendix_trend_m{m}"), last, first, "error at k = 14 against k = 6"));
    }
    Ok(out)
}

/// Counts at `t`, or at both `t ± 1e-6` when any count sits in the guard band.
pub fn counts_with_ties(
    summaries: &[(usize, SpectralSummary)],
    t: f64,
    mode: CountMode,
) -> Result<Vec<Vec<usize>>, Error> {
    let tie = summaries.iter().try_fold(false, |acc, (_, s)| Ok::<_, Error>(acc || s.count(t, mode)?.tie))?;
    let ts: Vec<f64> = if tie { vec![t - 1e-6, t + 1e-6] } else { vec![t] };
    ts.iter().map(|&t| summaries.iter().map(|(_, s)| count(s, t, mode)).collect()).collect()
}

/// Slope of the counts against `log N`, for each threshold the tie policy asks for.
pub fn slopes(summaries: &[(usize, SpectralSummary)], t: f64, mode: CountMode) -> Result<Vec<f64>, Error> {
    let logs: Vec<f64> = summaries.iter().map(|(n, _)| (*n as f64).ln()).collect();
    Ok(counts_with_ties(summaries, t, mode)?
        .iter()
        .map(|c| ols_slope(&logs, &c.iter().map(|x| *x as f64).collect::<Vec<_>>()))
        .collect())
}

fn worst_slope_error(slopes: &[f64], predicted: f64) -> f64 {
    slopes
        .iter()
        .map(|s| if predicted > 0.0 { rel(*s, predicted) } else { s.abs() })
        .fold(0.0, f64::max)
}

pub fn density(cfg: &ExperimentConfig) -> Result<Vec<Check>, CliError> {
    let opts = SectionOptions { tol: cfg.tol, ..SectionOptions::default() };
    let sym = &cfg.symbol;
    let signed = sym.is_symmetric() && !sym.has_axis_jump();
    let mut out = Vec::new();
    let mut sweeps = Vec::new();
    for m in &cfg.multipliers {
        let summaries = sweep_summaries(sym, m, &cfg.n_grid, &opts)?;
        for &t in &cfg.t_grid {
            let predicted = sym.predicted_logdens(t)?;
            let e = worst_slope_error(&slopes(&summaries, t, CountMode::Singular)?, predicted);
            out.push(Check::at_most(format!("slope_{}_t{t}", m.name()), e, 0.3, format!("predicted {predicted:.5}")));
            if signed && m.hermitian() {
                for (mode, sign, label) in [(CountMode::Plus, Sign::Plus, "plus"), (CountMode::Minus, Sign::Minus, "minus")] {
                    let predicted = sym.predicted_logdens_signed(t, sign)?;
                    let e = worst_slope_error(&slopes(&summaries, t, mode)?, predicted);
                    out.push(Check::at_most(format!("slope_{label}_{}_t{t}", m.name()), e, 0.35, format!("predicted {predicted:.5}")));
                }
                let plus = counts_with_ties(&summaries, t, CountMode::Plus)?;
                let minus = counts_with_ties(&summaries, t, CountMode::Minus)?;
                let gap = plus
                    .iter()
                    .zip(&minus)
                    .flat_map(|(p, q)| p.iter().zip(q).map(|(a, b)| a.abs_diff(*b)))
                    .max()
                    .unwrap_or(0);
                out.push(Check::at_most(format!("symmetry_gap_{}_t{t}", m.name()), gap as f64, 2.0, "max |n+ − n−|"));
            }
        }
        sweeps.push((m.name(), summaries));
    }
    for a in 0..sweeps.len() {
        for b in a + 1..sweeps.len() {
            for &t in &cfg.t_grid {
                let ca = counts_with_ties(&sweeps[a].1, t, CountMode::Singular)?;
                let cb = counts_with_ties(&sweeps[b].1, t, CountMode::Singular)?;
                let gap = ca
                    .iter()
                    .zip(&cb)
                    .flat_map(|(p, q)| p.iter().zip(q).map(|(x, y)| x.abs_diff(*y)))
                    .max()
                    .unwrap_or(0);
                out.push(Check::at_most(
                    format!("invariance_gap_{}_{}_t{t}", sweeps[a].0, sweeps[b].0),
                    gap as f64,
                    2.0,
                    "max |n_a − n_b|",
                ));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formulas_pass() {
        let checks = formulas().unwrap();
        assert!(checks.iter().all(|c| c.passed), "{:?}", checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
    }

    #[test]
    fn inequalities_pass_and_are_seeded() {
        let a = inequalities(3).unwrap();
        assert!(a.iter().all(|c| c.passed));
        assert_eq!(a, inequalities(3).unwrap());
    }

    #[test]
    fn suite_names() {
        for s in ["formulas", "inequalities", "traces", "density", "all"] {
            assert_eq!(Suite::parse(s).unwrap().name(), s);
        }
        assert!(matches!(Suite::parse("nope"), Err(CliError::Config(_))));
    }

    #[test]
    fn check_lines() {
        let c = Check::at_most("x", 0.5, 1.0, "note");
        assert_eq!(c.line(), "PASS x: value=5e-1 bound=1e0 (note)");
        assert!(!Check::at_most("y", 2.0, 1.0, "").passed);
    }
}
