//! Spectral summaries of sections, counting functions, norms, trace moments
//! and logarithmic-density sweeps.

use std::io::Write;

use faer::Mat;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::multipliers::MultiplierSpec;
use crate::sections::{build_hankel_section, FiniteSection, SectionEntries, SectionOptions};
use crate::symbols::{PCSymbol, Sign};
use crate::{format_float, C64};

pub const DEFAULT_GUARD: f64 = 1e-8;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_MOMENT_CAP: u32 = 8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralSummary {
    /// Descending, nonnegative.
    pub singular_values: Vec<f64>,
    /// Descending; present iff the section is Hermitian.
    pub eigenvalues: Option<Vec<f64>>,
    pub guard: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMode {
    Singular,
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Count {
    pub value: usize,
    pub tie: bool,
}

impl SpectralSummary {
    pub fn from_singular_values(mut s: Vec<f64>) -> Self {
        s.sort_by(|a, b| b.total_cmp(a));
        SpectralSummary { singular_values: s, eigenvalues: None, guard: DEFAULT_GUARD }
    }

    pub fn from_eigenvalues(mut e: Vec<f64>) -> Self {
        e.sort_by(|a, b| b.total_cmp(a));
        let mut s: Vec<f64> = e.iter().map(|x| x.abs()).collect();
        s.sort_by(|a, b| b.total_cmp(a));
        SpectralSummary { singular_values: s, eigenvalues: Some(e), guard: DEFAULT_GUARD }
    }

    pub fn is_hermitian(&self) -> bool {
        self.eigenvalues.is_some()
    }

    /// `#{values > t}` with a tie flag for values within the guard band of `t`.
    pub fn count(&self, t: f64, mode: CountMode) -> Result<Count> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("threshold must be positive, got {t}")));
        }
        let strict = |values: &mut dyn Iterator<Item = f64>| {
            let mut c = Count { value: 0, tie: false };
            for v in values {
                if v > t {
                    c.value += 1;
                }
                if (v - t).abs() <= self.guard {
                    c.tie = true;
                }
            }
            c
        };
        match mode {
            CountMode::Singular => Ok(strict(&mut self.singular_values.iter().copied())),
            CountMode::Plus | CountMode::Minus => {
                let ev = self
                    .eigenvalues
                    .as_ref()
                    .ok_or_else(|| Error::Mode("signed counts need a Hermitian section".into()))?;
                let sign = if mode == CountMode::Plus { 1.0 } else { -1.0 };
                Ok(strict(&mut ev.iter().map(|x| sign * x)))
            }
        }
    }
}

/// Singular values always; eigenvalues when the section is Hermitian to
/// `1e-12` entrywise.
pub fn spectral_summary(section: &FiniteSection) -> Result<SpectralSummary> {
    if section.dim() == 0 {
        return Err(Error::Domain("empty section".into()));
    }
    if section.is_hermitian(HERMITIAN_TOL) {
        let ev = match &section.entries {
            SectionEntries::Real(m) => linalg::symmetric_eigenvalues(m.as_ref())?,
            SectionEntries::Complex(m) => linalg::hermitian_eigenvalues(m.as_ref())?,
        };
        return Ok(SpectralSummary::from_eigenvalues(ev));
    }
    let s = match &section.entries {
        SectionEntries::Real(m) => linalg::singular_values_real(m.as_ref())?,
        SectionEntries::Complex(m) => linalg::singular_values_complex(m.as_ref())?,
    };
    Ok(SpectralSummary::from_singular_values(s))
}

/// Spectral summary of an arbitrary dense matrix.
pub fn matrix_summary(a: &Mat<C64>) -> Result<SpectralSummary> {
    let n = a.nrows();
    let hermitian = n == a.ncols() && (0..n).all(|j| (j..n).all(|i| (a[(i, j)] - a[(j, i)].conj()).norm() <= HERMITIAN_TOL));
    if hermitian {
        Ok(SpectralSummary::from_eigenvalues(linalg::hermitian_eigenvalues(a.as_ref())?))
    } else {
        Ok(SpectralSummary::from_singular_values(linalg::singular_values_complex(a.as_ref())?))
    }
}

pub fn nuclear_norm(section: &FiniteSection) -> Result<f64> {
    Ok(spectral_summary(section)?.singular_values.iter().sum())
}

pub fn nuclear_norm_matrix(a: &Mat<C64>) -> Result<f64> {
    linalg::nuclear_norm_complex(a.as_ref())
}

/// `Tr(Aᵐ)`; Hermitian sections go through their eigenvalues, others through
/// repeated products.
pub fn trace_moment(section: &FiniteSection, m: u32) -> Result<C64> {
    if m == 0 || m > TRACE_MOMENT_CAP {
        return Err(Error::Parameter(format!("trace moment order must be in 1..={TRACE_MOMENT_CAP}, got {m}")));
    }
    let n = section.dim();
    match (&section.entries, m) {
        (SectionEntries::Real(a), 1) => Ok(C64::new(kahan((0..n).map(|i| a[(i, i)])), 0.0)),
        (SectionEntries::Complex(a), 1) => Ok((0..n).map(|i| a[(i, i)]).sum()),
        // Tr(A²) = Σ a_ij a_ji, exact without a decomposition.
        (SectionEntries::Real(a), 2) => {
            Ok(C64::new(kahan((0..n).flat_map(|j| (0..n).map(move |i| a[(i, j)] * a[(j, i)]))), 0.0))
        }
        (SectionEntries::Complex(a), 2) => Ok((0..n).flat_map(|j| (0..n).map(move |i| a[(i, j)] * a[(j, i)])).sum()),
        _ if section.is_hermitian(HERMITIAN_TOL) => {
            let s = spectral_summary(section)?;
            let ev = s.eigenvalues.expect("hermitian summary");
            Ok(C64::new(kahan(ev.iter().map(|x| x.powi(m as i32))), 0.0))
        }
        _ => {
            let a = section.to_complex();
            let mut p = a.clone();
            for _ in 1..m {
                p = &p * &a;
            }
            Ok((0..n).map(|i| p[(i, i)]).sum())
        }
    }
}

fn kahan(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0, 0.0);
    for v in values {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Ordinary least-squares slope of `ys` against `xs`.
pub fn ols_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return 0.0;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridPoint {
    pub n: usize,
    pub count: usize,
    pub n_plus: Option<usize>,
    pub n_minus: Option<usize>,
    pub tie: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityFit {
    pub t: f64,
    pub grid: Vec<GridPoint>,
    /// `n(t;N)/log N` per grid point.
    pub ratios: Vec<f64>,
    pub slope: f64,
    pub slope_plus: Option<f64>,
    pub slope_minus: Option<f64>,
    pub predicted: f64,
    pub predicted_plus: Option<f64>,
    pub predicted_minus: Option<f64>,
}

impl DensityFit {
    pub fn terminal_ratio(&self) -> f64 {
        self.ratios.last().copied().unwrap_or(0.0)
    }
}

/// Summaries of `τ_N ⋆ Γ(ω̂)` along an increasing `N` grid.
pub fn sweep_summaries(
    sym: &PCSymbol,
    mult: &MultiplierSpec,
    n_list: &[usize],
    opts: &SectionOptions,
) -> Result<Vec<(usize, SpectralSummary)>> {
    check_grid(n_list, 1)?;
    n_list
        .iter()
        .map(|&n| {
            let section = build_hankel_section(sym, mult, n, opts).map_err(|e| at_n(e, n))?;
            let summary = spectral_summary(&section).map_err(|e| at_n(e, n))?;
            Ok((n, summary))
        })
        .collect()
}

fn at_n(e: Error, n: usize) -> Error {
    match e {
        Error::Numeric(m) => Error::Numeric(format!("N={n}: {m}")),
        other => other,
    }
}

fn check_grid(n_list: &[usize], min_len: usize) -> Result<()> {
    if n_list.len() < min_len {
        return Err(Error::Domain(format!("N grid needs at least {min_len} points")));
    }
    if n_list.iter().any(|n| *n < 2) || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("N grid must be strictly increasing with N ≥ 2".into()));
    }
    Ok(())
}

/// Builds density fits from precomputed summaries; signed columns appear when
/// every summary is Hermitian and the symbol is symmetric.
pub fn density_fits(sym: &PCSymbol, summaries: &[(usize, SpectralSummary)], t_list: &[f64]) -> Result<Vec<DensityFit>> {
    let signed = summaries.iter().all(|(_, s)| s.is_hermitian()) && sym.is_symmetric();
    let logs: Vec<f64> = summaries.iter().map(|(n, _)| (*n as f64).ln()).collect();
    t_list
        .iter()
        .map(|&t| {
            let mut grid = Vec::with_capacity(summaries.len());
            for (n, s) in summaries {
                let c = s.count(t, CountMode::Singular)?;
                let (p, m) = if signed {
                    let p = s.count(t, CountMode::Plus)?;
                    let m = s.count(t, CountMode::Minus)?;
                    (Some(p), Some(m))
                } else {
                    (None, None)
                };
                grid.push(GridPoint {
                    n: *n,
                    count: c.value,
                    n_plus: p.map(|x| x.value),
                    n_minus: m.map(|x| x.value),
                    tie: c.tie || p.is_some_and(|x| x.tie) || m.is_some_and(|x| x.tie),
                });
            }
            let series = |f: &dyn Fn(&GridPoint) -> usize| grid.iter().map(|g| f(g) as f64).collect::<Vec<_>>();
            let counts = series(&|g| g.count);
            let ratios = counts.iter().zip(&logs).map(|(c, l)| c / l).collect();
            let slope = ols_slope(&logs, &counts);
            let (slope_plus, slope_minus, predicted_plus, predicted_minus) = if signed {
                (
                    Some(ols_slope(&logs, &series(&|g| g.n_plus.unwrap_or(0)))),
                    Some(ols_slope(&logs, &series(&|g| g.n_minus.unwrap_or(0)))),
                    Some(sym.predicted_logdens_signed(t, Sign::Plus)?),
                    Some(sym.predicted_logdens_signed(t, Sign::Minus)?),
                )
            } else {
                (None, None, None, None)
            };
            Ok(DensityFit {
                t,
                grid,
                ratios,
                slope,
                slope_plus,
                slope_minus,
                predicted: sym.predicted_logdens(t)?,
                predicted_plus,
                predicted_minus,
            })
        })
        .collect()
}

/// Counts `n(t; τ_N ⋆ Γ(ω̂))` over the grid and fits their growth in `log N`.
pub fn logdens_sweep(
    sym: &PCSymbol,
    mult: &MultiplierSpec,
    t_list: &[f64],
    n_list: &[usize],
    opts: &SectionOptions,
) -> Result<Vec<DensityFit>> {
    if t_list.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::Domain("thresholds must be positive".into()));
    }
    check_grid(n_list, 3)?;
    let summaries = sweep_summaries(sym, mult, n_list, opts)?;
    density_fits(sym, &summaries, t_list)
}

/// `|n(t; a) − n(t; b)|` per grid point from precomputed summaries.
pub fn gaps_from_summaries(
    a: &[(usize, SpectralSummary)],
    b: &[(usize, SpectralSummary)],
    t: f64,
    mode: CountMode,
) -> Result<Vec<usize>> {
    a.iter()
        .zip(b)
        .map(|((_, sa), (_, sb))| Ok(sa.count(t, mode)?.value.abs_diff(sb.count(t, mode)?.value)))
        .collect()
}

pub fn invariance_gap(
    sym: &PCSymbol,
    mult_a: &MultiplierSpec,
    mult_b: &MultiplierSpec,
    t: f64,
    n_list: &[usize],
    opts: &SectionOptions,
) -> Result<Vec<usize>> {
    let a = sweep_summaries(sym, mult_a, n_list, opts)?;
    let b = sweep_summaries(sym, mult_b, n_list, opts)?;
    gaps_from_summaries(&a, &b, t, CountMode::Singular)
}

/// Preconditions of the symmetry principle: symmetric, no jumps at `±1`.
pub fn check_symmetry_gap_preconditions(sym: &PCSymbol) -> Result<()> {
    let report = sym.check_symmetry_condition();
    if !report.symmetric {
        return Err(Error::Precondition(format!("symbol is not symmetric: {}", report.describe())));
    }
    if sym.has_axis_jump() {
        return Err(Error::Precondition("symbol has a jump at ±1".into()));
    }
    Ok(())
}

/// `|n₊ − n₋|` per grid point from precomputed summaries.
pub fn signed_gaps(summaries: &[(usize, SpectralSummary)], t: f64) -> Result<Vec<usize>> {
    summaries
        .iter()
        .map(|(_, s)| Ok(s.count(t, CountMode::Plus)?.value.abs_diff(s.count(t, CountMode::Minus)?.value)))
        .collect()
}

pub fn symmetry_gap(
    sym: &PCSymbol,
    mult: &MultiplierSpec,
    t: f64,
    n_list: &[usize],
    opts: &SectionOptions,
) -> Result<Vec<usize>> {
    check_symmetry_gap_preconditions(sym)?;
    if !mult.hermitian() {
        return Err(Error::Precondition(format!("multiplier {} is not Hermitian", mult.name())));
    }
    signed_gaps(&sweep_summaries(sym, mult, n_list, opts)?, t)
}

pub const SWEEP_HEADER: &str = "symbol_id,multiplier,t,N,logN,n,n_plus,n_minus,ratio,predicted,slope_so_far";

/// Writes the sweep CSV, one row per `(t, N)`; `slope_so_far` is the slope
/// over grid points up to and including the row.
pub fn write_sweep_csv<W: Write>(out: &mut W, symbol_id: &str, multiplier: &str, fits: &[DensityFit]) -> Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for fit in fits {
        let logs: Vec<f64> = fit.grid.iter().map(|g| (g.n as f64).ln()).collect();
        let counts: Vec<f64> = fit.grid.iter().map(|g| g.count as f64).collect();
        for (i, g) in fit.grid.iter().enumerate() {
            let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                symbol_id,
                multiplier,
                format_float(fit.t),
                g.n,
                format_float(logs[i]),
                g.count,
                opt(g.n_plus),
                opt(g.n_minus),
                format_float(fit.ratios[i]),
                format_float(fit.predicted),
                format_float(ols_slope(&logs[..=i], &counts[..=i])),
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sections::build_poisson_section;
    use std::f64::consts::PI;

    fn section_of(a: Vec<Vec<f64>>) -> FiniteSection {
        let n = a.len();
        let sec = build_hankel_section(&PCSymbol::hilbert(), &MultiplierSpec::square(), n, &SectionOptions::default())
            .unwrap();
        FiniteSection { entries: SectionEntries::Real(Mat::from_fn(n, n, |i, j| a[i][j])), meta: sec.meta }
    }

    #[test]
    fn one_by_one() {
        let s = section_of(vec![vec![1.0 / PI]]);
        let sum = spectral_summary(&s).unwrap();
        assert!((sum.singular_values[0] - 1.0 / PI).abs() < 1e-16);
        assert!((sum.eigenvalues.unwrap()[0] - 1.0 / PI).abs() < 1e-16);
    }

    #[test]
    fn hilbert_two_by_two_oracle() {
        let (a, b, d) = (1.0 / PI, 1.0 / (2.0 * PI), 1.0 / (3.0 * PI));
        let disc = ((a - d).powi(2) + 4.0 * b * b).sqrt();
        let (l1, l2) = ((a + d + disc) / 2.0, (a + d - disc) / 2.0);
        assert!((l1 - 0.40348703).abs() < 1e-8 && (l2 - 0.02092615).abs() < 1e-8);
        let sec = build_hankel_section(&PCSymbol::hilbert(), &MultiplierSpec::square(), 2, &SectionOptions::default())
            .unwrap();
        let s = spectral_summary(&sec).unwrap();
        let ev = s.eigenvalues.clone().unwrap();
        assert!((ev[0] - l1).abs() < 1e-15 && (ev[1] - l2).abs() < 1e-15);
        assert_eq!(s.count(0.4, CountMode::Plus).unwrap().value, 1);
    }

    #[test]
    fn counting_ties_and_modes() {
        let s = SpectralSummary::from_singular_values(vec![0.1, 0.9, 0.5]);
        let c = s.count(0.5, CountMode::Singular).unwrap();
        assert_eq!(c, Count { value: 1, tie: true });
        assert!(matches!(s.count(0.5, CountMode::Plus), Err(Error::Mode(_))));
        assert!(s.count(0.0, CountMode::Singular).is_err());
        let psi = build_hankel_section(&PCSymbol::psi(), &MultiplierSpec::square(), 64, &SectionOptions::default())
            .unwrap();
        let s = spectral_summary(&psi).unwrap();
        assert_eq!(s.count(10.0, CountMode::Plus).unwrap().value, 0);
        assert_eq!(s.count(10.0, CountMode::Minus).unwrap().value, 0);
    }

    #[test]
    fn adjoint_has_same_singular_values() {
        let sym = PCSymbol::gamma_z(1.0).unwrap();
        let sec = build_hankel_section(&sym, &MultiplierSpec::oblique(2.0, 1.0).unwrap(), 20, &SectionOptions::default())
            .unwrap();
        let a = spectral_summary(&sec).unwrap();
        let b = spectral_summary(&sec.adjoint()).unwrap();
        for (x, y) in a.singular_values.iter().zip(&b.singular_values) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn nuclear_norms() {
        let z = Mat::<C64>::zeros(4, 4);
        assert_eq!(nuclear_norm_matrix(&z).unwrap(), 0.0);
        let u = [C64::new(1.0, 1.0), C64::new(0.0, 2.0)];
        let v = [C64::new(3.0, 0.0), C64::new(0.0, -4.0), C64::new(1.0, 0.0)];
        let a = Mat::from_fn(2, 3, |i, j| u[i] * v[j].conj());
        let expected = (6.0f64).sqrt() * 26.0f64.sqrt();
        assert!((nuclear_norm_matrix(&a).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn trace_moments() {
        let r = 0.99;
        let sec = build_poisson_section(&PCSymbol::hilbert(), r, 0, &SectionOptions { tol: 1e-6, ..Default::default() })
            .unwrap();
        let t1 = trace_moment(&sec, 1).unwrap().re;
        let t2 = trace_moment(&sec, 2).unwrap().re;
        // Series oracles: Σ r^{2m}/(π(2m+1)) and Σ r^{2m}/(π²(m+1)).
        let s1: f64 = (0..100000).map(|m| r.powi(2 * m) / (PI * (2 * m + 1) as f64)).sum();
        let s2: f64 = (0..100000).map(|m| r.powi(2 * m) / (PI * PI * (m + 1) as f64)).sum();
        assert!((t1 / s1 - 1.0).abs() < 1e-8);
        assert!((t2 / s2 - 1.0).abs() < 1e-8);
        assert!((s1 - r.atanh() / (PI * r)).abs() < 1e-12);
        assert!((s2 + (1.0 - r * r).ln() / (PI * PI * r * r)).abs() < 1e-12);
        let id = FiniteSection { entries: SectionEntries::Real(Mat::identity(3, 3)), meta: sec.meta.clone() };
        assert!((trace_moment(&id, 5).unwrap().re - 3.0).abs() < 1e-14);
        assert!(matches!(trace_moment(&id, 9), Err(Error::Parameter(_))));
        // Non-Hermitian path agrees with eigen path on a symmetric matrix.
        let small = build_poisson_section(&PCSymbol::hilbert(), 0.8, 30, &SectionOptions::default()).unwrap();
        let cplx = FiniteSection { entries: SectionEntries::Complex(small.to_complex()), meta: small.meta.clone() };
        assert!((trace_moment(&small, 3).unwrap() - trace_moment(&cplx, 3).unwrap()).norm() < 1e-13);
    }

    #[test]
    fn slope_and_sweep() {
        assert!((ols_slope(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]) - 2.0).abs() < 1e-15);
        let fits = logdens_sweep(
            &PCSymbol::hilbert(),
            &MultiplierSpec::square(),
            &[1.5, 0.2],
            &[16, 32, 64],
            &SectionOptions::default(),
        )
        .unwrap();
        assert!(fits[0].grid.iter().all(|g| g.count == 0) && fits[0].slope == 0.0);
        assert!(fits[1].grid.iter().all(|g| g.n_minus == Some(0)));
        assert!(logdens_sweep(&PCSymbol::hilbert(), &MultiplierSpec::square(), &[0.2], &[16, 32], &SectionOptions::default())
            .is_err());
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, "gamma", "square", &fits).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 7);
        assert!(text.starts_with(SWEEP_HEADER));
    }

    #[test]
    fn gaps() {
        let o = SectionOptions::default();
        let g = PCSymbol::hilbert();
        let same = invariance_gap(&g, &MultiplierSpec::square(), &MultiplierSpec::square(), 0.3, &[16, 32], &o).unwrap();
        assert_eq!(same, vec![0, 0]);
        assert!(matches!(
            symmetry_gap(&g, &MultiplierSpec::square(), 0.3, &[16, 32], &o),
            Err(Error::Precondition(_))
        ));
        let pair = PCSymbol::conjugate_pair(PI / 3.0, C64::new(1.0, 0.0)).unwrap();
        let gaps = symmetry_gap(&pair, &MultiplierSpec::abel_poisson(), 0.3, &[16, 32, 64], &o).unwrap();
        assert!(gaps.iter().all(|g| *g <= 2));
    }
}
