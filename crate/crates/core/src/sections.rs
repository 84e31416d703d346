//! Dense finite sections `τ_N ⋆ Γ(ω̂)`, Poisson sections `Γ^{(r)}(ω̂)`, and
//! operator windows on the Fourier modes `−M..M−1`.

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use faer::Mat;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::multipliers::MultiplierSpec;
use crate::symbols::PCSymbol;
use crate::{format_float, C64};

/// Default dimension cap; a complex section at the cap takes 4 GiB.
pub const DEFAULT_MAX_DIM: usize = 16384;
/// Projection-route windows fail when their dropped coefficient mass exceeds this.
pub const WINDOW_ACCURACY_LIMIT: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionOptions {
    pub tol: f64,
    pub max_dim: usize,
}

impl Default for SectionOptions {
    fn default() -> Self {
        SectionOptions { tol: 1e-2, max_dim: DEFAULT_MAX_DIM }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SectionEntries {
    Real(Mat<f64>),
    Complex(Mat<C64>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectionMeta {
    pub symbol_id: String,
    pub multiplier: String,
    pub n: usize,
    pub dim: usize,
    pub tol: f64,
    /// Frobenius-norm bound on the discarded part of the infinite matrix.
    pub tail_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSection {
    pub entries: SectionEntries,
    pub meta: SectionMeta,
}

impl FiniteSection {
    pub fn dim(&self) -> usize {
        match &self.entries {
            SectionEntries::Real(m) => m.nrows(),
            SectionEntries::Complex(m) => m.nrows(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        match &self.entries {
            SectionEntries::Real(m) => C64::new(m[(i, j)], 0.0),
            SectionEntries::Complex(m) => m[(i, j)],
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self.entries, SectionEntries::Real(_))
    }

    pub fn to_complex(&self) -> Mat<C64> {
        match &self.entries {
            SectionEntries::Real(m) => crate::linalg::to_complex(m.as_ref()),
            SectionEntries::Complex(m) => m.clone(),
        }
    }

    /// Entrywise `|a_ij − conj(a_ji)| ≤ tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.dim();
        match &self.entries {
            SectionEntries::Real(m) => (0..n).all(|j| (j..n).all(|i| (m[(i, j)] - m[(j, i)]).abs() <= tol)),
            SectionEntries::Complex(m) => {
                (0..n).all(|j| (j..n).all(|i| (m[(i, j)] - m[(j, i)].conj()).norm() <= tol))
            }
        }
    }

    pub fn adjoint(&self) -> FiniteSection {
        let entries = match &self.entries {
            SectionEntries::Real(m) => SectionEntries::Real(m.transpose().to_owned()),
            SectionEntries::Complex(m) => SectionEntries::Complex(m.adjoint().to_owned()),
        };
        FiniteSection { entries, meta: self.meta.clone() }
    }

    /// Writes `row,col,re,im` lines in row-major order and a `.json` sidecar
    /// with the metadata next to `path`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "row,col,re,im")?;
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let z = self.get(i, j);
                writeln!(out, "{i},{j},{},{}", format_float(z.re), format_float(z.im))?;
            }
        }
        out.flush()?;
        let sidecar = path.with_extension("json");
        let meta = serde_json::to_string_pretty(&self.meta).map_err(|e| Error::Io(e.to_string()))?;
        std::fs::write(sidecar, meta + "\n")?;
        Ok(())
    }
}

fn check_cap(what: &str, dim: usize, cap: usize) -> Result<()> {
    if dim > cap {
        return Err(Error::Resource { what: what.into(), dim, cap });
    }
    Ok(())
}

/// Coefficients count as real when their imaginary parts are rounding noise.
fn nearly_real(c: &[C64]) -> bool {
    let scale = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
    c.iter().all(|z| z.im.abs() <= 1e-13 * scale)
}

fn assemble(dim: usize, real: bool, entry: impl Fn(usize, usize) -> C64) -> SectionEntries {
    if real {
        SectionEntries::Real(Mat::from_fn(dim, dim, |i, j| entry(i, j).re))
    } else {
        SectionEntries::Complex(Mat::from_fn(dim, dim, entry))
    }
}

/// `τ_N ⋆ Γ(ω̂)` realised on `dim = effective_dimension(τ, N, tol)` rows.
pub fn build_hankel_section(
    sym: &PCSymbol,
    mult: &MultiplierSpec,
    n: usize,
    opts: &SectionOptions,
) -> Result<FiniteSection> {
    let dim = mult.effective_dimension(n, opts.tol)?;
    check_cap(&format!("section for N={n}"), dim, opts.max_dim)?;
    let coeffs = sym.coefficients(2 * dim - 1);
    let real = mult.is_real() && nearly_real(&coeffs);
    let entries = match (0..2 * dim - 1).map(|s| mult.antidiagonal_value(n, s)).collect::<Option<Vec<f64>>>() {
        Some(profile) => {
            let diag: Vec<C64> = coeffs.iter().zip(&profile).map(|(c, t)| c * t).collect();
            assemble(dim, real, |i, j| diag[i + j])
        }
        None => assemble(dim, real, |i, j| mult.scaled_value(n, i, j) * coeffs[i + j]),
    };
    let tail_bound = PI * sym.coefficient_envelope(dim) * mult.discarded_mass(n, dim).sqrt();
    Ok(FiniteSection {
        entries,
        meta: SectionMeta {
            symbol_id: sym.id().into(),
            multiplier: mult.name(),
            n,
            dim,
            tol: opts.tol,
            tail_bound,
            r: None,
        },
    })
}

/// Section size `⌈ln(1/tol)/(1−r)⌉` used when no explicit size is given.
pub fn poisson_dimension(r: f64, tol: f64) -> usize {
    ((1.0 / tol).ln() / (1.0 - r)).ceil().max(1.0) as usize
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("Poisson radius must lie in (0,1), got {r}")))
    }
}

/// `Γ^{(r)}(ω̂) = {r^{j+k} ω̂(j+k)}` on `m` rows; `m = 0` picks
/// [`poisson_dimension`] from `opts.tol`.
pub fn build_poisson_section(sym: &PCSymbol, r: f64, m: usize, opts: &SectionOptions) -> Result<FiniteSection> {
    check_radius(r)?;
    let dim = if m == 0 { poisson_dimension(r, opts.tol) } else { m };
    check_cap(&format!("Poisson section for r={r}"), dim, opts.max_dim)?;
    let ln_r = r.ln();
    let diag: Vec<C64> = (0..2 * dim - 1)
        .map(|s| sym.canonical_fourier_coeff(s as u64) * (s as f64 * ln_r).exp())
        .collect();
    let real = nearly_real(&diag);
    let entries = assemble(dim, real, |i, j| diag[i + j]);
    let k = sym.coefficient_envelope(dim);
    let tail_bound = k * (dim as f64 * ln_r).exp() / ((dim as f64 + 1.0) * (1.0 - r * r)).sqrt();
    Ok(FiniteSection {
        entries,
        meta: SectionMeta {
            symbol_id: sym.id().into(),
            multiplier: "poisson".into(),
            n: 0,
            dim,
            tol: opts.tol,
            tail_bound,
            r: Some(r),
        },
    })
}

/// Dense operator window on modes `−M..M−1`; row/column `a` is mode `a − M`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierWindow {
    pub m: usize,
    pub matrix: Mat<C64>,
    /// Modes whose image under the flip falls outside the window.
    pub unpaired: Vec<i64>,
}

impl FourierWindow {
    pub fn size(&self) -> usize {
        2 * self.m
    }

    pub fn mode(&self, index: usize) -> i64 {
        index as i64 - self.m as i64
    }

    pub fn index(&self, mode: i64) -> Option<usize> {
        let a = mode + self.m as i64;
        (0..2 * self.m as i64).contains(&a).then_some(a as usize)
    }

    /// Product of two windows on the same modes.
    pub fn then(&self, other: &FourierWindow) -> FourierWindow {
        FourierWindow { m: self.m, matrix: &self.matrix * &other.matrix, unpaired: Vec::new() }
    }
}

/// `T[a,b] = coeff(n_a − n_b)`.
pub fn toeplitz_window(coeff: &dyn Fn(i64) -> C64, m: usize) -> FourierWindow {
    let table: Vec<C64> = (-(2 * m as i64 - 1)..=(2 * m as i64 - 1)).map(coeff).collect();
    let off = 2 * m - 1;
    let matrix = Mat::from_fn(2 * m, 2 * m, |a, b| table[off + a - b]);
    FourierWindow { m, matrix, unpaired: Vec::new() }
}

/// Riesz projection `P₊` onto modes `n ≥ 0`.
pub fn riesz_window(m: usize) -> FourierWindow {
    let matrix = Mat::from_fn(2 * m, 2 * m, |a, b| C64::new(if a == b && a >= m { 1.0 } else { 0.0 }, 0.0));
    FourierWindow { m, matrix, unpaired: Vec::new() }
}

/// Flip `J: zⁿ ↦ z⁻ⁿ`; mode `−M` has no partner in the window.
pub fn flip_window(m: usize) -> FourierWindow {
    let matrix = Mat::from_fn(2 * m, 2 * m, |a, b| C64::new(if a + b == 2 * m { 1.0 } else { 0.0 }, 0.0));
    FourierWindow { m, matrix, unpaired: vec![-(m as i64)] }
}

/// `ŝ(n)` for `𝔰(v) = sign(Im v)`: `−2i/(πn)` for odd `n`, else `0`.
pub fn sign_coeff(n: i64) -> C64 {
    if n % 2 == 0 {
        C64::new(0.0, 0.0)
    } else {
        C64::new(0.0, -2.0 / (PI * n as f64))
    }
}

/// Coefficients of `ω_r = P_r ∗ ω`: `r^{|n|} ω̂(n)`.
pub fn poisson_smoothed_coeff(sym: &PCSymbol, r: f64) -> impl Fn(i64) -> C64 + '_ {
    let ln_r = r.ln();
    move |n| sym.fourier_coeff(n) * (n.unsigned_abs() as f64 * ln_r).exp()
}

/// Window of `H(ω_r) = P₊ ω_r J P₊`.
pub fn hankel_window(sym: &PCSymbol, r: f64, m: usize) -> Result<FourierWindow> {
    check_radius(r)?;
    if m == 0 {
        return Err(Error::Domain("window needs M ≥ 1".into()));
    }
    let coeff = poisson_smoothed_coeff(sym, r);
    let p = riesz_window(m);
    let t = toeplitz_window(&coeff, m);
    let j = flip_window(m);
    Ok(p.then(&t).then(&j).then(&p))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionSection {
    pub section: FiniteSection,
    pub interior: usize,
    /// Bound on the coefficient mass the window drops.
    pub bound: f64,
}

/// Builds `P₊ ω_r J P₊` as a product of windows and returns its `H²` block on
/// the interior `M − margin` modes (default margin `M/4`).
pub fn hankel_via_projections(sym: &PCSymbol, r: f64, m: usize, margin: Option<usize>) -> Result<ProjectionSection> {
    check_radius(r)?;
    let margin = margin.unwrap_or(m / 4);
    let k = sym.coefficient_envelope(2 * m);
    let bound = k * (r.ln() * (2 * m - 1) as f64).exp() / ((2 * m) as f64 * (1.0 - r));
    if margin >= m {
        return Err(Error::Accuracy { reason: format!("margin {margin} leaves no interior in M={m}"), bound });
    }
    if bound >= WINDOW_ACCURACY_LIMIT {
        return Err(Error::Accuracy { reason: format!("coefficient tail too heavy for M={m} at r={r}"), bound });
    }
    let w = hankel_window(sym, r, m)?;
    let interior = m - margin;
    let block: Vec<C64> = (0..interior * interior).map(|x| w.matrix[(m + x / interior, m + x % interior)]).collect();
    let real = nearly_real(&block);
    let entries = assemble(interior, real, |i, j| block[i * interior + j]);
    Ok(ProjectionSection {
        section: FiniteSection {
            entries,
            meta: SectionMeta {
                symbol_id: sym.id().into(),
                multiplier: "projection".into(),
                n: 0,
                dim: interior,
                tol: WINDOW_ACCURACY_LIMIT,
                tail_bound: bound,
                r: Some(r),
            },
        },
        interior,
        bound,
    })
}

/// Window of `𝔰 H(ω_r) + H(ω_r) 𝔰`.
pub fn anticommutator_window(sym: &PCSymbol, r: f64, m: usize) -> Result<Mat<C64>> {
    if sym.has_axis_jump() {
        return Err(Error::Precondition("anticommutator needs a symbol without jumps at ±1".into()));
    }
    let h = hankel_window(sym, r, m)?;
    let s = toeplitz_window(&sign_coeff, m);
    Ok(&s.matrix * &h.matrix + &h.matrix * &s.matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_until_stable;
    use std::collections::BTreeMap;

    fn opts() -> SectionOptions {
        SectionOptions::default()
    }

    #[test]
    fn hilbert_three_by_three() {
        let s = build_hankel_section(&PCSymbol::hilbert(), &MultiplierSpec::square(), 3, &opts()).unwrap();
        assert!(s.is_real());
        for i in 0..3 {
            for j in 0..3 {
                assert!((s.get(i, j).re - 1.0 / (PI * (i + j + 1) as f64)).abs() < 1e-16);
            }
        }
        assert_eq!(s.meta.tail_bound, 0.0);
    }

    #[test]
    fn abel_entries() {
        let p = PCSymbol::psi();
        let n = 16;
        let s = build_hankel_section(&p, &MultiplierSpec::abel_poisson(), n, &opts()).unwrap();
        for (i, j) in [(0, 0), (3, 5), (20, 1)] {
            let expected = (-((i + j) as f64) / n as f64).exp() * p.canonical_fourier_coeff((i + j) as u64);
            assert!((s.get(i, j) - expected).norm() < 1e-15);
        }
        assert!(s.meta.tail_bound > 0.0 && s.meta.tail_bound <= PI * p.coefficient_envelope(0) * 1e-2);
    }

    #[test]
    fn zero_symbol_zero_section() {
        let s = build_hankel_section(&PCSymbol::zero(), &MultiplierSpec::fejer(), 5, &opts()).unwrap();
        assert!((0..5).all(|i| (0..5).all(|j| s.get(i, j).norm() == 0.0)));
    }

    #[test]
    fn resource_cap() {
        let o = SectionOptions { tol: 1e-2, max_dim: 10 };
        let e = build_hankel_section(&PCSymbol::hilbert(), &MultiplierSpec::square(), 11, &o).unwrap_err();
        assert!(matches!(e, Error::Resource { dim: 11, cap: 10, .. }));
    }

    #[test]
    fn poisson_examples() {
        let g = PCSymbol::hilbert();
        let s = build_poisson_section(&g, 0.5, 4, &opts()).unwrap();
        assert!((s.get(1, 1).re - 0.25 / (3.0 * PI)).abs() < 1e-16);
        let tiny = build_poisson_section(&g, 1e-6, 3, &opts()).unwrap();
        assert!((tiny.get(0, 0).re - 1.0 / PI).abs() < 1e-15);
        for i in 0..3 {
            for j in 0..3 {
                if i + j > 0 {
                    assert!(tiny.get(i, j).norm() <= 1e-6 / PI);
                }
            }
        }
        assert!(build_poisson_section(&g, 1.0, 3, &opts()).is_err());
        assert_eq!(build_poisson_section(&g, 0.9, 0, &opts()).unwrap().dim(), poisson_dimension(0.9, 1e-2));
    }

    #[test]
    fn poisson_matches_abel() {
        let p = PCSymbol::psi();
        let n = 40;
        let a = build_hankel_section(&p, &MultiplierSpec::abel_poisson(), n, &opts()).unwrap();
        let b = build_poisson_section(&p, (-1.0 / n as f64).exp(), a.dim(), &opts()).unwrap();
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let (x, y) = (a.get(i, j), b.get(i, j));
                assert!((x - y).norm() <= 1e-13 * x.norm().max(1e-300));
            }
        }
    }

    #[test]
    fn sign_coefficients_against_quadrature() {
        // ŝ(n) = (1/2π) ∫ sign(sin θ) e^{−inθ} dθ.
        for n in -7i64..=7 {
            let re = integrate_until_stable(
                |t: f64| t.sin().signum() * (n as f64 * t).cos() / (2.0 * PI),
                0.0,
                PI,
                1e-13,
                20,
            )
            .unwrap()
                + integrate_until_stable(
                    |t: f64| t.sin().signum() * (n as f64 * t).cos() / (2.0 * PI),
                    PI,
                    2.0 * PI,
                    1e-13,
                    20,
                )
                .unwrap();
            let im_f = |t: f64| -t.sin().signum() * (n as f64 * t).sin() / (2.0 * PI);
            let im = integrate_until_stable(im_f, 0.0, PI, 1e-13, 20).unwrap()
                + integrate_until_stable(im_f, PI, 2.0 * PI, 1e-13, 20).unwrap();
            let z = sign_coeff(n);
            assert!((z.re - re).abs() < 1e-12 && (z.im - im).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn windows() {
        let id = toeplitz_window(&|n| C64::new(if n == 0 { 1.0 } else { 0.0 }, 0.0), 4);
        assert_eq!(id.matrix, Mat::<C64>::identity(8, 8));
        let s = toeplitz_window(&sign_coeff, 8);
        for a in 0..16 {
            for b in 0..16 {
                assert!((s.matrix[(a, b)] - s.matrix[(b, a)].conj()).norm() < 1e-16);
            }
        }
        let r: f64 = 0.7;
        let pr = toeplitz_window(&|n| C64::new(r.powi(n.unsigned_abs() as i32), 0.0), 6);
        let ev = crate::linalg::hermitian_eigenvalues(pr.matrix.as_ref()).unwrap();
        assert!(ev.iter().all(|x| *x > 0.0));
        let j = flip_window(3);
        assert_eq!(j.unpaired, vec![-3]);
        assert_eq!(j.matrix[(j.index(2).unwrap(), j.index(-2).unwrap())], C64::new(1.0, 0.0));
        assert!((0..6).all(|b| j.matrix[(b, 0)].norm() == 0.0));
    }

    #[test]
    fn projection_route_agrees() {
        let g = PCSymbol::hilbert();
        let proj = hankel_via_projections(&g, 0.9, 256, Some(64)).unwrap();
        let direct = build_poisson_section(&g, 0.9, proj.interior, &opts()).unwrap();
        let mut err: f64 = 0.0;
        for i in 0..proj.interior {
            for j in 0..proj.interior {
                err = err.max((proj.section.get(i, j) - direct.get(i, j)).norm());
            }
        }
        assert!(err < 1e-6, "{err}");
        let p = PCSymbol::psi();
        let proj = hankel_via_projections(&p, 0.9, 256, None).unwrap();
        let direct = build_poisson_section(&p, 0.9, proj.interior, &opts()).unwrap();
        let mut err: f64 = 0.0;
        for i in 0..proj.interior {
            for j in 0..proj.interior {
                err = err.max((proj.section.get(i, j) - direct.get(i, j)).norm());
            }
        }
        assert!(err < 1e-4 && err <= proj.bound.max(1e-12), "{err}");
        let zero = hankel_via_projections(&PCSymbol::zero(), 0.9, 16, None).unwrap();
        assert!((0..12).all(|i| (0..12).all(|j| zero.section.get(i, j).norm() == 0.0)));
        assert!(matches!(hankel_via_projections(&g, 0.9, 16, Some(16)), Err(Error::Accuracy { .. })));
        assert!(matches!(hankel_via_projections(&g, 0.999, 16, None), Err(Error::Accuracy { .. })));
    }

    #[test]
    fn anticommutator_examples() {
        assert!(anticommutator_window(&PCSymbol::hilbert(), 0.9, 8).is_err());
        let z = anticommutator_window(&PCSymbol::zero(), 0.9, 8).unwrap();
        assert!(crate::linalg::frobenius_complex(z.as_ref()) == 0.0);
        let psi = anticommutator_window(&PCSymbol::psi(), 0.9, 64).unwrap();
        let nn = crate::linalg::nuclear_norm_complex(psi.as_ref()).unwrap();
        assert!(nn.is_finite() && nn > 0.0);
        let mut c = BTreeMap::new();
        c.insert(1, C64::new(0.5, 0.0));
        c.insert(4, C64::new(-0.25, 0.1));
        c.insert(-2, C64::new(0.3, 0.0));
        let eta = PCSymbol::new("eta", vec![], crate::symbols::SmoothPart::trig(c).unwrap()).unwrap();
        let a = anticommutator_window(&eta, 0.9, 32).unwrap();
        let h = hankel_window(&eta, 0.9, 32).unwrap();
        let lhs = crate::linalg::nuclear_norm_complex(a.as_ref()).unwrap();
        let rhs = 2.0 * crate::linalg::nuclear_norm_complex(h.matrix.as_ref()).unwrap();
        assert!(lhs <= rhs * (1.0 + 1e-12));
    }

    #[test]
    fn csv_dump() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.csv");
        let s = build_hankel_section(&PCSymbol::hilbert(), &MultiplierSpec::square(), 2, &opts()).unwrap();
        s.write_csv(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert!(text.lines().nth(1).unwrap().starts_with("0,0,3.1830988618379069e-1"));
        let meta: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path.with_extension("json")).unwrap()).unwrap();
        assert_eq!(meta["dim"], 2);
    }
}
