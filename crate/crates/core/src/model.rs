//! Closed-form oracles for the Hilbert matrix and the Poisson trace asymptotics.

use std::f64::consts::PI;

use faer::{Mat, Side};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::quadrature::integrate_until_stable;
use crate::C64;

/// `1/(π(j+k+1))`, the Hilbert matrix `Γ(γ̂)`.
pub fn hilbert_entry(j: usize, k: usize) -> f64 {
    1.0 / (PI * (j + k + 1) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SechMoment {
    pub m: u32,
    /// `∫_ℝ sech^m(πη) dη`.
    pub value: f64,
}

/// `∫_ℝ sech^m(πη) dη` by panel doubling on `[0, T]` with `sech^m(πT) < 1e-14`.
pub fn sech_moment(m: u32) -> Result<SechMoment> {
    if m == 0 {
        return Err(Error::Domain("sech moment order must be positive".into()));
    }
    let t = (10f64.powf(14.0 / m as f64)).acosh() / PI;
    let f = |x: f64| (PI * x).cosh().recip().powi(m as i32);
    let half = integrate_until_stable(f, 0.0, t, 1e-11, 24)
        .ok_or_else(|| Error::Numeric(format!("sech moment m={m}: quadrature did not settle")))?;
    Ok(SechMoment { m, value: 2.0 * half })
}

/// `|log(1−r)|·∫sech^m(πη)dη/(2π r^m)`, the leading term of `Tr Γ^{(r)}(γ̂)^m`.
pub fn trace_moment_prediction(m: u32, r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!("r must lie in (0,1), got {r}")));
    }
    Ok((1.0 - r).ln().abs() * sech_moment(m)?.value / (2.0 * PI * r.powi(m as i32)))
}

/// Exact `Tr Γ^{(r)}(γ̂) = artanh(r)/(πr)`.
pub fn poisson_hilbert_trace1(r: f64) -> f64 {
    r.atanh() / (PI * r)
}

/// Exact `Tr Γ^{(r)}(γ̂)² = −log(1−r²)/(π²r²)`.
pub fn poisson_hilbert_trace2(r: f64) -> f64 {
    -(1.0 - r * r).ln() / (PI * PI * r * r)
}

/// Heuristic `k`-th eigenvalue `sech(π²k/log N)` from inverting `k = c(λ) log N`.
pub fn widom_eigenvalue_profile(k: usize, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain("profile needs N ≥ 2".into()));
    }
    widom_profile_log(k, (n as f64).ln())
}

/// [`widom_eigenvalue_profile`] with `log N` given directly.
pub fn widom_profile_log(k: usize, log_n: f64) -> Result<f64> {
    if k == 0 || !(log_n > 0.0) {
        return Err(Error::Domain("profile needs k ≥ 1 and log N > 0".into()));
    }
    Ok((PI * PI * k as f64 / log_n).cosh().recip())
}

/// Real polynomial `Σ c_k x^k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polynomial {
    pub coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Polynomial { coeffs }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect())
    }

    /// `max |p|` on `[a, b]`, from the endpoints and the real critical points.
    pub fn max_abs_on(&self, a: f64, b: f64) -> Result<f64> {
        let mut best = self.eval(a).abs().max(self.eval(b).abs());
        for x in linalg::real_polynomial_roots(&self.derivative().coeffs)? {
            if x > a && x < b {
                best = best.max(self.eval(x).abs());
            }
        }
        Ok(best)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceDifferenceReport {
    /// `Tr φ(PBP)`.
    pub compressed: f64,
    /// `Tr P φ(B) P`.
    pub projected: f64,
    pub difference: f64,
    /// `‖φ″‖·‖PB(I−P)‖²_{S₂}`.
    pub bound: f64,
    pub holds: bool,
}

/// Checks `|Tr φ(PBP) − Tr Pφ(B)P| ≤ ‖φ″‖_{L∞[−‖B‖,‖B‖]} ‖PB(I−P)‖²_{S₂}`
/// for a diagonal projection `P` given by `keep`.
pub fn trace_difference_check(b: &Mat<C64>, keep: &[bool], phi: &Polynomial) -> Result<TraceDifferenceReport> {
    let n = b.nrows();
    if b.ncols() != n || keep.len() != n {
        return Err(Error::Domain("B must be square and P must match its size".into()));
    }
    if (0..n).any(|j| (j..n).any(|i| (b[(i, j)] - b[(j, i)].conj()).norm() > 1e-12)) {
        return Err(Error::Domain("B must be Hermitian".into()));
    }
    if phi.eval(0.0).abs() > 1e-14 {
        return Err(Error::Domain("φ must vanish at 0".into()));
    }
    let kept: Vec<usize> = (0..n).filter(|i| keep[*i]).collect();
    let pbp = Mat::from_fn(kept.len(), kept.len(), |i, j| b[(kept[i], kept[j])]);
    let compressed: f64 = if kept.is_empty() {
        0.0
    } else {
        linalg::hermitian_eigenvalues(pbp.as_ref())?.iter().map(|x| phi.eval(*x)).sum()
    };
    let eig = b
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numeric(format!("eigensolver: {e:?}")))?;
    let (u, s) = (eig.U(), eig.S().column_vector());
    let mut projected = 0.0;
    let mut norm_b: f64 = 0.0;
    for l in 0..n {
        let lambda = s[l].re;
        norm_b = norm_b.max(lambda.abs());
        let weight: f64 = kept.iter().map(|i| u[(*i, l)].norm_sqr()).sum();
        projected += phi.eval(lambda) * weight;
    }
    let off: f64 = kept
        .iter()
        .flat_map(|i| (0..n).filter(|j| !keep[*j]).map(move |j| b[(*i, j)].norm_sqr()))
        .sum();
    let bound = phi.derivative().derivative().max_abs_on(-norm_b, norm_b)? * off;
    let difference = compressed - projected;
    // Rounding slack: both traces carry O(n·ε·‖φ(B)‖) error.
    let slack = 1e-10 * (1.0 + compressed.abs() + projected.abs());
    Ok(TraceDifferenceReport { compressed, projected, difference, bound, holds: difference.abs() <= bound + slack })
}
