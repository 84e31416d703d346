//! Schur–Hadamard multipliers `τ(x, y)` and their scalings `τ_N(j,k) = τ(j/N, k/N)`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

pub type Rule = Arc<dyn Fn(f64, f64) -> C64 + Send + Sync>;

#[derive(Clone)]
pub enum MultiplierKind {
    Square,
    AbelPoisson,
    DirichletTriangle,
    Fejer,
    Oblique { beta: f64, gamma: f64 },
    /// A pure rule vanishing whenever `max(x, y) ≥ support`.
    Custom { name: String, rule: Rule, support: f64, hermitian: bool },
}

impl fmt::Debug for MultiplierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultiplierKind::Custom { name, support, hermitian, .. } => f
                .debug_struct("Custom")
                .field("name", name)
                .field("support", support)
                .field("hermitian", hermitian)
                .finish(),
            other => f.write_str(&MultiplierSpec { kind: other.clone() }.name()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MultiplierSpec {
    kind: MultiplierKind,
}

/// Serialized form: `{"kind": "square" | "abel_poisson" | "dirichlet" | "fejer" | "oblique", "beta", "gamma"}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MultiplierJson {
    // Empty struct variants so that unknown fields are rejected.
    Square {},
    AbelPoisson {},
    Dirichlet {},
    Fejer {},
    Oblique { beta: f64, gamma: f64 },
}

impl MultiplierSpec {
    pub fn square() -> Self {
        MultiplierSpec { kind: MultiplierKind::Square }
    }

    pub fn abel_poisson() -> Self {
        MultiplierSpec { kind: MultiplierKind::AbelPoisson }
    }

    pub fn dirichlet() -> Self {
        MultiplierSpec { kind: MultiplierKind::DirichletTriangle }
    }

    pub fn fejer() -> Self {
        MultiplierSpec { kind: MultiplierKind::Fejer }
    }

    pub fn oblique(beta: f64, gamma: f64) -> Result<Self> {
        if !beta.is_finite() || !gamma.is_finite() {
            return Err(Error::Domain("oblique parameters must be finite".into()));
        }
        Ok(MultiplierSpec { kind: MultiplierKind::Oblique { beta, gamma } })
    }

    /// `rule` must be pure and vanish for `max(x, y) ≥ support`.
    pub fn custom(name: impl Into<String>, support: f64, hermitian: bool, rule: Rule) -> Result<Self> {
        if !(support > 0.0 && support.is_finite()) {
            return Err(Error::Domain("custom multiplier support must be positive and finite".into()));
        }
        Ok(MultiplierSpec { kind: MultiplierKind::Custom { name: name.into(), rule, support, hermitian } })
    }

    pub fn from_json(json: &MultiplierJson) -> Result<Self> {
        Ok(match *json {
            MultiplierJson::Square {} => Self::square(),
            MultiplierJson::AbelPoisson {} => Self::abel_poisson(),
            MultiplierJson::Dirichlet {} => Self::dirichlet(),
            MultiplierJson::Fejer {} => Self::fejer(),
            MultiplierJson::Oblique { beta, gamma } => Self::oblique(beta, gamma)?,
        })
    }

    pub fn to_json(&self) -> Option<MultiplierJson> {
        Some(match self.kind {
            MultiplierKind::Square => MultiplierJson::Square {},
            MultiplierKind::AbelPoisson => MultiplierJson::AbelPoisson {},
            MultiplierKind::DirichletTriangle => MultiplierJson::Dirichlet {},
            MultiplierKind::Fejer => MultiplierJson::Fejer {},
            MultiplierKind::Oblique { beta, gamma } => MultiplierJson::Oblique { beta, gamma },
            MultiplierKind::Custom { .. } => return None,
        })
    }

    pub fn kind(&self) -> &MultiplierKind {
        &self.kind
    }

    pub fn name(&self) -> String {
        match &self.kind {
            MultiplierKind::Square => "square".into(),
            MultiplierKind::AbelPoisson => "abel_poisson".into(),
            MultiplierKind::DirichletTriangle => "dirichlet".into(),
            MultiplierKind::Fejer => "fejer".into(),
            MultiplierKind::Oblique { beta, gamma } => format!("oblique_{beta}_{gamma}"),
            MultiplierKind::Custom { name, .. } => name.clone(),
        }
    }

    /// `τ(x,y) = conj(τ(y,x))` holds for the whole family.
    pub fn hermitian(&self) -> bool {
        match &self.kind {
            MultiplierKind::Oblique { beta, .. } => *beta == 1.0,
            MultiplierKind::Custom { hermitian, .. } => *hermitian,
            _ => true,
        }
    }

    /// Oblique truncations with `β ∉ {0, 1}` are uniformly bounded only on
    /// Hankel matrices, not as general multipliers.
    pub fn hankel_only_bounded(&self) -> bool {
        matches!(self.kind, MultiplierKind::Oblique { beta, .. } if beta != 0.0 && beta != 1.0)
    }

    /// The scaled value depends on `j + k` alone within the section, so
    /// sections keep their Hankel structure.
    pub fn is_antidiagonal(&self) -> bool {
        !matches!(self.kind, MultiplierKind::Oblique { .. } | MultiplierKind::Custom { .. })
    }

    /// All values are real.
    pub fn is_real(&self) -> bool {
        !matches!(self.kind, MultiplierKind::Custom { .. })
    }

    pub fn evaluate(&self, x: f64, y: f64) -> C64 {
        let real = |v: f64| C64::new(v, 0.0);
        let ind = |b: bool| if b { 1.0 } else { 0.0 };
        match &self.kind {
            MultiplierKind::Square => real(ind(x < 1.0 && y < 1.0)),
            MultiplierKind::AbelPoisson => real((-(x + y)).exp()),
            MultiplierKind::DirichletTriangle => real(ind(x + y < 1.0)),
            MultiplierKind::Fejer => real(if x + y < 1.0 { 1.0 - (x + y) } else { 0.0 }),
            MultiplierKind::Oblique { beta, gamma } => {
                real(ind(x <= 1.0 && y <= 1.0 && x <= -beta * y + gamma))
            }
            MultiplierKind::Custom { rule, .. } => rule(x, y),
        }
    }

    /// `τ_N(j, k)`. Indicator families are decided in integer arithmetic so
    /// that boundaries `j + k = N` are exact.
    pub fn scaled_value(&self, n: usize, j: usize, k: usize) -> C64 {
        let real = |v: f64| C64::new(v, 0.0);
        let ind = |b: bool| if b { 1.0 } else { 0.0 };
        let nf = n as f64;
        match &self.kind {
            MultiplierKind::Square => real(ind(j < n && k < n)),
            MultiplierKind::AbelPoisson => real((-((j + k) as f64) / nf).exp()),
            MultiplierKind::DirichletTriangle => real(ind(j + k < n)),
            MultiplierKind::Fejer => real(if j + k < n { (n - j - k) as f64 / nf } else { 0.0 }),
            MultiplierKind::Oblique { beta, gamma } => {
                real(ind(j <= n && k <= n && j as f64 <= -beta * k as f64 + gamma * nf))
            }
            MultiplierKind::Custom { rule, .. } => rule(j as f64 / nf, k as f64 / nf),
        }
    }

    /// The value of an anti-diagonal family on `j + k = s` inside its section.
    pub fn antidiagonal_value(&self, n: usize, s: usize) -> Option<f64> {
        let nf = n as f64;
        match self.kind {
            // Square sections are N×N, where the multiplier is identically 1.
            MultiplierKind::Square => Some(1.0),
            MultiplierKind::AbelPoisson => Some((-(s as f64) / nf).exp()),
            MultiplierKind::DirichletTriangle => Some(if s < n { 1.0 } else { 0.0 }),
            MultiplierKind::Fejer => Some(if s < n { (n - s) as f64 / nf } else { 0.0 }),
            _ => None,
        }
    }

    /// Smallest section size `M` that discards an anti-diagonal wedge of
    /// squared Hilbert-weighted mass below `tol²`; compactly supported
    /// families return their exact support size.
    pub fn effective_dimension(&self, n: usize, tol: f64) -> Result<usize> {
        if n == 0 {
            return Err(Error::Domain("N must be at least 1".into()));
        }
        if !(tol > 0.0 && tol < 1.0) {
            return Err(Error::Domain(format!("tol must lie in (0,1), got {tol}")));
        }
        Ok(match &self.kind {
            MultiplierKind::Square | MultiplierKind::DirichletTriangle | MultiplierKind::Fejer => n,
            MultiplierKind::Oblique { beta, gamma } => oblique_support(n, *beta, *gamma),
            MultiplierKind::Custom { support, .. } => ((support * n as f64).ceil() as usize).max(1),
            MultiplierKind::AbelPoisson => abel_dimension(n, tol),
        })
    }

    /// Squared Hilbert-weighted mass `Σ_{s ≥ m} |τ_N(s)|²/(π²(s+1))` discarded by
    /// a section of size `m`, for anti-diagonal families.
    pub fn discarded_mass(&self, n: usize, m: usize) -> f64 {
        match self.kind {
            MultiplierKind::AbelPoisson => abel_tail(n, m),
            _ => 0.0,
        }
    }
}

fn oblique_support(n: usize, beta: f64, gamma: f64) -> usize {
    let nf = n as f64;
    // Largest admissible j (at k = 0, or anywhere when β < 0) and k.
    let j_max = if gamma < 0.0 && beta >= 0.0 {
        None
    } else if beta >= 0.0 {
        Some((gamma * nf).floor().min(nf))
    } else {
        Some(nf.min((gamma * nf - beta * nf).floor()))
    };
    let k_max = if gamma < 0.0 && beta >= 0.0 {
        None
    } else if beta > 0.0 {
        Some((gamma * nf / beta).floor().min(nf))
    } else {
        Some(nf)
    };
    match (j_max, k_max) {
        (Some(j), Some(k)) if j >= 0.0 && k >= 0.0 => j.max(k) as usize + 1,
        _ => 1,
    }
}

fn abel_term(n: usize, s: usize) -> f64 {
    (-2.0 * s as f64 / n as f64).exp() / (PI * PI * (s as f64 + 1.0))
}

fn abel_tail_cutoff(n: usize) -> usize {
    // e^{−2s/N} < 1e-40 beyond this point.
    (46.0 * n as f64) as usize + 64
}

fn abel_tail(n: usize, m: usize) -> f64 {
    let end = abel_tail_cutoff(n).max(m);
    // Summed from the small end for accuracy.
    (m..end).rev().map(|s| abel_term(n, s)).sum()
}

fn abel_dimension(n: usize, tol: f64) -> usize {
    let target = tol * tol;
    let mut tail = 0.0;
    let mut s = abel_tail_cutoff(n);
    while s > 0 {
        let next = tail + abel_term(n, s - 1);
        if next >= target {
            break;
        }
        tail = next;
        s -= 1;
    }
    s.max(1)
}

/// Outcome of one assumption clause on the sampling grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClauseCheck {
    pub passed: bool,
    /// Smallest constant admissible on the grid.
    pub constant: f64,
    /// Grid point attaining the constant, or the first violating point.
    pub worst_point: (f64, f64),
    pub note: String,
}

/// Best-effort evidence for Assumptions (B) and (C); a pass is not a proof.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionReport {
    pub best_effort: bool,
    pub clause_b: ClauseCheck,
    pub clause_c: ClauseCheck,
}

impl AssumptionReport {
    pub fn passed(&self) -> bool {
        self.clause_b.passed && self.clause_c.passed
    }
}

fn geometric(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let ratio = (hi / lo).ln() / (count - 1) as f64;
    (0..count).map(|i| lo * (ratio * i as f64).exp()).collect()
}

/// Largest `ratio` over the points, with the point attaining it.
fn scan<F: Fn(f64, f64) -> f64>(points: &[(f64, f64)], ratio: F) -> (f64, (f64, f64)) {
    let mut best = (0.0f64, (0.0, 0.0));
    for &(x, y) in points {
        let r = ratio(x, y);
        if r > best.0 || r.is_nan() {
            best = (r, (x, y));
        }
    }
    best
}

impl MultiplierSpec {
    pub fn validate_assumptions(&self, eps: f64, beta: f64, alpha: f64, grid_size: usize) -> Result<AssumptionReport> {
        if !(eps > 0.0 && eps < 1.0) || beta <= 0.5 || alpha <= 0.5 || grid_size < 16 {
            return Err(Error::Domain(
                "need 0 < eps < 1, beta > 1/2, alpha > 1/2 and grid_size ≥ 16".into(),
            ));
        }

        // (B): |τ − 1|·|log(x+y)|^β bounded on (0, ε]², with τ(0,0) = 1.
        let axis_b = geometric(1e-12 * eps, eps, grid_size);
        let ratio_b = |x: f64, y: f64| (self.evaluate(x, y) - 1.0).norm() * (x + y).ln().abs().powf(beta);
        let fine: Vec<(f64, f64)> = axis_b[..grid_size / 2]
            .iter()
            .flat_map(|x| axis_b[..grid_size / 2].iter().map(move |y| (*x, *y)))
            .collect();
        let coarse: Vec<(f64, f64)> = axis_b
            .iter()
            .flat_map(|x| axis_b.iter().map(move |y| (*x, *y)))
            .filter(|(x, y)| x.max(*y) >= axis_b[grid_size / 2])
            .collect();
        let origin = (self.evaluate(0.0, 0.0) - 1.0).norm();
        let (c_fine, p_fine) = scan(&fine, ratio_b);
        let (c_coarse, p_coarse) = scan(&coarse, ratio_b);
        let clause_b = if origin > 1e-12 {
            ClauseCheck {
                passed: false,
                constant: f64::INFINITY,
                worst_point: (0.0, 0.0),
                note: format!("τ(0,0) differs from 1 by {origin:e}"),
            }
        } else if c_fine > c_coarse * (1.0 + 1e-9) + 1e-300 && c_fine > 1e-12 {
            ClauseCheck {
                passed: false,
                constant: c_fine,
                worst_point: p_fine,
                note: "ratio grows towards the origin".into(),
            }
        } else {
            let (c, p) = if c_fine >= c_coarse { (c_fine, p_fine) } else { (c_coarse, p_coarse) };
            ClauseCheck { passed: true, constant: c, worst_point: p, note: "bounded on grid".into() }
        };

        // (C): |τ|·log(x+y+2)^α bounded for x, y ≥ 0 up to x + y = 10⁶.
        let mut axis_c = geometric(1e-3, 5e5, grid_size);
        axis_c.extend((0..grid_size).map(|i| 2.0 * i as f64 / grid_size as f64));
        axis_c.push(0.99);
        axis_c.sort_by(f64::total_cmp);
        axis_c.dedup();
        let ratio_c = |x: f64, y: f64| self.evaluate(x, y).norm() * (x + y + 2.0).ln().powf(alpha);
        let far_cut = 5e3;
        let all: Vec<(f64, f64)> = axis_c.iter().flat_map(|x| axis_c.iter().map(move |y| (*x, *y))).collect();
        let (near, far): (Vec<_>, Vec<_>) = all.into_iter().partition(|(x, y)| x + y < far_cut);
        let (c_near, p_near) = scan(&near, ratio_c);
        let (c_far, p_far) = scan(&far, ratio_c);
        let clause_c = if c_far > c_near * (1.0 + 1e-9) && c_far > 1e-12 {
            ClauseCheck {
                passed: false,
                constant: c_far,
                worst_point: p_far,
                note: "ratio grows at large x + y".into(),
            }
        } else {
            let (c, p) = if c_near >= c_far { (c_near, p_near) } else { (c_far, p_far) };
            ClauseCheck { passed: true, constant: c, worst_point: p, note: "bounded on grid".into() }
        };

        Ok(AssumptionReport { best_effort: true, clause_b, clause_c })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluate_examples() {
        assert_eq!(MultiplierSpec::abel_poisson().evaluate(0.0, 0.0), C64::new(1.0, 0.0));
        assert_eq!(MultiplierSpec::fejer().evaluate(0.25, 0.25), C64::new(0.5, 0.0));
        assert_eq!(MultiplierSpec::dirichlet().evaluate(0.5, 0.5), C64::new(0.0, 0.0));
        let o = MultiplierSpec::oblique(2.0, 1.0).unwrap();
        assert_eq!(o.evaluate(0.5, 0.25).re, 1.0);
        assert_eq!(o.evaluate(0.5, 0.3).re, 0.0);
    }

    #[test]
    fn scaled_examples() {
        let sq = MultiplierSpec::square();
        assert_eq!(sq.scaled_value(4, 3, 3).re, 1.0);
        assert_eq!(sq.scaled_value(4, 4, 0).re, 0.0);
        let n = 37;
        for (j, k) in [(0, 0), (3, 9), (40, 2)] {
            let v = MultiplierSpec::abel_poisson().scaled_value(n, j, k).re;
            assert!((v - (-((j + k) as f64) / n as f64).exp()).abs() < 1e-16);
        }
        assert_eq!(MultiplierSpec::fejer().scaled_value(2, 1, 1).re, 0.0);
    }

    #[test]
    fn flags() {
        assert!(MultiplierSpec::square().hermitian());
        assert!(MultiplierSpec::oblique(1.0, 1.0).unwrap().hermitian());
        assert!(!MultiplierSpec::oblique(2.0, 1.0).unwrap().hermitian());
        assert!(MultiplierSpec::oblique(2.0, 1.0).unwrap().hankel_only_bounded());
        assert!(!MultiplierSpec::oblique(1.0, 1.0).unwrap().hankel_only_bounded());
    }

    #[test]
    fn effective_dimension_compact() {
        assert_eq!(MultiplierSpec::square().effective_dimension(512, 1e-3).unwrap(), 512);
        assert_eq!(MultiplierSpec::fejer().effective_dimension(100, 1e-3).unwrap(), 100);
        assert_eq!(MultiplierSpec::dirichlet().effective_dimension(64, 0.5).unwrap(), 64);
        // Region x ≤ 1 − 2y: j up to N, k up to N/2.
        assert_eq!(MultiplierSpec::oblique(2.0, 1.0).unwrap().effective_dimension(64, 0.1).unwrap(), 65);
        assert_eq!(MultiplierSpec::oblique(1.0, 0.5).unwrap().effective_dimension(64, 0.1).unwrap(), 33);
        assert!(MultiplierSpec::square().effective_dimension(0, 0.1).is_err());
        assert!(MultiplierSpec::square().effective_dimension(4, 1.0).is_err());
    }

    #[test]
    fn oblique_support_contains_region() {
        for (beta, gamma) in [(2.0, 1.0), (0.5, 0.7), (1.0, 1.0), (0.0, 0.4), (-1.0, 0.5), (3.0, -0.1)] {
            let m = MultiplierSpec::oblique(beta, gamma).unwrap();
            let n = 24;
            let dim = m.effective_dimension(n, 0.1).unwrap();
            for j in 0..3 * n {
                for k in 0..3 * n {
                    if m.scaled_value(n, j, k).norm() != 0.0 {
                        assert!(j < dim && k < dim, "β={beta} γ={gamma} ({j},{k}) dim={dim}");
                    }
                }
            }
        }
    }

    #[test]
    fn abel_dimension_against_direct_tail() {
        // Oracle: direct forward summation of the discarded wedge.
        let direct = |n: usize, m: usize| -> f64 {
            let mut s = 0.0;
            let mut i = m;
            loop {
                let t = (-2.0 * i as f64 / n as f64).exp() / (PI * PI * (i as f64 + 1.0));
                s += t;
                if t < 1e-40 {
                    break s;
                }
                i += 1;
            }
        };
        for (n, tol) in [(512usize, 1e-10), (64, 1e-2), (4096, 2e-2), (1, 0.5)] {
            let m = MultiplierSpec::abel_poisson().effective_dimension(n, tol).unwrap();
            let formula = (n as f64 * ((n as f64).ln() + (1.0 / tol).ln())).ceil() as usize;
            assert!(m <= formula.max(1), "n={n}: {m} > {formula}");
            assert!(direct(n, m) < tol * tol);
            if m > 1 {
                assert!(direct(n, m - 1) >= tol * tol * (1.0 - 1e-12));
            }
        }
        let formula = (512.0 * (512f64.ln() + 1e10f64.ln())).ceil();
        assert_eq!(formula, 14984.0);
    }

    #[test]
    fn assumptions() {
        let abel = MultiplierSpec::abel_poisson().validate_assumptions(0.1, 1.0, 1.0, 32).unwrap();
        assert!(abel.passed() && abel.best_effort);
        let fejer = MultiplierSpec::fejer().validate_assumptions(0.1, 1.0, 1.0, 32).unwrap();
        assert!(fejer.clause_b.passed);
        let square = MultiplierSpec::square().validate_assumptions(0.1, 1.0, 2.0, 32).unwrap();
        assert!(square.clause_b.passed);
        // Bounded and compactly supported: the constant is attained just below (1, 1).
        assert!(square.clause_c.passed);
        let (x, y) = square.clause_c.worst_point;
        assert!(x < 1.0 && y < 1.0 && x > 0.9 && y > 0.9);
        let one = MultiplierSpec::custom("one", 1e9, true, Arc::new(|_, _| C64::new(1.0, 0.0))).unwrap();
        assert!(!one.validate_assumptions(0.1, 1.0, 1.0, 32).unwrap().clause_c.passed);
        let jumpy = MultiplierSpec::custom(
            "jumpy",
            2.0,
            true,
            Arc::new(|x, y| C64::new(if x + y > 0.0 { 0.5 } else { 1.0 }, 0.0)),
        )
        .unwrap();
        assert!(!jumpy.validate_assumptions(0.1, 1.0, 1.0, 32).unwrap().clause_b.passed);
        assert!(MultiplierSpec::square().validate_assumptions(0.1, 0.4, 1.0, 32).is_err());
    }

    #[test]
    fn json_roundtrip() {
        for m in [MultiplierSpec::square(), MultiplierSpec::oblique(0.5, 0.9).unwrap(), MultiplierSpec::fejer()] {
            let j = m.to_json().unwrap();
            let text = serde_json::to_string(&j).unwrap();
            let back = MultiplierSpec::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
            assert_eq!(back.name(), m.name());
        }
        let raw: MultiplierJson = serde_json::from_str(r#"{"kind":"abel_poisson"}"#).unwrap();
        assert_eq!(raw, MultiplierJson::AbelPoisson {});
    }
}
