//! Poisson sections through a quadrature factorisation `Γ^{(r)}(ω̂) = V C Vᵀ`.
//!
//! Jump coefficients come from `r^n/(n+1) = ∫₀¹ (ru)^n du` and step-correction
//! coefficients from `r^n/(n(n+1)) = ∫₀¹ (1−u) u^{n−1} r^n du`. Discretising on
//! panels graded towards `u = 1` turns each jump into a family of geometric
//! vectors `g_x(j) = x^j`, whose inner products with each other and with the
//! sign symbol `𝔰` are elementary. Quantities of the infinite operator
//! (traces, nuclear norms of products and anticommutators) then reduce to
//! Gram matrices whose size grows like `log(1/(1−r))`.

use std::f64::consts::PI;

use faer::Mat;

use crate::error::{Error, Result};
use crate::linalg::{nuclear_norm_complex, psd_sqrt};
use crate::quadrature::graded_unit_rule;
use crate::sections::sign_coeff;
use crate::symbols::{unit_power, PCSymbol};
use crate::C64;

const I: C64 = C64::new(0.0, 1.0);
const PANEL_ORDER: usize = 16;

/// A vector in `ℓ²(ℤ₊)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    /// `j ↦ x^j`, `|x| < 1`.
    Geometric(C64),
    /// The unit vector `e_k`.
    Basis(usize),
}

impl Mode {
    fn conj(self) -> Mode {
        match self {
            Mode::Geometric(x) => Mode::Geometric(x.conj()),
            b => b,
        }
    }

    pub fn component(self, j: usize) -> C64 {
        match self {
            Mode::Geometric(x) => x.powu(j as u32),
            Mode::Basis(k) => C64::new(if j == k { 1.0 } else { 0.0 }, 0.0),
        }
    }
}

/// `⟨u, v⟩ = Σ_j conj(u_j) v_j`.
pub fn inner(u: Mode, v: Mode) -> C64 {
    match (u, v) {
        (Mode::Geometric(a), Mode::Geometric(b)) => (C64::new(1.0, 0.0) - a.conj() * b).inv(),
        (Mode::Basis(k), Mode::Geometric(b)) => b.powu(k as u32),
        (Mode::Geometric(a), Mode::Basis(k)) => a.conj().powu(k as u32),
        (Mode::Basis(j), Mode::Basis(k)) => C64::new(if j == k { 1.0 } else { 0.0 }, 0.0),
    }
}

fn artanh(z: C64) -> C64 {
    // Series for small |z| avoids cancellation in the logarithm.
    if z.norm() < 1e-3 {
        return z + z * z * z / 3.0 + z.powu(5) / 5.0;
    }
    ((C64::new(1.0, 0.0) + z) / (C64::new(1.0, 0.0) - z)).ln() * 0.5
}

/// `Σ_{j≥0} ŝ(k−j) b^j`.
fn sign_basis_geometric(k: usize, b: C64) -> C64 {
    let mut s = b.powu(k as u32) * artanh(b) * (2.0 / PI) * I;
    let mut m = 1;
    while m <= k {
        s += sign_coeff(m as i64) * b.powu((k - m) as u32);
        m += 2;
    }
    s
}

/// `⟨u, 𝔰 v⟩` for `𝔰(v) = sign(Im v)`, a Hermitian form.
pub fn sign_form(u: Mode, v: Mode) -> C64 {
    match (u, v) {
        (Mode::Geometric(a), Mode::Geometric(b)) => {
            let ac = a.conj();
            (artanh(b) - artanh(ac)) * (2.0 / PI) * I / (C64::new(1.0, 0.0) - ac * b)
        }
        (Mode::Basis(k), Mode::Geometric(b)) => sign_basis_geometric(k, b),
        (Mode::Geometric(a), Mode::Basis(k)) => sign_basis_geometric(k, a).conj(),
        (Mode::Basis(j), Mode::Basis(k)) => sign_coeff(j as i64 - k as i64),
    }
}

/// `Γ^{(r)}(ω̂)` as `Σ_{p,q} C_pq v_p v_qᵀ`; as an operator on `H²` this is
/// `Σ C_pq |v_p⟩⟨v̄_q|`.
#[derive(Debug, Clone)]
pub struct PoissonFactor {
    pub r: f64,
    pub modes: Vec<Mode>,
    pub core: Mat<C64>,
}

/// Default number of graded panels for radius `r`.
pub fn default_levels(r: f64) -> usize {
    (1.0 / (1.0 - r)).log2().ceil().max(0.0) as usize + 10
}

impl PoissonFactor {
    pub fn new(sym: &PCSymbol, r: f64) -> Result<Self> {
        Self::with_levels(sym, r, default_levels(r))
    }

    pub fn with_levels(sym: &PCSymbol, r: f64, levels: usize) -> Result<Self> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::Domain(format!("r must lie in (0,1), got {r}")));
        }
        let (u, w) = graded_unit_rule(levels, PANEL_ORDER);
        // Jump and step heights per location; shared locations share nodes.
        let mut sites: Vec<(f64, C64, C64)> = sym.jumps().iter().map(|j| (j.angle(), j.half_height(), C64::default())).collect();
        for s in sym.smooth().step() {
            match sites.iter_mut().find(|(a, _, _)| (*a - s.angle()).abs() < 1e-12) {
                Some(site) => site.2 += s.half_height(),
                None => sites.push((s.angle(), C64::default(), s.half_height())),
            }
        }
        let mut modes = Vec::new();
        let mut diag = Vec::new();
        for (angle, kappa, step) in &sites {
            let zbar = unit_power(*angle, -1);
            for (uq, wq) in u.iter().zip(&w) {
                modes.push(Mode::Geometric(zbar * (r * uq)));
                diag.push(-I * (kappa + step * ((1.0 - uq) / uq)) * (wq / PI));
            }
        }
        let trig: Vec<(usize, C64)> = sym
            .smooth()
            .coeffs()
            .iter()
            .filter(|(n, _)| **n >= 0)
            .map(|(n, c)| (*n as usize, *c))
            .collect();
        let degree = trig.iter().map(|(n, _)| *n).max();
        let q = diag.len();
        let extra = degree.map_or(0, |d| d + 1);
        let mut core = Mat::<C64>::zeros(q + extra, q + extra);
        for (i, d) in diag.iter().enumerate() {
            core[(i, i)] = *d;
        }
        if let Some(d) = degree {
            for k in 0..=d {
                modes.push(Mode::Basis(k));
            }
            for (n, c) in &trig {
                let v = c * r.powi(*n as i32);
                for j in 0..=*n {
                    core[(q + j, q + n - j)] = v;
                }
            }
        }
        Ok(PoissonFactor { r, modes, core })
    }

    pub fn rank_bound(&self) -> usize {
        self.modes.len()
    }

    /// Matrix entry `(j, k)`, for cross-checks against dense sections.
    pub fn entry(&self, j: usize, k: usize) -> C64 {
        let n = self.modes.len();
        let vj: Vec<C64> = self.modes.iter().map(|m| m.component(j)).collect();
        let vk: Vec<C64> = self.modes.iter().map(|m| m.component(k)).collect();
        let mut s = C64::default();
        for p in 0..n {
            for q in 0..n {
                let c = self.core[(p, q)];
                if c != C64::default() {
                    s += vj[p] * c * vk[q];
                }
            }
        }
        s
    }

    fn gram(left: &[Mode], right: &[Mode], form: fn(Mode, Mode) -> C64) -> Mat<C64> {
        Mat::from_fn(left.len(), right.len(), |p, q| form(left[p], right[q]))
    }

    fn conj_modes(&self) -> Vec<Mode> {
        self.modes.iter().map(|m| m.conj()).collect()
    }

    /// `Tr Γᵐ = Tr((C B)ᵐ)` with the bilinear Gram `B_pq = Σ_j v_p(j) v_q(j)`.
    pub fn trace_moment(&self, m: u32) -> Result<C64> {
        if m == 0 {
            return Err(Error::Parameter("trace moment order must be positive".into()));
        }
        let b = Self::gram(&self.conj_modes(), &self.modes, inner);
        let cb = &self.core * &b;
        let mut p = cb.clone();
        for _ in 1..m {
            p = &p * &cb;
        }
        Ok((0..p.nrows()).map(|i| p[(i, i)]).sum())
    }

    /// `‖Γ^{(r)}‖_{S₁}`.
    pub fn nuclear_norm(&self) -> Result<f64> {
        let gl = psd_sqrt(Self::gram(&self.modes, &self.modes, inner).as_ref())?;
        let cm = self.conj_modes();
        let gr = psd_sqrt(Self::gram(&cm, &cm, inner).as_ref())?;
        nuclear_norm_complex((&gl * &self.core * &gr).as_ref())
    }

    /// `‖A* B‖_{S₁}` for `A = self`, `B = other`.
    pub fn product_nuclear_norm(&self, other: &PoissonFactor) -> Result<f64> {
        let ra = self.conj_modes();
        let rb = other.conj_modes();
        let ga = psd_sqrt(Self::gram(&ra, &ra, inner).as_ref())?;
        let gb = psd_sqrt(Self::gram(&rb, &rb, inner).as_ref())?;
        let cross = Self::gram(&self.modes, &other.modes, inner);
        let middle = self.core.adjoint() * &cross * &other.core;
        nuclear_norm_complex((&ga * &middle * &gb).as_ref())
    }

    /// `‖𝔰 H(ω_r) + H(ω_r) 𝔰‖_{S₁}` on `L²(𝕋)`.
    pub fn anticommutator_nuclear_norm(&self) -> Result<f64> {
        let n = self.modes.len();
        let doubled = |modes: &[Mode]| {
            let g = Self::gram(modes, modes, inner);
            let s = Self::gram(modes, modes, sign_form);
            Mat::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
                (true, true) => g[(i, j)],
                (false, false) => g[(i - n, j - n)],
                (true, false) => s[(i, j - n)],
                (false, true) => s[(i - n, j)],
            })
        };
        let gl = psd_sqrt(doubled(&self.modes).as_ref())?;
        let gr = psd_sqrt(doubled(&self.conj_modes()).as_ref())?;
        let core = Mat::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
            (true, true) => self.core[(i, j)],
            (false, false) => self.core[(i - n, j - n)],
            _ => C64::default(),
        });
        nuclear_norm_complex((&gl * &core * &gr).as_ref())
    }
}
