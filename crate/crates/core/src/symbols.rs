//! Piecewise-continuous symbols in canonical jump-plus-smooth form.
//!
//! A symbol is `ω(v) = Σ_z κ_z γ_z(v) + η(v)` with `γ_z(v) = −iγ(z̄v)` and `γ`
//! the Hilbert symbol, whose single jump at `1` has half-height `i`.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

/// Two angles closer than this (mod 2π) are the same point of the circle.
pub const ANGLE_TOL: f64 = 1e-12;
/// Tolerance for the symmetry clauses.
pub const SYMMETRY_TOL: f64 = 1e-12;
const SYMMETRY_PROBE: usize = 64;

const I: C64 = C64::new(0.0, 1.0);

/// Normalises an angle into `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let a = theta.rem_euclid(TAU);
    if a >= TAU - ANGLE_TOL * 0.5 {
        0.0
    } else {
        a
    }
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// `e^{i n θ}`, exact at multiples of π/2.
pub fn unit_power(theta: f64, n: i64) -> C64 {
    let q = theta / FRAC_PI_2;
    if (q - q.round()).abs() < 1e-12 {
        let quarter = ((q.round() as i64).rem_euclid(4) * n.rem_euclid(4)).rem_euclid(4);
        return match quarter {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
    }
    let phase = (n as f64 * theta).rem_euclid(TAU);
    let (s, c) = phase.sin_cos();
    C64::new(c, s)
}

/// Principal square root with exact results on the axes, e.g. `√(−1) = i`.
pub fn principal_sqrt(z: C64) -> C64 {
    if z.re == 0.0 && z.im == 0.0 {
        return C64::new(0.0, 0.0);
    }
    let t = ((z.re.abs() + z.re.hypot(z.im)) / 2.0).sqrt();
    if z.re >= 0.0 {
        C64::new(t, z.im / (2.0 * t))
    } else {
        C64::new(z.im.abs() / (2.0 * t), t.copysign(z.im))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jump {
    angle: f64,
    half_height: C64,
}

impl Jump {
    pub fn new(angle: f64, half_height: C64) -> Result<Self> {
        if !angle.is_finite() || !half_height.re.is_finite() || !half_height.im.is_finite() {
            return Err(Error::Domain("jump angle and half-height must be finite".into()));
        }
        if half_height.norm() == 0.0 {
            return Err(Error::Domain(format!("zero jump at angle {angle} must be omitted")));
        }
        Ok(Jump { angle: normalize_angle(angle), half_height })
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn half_height(&self) -> C64 {
        self.half_height
    }

    pub fn modulus(&self) -> f64 {
        self.half_height.norm()
    }

    /// The point `z = e^{iθ}`.
    pub fn point(&self) -> C64 {
        unit_power(self.angle, 1)
    }

    /// Location is `z = 1` or `z = −1`.
    pub fn on_real_axis(&self) -> bool {
        circular_distance(self.angle, 0.0) < ANGLE_TOL || circular_distance(self.angle, PI) < ANGLE_TOL
    }

    /// Location is in the open upper half plane.
    pub fn in_upper_half(&self) -> bool {
        !self.on_real_axis() && self.angle < PI
    }
}

fn check_distinct(jumps: &[Jump], what: &str) -> Result<()> {
    for (a, ja) in jumps.iter().enumerate() {
        for jb in &jumps[a + 1..] {
            if circular_distance(ja.angle, jb.angle) < ANGLE_TOL {
                return Err(Error::Domain(format!(
                    "{what} angles {} and {} coincide modulo 2π",
                    ja.angle, jb.angle
                )));
            }
        }
    }
    Ok(())
}

fn sorted(mut jumps: Vec<Jump>) -> Vec<Jump> {
    jumps.sort_by(|a, b| a.angle.total_cmp(&b.angle));
    jumps
}

/// The continuous remainder `η`.
///
/// `coeffs` is a trigonometric polynomial. `step` optionally holds the jumps
/// of a piecewise-constant function whose own jump part has been removed; its
/// coefficients are known in closed form and decay like `n⁻²`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SmoothPart {
    coeffs: BTreeMap<i64, C64>,
    step: Vec<Jump>,
}

impl SmoothPart {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn trig(coeffs: BTreeMap<i64, C64>) -> Result<Self> {
        if coeffs.values().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Domain("smooth coefficients must be finite".into()));
        }
        let coeffs = coeffs.into_iter().filter(|(_, c)| c.norm() != 0.0).collect();
        Ok(SmoothPart { coeffs, step: Vec::new() })
    }

    /// Trig polynomial plus the step correction of a piecewise-constant
    /// function with the given jumps. The half-heights must sum to zero.
    pub fn with_step(coeffs: BTreeMap<i64, C64>, step: Vec<Jump>) -> Result<Self> {
        let mut part = Self::trig(coeffs)?;
        check_distinct(&step, "step")?;
        let total: C64 = step.iter().map(|j| j.half_height).sum();
        let scale: f64 = step.iter().map(|j| j.modulus()).sum();
        if total.norm() > 1e-12 * scale.max(1.0) {
            return Err(Error::Domain(format!(
                "step half-heights must sum to zero, got {total}"
            )));
        }
        part.step = sorted(step);
        Ok(part)
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, C64> {
        &self.coeffs
    }

    pub fn step(&self) -> &[Jump] {
        &self.step
    }

    /// Largest `|n|` carrying a trigonometric coefficient.
    pub fn degree(&self) -> usize {
        self.coeffs.keys().map(|n| n.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// True when the remainder is a trigonometric polynomial.
    pub fn is_finite_rank(&self) -> bool {
        self.step.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.step.is_empty()
    }

    fn step_coeff(&self, n: i64) -> C64 {
        if self.step.is_empty() || n == 0 {
            return C64::new(0.0, 0.0);
        }
        if n == -1 {
            let s: C64 = self.step.iter().map(|j| j.half_height * j.point()).sum();
            return I * s / PI;
        }
        let s: C64 = self.step.iter().map(|j| j.half_height * unit_power(j.angle, -n)).sum();
        -I * s / (PI * (n as f64) * (n as f64 + 1.0))
    }

    /// `η̂(n)`.
    pub fn coefficient(&self, n: i64) -> C64 {
        self.coeffs.get(&n).copied().unwrap_or_default() + self.step_coeff(n)
    }

    /// An upper bound for `(n+1)·|η̂(n)|` over all `n ≥ from`.
    pub fn weighted_tail_bound(&self, from: usize) -> f64 {
        let step: f64 = self.step.iter().map(|j| j.modulus()).sum::<f64>() / (PI * from.max(1) as f64);
        let trig = self
            .coeffs
            .iter()
            .filter(|(n, _)| **n >= from as i64)
            .map(|(n, c)| (*n as f64 + 1.0) * c.norm())
            .fold(0.0, f64::max);
        step + trig
    }
}

/// A piecewise-continuous symbol in canonical form.
#[derive(Debug, Clone, PartialEq)]
pub struct PCSymbol {
    id: String,
    jumps: Vec<Jump>,
    smooth: SmoothPart,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl PCSymbol {
    pub fn new(id: impl Into<String>, jumps: Vec<Jump>, smooth: SmoothPart) -> Result<Self> {
        check_distinct(&jumps, "jump")?;
        Ok(PCSymbol { id: id.into(), jumps: sorted(jumps), smooth })
    }

    pub fn zero() -> Self {
        PCSymbol { id: "zero".into(), jumps: Vec::new(), smooth: SmoothPart::zero() }
    }

    /// The Hilbert symbol `γ`: one jump with half-height `i` at `z = 1`, so
    /// that `γ̂(j) = 1/(π(j+1))`.
    pub fn hilbert() -> Self {
        PCSymbol {
            id: "gamma".into(),
            jumps: vec![Jump { angle: 0.0, half_height: I }],
            smooth: SmoothPart::zero(),
        }
    }

    /// `γ_z(v) = −iγ(z̄v)`: unit half-height at `z = e^{iθ}`.
    pub fn gamma_z(angle: f64) -> Result<Self> {
        Self::new("gamma_z", vec![Jump::new(angle, C64::new(1.0, 0.0))?], SmoothPart::zero())
    }

    /// `ψ(v) = 2·𝟙[Re v > 0]`, with `ψ̂(j) = 2 sin(πj/2)/(πj)` and `ψ̂(0) = 1`.
    ///
    /// Stored as jumps `κ = −1` at `i` and `κ = +1` at `−i`; the smooth part is
    /// the mean `1` plus the closed-form step correction of those jumps.
    pub fn psi() -> Self {
        let jumps = vec![
            Jump { angle: FRAC_PI_2, half_height: C64::new(-1.0, 0.0) },
            Jump { angle: 3.0 * FRAC_PI_2, half_height: C64::new(1.0, 0.0) },
        ];
        let mut coeffs = BTreeMap::new();
        coeffs.insert(0, C64::new(1.0, 0.0));
        PCSymbol {
            id: "psi".into(),
            smooth: SmoothPart { coeffs, step: jumps.clone() },
            jumps,
        }
    }

    /// Jumps `κ` at `e^{iθ}` and `−κ̄` at `e^{−iθ}`, with no smooth part.
    pub fn conjugate_pair(angle: f64, kappa: C64) -> Result<Self> {
        let a = Jump::new(angle, kappa)?;
        if a.on_real_axis() {
            return Err(Error::Domain("conjugate pair needs an angle off the real axis".into()));
        }
        let b = Jump::new(-angle, -kappa.conj())?;
        Self::new("pair", vec![a, b], SmoothPart::zero())
    }

    /// A piecewise-constant function given by `(start_angle, value)` arcs; each
    /// value holds until the next start angle.
    pub fn piecewise_constant(id: impl Into<String>, arcs: &[(f64, C64)]) -> Result<Self> {
        if arcs.is_empty() {
            return Err(Error::Domain("piecewise_constant needs at least one arc".into()));
        }
        let mut arcs: Vec<(f64, C64)> = arcs.iter().map(|(a, v)| (normalize_angle(*a), *v)).collect();
        arcs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let n = arcs.len();
        let mut mean = C64::new(0.0, 0.0);
        let mut jumps = Vec::new();
        for i in 0..n {
            let (start, value) = arcs[i];
            let prev = arcs[(i + n - 1) % n].1;
            let end = if i + 1 < n { arcs[i + 1].0 } else { arcs[0].0 + TAU };
            mean += value * (end - start) / TAU;
            let kappa = (value - prev) / 2.0;
            if kappa.norm() > 0.0 {
                jumps.push(Jump::new(start, kappa)?);
            }
        }
        check_distinct(&jumps, "jump")?;
        let mut coeffs = BTreeMap::new();
        coeffs.insert(0, mean);
        let smooth = SmoothPart::with_step(coeffs, jumps.clone())?;
        Self::new(id, jumps, smooth)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    pub fn smooth(&self) -> &SmoothPart {
        &self.smooth
    }

    pub fn total_jump(&self) -> f64 {
        self.jumps.iter().map(|j| j.modulus()).sum()
    }

    pub fn max_jump(&self) -> f64 {
        self.jumps.iter().map(|j| j.modulus()).fold(0.0, f64::max)
    }

    pub fn has_axis_jump(&self) -> bool {
        self.jumps.iter().any(|j| j.on_real_axis())
    }

    /// Jump part `−i/(π(n+1)) Σ κ_z z̄ⁿ` of the two-sided coefficient.
    pub fn jump_part_coeff(&self, n: i64) -> C64 {
        if n == -1 || self.jumps.is_empty() {
            return C64::new(0.0, 0.0);
        }
        let s: C64 = self.jumps.iter().map(|j| j.half_height * unit_power(j.angle, -n)).sum();
        -I * s / (PI * (n as f64 + 1.0))
    }

    /// Two-sided Fourier coefficient `ω̂(n)`.
    pub fn fourier_coeff(&self, n: i64) -> C64 {
        self.jump_part_coeff(n) + self.smooth.coefficient(n)
    }

    /// `ω̂(j)` for `j ≥ 0`, the entries of `Γ(ω̂)` along anti-diagonals.
    pub fn canonical_fourier_coeff(&self, j: u64) -> C64 {
        self.fourier_coeff(j as i64)
    }

    /// `ω̂(0), …, ω̂(len−1)`.
    pub fn coefficients(&self, len: usize) -> Vec<C64> {
        (0..len as i64).map(|j| self.fourier_coeff(j)).collect()
    }

    /// An upper bound `K` with `|ω̂(n)| ≤ K/(n+1)` for all `n ≥ from`.
    pub fn coefficient_envelope(&self, from: usize) -> f64 {
        self.total_jump() / PI + self.smooth.weighted_tail_bound(from)
    }

    fn partner(&self, jump: &Jump) -> Option<&Jump> {
        let target = normalize_angle(-jump.angle);
        self.jumps.iter().find(|j| circular_distance(j.angle, target) < ANGLE_TOL)
    }

    pub fn check_symmetry_condition(&self) -> SymmetryReport {
        let mut violations = Vec::new();
        for jump in &self.jumps {
            if jump.on_real_axis() {
                if jump.half_height.re.abs() > SYMMETRY_TOL {
                    violations.push(SymmetryViolation::AxisJumpNotImaginary {
                        angle: jump.angle,
                        half_height: jump.half_height,
                    });
                }
                continue;
            }
            match self.partner(jump) {
                None => violations.push(SymmetryViolation::UnpairedJump { angle: jump.angle }),
                Some(p) => {
                    let expected = -jump.half_height.conj();
                    if jump.in_upper_half() && (p.half_height - expected).norm() > SYMMETRY_TOL {
                        violations.push(SymmetryViolation::MismatchedPair {
                            angle: jump.angle,
                            expected,
                            found: p.half_height,
                        });
                    }
                }
            }
        }
        let probe = 2 * self.smooth.degree() + SYMMETRY_PROBE;
        for j in 0..=probe as u64 {
            let c = self.canonical_fourier_coeff(j);
            if c.im.abs() > SYMMETRY_TOL {
                violations.push(SymmetryViolation::NonRealCoefficient { index: j, imag: c.im });
                break;
            }
        }
        SymmetryReport { symmetric: violations.is_empty(), violations }
    }

    pub fn is_symmetric(&self) -> bool {
        self.check_symmetry_condition().symmetric
    }

    /// Predicted `LogDens(t)` for any multiplier: `Σ_z c(t/|κ_z|)`.
    pub fn predicted_logdens(&self, t: f64) -> Result<f64> {
        check_threshold(t)?;
        self.jumps.iter().map(|j| hilbert_density(t / j.modulus())).sum()
    }

    /// Predicted `LogDens±(t)` for a symmetric symbol.
    pub fn predicted_logdens_signed(&self, t: f64, sign: Sign) -> Result<f64> {
        check_threshold(t)?;
        let report = self.check_symmetry_condition();
        if !report.symmetric {
            return Err(Error::Precondition(format!(
                "signed density needs a symmetric symbol: {}",
                report.describe()
            )));
        }
        let mut total = 0.0;
        for j in &self.jumps {
            if j.in_upper_half() {
                total += hilbert_density(t / j.modulus())?;
            } else if j.on_real_axis() {
                // −iκ is real here; only the matching sign picks it up.
                let h = (-I * j.half_height).re;
                let hit = match sign {
                    Sign::Plus => h > 0.0,
                    Sign::Minus => h < 0.0,
                };
                if hit {
                    total += hilbert_density(t / j.modulus())?;
                }
            }
        }
        Ok(total)
    }

    /// Bands of the essential spectrum of `Γ(ω̂)`; `{0}` is always included
    /// separately.
    pub fn essential_spectrum_bands(&self) -> BandReport {
        let mut bands = Vec::new();
        for j in &self.jumps {
            if j.on_real_axis() {
                bands.push(Band::new(C64::new(0.0, 0.0), -I * j.half_height, BandSource::Axis { angle: j.angle }));
                continue;
            }
            let partner = self.partner(j);
            if partner.is_some() && !j.in_upper_half() {
                continue;
            }
            let other = partner.map(|p| p.half_height).unwrap_or_default();
            let s = principal_sqrt(j.half_height * other);
            let source = match partner {
                Some(p) => BandSource::Pair { angle: j.angle, partner: p.angle },
                None => BandSource::Unpaired { angle: j.angle },
            };
            bands.push(Band::new(-I * s, I * s, source));
        }
        let unpaired = bands.iter().any(|b| matches!(b.source, BandSource::Unpaired { .. }));
        BandReport { bands, includes_zero: true, unpaired_flag: unpaired }
    }

    pub fn ac_spectrum_modulus(&self) -> AcSpectrum {
        let mut moduli: Vec<f64> = self.jumps.iter().map(|j| j.modulus()).collect();
        moduli.sort_by(|a, b| b.total_cmp(a));
        AcSpectrum { interval: moduli.first().map(|m| (0.0, *m)), moduli }
    }

    pub fn dyadic_jump_classes(&self) -> Vec<DyadicClass> {
        let mut classes: BTreeMap<u32, Vec<Jump>> = BTreeMap::new();
        for j in &self.jumps {
            classes.entry(dyadic_class(j.modulus())).or_default().push(*j);
        }
        classes.into_iter().map(|(n, jumps)| DyadicClass { n, jumps }).collect()
    }

    pub fn to_json(&self) -> SymbolJson {
        let mut smooth = SmoothJson::default();
        for (n, c) in &self.smooth.coeffs {
            smooth.n.push(*n);
            smooth.re.push(c.re);
            smooth.im.push(c.im);
        }
        SymbolJson {
            id: Some(self.id.clone()),
            jumps: self.jumps.iter().map(JumpJson::from).collect(),
            smooth,
            step: self.smooth.step.iter().map(JumpJson::from).collect(),
        }
    }

    pub fn from_json(json: &SymbolJson) -> Result<Self> {
        let s = &json.smooth;
        if s.n.len() != s.re.len() || s.n.len() != s.im.len() {
            return Err(Error::Domain("smooth arrays n/re/im must have equal length".into()));
        }
        let mut coeffs = BTreeMap::new();
        for ((n, re), im) in s.n.iter().zip(&s.re).zip(&s.im) {
            if coeffs.insert(*n, C64::new(*re, *im)).is_some() {
                return Err(Error::Domain(format!("duplicate smooth index {n}")));
            }
        }
        let jumps = json.jumps.iter().map(JumpJson::to_jump).collect::<Result<Vec<_>>>()?;
        let step = json.step.iter().map(JumpJson::to_jump).collect::<Result<Vec<_>>>()?;
        let smooth = if step.is_empty() {
            SmoothPart::trig(coeffs)?
        } else {
            SmoothPart::with_step(coeffs, step)?
        };
        Self::new(json.id.clone().unwrap_or_else(|| "custom".into()), jumps, smooth)
    }
}

fn check_threshold(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("threshold t must be positive, got {t}")))
    }
}

/// `c(t) = π⁻² arcsech(t)` on `(0,1]`, zero above.
pub fn hilbert_density(t: f64) -> Result<f64> {
    check_threshold(t)?;
    if t >= 1.0 {
        return Ok(0.0);
    }
    Ok(((1.0 + (1.0 - t * t).sqrt()) / t).ln() / (PI * PI))
}

/// Index `n` with `2^{−n−1} ≤ m < 2^{−n}`, and `0` for `m ≥ 1/2`.
pub fn dyadic_class(modulus: f64) -> u32 {
    let mut n = 0;
    let mut lower = 0.5;
    while modulus < lower && n < 1100 {
        n += 1;
        lower /= 2.0;
    }
    n
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum SymmetryViolation {
    UnpairedJump { angle: f64 },
    MismatchedPair { angle: f64, expected: C64, found: C64 },
    AxisJumpNotImaginary { angle: f64, half_height: C64 },
    NonRealCoefficient { index: u64, imag: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub symmetric: bool,
    pub violations: Vec<SymmetryViolation>,
}

impl SymmetryReport {
    pub fn describe(&self) -> String {
        if self.violations.is_empty() {
            return "symmetric".into();
        }
        self.violations
            .iter()
            .map(|v| match v {
                SymmetryViolation::UnpairedJump { angle } => format!("(a) jump at {angle} has no conjugate partner"),
                SymmetryViolation::MismatchedPair { angle, expected, found } => {
                    format!("(a) partner of {angle} has {found}, expected {expected}")
                }
                SymmetryViolation::AxisJumpNotImaginary { angle, half_height } => {
                    format!("(b) jump at {angle} has non-imaginary half-height {half_height}")
                }
                SymmetryViolation::NonRealCoefficient { index, imag } => {
                    format!("(c) coefficient {index} has imaginary part {imag:e}")
                }
            })
            .collect::<Vec<_>>()
            .join("; ")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BandSource {
    Axis { angle: f64 },
    Pair { angle: f64, partner: f64 },
    Unpaired { angle: f64 },
}

/// A closed segment `[lo, hi]` in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Band {
    pub lo: C64,
    pub hi: C64,
    pub source: BandSource,
    pub degenerate: bool,
}

impl Band {
    fn new(a: C64, b: C64, source: BandSource) -> Self {
        let key = |z: &C64| (z.re, z.im);
        let (lo, hi) = if key(&a).partial_cmp(&key(&b)) == Some(std::cmp::Ordering::Greater) {
            (b, a)
        } else {
            (a, b)
        };
        // Keep −0.0 out of reports.
        let clean = |z: C64| C64::new(z.re + 0.0, z.im + 0.0);
        Band { lo: clean(lo), hi: clean(hi), source, degenerate: a == b }
    }

    /// True if the segment lies on the real line.
    pub fn is_real(&self) -> bool {
        self.lo.im == 0.0 && self.hi.im == 0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandReport {
    pub bands: Vec<Band>,
    pub includes_zero: bool,
    pub unpaired_flag: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AcSpectrum {
    /// `[0, max|κ_z|]`, absent without jumps.
    pub interval: Option<(f64, f64)>,
    /// `|κ_z|` per jump, descending; each contributes `[0, |κ_z|]` once.
    pub moduli: Vec<f64>,
}

impl AcSpectrum {
    /// Multiplicity of the a.c. spectrum of `|Γ|` at `s > 0`.
    pub fn multiplicity_at(&self, s: f64) -> usize {
        self.moduli.iter().filter(|m| **m >= s).count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DyadicClass {
    pub n: u32,
    pub jumps: Vec<Jump>,
}

impl DyadicClass {
    pub fn predicted_logdens(&self, t: f64) -> Result<f64> {
        self.jumps.iter().map(|j| hilbert_density(t / j.modulus())).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpJson {
    pub angle: f64,
    pub re: f64,
    pub im: f64,
}

impl From<&Jump> for JumpJson {
    fn from(j: &Jump) -> Self {
        JumpJson { angle: j.angle, re: j.half_height.re, im: j.half_height.im }
    }
}

impl JumpJson {
    fn to_jump(&self) -> Result<Jump> {
        Jump::new(self.angle, C64::new(self.re, self.im))
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SmoothJson {
    #[serde(default)]
    pub n: Vec<i64>,
    #[serde(default)]
    pub re: Vec<f64>,
    #[serde(default)]
    pub im: Vec<f64>,
}

/// Serialized symbol: `{"jumps":[{"angle","re","im"}], "smooth":{"n","re","im"}}`
/// with optional `"id"` and `"step"` (step-correction jumps).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(default)]
    pub jumps: Vec<JumpJson>,
    #[serde(default)]
    pub smooth: SmoothJson,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub step: Vec<JumpJson>,
}
