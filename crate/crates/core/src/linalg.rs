//! Thin wrappers over the dense faer solvers, plus seeded random test matrices.

use faer::{Mat, MatRef, Side};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::C64;

fn numeric<E: std::fmt::Debug>(what: &str, n: usize) -> impl FnOnce(E) -> Error + '_ {
    move |e| Error::Numeric(format!("{what} did not converge at dimension {n}: {e:?}"))
}

fn descending(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Eigenvalues of a real symmetric matrix (lower triangle read), descending.
pub fn symmetric_eigenvalues(a: MatRef<'_, f64>) -> Result<Vec<f64>> {
    let v = a.self_adjoint_eigenvalues(Side::Lower).map_err(numeric("eigensolver", a.nrows()))?;
    Ok(descending(v))
}

/// Eigenvalues of a complex Hermitian matrix (lower triangle read), descending.
pub fn hermitian_eigenvalues(a: MatRef<'_, C64>) -> Result<Vec<f64>> {
    let v = a.self_adjoint_eigenvalues(Side::Lower).map_err(numeric("eigensolver", a.nrows()))?;
    Ok(descending(v))
}

pub fn singular_values_real(a: MatRef<'_, f64>) -> Result<Vec<f64>> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Ok(Vec::new());
    }
    a.singular_values().map(descending).map_err(numeric("svd", a.nrows()))
}

pub fn singular_values_complex(a: MatRef<'_, C64>) -> Result<Vec<f64>> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Ok(Vec::new());
    }
    a.singular_values().map(descending).map_err(numeric("svd", a.nrows()))
}

/// Sum of singular values.
pub fn nuclear_norm_complex(a: MatRef<'_, C64>) -> Result<f64> {
    Ok(singular_values_complex(a)?.iter().sum())
}

pub fn nuclear_norm_real(a: MatRef<'_, f64>) -> Result<f64> {
    Ok(singular_values_real(a)?.iter().sum())
}

/// `(Σ sᵖ)^{1/p}`.
pub fn schatten_norm(singular_values: &[f64], p: f64) -> f64 {
    singular_values.iter().map(|s| s.powf(p)).sum::<f64>().powf(1.0 / p)
}

pub fn frobenius_complex(a: MatRef<'_, C64>) -> f64 {
    let mut s = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            s += a[(i, j)].norm_sqr();
        }
    }
    s.sqrt()
}

pub fn to_complex(a: MatRef<'_, f64>) -> Mat<C64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| C64::new(a[(i, j)], 0.0))
}

/// Positive square root of a Hermitian positive semidefinite matrix; small
/// negative eigenvalues from rounding are clipped to zero.
pub fn psd_sqrt(a: MatRef<'_, C64>) -> Result<Mat<C64>> {
    let n = a.nrows();
    let sym = Mat::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5);
    let eig = sym.self_adjoint_eigen(Side::Lower).map_err(numeric("eigensolver", n))?;
    let u = eig.U();
    let s: Vec<f64> = eig.S().column_vector().iter().map(|x| x.re.max(0.0).sqrt()).collect();
    let scaled = Mat::from_fn(n, n, |i, j| u[(i, j)] * s[j]);
    Ok(&scaled * u.adjoint())
}

/// Largest singular value.
pub fn spectral_norm_complex(a: MatRef<'_, C64>) -> Result<f64> {
    Ok(singular_values_complex(a)?.first().copied().unwrap_or(0.0))
}

/// Real roots of `Σ c_k x^k` via the companion matrix.
pub fn real_polynomial_roots(coeffs: &[f64]) -> Result<Vec<f64>> {
    let mut c = coeffs.to_vec();
    while c.last() == Some(&0.0) {
        c.pop();
    }
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = c[deg];
    let comp = Mat::from_fn(deg, deg, |i, j| {
        if i == 0 {
            -c[deg - 1 - j] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let ev = comp.eigenvalues().map_err(numeric("companion eigensolver", deg))?;
    let scale = ev.iter().map(|z| z.norm()).fold(1.0, f64::max);
    Ok(ev.iter().filter(|z| z.im.abs() <= 1e-9 * scale).map(|z| z.re).collect())
}

/// Seeded generator of Gaussian test matrices scaled to unit spectral norm.
pub struct RandomMatrices {
    rng: ChaCha8Rng,
}

impl RandomMatrices {
    pub fn new(seed: u64) -> Self {
        RandomMatrices { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    pub fn uniform_index(&mut self, bound: usize) -> usize {
        use rand::Rng;
        self.rng.random_range(0..bound)
    }

    pub fn coin(&mut self) -> bool {
        use rand::Rng;
        self.rng.random_bool(0.5)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        use rand::Rng;
        self.rng.random_range(lo..hi)
    }

    /// Complex Gaussian `rows × cols` matrix with unit spectral norm.
    pub fn general(&mut self, rows: usize, cols: usize) -> Result<Mat<C64>> {
        let mut a = Mat::<C64>::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                a[(i, j)] = C64::new(self.normal(), self.normal());
            }
        }
        normalize(a)
    }

    /// Complex Hermitian matrix with unit spectral norm.
    pub fn hermitian(&mut self, n: usize) -> Result<Mat<C64>> {
        let mut a = Mat::<C64>::zeros(n, n);
        for j in 0..n {
            a[(j, j)] = C64::new(self.normal(), 0.0);
            for i in j + 1..n {
                let z = C64::new(self.normal(), self.normal()) / std::f64::consts::SQRT_2;
                a[(i, j)] = z;
                a[(j, i)] = z.conj();
            }
        }
        normalize(a)
    }
}

fn normalize(a: Mat<C64>) -> Result<Mat<C64>> {
    let s = spectral_norm_complex(a.as_ref())?;
    if s == 0.0 {
        return Ok(a);
    }
    Ok(Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] / s))
}
