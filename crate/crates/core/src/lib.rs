//! Finite sections of Hankel operators with piecewise-continuous symbols.
//!
//! A symbol is stored as a finite list of jumps plus a smooth remainder
//! ([`symbols::PCSymbol`]). Sections `τ_N ⋆ Γ(ω̂)` are built from a
//! Schur–Hadamard multiplier ([`multipliers::MultiplierSpec`]) and analysed
//! through counting functions of their singular values and eigenvalues
//! ([`spectra`]). The [`model`] module holds closed-form oracles for the
//! Hilbert matrix; [`factored`] evaluates Poisson-regularised quantities
//! close to `r = 1` through a quadrature factorisation.

pub mod error;
pub mod factored;
pub mod linalg;
pub mod model;
pub mod multipliers;
pub mod quadrature;
pub mod sections;
pub mod spectra;
pub mod symbols;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Formats a float with 17 significant digits, enough to round-trip exactly.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    format!("{x:.16e}")
}
