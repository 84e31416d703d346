use std::f64::consts::PI;

use faer::Mat;
use proptest::prelude::*;

use hankel_spectra::linalg::{schatten_norm, RandomMatrices};
use hankel_spectra::multipliers::MultiplierSpec;
use hankel_spectra::sections::{build_hankel_section, SectionOptions};
use hankel_spectra::spectra::{
    logdens_sweep, matrix_summary, spectral_summary, symmetry_gap, write_sweep_csv, CountMode, SpectralSummary,
    SWEEP_HEADER,
};
use hankel_spectra::symbols::PCSymbol;
use hankel_spectra::{Error, C64};

const INSTANCES: u64 = 200;

fn n(s: &SpectralSummary, t: f64) -> usize {
    s.count(t, CountMode::Singular).unwrap().value
}

fn signed(s: &SpectralSummary, t: f64, mode: CountMode) -> usize {
    s.count(t, mode).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn counts_agree_with_gram_matrix(seed in 0u64..10_000, dim in 2usize..24, t in 0.05..0.95f64) {
        let a = RandomMatrices::new(seed).general(dim, dim).unwrap();
        let gram = a.adjoint() * &a;
        let s = matrix_summary(&a).unwrap();
        let g = matrix_summary(&gram).unwrap();
        let c1 = s.count(t, CountMode::Singular).unwrap();
        let c2 = g.count(t * t, CountMode::Plus).unwrap();
        if !c1.tie && !c2.tie {
            prop_assert_eq!(c1.value, c2.value);
        }
    }

    #[test]
    fn count_splits_by_sign(seed in 0u64..10_000, dim in 2usize..24, t in 0.05..0.95f64) {
        let s = matrix_summary(&RandomMatrices::new(seed).hermitian(dim).unwrap()).unwrap();
        let c = s.count(t, CountMode::Singular).unwrap();
        let p = s.count(t, CountMode::Plus).unwrap();
        let m = s.count(t, CountMode::Minus).unwrap();
        if !c.tie {
            prop_assert_eq!(c.value, p.value + m.value);
        }
    }
}

#[test]
fn lemma_counting_bound() {
    let mut g = RandomMatrices::new(2024);
    for i in 0..INSTANCES {
        let dim = 4 + (i as usize % 29);
        let scale = 1.0 + 3.0 * g.uniform(0.0, 1.0);
        let a = g.general(dim, dim).unwrap();
        let k = Mat::from_fn(dim, dim, |r, c| a[(r, c)] * scale);
        let s = matrix_summary(&k).unwrap();
        for p in [1.0, 2.0] {
            let norm_p = schatten_norm(&s.singular_values, p).powf(p);
            for t in [0.1, 0.5, 1.0] {
                assert!(n(&s, t) as f64 <= norm_p / t.powf(p), "instance {i}, p={p}, t={t}");
            }
        }
    }
}

#[test]
fn weyl_inequalities() {
    let mut g = RandomMatrices::new(77);
    for i in 0..INSTANCES {
        let dim = 3 + (i as usize % 20);
        let (a, b) = (g.general(dim, dim).unwrap(), g.general(dim, dim).unwrap());
        let t = g.uniform(0.1, 1.8);
        let s = t * g.uniform(0.05, 0.95);
        let (sa, sb, sab) = (matrix_summary(&a).unwrap(), matrix_summary(&b).unwrap(), matrix_summary(&(&a + &b)).unwrap());
        assert!(n(&sab, t) <= n(&sa, t - s) + n(&sb, s), "instance {i}");

        let (ha, hb) = (g.hermitian(dim).unwrap(), g.hermitian(dim).unwrap());
        let (sa, sb, sab) = (matrix_summary(&ha).unwrap(), matrix_summary(&hb).unwrap(), matrix_summary(&(&ha + &hb)).unwrap());
        for mode in [CountMode::Plus, CountMode::Minus] {
            assert!(signed(&sab, t, mode) <= signed(&sa, t - s, mode) + signed(&sb, s, mode), "instance {i}");
        }
    }
}

/// `‖σ_N ⋆ Γ(γ̂)‖²_{S₂}` for `σ = AbelPoisson − Fejer`, summed along anti-diagonals.
fn sigma_frobenius(n: usize) -> f64 {
    let abel = MultiplierSpec::abel_poisson();
    let fejer = MultiplierSpec::fejer();
    let end = 60 * n;
    (0..end)
        .rev()
        .map(|s| {
            let d = abel.antidiagonal_value(n, s).unwrap() - fejer.antidiagonal_value(n, s).unwrap();
            (s as f64 + 1.0) * (d / (PI * (s as f64 + 1.0))).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}

#[test]
fn difference_multiplier_stays_hilbert_schmidt() {
    let norms: Vec<f64> = (4..=13).map(|k| sigma_frobenius(1 << k)).collect();
    let mut sorted = norms.clone();
    sorted.sort_by(f64::total_cmp);
    let median = (sorted[4] + sorted[5]) / 2.0;
    let max = sorted[9];
    assert!(max <= 1.2 * median, "{norms:?}");
    // Dense cross-check at a small size.
    let n = 16;
    let a = build_hankel_section(&PCSymbol::hilbert(), &abel(), n, &SectionOptions { tol: 1e-9, ..Default::default() }).unwrap();
    let mut f = 0.0;
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let fejer = MultiplierSpec::fejer().scaled_value(n, i, j).re / (PI * (i + j + 1) as f64);
            f += (a.get(i, j).re - fejer).powi(2);
        }
    }
    assert!((f.sqrt() / norms[0] - 1.0).abs() < 1e-6);
}

fn abel() -> MultiplierSpec {
    MultiplierSpec::abel_poisson()
}

#[test]
fn hilbert_matrix_is_positive() {
    for n in [16, 64, 256] {
        let s = spectral_summary(
            &build_hankel_section(&PCSymbol::hilbert(), &MultiplierSpec::square(), n, &SectionOptions::default()).unwrap(),
        )
        .unwrap();
        let ev = s.eigenvalues.clone().unwrap();
        assert!(*ev.last().unwrap() > -1e-10);
        for t in [0.05, 0.2, 0.5] {
            assert_eq!(s.count(t, CountMode::Minus).unwrap().value, 0);
        }
    }
}

#[test]
fn sweep_csv_layout() {
    let fits = logdens_sweep(&PCSymbol::psi(), &MultiplierSpec::square(), &[0.2, 1.5], &[16, 32, 64], &SectionOptions::default())
        .unwrap();
    let mut out = Vec::new();
    write_sweep_csv(&mut out, "psi", "square", &fits).unwrap();
    let text = String::from_utf8(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], SWEEP_HEADER);
    assert_eq!(lines.len(), 7);
    for row in &lines[4..] {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[5], "0", "{row}");
    }
    assert!(fits[0].slope_plus.is_some());
}

#[test]
fn symmetry_gap_preconditions() {
    let opts = SectionOptions::default();
    assert!(matches!(
        symmetry_gap(&PCSymbol::hilbert(), &MultiplierSpec::square(), 0.2, &[8, 16], &opts),
        Err(Error::Precondition(_))
    ));
    assert!(matches!(
        symmetry_gap(&PCSymbol::psi(), &MultiplierSpec::oblique(0.5, 1.0).unwrap(), 0.2, &[8, 16], &opts),
        Err(Error::Precondition(_))
    ));
    let gaps = symmetry_gap(&PCSymbol::psi(), &MultiplierSpec::square(), 0.2, &[8, 16, 32], &opts).unwrap();
    assert!(gaps.iter().all(|g| *g <= 2));
    let pair = PCSymbol::conjugate_pair(PI / 3.0, C64::new(1.0, 0.0)).unwrap();
    assert!(symmetry_gap(&pair, &MultiplierSpec::fejer(), 0.2, &[8, 16, 32], &opts).is_ok());
}
