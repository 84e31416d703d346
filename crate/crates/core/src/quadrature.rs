//! Gauss–Legendre rules and panel quadrature.

use std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, z);
        if d != 0.0 {
            dp = d;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// `(P_n(z), P_n'(z))` by the three-term recurrence.
fn legendre(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Nodes and weights for `∫_0^1`, on panels `[0, ½], [½, ¾], …` accumulating
/// geometrically at `1`, plus a final panel `[1 − 2^{−levels}, 1]`.
pub fn graded_unit_rule(levels: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(order);
    let mut edges = vec![0.0];
    for p in 1..=levels {
        edges.push(1.0 - 0.5f64.powi(p as i32));
    }
    edges.push(1.0);
    let mut nodes = Vec::with_capacity((levels + 1) * order);
    let mut weights = Vec::with_capacity((levels + 1) * order);
    for pair in edges.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let half = (b - a) / 2.0;
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push(a + half * (xi + 1.0));
            weights.push(half * wi);
        }
    }
    (nodes, weights)
}

/// Composite Gauss–Legendre on `[a, b]` with `panels` equal panels.
pub fn composite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize, rule: &(Vec<f64>, Vec<f64>)) -> f64 {
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + h * p as f64;
        let mut s = 0.0;
        for (xi, wi) in rule.0.iter().zip(&rule.1) {
            s += wi * f(lo + h * (xi + 1.0) / 2.0);
        }
        total += s * h / 2.0;
    }
    total
}

/// Doubles the panel count until two successive composite sums agree to
/// `tol`; `None` if that does not happen within `max_doublings`.
pub fn integrate_until_stable<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64, max_doublings: usize) -> Option<f64> {
    let rule = gauss_legendre(8);
    let mut panels = 4;
    let mut prev = composite(&f, a, b, panels, &rule);
    for _ in 0..max_doublings {
        panels *= 2;
        let next = composite(&f, a, b, panels, &rule);
        if (next - prev).abs() < tol {
            return Some(next);
        }
        prev = next;
    }
    None
}
