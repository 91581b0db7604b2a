//! Adaptive composite Gauss–Legendre quadrature (15 points, interval bisection).

use crate::error::{Error, Result};
use std::sync::OnceLock;

pub const GL_POINTS: usize = 15;
/// Maximum bisection depth before giving up.
pub const MAX_DEPTH: usize = 40;

struct Rule {
    nodes: [f64; GL_POINTS],
    weights: [f64; GL_POINTS],
}

/// Legendre P_n and P_n' at x via the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_POINTS;
        let mut nodes = [0.0; GL_POINTS];
        let mut weights = [0.0; GL_POINTS];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre(n, x);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        Rule { nodes, weights }
    })
}

/// Single 15-point Gauss–Legendre panel on [a, b].
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let r = rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    r.nodes
        .iter()
        .zip(r.weights.iter())
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Adaptive integral of `f` over [a, b] to absolute tolerance `tol`.
///
/// Each panel is compared against the sum of its two halves; panels whose
/// difference exceeds their share of the tolerance are bisected.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let whole = gauss_legendre(f, a, b);
    let mut worst = 0.0f64;
    let value = recurse(f, a, b, whole, tol, 0, &mut worst);
    if worst > tol {
        return Err(Error::Quadrature { estimate: worst, tol });
    }
    Ok(value)
}

fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: usize,
    worst: &mut f64,
) -> f64 {
    let m = 0.5 * (a + b);
    let left = gauss_legendre(f, a, m);
    let right = gauss_legendre(f, m, b);
    let err = (left + right - whole).abs();
    if err <= tol || depth >= MAX_DEPTH {
        if depth >= MAX_DEPTH && err > tol {
            *worst = worst.max(err);
        }
        return left + right;
    }
    recurse(f, a, m, left, 0.5 * tol, depth + 1, worst)
        + recurse(f, m, b, right, 0.5 * tol, depth + 1, worst)
}

/// Integral over [a, b] split at the given interior breakpoints.
pub fn integrate_pieces<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: f64,
) -> Result<f64> {
    let mut cuts = vec![a];
    cuts.extend(breakpoints.iter().copied().filter(|&x| x > a && x < b));
    cuts.push(b);
    let span = b - a;
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let share = tol * (w[1] - w[0]) / span;
        total += integrate(f, w[0], w[1], share.max(f64::MIN_POSITIVE))?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        let s: f64 = rule().weights.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn exact_for_degree_29() {
        // ∫_{-1}^{2} x^29 dx = (2^30 - 1) / 30
        let v = gauss_legendre(&|x: f64| x.powi(29), -1.0, 2.0);
        let exact = (2f64.powi(30) - 1.0) / 30.0;
        assert!(((v - exact) / exact).abs() < 1e-13);
    }

    #[test]
    fn adaptive_handles_sqrt_singularity() {
        let v = integrate(&|x: f64| x.sqrt(), 0.0, 1.0, 1e-12).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn reports_non_convergence() {
        let err = integrate(&|x: f64| 1.0 / x, 0.0, 1.0, 1e-12).unwrap_err();
        assert!(matches!(err, Error::Quadrature { .. }));
    }
}
