//! Gauss–Legendre quadrature on finite intervals.
//!
//! Nodes and weights are computed by Newton iteration on the Legendre
//! polynomial and cached per order. The adaptive helper doubles the node
//! count from 32 until two successive results agree to 1e-10, capped at 256.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Nodes and weights on [-1, 1].
fn rule_unit(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // Initial guess (Chebyshev-like), then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
    }
    out
}

/// Value and derivative of the degree-n Legendre polynomial at x.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn cached_rule(n: usize) -> Vec<(f64, f64)> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Vec<(f64, f64)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard.entry(n).or_insert_with(|| rule_unit(n)).clone()
}

/// Nodes and weights for ∫_a^b.
pub fn nodes(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    cached_rule(n)
        .into_iter()
        .map(|(x, w)| (mid + half * x, half * w))
        .collect()
}

/// Fixed-order quadrature of a scalar function.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    nodes(n, a, b).into_iter().map(|(x, w)| w * f(x)).sum()
}

/// Adaptive quadrature: start at 32 nodes, double until successive results
/// agree to `1e-10 * (1 + |I|)`, cap at 256 nodes.
pub fn integrate_adaptive(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mut n = 32;
    let mut prev = integrate(&f, a, b, n);
    while n < 256 {
        n *= 2;
        let next = integrate(&f, a, b, n);
        if (next - prev).abs() <= 1e-10 * (1.0 + next.abs()) {
            return next;
        }
        prev = next;
    }
    prev
}
