//! Oracles shared by the integration tests. Nothing here calls the pricing
//! engines.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

pub fn integrate(rule: &[(f64, f64)], a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let (half, mid) = (0.5 * (b - a), 0.5 * (b + a));
    rule.iter().map(|&(x, w)| w * f(mid + half * x)).sum::<f64>() * half
}

fn phi(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// Discounted call or put value by quadrature of the lognormal payoff
/// integral, split at the kink. `carry` is `∫(ν − ζ)`, `var` is `∫σ²`.
pub fn quadrature_vanilla(
    call: bool,
    spot: f64,
    strike: f64,
    carry: f64,
    var: f64,
    rate: f64,
) -> f64 {
    let rule = gauss_legendre(2000);
    let s = var.sqrt();
    let m = carry - 0.5 * var;
    let x_of = |z: f64| spot * (m + s * z).exp();
    let kink = ((strike / spot).ln() - m) / s;
    let value = if call {
        let lo = kink.max(-40.0);
        integrate(&rule, lo, 40.0_f64.max(lo), |z| (x_of(z) - strike).max(0.0) * phi(z))
    } else {
        let hi = kink.min(40.0);
        integrate(&rule, (-40.0_f64).min(hi), hi, |z| (strike - x_of(z)).max(0.0) * phi(z))
    };
    (-rate).exp() * value
}

/// Textbook Black-Scholes-Merton with continuous dividend yield `q`.
pub fn bsm_dividend(call: bool, s: f64, k: f64, r: f64, q: f64, sigma: f64, t: f64) -> f64 {
    let n = |x: f64| 0.5 * libm::erfc(-x / 2f64.sqrt());
    let d1 = ((s / k).ln() + (r - q + 0.5 * sigma * sigma) * t) / (sigma * t.sqrt());
    let d2 = d1 - sigma * t.sqrt();
    if call {
        s * (-q * t).exp() * n(d1) - k * (-r * t).exp() * n(d2)
    } else {
        k * (-r * t).exp() * n(-d2) - s * (-q * t).exp() * n(-d1)
    }
}

/// Garman-Kohlhagen foreign-exchange option with foreign rate `rf`.
pub fn garman_kohlhagen(call: bool, s: f64, k: f64, rd: f64, rf: f64, sigma: f64, t: f64) -> f64 {
    let fwd = s * ((rd - rf) * t).exp();
    let n = |x: f64| 0.5 * libm::erfc(-x / 2f64.sqrt());
    let sd = sigma * t.sqrt();
    let d1 = ((fwd / k).ln() + 0.5 * sd * sd) / sd;
    let d2 = d1 - sd;
    let df = (-rd * t).exp();
    if call {
        df * (fwd * n(d1) - k * n(d2))
    } else {
        df * (k * n(-d2) - fwd * n(-d1))
    }
}
