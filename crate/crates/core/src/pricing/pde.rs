//! Finite differences for the valuation PDE
//!
//! `∂V/∂t + ½σ²x²V_xx + (ν − ζ)xV_x = νV`, `V(x, T) = h(x)`,
//!
//! solved backwards on a grid in `ln x` whose nodes cluster around the spot
//! (sinh stretching). Crank-Nicolson is used
//! throughout except for the first two steps after expiry, which are each
//! replaced by two fully implicit half steps (Rannacher) to keep `V_xx`
//! smooth near payoff kinks. Both edges use the linearity condition
//! `V_xx = 0`.

use serde::{Deserialize, Serialize};

use super::{ClaimSpec, Diagnostics, EngineTag, PricingResult};
use crate::error::{Error, Result};
use crate::intrinsic::IntrinsicRiskModel;
use crate::market::MarketModel;

const DOMAIN_STD_DEVS: f64 = 6.0;
const RANNACHER_STEPS: usize = 2;
/// Width of the refined region around the spot, as a fraction of the domain.
const CLUSTERING: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdeGrid {
    /// Number of intervals in `ln x`.
    pub n_space: usize,
    /// Number of time steps.
    pub n_time: usize,
    /// Defaults to `min(spot, strike)·exp(−6√∫σ²)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_min: Option<f64>,
    /// Defaults to `max(spot, strike)·exp(+6√∫σ²)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_max: Option<f64>,
}

impl PdeGrid {
    pub fn new(n_space: usize, n_time: usize) -> Self {
        PdeGrid {
            n_space,
            n_time,
            x_min: None,
            x_max: None,
        }
    }

    pub fn with_bounds(mut self, x_min: f64, x_max: f64) -> Self {
        self.x_min = Some(x_min);
        self.x_max = Some(x_max);
        self
    }

    fn bounds(&self, market: &MarketModel, maturity: f64, strike: Option<f64>) -> Result<(f64, f64)> {
        if self.n_space < 50 {
            return Err(Error::config(format!("grid.n_space must be >= 50, got {}", self.n_space)));
        }
        if self.n_time < 20 {
            return Err(Error::config(format!("grid.n_time must be >= 20, got {}", self.n_time)));
        }
        let width = DOMAIN_STD_DEVS * market.sigma.integral_sq(0.0, maturity).sqrt();
        let k = strike.unwrap_or(market.spot);
        let lo = self.x_min.unwrap_or(market.spot.min(k) * (-width).exp());
        let hi = self.x_max.unwrap_or(market.spot.max(k) * width.exp());
        if !(lo > 0.0 && lo < market.spot && market.spot < hi && hi.is_finite()) {
            return Err(Error::config(format!(
                "grid bounds must satisfy 0 < x_min < spot < x_max, got [{lo}, {hi}] with spot {}",
                market.spot
            )));
        }
        Ok((lo, hi))
    }
}

/// The full backward solution with first and second price derivatives.
///
/// Level `k` holds the solution at `times[k]`; level `n_time` is the payoff.
#[derive(Debug, Clone)]
pub struct PdeSolution {
    times: Vec<f64>,
    log_nodes: Vec<f64>,
    nodes: Vec<f64>,
    values: Vec<Vec<f64>>,
    deltas: Vec<Vec<f64>>,
    gammas: Vec<Vec<f64>>,
    spot: f64,
    n_space: usize,
    n_time: usize,
}

impl PdeSolution {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self, level: usize) -> &[f64] {
        &self.values[level]
    }

    /// `V_x` at every node of time level `level`.
    pub fn delta_grid(&self, level: usize) -> &[f64] {
        &self.deltas[level]
    }

    /// `V_xx` at every node of time level `level`.
    pub fn gamma_grid(&self, level: usize) -> &[f64] {
        &self.gammas[level]
    }

    pub fn value_at(&self, t: f64, x: f64) -> f64 {
        self.interp(&self.values, t, x)
    }

    pub fn delta_at(&self, t: f64, x: f64) -> f64 {
        self.interp(&self.deltas, t, x)
    }

    pub fn gamma_at(&self, t: f64, x: f64) -> f64 {
        self.interp(&self.gammas, t, x)
    }

    pub fn price(&self) -> f64 {
        cubic(&self.log_nodes, &self.values[0], self.spot.ln())
    }

    pub fn result(&self) -> PricingResult {
        PricingResult {
            value: self.price(),
            std_error: 0.0,
            engine: EngineTag::Pde,
            diagnostics: Diagnostics::Grid {
                n_space: self.n_space,
                n_time: self.n_time,
            },
        }
    }

    fn interp(&self, grids: &[Vec<f64>], t: f64, x: f64) -> f64 {
        let y = x
            .clamp(self.nodes[0], self.nodes[self.n_space])
            .ln();
        let dt = self.times[1] - self.times[0];
        let pos = (t / dt).clamp(0.0, self.n_time as f64);
        let k = (pos.floor() as usize).min(self.n_time - 1);
        let w = pos - k as f64;
        let lo = cubic(&self.log_nodes, &grids[k], y);
        if w == 0.0 {
            return lo;
        }
        let hi = cubic(&self.log_nodes, &grids[k + 1], y);
        (1.0 - w) * lo + w * hi
    }
}

/// Four-point Lagrange interpolation.
fn cubic(ys: &[f64], vals: &[f64], y: f64) -> f64 {
    let n = ys.len() - 1;
    let i = ys.partition_point(|&v| v <= y);
    let s = i.saturating_sub(2).min(n - 3);
    let mut acc = 0.0;
    for a in s..s + 4 {
        let mut w = 1.0;
        for b in s..s + 4 {
            if a != b {
                w *= (y - ys[b]) / (ys[a] - ys[b]);
            }
        }
        acc += w * vals[a];
    }
    acc
}

/// `n + 1` nodes from `y0` to `y1`, spaced as `sinh` of a uniform grid so
/// that they are densest at `yc`.
fn log_grid(y0: f64, y1: f64, yc: f64, n: usize) -> Vec<f64> {
    let scale = CLUSTERING * (y1 - y0);
    let (u0, u1) = (((y0 - yc) / scale).asinh(), ((y1 - yc) / scale).asinh());
    let mut ys: Vec<f64> = (0..=n)
        .map(|j| yc + scale * (u0 + (u1 - u0) * j as f64 / n as f64).sinh())
        .collect();
    ys[0] = y0;
    ys[n] = y1;
    ys
}

/// `eᵘ − 1 − u` without cancellation for small `u`.
fn exp_remainder(u: f64) -> f64 {
    if u.abs() > 0.1 {
        return u.exp_m1() - u;
    }
    let (mut term, mut sum) = (u, 0.0);
    for k in 2..=10 {
        term *= u / k as f64;
        sum += term;
    }
    sum
}

/// Three-point weights in `y = ln x` for `∂_y` and `∂_yy` at each interior
/// node, exact on `1`, `y` and `eʸ`. Exactness on `eʸ = x` means affine
/// far-field solutions carry no spurious curvature.
struct Stencil {
    d1: Vec<[f64; 3]>,
    d2: Vec<[f64; 3]>,
}

impl Stencil {
    fn new(ys: &[f64]) -> Self {
        let n = ys.len() - 1;
        let (mut d1, mut d2) = (vec![[0.0; 3]; n + 1], vec![[0.0; 3]; n + 1]);
        for j in 1..n {
            let (a, b) = (ys[j - 1] - ys[j], ys[j + 1] - ys[j]);
            let (ga, gb) = (exp_remainder(a), exp_remainder(b));
            let det = a * gb - b * ga;
            // solve w₋a + w₊b = p, w₋g(a) + w₊g(b) = q; centre weight closes Σw = 0
            let weights = |p: f64, q: f64| {
                let lo = (p * gb - q * b) / det;
                let hi = (q * a - p * ga) / det;
                [lo, -lo - hi, hi]
            };
            d1[j] = weights(1.0, 0.0);
            d2[j] = weights(0.0, 1.0);
        }
        Stencil { d1, d2 }
    }

    fn apply(w: &[f64; 3], v: &[f64], j: usize) -> f64 {
        w[0] * v[j - 1] + w[1] * v[j] + w[2] * v[j + 1]
    }
}

/// Thomas algorithm; `lower[0]` and `upper[n-1]` are ignored.
fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64]) {
    let n = diag.len();
    let mut c = vec![0.0; n];
    c[0] = upper[0] / diag[0];
    rhs[0] /= diag[0];
    for i in 1..n {
        let m = diag[i] - lower[i] * c[i - 1];
        c[i] = upper[i] / m;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / m;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
}

struct Stepper<'a> {
    market: &'a MarketModel,
    zeta: &'a IntrinsicRiskModel,
    maturity: f64,
    nodes: Vec<f64>,
    stencil: Stencil,
}

impl Stepper<'_> {
    /// Weights `(w₁, w₂)` with `V_edge = w₁V_near + w₂V_next` for the value
    /// affine in x through the two nodes next to an edge.
    fn edge_weights(&self, edge: usize, near: usize, next: usize) -> (f64, f64) {
        let x = &self.nodes;
        let s = (x[edge] - x[near]) / (x[next] - x[near]);
        (1.0 - s, s)
    }

    /// One θ-step from `t_new + dt` back to `t_new`. Both edges are closed by
    /// the linearity condition `V_xx = 0`.
    fn step(&self, old: &[f64], t_new: f64, dt: f64, theta: f64) -> Result<Vec<f64>> {
        let n = self.nodes.len() - 1;
        let tc = t_new + 0.5 * dt;
        let s = self.market.sigma.value(tc);
        let nu = self.market.nu.value(tc);
        let mut lower = vec![0.0; n - 1];
        let mut diag = vec![0.0; n - 1];
        let mut upper = vec![0.0; n - 1];
        let mut rhs = vec![0.0; n - 1];
        for j in 1..n {
            let zeta = self.zeta.rate(self.market, tc, self.nodes[j], self.maturity)?;
            let (a, b) = (0.5 * s * s, nu - zeta - 0.5 * s * s);
            let (d1, d2) = (self.stencil.d1[j], self.stencil.d2[j]);
            let l = a * d2[0] + b * d1[0];
            let d = a * d2[1] + b * d1[1] - nu;
            let u = a * d2[2] + b * d1[2];
            let lv = l * old[j - 1] + d * old[j] + u * old[j + 1];
            rhs[j - 1] = old[j] + (1.0 - theta) * dt * lv;
            lower[j - 1] = -theta * dt * l;
            diag[j - 1] = 1.0 - theta * dt * d;
            upper[j - 1] = -theta * dt * u;
        }
        let (lo_near, lo_next) = self.edge_weights(0, 1, 2);
        let (hi_near, hi_next) = self.edge_weights(n, n - 1, n - 2);
        diag[0] += lower[0] * lo_near;
        upper[0] += lower[0] * lo_next;
        diag[n - 2] += upper[n - 2] * hi_near;
        lower[n - 2] += upper[n - 2] * hi_next;
        solve_tridiagonal(&lower, &diag, &upper, &mut rhs);
        let mut new = Vec::with_capacity(n + 1);
        new.push(lo_near * rhs[0] + lo_next * rhs[1]);
        new.extend_from_slice(&rhs);
        new.push(hi_near * rhs[n - 2] + hi_next * rhs[n - 3]);
        Ok(new)
    }
}

fn derivatives(nodes: &[f64], stencil: &Stencil, values: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = values.len() - 1;
    let mut delta = vec![0.0; n + 1];
    let mut gamma = vec![0.0; n + 1];
    for j in 1..n {
        let vy = Stencil::apply(&stencil.d1[j], values, j);
        let vyy = Stencil::apply(&stencil.d2[j], values, j);
        delta[j] = vy / nodes[j];
        gamma[j] = (vyy - vy) / (nodes[j] * nodes[j]);
    }
    // edges extend the neighbouring gamma
    delta[0] = delta[1] - gamma[1] * (nodes[1] - nodes[0]);
    delta[n] = delta[n - 1] + gamma[n - 1] * (nodes[n] - nodes[n - 1]);
    gamma[0] = gamma[1];
    gamma[n] = gamma[n - 1];
    (delta, gamma)
}

/// Solves for an arbitrary payoff. The default domain covers both the spot
/// and `strike`, if given, with room to spare on either side.
pub(crate) fn solve_payoff(
    market: &MarketModel,
    zeta: &IntrinsicRiskModel,
    payoff: &dyn Fn(f64) -> f64,
    maturity: f64,
    strike: Option<f64>,
    grid: &PdeGrid,
) -> Result<PdeSolution> {
    let (lo, hi) = grid.bounds(market, maturity, strike)?;
    let n = grid.n_space;
    let m = grid.n_time;
    let (y0, y1) = (lo.ln(), hi.ln());
    let log_nodes = log_grid(y0, y1, market.spot.ln(), n);
    let nodes: Vec<f64> = log_nodes.iter().map(|y| y.exp()).collect();
    let times: Vec<f64> = (0..=m).map(|k| maturity * k as f64 / m as f64).collect();

    let stepper = Stepper {
        market,
        zeta,
        maturity,
        nodes: nodes.clone(),
        stencil: Stencil::new(&log_nodes),
    };
    let mut values = vec![Vec::new(); m + 1];
    values[m] = nodes.iter().map(|&x| payoff(x)).collect();
    for k in (0..m).rev() {
        let (t0, t1) = (times[k], times[k + 1]);
        let dt = t1 - t0;
        values[k] = if m - k <= RANNACHER_STEPS {
            let half = 0.5 * dt;
            let mid = stepper.step(&values[k + 1], t0 + half, half, 1.0)?;
            stepper.step(&mid, t0, half, 1.0)?
        } else {
            stepper.step(&values[k + 1], t0, dt, 0.5)?
        };
    }
    let (deltas, gammas) = values.iter().map(|v| derivatives(&nodes, &stepper.stencil, v)).unzip();
    Ok(PdeSolution {
        times,
        log_nodes,
        nodes,
        values,
        deltas,
        gammas,
        spot: market.spot,
        n_space: n,
        n_time: m,
    })
}

pub fn pde_solve(
    market: &MarketModel,
    zeta: &IntrinsicRiskModel,
    claim: &ClaimSpec,
    grid: &PdeGrid,
) -> Result<PdeSolution> {
    let strike = claim.strike().filter(|&k| k > 0.0);
    solve_payoff(market, zeta, &|x| claim.payoff(x), claim.maturity(), strike, grid)
}

pub fn pde_price(
    market: &MarketModel,
    zeta: &IntrinsicRiskModel,
    claim: &ClaimSpec,
    grid: &PdeGrid,
) -> Result<PricingResult> {
    Ok(pde_solve(market, zeta, claim, grid)?.result())
}
