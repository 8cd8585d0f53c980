//! Prices of risk and the Girsanov densities linking the three measures.
//!
//! `dW = λ dt + dB` moves from the real-world to the risk-neutral measure and
//! `dZ = (ζ/σ) dt + dW` moves on to the risk-subjective one.

use crate::error::{Error, Result};
use crate::intrinsic::IntrinsicRiskModel;
use crate::market::{MarketModel, MeasureTag};
use crate::paths::{PathGenerator, SamplePath};
use crate::stats::{par_moments, Moments};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskPrices {
    /// Market price of risk `(μ − ν)/σ`.
    pub lambda: f64,
    /// Intrinsic price of risk `ζ/σ`.
    pub intrinsic: f64,
}

impl RiskPrices {
    pub fn total(&self) -> f64 {
        self.lambda + self.intrinsic
    }
}

pub fn market_price_of_risk(market: &MarketModel, t: f64) -> Result<f64> {
    let s = market.sigma_at(t)?;
    Ok((market.mu.value(t) - market.nu.value(t)) / s)
}

pub fn intrinsic_price_of_risk(
    zeta: &IntrinsicRiskModel,
    market: &MarketModel,
    t: f64,
    x: f64,
    horizon: f64,
) -> Result<f64> {
    let s = market.sigma_at(t)?;
    Ok(zeta.rate(market, t, x, horizon)? / s)
}

pub fn risk_prices(
    market: &MarketModel,
    zeta: &IntrinsicRiskModel,
    t: f64,
    x: f64,
    horizon: f64,
) -> Result<RiskPrices> {
    Ok(RiskPrices {
        lambda: market_price_of_risk(market, t)?,
        intrinsic: intrinsic_price_of_risk(zeta, market, t, x, horizon)?,
    })
}

/// Drift adjustment `θ` that turns real-world shocks into shocks of `target`.
pub fn theta_to(
    target: MeasureTag,
    market: &MarketModel,
    zeta: Option<&IntrinsicRiskModel>,
    t: f64,
    x: f64,
    horizon: f64,
) -> Result<f64> {
    match target {
        MeasureTag::RealWorld => Ok(0.0),
        MeasureTag::RiskNeutral => market_price_of_risk(market, t),
        MeasureTag::RiskSubjective => {
            let zeta = zeta.ok_or_else(|| {
                Error::config("risk-subjective measure requires an intrinsic risk model")
            })?;
            Ok(risk_prices(market, zeta, t, x, horizon)?.total())
        }
    }
}

/// `ln Λ = Σ (−θ_i √Δt_i Z_i − ½ θ_i² Δt_i)`.
pub fn log_density(path: &SamplePath, theta: &[f64]) -> f64 {
    assert_eq!(theta.len(), path.n_steps(), "one theta per step");
    theta
        .iter()
        .zip(&path.shocks)
        .zip(path.times.windows(2))
        .map(|((&th, &z), w)| {
            let dt = w[1] - w[0];
            -th * dt.sqrt() * z - 0.5 * th * th * dt
        })
        .sum()
}

/// Discrete Girsanov density of the measure with drift adjustment `theta`
/// relative to the measure that generated `path.shocks`.
pub fn radon_nikodym_density(path: &SamplePath, theta: &[f64]) -> f64 {
    log_density(path, theta).exp()
}

/// `θ(t_i, X_i)` at the left end of every step of `path`.
pub fn theta_along_path(
    path: &SamplePath,
    theta: impl Fn(f64, f64) -> Result<f64>,
) -> Result<Vec<f64>> {
    (0..path.n_steps())
        .map(|i| theta(path.times[i], path.values[i]))
        .collect()
}

/// Shocks of the measure reached by applying `theta`: `Z_i + θ_i √Δt_i`.
pub fn shifted_shocks(path: &SamplePath, theta: &[f64]) -> SamplePath {
    let shocks = path
        .shocks
        .iter()
        .zip(theta)
        .zip(path.times.windows(2))
        .map(|((&z, &th), w)| z + th * (w[1] - w[0]).sqrt())
        .collect();
    SamplePath {
        shocks,
        ..path.clone()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NovikovCheck {
    /// `exp(½ Σ θ_i² Δt_i)`.
    pub value: f64,
    pub satisfied: bool,
    /// Grid time of the first non-finite `θ`, if any.
    pub offending_time: Option<f64>,
}

/// Evaluates `exp(½∫θ² dt)` for a deterministic `θ` on the grid `times`
/// (`theta[i]` applies on `[times[i], times[i+1])`).
pub fn novikov_check(times: &[f64], theta: &[f64]) -> NovikovCheck {
    assert_eq!(times.len(), theta.len() + 1, "one theta per grid interval");
    if let Some(i) = theta.iter().position(|th| !th.is_finite()) {
        return NovikovCheck {
            value: f64::NAN,
            satisfied: false,
            offending_time: Some(times[i]),
        };
    }
    let half_int: f64 = theta
        .iter()
        .zip(times.windows(2))
        .map(|(th, w)| 0.5 * th * th * (w[1] - w[0]))
        .sum();
    let value = half_int.exp();
    NovikovCheck {
        value,
        satisfied: value.is_finite(),
        offending_time: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaPoint {
    pub t: f64,
    pub lambda: f64,
    pub intrinsic_price: f64,
    pub theta_total: f64,
}

/// Prices of risk at the left end of `n_steps` uniform steps over
/// `[0, horizon]`, with the intrinsic rate evaluated at the spot. A model
/// that cannot be evaluated at some point yields NaN there.
pub fn theta_grid(
    market: &MarketModel,
    zeta: &IntrinsicRiskModel,
    horizon: f64,
    n_steps: usize,
) -> Result<(Vec<ThetaPoint>, NovikovCheck)> {
    if n_steps == 0 || horizon.is_nan() || horizon <= 0.0 {
        return Err(Error::config("check grid needs horizon > 0 and at least one step"));
    }
    let times: Vec<f64> = (0..=n_steps)
        .map(|i| horizon * i as f64 / n_steps as f64)
        .collect();
    let mut points = Vec::with_capacity(n_steps);
    for &t in &times[..n_steps] {
        let lambda = market_price_of_risk(market, t)?;
        let intrinsic_price =
            intrinsic_price_of_risk(zeta, market, t, market.spot, horizon).unwrap_or(f64::NAN);
        points.push(ThetaPoint {
            t,
            lambda,
            intrinsic_price,
            theta_total: lambda + intrinsic_price,
        });
    }
    let theta: Vec<f64> = points.iter().map(|p| p.theta_total).collect();
    let check = novikov_check(&times, &theta);
    Ok((points, check))
}

/// Estimates `E_target[h(X(T))/D(T)]` by simulating under the real-world
/// measure and weighting each path with its density.
///
/// Returns moments of the weighted discounted payoff and of the density.
#[allow(clippy::too_many_arguments)]
pub fn reweighted_expectation(
    market: &MarketModel,
    target: MeasureTag,
    zeta: Option<&IntrinsicRiskModel>,
    payoff: impl Fn(f64) -> f64 + Sync,
    horizon: f64,
    n_steps: usize,
    n_paths: u64,
    seed: u64,
) -> Result<(Moments, Moments)> {
    let generator = PathGenerator::new(market, MeasureTag::RealWorld, None, horizon, n_steps, seed)?;
    let times = generator.times().to_vec();
    let growth = market.nu.integral(0.0, horizon).exp();
    let m = par_moments(n_paths, 2, |id, out| {
        let mut log_l = 0.0;
        let mut failure = None;
        let x_t = generator.walk(id, |i, x, z| {
            let dt = times[i + 1] - times[i];
            match theta_to(target, market, zeta, times[i], x, horizon) {
                Ok(th) => log_l += -th * dt.sqrt() * z - 0.5 * th * th * dt,
                Err(e) => failure = Some(e),
            }
        })?;
        if let Some(e) = failure {
            return Err(e);
        }
        let density = log_l.exp();
        out[0] = density * payoff(x_t) / growth;
        out[1] = density;
        Ok(())
    })?;
    Ok((m[0], m[1]))
}
