//! Implied-volatility surfaces of risk-subjective prices.
//!
//! Each maturity is inverted against its own subjective futures price `F`:
//! the `ζ = 0` Black-Scholes formula is applied with spot `F·e^{−∫ν}`. A flat
//! intrinsic rate then only moves `F` and leaves the surface flat at `σ`;
//! anything that makes `ζ` depend on the price shows up as skew.

use super::monte_carlo::subjective_moments;
use super::{futures_price, implied_vol, ClaimSpec, Engine};
use crate::error::Result;
use crate::intrinsic::IntrinsicRiskModel;
use crate::market::MarketModel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmilePoint {
    pub strike: f64,
    pub maturity: f64,
    pub implied_vol: f64,
}

/// Out-of-the-money option at `strike` relative to `forward`.
pub fn otm_claim(forward: f64, strike: f64, maturity: f64) -> Result<ClaimSpec> {
    if strike < forward {
        ClaimSpec::put(strike, maturity)
    } else {
        ClaimSpec::call(strike, maturity)
    }
}

/// Futures price and option values for one maturity from a single engine run.
fn price_slice(
    market: &MarketModel,
    zeta: &IntrinsicRiskModel,
    strikes: &[f64],
    maturity: f64,
    engine: &Engine,
) -> Result<(f64, Vec<(ClaimSpec, f64)>)> {
    let discount = (-market.nu.integral(0.0, maturity)).exp();
    if let Engine::MonteCarlo {
        n_paths,
        n_steps,
        seed,
    } = engine
    {
        // the forward is needed to choose the claims, so price both legs on
        // the same paths and pick afterwards
        let payoffs: Vec<Box<dyn Fn(f64) -> f64 + Sync>> = std::iter::once(
            Box::new(|x: f64| x) as Box<dyn Fn(f64) -> f64 + Sync>,
        )
        .chain(strikes.iter().flat_map(|&k| {
            [
                Box::new(move |x: f64| (k - x).max(0.0)) as Box<dyn Fn(f64) -> f64 + Sync>,
                Box::new(move |x: f64| (x - k).max(0.0)) as Box<dyn Fn(f64) -> f64 + Sync>,
            ]
        }))
        .collect();
        let refs: Vec<&(dyn Fn(f64) -> f64 + Sync)> = payoffs.iter().map(|b| b.as_ref()).collect();
        let m = subjective_moments(market, zeta, &refs, maturity, *n_paths, *n_steps, *seed)?;
        let forward = m[0].mean;
        let slice = strikes
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                let claim = otm_claim(forward, k, maturity)?;
                let leg = if k < forward { 1 + 2 * i } else { 2 + 2 * i };
                Ok((claim, discount * m[leg].mean))
            })
            .collect::<Result<_>>()?;
        return Ok((forward, slice));
    }
    let forward = futures_price(market, zeta, maturity, engine)?.value;
    let slice = strikes
        .iter()
        .map(|&k| {
            let claim = otm_claim(forward, k, maturity)?;
            let value = engine.price(market, zeta, &claim)?.value;
            Ok((claim, value))
        })
        .collect::<Result<_>>()?;
    Ok((forward, slice))
}

/// Implied volatilities for every `(maturity, strike)` pair, ordered by
/// maturity then strike as given.
pub fn smile_surface(
    market: &MarketModel,
    zeta: &IntrinsicRiskModel,
    strikes: &[f64],
    maturities: &[f64],
    engine: &Engine,
) -> Result<Vec<SmilePoint>> {
    let mut out = Vec::with_capacity(strikes.len() * maturities.len());
    for &maturity in maturities {
        let (forward, slice) = price_slice(market, zeta, strikes, maturity, engine)?;
        let implied_spot = forward * (-market.nu.integral(0.0, maturity)).exp();
        let inversion_market = market.with_spot(implied_spot)?;
        for (claim, value) in slice {
            out.push(SmilePoint {
                strike: claim.strike().expect("vanilla claim"),
                maturity,
                implied_vol: implied_vol(value, &inversion_market, &claim)?,
            });
        }
    }
    Ok(out)
}
