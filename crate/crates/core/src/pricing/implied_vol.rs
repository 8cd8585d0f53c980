//! Black-Scholes inversion with zero intrinsic risk.

use super::closed_form::{greeks, Carry};
use super::{ClaimKind, ClaimSpec};
use crate::error::{Error, Result};
use crate::market::MarketModel;

pub const VOL_LOWER: f64 = 1e-4;
pub const VOL_UPPER: f64 = 5.0;
const PRICE_TOL: f64 = 1e-10;
const MAX_ITER: usize = 100;
// bracket width at which bisection hands over to Newton
const NEWTON_SWITCH: f64 = 1e-3;

/// Flat volatility `σ̄` whose `ζ = 0` Black-Scholes value equals `price`.
///
/// Uses the spot and rate curve of `market`; its volatility is ignored.
pub fn implied_vol(price: f64, market: &MarketModel, claim: &ClaimSpec) -> Result<f64> {
    let strike = match (claim.kind(), claim.strike()) {
        (ClaimKind::Call | ClaimKind::Put, Some(k)) => k,
        _ => return Err(Error::unsupported("implied vol is defined for calls and puts")),
    };
    let t = claim.maturity();
    let rate = market.nu.integral(0.0, t);
    let spot = market.spot;
    let pv_strike = strike * (-rate).exp();
    let (lower, upper) = match claim.kind() {
        ClaimKind::Call => ((spot - pv_strike).max(0.0), spot),
        _ => ((pv_strike - spot).max(0.0), pv_strike),
    };
    if !(price > lower && price < upper) {
        return Err(Error::domain(format!(
            "price {price} outside the no-arbitrage bounds ({lower}, {upper})"
        )));
    }
    let model = |vol: f64| {
        let carry = Carry {
            variance: vol * vol * t,
            rate,
            intrinsic: 0.0,
        };
        let g = greeks(claim.kind(), spot, strike, carry);
        // vega from gamma: ∂V/∂σ = σ T x² Γ
        (g.value - price, vol * t * spot * spot * g.gamma)
    };

    let (mut lo, mut hi) = (VOL_LOWER, VOL_UPPER);
    let (f_lo, _) = model(lo);
    let (f_hi, _) = model(hi);
    if f_lo > 0.0 || f_hi < 0.0 {
        return Err(Error::domain(format!(
            "price {price} implies a volatility outside [{VOL_LOWER}, {VOL_UPPER}]"
        )));
    }
    let mut vol = 0.5 * (lo + hi);
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_ITER {
        let (f, vega) = model(vol);
        residual = f;
        if f.abs() <= PRICE_TOL {
            return Ok(vol);
        }
        if f > 0.0 {
            hi = vol;
        } else {
            lo = vol;
        }
        let newton = vol - f / vega;
        vol = if hi - lo < NEWTON_SWITCH && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::Numeric {
        message: format!("implied vol did not converge in {MAX_ITER} iterations near {vol}"),
        residual,
    })
}
