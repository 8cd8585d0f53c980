//! Black-Scholes with carry for price-independent intrinsic risk.
//!
//! Under the subjective measure the asset is lognormal with carry `ν − ζ` and
//! is discounted at `ν`, so the intrinsic rate takes the place of a continuous
//! dividend yield.

use super::{ClaimKind, ClaimSpec, Diagnostics, EngineTag, PricingResult};
use crate::error::{Error, Result};
use crate::intrinsic::IntrinsicRiskModel;
use crate::market::MarketModel;
use crate::normal::{cdf, pdf};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Greeks {
    pub value: f64,
    pub delta: f64,
    pub gamma: f64,
}

/// Integrated inputs over the remaining life `[t, T]`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Carry {
    /// `∫σ²`
    pub variance: f64,
    /// `∫ν`
    pub rate: f64,
    /// `∫ζ`
    pub intrinsic: f64,
}

impl Carry {
    pub fn over(
        market: &MarketModel,
        zeta: &IntrinsicRiskModel,
        t: f64,
        maturity: f64,
    ) -> Result<Carry> {
        Ok(Carry {
            variance: market.sigma.integral_sq(t, maturity),
            rate: market.nu.integral(t, maturity),
            intrinsic: zeta.integrated(market, t, maturity, maturity)?,
        })
    }
}

pub(crate) fn greeks(kind: ClaimKind, x: f64, strike: f64, c: Carry) -> Greeks {
    let df_rate = (-c.rate).exp();
    let df_carry = (-c.intrinsic).exp();
    if kind == ClaimKind::Forward {
        return Greeks {
            value: x * df_carry - strike * df_rate,
            delta: df_carry,
            gamma: 0.0,
        };
    }
    if c.variance <= 0.0 {
        // expiry: discounted payoff at the deterministic forward
        let fwd = x * (c.rate - c.intrinsic).exp();
        let (value, delta) = match kind {
            ClaimKind::Call if fwd > strike => (x * df_carry - strike * df_rate, df_carry),
            ClaimKind::Put if fwd < strike => (strike * df_rate - x * df_carry, -df_carry),
            ClaimKind::DigitalCall if fwd > strike => (df_rate, 0.0),
            ClaimKind::DigitalCall if fwd == strike => (0.5 * df_rate, 0.0),
            _ => (0.0, 0.0),
        };
        return Greeks {
            value,
            delta,
            gamma: 0.0,
        };
    }
    let sd = c.variance.sqrt();
    let d1 = ((x / strike).ln() + c.rate - c.intrinsic + 0.5 * c.variance) / sd;
    let d2 = d1 - sd;
    match kind {
        ClaimKind::Call => Greeks {
            value: x * df_carry * cdf(d1) - strike * df_rate * cdf(d2),
            delta: df_carry * cdf(d1),
            gamma: df_carry * pdf(d1) / (x * sd),
        },
        ClaimKind::Put => Greeks {
            value: strike * df_rate * cdf(-d2) - x * df_carry * cdf(-d1),
            delta: -df_carry * cdf(-d1),
            gamma: df_carry * pdf(d1) / (x * sd),
        },
        ClaimKind::DigitalCall => Greeks {
            value: df_rate * cdf(d2),
            delta: df_rate * pdf(d2) / (x * sd),
            gamma: -df_rate * pdf(d2) * d1 / (x * x * c.variance),
        },
        ClaimKind::Forward | ClaimKind::Custom => unreachable!("handled above or rejected"),
    }
}

fn supported(zeta: &IntrinsicRiskModel, claim: &ClaimSpec) -> Result<f64> {
    if !zeta.is_deterministic() {
        return Err(Error::unsupported(
            "closed form needs price-independent intrinsic risk; use the mc or pde engine",
        ));
    }
    match (claim.kind(), claim.strike()) {
        (ClaimKind::Custom, _) | (_, None) => Err(Error::unsupported(
            "closed form covers call, put, forward and digital_call claims",
        )),
        (_, Some(k)) => Ok(k),
    }
}

/// Value and sensitivities at `(t, x)` for a claim maturing at
/// `claim.maturity()`.
pub fn closed_form_greeks(
    market: &MarketModel,
    zeta: &IntrinsicRiskModel,
    claim: &ClaimSpec,
    t: f64,
    x: f64,
) -> Result<Greeks> {
    let strike = supported(zeta, claim)?;
    if !(0.0..=claim.maturity()).contains(&t) {
        return Err(Error::domain(format!(
            "valuation time {t} outside [0, {}]",
            claim.maturity()
        )));
    }
    let carry = Carry::over(market, zeta, t, claim.maturity())?;
    Ok(greeks(claim.kind(), x, strike, carry))
}

pub fn closed_form_price(
    market: &MarketModel,
    zeta: &IntrinsicRiskModel,
    claim: &ClaimSpec,
) -> Result<PricingResult> {
    let g = closed_form_greeks(market, zeta, claim, 0.0, market.spot)?;
    Ok(PricingResult {
        value: g.value,
        std_error: 0.0,
        engine: EngineTag::Closed,
        diagnostics: Diagnostics::None,
    })
}
