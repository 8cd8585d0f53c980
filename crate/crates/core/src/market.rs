//! Market primitives: the asset, the money account, and the drift the asset
//! carries under each measure.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intrinsic::IntrinsicRiskModel;
use crate::term_structure::TermStructure;

/// Volatility floor. Anything below it makes `λ` and `ζ/σ` ill-defined.
pub const SIGMA_MIN: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, try_from = "MarketSpec")]
pub struct MarketModel {
    pub spot: f64,
    /// Real-world drift, 1/year.
    pub mu: TermStructure,
    /// Volatility, 1/sqrt(year).
    pub sigma: TermStructure,
    /// Risk-free rate, 1/year.
    pub nu: TermStructure,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MarketSpec {
    spot: f64,
    #[serde(default = "zero_curve")]
    mu: TermStructure,
    sigma: TermStructure,
    nu: TermStructure,
}

fn zero_curve() -> TermStructure {
    TermStructure::constant(0.0)
}

impl TryFrom<MarketSpec> for MarketModel {
    type Error = Error;

    fn try_from(s: MarketSpec) -> Result<Self> {
        MarketModel::new(s.spot, s.mu, s.sigma, s.nu)
    }
}

impl MarketModel {
    pub fn new(
        spot: f64,
        mu: impl Into<TermStructure>,
        sigma: impl Into<TermStructure>,
        nu: impl Into<TermStructure>,
    ) -> Result<Self> {
        let sigma = sigma.into();
        if !(spot.is_finite() && spot > 0.0) {
            return Err(Error::config(format!("market.spot must be positive, got {spot}")));
        }
        if sigma.min_value() < SIGMA_MIN {
            return Err(Error::config(format!(
                "market.sigma must be >= {SIGMA_MIN:e} everywhere, got {}",
                sigma.min_value()
            )));
        }
        Ok(MarketModel {
            spot,
            mu: mu.into(),
            sigma,
            nu: nu.into(),
        })
    }

    /// Constant-coefficient market.
    pub fn flat(spot: f64, mu: f64, sigma: f64, nu: f64) -> Result<Self> {
        MarketModel::new(spot, mu, sigma, nu)
    }

    pub fn with_spot(&self, spot: f64) -> Result<Self> {
        MarketModel::new(spot, self.mu.clone(), self.sigma.clone(), self.nu.clone())
    }

    pub fn with_sigma(&self, sigma: impl Into<TermStructure>) -> Result<Self> {
        MarketModel::new(self.spot, self.mu.clone(), sigma, self.nu.clone())
    }

    /// `σ(t)`, checked against the floor.
    pub fn sigma_at(&self, t: f64) -> Result<f64> {
        let s = self.sigma.value(t);
        if s < SIGMA_MIN {
            return Err(Error::domain(format!("sigma({t}) = {s} is below {SIGMA_MIN:e}")));
        }
        Ok(s)
    }

    pub fn has_zero_rate(&self) -> bool {
        self.nu.knots().iter().all(|k| k.1 == 0.0)
    }
}

/// The three measures the asset can be simulated under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureTag {
    RealWorld,
    RiskNeutral,
    RiskSubjective,
}

/// Drift of `dX/X` at `(t, x)`: `μ` under the real-world measure, `ν` under
/// the risk-neutral one and `ν − ζ` under the risk-subjective one.
pub fn drift_under_measure(
    market: &MarketModel,
    tag: MeasureTag,
    zeta: Option<&IntrinsicRiskModel>,
    t: f64,
    x: f64,
    horizon: f64,
) -> Result<f64> {
    match tag {
        MeasureTag::RealWorld => Ok(market.mu.value(t)),
        MeasureTag::RiskNeutral => Ok(market.nu.value(t)),
        MeasureTag::RiskSubjective => {
            let zeta = zeta.ok_or_else(|| {
                Error::config("risk-subjective measure requires an intrinsic risk model")
            })?;
            Ok(market.nu.value(t) - zeta.rate(market, t, x, horizon)?)
        }
    }
}

/// Money-account growth `D(t1)/D(t0) = exp(∫_{t0}^{t1} ν(s) ds)`.
pub fn discount_factor(nu: &TermStructure, t0: f64, t1: f64) -> Result<f64> {
    if !(t0 >= 0.0 && t1 >= t0) {
        return Err(Error::domain(format!(
            "discount interval must satisfy 0 <= t0 <= t1, got [{t0}, {t1}]"
        )));
    }
    Ok(nu.integral(t0, t1).exp())
}
