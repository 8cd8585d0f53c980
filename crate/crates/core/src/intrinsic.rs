//! Models for the rate of intrinsic risk `ζ(t, x, T)`.
//!
//! Every form contributes `dG = ζ X dt` per unit of asset held and lowers the
//! asset drift to `ν − ζ` under the risk-subjective measure.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::market::MarketModel;
use crate::paths::SamplePath;
use crate::tabulated::{Extrapolation, Tabulated};
use crate::term_structure::{integrate_piecewise, TermStructure};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum IntrinsicRiskModel {
    /// Flat rate; a continuous dividend yield or hazard rate.
    Constant { zeta0: f64 },
    /// `γ(t)·(σ̄²(t) − σ²(t))`.
    VolSpread {
        gamma: TermStructure,
        sigma_bar: TermStructure,
    },
    /// `ν(t)·(σ̄²(t) − σ²(t))/σ̄²(t)`, the rate produced by running the asset
    /// on the clock of a parallel market with volatility `σ̄`.
    TimeChange { sigma_bar: TermStructure },
    /// `exp(ξ(x) + η(θ)φ(x) − ψ(θ))` with `ξ` and `η(θ)φ` tabulated in `x`
    /// (held flat outside the table).
    #[serde(rename = "exp_family")]
    ExponentialFamily {
        xi: Tabulated,
        eta_phi: Tabulated,
        psi: f64,
    },
    /// Foreign risk-free rate on top of another model.
    Composite {
        foreign_rate: TermStructure,
        inner: Box<IntrinsicRiskModel>,
    },
}

impl Default for IntrinsicRiskModel {
    fn default() -> Self {
        IntrinsicRiskModel::Constant { zeta0: 0.0 }
    }
}

impl IntrinsicRiskModel {
    pub fn constant(zeta0: f64) -> Self {
        IntrinsicRiskModel::Constant { zeta0 }
    }

    pub fn vol_spread(gamma: impl Into<TermStructure>, sigma_bar: impl Into<TermStructure>) -> Self {
        IntrinsicRiskModel::VolSpread {
            gamma: gamma.into(),
            sigma_bar: sigma_bar.into(),
        }
    }

    pub fn time_change(sigma_bar: impl Into<TermStructure>) -> Self {
        IntrinsicRiskModel::TimeChange {
            sigma_bar: sigma_bar.into(),
        }
    }

    pub fn exp_family(xi: Tabulated, eta_phi: Tabulated, psi: f64) -> Self {
        IntrinsicRiskModel::ExponentialFamily { xi, eta_phi, psi }
    }

    pub fn composite(foreign_rate: impl Into<TermStructure>, inner: IntrinsicRiskModel) -> Self {
        IntrinsicRiskModel::Composite {
            foreign_rate: foreign_rate.into(),
            inner: Box::new(inner),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            IntrinsicRiskModel::Constant { zeta0 } if !zeta0.is_finite() => {
                Err(Error::config("intrinsic_risk.params.zeta0 must be finite"))
            }
            IntrinsicRiskModel::VolSpread { sigma_bar, .. }
            | IntrinsicRiskModel::TimeChange { sigma_bar }
                if sigma_bar.min_value() < 0.0 =>
            {
                Err(Error::config("intrinsic_risk.params.sigma_bar must be non-negative"))
            }
            IntrinsicRiskModel::ExponentialFamily { psi, .. } if !psi.is_finite() => {
                Err(Error::config("intrinsic_risk.params.psi must be finite"))
            }
            IntrinsicRiskModel::Composite { inner, .. } => inner.validate(),
            _ => Ok(()),
        }
    }

    /// True when the rate does not depend on the asset price.
    pub fn is_deterministic(&self) -> bool {
        match self {
            IntrinsicRiskModel::ExponentialFamily { .. } => false,
            IntrinsicRiskModel::Composite { inner, .. } => inner.is_deterministic(),
            _ => true,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, IntrinsicRiskModel::Constant { zeta0 } if *zeta0 == 0.0)
    }

    /// `ζ(t, x, T)`. None of the forms varies with `T` beyond curve lookup.
    pub fn rate(&self, market: &MarketModel, t: f64, x: f64, horizon: f64) -> Result<f64> {
        let _ = horizon;
        match self {
            IntrinsicRiskModel::Constant { zeta0 } => Ok(*zeta0),
            IntrinsicRiskModel::VolSpread { gamma, sigma_bar } => {
                let sb = sigma_bar.value(t);
                let s = market.sigma.value(t);
                Ok(gamma.value(t) * (sb * sb - s * s))
            }
            IntrinsicRiskModel::TimeChange { sigma_bar } => {
                let sb = sigma_bar.value(t);
                if sb <= 0.0 {
                    return Err(Error::domain(format!(
                        "time-change model needs sigma_bar > 0, got {sb} at t = {t}"
                    )));
                }
                let sb2 = sb * sb;
                let s = market.sigma.value(t);
                Ok(market.nu.value(t) / sb2 * (sb2 - s * s))
            }
            IntrinsicRiskModel::ExponentialFamily { xi, eta_phi, psi } => Ok((xi
                .eval(x, Extrapolation::Flat)
                + eta_phi.eval(x, Extrapolation::Flat)
                - psi)
                .exp()),
            IntrinsicRiskModel::Composite {
                foreign_rate,
                inner,
            } => Ok(foreign_rate.value(t) + inner.rate(market, t, x, horizon)?),
        }
    }

    fn curves<'a>(&'a self, out: &mut Vec<&'a TermStructure>) {
        match self {
            IntrinsicRiskModel::VolSpread { gamma, sigma_bar } => {
                out.push(gamma);
                out.push(sigma_bar);
            }
            IntrinsicRiskModel::TimeChange { sigma_bar } => out.push(sigma_bar),
            IntrinsicRiskModel::Composite {
                foreign_rate,
                inner,
            } => {
                out.push(foreign_rate);
                inner.curves(out);
            }
            _ => {}
        }
    }

    /// Exact `∫_{t0}^{t1} ζ(s) ds` for the price-independent forms.
    pub fn integrated(&self, market: &MarketModel, t0: f64, t1: f64, horizon: f64) -> Result<f64> {
        if !self.is_deterministic() {
            return Err(Error::unsupported(
                "intrinsic risk depends on the asset price; use the mc or pde engine",
            ));
        }
        if let IntrinsicRiskModel::Constant { zeta0 } = self {
            return Ok(zeta0 * (t1 - t0));
        }
        let mut curves = vec![&market.sigma, &market.nu];
        self.curves(&mut curves);
        // rate() cannot fail for deterministic forms unless sigma_bar hits zero
        let mut failure = None;
        let total = integrate_piecewise(&curves, t0, t1, |t| {
            self.rate(market, t, market.spot, horizon).unwrap_or_else(|e| {
                failure.get_or_insert(e);
                f64::NAN
            })
        });
        match failure {
            Some(e) => Err(e),
            None => Ok(total),
        }
    }
}

/// Left-endpoint sum `Σ ζ(t_i, X_i, T)·X_i·Δt` along a path.
pub fn accumulated_g(
    model: &IntrinsicRiskModel,
    market: &MarketModel,
    path: &SamplePath,
    horizon: f64,
) -> Result<f64> {
    let mut g = 0.0;
    for i in 0..path.shocks.len() {
        let (t, x) = (path.times[i], path.values[i]);
        g += model.rate(market, t, x, horizon)? * x * (path.times[i + 1] - t);
    }
    Ok(g)
}
