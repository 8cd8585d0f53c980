//! Forwards, futures and the convexity adjustment between them.
//!
//! The forward lives in the primary market and is valued risk-neutrally:
//! `spot·e^{∫ν}`. The futures price is the undiscounted subjective
//! expectation `E_S[X(T)]`; the gap is the convexity adjustment.

use super::monte_carlo::subjective_moments;
use super::pde::solve_payoff;
use super::{Diagnostics, Engine, EngineTag, PricingResult};
use crate::error::{Error, Result};
use crate::intrinsic::IntrinsicRiskModel;
use crate::market::MarketModel;

fn check_horizon(maturity: f64) -> Result<()> {
    if maturity > 0.0 && maturity.is_finite() {
        Ok(())
    } else {
        Err(Error::config(format!("horizon must be positive, got {maturity}")))
    }
}

/// Risk-neutral forward `spot·exp(∫_0^T ν)`.
pub fn forward_price(market: &MarketModel, maturity: f64) -> f64 {
    market.spot * market.nu.integral(0.0, maturity).exp()
}

/// `E_S[X(T)]` seen from `t = 0`.
pub fn futures_price(
    market: &MarketModel,
    zeta: &IntrinsicRiskModel,
    maturity: f64,
    engine: &Engine,
) -> Result<PricingResult> {
    check_horizon(maturity)?;
    let (value, std_error, diagnostics) = match engine {
        Engine::Closed => {
            let carry = market.nu.integral(0.0, maturity) - zeta.integrated(market, 0.0, maturity, maturity)?;
            (market.spot * carry.exp(), 0.0, Diagnostics::None)
        }
        Engine::MonteCarlo {
            n_paths,
            n_steps,
            seed,
        } => {
            let m = subjective_moments(market, zeta, &[&|x| x], maturity, *n_paths, *n_steps, *seed)?;
            (
                m[0].mean,
                m[0].std_error(),
                Diagnostics::Paths {
                    n_paths: *n_paths,
                    n_steps: *n_steps,
                },
            )
        }
        Engine::Pde(grid) => {
            let sol = solve_payoff(market, zeta, &|x| x, maturity, None, grid)?;
            let growth = market.nu.integral(0.0, maturity).exp();
            (sol.price() * growth, 0.0, sol.result().diagnostics)
        }
    };
    Ok(PricingResult {
        value,
        std_error,
        engine: engine.tag(),
        diagnostics,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityResult {
    pub forward: f64,
    pub futures: f64,
    /// `forward − futures`.
    pub adjustment: f64,
    pub std_error: f64,
    pub engine: EngineTag,
}

/// Forward minus futures. For price-independent intrinsic risk and the closed
/// engine this is `spot·e^{∫ν}·(1 − e^{−∫ζ})`.
pub fn convexity_adjustment(
    market: &MarketModel,
    zeta: &IntrinsicRiskModel,
    maturity: f64,
    engine: &Engine,
) -> Result<ConvexityResult> {
    check_horizon(maturity)?;
    let forward = forward_price(market, maturity);
    if let Engine::Closed = engine {
        let iz = zeta.integrated(market, 0.0, maturity, maturity)?;
        return Ok(ConvexityResult {
            forward,
            futures: forward * (-iz).exp(),
            adjustment: -forward * (-iz).exp_m1(),
            std_error: 0.0,
            engine: EngineTag::Closed,
        });
    }
    let fut = futures_price(market, zeta, maturity, engine)?;
    Ok(ConvexityResult {
        forward,
        futures: fut.value,
        adjustment: forward - fut.value,
        std_error: fut.std_error,
        engine: fut.engine,
    })
}
