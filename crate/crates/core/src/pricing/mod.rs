//! Valuation under the risk-subjective measure.
//!
//! Three engines price the same claims independently: a closed form for
//! price-independent intrinsic risk, Monte Carlo on the subjective dynamics,
//! and a Crank-Nicolson solver for the valuation PDE. Risk-neutral values are
//! the `ζ = 0` case of each.

mod claim;
pub mod closed_form;
pub mod futures;
pub mod implied_vol;
pub mod monte_carlo;
pub mod pde;
pub mod smile;

use serde::{Deserialize, Serialize};

pub use claim::{ClaimKind, ClaimSpec};
pub use closed_form::{closed_form_greeks, closed_form_price, Greeks};
pub use futures::{convexity_adjustment, forward_price, futures_price, ConvexityResult};
pub use implied_vol::implied_vol;
pub use monte_carlo::{mc_price, mc_price_claims};
pub use pde::{pde_price, pde_solve, PdeGrid, PdeSolution};
pub use smile::{smile_surface, SmilePoint};

use crate::error::Result;
use crate::intrinsic::IntrinsicRiskModel;
use crate::market::MarketModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EngineTag {
    Closed,
    Mc,
    Pde,
}

impl EngineTag {
    pub fn name(self) -> &'static str {
        match self {
            EngineTag::Closed => "closed",
            EngineTag::Mc => "mc",
            EngineTag::Pde => "pde",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diagnostics {
    None,
    Paths { n_paths: u64, n_steps: usize },
    Grid { n_space: usize, n_time: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PricingResult {
    pub value: f64,
    /// Zero for the deterministic engines.
    pub std_error: f64,
    pub engine: EngineTag,
    pub diagnostics: Diagnostics,
}

/// Engine selection plus its numerical settings.
#[derive(Debug, Clone, PartialEq)]
pub enum Engine {
    Closed,
    MonteCarlo {
        n_paths: u64,
        n_steps: usize,
        seed: u64,
    },
    Pde(PdeGrid),
}

impl Engine {
    pub fn tag(&self) -> EngineTag {
        match self {
            Engine::Closed => EngineTag::Closed,
            Engine::MonteCarlo { .. } => EngineTag::Mc,
            Engine::Pde(_) => EngineTag::Pde,
        }
    }

    pub fn price(
        &self,
        market: &MarketModel,
        zeta: &IntrinsicRiskModel,
        claim: &ClaimSpec,
    ) -> Result<PricingResult> {
        match self {
            Engine::Closed => closed_form_price(market, zeta, claim),
            Engine::MonteCarlo {
                n_paths,
                n_steps,
                seed,
            } => mc_price(market, zeta, claim, *n_paths, *n_steps, *seed),
            Engine::Pde(grid) => pde_price(market, zeta, claim, grid),
        }
    }
}
