//! Discrete delta hedging in the real world.
//!
//! The hedger sells the claim at the model price, holds `α = V_x` units of the
//! asset and keeps the rest in the money account. Under the intrinsic-risk
//! adjusted strategy each unit held also earns `dG = ζ X dt`. Paths follow the
//! real-world drift `μ`, and rebalancing happens on every simulation step.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intrinsic::IntrinsicRiskModel;
use crate::market::{MarketModel, MeasureTag};
use crate::paths::{PathGenerator, SamplePath};
use crate::pricing::{closed_form_greeks, pde_solve, ClaimKind, ClaimSpec, Greeks, PdeGrid, PdeSolution};
use crate::term_structure::TermStructure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// `dV = α dX + ν(V − αX) dt`
    Standard,
    /// `dV = α (dX + dG) + ν(V − αX) dt`
    IntrinsicAdjusted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HedgeConfig {
    pub strategy: Strategy,
    pub rebalance_steps: usize,
    /// Volatility used to compute prices and deltas.
    pub pricing_vol: TermStructure,
    pub zeta: Option<IntrinsicRiskModel>,
    pub seed: u64,
    /// Band for the "close to zero" P&L fraction; defaults to 1% of premium.
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HedgeRow {
    pub path_id: u64,
    pub terminal_portfolio: f64,
    pub payoff: f64,
    pub realized_pnl: f64,
    /// Only available at zero interest rates.
    pub predicted_error: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PnlStats {
    pub mean: f64,
    pub std: f64,
    pub skew: f64,
    pub fraction_within: f64,
    pub epsilon: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HedgeReport {
    /// Initial portfolio value, the model price of the claim.
    pub premium: f64,
    pub rows: Vec<HedgeRow>,
    pub stats: PnlStats,
}

/// Step-by-step record of one hedged path.
#[derive(Debug, Clone, PartialEq)]
pub struct HedgeTrace {
    pub path: SamplePath,
    pub deltas: Vec<f64>,
    /// `α_i ζ_i X_i Δt_i`, zero for the standard strategy.
    pub credits: Vec<f64>,
    /// `exp(∫ν) − 1` over each step.
    pub growth: Vec<f64>,
    pub portfolio: Vec<f64>,
}

enum Pricer {
    Closed,
    Pde(Box<PdeSolution>),
}

struct Hedger<'a> {
    market: &'a MarketModel,
    pricing_market: MarketModel,
    claim: &'a ClaimSpec,
    config: &'a HedgeConfig,
    zeta: IntrinsicRiskModel,
    pricer: Pricer,
    generator: PathGenerator<'a>,
    growth: Vec<f64>,
    predict: bool,
}

impl<'a> Hedger<'a> {
    fn new(market: &'a MarketModel, claim: &'a ClaimSpec, config: &'a HedgeConfig) -> Result<Self> {
        if config.rebalance_steps == 0 {
            return Err(Error::config("hedge.rebalance_steps must be at least 1"));
        }
        if config.strategy == Strategy::IntrinsicAdjusted && config.zeta.is_none() {
            return Err(Error::config(
                "intrinsic_adjusted strategy requires an intrinsic risk model",
            ));
        }
        let pricing_market = market.with_sigma(config.pricing_vol.clone())?;
        let zeta = config.zeta.clone().unwrap_or_default();
        let pricer = if zeta.is_deterministic() && claim.kind() != ClaimKind::Custom {
            Pricer::Closed
        } else {
            let grid = PdeGrid::new(400, config.rebalance_steps.max(200));
            Pricer::Pde(Box::new(pde_solve(&pricing_market, &zeta, claim, &grid)?))
        };
        let generator = PathGenerator::new(
            market,
            MeasureTag::RealWorld,
            None,
            claim.maturity(),
            config.rebalance_steps,
            config.seed,
        )?;
        let growth = generator
            .times()
            .windows(2)
            .map(|w| market.nu.integral(w[0], w[1]).exp_m1())
            .collect();
        Ok(Hedger {
            market,
            pricing_market,
            claim,
            config,
            zeta,
            pricer,
            generator,
            growth,
            predict: market.has_zero_rate(),
        })
    }

    fn greeks(&self, t: f64, x: f64) -> Result<Greeks> {
        match &self.pricer {
            Pricer::Closed => closed_form_greeks(&self.pricing_market, &self.zeta, self.claim, t, x),
            Pricer::Pde(sol) => Ok(Greeks {
                value: sol.value_at(t, x),
                delta: sol.delta_at(t, x),
                gamma: sol.gamma_at(t, x),
            }),
        }
    }

    fn premium(&self) -> Result<f64> {
        Ok(self.greeks(0.0, self.market.spot)?.value)
    }

    fn run(&self, id: u64, premium: f64, trace: bool) -> Result<(HedgeRow, Option<HedgeTrace>)> {
        let path = self.generator.path(id)?;
        let n = path.n_steps();
        let horizon = self.claim.maturity();
        let adjusted = self.config.strategy == Strategy::IntrinsicAdjusted;
        let mut v = premium;
        let mut predicted = 0.0;
        let mut record = trace.then(|| HedgeTrace {
            path: path.clone(),
            deltas: Vec::with_capacity(n),
            credits: Vec::with_capacity(n),
            growth: self.growth.clone(),
            portfolio: vec![premium],
        });
        for i in 0..n {
            let (t, x) = (path.times[i], path.values[i]);
            let dt = path.times[i + 1] - t;
            let g = self.greeks(t, x)?;
            let alpha = g.delta;
            let mut next = v + alpha * (path.values[i + 1] - x) + (v - alpha * x) * self.growth[i];
            let credit = if adjusted {
                alpha * self.zeta.rate(self.market, t, x, horizon)? * x * dt
            } else {
                0.0
            };
            if adjusted {
                next += credit;
            }
            if self.predict {
                let sb = self.config.pricing_vol.value(t);
                let s = self.market.sigma.value(t);
                predicted += 0.5 * x * x * g.gamma * (sb * sb - s * s) * dt;
            }
            v = next;
            if let Some(r) = record.as_mut() {
                r.deltas.push(alpha);
                r.credits.push(credit);
                r.portfolio.push(v);
            }
        }
        let payoff = self.claim.payoff(path.terminal());
        let row = HedgeRow {
            path_id: id,
            terminal_portfolio: v,
            payoff,
            realized_pnl: v - payoff,
            predicted_error: self.predict.then_some(predicted),
        };
        Ok((row, record))
    }
}

/// Hedges `n_paths` real-world paths and reports the replication error of each.
pub fn delta_hedge_simulate(
    market: &MarketModel,
    claim: &ClaimSpec,
    config: &HedgeConfig,
    n_paths: u64,
) -> Result<HedgeReport> {
    if n_paths == 0 {
        return Err(Error::config("hedge.n_paths must be at least 1"));
    }
    let hedger = Hedger::new(market, claim, config)?;
    let premium = hedger.premium()?;
    let rows: Vec<HedgeRow> = (0..n_paths)
        .into_par_iter()
        .map(|id| hedger.run(id, premium, false).map(|(row, _)| row))
        .collect::<Result<_>>()?;
    let epsilon = config.epsilon.unwrap_or(0.01 * premium.abs());
    let mut report = HedgeReport {
        premium,
        rows,
        stats: PnlStats {
            mean: 0.0,
            std: 0.0,
            skew: 0.0,
            fraction_within: 0.0,
            epsilon,
        },
    };
    report.stats = pnl_statistics(&report, epsilon)?;
    Ok(report)
}

/// Replays one path of [`delta_hedge_simulate`] with every intermediate state.
pub fn hedge_trace(
    market: &MarketModel,
    claim: &ClaimSpec,
    config: &HedgeConfig,
    path_id: u64,
) -> Result<HedgeTrace> {
    let hedger = Hedger::new(market, claim, config)?;
    let premium = hedger.premium()?;
    let (_, trace) = hedger.run(path_id, premium, true)?;
    Ok(trace.expect("trace requested"))
}

/// `½ Σ X_i² Γ(t_i, X_i) (σ̄²(t_i) − σ²(t_i)) Δt` along `path`, with `Γ`
/// from the claim priced at `pricing_vol` and zero intrinsic risk. Only
/// defined at zero interest rates.
pub fn predicted_hedge_error(
    path: &SamplePath,
    claim: &ClaimSpec,
    pricing_vol: &TermStructure,
    market: &MarketModel,
) -> Result<f64> {
    if !market.has_zero_rate() {
        return Err(Error::unsupported(
            "the hedging-error identity holds at zero interest rate only; set nu = 0",
        ));
    }
    let pricing_market = market.with_sigma(pricing_vol.clone())?;
    let zeta = IntrinsicRiskModel::default();
    let solution = match claim.kind() {
        ClaimKind::Custom => Some(pde_solve(
            &pricing_market,
            &zeta,
            claim,
            &PdeGrid::new(400, path.n_steps().max(200)),
        )?),
        _ => None,
    };
    let mut total = 0.0;
    for i in 0..path.n_steps() {
        let (t, x) = (path.times[i], path.values[i]);
        let dt = path.times[i + 1] - t;
        let gamma = match &solution {
            Some(sol) => sol.gamma_at(t, x),
            None => closed_form_greeks(&pricing_market, &zeta, claim, t, x)?.gamma,
        };
        let (sb, s) = (pricing_vol.value(t), market.sigma.value(t));
        total += 0.5 * x * x * gamma * (sb * sb - s * s) * dt;
    }
    Ok(total)
}

/// Mean, sample standard deviation, skewness and the share of paths with
/// `|pnl| <= epsilon`.
pub fn pnl_statistics(report: &HedgeReport, epsilon: f64) -> Result<PnlStats> {
    let n = report.rows.len();
    if n == 0 {
        return Err(Error::domain("hedge report has no paths"));
    }
    let pnl: Vec<f64> = report.rows.iter().map(|r| r.realized_pnl).collect();
    let nf = n as f64;
    let mean = pnl.iter().sum::<f64>() / nf;
    let m2 = pnl.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / nf;
    let m3 = pnl.iter().map(|p| (p - mean).powi(3)).sum::<f64>() / nf;
    let std = if n > 1 { (m2 * nf / (nf - 1.0)).sqrt() } else { 0.0 };
    let skew = if m2 > 0.0 { m3 / m2.powf(1.5) } else { 0.0 };
    let within = pnl.iter().filter(|p| p.abs() <= epsilon).count();
    Ok(PnlStats {
        mean,
        std,
        skew,
        fraction_within: within as f64 / nf,
        epsilon,
    })
}
