//! Command-line front end: configuration, dispatch and CSV reports.

mod config;

use std::fmt::Write;

pub use config::{EngineSpec, HedgeSpec, Method, RunConfig, SmileSpec, Subcommand};

use crate::error::{Error, Result};
use crate::hedging::{delta_hedge_simulate, HedgeConfig};
use crate::measure::theta_grid;
use crate::pricing::{convexity_adjustment, smile_surface, Engine};

fn need<'a, T>(field: &'a Option<T>, name: &str) -> Result<&'a T> {
    field
        .as_ref()
        .ok_or_else(|| Error::config(format!("missing field `{name}`")))
}

fn engine_of(config: &RunConfig) -> Result<Engine> {
    need(&config.engine, "engine")?.engine(config.seed)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Runs `cmd` and returns the full CSV report. Nothing is returned on error,
/// so callers never emit partial output.
pub fn run(cmd: Subcommand, config: &RunConfig) -> Result<String> {
    let mut out = String::new();
    let market = &config.market;
    let zeta = &config.intrinsic_risk;
    match cmd {
        Subcommand::Price => {
            let claim = need(&config.claim, "claim")?;
            let r = engine_of(config)?.price(market, zeta, claim)?;
            out.push_str("engine,claim,strike,maturity,value,std_error\n");
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.engine.name(),
                claim.kind().name(),
                fmt_opt(claim.strike()),
                claim.maturity(),
                r.value,
                r.std_error
            )
            .unwrap();
        }
        Subcommand::Smile => {
            let spec = need(&config.smile, "smile")?;
            let surface = smile_surface(market, zeta, &spec.strikes, &spec.maturities, &engine_of(config)?)?;
            out.push_str("strike,maturity,implied_vol\n");
            for p in surface {
                writeln!(out, "{},{},{}", p.strike, p.maturity, p.implied_vol).unwrap();
            }
        }
        Subcommand::Hedge => {
            let claim = need(&config.claim, "claim")?;
            let spec = need(&config.hedge, "hedge")?;
            let hedge = HedgeConfig {
                strategy: spec.strategy,
                rebalance_steps: spec.rebalance_steps,
                pricing_vol: spec.pricing_vol.clone(),
                zeta: Some(zeta.clone()),
                seed: config.seed,
                epsilon: spec.epsilon,
            };
            let report = delta_hedge_simulate(market, claim, &hedge, spec.n_paths)?;
            out.push_str("path_id,terminal_portfolio,payoff,realized_pnl,predicted_error\n");
            for r in &report.rows {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.path_id,
                    r.terminal_portfolio,
                    r.payoff,
                    r.realized_pnl,
                    fmt_opt(r.predicted_error)
                )
                .unwrap();
            }
            let s = report.stats;
            writeln!(
                out,
                "# premium={},mean={},std={},skew={},fraction_within={},epsilon={}",
                report.premium, s.mean, s.std, s.skew, s.fraction_within, s.epsilon
            )
            .unwrap();
        }
        Subcommand::Convexity => {
            let horizon = *need(&config.horizon, "horizon")?;
            let c = convexity_adjustment(market, zeta, horizon, &engine_of(config)?)?;
            out.push_str("engine,maturity,forward,futures,convexity_adjustment,std_error\n");
            writeln!(
                out,
                "{},{},{},{},{},{}",
                c.engine.name(),
                horizon,
                c.forward,
                c.futures,
                c.adjustment,
                c.std_error
            )
            .unwrap();
        }
        Subcommand::CheckMeasure => {
            let horizon = *need(&config.horizon, "horizon")?;
            let steps = *need(&config.steps, "steps")?;
            let (points, check) = theta_grid(market, zeta, horizon, steps)?;
            if let Some(t) = check.offending_time {
                return Err(Error::domain(format!(
                    "Novikov check failed: non-finite theta at t = {t}"
                )));
            }
            out.push_str("t,lambda,intrinsic_price,theta_total\n");
            for p in points {
                writeln!(out, "{},{},{},{}", p.t, p.lambda, p.intrinsic_price, p.theta_total).unwrap();
            }
            writeln!(out, "# novikov={},satisfied={}", check.value, check.satisfied).unwrap();
        }
    }
    Ok(out)
}
