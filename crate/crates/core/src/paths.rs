//! Log-Euler simulation of the asset under a chosen measure.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::intrinsic::IntrinsicRiskModel;
use crate::market::{drift_under_measure, MarketModel, MeasureTag};
use crate::rng::ShockStream;

/// One discretized trajectory. `shocks[i]` drove the step from `times[i]`
/// to `times[i + 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePath {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub shocks: Vec<f64>,
}

impl SamplePath {
    pub fn terminal(&self) -> f64 {
        *self.values.last().expect("path has at least one value")
    }

    pub fn n_steps(&self) -> usize {
        self.shocks.len()
    }
}

/// Simulation setup shared by every path of a run.
///
/// Each step moves `ln X` by `(drift − σ²/2)Δt + σ√Δt·Z`, with coefficients
/// taken at the left end of the step.
pub struct PathGenerator<'a> {
    market: &'a MarketModel,
    tag: MeasureTag,
    zeta: Option<&'a IntrinsicRiskModel>,
    horizon: f64,
    seed: u64,
    times: Vec<f64>,
    vol_step: Vec<f64>,
    // deterministic part of each log increment, when drift ignores x
    fixed_step: Option<Vec<f64>>,
}

impl<'a> PathGenerator<'a> {
    pub fn new(
        market: &'a MarketModel,
        tag: MeasureTag,
        zeta: Option<&'a IntrinsicRiskModel>,
        horizon: f64,
        n_steps: usize,
        seed: u64,
    ) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::config(format!("horizon must be positive, got {horizon}")));
        }
        if n_steps == 0 {
            return Err(Error::config("n_steps must be at least 1"));
        }
        if tag == MeasureTag::RiskSubjective && zeta.is_none() {
            return Err(Error::config(
                "risk-subjective measure requires an intrinsic risk model",
            ));
        }
        let times: Vec<f64> = (0..=n_steps)
            .map(|i| horizon * i as f64 / n_steps as f64)
            .collect();
        let mut vol_step = Vec::with_capacity(n_steps);
        for w in times.windows(2) {
            vol_step.push(market.sigma_at(w[0])? * (w[1] - w[0]).sqrt());
        }
        let state_free = tag != MeasureTag::RiskSubjective
            || zeta.is_some_and(IntrinsicRiskModel::is_deterministic);
        let mut generator = PathGenerator {
            market,
            tag,
            zeta,
            horizon,
            seed,
            times,
            vol_step,
            fixed_step: None,
        };
        if state_free {
            let steps = (0..n_steps)
                .map(|i| generator.log_drift(i, market.spot))
                .collect::<Result<_>>()?;
            generator.fixed_step = Some(steps);
        }
        Ok(generator)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn n_steps(&self) -> usize {
        self.vol_step.len()
    }

    fn log_drift(&self, i: usize, x: f64) -> Result<f64> {
        let t = self.times[i];
        let dt = self.times[i + 1] - t;
        let drift = drift_under_measure(self.market, self.tag, self.zeta, t, x, self.horizon)?;
        let s = self.market.sigma.value(t);
        Ok((drift - 0.5 * s * s) * dt)
    }

    /// Runs path `id`, calling `visit(step, x_left, shock)` before each step,
    /// and returns the terminal value.
    pub fn walk(&self, id: u64, mut visit: impl FnMut(usize, f64, f64)) -> Result<f64> {
        let mut stream = ShockStream::new(self.seed, id);
        let mut log_x = self.market.spot.ln();
        let mut x = self.market.spot;
        for i in 0..self.n_steps() {
            let z = stream.next_normal();
            visit(i, x, z);
            let det = match &self.fixed_step {
                Some(steps) => steps[i],
                None => self.log_drift(i, x)?,
            };
            log_x += det + self.vol_step[i] * z;
            x = log_x.exp();
        }
        Ok(x)
    }

    pub fn terminal(&self, id: u64) -> Result<f64> {
        self.walk(id, |_, _, _| {})
    }

    pub fn path(&self, id: u64) -> Result<SamplePath> {
        let n = self.n_steps();
        let mut values = Vec::with_capacity(n + 1);
        let mut shocks = Vec::with_capacity(n);
        let last = self.walk(id, |_, x, z| {
            values.push(x);
            shocks.push(z);
        })?;
        values.push(last);
        Ok(SamplePath {
            times: self.times.clone(),
            values,
            shocks,
        })
    }
}

/// Simulates `n_paths` paths on a uniform grid of `n_steps` steps over
/// `[0, horizon]`. Path `i` depends only on `(seed, i)`.
pub fn simulate_paths(
    market: &MarketModel,
    tag: MeasureTag,
    zeta: Option<&IntrinsicRiskModel>,
    horizon: f64,
    n_steps: usize,
    n_paths: usize,
    seed: u64,
) -> Result<Vec<SamplePath>> {
    if n_paths == 0 {
        return Err(Error::config("n_paths must be at least 1"));
    }
    let generator = PathGenerator::new(market, tag, zeta, horizon, n_steps, seed)?;
    (0..n_paths as u64)
        .into_par_iter()
        .map(|id| generator.path(id))
        .collect()
}

/// Dumps paths as `path_id,step,time,value` rows.
pub fn write_paths_csv(paths: &[SamplePath], mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "path_id,step,time,value")?;
    for (id, p) in paths.iter().enumerate() {
        for (step, (t, v)) in p.times.iter().zip(&p.values).enumerate() {
            writeln!(out, "{id},{step},{t},{v}")?;
        }
    }
    Ok(())
}
