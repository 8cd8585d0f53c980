//! JSON run configuration.

use serde::Deserialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::hedging::Strategy;
use crate::intrinsic::IntrinsicRiskModel;
use crate::market::MarketModel;
use crate::pricing::{ClaimSpec, Engine, PdeGrid};
use crate::term_structure::TermStructure;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Price,
    Smile,
    Hedge,
    Convexity,
    CheckMeasure,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Price => "price",
            Subcommand::Smile => "smile",
            Subcommand::Hedge => "hedge",
            Subcommand::Convexity => "convexity",
            Subcommand::CheckMeasure => "check-measure",
        }
    }

    fn required(self) -> &'static [&'static str] {
        match self {
            Subcommand::Price => &["market", "claim", "engine"],
            Subcommand::Smile => &["market", "smile", "engine"],
            Subcommand::Hedge => &["market", "claim", "hedge"],
            Subcommand::Convexity => &["market", "horizon", "engine"],
            Subcommand::CheckMeasure => &["market", "horizon", "steps"],
        }
    }
}

const OPTIONAL: [&str; 3] = ["intrinsic_risk", "seed", "output"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Closed,
    Mc,
    Pde,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EngineSpec {
    pub method: Method,
    pub n_paths: Option<u64>,
    pub n_steps: Option<usize>,
    pub grid: Option<PdeGrid>,
}

impl EngineSpec {
    pub fn engine(&self, seed: u64) -> Result<Engine> {
        match self.method {
            Method::Closed => Ok(Engine::Closed),
            Method::Mc => match (self.n_paths, self.n_steps) {
                (Some(n_paths), Some(n_steps)) => Ok(Engine::MonteCarlo {
                    n_paths,
                    n_steps,
                    seed,
                }),
                _ => Err(Error::config("engine: method mc needs n_paths and n_steps")),
            },
            Method::Pde => self
                .grid
                .map(Engine::Pde)
                .ok_or_else(|| Error::config("engine: method pde needs grid")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HedgeSpec {
    pub strategy: Strategy,
    pub rebalance_steps: usize,
    pub pricing_vol: TermStructure,
    pub n_paths: u64,
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmileSpec {
    pub strikes: Vec<f64>,
    pub maturities: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub market: MarketModel,
    #[serde(default)]
    pub intrinsic_risk: IntrinsicRiskModel,
    pub claim: Option<ClaimSpec>,
    pub engine: Option<EngineSpec>,
    pub hedge: Option<HedgeSpec>,
    pub smile: Option<SmileSpec>,
    pub horizon: Option<f64>,
    pub steps: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    pub output: Option<String>,
}

impl RunConfig {
    /// Parses `text` and checks that exactly the fields `cmd` uses are present.
    pub fn parse(text: &str, cmd: Subcommand) -> Result<RunConfig> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::config(format!("invalid JSON: {e}")))?;
        let Value::Object(fields) = &value else {
            return Err(Error::config("config must be a JSON object"));
        };
        check_fields(fields, cmd)?;
        let config: RunConfig =
            serde_json::from_value(value).map_err(|e| Error::config(e.to_string()))?;
        config.intrinsic_risk.validate()?;
        Ok(config)
    }
}

fn check_fields(fields: &Map<String, Value>, cmd: Subcommand) -> Result<()> {
    let required = cmd.required();
    for key in required {
        if !fields.contains_key(*key) {
            return Err(Error::config(format!("`{}` requires field `{key}`", cmd.name())));
        }
    }
    for key in fields.keys() {
        if !required.contains(&key.as_str()) && !OPTIONAL.contains(&key.as_str()) {
            return Err(Error::config(format!(
                "field `{key}` is not used by `{}`",
                cmd.name()
            )));
        }
    }
    Ok(())
}
