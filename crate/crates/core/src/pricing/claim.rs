use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tabulated::{Extrapolation, Tabulated};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimKind {
    Call,
    Put,
    Forward,
    DigitalCall,
    Custom,
}

impl ClaimKind {
    pub fn name(self) -> &'static str {
        match self {
            ClaimKind::Call => "call",
            ClaimKind::Put => "put",
            ClaimKind::Forward => "forward",
            ClaimKind::DigitalCall => "digital_call",
            ClaimKind::Custom => "custom",
        }
    }
}

/// A European claim paying `h(X(T))` at `maturity`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ClaimFields", into = "ClaimFields")]
pub struct ClaimSpec {
    kind: ClaimKind,
    strike: Option<f64>,
    maturity: f64,
    payoff_table: Option<Tabulated>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClaimFields {
    kind: ClaimKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    strike: Option<f64>,
    maturity: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    payoff_table: Option<Tabulated>,
}

impl TryFrom<ClaimFields> for ClaimSpec {
    type Error = Error;

    fn try_from(f: ClaimFields) -> Result<Self> {
        match (f.kind, f.strike, f.payoff_table) {
            (ClaimKind::Custom, None, Some(table)) => ClaimSpec::custom(table, f.maturity),
            (ClaimKind::Custom, _, _) => Err(Error::config(
                "claim: custom payoff needs payoff_table and no strike",
            )),
            (kind, Some(k), None) => ClaimSpec::new(kind, k, f.maturity),
            (kind, _, _) => Err(Error::config(format!(
                "claim: {} needs a strike and no payoff_table",
                kind.name()
            ))),
        }
    }
}

impl From<ClaimSpec> for ClaimFields {
    fn from(c: ClaimSpec) -> Self {
        ClaimFields {
            kind: c.kind,
            strike: c.strike,
            maturity: c.maturity,
            payoff_table: c.payoff_table,
        }
    }
}

fn check_maturity(maturity: f64) -> Result<()> {
    if maturity > 0.0 && maturity.is_finite() {
        Ok(())
    } else {
        Err(Error::config(format!("claim.maturity must be positive, got {maturity}")))
    }
}

impl ClaimSpec {
    pub fn new(kind: ClaimKind, strike: f64, maturity: f64) -> Result<Self> {
        if kind == ClaimKind::Custom {
            return Err(Error::config("custom claims are built from a payoff table"));
        }
        if !(strike > 0.0 && strike.is_finite()) {
            return Err(Error::config(format!("claim.strike must be positive, got {strike}")));
        }
        check_maturity(maturity)?;
        Ok(ClaimSpec {
            kind,
            strike: Some(strike),
            maturity,
            payoff_table: None,
        })
    }

    pub fn call(strike: f64, maturity: f64) -> Result<Self> {
        ClaimSpec::new(ClaimKind::Call, strike, maturity)
    }

    pub fn put(strike: f64, maturity: f64) -> Result<Self> {
        ClaimSpec::new(ClaimKind::Put, strike, maturity)
    }

    pub fn forward(strike: f64, maturity: f64) -> Result<Self> {
        ClaimSpec::new(ClaimKind::Forward, strike, maturity)
    }

    pub fn digital_call(strike: f64, maturity: f64) -> Result<Self> {
        ClaimSpec::new(ClaimKind::DigitalCall, strike, maturity)
    }

    /// Payoff interpolated linearly in `table` and extended linearly beyond it.
    pub fn custom(table: Tabulated, maturity: f64) -> Result<Self> {
        check_maturity(maturity)?;
        Ok(ClaimSpec {
            kind: ClaimKind::Custom,
            strike: None,
            maturity,
            payoff_table: Some(table),
        })
    }

    pub fn kind(&self) -> ClaimKind {
        self.kind
    }

    pub fn strike(&self) -> Option<f64> {
        self.strike
    }

    pub fn maturity(&self) -> f64 {
        self.maturity
    }

    pub fn with_strike(&self, strike: f64) -> Result<Self> {
        ClaimSpec::new(self.kind, strike, self.maturity)
    }

    pub fn payoff(&self, x: f64) -> f64 {
        let k = self.strike.unwrap_or(0.0);
        match self.kind {
            ClaimKind::Call => (x - k).max(0.0),
            ClaimKind::Put => (k - x).max(0.0),
            ClaimKind::Forward => x - k,
            ClaimKind::DigitalCall => {
                if x > k {
                    1.0
                } else if x == k {
                    0.5
                } else {
                    0.0
                }
            }
            ClaimKind::Custom => self
                .payoff_table
                .as_ref()
                .expect("custom claim carries a table")
                .eval(x, Extrapolation::Linear),
        }
    }

    /// True for payoffs that are convex in `x`.
    pub fn is_convex(&self) -> bool {
        matches!(self.kind, ClaimKind::Call | ClaimKind::Put | ClaimKind::Forward)
    }
}
