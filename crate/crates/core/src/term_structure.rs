//! Piecewise-constant, right-continuous curves of time.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A deterministic function of time stored as `(time, value)` knots.
///
/// Evaluation at `t` returns the value of the last knot with time `<= t`.
/// The first knot always sits at `t = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCurve", into = "RawCurve")]
pub struct TermStructure {
    knots: Vec<(f64, f64)>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawCurve {
    Flat(f64),
    Knots(Vec<(f64, f64)>),
}

impl TryFrom<RawCurve> for TermStructure {
    type Error = Error;

    fn try_from(raw: RawCurve) -> Result<Self> {
        match raw {
            RawCurve::Flat(v) => {
                if v.is_finite() {
                    Ok(TermStructure::constant(v))
                } else {
                    Err(Error::config("term structure value must be finite"))
                }
            }
            RawCurve::Knots(k) => TermStructure::new(k),
        }
    }
}

impl From<TermStructure> for RawCurve {
    fn from(ts: TermStructure) -> Self {
        match ts.knots.as_slice() {
            [(_, v)] => RawCurve::Flat(*v),
            _ => RawCurve::Knots(ts.knots),
        }
    }
}

impl TermStructure {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        let Some(&(t0, _)) = knots.first() else {
            return Err(Error::config("term structure needs at least one knot"));
        };
        if t0 != 0.0 {
            return Err(Error::config(format!(
                "term structure must start at t = 0, got {t0}"
            )));
        }
        if knots.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
            return Err(Error::config("term structure knots must be finite"));
        }
        if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::config(
                "term structure knot times must be strictly increasing",
            ));
        }
        Ok(TermStructure { knots })
    }

    pub fn constant(value: f64) -> Self {
        TermStructure {
            knots: vec![(0.0, value)],
        }
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn is_constant(&self) -> bool {
        self.knots.len() == 1
    }

    pub fn value(&self, t: f64) -> f64 {
        let idx = self.knots.partition_point(|&(kt, _)| kt <= t);
        self.knots[idx.saturating_sub(1)].1
    }

    pub fn min_value(&self) -> f64 {
        self.knots.iter().map(|k| k.1).fold(f64::INFINITY, f64::min)
    }

    /// Knot times strictly inside `(t0, t1)`.
    pub fn breaks_in(&self, t0: f64, t1: f64) -> impl Iterator<Item = f64> + '_ {
        self.knots
            .iter()
            .map(|k| k.0)
            .filter(move |&t| t > t0 && t < t1)
    }

    /// Exact `∫_{t0}^{t1} f(s) ds`.
    pub fn integral(&self, t0: f64, t1: f64) -> f64 {
        integrate_piecewise(&[self], t0, t1, |t| self.value(t))
    }

    /// Exact `∫_{t0}^{t1} f(s)^2 ds`.
    pub fn integral_sq(&self, t0: f64, t1: f64) -> f64 {
        integrate_piecewise(&[self], t0, t1, |t| self.value(t).powi(2))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> TermStructure {
        TermStructure {
            knots: self.knots.iter().map(|&(t, v)| (t, f(v))).collect(),
        }
    }
}

impl From<f64> for TermStructure {
    fn from(v: f64) -> Self {
        TermStructure::constant(v)
    }
}

/// Integrates `f` over `[t0, t1]` where `f` is constant between the knots of
/// every curve in `curves`. Each piece is evaluated at its left end, so the
/// result is exact when `f` only depends on those curves.
pub fn integrate_piecewise(
    curves: &[&TermStructure],
    t0: f64,
    t1: f64,
    mut f: impl FnMut(f64) -> f64,
) -> f64 {
    if t1 <= t0 {
        return 0.0;
    }
    let mut cuts: Vec<f64> = curves.iter().flat_map(|c| c.breaks_in(t0, t1)).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut total = 0.0;
    let mut left = t0;
    for right in cuts.into_iter().chain(std::iter::once(t1)) {
        total += f(left) * (right - left);
        left = right;
    }
    total
}
