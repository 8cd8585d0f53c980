//! Tabulated functions of price with linear interpolation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Whether a table is held flat or extended linearly past its end points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extrapolation {
    Flat,
    Linear,
}

/// Piecewise-linear function through `(x, y)` points with increasing `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct Tabulated {
    points: Vec<(f64, f64)>,
}

impl TryFrom<Vec<(f64, f64)>> for Tabulated {
    type Error = Error;

    fn try_from(points: Vec<(f64, f64)>) -> Result<Self> {
        Tabulated::new(points)
    }
}

impl From<Tabulated> for Vec<(f64, f64)> {
    fn from(t: Tabulated) -> Self {
        t.points
    }
}

impl Tabulated {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::config("table needs at least two points"));
        }
        if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::config("table points must be finite"));
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::config("table x values must be strictly increasing"));
        }
        Ok(Tabulated { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn eval(&self, x: f64, extrapolation: Extrapolation) -> f64 {
        let pts = &self.points;
        let last = pts.len() - 1;
        if extrapolation == Extrapolation::Flat {
            if x <= pts[0].0 {
                return pts[0].1;
            }
            if x >= pts[last].0 {
                return pts[last].1;
            }
        }
        let i = pts.partition_point(|p| p.0 <= x).clamp(1, last);
        let (x0, y0) = pts[i - 1];
        let (x1, y1) = pts[i];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}
