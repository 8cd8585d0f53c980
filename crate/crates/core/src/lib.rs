//! Pricing and hedging with an intrinsic-risk adjusted valuation measure.
//!
//! The asset follows `dX = μX dt + σX dB` in the real world. Adding an
//! exogenous rate of intrinsic risk `ζ` gives the risk-subjective dynamics
//! `dX = (ν − ζ)X dt + σX dZ`, under which claims are valued by discounted
//! expectation. The crate provides the `ζ` models, the Girsanov densities
//! between measures, three valuation engines and a delta-hedging simulator.

pub mod cli;
pub mod error;
pub mod hedging;
pub mod intrinsic;
pub mod market;
pub mod measure;
pub mod normal;
pub mod paths;
pub mod pricing;
pub mod rng;
pub mod stats;
pub mod tabulated;
pub mod term_structure;

pub use error::{Error, Result};
pub use intrinsic::IntrinsicRiskModel;
pub use market::{MarketModel, MeasureTag, SIGMA_MIN};
pub use paths::{simulate_paths, SamplePath};
pub use pricing::{ClaimKind, ClaimSpec, Engine, PdeGrid, PricingResult};
pub use tabulated::Tabulated;
pub use term_structure::TermStructure;
