//! Cost-potential curves for liquid-hydrogen export.
//!
//! The crate clusters renewable placements into potentials, builds an hourly
//! multi-region linear program for the export chain (renewables, batteries,
//! electrolysis, grids and pipelines, liquefaction, LH2 storage), solves it
//! with HiGHS while sizing the liquefier by fixed-point iteration, and turns
//! the optimum into per-kilogram costs and supply curves.
//!
//! Numeric helpers are generic over [`num_traits::Float`]; the aliases below
//! fix them to `f64`, which is what the LP layer uses.

pub mod curves;
pub mod datamodel;
pub mod error;
pub mod esm;
pub mod geo;
pub mod network;
pub mod pipeline;
pub mod postproc;
pub mod potentials;
pub mod solve;

pub use error::{Error, Result};

/// Geographic coordinate in degrees.
pub type Coord = geo::GeoPoint<f64>;
/// Per-kilogram or annual cost split in `f64`.
pub type Decomposition = postproc::CostBreakdown<f64>;
