//! Shared domain types: years, techno-economic parameters, scenario
//! configuration and annuity arithmetic.

pub mod finance;
pub mod scenario;
pub mod technoeconomics;
pub mod year;

pub use finance::{annual_cost, annuity_factor, levelized_cost_per_kwh};
pub use scenario::{
    LiquefactionCap, ModelOptions, ScenarioConfig, HOURS_PER_YEAR, MAX_EXPORT_FRACTION,
};
pub use technoeconomics::{PerTechnology, TechnoEconomics, Technology};
pub use year::{ByYear, Year};
