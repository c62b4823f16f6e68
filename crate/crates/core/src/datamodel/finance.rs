//! Annuity-based annualisation of investment costs.

use num_traits::Float;

use crate::error::{Error, Result};

/// Capital recovery factor `r / (1 - (1 + r)^-n)`.
///
/// Evaluated through `ln_1p`/`exp_m1` so short lifetimes stay exact; a
/// one-year repayment at 8% yields exactly `1.08`.
pub fn annuity_factor<T: Float>(rate: T, lifetime: T) -> Result<T> {
    if !(rate > T::zero()) || !rate.is_finite() {
        return Err(Error::param("interest rate must be positive"));
    }
    if !(lifetime >= T::one()) || !lifetime.is_finite() {
        return Err(Error::param("lifetime must be at least one year"));
    }
    let decay = -(-lifetime * rate.ln_1p()).exp_m1();
    Ok(rate / decay)
}

/// Total annual cost of an investment: annuity plus fixed OPEX share.
pub fn annual_cost<T: Float>(capex: T, opex_frac: T, rate: T, lifetime: T) -> Result<T> {
    if !(capex >= T::zero()) {
        return Err(Error::param("capex must be non-negative"));
    }
    if !(opex_frac >= T::zero()) {
        return Err(Error::param("opex fraction must be non-negative"));
    }
    Ok(capex * (annuity_factor(rate, lifetime)? + opex_frac))
}

/// Generation cost per kWh of a plant with the given annual cost per kW and
/// full load hours.
pub fn levelized_cost_per_kwh<T: Float>(annual_cost_per_kw: T, full_load_hours: T) -> Result<T> {
    if !(full_load_hours > T::zero()) {
        return Err(Error::param("full load hours must be positive"));
    }
    Ok(annual_cost_per_kw / full_load_hours)
}
