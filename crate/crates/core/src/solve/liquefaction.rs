//! Economy-of-scale law for liquefaction investment.

use num_traits::Float;

use crate::datamodel::TechnoEconomics;
use crate::error::{Error, Result};

/// Specific liquefaction capex in EUR/kW_LHV (numerically MEUR/GW) for a
/// plant of `size_gw`: `coeff · S^(exponent − 1)`.
///
/// With a train-size cap, sizes above the cap are built from several
/// maximum-size trains and keep the capped specific cost.
pub fn liq_specific_capex<T: Float>(size_gw: T, coeff: T, exponent: T, cap_gw: Option<T>) -> Result<T> {
    if !(size_gw > T::zero()) || !size_gw.is_finite() {
        return Err(Error::param("liquefaction plant size must be positive"));
    }
    if let Some(cap) = cap_gw {
        if !(cap > T::zero()) {
            return Err(Error::param("liquefaction size cap must be positive"));
        }
    }
    let effective = match cap_gw {
        Some(cap) => size_gw.min(cap),
        None => size_gw,
    };
    Ok(coeff * effective.powf(exponent - T::one()))
}

/// Specific capex using the technoeconomic coefficient and exponent.
pub fn liq_specific_capex_for(size_gw: f64, te: &TechnoEconomics, cap_gw: Option<f64>) -> Result<f64> {
    liq_specific_capex(size_gw, te.liq_capex_coeff, te.liq_capex_exponent, cap_gw)
}

/// Total plant capex in EUR for `size_gw`.
pub fn liq_total_capex(size_gw: f64, te: &TechnoEconomics, cap_gw: Option<f64>) -> Result<f64> {
    if size_gw == 0.0 {
        return Ok(0.0);
    }
    Ok(liq_specific_capex_for(size_gw, te, cap_gw)? * size_gw * 1e6)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_gigawatt_reference() {
        let te = TechnoEconomics::default();
        assert_eq!(liq_specific_capex_for(1.0, &te, None).unwrap(), 610.0);
        assert_eq!(liq_total_capex(1.0, &te, None).unwrap(), 610e6);
    }

    #[test]
    fn ratio_between_train_sizes() {
        let te = TechnoEconomics::default();
        let big = te.tpd_to_gw(20_000.0);
        let small = te.tpd_to_gw(700.0);
        let r = liq_specific_capex_for(big, &te, None).unwrap() / liq_specific_capex_for(small, &te, None).unwrap();
        let direct = (big / small).powf(-0.34);
        assert!((r - direct).abs() < 1e-12);
        assert!((r - 0.320).abs() < 1e-3);
    }

    #[test]
    fn capped_plants_scale_linearly() {
        let te = TechnoEconomics::default();
        let cap = te.tpd_to_gw(20_000.0);
        let at_cap = liq_specific_capex_for(cap, &te, Some(cap)).unwrap();
        let double = liq_specific_capex_for(2.0 * cap, &te, Some(cap)).unwrap();
        assert_eq!(at_cap, double);
        let free = liq_specific_capex_for(2.0 * cap, &te, None).unwrap();
        assert!(free < double);
        // total cost is concave below the cap
        let tot = |s: f64| liq_total_capex(s, &te, Some(cap)).unwrap();
        let (a, b) = (1.0, 9.0);
        assert!(tot(0.5 * (a + b)) > 0.5 * (tot(a) + tot(b)));
    }

    #[test]
    fn rejects_non_positive_sizes() {
        let te = TechnoEconomics::default();
        assert!(liq_specific_capex_for(0.0, &te, None).is_err());
        assert!(liq_specific_capex_for(-1.0, &te, None).is_err());
        assert!(liq_specific_capex_for(1.0, &te, Some(0.0)).is_err());
    }

    #[test]
    fn generic_single_precision() {
        let v = liq_specific_capex(1.0f32, 610.0, 0.66, None).unwrap();
        assert_eq!(v, 610.0f32);
    }
}
