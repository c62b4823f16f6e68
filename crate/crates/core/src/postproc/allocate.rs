//! Greedy assignment of optimised cluster capacity to placements.

use crate::error::{Error, Result};
use crate::potentials::{by_flh_desc, PlacementInfo};

/// Relative slack tolerated when the solver returns a capacity marginally
/// above the cluster bound.
const BOUND_SLACK: f64 = 1e-9;

/// Fills `used_kw` from `members` in descending FLH order (ties by id); the
/// marginal placement may be used partially.
pub fn allocate_placements<'a>(used_kw: f64, members: &[&'a PlacementInfo]) -> Result<Vec<(&'a PlacementInfo, f64)>> {
    if !(used_kw >= 0.0) || !used_kw.is_finite() {
        return Err(Error::param(format!("allocated capacity must be non-negative, got {used_kw}")));
    }
    let bound: f64 = members.iter().map(|p| p.capacity_kw).sum();
    if used_kw > bound * (1.0 + BOUND_SLACK) {
        return Err(Error::param(format!(
            "requested {used_kw} kW exceeds the cluster bound of {bound} kW"
        )));
    }
    let mut order: Vec<&PlacementInfo> = members.to_vec();
    order.sort_by(|a, b| by_flh_desc(a.flh, &a.id, b.flh, &b.id));

    let mut out = Vec::new();
    let mut remaining = used_kw;
    for (i, p) in order.iter().enumerate() {
        if remaining <= 0.0 {
            break;
        }
        let last = i + 1 == order.len();
        let take = if last || remaining <= p.capacity_kw { remaining } else { p.capacity_kw };
        if take > 0.0 {
            out.push((*p, take));
        }
        remaining -= take;
    }
    Ok(out)
}
