//! Independent feasibility and objective check of a solution.

use serde::{Deserialize, Serialize};

use super::Solution;
use crate::esm::SystemModel;

/// Largest relative residual accepted by [`verify_solution`].
pub const VERIFY_TOLERANCE: f64 = 1e-6;

/// One constraint or bound violated beyond tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub name: String,
    pub residual: f64,
    pub relative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub max_relative_residual: f64,
    /// Row with the largest relative residual.
    pub worst_row: Option<String>,
    pub row_violations: Vec<Violation>,
    pub bound_violations: Vec<Violation>,
    /// Largest |soc[T] − soc[0]| implied by the cyclic dynamics, relative.
    pub storage_cycle_residual: f64,
    pub reported_objective: f64,
    pub recomputed_objective: f64,
    pub objective_mismatch: f64,
    pub passed: bool,
}

fn excess(v: f64, lb: f64, ub: f64) -> f64 {
    if v < lb {
        lb - v
    } else if v > ub {
        v - ub
    } else {
        0.0
    }
}

fn finite_abs(v: f64) -> f64 {
    if v.is_finite() {
        v.abs()
    } else {
        0.0
    }
}

/// Recomputes every row activity, bound and the objective from the raw
/// column values. Residuals are relative to the largest of the model's
/// power scale, the row's term magnitudes and its finite bounds.
pub fn verify_solution(model: &SystemModel, solution: &Solution) -> VerificationReport {
    let x = &solution.values;
    let lp = &model.lp;
    let base = model.power_scale.max(f64::MIN_POSITIVE);

    let mut max_rel = 0.0_f64;
    let mut worst_row = None;
    let mut row_violations = Vec::new();
    for row in &lp.rows {
        let mut activity = 0.0;
        let mut magnitude = 0.0_f64;
        for &(j, a) in &row.coefs {
            let term = a * x[j];
            activity += term;
            magnitude = magnitude.max(term.abs());
        }
        let scale = base.max(magnitude).max(finite_abs(row.lb)).max(finite_abs(row.ub));
        let residual = excess(activity, row.lb, row.ub);
        let rel = residual / scale;
        if rel > max_rel {
            max_rel = rel;
            worst_row = Some(row.key.to_string());
        }
        if rel > VERIFY_TOLERANCE {
            row_violations.push(Violation {
                name: row.key.to_string(),
                residual,
                relative: rel,
            });
        }
    }

    let mut bound_violations = Vec::new();
    for (col, &v) in lp.columns.iter().zip(x) {
        let residual = excess(v, col.lb, col.ub);
        let rel = residual / base.max(v.abs());
        if rel > VERIFY_TOLERANCE || !v.is_finite() {
            bound_violations.push(Violation {
                name: col.key.to_string(),
                residual,
                relative: rel,
            });
        }
    }

    let storage_cycle_residual = cycle_residual(model, x, base);

    let recomputed = lp.objective(x);
    let reported = solution.objective;
    let denom = recomputed.abs().max(reported.abs()).max(f64::MIN_POSITIVE);
    let objective_mismatch = if recomputed == reported {
        0.0
    } else {
        (recomputed - reported).abs() / denom
    };

    let passed = max_rel <= VERIFY_TOLERANCE
        && bound_violations.is_empty()
        && storage_cycle_residual <= VERIFY_TOLERANCE
        && objective_mismatch <= VERIFY_TOLERANCE;

    VerificationReport {
        max_relative_residual: max_rel,
        worst_row,
        row_violations,
        bound_violations,
        storage_cycle_residual,
        reported_objective: reported,
        recomputed_objective: recomputed,
        objective_mismatch,
        passed,
    }
}

/// Replays the storage dynamics from `soc[0]` through all hours and
/// compares the end state with the start state.
fn cycle_residual(model: &SystemModel, x: &[f64], base: f64) -> f64 {
    let hours = model.hours;
    let mut worst = 0.0_f64;

    let tank = &model.layout.tank_soc;
    let mut soc = x[tank[0]];
    for t in 0..hours {
        soc += x[model.layout.liq_in[t]] - model.demand.hourly_kwh;
    }
    worst = worst.max((soc - x[tank[0]]).abs() / base.max(x[tank[0]].abs()));

    for n in 0..model.layout.bat_soc.len() {
        let s = &model.layout.bat_soc[n];
        if s.is_empty() {
            continue;
        }
        let ch = &model.layout.bat_ch[n];
        let dis = &model.layout.bat_dis[n];
        // Recover the efficiency from the dynamics row coefficient.
        let eta = model
            .lp
            .rows
            .iter()
            .find(|r| r.key == crate::esm::RowKey::BatteryDynamics(n, 0))
            .and_then(|r| r.coefs.iter().find(|&&(j, _)| j == ch[0]).map(|&(_, a)| -a))
            .unwrap_or(1.0);
        let mut soc = x[s[0]];
        for t in 0..hours {
            soc += eta * x[ch[t]] - x[dis[t]] / eta;
        }
        worst = worst.max((soc - x[s[0]]).abs() / base.max(x[s[0]].abs()));
    }
    worst
}
