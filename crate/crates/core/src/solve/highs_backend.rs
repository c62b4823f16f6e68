//! Passes a [`LinearProgram`] to HiGHS.
//!
//! Columns are divided by the model's power scale (the hourly offtake) and
//! the objective by the largest scaled cost, so the solver sees O(1)
//! numbers regardless of whether the system is sized in kW or GW.
//!
//! A [`LpSession`] keeps the HiGHS instance between solves. Models that
//! differ only in objective coefficients re-solve from the previous basis.

use std::ops::Bound;

use highs::{Col, HighsModelStatus, Model, RowProblem, Sense};

use super::{Solution, SolverOptions, SolverStatus};
use crate::error::{Error, Result};
use crate::esm::SystemModel;

fn bound(v: f64) -> Bound<f64> {
    if v.is_finite() {
        Bound::Included(v)
    } else {
        Bound::Unbounded
    }
}

pub(crate) struct LpSession {
    highs: Option<Model>,
    cols: Vec<Col>,
    costs: Vec<f64>,
    rows: usize,
    power_scale: f64,
    cost_scale: f64,
}

impl LpSession {
    pub(crate) fn new(model: &SystemModel, opts: &SolverOptions) -> Result<Self> {
        let lp = &model.lp;
        let sp = model.power_scale;
        let max_cost = lp.columns.iter().map(|c| c.cost.abs()).fold(0.0, f64::max);
        let sc = if max_cost > 0.0 { max_cost * sp } else { 1.0 };

        let mut pb = RowProblem::default();
        let cols: Vec<Col> = lp
            .columns
            .iter()
            .map(|c| pb.add_column(c.cost * sp / sc, (bound(c.lb / sp), bound(c.ub / sp))))
            .collect();
        let mut buf = Vec::new();
        for r in &lp.rows {
            buf.clear();
            buf.extend(r.coefs.iter().map(|&(j, a)| (cols[j], a)));
            pb.add_row((bound(r.lb / sp), bound(r.ub / sp)), &buf);
        }

        let mut m = pb.optimise(Sense::Minimise);
        m.make_quiet();
        let set = |m: &mut Model, name: &str, v: f64| {
            m.try_set_option(name, v)
                .map_err(|e| Error::Solver(format!("option {name}: {e:?}")))
        };
        set(&mut m, "primal_feasibility_tolerance", opts.primal_feasibility_tolerance)?;
        set(&mut m, "dual_feasibility_tolerance", opts.dual_feasibility_tolerance)?;
        if let Some(limit) = opts.time_limit_s {
            set(&mut m, "time_limit", limit)?;
        }
        m.try_set_option("solver", opts.method.as_str())
            .map_err(|e| Error::Solver(format!("option solver: {e:?}")))?;
        m.try_set_option("threads", 1i32)
            .map_err(|e| Error::Solver(format!("option threads: {e:?}")))?;
        m.try_set_option("random_seed", 0i32)
            .map_err(|e| Error::Solver(format!("option random_seed: {e:?}")))?;

        Ok(LpSession {
            highs: Some(m),
            cols,
            costs: lp.columns.iter().map(|c| c.cost).collect(),
            rows: lp.rows.len(),
            power_scale: sp,
            cost_scale: sc,
        })
    }

    /// Whether `model` has the structure this session was built from, so
    /// that only costs need updating.
    pub(crate) fn accepts(&self, model: &SystemModel) -> bool {
        model.lp.columns.len() == self.cols.len()
            && model.lp.rows.len() == self.rows
            && model.power_scale == self.power_scale
    }

    /// Solves `model`, which must satisfy [`LpSession::accepts`]. Changed
    /// objective coefficients are pushed before solving.
    pub(crate) fn solve(&mut self, model: &SystemModel) -> Result<Solution> {
        debug_assert!(self.accepts(model));
        let mut m = self.highs.take().ok_or_else(|| Error::Solver("solver session lost after an error".into()))?;
        for (j, c) in model.lp.columns.iter().enumerate() {
            if c.cost != self.costs[j] {
                m.change_column_cost(self.cols[j], c.cost * self.power_scale / self.cost_scale);
                self.costs[j] = c.cost;
            }
        }
        let solved = m
            .try_solve()
            .map_err(|e| Error::Solver(format!("HiGHS failed: {e:?}")))?;
        let raw = solved.status();
        let status = match raw {
            HighsModelStatus::Optimal => SolverStatus::Optimal,
            HighsModelStatus::Infeasible
            | HighsModelStatus::UnboundedOrInfeasible
            | HighsModelStatus::Unbounded => SolverStatus::Infeasible,
            HighsModelStatus::ModelError
            | HighsModelStatus::LoadError
            | HighsModelStatus::PresolveError
            | HighsModelStatus::SolveError
            | HighsModelStatus::PostsolveError => {
                return Err(Error::Solver(format!("HiGHS returned {raw:?}")));
            }
            _ => SolverStatus::Suboptimal,
        };
        let sol = solved.get_solution();
        let values: Vec<f64> = sol.columns().iter().map(|v| v * self.power_scale).collect();
        let objective = solved.objective_value() * self.cost_scale;
        self.highs = Some(Model::from(solved));
        Ok(Solution {
            status,
            raw_status: format!("{raw:?}"),
            objective,
            values,
        })
    }
}

pub(crate) fn solve_lp(model: &SystemModel, opts: &SolverOptions) -> Result<Solution> {
    LpSession::new(model, opts)?.solve(model)
}
