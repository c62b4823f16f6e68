//! Solver-independent sparse linear program.

use std::fmt;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::datamodel::Technology;

/// Identifies a decision variable. `n` is a node index, `c` a cluster
/// index, `a` an arc index, `t` an hour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VarKey {
    ResCapacity(usize),
    PemCapacity(usize),
    BatteryCapacity(usize),
    LiquefierCapacity,
    TankCapacity,
    ElecArcCapacity(usize),
    PipeArcCapacity(usize),
    Generation(usize, usize),
    BatteryCharge(usize, usize),
    BatteryDischarge(usize, usize),
    BatterySoc(usize, usize),
    PemInput(usize, usize),
    LiquefierInput(usize),
    TankSoc(usize),
    /// Flow on an arc; `forward` runs from `arc.a` to `arc.b`.
    ElecFlow { a: usize, forward: bool, t: usize },
    PipeFlow { a: usize, forward: bool, t: usize },
}

impl VarKey {
    pub fn is_capacity(&self) -> bool {
        matches!(
            self,
            VarKey::ResCapacity(_)
                | VarKey::PemCapacity(_)
                | VarKey::BatteryCapacity(_)
                | VarKey::LiquefierCapacity
                | VarKey::TankCapacity
                | VarKey::ElecArcCapacity(_)
                | VarKey::PipeArcCapacity(_)
        )
    }

    pub fn hour(&self) -> Option<usize> {
        match *self {
            VarKey::Generation(_, t)
            | VarKey::BatteryCharge(_, t)
            | VarKey::BatteryDischarge(_, t)
            | VarKey::BatterySoc(_, t)
            | VarKey::PemInput(_, t)
            | VarKey::LiquefierInput(t)
            | VarKey::TankSoc(t)
            | VarKey::ElecFlow { t, .. }
            | VarKey::PipeFlow { t, .. } => Some(t),
            _ => None,
        }
    }
}

fn dir(forward: bool) -> &'static str {
    if forward {
        "fw"
    } else {
        "bw"
    }
}

impl fmt::Display for VarKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VarKey::ResCapacity(c) => write!(f, "cap_res_c{c}"),
            VarKey::PemCapacity(n) => write!(f, "cap_pem_n{n}"),
            VarKey::BatteryCapacity(n) => write!(f, "cap_bat_n{n}"),
            VarKey::LiquefierCapacity => write!(f, "cap_liq"),
            VarKey::TankCapacity => write!(f, "cap_tank"),
            VarKey::ElecArcCapacity(a) => write!(f, "cap_elec_a{a}"),
            VarKey::PipeArcCapacity(a) => write!(f, "cap_pipe_a{a}"),
            VarKey::Generation(c, t) => write!(f, "gen_c{c}_t{t}"),
            VarKey::BatteryCharge(n, t) => write!(f, "bat_ch_n{n}_t{t}"),
            VarKey::BatteryDischarge(n, t) => write!(f, "bat_dis_n{n}_t{t}"),
            VarKey::BatterySoc(n, t) => write!(f, "bat_soc_n{n}_t{t}"),
            VarKey::PemInput(n, t) => write!(f, "pem_in_n{n}_t{t}"),
            VarKey::LiquefierInput(t) => write!(f, "liq_in_t{t}"),
            VarKey::TankSoc(t) => write!(f, "tank_soc_t{t}"),
            VarKey::ElecFlow { a, forward, t } => write!(f, "elec_{}_a{a}_t{t}", dir(forward)),
            VarKey::PipeFlow { a, forward, t } => write!(f, "pipe_{}_a{a}_t{t}", dir(forward)),
        }
    }
}

/// Identifies a constraint row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RowKey {
    ElecBalance(usize, usize),
    H2Balance(usize, usize),
    /// LH2 tank dynamics with the constant offtake on the right-hand side.
    TankBalance(usize),
    GenLimit(usize, usize),
    BatteryDynamics(usize, usize),
    BatteryChargeLimit(usize, usize),
    BatteryDischargeLimit(usize, usize),
    BatterySocLimit(usize, usize),
    PemLimit(usize, usize),
    LiquefierLimit(usize),
    TankSocLimit(usize),
    ElecFlowLimit { a: usize, forward: bool, t: usize },
    PipeFlowLimit { a: usize, forward: bool, t: usize },
}

impl RowKey {
    pub fn hour(&self) -> usize {
        match *self {
            RowKey::ElecBalance(_, t)
            | RowKey::H2Balance(_, t)
            | RowKey::GenLimit(_, t)
            | RowKey::BatteryDynamics(_, t)
            | RowKey::BatteryChargeLimit(_, t)
            | RowKey::BatteryDischargeLimit(_, t)
            | RowKey::BatterySocLimit(_, t)
            | RowKey::PemLimit(_, t) => t,
            RowKey::TankBalance(t) | RowKey::LiquefierLimit(t) | RowKey::TankSocLimit(t) => t,
            RowKey::ElecFlowLimit { t, .. } | RowKey::PipeFlowLimit { t, .. } => t,
        }
    }

    pub fn is_balance(&self) -> bool {
        matches!(
            self,
            RowKey::ElecBalance(..) | RowKey::H2Balance(..) | RowKey::TankBalance(_)
        )
    }
}

impl fmt::Display for RowKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RowKey::ElecBalance(n, t) => write!(f, "elec_balance_n{n}_t{t}"),
            RowKey::H2Balance(n, t) => write!(f, "h2_balance_n{n}_t{t}"),
            RowKey::TankBalance(t) => write!(f, "tank_balance_t{t}"),
            RowKey::GenLimit(c, t) => write!(f, "gen_limit_c{c}_t{t}"),
            RowKey::BatteryDynamics(n, t) => write!(f, "bat_dyn_n{n}_t{t}"),
            RowKey::BatteryChargeLimit(n, t) => write!(f, "bat_ch_limit_n{n}_t{t}"),
            RowKey::BatteryDischargeLimit(n, t) => write!(f, "bat_dis_limit_n{n}_t{t}"),
            RowKey::BatterySocLimit(n, t) => write!(f, "bat_soc_limit_n{n}_t{t}"),
            RowKey::PemLimit(n, t) => write!(f, "pem_limit_n{n}_t{t}"),
            RowKey::LiquefierLimit(t) => write!(f, "liq_limit_t{t}"),
            RowKey::TankSocLimit(t) => write!(f, "tank_soc_limit_t{t}"),
            RowKey::ElecFlowLimit { a, forward, t } => {
                write!(f, "elec_limit_{}_a{a}_t{t}", dir(forward))
            }
            RowKey::PipeFlowLimit { a, forward, t } => {
                write!(f, "pipe_limit_{}_a{a}_t{t}", dir(forward))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub key: VarKey,
    pub lb: f64,
    pub ub: f64,
    /// Objective coefficient, EUR per unit over the model horizon.
    pub cost: f64,
    /// Cost category for capacity variables.
    pub tech: Option<Technology>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub key: RowKey,
    pub lb: f64,
    pub ub: f64,
    pub coefs: Vec<(usize, f64)>,
}

impl Row {
    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coefs.iter().map(|&(j, a)| a * x[j]).sum()
    }
}

/// `min cost·x  s.t.  row.lb <= A x <= row.ub,  col.lb <= x <= col.ub`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinearProgram {
    pub columns: Vec<Column>,
    pub rows: Vec<Row>,
}

impl LinearProgram {
    pub fn add_column(&mut self, key: VarKey, lb: f64, ub: f64, cost: f64, tech: Option<Technology>) -> usize {
        self.columns.push(Column { key, lb, ub, cost, tech });
        self.columns.len() - 1
    }

    /// Adds a row, merging repeated columns and dropping exact zeros.
    pub fn add_row(&mut self, key: RowKey, lb: f64, ub: f64, terms: &[(usize, f64)]) -> usize {
        let mut coefs: Vec<(usize, f64)> = Vec::with_capacity(terms.len());
        for &(j, a) in terms {
            match coefs.iter_mut().find(|(k, _)| *k == j) {
                Some(slot) => slot.1 += a,
                None => coefs.push((j, a)),
            }
        }
        coefs.retain(|&(_, a)| a != 0.0);
        self.rows.push(Row { key, lb, ub, coefs });
        self.rows.len() - 1
    }

    pub fn nonzeros(&self) -> usize {
        self.rows.iter().map(|r| r.coefs.len()).sum()
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        self.columns.iter().zip(x).map(|(c, v)| c.cost * v).sum()
    }

    /// Writes the program in the plain sparse text format:
    ///
    /// ```text
    /// # h2export sparse LP v1
    /// COLUMNS <n>
    /// <j> <name> <lb> <ub> <cost>
    /// ROWS <m>
    /// <i> <name> <lb> <ub>
    /// ENTRIES <nnz>
    /// <i> <j> <value>
    /// END
    /// ```
    ///
    /// Bounds are written as `inf`/`-inf` when absent; the sense is
    /// minimisation.
    pub fn write_sparse<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "# h2export sparse LP v1")?;
        writeln!(w, "COLUMNS {}", self.columns.len())?;
        for (j, c) in self.columns.iter().enumerate() {
            writeln!(w, "{j} {} {} {} {}", c.key, c.lb, c.ub, c.cost)?;
        }
        writeln!(w, "ROWS {}", self.rows.len())?;
        for (i, r) in self.rows.iter().enumerate() {
            writeln!(w, "{i} {} {} {}", r.key, r.lb, r.ub)?;
        }
        writeln!(w, "ENTRIES {}", self.nonzeros())?;
        for (i, r) in self.rows.iter().enumerate() {
            for &(j, a) in &r.coefs {
                writeln!(w, "{i} {j} {a}")?;
            }
        }
        writeln!(w, "END")
    }
}
