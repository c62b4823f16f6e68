//! Hourly linear program over the export chain: renewables, batteries,
//! electrolysis, electricity grid and hydrogen pipelines between regions,
//! liquefaction and LH2 storage at the harbor.
//!
//! # Formulation size
//!
//! With `N` nodes, `K` clusters, `T` hours, `B` battery nodes (`N` or 0),
//! `A_e` electric arcs and `A_h` pipeline arcs:
//!
//! | | count |
//! |---|---|
//! | capacity variables | `K + N + B + 2 + A_e + A_h` |
//! | operation variables | `T (K + 3B + N + 2 + 2A_e + 2A_h)` |
//! | constraints | `T (K + 3N + 4B + 3 + 2A_e + 2A_h)` |

mod lp;

pub use lp::{Column, LinearProgram, Row, RowKey, VarKey};

use serde::{Deserialize, Serialize};

use crate::datamodel::{ScenarioConfig, TechnoEconomics, Technology, Year, HOURS_PER_YEAR};
use crate::error::{Error, Result};
use crate::network::{arc_efficiency, Carrier, RegionGraph};
use crate::potentials::{annual_el_potential, max_export, ClusterPotential, Resource};

/// Constant hourly LH2 offtake at the harbor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DemandProfile {
    /// kWh_LHV per hour.
    pub hourly_kwh: f64,
    pub hours: usize,
}

impl DemandProfile {
    pub fn constant(annual_kwh: f64, hours: usize) -> Self {
        DemandProfile {
            hourly_kwh: annual_kwh / HOURS_PER_YEAR as f64,
            hours,
        }
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        std::iter::repeat_n(self.hourly_kwh, self.hours)
    }

    pub fn annual_kwh(&self) -> f64 {
        self.hourly_kwh * HOURS_PER_YEAR as f64
    }
}

/// Column indices grouped by role.
#[derive(Debug, Clone, Default)]
pub struct Layout {
    pub res_cap: Vec<usize>,
    pub pem_cap: Vec<usize>,
    pub bat_cap: Vec<Option<usize>>,
    pub liq_cap: usize,
    pub tank_cap: usize,
    pub elec_cap: Vec<Option<usize>>,
    pub pipe_cap: Vec<Option<usize>>,
    /// `[cluster][t]`
    pub gen: Vec<Vec<usize>>,
    /// `[node][t]`, empty per node when batteries are disabled.
    pub bat_ch: Vec<Vec<usize>>,
    pub bat_dis: Vec<Vec<usize>>,
    pub bat_soc: Vec<Vec<usize>>,
    pub pem_in: Vec<Vec<usize>>,
    pub liq_in: Vec<usize>,
    pub tank_soc: Vec<usize>,
    /// `[arc][t]` as (forward, backward).
    pub elec_flow: Vec<Vec<(usize, usize)>>,
    pub pipe_flow: Vec<Vec<(usize, usize)>>,
}

/// Counts of an assembled model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelStats {
    pub variables: usize,
    pub capacity_variables: usize,
    pub operation_variables: usize,
    pub constraints: usize,
    pub nonzeros: usize,
}

/// Summary of one RES cluster as seen by the model.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterInfo {
    pub cluster_id: String,
    pub tech: Resource,
    pub node: usize,
    pub capacity_bound: f64,
    /// Capacity factors over the model horizon.
    pub cf: Vec<f64>,
}

/// An assembled scenario LP plus the metadata needed to interpret it.
#[derive(Debug, Clone)]
pub struct SystemModel {
    pub lp: LinearProgram,
    pub layout: Layout,
    pub hours: usize,
    pub year: Year,
    pub demand: DemandProfile,
    pub node_ids: Vec<String>,
    pub harbor: usize,
    pub clusters: Vec<ClusterInfo>,
    /// Arc endpoints and lengths (km), indexed like the graph arcs.
    pub arcs: Vec<(usize, usize, f64)>,
    /// EUR/kW_LHV used for the liquefier in this build.
    pub liq_specific_capex: f64,
    /// Magnitude of the power variables (kW); used to normalise the LP and
    /// residuals.
    pub power_scale: f64,
    /// Maximum exportable LH2 of the clusters, kWh_LHV/yr.
    pub max_export_kwh: f64,
}

impl SystemModel {
    pub fn stats(&self) -> ModelStats {
        model_stats(self)
    }

    /// Horizon length as a share of a year; annual costs are scaled by it.
    pub fn year_share(&self) -> f64 {
        self.hours as f64 / HOURS_PER_YEAR as f64
    }
}

pub fn model_stats(model: &SystemModel) -> ModelStats {
    let capacity_variables = model.lp.columns.iter().filter(|c| c.key.is_capacity()).count();
    ModelStats {
        variables: model.lp.columns.len(),
        capacity_variables,
        operation_variables: model.lp.columns.len() - capacity_variables,
        constraints: model.lp.rows.len(),
        nonzeros: model.lp.nonzeros(),
    }
}

/// Builds the scenario model with demand `export_fraction × max_export`.
pub fn build_model(
    clusters: &[ClusterPotential],
    graph: &RegionGraph,
    te: &TechnoEconomics,
    cfg: &ScenarioConfig,
    liq_specific_capex: f64,
) -> Result<SystemModel> {
    cfg.validate()?;
    let te_eff = cfg.technoeconomics(te)?;
    let potential = annual_el_potential(clusters, cfg.horizon_hours);
    let max = max_export(potential, &te_eff, cfg.year)?;
    build_model_with_demand(clusters, graph, te, cfg, cfg.export_fraction * max / HOURS_PER_YEAR as f64, liq_specific_capex)
}

/// Builds the scenario model for an explicit hourly offtake (kWh_LHV/h).
/// `cfg.export_fraction` is ignored.
pub fn build_model_with_demand(
    clusters: &[ClusterPotential],
    graph: &RegionGraph,
    te: &TechnoEconomics,
    cfg: &ScenarioConfig,
    hourly_demand: f64,
    liq_specific_capex: f64,
) -> Result<SystemModel> {
    let te = cfg.technoeconomics(te)?;
    let hours = cfg.horizon_hours;
    if hours == 0 {
        return Err(Error::param("horizon must contain at least one hour"));
    }
    if clusters.is_empty() {
        return Err(Error::Model("no renewable clusters supplied".into()));
    }
    if !(liq_specific_capex > 0.0) || !liq_specific_capex.is_finite() {
        return Err(Error::param("liquefaction specific capex must be positive"));
    }
    if !(hourly_demand >= 0.0) || !hourly_demand.is_finite() {
        return Err(Error::param("demand must be non-negative"));
    }
    for c in clusters {
        cfg.check_series_len(c.cf.len())
            .map_err(|e| Error::Model(format!("cluster {}: {e}", c.cluster_id)))?;
    }

    let year = cfg.year;
    let share = cfg.year_share();
    let potential = annual_el_potential(clusters, hours);
    let max_export_kwh = max_export(potential, &te, year)?;
    let annual_demand = hourly_demand * HOURS_PER_YEAR as f64;
    if annual_demand > max_export_kwh * (1.0 + 1e-9) {
        return Err(Error::Model(format!(
            "demand of {annual_demand:.6e} kWh/yr exceeds the maximum export of {max_export_kwh:.6e} kWh/yr"
        )));
    }

    let opts = cfg.options;
    let nodes = graph.nodes();
    let n_nodes = nodes.len();
    let harbor = graph.harbor();
    let infos: Vec<ClusterInfo> = clusters
        .iter()
        .map(|c| {
            let node = graph.node_index(&c.region).ok_or_else(|| {
                Error::Model(format!("cluster {} references unknown region {}", c.cluster_id, c.region))
            })?;
            Ok(ClusterInfo {
                cluster_id: c.cluster_id.clone(),
                tech: c.tech,
                node,
                capacity_bound: c.capacity_bound,
                cf: c.cf[..hours].to_vec(),
            })
        })
        .collect::<Result<_>>()?;

    if !opts.electric_grid && !opts.pipelines {
        if let Some(c) = infos.iter().find(|c| c.node != harbor && c.capacity_bound > 0.0) {
            return Err(Error::Model(format!(
                "harbor is disconnected from cluster {}: no transport carrier enabled",
                c.cluster_id
            )));
        }
    }

    let pem_eff = te.pem_eff(year);
    let bat_eta = te.battery_efficiency.sqrt();
    let power_scale = if hourly_demand > 0.0 { hourly_demand } else { 1.0 };

    let mut lp = LinearProgram::default();
    let mut layout = Layout::default();
    let inf = f64::INFINITY;

    let cost = |tech: Technology| -> Result<f64> { Ok(te.annual_unit_cost(tech, year)? * share) };

    // capacity variables
    for (k, c) in infos.iter().enumerate() {
        let tech = c.tech.technology();
        layout.res_cap.push(lp.add_column(VarKey::ResCapacity(k), 0.0, c.capacity_bound, cost(tech)?, Some(tech)));
    }
    for n in 0..n_nodes {
        layout.pem_cap.push(lp.add_column(VarKey::PemCapacity(n), 0.0, inf, cost(Technology::Pem)?, Some(Technology::Pem)));
    }
    for n in 0..n_nodes {
        layout.bat_cap.push(if opts.batteries {
            Some(lp.add_column(VarKey::BatteryCapacity(n), 0.0, inf, cost(Technology::Battery)?, Some(Technology::Battery)))
        } else {
            None
        });
    }
    let liq_cost = te.annualize(Technology::Liquefaction, liq_specific_capex)? * share;
    layout.liq_cap = lp.add_column(VarKey::LiquefierCapacity, 0.0, inf, liq_cost, Some(Technology::Liquefaction));
    layout.tank_cap = lp.add_column(VarKey::TankCapacity, 0.0, inf, cost(Technology::Lh2Tank)?, Some(Technology::Lh2Tank));
    let arcs: Vec<(usize, usize, f64)> = graph.arcs().iter().map(|a| (a.a, a.b, a.length_km)).collect();
    for (i, &(_, _, len)) in arcs.iter().enumerate() {
        layout.elec_cap.push(if opts.electric_grid {
            Some(lp.add_column(VarKey::ElecArcCapacity(i), 0.0, inf, cost(Technology::ElecGrid)? * len, Some(Technology::ElecGrid)))
        } else {
            None
        });
        layout.pipe_cap.push(if opts.pipelines {
            Some(lp.add_column(VarKey::PipeArcCapacity(i), 0.0, inf, cost(Technology::Pipeline)? * len, Some(Technology::Pipeline)))
        } else {
            None
        });
    }

    // operation variables
    let series = |lp: &mut LinearProgram, key: &dyn Fn(usize) -> VarKey| -> Vec<usize> {
        (0..hours).map(|t| lp.add_column(key(t), 0.0, inf, 0.0, None)).collect()
    };
    for k in 0..infos.len() {
        layout.gen.push(series(&mut lp, &|t| VarKey::Generation(k, t)));
    }
    for n in 0..n_nodes {
        if opts.batteries {
            layout.bat_ch.push(series(&mut lp, &|t| VarKey::BatteryCharge(n, t)));
            layout.bat_dis.push(series(&mut lp, &|t| VarKey::BatteryDischarge(n, t)));
            layout.bat_soc.push(series(&mut lp, &|t| VarKey::BatterySoc(n, t)));
        } else {
            layout.bat_ch.push(Vec::new());
            layout.bat_dis.push(Vec::new());
            layout.bat_soc.push(Vec::new());
        }
        layout.pem_in.push(series(&mut lp, &|t| VarKey::PemInput(n, t)));
    }
    layout.liq_in = series(&mut lp, &VarKey::LiquefierInput);
    layout.tank_soc = series(&mut lp, &VarKey::TankSoc);
    for a in 0..arcs.len() {
        let pair = |lp: &mut LinearProgram, elec: bool| -> Vec<(usize, usize)> {
            (0..hours)
                .map(|t| {
                    let mk = |forward| {
                        if elec {
                            VarKey::ElecFlow { a, forward, t }
                        } else {
                            VarKey::PipeFlow { a, forward, t }
                        }
                    };
                    (lp.add_column(mk(true), 0.0, inf, 0.0, None), lp.add_column(mk(false), 0.0, inf, 0.0, None))
                })
                .collect()
        };
        layout.elec_flow.push(if opts.electric_grid { pair(&mut lp, true) } else { Vec::new() });
        layout.pipe_flow.push(if opts.pipelines { pair(&mut lp, false) } else { Vec::new() });
    }

    let elec_eff: Vec<f64> = arcs
        .iter()
        .map(|&(_, _, len)| arc_efficiency(Carrier::Electricity, len, te.grid_loss_per_1000km))
        .collect::<Result<_>>()?;

    // constraints
    let mut terms: Vec<(usize, f64)> = Vec::new();
    for t in 0..hours {
        let next = (t + 1) % hours;
        for (k, c) in infos.iter().enumerate() {
            lp.add_row(
                RowKey::GenLimit(k, t),
                f64::NEG_INFINITY,
                0.0,
                &[(layout.gen[k][t], 1.0), (layout.res_cap[k], -c.cf[t])],
            );
        }
        for n in 0..n_nodes {
            // electricity
            terms.clear();
            for (k, c) in infos.iter().enumerate() {
                if c.node == n {
                    terms.push((layout.gen[k][t], 1.0));
                }
            }
            if opts.batteries {
                terms.push((layout.bat_dis[n][t], 1.0));
                terms.push((layout.bat_ch[n][t], -1.0));
            }
            terms.push((layout.pem_in[n][t], -1.0));
            if n == harbor {
                terms.push((layout.liq_in[t], -te.liq_el_demand));
            }
            if opts.electric_grid {
                for (a, &(from, to, _)) in arcs.iter().enumerate() {
                    let (fw, bw) = layout.elec_flow[a][t];
                    if from == n {
                        terms.push((fw, -1.0));
                        terms.push((bw, elec_eff[a]));
                    } else if to == n {
                        terms.push((fw, elec_eff[a]));
                        terms.push((bw, -1.0));
                    }
                }
            }
            lp.add_row(RowKey::ElecBalance(n, t), 0.0, 0.0, &terms);

            // hydrogen
            terms.clear();
            terms.push((layout.pem_in[n][t], pem_eff));
            if n == harbor {
                terms.push((layout.liq_in[t], -1.0));
            }
            if opts.pipelines {
                for (a, &(from, to, _)) in arcs.iter().enumerate() {
                    let (fw, bw) = layout.pipe_flow[a][t];
                    if from == n {
                        terms.push((fw, -1.0));
                        terms.push((bw, 1.0));
                    } else if to == n {
                        terms.push((fw, 1.0));
                        terms.push((bw, -1.0));
                    }
                }
            }
            lp.add_row(RowKey::H2Balance(n, t), 0.0, 0.0, &terms);

            if let Some(cap) = layout.bat_cap[n] {
                let (ch, dis, soc) = (layout.bat_ch[n][t], layout.bat_dis[n][t], &layout.bat_soc[n]);
                lp.add_row(
                    RowKey::BatteryDynamics(n, t),
                    0.0,
                    0.0,
                    &[(soc[next], 1.0), (soc[t], -1.0), (ch, -bat_eta), (dis, 1.0 / bat_eta)],
                );
                lp.add_row(RowKey::BatteryChargeLimit(n, t), f64::NEG_INFINITY, 0.0, &[(ch, 1.0), (cap, -1.0)]);
                lp.add_row(RowKey::BatteryDischargeLimit(n, t), f64::NEG_INFINITY, 0.0, &[(dis, 1.0), (cap, -1.0)]);
                lp.add_row(RowKey::BatterySocLimit(n, t), f64::NEG_INFINITY, 0.0, &[(soc[t], 1.0), (cap, -1.0)]);
            }
            lp.add_row(
                RowKey::PemLimit(n, t),
                f64::NEG_INFINITY,
                0.0,
                &[(layout.pem_in[n][t], 1.0), (layout.pem_cap[n], -1.0)],
            );
        }
        lp.add_row(
            RowKey::TankBalance(t),
            -hourly_demand,
            -hourly_demand,
            &[(layout.tank_soc[next], 1.0), (layout.tank_soc[t], -1.0), (layout.liq_in[t], -1.0)],
        );
        lp.add_row(
            RowKey::LiquefierLimit(t),
            f64::NEG_INFINITY,
            0.0,
            &[(layout.liq_in[t], 1.0), (layout.liq_cap, -1.0)],
        );
        lp.add_row(
            RowKey::TankSocLimit(t),
            f64::NEG_INFINITY,
            0.0,
            &[(layout.tank_soc[t], 1.0), (layout.tank_cap, -1.0)],
        );
        for a in 0..arcs.len() {
            if let Some(cap) = layout.elec_cap[a] {
                let (fw, bw) = layout.elec_flow[a][t];
                lp.add_row(RowKey::ElecFlowLimit { a, forward: true, t }, f64::NEG_INFINITY, 0.0, &[(fw, 1.0), (cap, -1.0)]);
                lp.add_row(RowKey::ElecFlowLimit { a, forward: false, t }, f64::NEG_INFINITY, 0.0, &[(bw, 1.0), (cap, -1.0)]);
            }
            if let Some(cap) = layout.pipe_cap[a] {
                let (fw, bw) = layout.pipe_flow[a][t];
                lp.add_row(RowKey::PipeFlowLimit { a, forward: true, t }, f64::NEG_INFINITY, 0.0, &[(fw, 1.0), (cap, -1.0)]);
                lp.add_row(RowKey::PipeFlowLimit { a, forward: false, t }, f64::NEG_INFINITY, 0.0, &[(bw, 1.0), (cap, -1.0)]);
            }
        }
    }

    Ok(SystemModel {
        lp,
        layout,
        hours,
        year,
        demand: DemandProfile {
            hourly_kwh: hourly_demand,
            hours,
        },
        node_ids: nodes.iter().map(|n| n.id.clone()).collect(),
        harbor,
        clusters: infos,
        arcs,
        liq_specific_capex,
        power_scale,
        max_export_kwh,
    })
}
