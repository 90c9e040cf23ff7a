//! Translates an [`Instance`] into a [`ModelIr`].
//!
//! Variable families, with the index sets that create them:
//!
//! | family    | indices   | created for                                   |
//! |-----------|-----------|-----------------------------------------------|
//! | `x`       | `i`       | every truck (binary)                          |
//! | `ecap`    | `i`       | every truck                                   |
//! | `e`, `p`  | `i,t`     | every truck and step                          |
//! | `ptrk`    | `i,j,t`   | every access triple                           |
//! | `phat`    | `i,j,t`   | access triples named by a multi-term `one_station` or `session` row; all triples in strict mode |
//! | `P`       | `j,t`     | active station with `I_jt` non-empty          |
//! | `Pchs`, `Phat` | `j`  | active station (some `I_jt` non-empty)        |
//! | `Pcs`, `gamma` | `j,k`| active station and `k` in `K_j`               |
//! | `Pupg`, `Pupgvar`, `Phatupg` | `k` | substation neighboring an active station |
//!
//! Rows: `energy`, `soc_lo`, `soc_hi`, `psum` once per `(i,t)`; `ecap_base`
//! once per truck; `trk_cap` once per access triple; `ind` once per `phat`
//! (plus `ind_lo` in strict mode); `one_station` per `(i,t)` with
//! `|J_it| >= 2`; `session[i,j,t]` per `j` in `J_it ∩ J_i,next(t)` with
//! `|J_i,next(t)| >= 2`; `station_load`, `station_cap` per `P`; `station_sel`
//! and `feed` per active station; `link` per `gamma` (plus `link_lo` in strict
//! mode); `one_sub` per active station with `|K_j| >= 2`; `sub_cap`,
//! `upg_def`, `upg_var` per active substation.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::Range;

use milp::{ConstraintSense::*, LinExpr, ModelIr, Name, ObjectiveSense, VarId};
use serde::{Deserialize, Serialize};

use crate::bigm::{compute_bigm_with, BigMBook};
use crate::domain::{validate_instance, Instance, Subsets};
use crate::error::BuildError;
use crate::tiers::{ChargerCatalog, TierLinParams, TierVars};

pub const DEFAULT_BATTERY_CAP_KWH: f64 = 1200.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChargeEfficiency {
    /// One-way efficiency `sqrt(kappa)`.
    #[default]
    OneWay,
    /// `1 - sqrt(kappa)`, the factor as printed.
    PaperLiteral,
}

impl ChargeEfficiency {
    pub fn eta(self, kappa: f64) -> f64 {
        match self {
            ChargeEfficiency::OneWay => kappa.sqrt(),
            ChargeEfficiency::PaperLiteral => 1.0 - kappa.sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuildOptions {
    pub efficiency: ChargeEfficiency,
    /// Adds the `>= eps` half of every indicator link.
    pub strict: bool,
    /// Upper bound on battery size; `None` leaves it unbounded.
    pub battery_cap: Option<f64>,
    pub tiers: Option<(ChargerCatalog, TierLinParams)>,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            efficiency: ChargeEfficiency::OneWay,
            strict: false,
            battery_cap: Some(DEFAULT_BATTERY_CAP_KWH),
            tiers: None,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct VarMap {
    pub x: Vec<VarId>,
    pub ecap: Vec<VarId>,
    pub e: Vec<Vec<VarId>>,
    pub p: Vec<Vec<VarId>>,
    pub ptrk: BTreeMap<(usize, usize, usize), VarId>,
    pub phat: BTreeMap<(usize, usize, usize), VarId>,
    pub load: BTreeMap<(usize, usize), VarId>,
    pub pchs: BTreeMap<usize, VarId>,
    /// Station deployment binary (`Phat`, or `Nhat` when tiers are active).
    pub deployed: BTreeMap<usize, VarId>,
    pub flow: BTreeMap<(usize, usize), VarId>,
    pub gamma: BTreeMap<(usize, usize), VarId>,
    pub pupg: BTreeMap<usize, VarId>,
    pub pupg_var: BTreeMap<usize, VarId>,
    pub phat_upg: BTreeMap<usize, VarId>,
}

#[derive(Debug, Clone, Default)]
pub struct CostExprs {
    pub truck: LinExpr,
    pub charging: LinExpr,
    pub power: LinExpr,
}

impl CostExprs {
    pub fn total(&self) -> LinExpr {
        let mut e = self.truck.clone();
        e.add_scaled(&self.charging, 1.0).add_scaled(&self.power, 1.0);
        e
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum PlanObjective {
    MaxTrucks,
    MinCost { target: usize },
    MinEmissions { budget: f64 },
}

impl PlanObjective {
    pub fn from_parts(mode: u8, target: Option<usize>, budget: Option<f64>) -> Result<Self, BuildError> {
        match mode {
            1 => Ok(PlanObjective::MaxTrucks),
            2 => target.map(|target| PlanObjective::MinCost { target }).ok_or(BuildError::MissingTarget),
            3 => budget.map(|budget| PlanObjective::MinEmissions { budget }).ok_or(BuildError::MissingBudget),
            m => Err(BuildError::InvalidInstance(format!("unknown mode {m}"))),
        }
    }

    pub fn mode(&self) -> u8 {
        match self {
            PlanObjective::MaxTrucks => 1,
            PlanObjective::MinCost { .. } => 2,
            PlanObjective::MinEmissions { .. } => 3,
        }
    }
}

/// A model under construction together with the bookkeeping needed to read
/// solutions back.
#[derive(Debug, Clone)]
pub struct PlanModel {
    pub ir: ModelIr,
    pub vars: VarMap,
    pub subsets: Subsets,
    pub bigm: BigMBook,
    pub options: BuildOptions,
    pub eta: f64,
    pub costs: Option<CostExprs>,
    pub tier_vars: Option<TierVars>,
    pub objective: Option<PlanObjective>,
    pub warnings: Vec<String>,
}

fn n(family: &str, idx: &[usize]) -> Name {
    Name::new(family, idx)
}

impl PlanModel {
    pub fn new(inst: &Instance, options: BuildOptions) -> Self {
        let subsets = inst.subsets();
        let bigm = compute_bigm_with(inst, &subsets);
        PlanModel {
            ir: ModelIr::new("drayplan"),
            vars: VarMap::default(),
            subsets,
            bigm,
            eta: options.efficiency.eta(inst.params.kappa),
            options,
            costs: None,
            tier_vars: None,
            objective: None,
            warnings: Vec::new(),
        }
    }

    pub fn tiers_active(&self) -> bool {
        self.options.tiers.is_some()
    }

    pub fn active_stations(&self) -> Vec<usize> {
        (0..self.subsets.i_jt.len()).filter(|&j| self.subsets.station_active(j)).collect()
    }

    pub fn value(&self, values: &[f64], v: VarId) -> f64 {
        values[v.index()]
    }

    fn rows_since(&self, start: usize) -> Range<usize> {
        start..self.ir.num_constraints()
    }

    /// Access triples whose session indicator appears in a row with more
    /// than one term.
    fn needed_indicators(&self, inst: &Instance) -> BTreeSet<(usize, usize, usize)> {
        let s = &self.subsets;
        let mut out = BTreeSet::new();
        for i in 0..inst.trucks.len() {
            for t in 0..inst.grid.step_count {
                let tn = inst.grid.succ(t);
                let (here, next) = (&s.j_it[i][t], &s.j_it[i][tn]);
                if here.len() >= 2 {
                    out.extend(here.iter().map(|&j| (i, j, t)));
                }
                if next.len() >= 2 {
                    for &j in here.iter().filter(|j| next.contains(j)) {
                        out.insert((i, j, t));
                        out.extend(next.iter().filter(|&&jj| jj != j).map(|&jj| (i, jj, tn)));
                    }
                }
            }
        }
        out
    }
}

/// Adds `e`, `ecap`, `x`, `p` and the battery balance and state-of-charge rows.
pub fn build_truck_energy(inst: &Instance, pm: &mut PlanModel) -> Result<Range<usize>, BuildError> {
    let start = pm.ir.num_constraints();
    let cap = pm.options.battery_cap.unwrap_or(f64::INFINITY);
    let (g, par) = (&inst.grid, &inst.params);
    for (i, tr) in inst.trucks.iter().enumerate() {
        let x = pm.ir.add_binary(n("x", &[i]))?;
        let ecap = pm.ir.add_continuous(n("ecap", &[i]), 0.0, cap)?;
        let mut e = Vec::with_capacity(g.step_count);
        let mut p = Vec::with_capacity(g.step_count);
        for t in 0..g.step_count {
            e.push(pm.ir.add_continuous(n("e", &[i, t]), 0.0, cap)?);
            p.push(pm.ir.add_continuous(n("p", &[i, t]), 0.0, par.p_max)?);
        }
        for t in 0..g.step_count {
            let gain = pm.eta * tr.stop_fraction[t] * g.step_hours;
            pm.ir.add_constraint(
                n("energy", &[i, t]),
                &[(e[g.succ(t)], 1.0), (e[t], -1.0), (p[t], -gain), (x, tr.consumption[t])],
                Eq,
                0.0,
            )?;
            pm.ir.add_constraint(n("soc_lo", &[i, t]), &[(e[t], 1.0), (ecap, -par.soc_min)], Ge, 0.0)?;
            pm.ir.add_constraint(n("soc_hi", &[i, t]), &[(e[t], 1.0), (ecap, -par.soc_max)], Le, 0.0)?;
        }
        pm.vars.x.push(x);
        pm.vars.ecap.push(ecap);
        pm.vars.e.push(e);
        pm.vars.p.push(p);
    }
    Ok(pm.rows_since(start))
}

/// Adds per-station charging power, the per-step sum, and the one-station
/// and session rules. With tiers active the indicators come from the tier
/// constraints instead.
pub fn build_charging_access(inst: &Instance, pm: &mut PlanModel) -> Result<Range<usize>, BuildError> {
    if pm.vars.x.len() != inst.trucks.len() {
        return Err(BuildError::InvalidInstance("truck energy variables missing".into()));
    }
    let start = pm.ir.num_constraints();
    let pmax = inst.params.p_max;
    let triples: Vec<_> = inst.access.truck_station.iter().copied().collect();
    for &(i, j, t) in &triples {
        let v = pm.ir.add_continuous(n("ptrk", &[i, j, t]), 0.0, pmax)?;
        pm.vars.ptrk.insert((i, j, t), v);
        pm.ir.add_constraint(n("trk_cap", &[i, j, t]), &[(v, 1.0), (pm.vars.x[i], -pmax)], Le, 0.0)?;
    }
    for i in 0..inst.trucks.len() {
        for t in 0..inst.grid.step_count {
            let mut terms = vec![(pm.vars.p[i][t], 1.0)];
            terms.extend(pm.subsets.j_it[i][t].iter().map(|&j| (pm.vars.ptrk[&(i, j, t)], -1.0)));
            pm.ir.add_constraint(n("psum", &[i, t]), &terms, Eq, 0.0)?;
        }
    }
    if pm.tiers_active() {
        return Ok(pm.rows_since(start));
    }

    let needed = if pm.options.strict {
        triples.iter().copied().collect()
    } else {
        pm.needed_indicators(inst)
    };
    let eps = pm.bigm.epsilon;
    for &(i, j, t) in &needed {
        let h = pm.ir.add_binary(n("phat", &[i, j, t]))?;
        let v = pm.vars.ptrk[&(i, j, t)];
        pm.vars.phat.insert((i, j, t), h);
        pm.ir.add_constraint(n("ind", &[i, j, t]), &[(v, 1.0), (h, -pmax)], Le, 0.0)?;
        if pm.options.strict {
            pm.ir.add_constraint(n("ind_lo", &[i, j, t]), &[(v, 1.0), (h, -eps)], Ge, 0.0)?;
        }
    }
    let ind = pm.vars.phat.clone();
    add_session_rows(inst, pm, &ind, "one_station")?;
    Ok(pm.rows_since(start))
}

/// One indicator per `(i,t)` at most, and a parked session stays at one
/// station. `ind` maps access triples to their charging indicator.
pub(crate) fn add_session_rows(
    inst: &Instance,
    pm: &mut PlanModel,
    ind: &BTreeMap<(usize, usize, usize), VarId>,
    single_family: &str,
) -> Result<(), BuildError> {
    for i in 0..inst.trucks.len() {
        for t in 0..inst.grid.step_count {
            let here = pm.subsets.j_it[i][t].clone();
            if here.len() >= 2 {
                let terms: Vec<_> = here.iter().map(|&j| (ind[&(i, j, t)], 1.0)).collect();
                pm.ir.add_constraint(n(single_family, &[i, t]), &terms, Le, 1.0)?;
            }
        }
    }
    for i in 0..inst.trucks.len() {
        for t in 0..inst.grid.step_count {
            let tn = inst.grid.succ(t);
            let next = pm.subsets.j_it[i][tn].clone();
            if next.len() < 2 {
                continue;
            }
            for &j in pm.subsets.j_it[i][t].clone().iter().filter(|j| next.contains(j)) {
                let mut terms = vec![(ind[&(i, j, t)], 1.0)];
                terms.extend(next.iter().filter(|&&jj| jj != j).map(|&jj| (ind[&(i, jj, tn)], 1.0)));
                pm.ir.add_constraint(n("session", &[i, j, t]), &terms, Le, 1.0)?;
            }
        }
    }
    Ok(())
}

/// Station load, capacity and the deployment indicator.
pub fn build_station_capacity(inst: &Instance, pm: &mut PlanModel) -> Result<Range<usize>, BuildError> {
    let start = pm.ir.num_constraints();
    let deploy_family = if pm.tiers_active() { "Nhat" } else { "Phat" };
    for j in pm.active_stations() {
        let mj = pm.bigm.m_station_select[j];
        let pchs = pm.ir.add_continuous(n("Pchs", &[j]), 0.0, mj)?;
        let hat = pm.ir.add_binary(n(deploy_family, &[j]))?;
        pm.vars.pchs.insert(j, pchs);
        pm.vars.deployed.insert(j, hat);
        for t in 0..inst.grid.step_count {
            let present = pm.subsets.i_jt[j][t].clone();
            if present.is_empty() {
                continue;
            }
            let load = pm.ir.add_continuous(n("P", &[j, t]), 0.0, mj)?;
            pm.vars.load.insert((j, t), load);
            let mut terms = vec![(load, 1.0)];
            terms.extend(present.iter().map(|&i| (pm.vars.ptrk[&(i, j, t)], -1.0)));
            pm.ir.add_constraint(n("station_load", &[j, t]), &terms, Eq, 0.0)?;
            pm.ir.add_constraint(n("station_cap", &[j, t]), &[(load, 1.0), (pchs, -1.0)], Le, 0.0)?;
        }
        pm.ir.add_constraint(n("station_sel", &[j]), &[(hat, mj), (pchs, -1.0)], Ge, 0.0)?;
    }
    Ok(pm.rows_since(start))
}

/// Station-to-substation flows, single connection, hosting capacity and upgrades.
pub fn build_grid_connection(inst: &Instance, pm: &mut PlanModel) -> Result<Range<usize>, BuildError> {
    let start = pm.ir.num_constraints();
    let par = &inst.params;
    let eps = pm.bigm.epsilon;
    let mut used_subs = BTreeSet::new();
    for j in pm.active_stations() {
        let pchs = pm.vars.pchs[&j];
        let neighbors = pm.subsets.k_j[j].clone();
        if neighbors.is_empty() {
            pm.warnings.push(format!(
                "station `{}` has charging demand but no substation neighbor; its capacity is forced to 0",
                inst.stations[j].id
            ));
        }
        let mut feed = vec![(pchs, 1.0)];
        let mut gammas = Vec::new();
        for (pos, &(k, _)) in neighbors.iter().enumerate() {
            let m = pm.bigm.m_substation_flow[j][pos];
            let f = pm.ir.add_continuous(n("Pcs", &[j, k]), 0.0, m)?;
            let g = pm.ir.add_binary(n("gamma", &[j, k]))?;
            pm.vars.flow.insert((j, k), f);
            pm.vars.gamma.insert((j, k), g);
            pm.ir.add_constraint(n("link", &[j, k]), &[(f, 1.0), (g, -m)], Le, 0.0)?;
            if pm.options.strict {
                pm.ir.add_constraint(n("link_lo", &[j, k]), &[(f, 1.0), (g, -eps)], Ge, 0.0)?;
            }
            feed.push((f, -1.0));
            gammas.push((g, 1.0));
            used_subs.insert(k);
        }
        pm.ir.add_constraint(n("feed", &[j]), &feed, Le, 0.0)?;
        if gammas.len() >= 2 {
            pm.ir.add_constraint(n("one_sub", &[j]), &gammas, Le, 1.0)?;
        }
    }
    let m_upg = pm.bigm.m_upgrade_var;
    let std_kw = par.p_upg_std * par.pf;
    for k in used_subs {
        let upg = pm.ir.add_continuous(n("Pupg", &[k]), 0.0, std_kw + m_upg)?;
        let var = pm.ir.add_continuous(n("Pupgvar", &[k]), 0.0, m_upg)?;
        let hat = pm.ir.add_binary(n("Phatupg", &[k]))?;
        pm.vars.pupg.insert(k, upg);
        pm.vars.pupg_var.insert(k, var);
        pm.vars.phat_upg.insert(k, hat);
        let mut terms: Vec<_> = pm
            .vars
            .flow
            .iter()
            .filter(|((_, kk), _)| *kk == k)
            .map(|(_, &f)| (f, 1.0))
            .collect();
        terms.push((upg, -1.0));
        pm.ir.add_constraint(n("sub_cap", &[k]), &terms, Le, inst.substations[k].remaining_capacity)?;
        pm.ir.add_constraint(n("upg_def", &[k]), &[(upg, 1.0), (hat, -std_kw), (var, -1.0)], Eq, 0.0)?;
        pm.ir.add_constraint(n("upg_var", &[k]), &[(var, 1.0), (hat, -m_upg)], Le, 0.0)?;
    }
    Ok(pm.rows_since(start))
}

/// Builds the three annual cost expressions and the battery floor row.
pub fn build_costs(inst: &Instance, pm: &mut PlanModel) -> Result<(), BuildError> {
    let c = &inst.costs;
    let par = &inst.params;
    let dt = inst.grid.step_hours;
    let mut costs = CostExprs::default();
    for i in 0..inst.trucks.len() {
        let (x, ecap) = (pm.vars.x[i], pm.vars.ecap[i]);
        costs
            .truck
            .add_term(x, c.veh.annual - c.btr.annual * par.e_base)
            .add_term(ecap, c.btr.annual);
        for t in 0..inst.grid.step_count {
            costs.truck.add_term(pm.vars.p[i][t], par.days_per_year * par.tou_price[t] * dt);
        }
        pm.ir.add_constraint(n("ecap_base", &[i]), &[(ecap, 1.0), (x, -par.e_base)], Ge, 0.0)?;
    }
    let per_kw = if pm.tiers_active() {
        c.cap.annual
    } else {
        c.cap.annual + c.chg.annual
    };
    for (&j, &pchs) in &pm.vars.pchs {
        costs.charging.add_term(pm.vars.deployed[&j], c.ctr.annual).add_term(pchs, per_kw);
    }
    if let (Some(tv), Some((cat, _))) = (&pm.tier_vars, &pm.options.tiers) {
        for (&(m, _j), &count) in &tv.installed {
            costs.charging.add_term(count, cat.tiers[m - 1].cost);
        }
    }
    for (&(j, k), &g) in &pm.vars.gamma {
        let d = pm.subsets.k_j[j].iter().find(|&&(kk, _)| kk == k).map_or(0.0, |&(_, d)| d);
        costs.power.add_term(g, c.lne.annual * d);
    }
    for (&k, &hat) in &pm.vars.phat_upg {
        costs
            .power
            .add_term(hat, c.upg_std.annual)
            .add_term(pm.vars.pupg_var[&k], c.upg_var_per_kw());
    }
    pm.costs = Some(costs);
    Ok(())
}

/// `C_trk + C_chg + C_pwr <= budget`; an infinite budget adds nothing.
pub fn build_budget_constraint(pm: &mut PlanModel, budget: f64) -> Result<Option<usize>, BuildError> {
    if budget < 0.0 || budget.is_nan() {
        return Err(BuildError::NegativeBudget(budget));
    }
    if budget.is_infinite() {
        return Ok(None);
    }
    let total = pm.costs.as_ref().ok_or_else(|| BuildError::InvalidInstance("costs not built".into()))?.total();
    Ok(Some(pm.ir.add_expr_constraint(Name::scalar("budget"), &total, Le, budget)?))
}

/// Daily emissions: diesel for trucks left unelectrified plus grid charging.
pub fn emissions_expr(inst: &Instance, pm: &PlanModel) -> LinExpr {
    let mut e = LinExpr::constant(inst.total_diesel_emission());
    for (i, tr) in inst.trucks.iter().enumerate() {
        e.add_term(pm.vars.x[i], -tr.diesel_emission);
        for t in 0..inst.grid.step_count {
            e.add_term(pm.vars.p[i][t], inst.params.carbon_intensity[t] * inst.grid.step_hours);
        }
    }
    e
}

pub fn set_objective(inst: &Instance, pm: &mut PlanModel, objective: PlanObjective) -> Result<(), BuildError> {
    match objective {
        PlanObjective::MaxTrucks => {
            let mut e = LinExpr::new();
            for &x in &pm.vars.x {
                e.add_term(x, 1.0);
            }
            for (&k, &hat) in &pm.vars.phat_upg.clone() {
                pm.ir.fix(hat, 0.0)?;
                pm.ir.fix(pm.vars.pupg_var[&k], 0.0)?;
                pm.ir.fix(pm.vars.pupg[&k], 0.0)?;
            }
            pm.ir.set_objective(ObjectiveSense::Maximize, e)?;
        }
        PlanObjective::MinCost { target } => {
            let total = pm.costs.as_ref().ok_or_else(|| BuildError::InvalidInstance("costs not built".into()))?.total();
            let terms: Vec<_> = pm.vars.x.iter().map(|&x| (x, 1.0)).collect();
            pm.ir.add_constraint(Name::scalar("target"), &terms, Ge, target as f64)?;
            pm.ir.set_objective(ObjectiveSense::Minimize, total)?;
        }
        PlanObjective::MinEmissions { budget } => {
            build_budget_constraint(pm, budget)?;
            let e = emissions_expr(inst, pm);
            pm.ir.set_objective(ObjectiveSense::Minimize, e)?;
        }
    }
    pm.objective = Some(objective);
    Ok(())
}

/// Every constraint group and the cost expressions, without an objective.
pub fn build_model(inst: &Instance, options: BuildOptions) -> Result<PlanModel, BuildError> {
    let report = validate_instance(inst);
    if !report.is_empty() {
        return Err(BuildError::InvalidInstance(report.to_string().trim_end().to_string()));
    }
    let mut pm = PlanModel::new(inst, options);
    build_truck_energy(inst, &mut pm)?;
    build_charging_access(inst, &mut pm)?;
    if let Some((cat, lin)) = pm.options.tiers.clone() {
        crate::tiers::build_tier_constraints(inst, &mut pm, &cat, &lin)?;
    }
    build_station_capacity(inst, &mut pm)?;
    if pm.tiers_active() {
        crate::tiers::build_station_deploy_indicator(&mut pm)?;
    }
    build_grid_connection(inst, &mut pm)?;
    build_costs(inst, &mut pm)?;
    Ok(pm)
}

/// [`build_model`] followed by [`set_objective`].
pub fn build_plan(inst: &Instance, options: BuildOptions, objective: PlanObjective) -> Result<PlanModel, BuildError> {
    let mut pm = build_model(inst, options)?;
    set_objective(inst, &mut pm, objective)?;
    Ok(pm)
}

/// Number of variables and rows per family name.
pub fn family_counts(ir: &ModelIr) -> (BTreeMap<String, usize>, BTreeMap<String, usize>) {
    let mut vars = BTreeMap::new();
    for v in ir.vars() {
        *vars.entry(v.name.family.clone()).or_insert(0) += 1;
    }
    let mut rows = BTreeMap::new();
    for c in ir.constraints() {
        *rows.entry(c.tag.family.clone()).or_insert(0) += 1;
    }
    (vars, rows)
}
