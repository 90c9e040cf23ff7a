//! Scenario runs, plan reports and derived metrics.

use std::fmt::Write as _;
use std::path::Path;

use milp::{solve_milp, SolveStatus, Solution, SolverParams};
use serde::{Deserialize, Serialize};

use crate::builder::{build_plan, BuildOptions, PlanModel, PlanObjective};
use crate::domain::Instance;
use crate::error::ScenarioError;

/// Values below this are treated as zero when reading plans.
pub const PLAN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Default)]
pub struct ScenarioOptions {
    pub build: BuildOptions,
    pub solver: SolverParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruckPlan {
    pub id: String,
    pub electrified: bool,
    pub battery_kwh: f64,
    pub charged_kwh: f64,
    pub consumption_kwh: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChargerCount {
    pub kw: f64,
    pub count: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationPlan {
    pub id: String,
    pub kind: String,
    pub deployed: bool,
    pub capacity_kw: f64,
    pub substation: Option<String>,
    pub energy_kwh: f64,
    pub utilization: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub chargers: Vec<ChargerCount>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubstationPlan {
    pub id: String,
    pub capacity_kw: f64,
    pub flow_kw: f64,
    pub upgraded: bool,
    pub upgrade_kw: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub truck: f64,
    pub charging: f64,
    pub power: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanReport {
    pub mode: u8,
    pub status: String,
    pub objective: Option<f64>,
    pub gap: Option<f64>,
    pub nodes: usize,
    pub capacity_fraction: Option<f64>,
    pub target: Option<usize>,
    pub budget: Option<f64>,
    pub electrified: Vec<String>,
    pub trucks: Vec<TruckPlan>,
    pub stations: Vec<StationPlan>,
    pub substations: Vec<SubstationPlan>,
    pub costs: CostBreakdown,
    pub ghg_kg_per_day: f64,
    pub step_hours: f64,
    pub load_profile_kw: Vec<f64>,
    pub battery_capacities_kwh: Vec<f64>,
    pub total_charged_kwh: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode1_max: Option<usize>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

pub fn status_word(s: SolveStatus) -> &'static str {
    match s {
        SolveStatus::Optimal => "optimal",
        SolveStatus::Infeasible => "infeasible",
        SolveStatus::Unbounded => "unbounded",
        SolveStatus::LimitHit => "limit-hit",
        SolveStatus::NumericalFailure => "numerical-failure",
    }
}

/// Daily kg CO2: diesel for trucks not electrified plus grid charging.
/// `x[i]` is the electrification indicator, `p[i][t]` charging power in kW.
pub fn ghg(inst: &Instance, x: &[f64], p: &[Vec<f64>]) -> f64 {
    let mut total = 0.0;
    for (i, tr) in inst.trucks.iter().enumerate() {
        total += (1.0 - x[i]) * tr.diesel_emission;
    }
    for (i, row) in p.iter().enumerate() {
        debug_assert!(i < inst.trucks.len());
        for (t, &kw) in row.iter().enumerate() {
            total += inst.params.carbon_intensity[t] * kw * inst.grid.step_hours;
        }
    }
    total
}

/// Delivered energy over the most the station could deliver; `None` when
/// the station has no capacity.
pub fn utilization_rate(loads_kw: &[f64], capacity_kw: f64, step_hours: f64) -> Option<f64> {
    if capacity_kw <= PLAN_TOL {
        return None;
    }
    let delivered: f64 = loads_kw.iter().map(|l| l * step_hours).sum();
    Some(delivered / (capacity_kw * loads_kw.len() as f64 * step_hours))
}

/// Per-station utilization of a solved plan, in station order.
pub fn utilization(inst: &Instance, pm: &PlanModel, values: &[f64]) -> Vec<Option<f64>> {
    (0..inst.stations.len())
        .map(|j| {
            let Some(&cap) = pm.vars.pchs.get(&j) else {
                return None;
            };
            let loads: Vec<f64> = (0..inst.grid.step_count)
                .map(|t| pm.vars.load.get(&(j, t)).map_or(0.0, |&v| values[v.index()]))
                .collect();
            utilization_rate(&loads, values[cap.index()], inst.grid.step_hours)
        })
        .collect()
}

/// Linear interpolation between `(year, statewide count)` milestones, scaled
/// by `share` and rounded to the nearest integer.
pub fn interpolate_targets(milestones: &[(i32, f64)], share: f64, year: i32) -> Result<u64, ScenarioError> {
    if milestones.is_empty() || milestones.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(ScenarioError::Milestones);
    }
    let (first, last) = (milestones[0].0, milestones[milestones.len() - 1].0);
    if year < first || year > last {
        return Err(ScenarioError::YearOutOfSpan { year, first, last });
    }
    let k = milestones.partition_point(|m| m.0 <= year) - 1;
    let value = if milestones[k].0 == year {
        milestones[k].1
    } else {
        let (a, b) = (milestones[k], milestones[k + 1]);
        a.1 + (b.1 - a.1) * f64::from(year - a.0) / f64::from(b.0 - a.0)
    };
    Ok((value * share).round() as u64)
}

/// Statewide zero-emission drayage milestones.
pub const STATE_MILESTONES: [(i32, f64); 4] = [(2024, 1000.0), (2025, 3000.0), (2030, 24000.0), (2035, 35000.0)];
/// Regional share of the statewide fleet.
pub const REGIONAL_SHARE: f64 = 22000.0 / 35000.0;

/// Reads a plan out of solver values.
pub fn extract_report(inst: &Instance, pm: &PlanModel, sol: &Solution) -> PlanReport {
    let n = inst.grid.step_count;
    let dt = inst.grid.step_hours;
    let mut r = PlanReport {
        mode: pm.objective.map_or(0, |o| o.mode()),
        status: status_word(sol.status).to_string(),
        objective: sol.has_values().then_some(sol.objective),
        gap: sol.has_values().then_some(sol.gap),
        nodes: sol.nodes,
        capacity_fraction: None,
        target: match pm.objective {
            Some(PlanObjective::MinCost { target }) => Some(target),
            _ => None,
        },
        budget: match pm.objective {
            Some(PlanObjective::MinEmissions { budget }) if budget.is_finite() => Some(budget),
            _ => None,
        },
        electrified: Vec::new(),
        trucks: Vec::new(),
        stations: Vec::new(),
        substations: Vec::new(),
        costs: CostBreakdown::default(),
        ghg_kg_per_day: inst.total_diesel_emission(),
        step_hours: dt,
        load_profile_kw: vec![0.0; n],
        battery_capacities_kwh: Vec::new(),
        total_charged_kwh: 0.0,
        mode1_max: None,
        warnings: pm.warnings.clone(),
    };
    if !sol.has_values() {
        return r;
    }
    let v = &sol.values;
    let val = |id: milp::VarId| v[id.index()];
    let x: Vec<f64> = pm.vars.x.iter().map(|&id| val(id).round()).collect();
    let p: Vec<Vec<f64>> = pm.vars.p.iter().map(|row| row.iter().map(|&id| val(id)).collect()).collect();

    for (i, tr) in inst.trucks.iter().enumerate() {
        let charged: f64 = p[i].iter().map(|kw| kw * dt).sum();
        let electrified = x[i] > 0.5;
        let battery = if electrified { val(pm.vars.ecap[i]) } else { 0.0 };
        for t in 0..n {
            r.load_profile_kw[t] += p[i][t];
        }
        r.total_charged_kwh += charged;
        if electrified {
            r.electrified.push(tr.id.clone());
            r.battery_capacities_kwh.push(battery);
        }
        r.trucks.push(TruckPlan {
            id: tr.id.clone(),
            electrified,
            battery_kwh: battery,
            charged_kwh: charged,
            consumption_kwh: tr.daily_consumption(),
        });
    }

    let rates = utilization(inst, pm, v);
    for (j, st) in inst.stations.iter().enumerate() {
        let cap = pm.vars.pchs.get(&j).map_or(0.0, |&id| val(id));
        let deployed = cap > PLAN_TOL;
        let energy: f64 = (0..n)
            .map(|t| pm.vars.load.get(&(j, t)).map_or(0.0, |&id| val(id)) * dt)
            .sum();
        let substation = pm
            .subsets
            .k_j[j]
            .iter()
            .filter(|&&(k, _)| pm.vars.gamma.get(&(j, k)).is_some_and(|&g| val(g) > 0.5))
            .max_by(|a, b| {
                val(pm.vars.flow[&(j, a.0)]).total_cmp(&val(pm.vars.flow[&(j, b.0)])).then(b.0.cmp(&a.0))
            })
            .map(|&(k, _)| inst.substations[k].id.clone());
        let mut chargers = Vec::new();
        if let (Some(tv), Some((cat, _))) = (&pm.tier_vars, &pm.options.tiers) {
            for (m, tier) in cat.tiers.iter().enumerate() {
                if let Some(&id) = tv.installed.get(&(m + 1, j)) {
                    chargers.push(ChargerCount {
                        kw: tier.kw,
                        count: val(id).round().max(0.0) as u32,
                    });
                }
            }
        }
        r.stations.push(StationPlan {
            id: st.id.clone(),
            kind: st.kind.as_str().to_string(),
            deployed,
            capacity_kw: if deployed { cap } else { 0.0 },
            substation: if deployed { substation } else { None },
            energy_kwh: energy,
            utilization: if deployed { rates[j] } else { None },
            chargers,
        });
    }

    for (k, sub) in inst.substations.iter().enumerate() {
        let flow: f64 = pm.vars.flow.iter().filter(|((_, kk), _)| *kk == k).map(|(_, &id)| val(id)).sum();
        let upgraded = pm.vars.phat_upg.get(&k).is_some_and(|&h| val(h) > 0.5);
        r.substations.push(SubstationPlan {
            id: sub.id.clone(),
            capacity_kw: sub.remaining_capacity,
            flow_kw: flow,
            upgraded,
            upgrade_kw: pm.vars.pupg.get(&k).map_or(0.0, |&id| val(id)),
        });
    }

    if let Some(c) = &pm.costs {
        let (truck, charging, power) = (c.truck.eval(v), c.charging.eval(v), c.power.eval(v));
        r.costs = CostBreakdown {
            truck,
            charging,
            power,
            total: truck + charging + power,
        };
    }
    r.ghg_kg_per_day = ghg(inst, &x, &p);
    r
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub model: PlanModel,
    pub solution: Solution,
    pub report: PlanReport,
}

impl RunOutcome {
    pub fn status(&self) -> SolveStatus {
        self.solution.status
    }
}

pub fn solve_plan(inst: &Instance, opts: &ScenarioOptions, objective: PlanObjective) -> Result<RunOutcome, ScenarioError> {
    let model = build_plan(inst, opts.build.clone(), objective)?;
    let solution = solve_milp(&model.ir, &opts.solver);
    let report = extract_report(inst, &model, &solution);
    Ok(RunOutcome {
        model,
        solution,
        report,
    })
}

#[derive(Debug, Clone)]
pub struct Mode1Result {
    pub fraction: f64,
    pub max_trucks: Option<usize>,
    pub outcome: RunOutcome,
}

/// Most trucks that can be electrified with `fraction` of every substation's
/// remaining capacity and no upgrades.
pub fn run_mode1(inst: &Instance, fraction: f64, opts: &ScenarioOptions) -> Result<Mode1Result, ScenarioError> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(ScenarioError::Fraction(fraction));
    }
    let scaled = inst.with_capacity_fraction(fraction);
    let mut outcome = solve_plan(&scaled, opts, PlanObjective::MaxTrucks)?;
    outcome.report.capacity_fraction = Some(fraction);
    let max_trucks = outcome.solution.has_values().then(|| outcome.solution.objective.round() as usize);
    Ok(Mode1Result {
        fraction,
        max_trucks,
        outcome,
    })
}

/// Mode 1 at each fraction, ascending. Fails if the counts ever decrease
/// between optimal runs.
pub fn run_mode1_sweep(inst: &Instance, fractions: &[f64], opts: &ScenarioOptions) -> Result<Vec<Mode1Result>, ScenarioError> {
    let mut fr = fractions.to_vec();
    fr.sort_by(f64::total_cmp);
    let mut out: Vec<Mode1Result> = Vec::new();
    for f in fr {
        let r = run_mode1(inst, f, opts)?;
        if let (Some(prev), Some(now)) = (out.last(), r.max_trucks) {
            if prev.outcome.status().is_optimal() && r.outcome.status().is_optimal() && prev.max_trucks > Some(now) {
                return Err(ScenarioError::NotMonotone(format!(
                    "{} trucks at fraction {} but {now} at {f}",
                    prev.max_trucks.unwrap_or(0),
                    prev.fraction
                )));
            }
        }
        out.push(r);
    }
    Ok(out)
}

/// Cheapest plan electrifying at least `target` trucks. An infeasible
/// target carries the Mode 1 maximum in the report.
pub fn run_mode2(inst: &Instance, target: usize, opts: &ScenarioOptions) -> Result<RunOutcome, ScenarioError> {
    let mut out = solve_plan(inst, opts, PlanObjective::MinCost { target })?;
    if out.solution.status == SolveStatus::Infeasible {
        let m1 = run_mode1(inst, 1.0, opts)?;
        out.report.mode1_max = m1.max_trucks;
    }
    Ok(out)
}

pub fn run_mode3(inst: &Instance, budget: f64, opts: &ScenarioOptions) -> Result<RunOutcome, ScenarioError> {
    solve_plan(inst, opts, PlanObjective::MinEmissions { budget })
}

#[derive(Debug, Clone)]
pub struct YearOutcome {
    pub year: i32,
    pub target: usize,
    pub outcome: RunOutcome,
}

/// Yearly Mode 2 solves in which every asset chosen in one year is kept in
/// all later years.
pub fn run_mode2_years(inst: &Instance, targets: &[(i32, usize)], opts: &ScenarioOptions) -> Result<Vec<YearOutcome>, ScenarioError> {
    let mut out: Vec<YearOutcome> = Vec::new();
    for &(year, target) in targets {
        let mut model = build_plan(inst, opts.build.clone(), PlanObjective::MinCost { target })?;
        if let Some(prev) = out.last().filter(|p| p.outcome.solution.has_values()) {
            commit(&mut model, &prev.outcome.model, &prev.outcome.solution.values)?;
        }
        let solution = solve_milp(&model.ir, &opts.solver);
        let report = extract_report(inst, &model, &solution);
        out.push(YearOutcome {
            year,
            target,
            outcome: RunOutcome {
                model,
                solution,
                report,
            },
        });
    }
    Ok(out)
}

/// Raises lower bounds of `next` to the levels chosen in `prev`.
fn commit(next: &mut PlanModel, prev: &PlanModel, values: &[f64]) -> Result<(), ScenarioError> {
    let mut pairs: Vec<(milp::VarId, milp::VarId)> = Vec::new();
    pairs.extend(prev.vars.x.iter().copied().zip(next.vars.x.iter().copied()));
    pairs.extend(prev.vars.ecap.iter().copied().zip(next.vars.ecap.iter().copied()));
    for (a, b) in [
        (&prev.vars.pchs, &next.vars.pchs),
        (&prev.vars.deployed, &next.vars.deployed),
        (&prev.vars.phat_upg, &next.vars.phat_upg),
        (&prev.vars.pupg_var, &next.vars.pupg_var),
    ] {
        pairs.extend(a.iter().filter_map(|(k, &v)| b.get(k).map(|&w| (v, w))));
    }
    pairs.extend(
        prev.vars
            .gamma
            .iter()
            .filter_map(|(k, &v)| next.vars.gamma.get(k).map(|&w| (v, w))),
    );
    for (from, to) in pairs {
        let var = next.ir.var(to).clone();
        let level = if var.kind.is_integral() {
            values[from.index()].round()
        } else {
            // A hair of slack keeps solver noise from making the year infeasible.
            (values[from.index()] - 1e-7).max(var.lower)
        };
        if level > var.lower {
            next.ir.set_bounds(to, level.min(var.upper), var.upper).map_err(crate::error::BuildError::from)?;
        }
    }
    Ok(())
}

/// Invariants every optimal plan must satisfy; returns a description of
/// each failure.
pub fn check_plan_invariants(inst: &Instance, pm: &PlanModel, values: &[f64]) -> Vec<String> {
    let mut bad = Vec::new();
    let val = |id: milp::VarId| values[id.index()];
    let n = inst.grid.step_count;
    let dt = inst.grid.step_hours;
    let tol = PLAN_TOL;

    for (i, tr) in inst.trucks.iter().enumerate() {
        let x = val(pm.vars.x[i]).round();
        let gained: f64 = (0..n).map(|t| pm.eta * tr.stop_fraction[t] * dt * val(pm.vars.p[i][t])).sum();
        let used = x * tr.daily_consumption();
        if (gained - used).abs() > 1e-6 {
            bad.push(format!("truck {}: cyclic energy residual {:e} kWh", tr.id, gained - used));
        }
        for t in 0..n {
            let active: Vec<usize> = pm.subsets.j_it[i][t]
                .iter()
                .copied()
                .filter(|&j| val(pm.vars.ptrk[&(i, j, t)]) > tol)
                .collect();
            if active.len() > 1 {
                bad.push(format!("truck {} charges at {} stations in step {t}", tr.id, active.len()));
            }
            let tn = inst.grid.succ(t);
            for &j in &active {
                if !pm.subsets.j_it[i][tn].contains(&j) {
                    continue;
                }
                for &jj in &pm.subsets.j_it[i][tn] {
                    if jj != j && val(pm.vars.ptrk[&(i, jj, tn)]) > tol {
                        bad.push(format!("truck {} switches station {j} -> {jj} mid-session at step {t}", tr.id));
                    }
                }
            }
        }
    }

    for (&(j, t), &load) in &pm.vars.load {
        let cap = val(pm.vars.pchs[&j]);
        if val(load) > cap + tol * cap.max(1.0) {
            bad.push(format!("station {j} step {t}: load {} above capacity {cap}", val(load)));
        }
        let sum: f64 = pm.subsets.i_jt[j][t].iter().map(|&i| val(pm.vars.ptrk[&(i, j, t)])).sum();
        if (sum - val(load)).abs() > tol * sum.max(1.0) {
            bad.push(format!("station {j} step {t}: load does not match truck sum"));
        }
    }
    for (&j, &cap) in &pm.vars.pchs {
        if val(cap) > tol && !pm.subsets.k_j[j].iter().any(|&(k, _)| val(pm.vars.gamma[&(j, k)]) > 0.5) {
            bad.push(format!("station {j} deployed without a substation connection"));
        }
    }
    let par = &inst.params;
    for (&k, &upg) in &pm.vars.pupg {
        let flow: f64 = pm.vars.flow.iter().filter(|((_, kk), _)| *kk == k).map(|(_, &id)| val(id)).sum();
        let limit = inst.substations[k].remaining_capacity + val(upg);
        if flow > limit + tol * limit.max(1.0) {
            bad.push(format!("substation {k}: flow {flow} above capacity plus upgrade {limit}"));
        }
        let ident = val(upg) - par.p_upg_std * par.pf * val(pm.vars.phat_upg[&k]).round() - val(pm.vars.pupg_var[&k]);
        if ident.abs() > tol * val(upg).max(1.0) {
            bad.push(format!("substation {k}: upgrade identity residual {ident:e}"));
        }
    }

    let station_energy: f64 = pm.vars.load.values().map(|&id| val(id) * dt).sum();
    let truck_energy: f64 = pm.vars.p.iter().flatten().map(|&id| val(id) * dt).sum();
    if (station_energy - truck_energy).abs() > tol * truck_energy.max(1.0) {
        bad.push(format!("station energy {station_energy} != truck energy {truck_energy}"));
    }

    if let (Some(PlanObjective::MinCost { .. }), Some(c)) = (pm.objective, &pm.costs) {
        let parts = c.truck.eval(values) + c.charging.eval(values) + c.power.eval(values);
        let obj = pm.ir.objective_value(values);
        if !milp::objectives_match(parts, obj, 1e-6) {
            bad.push(format!("cost breakdown {parts} != objective {obj}"));
        }
    }
    bad
}

fn csv_float(v: f64) -> String {
    format!("{v}")
}

/// Writes `plan.json`, `load_profile.csv`, `battery_hist.csv`,
/// `utilization.csv`, `costs.csv` and `summary.txt` into `dir`.
pub fn emit_report(report: &PlanReport, dir: &Path) -> Result<(), ScenarioError> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("plan.json"), serde_json::to_string_pretty(report)? + "\n")?;

    let mut w = csv::Writer::from_path(dir.join("load_profile.csv"))?;
    w.write_record(["step", "hour", "kw"])?;
    for (t, kw) in report.load_profile_kw.iter().enumerate() {
        w.write_record([t.to_string(), csv_float(t as f64 * report.step_hours), csv_float(*kw)])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join("battery_hist.csv"))?;
    w.write_record(["bin_lo_kwh", "bin_hi_kwh", "trucks"])?;
    for (lo, count) in battery_histogram(&report.battery_capacities_kwh, 100.0) {
        w.write_record([csv_float(lo), csv_float(lo + 100.0), count.to_string()])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join("utilization.csv"))?;
    w.write_record(["station", "capacity_kw", "energy_kwh", "utilization"])?;
    for s in report.stations.iter().filter(|s| s.deployed) {
        w.write_record([
            s.id.clone(),
            csv_float(s.capacity_kw),
            csv_float(s.energy_kwh),
            s.utilization.map(csv_float).unwrap_or_default(),
        ])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join("costs.csv"))?;
    w.write_record(["component", "annual_usd"])?;
    if report.objective.is_some() {
        let c = &report.costs;
        for (k, v) in [("truck", c.truck), ("charging", c.charging), ("power", c.power), ("total", c.total)] {
            w.write_record([k.to_string(), csv_float(v)])?;
        }
    }
    w.flush()?;

    std::fs::write(dir.join("summary.txt"), summary_text(report))?;
    Ok(())
}

/// Counts per `width`-kWh bin, keyed by bin lower edge, ascending.
pub fn battery_histogram(capacities: &[f64], width: f64) -> Vec<(f64, usize)> {
    let mut bins = std::collections::BTreeMap::new();
    for &c in capacities {
        // Capacities sitting on an edge within solver noise go to the bin below.
        let k = ((c - 1e-6) / width).floor().max(0.0) as i64;
        *bins.entry(k).or_insert(0usize) += 1;
    }
    bins.into_iter().map(|(k, n)| (k as f64 * width, n)).collect()
}

pub fn summary_text(r: &PlanReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "mode {}  status {}", r.mode, r.status);
    if let Some(o) = r.objective {
        let _ = writeln!(s, "objective {o:.6}");
    }
    if let Some(f) = r.capacity_fraction {
        let _ = writeln!(s, "capacity fraction {f}");
    }
    if let Some(t) = r.target {
        let _ = writeln!(s, "target {t} trucks");
    }
    if let Some(b) = r.budget {
        let _ = writeln!(s, "budget ${b:.2}/yr");
    }
    if let Some(m) = r.mode1_max {
        let _ = writeln!(s, "most trucks electrifiable without upgrades: {m}");
    }
    let _ = writeln!(s, "electrified {} of {} trucks", r.electrified.len(), r.trucks.len());
    let deployed = r.stations.iter().filter(|x| x.deployed).count();
    let _ = writeln!(s, "stations deployed {deployed}, capacity {:.1} kW", r.stations.iter().map(|x| x.capacity_kw).sum::<f64>());
    let _ = writeln!(s, "substations upgraded {}", r.substations.iter().filter(|x| x.upgraded).count());
    let _ = writeln!(
        s,
        "annual cost ${:.2} (trucks {:.2}, charging {:.2}, power {:.2})",
        r.costs.total, r.costs.truck, r.costs.charging, r.costs.power
    );
    let _ = writeln!(s, "ghg {:.3} kg CO2/day", r.ghg_kg_per_day);
    let _ = writeln!(s, "energy charged {:.3} kWh/day", r.total_charged_kwh);
    for w in &r.warnings {
        let _ = writeln!(s, "note: {w}");
    }
    s
}

pub fn read_report(path: &Path) -> Result<PlanReport, ScenarioError> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}
