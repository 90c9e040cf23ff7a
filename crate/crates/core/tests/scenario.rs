mod common;

use std::collections::BTreeSet;

use common::hand_instance;
use drayplan::milp::SolveStatus;
use drayplan::scenario::{
    battery_histogram, check_plan_invariants, read_report, utilization_rate, REGIONAL_SHARE, STATE_MILESTONES,
};
use drayplan::{
    emit_report, ghg, interpolate_targets, run_mode1, run_mode1_sweep, run_mode2, run_mode2_years, run_mode3,
    Instance, ScenarioError, ScenarioOptions, TimeGrid,
};

fn opts() -> ScenarioOptions {
    ScenarioOptions::default()
}

fn six_hundred_pair(sub_kw: f64) -> Instance {
    let c = 600.0 * 0.95f64.sqrt();
    let row = (vec![1.0, 0.0, 0.0, 0.0], vec![0.0, c, 0.0, 0.0]);
    hand_instance(
        TimeGrid::new(4, 1.0).unwrap(),
        &[row.clone(), row],
        1,
        &[sub_kw],
        &[(0, 0, 0), (1, 0, 0)],
        &[(0, 0, 1.0)],
    )
}

#[test]
fn mode1_counts_and_fraction_checks() {
    let inst = six_hundred_pair(1000.0);
    assert_eq!(run_mode1(&inst, 1.0, &opts()).unwrap().max_trucks, Some(1));
    assert_eq!(run_mode1(&inst, 0.5, &opts()).unwrap().max_trucks, Some(0));
    assert_eq!(run_mode1(&six_hundred_pair(1200.0), 1.0, &opts()).unwrap().max_trucks, Some(2));
    for f in [0.0, -0.1, 1.5, f64::NAN] {
        assert!(matches!(run_mode1(&inst, f, &opts()), Err(ScenarioError::Fraction(_))));
    }
    let sweep = run_mode1_sweep(&six_hundred_pair(1200.0), &[1.0, 0.25, 0.5], &opts()).unwrap();
    let got: Vec<(f64, Option<usize>)> = sweep.iter().map(|r| (r.fraction, r.max_trucks)).collect();
    assert_eq!(got, vec![(0.25, Some(0)), (0.5, Some(1)), (1.0, Some(2))]);
    assert_eq!(sweep[1].outcome.report.capacity_fraction, Some(0.5));
}

#[test]
fn mode2_pays_for_the_upgrade() {
    let inst = six_hundred_pair(1000.0);
    let out = run_mode2(&inst, 2, &opts()).unwrap();
    assert_eq!(out.status(), SolveStatus::Optimal);
    let r = &out.report;
    assert_eq!(r.electrified, vec!["truck-0", "truck-1"]);
    assert!(r.substations[0].upgraded);
    assert!((r.substations[0].flow_kw - 1200.0).abs() < 1e-6);
    assert!(r.stations[0].deployed);
    assert!((r.stations[0].capacity_kw - 1200.0).abs() < 1e-6);
    assert_eq!(r.stations[0].substation.as_deref(), Some("sub-0"));
    let energy = 2.0 * 365.0 * 0.130 * 600.0;
    let want = 2.0 * 36_988.0 + energy + 106_781.0 + 107.0 * 1200.0 + 115_723.0 + 460_703.0;
    assert!((r.costs.total - want).abs() < 1e-4 * want, "{} vs {want}", r.costs.total);
    assert!((r.objective.unwrap() - r.costs.total).abs() < 1e-6 * want);
    assert!((r.total_charged_kwh - 1200.0).abs() < 1e-6);
    assert_eq!(r.stations[0].utilization, Some(0.25));
    assert!(check_plan_invariants(&inst, &out.model, &out.solution.values).is_empty());
}

#[test]
fn infeasible_target_reports_mode1_maximum() {
    let inst = six_hundred_pair(1000.0);
    let out = run_mode2(&inst, 3, &opts()).unwrap();
    assert_eq!(out.status(), SolveStatus::Infeasible);
    assert_eq!(out.report.mode1_max, Some(1));
    assert_eq!(out.report.status, "infeasible");
    assert!(out.report.objective.is_none());
    assert!(drayplan::scenario::summary_text(&out.report).contains("without upgrades: 1"));
}

#[test]
fn mode3_budget_trades_cost_for_emissions() {
    let inst = six_hundred_pair(1200.0);
    let diesel = inst.total_diesel_emission();
    let zero = run_mode3(&inst, 0.0, &opts()).unwrap();
    assert!(zero.report.electrified.is_empty());
    assert!((zero.report.ghg_kg_per_day - diesel).abs() < 1e-9);
    let mut prev = f64::INFINITY;
    for budget in [0.0, 100_000.0, 300_000.0, 500_000.0, f64::INFINITY] {
        let out = run_mode3(&inst, budget, &opts()).unwrap();
        assert_eq!(out.status(), SolveStatus::Optimal);
        let g = out.report.ghg_kg_per_day;
        assert!((g - out.report.objective.unwrap()).abs() < 1e-6);
        assert!(g <= prev + 1e-9, "budget {budget}");
        if budget.is_finite() {
            assert!(out.report.costs.total <= budget + 1e-6 * budget.max(1.0));
        }
        prev = g;
    }
    // Unlimited budget electrifies both trucks.
    let all = run_mode3(&inst, f64::INFINITY, &opts()).unwrap();
    assert_eq!(all.report.electrified.len(), 2);
    assert!(all.report.budget.is_none());
}

#[test]
fn ghg_examples() {
    let inst = six_hundred_pair(1000.0);
    let zeros = vec![vec![0.0; 4]; 2];
    assert_eq!(ghg(&inst, &[0.0, 0.0], &zeros), inst.total_diesel_emission());
    let mut p = zeros.clone();
    p[0][0] = 600.0;
    let want = inst.trucks[1].diesel_emission + 0.25 * 600.0;
    assert!((ghg(&inst, &[1.0, 0.0], &p) - want).abs() < 1e-12);
}

#[test]
fn utilization_examples() {
    assert_eq!(utilization_rate(&[100.0, 0.0, 50.0, 50.0], 100.0, 1.0), Some(0.5));
    assert_eq!(utilization_rate(&[10.0], 0.0, 1.0), None);
    assert_eq!(utilization_rate(&[0.0, 0.0], 40.0, 0.25), Some(0.0));
}

#[test]
fn target_interpolation() {
    let t = |y| interpolate_targets(&STATE_MILESTONES, REGIONAL_SHARE, y).unwrap();
    assert_eq!(t(2030), 15_086);
    assert_eq!(t(2024), 629);
    assert_eq!(t(2035), 22_000);
    assert_eq!(t(2027), 7_166);
    assert!(matches!(
        interpolate_targets(&STATE_MILESTONES, REGIONAL_SHARE, 2040),
        Err(ScenarioError::YearOutOfSpan { .. })
    ));
    assert!(matches!(
        interpolate_targets(&[(2030, 1.0), (2025, 2.0)], 1.0, 2027),
        Err(ScenarioError::Milestones)
    ));
    let years: Vec<u64> = (2024..=2035).map(t).collect();
    assert!(years.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn emitted_files_round_trip() {
    let inst = six_hundred_pair(1000.0);
    let out = run_mode2(&inst, 2, &opts()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    emit_report(&out.report, dir.path()).unwrap();
    assert_eq!(read_report(&dir.path().join("plan.json")).unwrap(), out.report);

    let mut rdr = csv::Reader::from_path(dir.path().join("load_profile.csv")).unwrap();
    let kw: Vec<f64> = rdr.records().map(|r| r.unwrap()[2].parse().unwrap()).collect();
    assert_eq!(kw.len(), 4);
    let energy: f64 = kw.iter().map(|k| k * out.report.step_hours).sum();
    assert!((energy - out.report.total_charged_kwh).abs() < 1e-9);

    let costs = std::fs::read_to_string(dir.path().join("costs.csv")).unwrap();
    assert_eq!(costs.lines().count(), 5);
    let util = std::fs::read_to_string(dir.path().join("utilization.csv")).unwrap();
    assert_eq!(util.lines().count(), 2);
    let hist = std::fs::read_to_string(dir.path().join("battery_hist.csv")).unwrap();
    assert_eq!(hist.lines().nth(1).unwrap(), "800,900,2");
    assert!(std::fs::read_to_string(dir.path().join("summary.txt")).unwrap().contains("electrified 2 of 2"));
}

#[test]
fn empty_plan_still_writes_every_file() {
    let out = run_mode2(&six_hundred_pair(1000.0), 5, &opts()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    emit_report(&out.report, dir.path()).unwrap();
    for f in ["plan.json", "load_profile.csv", "battery_hist.csv", "utilization.csv", "costs.csv", "summary.txt"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let costs = std::fs::read_to_string(dir.path().join("costs.csv")).unwrap();
    assert_eq!(costs.trim_end(), "component,annual_usd");
    assert_eq!(read_report(&dir.path().join("plan.json")).unwrap(), out.report);
}

#[test]
fn histogram_edges() {
    assert_eq!(battery_histogram(&[900.0, 900.0000001, 950.0, 1000.5], 100.0), vec![(800.0, 2), (900.0, 1), (1000.0, 1)]);
    assert!(battery_histogram(&[], 100.0).is_empty());
}

#[test]
fn solved_plans_satisfy_invariants() {
    for seed in 0..20 {
        let (_, inst) = common::oracle_fixture(seed);
        let runs = [
            run_mode1(&inst, 1.0, &opts()).unwrap().outcome,
            run_mode2(&inst, 1, &opts()).unwrap(),
            run_mode3(&inst, 400_000.0, &opts()).unwrap(),
        ];
        for out in runs {
            if !out.solution.has_values() {
                continue;
            }
            let bad = check_plan_invariants(&inst, &out.model, &out.solution.values);
            assert!(bad.is_empty(), "seed {seed} mode {}: {bad:?}", out.report.mode);
        }
    }
}

#[test]
fn invariant_check_catches_overload() {
    let inst = six_hundred_pair(1200.0);
    let out = run_mode2(&inst, 2, &opts()).unwrap();
    let mut v = out.solution.values.clone();
    v[out.model.vars.pchs[&0].index()] = 500.0;
    let bad = check_plan_invariants(&inst, &out.model, &v);
    assert!(bad.iter().any(|m| m.contains("above capacity")), "{bad:?}");
}

#[test]
fn yearly_targets_keep_earlier_assets() {
    for seed in 0..8 {
        let (_, inst) = common::oracle_fixture(seed);
        let n = inst.trucks.len();
        let targets: Vec<(i32, usize)> = (0..=n).map(|k| (2025 + k as i32, k)).collect();
        let years = run_mode2_years(&inst, &targets, &opts()).unwrap();
        let mut prev_cost = f64::NEG_INFINITY;
        let mut prev_set: BTreeSet<String> = BTreeSet::new();
        for y in &years {
            if !y.outcome.solution.has_values() {
                break;
            }
            let r = &y.outcome.report;
            assert!(r.electrified.len() >= y.target);
            let set: BTreeSet<String> = r.electrified.iter().cloned().collect();
            assert!(set.is_superset(&prev_set), "seed {seed} year {}", y.year);
            assert!(r.costs.total >= prev_cost - 1e-6 * prev_cost.abs().max(1.0));
            prev_cost = r.costs.total;
            prev_set = set;
        }
    }
}

#[test]
fn higher_target_never_costs_less() {
    for seed in 0..10 {
        let (_, inst) = common::oracle_fixture(seed);
        let mut prev = f64::NEG_INFINITY;
        for target in 0..=inst.trucks.len() {
            let out = run_mode2(&inst, target, &opts()).unwrap();
            if !out.status().is_optimal() {
                break;
            }
            let z = out.solution.objective;
            assert!(z >= prev - 1e-6 * z.abs().max(1.0), "seed {seed} target {target}");
            prev = z;
        }
    }
}
