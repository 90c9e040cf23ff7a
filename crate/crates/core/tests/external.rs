//! A HiGHS solution of one fixture, frozen under `tests/fixtures`.
//! Regenerate from that directory with `python3 solve_highs.py highs_plan.mps highs_plan.sol`.

mod common;

use std::path::Path;

use drayplan::milp::mps::write_mps;
use drayplan::milp::solution_file::import_solution;
use drayplan::milp::names::NameMap;
use drayplan::milp::{brute_force_oracle, objectives_match, SolveStatus};
use drayplan::{build_plan, BuildOptions, Instance, PlanObjective};

fn fixture(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)).unwrap()
}

#[test]
fn frozen_highs_solution_matches_the_oracle() {
    let (seed, inst) = common::oracle_fixture(2);
    assert_eq!(seed, 2);
    assert_eq!(inst, Instance::from_json(&fixture("highs_plan.instance.json")).unwrap());
    let pm = build_plan(&inst, BuildOptions::default(), PlanObjective::MinCost { target: 1 }).unwrap();
    let (mps, map) = write_mps(&pm.ir);
    assert_eq!(mps, fixture("highs_plan.mps"), "model drifted from the frozen export");
    assert_eq!(map, NameMap::from_json(&fixture("highs_plan.names.json")).unwrap());

    let imported = import_solution(&fixture("highs_plan.sol"), &pm.ir, Some(&map), 1e-6).unwrap();
    assert!(imported.report.is_feasible(), "{:?}", imported.report.tags());
    let oracle = brute_force_oracle(&pm.ir).unwrap();
    assert_eq!(oracle.status, SolveStatus::Optimal);
    let z = imported.solution.objective;
    assert!(objectives_match(z, oracle.objective, 1e-5), "highs {z} oracle {}", oracle.objective);
}
