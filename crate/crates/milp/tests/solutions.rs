//! Solution files and feasibility reports.

mod common;

use milp::mps::write_mps;
use milp::solution_file::{import_solution, write_solution};
use milp::{
    brute_force_oracle, check_solution, ConstraintSense, LinExpr, ModelIr, Name, ObjectiveSense,
    SolutionFileError, SolveStatus, ViolationKind,
};

#[test]
fn own_oracle_solution_round_trips() {
    for seed in 0..10 {
        let ir = common::random_model(seed, 6, 4, 3);
        let sol = brute_force_oracle(&ir).unwrap();
        if sol.status != SolveStatus::Optimal {
            continue;
        }
        assert!(check_solution(&ir, &sol.values, 1e-9).is_feasible());
        // plain names
        let text = write_solution(&ir, &sol, None);
        let back = import_solution(&text, &ir, None, 1e-9).unwrap();
        assert!(back.report.is_feasible());
        assert_eq!(back.solution.objective, sol.objective);
        // names as written in an exported file
        let (_, map) = write_mps(&ir);
        let text = write_solution(&ir, &sol, Some(&map));
        let back = import_solution(&text, &ir, Some(&map), 1e-9).unwrap();
        assert_eq!(back.solution.values, sol.values);
    }
}

#[test]
fn missing_and_unknown_names_are_listed() {
    let ir = common::random_model(3, 4, 2, 1);
    let sol = brute_force_oracle(&ir).unwrap();
    let text = write_solution(&ir, &sol, None);
    let without: String = text.lines().filter(|l| !l.starts_with("v[2] ")).map(|l| format!("{l}\n")).collect();
    match import_solution(&without, &ir, None, 1e-9) {
        Err(SolutionFileError::MissingValues(names)) => assert_eq!(names, vec!["v[2]".to_string()]),
        other => panic!("{other:?}"),
    }
    let extra = format!("{text}ghost 1\n");
    match import_solution(&extra, &ir, None, 1e-9) {
        Err(SolutionFileError::UnknownNames(names)) => assert_eq!(names, vec!["ghost".to_string()]),
        other => panic!("{other:?}"),
    }
    assert!(import_solution("v[0] abc\n", &ir, None, 1e-9).is_err());
}

#[test]
fn report_names_violated_rows_bounds_and_integrality() {
    let mut ir = ModelIr::new("c");
    let x = ir.add_continuous(Name::scalar("x"), 0.0, 1.0).unwrap();
    let b = ir.add_binary(Name::scalar("b")).unwrap();
    ir.add_constraint(Name::new("cap", &[0]), &[(x, 1.0), (b, -1.0)], ConstraintSense::Le, 0.0).unwrap();
    ir.add_constraint(Name::new("eq", &[1]), &[(x, 1.0)], ConstraintSense::Eq, 0.5).unwrap();
    ir.set_objective(ObjectiveSense::Minimize, LinExpr::new()).unwrap();
    assert!(check_solution(&ir, &[0.5, 1.0], 1e-9).is_feasible());
    let r = check_solution(&ir, &[0.7, 0.5], 1e-9);
    assert_eq!(r.constraint_tags(), vec!["cap[0]", "eq[1]"]);
    assert!(r.violations.iter().any(|v| v.kind == ViolationKind::Integrality && v.tag == "b"));
    let r = check_solution(&ir, &[1.5, 1.0], 1e-9);
    assert!(r.violations.iter().any(|v| v.kind == ViolationKind::Bound && v.tag == "x"));
}
