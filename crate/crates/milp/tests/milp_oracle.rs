//! Branch-and-bound against exhaustive enumeration on random small models.

mod common;

use milp::{
    brute_force_oracle, check_solution, objectives_match, solve_lp, solve_milp, Branching,
    LpStatus, ModelIr, SolveStatus, SolverParams,
};
use proptest::prelude::*;

fn agree(ir: &ModelIr, params: &SolverParams) {
    let bb = solve_milp(ir, params);
    let or = brute_force_oracle(ir).unwrap();
    match or.status {
        SolveStatus::Optimal => {
            assert_eq!(bb.status, SolveStatus::Optimal, "{}", ir.name);
            assert!(
                objectives_match(bb.objective, or.objective, 1e-6),
                "{}: bb {} oracle {}",
                ir.name,
                bb.objective,
                or.objective
            );
            assert!(check_solution(ir, &bb.values, 1e-6).is_feasible());
            assert!(check_solution(ir, &or.values, 1e-6).is_feasible());
            assert!(bb.gap <= params.rel_gap + 1e-12);
        }
        other => assert_eq!(bb.status, other, "{}", ir.name),
    }
}

#[test]
fn fifty_random_models_match_the_oracle() {
    for seed in 0..50 {
        let ir = common::random_model(seed, 8, 5, 5);
        agree(&ir, &SolverParams::default());
        agree(
            &ir,
            &SolverParams {
                branching: Branching::PseudoCost,
                ..Default::default()
            },
        );
    }
}

#[test]
fn all_integers_fixed_equals_lp() {
    for seed in 100..110 {
        let mut ir = common::random_model(seed, 6, 4, 3);
        for v in ir.integer_vars().collect::<Vec<_>>() {
            let lo = ir.var(v).lower;
            ir.fix(v, lo).unwrap();
        }
        let lp = solve_lp(&ir);
        let bb = solve_milp(&ir, &SolverParams::default());
        match lp.status {
            LpStatus::Optimal => {
                assert_eq!(bb.status, SolveStatus::Optimal);
                assert!(objectives_match(lp.objective, bb.objective, 1e-9));
            }
            LpStatus::Infeasible => assert_eq!(bb.status, SolveStatus::Infeasible),
            s => panic!("unexpected {s:?}"),
        }
    }
}

#[test]
fn no_integers_oracle_equals_lp() {
    let ir = common::random_model(7, 6, 4, 0);
    let lp = solve_lp(&ir);
    let or = brute_force_oracle(&ir).unwrap();
    assert_eq!(lp.status, LpStatus::Optimal);
    assert_eq!(or.objective, lp.objective);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn incumbents_improve_monotonically(seed in 0u64..10_000) {
        let ir = common::random_model(seed, 7, 5, 5);
        let s = solve_milp(&ir, &SolverParams::default());
        let min = ir.objective().sense == milp::ObjectiveSense::Minimize;
        for w in s.incumbent_history.windows(2) {
            if min { prop_assert!(w[1] < w[0]); } else { prop_assert!(w[1] > w[0]); }
        }
    }

    #[test]
    fn solves_are_deterministic(seed in 0u64..10_000) {
        let ir = common::random_model(seed, 7, 5, 5);
        let a = solve_milp(&ir, &SolverParams::default());
        let b = solve_milp(&ir, &SolverParams::default());
        prop_assert_eq!(a.status, b.status);
        prop_assert_eq!(a.objective.to_bits(), b.objective.to_bits());
        prop_assert_eq!(a.nodes, b.nodes);
        let o1 = brute_force_oracle(&ir).unwrap();
        let o2 = brute_force_oracle(&ir).unwrap();
        prop_assert_eq!(o1.objective.to_bits(), o2.objective.to_bits());
        prop_assert_eq!(o1.values.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
                        o2.values.iter().map(|v| v.to_bits()).collect::<Vec<_>>());
    }

    #[test]
    fn lp_weak_duality(seed in 0u64..10_000) {
        let ir = common::random_model(seed, 8, 6, 0);
        let s = solve_lp(&ir);
        if s.status == LpStatus::Optimal {
            let tol = 1e-7 * s.objective.abs().max(1.0);
            match ir.objective().sense {
                milp::ObjectiveSense::Maximize => prop_assert!(s.dual_bound >= s.objective - tol),
                milp::ObjectiveSense::Minimize => prop_assert!(s.dual_bound <= s.objective + tol),
            }
            prop_assert!(check_solution(&ir, &s.x, 1e-7).is_feasible());
        }
    }
}

#[test]
fn random_models_are_mostly_feasible() {
    let feasible = (0..50)
        .filter(|&s| brute_force_oracle(&common::random_model(s, 8, 5, 5)).unwrap().status == SolveStatus::Optimal)
        .count();
    assert!(feasible >= 35, "only {feasible} feasible");
}
