#![allow(dead_code)]

use milp::{ConstraintSense, LinExpr, ModelIr, Name, ObjectiveSense, VarKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Coefficient with at most three decimals so text round trips are exact.
pub fn coef(rng: &mut ChaCha8Rng, lo: i32, hi: i32) -> f64 {
    rng.gen_range(lo * 1000..=hi * 1000) as f64 / 1000.0
}

/// Random bounded model: `n` columns (some integral when `ints`), `m` rows of
/// mixed sense built around a known feasible point.
pub fn random_model(seed: u64, n: usize, m: usize, ints: usize) -> ModelIr {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ir = ModelIr::new(format!("rnd{seed}"));
    let mut point = Vec::new();
    let mut ids = Vec::new();
    for j in 0..n {
        let kind = if j < ints {
            if rng.gen_bool(0.5) {
                VarKind::Binary
            } else {
                VarKind::Integer
            }
        } else {
            VarKind::Continuous
        };
        let (lo, up) = match kind {
            VarKind::Binary => (0.0, 1.0),
            VarKind::Integer => (0.0, rng.gen_range(1..=3) as f64),
            VarKind::Continuous => {
                let lo = if rng.gen_bool(0.2) { -coef(&mut rng, 0, 5) } else { 0.0 };
                (lo, lo + coef(&mut rng, 1, 10))
            }
        };
        let p = if kind.is_integral() {
            rng.gen_range(lo as i64..=up as i64) as f64
        } else {
            lo + (up - lo) * rng.gen_range(0.0..1.0)
        };
        point.push(p);
        ids.push(ir.add_var(Name::new("v", &[j]), kind, lo, up).unwrap());
    }
    for i in 0..m {
        let mut terms = Vec::new();
        for &id in &ids {
            if rng.gen_bool(0.7) {
                terms.push((id, coef(&mut rng, -5, 5)));
            }
        }
        let act: f64 = terms.iter().map(|&(v, a)| a * point[v.0]).sum();
        let slack = coef(&mut rng, 0, 3);
        // equality rows only over continuous columns, which can absorb rounding
        let all_cont = terms.iter().all(|&(v, _)| ir.var(v).kind == VarKind::Continuous);
        let (sense, rhs) = match rng.gen_range(0..3) {
            0 => (ConstraintSense::Le, (act + slack).ceil()),
            1 => (ConstraintSense::Ge, (act - slack).floor()),
            _ if all_cont && !terms.is_empty() => (ConstraintSense::Eq, (act * 1000.0).round() / 1000.0),
            _ => (ConstraintSense::Le, (act + slack).ceil()),
        };
        ir.add_constraint(Name::new("row", &[i]), &terms, sense, rhs).unwrap();
    }
    let mut obj = LinExpr::constant(coef(&mut rng, -3, 3));
    for &id in &ids {
        obj.add_term(id, coef(&mut rng, -4, 4));
    }
    let sense = if rng.gen_bool(0.5) { ObjectiveSense::Minimize } else { ObjectiveSense::Maximize };
    ir.set_objective(sense, obj).unwrap();
    ir
}
