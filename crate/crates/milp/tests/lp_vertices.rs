//! Simplex optimum against exhaustive vertex enumeration on dense LPs.

use milp::{solve_lp, ConstraintSense, LinExpr, LpStatus, ModelIr, Name, ObjectiveSense};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Dense {
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    c: Vec<f64>,
    ub: Vec<f64>,
}

/// Solves the square system by Gaussian elimination; None if singular.
fn solve_square(mut m: Vec<Vec<f64>>, mut r: Vec<f64>) -> Option<Vec<f64>> {
    let n = r.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() < 1e-10 {
            return None;
        }
        m.swap(col, piv);
        r.swap(col, piv);
        for row in 0..n {
            if row != col {
                let f = m[row][col] / m[col][col];
                for k in col..n {
                    m[row][k] -= f * m[col][k];
                }
                r[row] -= f * r[col];
            }
        }
    }
    Some((0..n).map(|i| r[i] / m[i][i]).collect())
}

fn combinations(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::new(), f);
}

/// max c x over {A x <= b, 0 <= x <= ub} by visiting every basic point.
fn vertex_oracle(d: &Dense) -> Option<f64> {
    let n = d.c.len();
    // all inequalities as (row, rhs): A rows, -x <= 0, x <= ub
    let mut rows: Vec<(Vec<f64>, f64)> = d.a.iter().cloned().zip(d.b.iter().copied()).collect();
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = -1.0;
        rows.push((e, 0.0));
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        rows.push((e, d.ub[j]));
    }
    let mut best: Option<f64> = None;
    combinations(rows.len(), n, &mut |idx| {
        let m: Vec<Vec<f64>> = idx.iter().map(|&i| rows[i].0.clone()).collect();
        let r: Vec<f64> = idx.iter().map(|&i| rows[i].1).collect();
        if let Some(x) = solve_square(m, r) {
            let feasible = rows
                .iter()
                .all(|(a, b)| a.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>() <= b + 1e-9);
            if feasible {
                let v: f64 = d.c.iter().zip(&x).map(|(p, q)| p * q).sum();
                best = Some(best.map_or(v, |b: f64| b.max(v)));
            }
        }
    });
    best
}

#[test]
fn twenty_random_dense_lps_match_vertex_enumeration() {
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=6);
        let m = rng.gen_range(2..=6);
        let d = Dense {
            a: (0..m).map(|_| (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect()).collect(),
            b: (0..m).map(|_| rng.gen_range(-2.0..10.0)).collect(),
            c: (0..n).map(|_| rng.gen_range(-3.0..5.0)).collect(),
            ub: (0..n).map(|_| rng.gen_range(1.0..8.0)).collect(),
        };
        let mut ir = ModelIr::new("dense");
        let xs: Vec<_> = (0..n)
            .map(|j| ir.add_continuous(Name::new("x", &[j]), 0.0, d.ub[j]).unwrap())
            .collect();
        for (i, row) in d.a.iter().enumerate() {
            let t: Vec<_> = xs.iter().copied().zip(row.iter().copied()).collect();
            ir.add_constraint(Name::new("r", &[i]), &t, ConstraintSense::Le, d.b[i]).unwrap();
        }
        let mut obj = LinExpr::new();
        for (j, &x) in xs.iter().enumerate() {
            obj.add_term(x, d.c[j]);
        }
        ir.set_objective(ObjectiveSense::Maximize, obj).unwrap();

        let lp = solve_lp(&ir);
        match vertex_oracle(&d) {
            None => assert_eq!(lp.status, LpStatus::Infeasible, "seed {seed}"),
            Some(best) => {
                assert_eq!(lp.status, LpStatus::Optimal, "seed {seed}");
                assert!((lp.objective - best).abs() <= 1e-8 * best.abs().max(1.0), "seed {seed}: {} vs {best}", lp.objective);
                // weak duality for maximization
                assert!(lp.dual_bound >= lp.objective - 1e-8, "seed {seed}");
            }
        }
    }
}

#[test]
fn farkas_certificate_on_infeasible_system() {
    // x + y <= 1, x + y >= 3
    let mut ir = ModelIr::new("f");
    let x = ir.add_continuous(Name::scalar("x"), 0.0, f64::INFINITY).unwrap();
    let y = ir.add_continuous(Name::scalar("y"), 0.0, f64::INFINITY).unwrap();
    ir.add_constraint(Name::scalar("a"), &[(x, 1.0), (y, 1.0)], ConstraintSense::Le, 1.0).unwrap();
    ir.add_constraint(Name::scalar("b"), &[(x, 1.0), (y, 1.0)], ConstraintSense::Ge, 3.0).unwrap();
    let s = solve_lp(&ir);
    assert_eq!(s.status, LpStatus::Infeasible);
    let yv = s.certificate.expect("certificate");
    // the multiplier combination cancels the columns and leaves a contradiction
    let col = yv[0] + yv[1];
    assert!(col.abs() < 1e-9);
    let rhs = yv[0] * 1.0 + yv[1] * 3.0;
    assert!(rhs.abs() > 1e-6);
}

#[test]
fn small_gap_under_a_large_coefficient_is_infeasible() {
    // After row scaling by 1000 the gap is 1e-6; it must not be absorbed.
    for (gap, want) in [(1e-3, LpStatus::Infeasible), (-1e-3, LpStatus::Optimal)] {
        let mut ir = ModelIr::new("gap");
        let p = ir.add_continuous(Name::scalar("p"), 0.0, 350.0).unwrap();
        let up = ir.add_continuous(Name::scalar("up"), 1.0, 1.0).unwrap();
        ir.add_constraint(Name::scalar("lin2"), &[(p, 1.0), (up, -1000.0)], ConstraintSense::Ge, 350.0 - 1000.0 + gap)
            .unwrap();
        assert_eq!(solve_lp(&ir).status, want, "gap {gap}");
    }
}
