//! Exhaustive enumeration of integer assignments, used to verify the
//! branch-and-bound on tiny models.

use std::time::Instant;

use rayon::prelude::*;

use crate::branch::{SolveStatus, Solution};
use crate::error::OracleError;
use crate::model::ModelIr;
use crate::simplex::{CompiledLp, LpOptions, LpStatus};

pub const MAX_FREE_INTEGERS: usize = 24;
pub const MAX_ASSIGNMENTS: u128 = 1 << 24;
const CHUNK: u64 = 256;
const TIE_TOL: f64 = 1e-9;

#[derive(Clone)]
struct Best {
    z: f64,
    x: Vec<f64>,
}

#[derive(Clone, Default)]
struct Partial {
    best: Option<Best>,
    unbounded: bool,
    failure: Option<String>,
}

impl Partial {
    fn offer(&mut self, cand: Best) {
        let take = match &self.best {
            None => true,
            Some(b) => cand.z < b.z - TIE_TOL * 1f64.max(b.z.abs()),
        };
        if take {
            self.best = Some(cand);
        }
    }

    fn merge(mut self, other: Partial) -> Partial {
        if let Some(b) = other.best {
            self.offer(b);
        }
        self.unbounded |= other.unbounded;
        if self.failure.is_none() {
            self.failure = other.failure;
        }
        self
    }
}

/// Enumerates every assignment of the free integer variables in
/// lexicographic order (first variable slowest), solving the continuous
/// restriction of each. Among equal objectives the first assignment wins, so
/// the result does not depend on thread scheduling.
pub fn brute_force_oracle(ir: &ModelIr) -> Result<Solution, OracleError> {
    let started = Instant::now();
    let lp = CompiledLp::new(ir);
    let opts = LpOptions::default();
    let mut lower = lp.lower.clone();
    let mut upper = lp.upper.clone();

    let mut free = Vec::new();
    let mut radix = Vec::new();
    for (j, v) in ir.vars().iter().enumerate() {
        if !v.kind.is_integral() {
            continue;
        }
        if !v.lower.is_finite() || !v.upper.is_finite() {
            return Err(OracleError::UnboundedInteger(v.name.to_string()));
        }
        let (lo, hi) = (v.lower.ceil(), v.upper.floor());
        lower[j] = lo;
        upper[j] = hi;
        if hi > lo {
            free.push(j);
            radix.push((hi - lo) as u128 + 1);
        } else if hi < lo {
            return Ok(Solution::empty(SolveStatus::Infeasible, started));
        }
    }
    if free.len() > MAX_FREE_INTEGERS {
        return Err(OracleError::TooManyIntegers {
            count: free.len(),
            limit: MAX_FREE_INTEGERS,
        });
    }
    let total: u128 = radix.iter().product();
    if total > MAX_ASSIGNMENTS {
        return Err(OracleError::TooManyAssignments(total));
    }
    let total = total as u64;

    let eval_chunk = |c: u64| -> Partial {
        let mut part = Partial::default();
        let mut lo = lower.clone();
        let mut hi = upper.clone();
        for index in c * CHUNK..((c + 1) * CHUNK).min(total) {
            let mut rem = index as u128;
            for k in (0..free.len()).rev() {
                let j = free[k];
                let val = lower[j] + (rem % radix[k]) as f64;
                rem /= radix[k];
                lo[j] = val;
                hi[j] = val;
            }
            if !lp.bounds_admit_rows(&lo, &hi, 1e-9) {
                continue;
            }
            let s = lp.solve(&lo, &hi, &opts);
            match s.status {
                LpStatus::Optimal => part.offer(Best {
                    z: lp.to_internal_objective(s.objective),
                    x: s.x,
                }),
                LpStatus::Infeasible => {}
                LpStatus::Unbounded => part.unbounded = true,
                _ => {
                    if part.failure.is_none() {
                        part.failure = Some(format!(
                            "assignment {index}: {}",
                            s.diagnostic.unwrap_or_else(|| format!("{:?}", s.status))
                        ));
                    }
                }
            }
        }
        part
    };

    let chunks = total.div_ceil(CHUNK);
    let parts: Vec<Partial> = (0..chunks).into_par_iter().map(eval_chunk).collect();
    let result = parts.into_iter().fold(Partial::default(), Partial::merge);

    let mut out = Solution::empty(SolveStatus::Infeasible, started);
    out.nodes = total as usize;
    if result.unbounded {
        out.status = SolveStatus::Unbounded;
    } else if let Some(b) = result.best {
        let mut x = b.x;
        for (j, v) in ir.vars().iter().enumerate() {
            if v.kind.is_integral() {
                x[j] = x[j].round();
            }
        }
        out.status = SolveStatus::Optimal;
        out.objective = lp.to_model_objective(b.z);
        out.bound = out.objective;
        out.gap = 0.0;
        out.incumbent_history = vec![out.objective];
        out.values = x;
    }
    if let Some(msg) = result.failure {
        out.status = SolveStatus::NumericalFailure;
        out.diagnostic = Some(msg);
    }
    out.wall_time = started.elapsed();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ConstraintSense::*, LinExpr, Name, ObjectiveSense};

    #[test]
    fn one_binary_is_best_of_two() {
        let mut m = ModelIr::new("o");
        let b = m.add_binary(Name::scalar("b")).unwrap();
        let x = m.add_continuous(Name::scalar("x"), 0.0, 10.0).unwrap();
        m.add_constraint(Name::scalar("c"), &[(x, 1.0), (b, -4.0)], Le, 1.0).unwrap();
        let mut e = LinExpr::new();
        e.add_term(x, 1.0).add_term(b, -2.0);
        m.set_objective(ObjectiveSense::Maximize, e).unwrap();
        let s = brute_force_oracle(&m).unwrap();
        assert_eq!(s.status, SolveStatus::Optimal);
        assert!((s.objective - 3.0).abs() < 1e-12);
        assert_eq!(s.values[0], 1.0);
    }

    #[test]
    fn guard_trips() {
        let mut m = ModelIr::new("o");
        for k in 0..25 {
            m.add_binary(Name::new("b", &[k])).unwrap();
        }
        assert!(matches!(
            brute_force_oracle(&m),
            Err(OracleError::TooManyIntegers { count: 25, .. })
        ));
    }
}
