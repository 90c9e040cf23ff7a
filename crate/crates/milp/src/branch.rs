//! Best-bound branch-and-bound over the revised simplex.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::model::ModelIr;
use crate::simplex::{CompiledLp, LpOptions, LpSolution, LpStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branching {
    MostFractional,
    PseudoCost,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverParams {
    pub feas_tol: f64,
    pub int_tol: f64,
    pub rel_gap: f64,
    pub node_limit: Option<usize>,
    pub time_limit: Option<Duration>,
    pub branching: Branching,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            feas_tol: 1e-6,
            int_tol: 1e-6,
            rel_gap: 1e-6,
            node_limit: None,
            time_limit: None,
            branching: Branching::MostFractional,
        }
    }
}

impl SolverParams {
    pub(crate) fn lp_options(&self) -> LpOptions {
        LpOptions {
            feas_tol: (self.feas_tol * 1e-3).max(1e-10),
            ..LpOptions::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Node or time limit reached; `values` holds the incumbent if any.
    LimitHit,
    NumericalFailure,
}

impl SolveStatus {
    pub fn is_optimal(self) -> bool {
        self == SolveStatus::Optimal
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Solution {
    pub status: SolveStatus,
    /// One value per model variable; empty when no feasible point is known.
    pub values: Vec<f64>,
    /// Model-sense objective of `values` (NaN when empty).
    pub objective: f64,
    /// Proven bound in the model's sense.
    pub bound: f64,
    pub gap: f64,
    pub nodes: usize,
    pub wall_time: Duration,
    /// Objective of every accepted incumbent, in order.
    pub incumbent_history: Vec<f64>,
    pub diagnostic: Option<String>,
}

impl Solution {
    pub fn has_values(&self) -> bool {
        !self.values.is_empty()
    }

    pub(crate) fn empty(status: SolveStatus, started: Instant) -> Self {
        Self {
            status,
            values: Vec::new(),
            objective: f64::NAN,
            bound: f64::NAN,
            gap: f64::INFINITY,
            nodes: 0,
            wall_time: started.elapsed(),
            incumbent_history: Vec::new(),
            diagnostic: None,
        }
    }
}

pub(crate) fn relative_gap(incumbent: f64, bound: f64) -> f64 {
    if !incumbent.is_finite() || !bound.is_finite() {
        return f64::INFINITY;
    }
    (incumbent - bound).abs() / 1f64.max(incumbent.abs())
}

struct Node {
    id: usize,
    /// Internal (minimization) LP bound inherited from the parent.
    bound: f64,
    lower: Vec<f64>,
    upper: Vec<f64>,
    /// Branching that created this node: (var, went_up, parent_frac).
    origin: Option<(usize, bool, f64)>,
}

impl PartialEq for Node {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Node {
    // BinaryHeap is a max-heap: smallest bound, then smallest id, on top.
    fn cmp(&self, o: &Self) -> Ordering {
        o.bound
            .total_cmp(&self.bound)
            .then_with(|| o.id.cmp(&self.id))
    }
}

#[derive(Default, Clone, Copy)]
struct PseudoCost {
    down_sum: f64,
    down_n: u32,
    up_sum: f64,
    up_n: u32,
}

/// Solves `ir` to proven optimality within `params.rel_gap`, or reports the
/// limit that stopped the search together with the best incumbent.
pub fn solve_milp(ir: &ModelIr, params: &SolverParams) -> Solution {
    let started = Instant::now();
    let lp = CompiledLp::new(ir);
    let opts = params.lp_options();
    let n = lp.num_vars();
    let int_vars: Vec<usize> = (0..n).filter(|&j| lp.integer[j]).collect();

    let mut lower = lp.lower.clone();
    let mut upper = lp.upper.clone();
    for &j in &int_vars {
        lower[j] = (lower[j] - params.int_tol).ceil();
        upper[j] = (upper[j] + params.int_tol).floor();
        if lower[j] > upper[j] {
            let mut s = Solution::empty(SolveStatus::Infeasible, started);
            s.diagnostic = Some(format!("integer variable {j} has no integral value in its bounds"));
            return s;
        }
    }

    let mut heap = BinaryHeap::new();
    let mut next_id = 0usize;
    heap.push(Node {
        id: next_id,
        bound: f64::NEG_INFINITY,
        lower,
        upper,
        origin: None,
    });
    next_id += 1;

    let mut incumbent: Option<(f64, Vec<f64>)> = None;
    let mut history = Vec::new();
    let mut pseudo = vec![PseudoCost::default(); n];
    let mut nodes = 0usize;
    let mut numerical_trouble: Option<String> = None;
    let mut limit_hit = false;

    let prune_at = |inc: &Option<(f64, Vec<f64>)>| -> f64 {
        match inc {
            Some((v, _)) => v - params.rel_gap * 1f64.max(v.abs()),
            None => f64::INFINITY,
        }
    };

    while let Some(node) = heap.pop() {
        if node.bound >= prune_at(&incumbent) {
            continue;
        }
        if params.node_limit.is_some_and(|l| nodes >= l)
            || params.time_limit.is_some_and(|l| started.elapsed() >= l)
        {
            heap.push(node);
            limit_hit = true;
            break;
        }
        nodes += 1;
        let sol = solve_node(&lp, &node.lower, &node.upper, &opts);
        match sol.status {
            LpStatus::Optimal => {}
            LpStatus::Infeasible => continue,
            LpStatus::Unbounded => {
                if node.id == 0 {
                    let mut s = Solution::empty(SolveStatus::Unbounded, started);
                    s.nodes = nodes;
                    s.diagnostic = Some("LP relaxation is unbounded".into());
                    return s;
                }
                numerical_trouble = Some(format!("node {} LP unbounded below a bounded root", node.id));
                continue;
            }
            LpStatus::IterationLimit | LpStatus::NumericalFailure => {
                numerical_trouble = Some(format!(
                    "node {}: {}",
                    node.id,
                    sol.diagnostic.unwrap_or_else(|| format!("{:?}", sol.status))
                ));
                continue;
            }
        }
        let z = lp.to_internal_objective(sol.objective);

        if let Some((var, up, frac)) = node.origin {
            if node.bound.is_finite() {
                let pc = &mut pseudo[var];
                let deg = (z - node.bound).max(0.0);
                if up {
                    pc.up_sum += deg / (1.0 - frac).max(1e-6);
                    pc.up_n += 1;
                } else {
                    pc.down_sum += deg / frac.max(1e-6);
                    pc.down_n += 1;
                }
            }
        }

        if z >= prune_at(&incumbent) {
            continue;
        }

        let pick = match params.branching {
            Branching::MostFractional => most_fractional(&sol.x, &int_vars, params.int_tol),
            Branching::PseudoCost => pseudo_cost_pick(&sol.x, &int_vars, params.int_tol, &pseudo),
        };
        let Some(j) = pick else {
            // integral: polish with integers pinned to their rounded values
            let (obj, vals) = polish(&lp, &node.lower, &node.upper, &sol, &int_vars, &opts);
            let zi = lp.to_internal_objective(obj);
            let better = match &incumbent {
                None => true,
                Some((best, _)) => zi < *best,
            };
            if better {
                history.push(obj);
                incumbent = Some((zi, vals));
            }
            continue;
        };

        let v = sol.x[j];
        let frac = v - v.floor();
        let mut down_upper = node.upper.clone();
        down_upper[j] = v.floor();
        let mut up_lower = node.lower.clone();
        up_lower[j] = v.ceil();
        heap.push(Node {
            id: next_id,
            bound: z,
            lower: node.lower.clone(),
            upper: down_upper,
            origin: Some((j, false, frac)),
        });
        heap.push(Node {
            id: next_id + 1,
            bound: z,
            lower: up_lower,
            upper: node.upper,
            origin: Some((j, true, frac)),
        });
        next_id += 2;
    }

    let open_bound = heap
        .iter()
        .map(|nd| nd.bound)
        .fold(f64::INFINITY, f64::min);
    let mut out = Solution::empty(SolveStatus::Infeasible, started);
    out.nodes = nodes;
    out.incumbent_history = history;
    match incumbent {
        Some((zi, vals)) => {
            let bound_internal = if limit_hit { open_bound.min(zi) } else { zi };
            out.objective = lp.to_model_objective(zi);
            out.bound = lp.to_model_objective(bound_internal);
            out.gap = relative_gap(zi, bound_internal);
            out.values = vals;
            out.status = if limit_hit {
                SolveStatus::LimitHit
            } else {
                SolveStatus::Optimal
            };
        }
        None => {
            out.status = if limit_hit {
                SolveStatus::LimitHit
            } else {
                SolveStatus::Infeasible
            };
            if limit_hit && open_bound.is_finite() {
                out.bound = lp.to_model_objective(open_bound);
            }
        }
    }
    if let Some(msg) = numerical_trouble {
        // a pruned subtree may have hidden a better point
        if out.status != SolveStatus::LimitHit {
            out.status = SolveStatus::NumericalFailure;
        }
        out.diagnostic = Some(msg);
    }
    out.wall_time = started.elapsed();
    out
}

fn solve_node(lp: &CompiledLp, lower: &[f64], upper: &[f64], opts: &LpOptions) -> LpSolution {
    let sol = lp.solve(lower, upper, opts);
    if matches!(sol.status, LpStatus::NumericalFailure | LpStatus::IterationLimit) {
        let retry = LpOptions {
            refactor_every: 8,
            bland_after: 50,
            max_iter: opts.max_iter * 4,
            ..opts.clone()
        };
        return lp.solve(lower, upper, &retry);
    }
    sol
}

fn most_fractional(x: &[f64], ints: &[usize], tol: f64) -> Option<usize> {
    let mut best = None;
    let mut best_score = tol;
    for &j in ints {
        let f = x[j] - x[j].floor();
        let score = f.min(1.0 - f);
        if score > best_score {
            best_score = score;
            best = Some(j);
        }
    }
    best
}

fn pseudo_cost_pick(x: &[f64], ints: &[usize], tol: f64, pc: &[PseudoCost]) -> Option<usize> {
    let (mut sum, mut cnt) = (0.0, 0u32);
    for p in pc {
        sum += p.down_sum + p.up_sum;
        cnt += p.down_n + p.up_n;
    }
    let avg = if cnt > 0 { sum / cnt as f64 } else { 1.0 };
    let mut best = None;
    let mut best_score = f64::NEG_INFINITY;
    for &j in ints {
        let f = x[j] - x[j].floor();
        if f.min(1.0 - f) <= tol {
            continue;
        }
        let p = &pc[j];
        let down = if p.down_n > 0 { p.down_sum / p.down_n as f64 } else { avg };
        let up = if p.up_n > 0 { p.up_sum / p.up_n as f64 } else { avg };
        let score = (f * down).max(1e-6) * ((1.0 - f) * up).max(1e-6);
        if score > best_score {
            best_score = score;
            best = Some(j);
        }
    }
    best
}

fn polish(
    lp: &CompiledLp,
    lower: &[f64],
    upper: &[f64],
    sol: &LpSolution,
    ints: &[usize],
    opts: &LpOptions,
) -> (f64, Vec<f64>) {
    let mut lo = lower.to_vec();
    let mut up = upper.to_vec();
    for &j in ints {
        let r = sol.x[j].round();
        lo[j] = r;
        up[j] = r;
    }
    let fixed = lp.solve(&lo, &up, opts);
    if fixed.status == LpStatus::Optimal {
        let mut vals = fixed.x;
        for &j in ints {
            vals[j] = vals[j].round();
        }
        (fixed.objective, vals)
    } else {
        let mut vals = sol.x.clone();
        for &j in ints {
            vals[j] = vals[j].round();
        }
        (sol.objective, vals)
    }
}
