//! Bounded-variable revised primal simplex.
//!
//! Rows are brought to equality form `A x + s = b` with one slack per row
//! whose bounds encode the row sense. Rows whose slack starts outside its
//! bounds receive an artificial column; phase 1 drives those to zero. The
//! basis inverse is kept dense and refactorized periodically, which is the
//! right trade-off for the few-hundred-row models this crate targets.

use crate::model::{ConstraintSense, ModelIr, ObjectiveSense};

#[derive(Debug, Clone)]
pub struct LpOptions {
    /// Primal feasibility tolerance (on row-scaled constraints).
    pub feas_tol: f64,
    /// Relative reduced-cost tolerance.
    pub opt_tol: f64,
    pub max_iter: usize,
    pub refactor_every: usize,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub bland_after: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        Self {
            feas_tol: 1e-9,
            opt_tol: 1e-10,
            max_iter: 100_000,
            refactor_every: 64,
            bland_after: 1000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
    NumericalFailure,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Structural variable values (meaningful when optimal).
    pub x: Vec<f64>,
    /// Objective in the model's own sense, constant included.
    pub objective: f64,
    /// Row duals: sensitivity of the objective to each right-hand side.
    pub duals: Vec<f64>,
    pub reduced_costs: Vec<f64>,
    /// Lagrangian bound implied by `duals`; a lower bound for minimization
    /// and an upper bound for maximization.
    pub dual_bound: f64,
    /// Farkas multipliers (infeasible) or a primal ray (unbounded).
    pub certificate: Option<Vec<f64>>,
    pub iterations: usize,
    pub diagnostic: Option<String>,
}

impl LpSolution {
    fn failed(status: LpStatus, n: usize, m: usize, iterations: usize, diag: Option<String>) -> Self {
        Self {
            status,
            x: vec![f64::NAN; n],
            objective: f64::NAN,
            duals: vec![0.0; m],
            reduced_costs: vec![0.0; n],
            dual_bound: f64::NAN,
            certificate: None,
            iterations,
            diagnostic: diag,
        }
    }
}

/// Row-scaled, column-major copy of a model ready for repeated solves with
/// different variable bounds.
#[derive(Debug, Clone)]
pub struct CompiledLp {
    n: usize,
    m: usize,
    cols: Vec<Vec<(usize, f64)>>,
    row_scale: Vec<f64>,
    rhs: Vec<f64>,
    sense: Vec<ConstraintSense>,
    cost: Vec<f64>,
    obj_sign: f64,
    obj_const: f64,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub integer: Vec<bool>,
}

impl CompiledLp {
    pub fn new(ir: &ModelIr) -> Self {
        let n = ir.num_vars();
        let m = ir.num_constraints();
        let mut row_scale = vec![1.0; m];
        for (i, c) in ir.constraints().iter().enumerate() {
            let mx = c.terms.iter().fold(0.0f64, |acc, &(_, a)| acc.max(a.abs()));
            if mx > 0.0 {
                row_scale[i] = mx;
            }
        }
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        let mut rhs = Vec::with_capacity(m);
        let mut sense = Vec::with_capacity(m);
        for (i, c) in ir.constraints().iter().enumerate() {
            for &(v, a) in &c.terms {
                cols[v.0].push((i, a / row_scale[i]));
            }
            rhs.push(c.rhs / row_scale[i]);
            sense.push(c.sense);
        }
        let obj = ir.objective();
        let obj_sign = match obj.sense {
            ObjectiveSense::Minimize => 1.0,
            ObjectiveSense::Maximize => -1.0,
        };
        let mut cost = vec![0.0; n];
        for &(v, a) in &obj.expr.terms {
            cost[v.0] += obj_sign * a;
        }
        Self {
            n,
            m,
            cols,
            row_scale,
            rhs,
            sense,
            cost,
            obj_sign,
            obj_const: obj.expr.constant,
            lower: ir.vars().iter().map(|v| v.lower).collect(),
            upper: ir.vars().iter().map(|v| v.upper).collect(),
            integer: ir.vars().iter().map(|v| v.kind.is_integral()).collect(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn num_rows(&self) -> usize {
        self.m
    }

    pub fn is_minimize(&self) -> bool {
        self.obj_sign > 0.0
    }

    /// Converts an internal minimization value to the model's sense.
    pub fn to_model_objective(&self, internal: f64) -> f64 {
        self.obj_sign * internal + self.obj_const
    }

    /// Model-sense objective to the internal minimization scale.
    pub fn to_internal_objective(&self, model: f64) -> f64 {
        (model - self.obj_const) * self.obj_sign
    }

    pub fn solve(&self, lower: &[f64], upper: &[f64], opts: &LpOptions) -> LpSolution {
        for j in 0..self.n {
            if lower[j] > upper[j] + opts.feas_tol {
                let mut s = LpSolution::failed(LpStatus::Infeasible, self.n, self.m, 0, None);
                s.diagnostic = Some(format!("variable {j} has crossing bounds"));
                return s;
            }
        }
        Simplex::new(self, lower, upper, opts).run()
    }

    /// Quick necessary-condition check: returns false when some row cannot be
    /// satisfied by any point inside the bounds (activity-bound test).
    pub fn bounds_admit_rows(&self, lower: &[f64], upper: &[f64], tol: f64) -> bool {
        let mut lo_act = vec![0.0f64; self.m];
        let mut hi_act = vec![0.0f64; self.m];
        for j in 0..self.n {
            for &(i, a) in &self.cols[j] {
                let (l, u) = (lower[j], upper[j]);
                if a > 0.0 {
                    lo_act[i] += a * l;
                    hi_act[i] += a * u;
                } else {
                    lo_act[i] += a * u;
                    hi_act[i] += a * l;
                }
            }
        }
        for i in 0..self.m {
            let b = self.rhs[i];
            let ok = match self.sense[i] {
                ConstraintSense::Le => !(lo_act[i] > b + tol),
                ConstraintSense::Ge => !(hi_act[i] < b - tol),
                ConstraintSense::Eq => !(lo_act[i] > b + tol || hi_act[i] < b - tol),
            };
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Solves the continuous relaxation of `ir` with its own bounds.
pub fn solve_lp(ir: &ModelIr) -> LpSolution {
    solve_lp_with(ir, &LpOptions::default())
}

pub fn solve_lp_with(ir: &ModelIr, opts: &LpOptions) -> LpSolution {
    let lp = CompiledLp::new(ir);
    lp.solve(&lp.lower, &lp.upper, opts)
}

const PIVOT_TOL: f64 = 1e-9;
/// Leftover artificial mass phase 1 may end with, in units of `feas_tol`.
const PHASE1_SLACK: f64 = 1e2;
const NOT_BASIC: usize = usize::MAX;

struct Simplex<'a> {
    lp: &'a CompiledLp,
    opts: &'a LpOptions,
    m: usize,
    n_total: usize,
    art_row: Vec<usize>,
    art_sign: Vec<f64>,
    lo: Vec<f64>,
    up: Vec<f64>,
    x: Vec<f64>,
    basis: Vec<usize>,
    pos: Vec<usize>,
    binv: Vec<f64>,
    cost: Vec<f64>,
    iterations: usize,
    since_refactor: usize,
}

enum PhaseOutcome {
    Optimal,
    Unbounded(Vec<f64>),
    IterationLimit,
    Singular,
}

impl<'a> Simplex<'a> {
    fn new(lp: &'a CompiledLp, lower: &[f64], upper: &[f64], opts: &'a LpOptions) -> Self {
        let (n, m) = (lp.n, lp.m);
        let mut lo = Vec::with_capacity(n + 2 * m);
        let mut up = Vec::with_capacity(n + 2 * m);
        let mut x = Vec::with_capacity(n + 2 * m);
        for j in 0..n {
            let (l, u) = (lower[j], upper[j].max(lower[j]));
            lo.push(l);
            up.push(u);
            x.push(if l.is_finite() {
                l
            } else if u.is_finite() {
                u
            } else {
                0.0
            });
        }
        // slacks
        for i in 0..m {
            let (l, u) = match lp.sense[i] {
                ConstraintSense::Le => (0.0, f64::INFINITY),
                ConstraintSense::Ge => (f64::NEG_INFINITY, 0.0),
                ConstraintSense::Eq => (0.0, 0.0),
            };
            lo.push(l);
            up.push(u);
            x.push(0.0);
        }
        // residual b - A x_N
        let mut r = lp.rhs.clone();
        for j in 0..n {
            if x[j] != 0.0 {
                for &(i, a) in &lp.cols[j] {
                    r[i] -= a * x[j];
                }
            }
        }
        let mut basis = vec![0usize; m];
        let mut art_row = Vec::new();
        let mut art_sign = Vec::new();
        for i in 0..m {
            let s = n + i;
            if r[i] >= lo[s] - opts.feas_tol && r[i] <= up[s] + opts.feas_tol {
                x[s] = r[i];
                basis[i] = s;
            } else {
                // slack parks at its violated bound, artificial absorbs the rest
                let bound = if r[i] < lo[s] { lo[s] } else { up[s] };
                x[s] = bound;
                let resid = r[i] - bound;
                let sign = if resid >= 0.0 { 1.0 } else { -1.0 };
                let col = n + m + art_row.len();
                art_row.push(i);
                art_sign.push(sign);
                lo.push(0.0);
                up.push(f64::INFINITY);
                x.push(resid.abs());
                basis[i] = col;
            }
        }
        let n_total = n + m + art_row.len();
        let mut pos = vec![NOT_BASIC; n_total];
        for (r, &c) in basis.iter().enumerate() {
            pos[c] = r;
        }
        let mut s = Self {
            lp,
            opts,
            m,
            n_total,
            art_row,
            art_sign,
            lo,
            up,
            x,
            basis,
            pos,
            binv: vec![0.0; m * m],
            cost: vec![0.0; n_total],
            iterations: 0,
            since_refactor: 0,
        };
        // initial basis is diagonal (+-1)
        for r in 0..m {
            let c = s.basis[r];
            let d = if c >= n + m { s.art_sign[c - n - m] } else { 1.0 };
            s.binv[r * m + r] = 1.0 / d;
        }
        s
    }

    #[inline]
    fn for_col(&self, j: usize, mut f: impl FnMut(usize, f64)) {
        let n = self.lp.n;
        if j < n {
            for &(i, a) in &self.lp.cols[j] {
                f(i, a);
            }
        } else if j < n + self.m {
            f(j - n, 1.0);
        } else {
            let k = j - n - self.m;
            f(self.art_row[k], self.art_sign[k]);
        }
    }

    fn refactor(&mut self) -> bool {
        let m = self.m;
        // dense B, then Gauss-Jordan with partial pivoting into binv
        let mut b = vec![0.0; m * m];
        for r in 0..m {
            let c = self.basis[r];
            self.for_col(c, |i, a| b[i * m + r] = a);
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for col in 0..m {
            let mut piv = col;
            let mut best = b[col * m + col].abs();
            for row in col + 1..m {
                let v = b[row * m + col].abs();
                if v > best {
                    best = v;
                    piv = row;
                }
            }
            if best < 1e-12 {
                return false;
            }
            if piv != col {
                for k in 0..m {
                    b.swap(col * m + k, piv * m + k);
                    inv.swap(col * m + k, piv * m + k);
                }
            }
            let d = b[col * m + col];
            for k in 0..m {
                b[col * m + k] /= d;
                inv[col * m + k] /= d;
            }
            for row in 0..m {
                if row != col {
                    let f = b[row * m + col];
                    if f != 0.0 {
                        for k in 0..m {
                            b[row * m + k] -= f * b[col * m + k];
                            inv[row * m + k] -= f * inv[col * m + k];
                        }
                    }
                }
            }
        }
        self.binv = inv;
        self.since_refactor = 0;
        self.recompute_basics();
        true
    }

    fn recompute_basics(&mut self) {
        let m = self.m;
        let mut r = self.lp.rhs.clone();
        for j in 0..self.n_total {
            if self.pos[j] == NOT_BASIC && self.x[j] != 0.0 {
                let xj = self.x[j];
                self.for_col(j, |i, a| r[i] -= a * xj);
            }
        }
        for row in 0..m {
            let mut v = 0.0;
            let base = row * m;
            for k in 0..m {
                v += self.binv[base + k] * r[k];
            }
            let c = self.basis[row];
            self.x[c] = v;
        }
    }

    fn duals(&self) -> Vec<f64> {
        let m = self.m;
        let mut y = vec![0.0; m];
        for r in 0..m {
            let cb = self.cost[self.basis[r]];
            if cb != 0.0 {
                let base = r * m;
                for k in 0..m {
                    y[k] += cb * self.binv[base + k];
                }
            }
        }
        y
    }

    fn reduced_cost(&self, j: usize, y: &[f64]) -> f64 {
        let mut d = self.cost[j];
        self.for_col(j, |i, a| d -= y[i] * a);
        d
    }

    fn run_phase(&mut self) -> PhaseOutcome {
        let m = self.m;
        let ftol = self.opts.feas_tol;
        let cmax = self.cost.iter().fold(0.0f64, |a, &c| a.max(c.abs()));
        let dtol = self.opts.opt_tol * cmax.max(1.0);
        let mut degenerate = 0usize;
        let mut bland = false;
        let mut alpha = vec![0.0; m];
        loop {
            if self.iterations >= self.opts.max_iter {
                return PhaseOutcome::IterationLimit;
            }
            if self.since_refactor >= self.opts.refactor_every && !self.refactor() {
                return PhaseOutcome::Singular;
            }
            let y = self.duals();

            // pricing
            let mut enter = NOT_BASIC;
            let mut enter_dir = 0.0;
            let mut best = 0.0;
            for j in 0..self.n_total {
                if self.pos[j] != NOT_BASIC {
                    continue;
                }
                let (l, u) = (self.lo[j], self.up[j]);
                if u - l <= 0.0 {
                    continue;
                }
                let d = self.reduced_cost(j, &y);
                let xj = self.x[j];
                let can_inc = xj < u;
                let can_dec = xj > l;
                let (score, dir) = if d < -dtol && can_inc {
                    (-d, 1.0)
                } else if d > dtol && can_dec {
                    (d, -1.0)
                } else {
                    continue;
                };
                if bland {
                    enter = j;
                    enter_dir = dir;
                    break;
                }
                if score > best {
                    best = score;
                    enter = j;
                    enter_dir = dir;
                }
            }
            if enter == NOT_BASIC {
                return PhaseOutcome::Optimal;
            }

            // alpha = B^-1 a_enter
            alpha.iter_mut().for_each(|v| *v = 0.0);
            {
                let binv = &self.binv;
                let mut col: Vec<(usize, f64)> = Vec::new();
                self.for_col(enter, |i, a| col.push((i, a)));
                for (r, out) in alpha.iter_mut().enumerate() {
                    let base = r * m;
                    let mut v = 0.0;
                    for &(i, a) in &col {
                        v += binv[base + i] * a;
                    }
                    *out = v;
                }
            }

            // ratio test
            let flip = self.up[enter] - self.lo[enter];
            let (leave_row, theta) = if bland {
                self.ratio_bland(&alpha, enter_dir)
            } else {
                self.ratio_harris(&alpha, enter_dir, ftol)
            };
            let (leave_row, theta) = match leave_row {
                Some(r) if theta <= flip => (Some(r), theta),
                _ if flip.is_finite() => (None, flip),
                Some(r) => (Some(r), theta),
                None => {
                    let mut ray = vec![0.0; self.n_total];
                    ray[enter] = enter_dir;
                    for r in 0..m {
                        ray[self.basis[r]] = -enter_dir * alpha[r];
                    }
                    return PhaseOutcome::Unbounded(ray);
                }
            };

            self.iterations += 1;
            if theta <= 1e-12 {
                degenerate += 1;
                if degenerate > self.opts.bland_after {
                    bland = true;
                }
            } else {
                degenerate = 0;
            }

            // primal update
            if theta != 0.0 {
                for r in 0..m {
                    let c = self.basis[r];
                    self.x[c] -= enter_dir * alpha[r] * theta;
                }
            }
            match leave_row {
                None => {
                    self.x[enter] = if enter_dir > 0.0 {
                        self.up[enter]
                    } else {
                        self.lo[enter]
                    };
                }
                Some(r) => {
                    self.x[enter] += enter_dir * theta;
                    let leaving = self.basis[r];
                    let delta = -enter_dir * alpha[r];
                    self.x[leaving] = if delta < 0.0 {
                        self.lo[leaving]
                    } else {
                        self.up[leaving]
                    };
                    self.pos[leaving] = NOT_BASIC;
                    self.basis[r] = enter;
                    self.pos[enter] = r;
                    // eta update of the dense inverse
                    let piv = alpha[r];
                    let base = r * m;
                    for k in 0..m {
                        self.binv[base + k] /= piv;
                    }
                    for q in 0..m {
                        if q != r {
                            let f = alpha[q];
                            if f != 0.0 {
                                let qb = q * m;
                                for k in 0..m {
                                    self.binv[qb + k] -= f * self.binv[base + k];
                                }
                            }
                        }
                    }
                    self.since_refactor += 1;
                }
            }
        }
    }

    /// Bound that basic row `r` runs into when moving by `delta` per unit step.
    #[inline]
    fn blocking_bound(&self, r: usize, delta: f64) -> Option<f64> {
        let c = self.basis[r];
        if delta < 0.0 {
            let l = self.lo[c];
            l.is_finite().then_some(l)
        } else {
            let u = self.up[c];
            u.is_finite().then_some(u)
        }
    }

    fn ratio_harris(&self, alpha: &[f64], dir: f64, ftol: f64) -> (Option<usize>, f64) {
        let mut theta_max = f64::INFINITY;
        for (r, &a) in alpha.iter().enumerate() {
            if a.abs() < PIVOT_TOL {
                continue;
            }
            let delta = -dir * a;
            if let Some(b) = self.blocking_bound(r, delta) {
                let xb = self.x[self.basis[r]];
                let t = ((b - xb).abs() + ftol) / delta.abs();
                let t = if (delta < 0.0 && xb < b) || (delta > 0.0 && xb > b) {
                    ftol / delta.abs()
                } else {
                    t
                };
                theta_max = theta_max.min(t);
            }
        }
        if !theta_max.is_finite() {
            return (None, f64::INFINITY);
        }
        let mut best_row = None;
        let mut best_piv = 0.0;
        let mut best_t = 0.0;
        for (r, &a) in alpha.iter().enumerate() {
            if a.abs() < PIVOT_TOL {
                continue;
            }
            let delta = -dir * a;
            if let Some(b) = self.blocking_bound(r, delta) {
                let xb = self.x[self.basis[r]];
                let t = ((b - xb) / delta).max(0.0);
                if t <= theta_max && a.abs() > best_piv {
                    best_piv = a.abs();
                    best_row = Some(r);
                    best_t = t;
                }
            }
        }
        (best_row, best_t)
    }

    fn ratio_bland(&self, alpha: &[f64], dir: f64) -> (Option<usize>, f64) {
        let mut best_row: Option<usize> = None;
        let mut best_t = f64::INFINITY;
        for (r, &a) in alpha.iter().enumerate() {
            if a.abs() < PIVOT_TOL {
                continue;
            }
            let delta = -dir * a;
            if let Some(b) = self.blocking_bound(r, delta) {
                let xb = self.x[self.basis[r]];
                let t = ((b - xb) / delta).max(0.0);
                let better = match best_row {
                    None => true,
                    Some(br) => {
                        t < best_t - 1e-12
                            || (t <= best_t + 1e-12 && self.basis[r] < self.basis[br])
                    }
                };
                if better {
                    best_row = Some(r);
                    best_t = t;
                }
            }
        }
        (best_row, best_t)
    }

    fn run(mut self) -> LpSolution {
        let (n, m) = (self.lp.n, self.m);
        let n_art = self.art_row.len();
        if n_art > 0 {
            for k in 0..n_art {
                self.cost[n + m + k] = 1.0;
            }
            match self.run_phase() {
                PhaseOutcome::Optimal => {}
                PhaseOutcome::IterationLimit => {
                    return LpSolution::failed(LpStatus::IterationLimit, n, m, self.iterations, None)
                }
                PhaseOutcome::Singular => {
                    return LpSolution::failed(
                        LpStatus::NumericalFailure,
                        n,
                        m,
                        self.iterations,
                        Some("singular basis in phase 1".into()),
                    )
                }
                PhaseOutcome::Unbounded(..) => {
                    return LpSolution::failed(
                        LpStatus::NumericalFailure,
                        n,
                        m,
                        self.iterations,
                        Some("phase 1 reported unbounded".into()),
                    )
                }
            }
            if !self.refactor() {
                return LpSolution::failed(
                    LpStatus::NumericalFailure,
                    n,
                    m,
                    self.iterations,
                    Some("singular basis after phase 1".into()),
                );
            }
            let infeas: f64 = (0..n_art).map(|k| self.x[n + m + k].max(0.0)).sum();
            let rhs_scale = self.lp.rhs.iter().fold(1.0f64, |a, &b| a.max(b.abs()));
            if infeas > PHASE1_SLACK * self.opts.feas_tol * rhs_scale {
                let y = self.duals();
                let mut sol =
                    LpSolution::failed(LpStatus::Infeasible, n, m, self.iterations, None);
                sol.certificate = Some(
                    y.iter()
                        .zip(&self.lp.row_scale)
                        .map(|(v, s)| v / s)
                        .collect(),
                );
                return sol;
            }
            for k in 0..n_art {
                let c = n + m + k;
                self.cost[c] = 0.0;
                self.up[c] = 0.0;
                if self.pos[c] == NOT_BASIC {
                    self.x[c] = 0.0;
                }
            }
        }
        for j in 0..n {
            self.cost[j] = self.lp.cost[j];
        }
        let mut retried = false;
        loop {
            match self.run_phase() {
                PhaseOutcome::Optimal => {}
                PhaseOutcome::IterationLimit => {
                    return LpSolution::failed(LpStatus::IterationLimit, n, m, self.iterations, None)
                }
                PhaseOutcome::Singular => {
                    return LpSolution::failed(
                        LpStatus::NumericalFailure,
                        n,
                        m,
                        self.iterations,
                        Some("singular basis in phase 2".into()),
                    )
                }
                PhaseOutcome::Unbounded(ray) => {
                    let mut sol = LpSolution::failed(LpStatus::Unbounded, n, m, self.iterations, None);
                    sol.certificate = Some(ray[..n].to_vec());
                    return sol;
                }
            }
            // re-verify on a fresh factorization before claiming optimality
            if !self.refactor() {
                return LpSolution::failed(
                    LpStatus::NumericalFailure,
                    n,
                    m,
                    self.iterations,
                    Some("singular basis at optimum".into()),
                );
            }
            match self.max_bound_violation() {
                v if v <= self.verify_tol() => break,
                v if !retried => {
                    retried = true;
                    let _ = v;
                    continue;
                }
                v => {
                    return LpSolution::failed(
                        LpStatus::NumericalFailure,
                        n,
                        m,
                        self.iterations,
                        Some(format!("primal residual {v:.3e} after refactorization")),
                    )
                }
            }
        }
        self.finish()
    }

    fn verify_tol(&self) -> f64 {
        (self.opts.feas_tol * 1e3).max(1e-7)
    }

    fn max_bound_violation(&self) -> f64 {
        let mut worst = 0.0f64;
        for j in 0..self.n_total {
            let v = self.x[j];
            let scale = 1.0 + v.abs();
            let viol = (self.lo[j] - v).max(v - self.up[j]).max(0.0) / scale;
            worst = worst.max(viol);
        }
        worst
    }

    fn finish(self) -> LpSolution {
        let (n, m) = (self.lp.n, self.m);
        let y = self.duals();
        let cmax = self.cost.iter().fold(0.0f64, |a, &c| a.max(c.abs()));
        let dtol = 1e3 * self.opts.opt_tol * cmax.max(1.0);

        let mut x: Vec<f64> = self.x[..n].to_vec();
        for j in 0..n {
            x[j] = x[j].clamp(self.lo[j], self.up[j]);
        }
        let internal: f64 = (0..n).map(|j| self.lp.cost[j] * x[j]).sum();

        // Lagrangian bound over structurals and slacks
        let mut lag: f64 = y.iter().zip(&self.lp.rhs).map(|(a, b)| a * b).sum();
        let mut reduced = vec![0.0; n];
        for j in 0..n + m {
            let d = self.reduced_cost(j, &y);
            if j < n {
                reduced[j] = self.lp.obj_sign * d;
            }
            if d.abs() <= dtol {
                continue;
            }
            let b = if d > 0.0 { self.lo[j] } else { self.up[j] };
            if b.is_finite() {
                lag += d * b;
            } else {
                lag = f64::NEG_INFINITY;
                break;
            }
        }

        let duals = y
            .iter()
            .zip(&self.lp.row_scale)
            .map(|(v, s)| self.lp.obj_sign * v / s)
            .collect();
        LpSolution {
            status: LpStatus::Optimal,
            x,
            objective: self.lp.to_model_objective(internal),
            duals,
            reduced_costs: reduced,
            dual_bound: self.lp.to_model_objective(lag),
            certificate: None,
            iterations: self.iterations,
            diagnostic: None,
        }
    }
}
