//! Feasibility checking of a candidate point against a model.

use serde::{Deserialize, Serialize};

use crate::model::ModelIr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ViolationKind {
    Constraint,
    Bound,
    Integrality,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Constraint tag or variable name.
    pub tag: String,
    pub residual: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub violations: Vec<Violation>,
}

impl ViolationReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn tags(&self) -> Vec<&str> {
        self.violations.iter().map(|v| v.tag.as_str()).collect()
    }

    pub fn constraint_tags(&self) -> Vec<&str> {
        self.violations
            .iter()
            .filter(|v| v.kind == ViolationKind::Constraint)
            .map(|v| v.tag.as_str())
            .collect()
    }
}

/// Lists every row, bound and integrality requirement violated by `values`.
///
/// Row residuals are compared against `tol * max(1, |rhs|, max|coef|)`, the
/// same scale the simplex works in after row scaling.
pub fn check_solution(ir: &ModelIr, values: &[f64], tol: f64) -> ViolationReport {
    let mut out = Vec::new();
    if values.len() != ir.num_vars() {
        out.push(Violation {
            kind: ViolationKind::Bound,
            tag: format!("<expected {} values, got {}>", ir.num_vars(), values.len()),
            residual: f64::INFINITY,
        });
        return ViolationReport { violations: out };
    }
    for c in ir.constraints() {
        let r = c.violation(values);
        let scale = c
            .terms
            .iter()
            .fold(1f64.max(c.rhs.abs()), |a, &(_, k)| a.max(k.abs()));
        if !(r <= tol * scale) {
            out.push(Violation {
                kind: ViolationKind::Constraint,
                tag: c.tag.to_string(),
                residual: r,
            });
        }
    }
    for (v, &x) in ir.vars().iter().zip(values) {
        let r = (v.lower - x).max(x - v.upper).max(0.0);
        if !(r <= tol * 1f64.max(x.abs())) {
            out.push(Violation {
                kind: ViolationKind::Bound,
                tag: v.name.to_string(),
                residual: r,
            });
        }
        if v.kind.is_integral() {
            let f = (x - x.round()).abs();
            if !(f <= tol) {
                out.push(Violation {
                    kind: ViolationKind::Integrality,
                    tag: v.name.to_string(),
                    residual: f,
                });
            }
        }
    }
    ViolationReport { violations: out }
}
