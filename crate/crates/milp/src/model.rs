//! Solver-agnostic mixed-integer linear model.
//!
//! Variables and constraints carry structured names (`family[i,j,t]`) so that
//! exported files and violation reports stay stable across runs.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// Index of a variable inside a [`ModelIr`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VarId(pub usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Structured identifier: a family name plus integer indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name {
    pub family: String,
    pub indices: Vec<usize>,
}

impl Name {
    pub fn new(family: impl Into<String>, indices: &[usize]) -> Self {
        Self {
            family: family.into(),
            indices: indices.to_vec(),
        }
    }

    pub fn scalar(family: impl Into<String>) -> Self {
        Self::new(family, &[])
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.family)?;
        if !self.indices.is_empty() {
            f.write_str("[")?;
            for (k, i) in self.indices.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{i}")?;
            }
            f.write_str("]")?;
        }
        Ok(())
    }
}

impl FromStr for Name {
    type Err = std::convert::Infallible;

    /// Parses `family[1,2]`. Anything that does not match that shape is kept
    /// verbatim as a scalar family so arbitrary external names survive.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(open) = s.find('[') {
            if let Some(body) = s[open + 1..].strip_suffix(']') {
                let parsed: Result<Vec<usize>, _> = if body.is_empty() {
                    Ok(Vec::new())
                } else {
                    body.split(',').map(|p| p.trim().parse::<usize>()).collect()
                };
                if let Ok(indices) = parsed {
                    if open > 0 && !indices.is_empty() {
                        return Ok(Name::new(&s[..open], &indices));
                    }
                }
            }
        }
        Ok(Name::scalar(s))
    }
}

impl Serialize for Name {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Name {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Ok(s.parse().unwrap())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarKind {
    Continuous,
    Binary,
    Integer,
}

impl VarKind {
    pub fn is_integral(self) -> bool {
        !matches!(self, VarKind::Continuous)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Variable {
    pub name: Name,
    pub kind: VarKind,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstraintSense {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

impl fmt::Display for ConstraintSense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstraintSense::Le => "<=",
            ConstraintSense::Eq => "=",
            ConstraintSense::Ge => ">=",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub tag: Name,
    pub terms: Vec<(VarId, f64)>,
    pub sense: ConstraintSense,
    pub rhs: f64,
}

impl Constraint {
    pub fn activity(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, a)| a * values[v.0]).sum()
    }

    /// Amount by which `values` violates this row (0 when satisfied).
    pub fn violation(&self, values: &[f64]) -> f64 {
        let lhs = self.activity(values);
        match self.sense {
            ConstraintSense::Le => (lhs - self.rhs).max(0.0),
            ConstraintSense::Ge => (self.rhs - lhs).max(0.0),
            ConstraintSense::Eq => (lhs - self.rhs).abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveSense {
    Minimize,
    Maximize,
}

/// A linear expression `Σ a·x + constant`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LinExpr {
    pub terms: Vec<(VarId, f64)>,
    pub constant: f64,
}

impl LinExpr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn constant(value: f64) -> Self {
        Self {
            terms: Vec::new(),
            constant: value,
        }
    }

    pub fn add_term(&mut self, var: VarId, coef: f64) -> &mut Self {
        if coef != 0.0 {
            self.terms.push((var, coef));
        }
        self
    }

    pub fn add_constant(&mut self, value: f64) -> &mut Self {
        self.constant += value;
        self
    }

    pub fn add_scaled(&mut self, other: &LinExpr, scale: f64) -> &mut Self {
        for &(v, a) in &other.terms {
            self.add_term(v, a * scale);
        }
        self.constant += other.constant * scale;
        self
    }

    pub fn eval(&self, values: &[f64]) -> f64 {
        self.constant + self.terms.iter().map(|&(v, a)| a * values[v.0]).sum::<f64>()
    }

    /// Merges duplicate variables and drops zero coefficients, keeping the
    /// order of first appearance.
    pub fn normalized(&self) -> LinExpr {
        LinExpr {
            terms: merge_terms(&self.terms),
            constant: self.constant,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Objective {
    pub sense: ObjectiveSense,
    pub expr: LinExpr,
}

impl Default for Objective {
    fn default() -> Self {
        Self {
            sense: ObjectiveSense::Minimize,
            expr: LinExpr::new(),
        }
    }
}

fn merge_terms(terms: &[(VarId, f64)]) -> Vec<(VarId, f64)> {
    let mut pos: HashMap<VarId, usize> = HashMap::with_capacity(terms.len());
    let mut out: Vec<(VarId, f64)> = Vec::with_capacity(terms.len());
    for &(v, a) in terms {
        match pos.get(&v) {
            Some(&k) => out[k].1 += a,
            None => {
                pos.insert(v, out.len());
                out.push((v, a));
            }
        }
    }
    out.retain(|&(_, a)| a != 0.0);
    out
}

/// A mixed-integer linear program with named variables and tagged rows.
#[derive(Debug, Clone, Default)]
pub struct ModelIr {
    pub name: String,
    vars: Vec<Variable>,
    constraints: Vec<Constraint>,
    objective: Objective,
    var_index: HashMap<String, VarId>,
    tag_index: HashMap<String, usize>,
}

impl ModelIr {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..Self::default()
        }
    }

    pub fn add_var(
        &mut self,
        name: Name,
        kind: VarKind,
        lower: f64,
        upper: f64,
    ) -> Result<VarId, ModelError> {
        let key = name.to_string();
        if self.var_index.contains_key(&key) {
            return Err(ModelError::DuplicateVariable(key));
        }
        if lower.is_nan() || upper.is_nan() || lower > upper {
            return Err(ModelError::InvalidBounds { var: key, lower, upper });
        }
        if kind == VarKind::Binary && (lower < 0.0 || upper > 1.0) {
            return Err(ModelError::InvalidBounds { var: key, lower, upper });
        }
        let id = VarId(self.vars.len());
        self.var_index.insert(key, id);
        self.vars.push(Variable {
            name,
            kind,
            lower,
            upper,
        });
        Ok(id)
    }

    pub fn add_continuous(&mut self, name: Name, lower: f64, upper: f64) -> Result<VarId, ModelError> {
        self.add_var(name, VarKind::Continuous, lower, upper)
    }

    pub fn add_binary(&mut self, name: Name) -> Result<VarId, ModelError> {
        self.add_var(name, VarKind::Binary, 0.0, 1.0)
    }

    /// Adds a row. Duplicate variables are merged and zero coefficients
    /// dropped; coefficients and right-hand side must be finite.
    pub fn add_constraint(
        &mut self,
        tag: Name,
        terms: &[(VarId, f64)],
        sense: ConstraintSense,
        rhs: f64,
    ) -> Result<usize, ModelError> {
        let key = tag.to_string();
        if self.tag_index.contains_key(&key) {
            return Err(ModelError::DuplicateTag(key));
        }
        for &(v, a) in terms {
            if v.0 >= self.vars.len() {
                return Err(ModelError::UnknownVariable(v.0));
            }
            if !a.is_finite() {
                return Err(ModelError::NonFinite(key));
            }
        }
        if !rhs.is_finite() {
            return Err(ModelError::NonFinite(key));
        }
        let row = self.constraints.len();
        self.tag_index.insert(key, row);
        self.constraints.push(Constraint {
            tag,
            terms: merge_terms(terms),
            sense,
            rhs,
        });
        Ok(row)
    }

    /// Adds `expr (sense) rhs`, moving the expression constant to the right.
    pub fn add_expr_constraint(
        &mut self,
        tag: Name,
        expr: &LinExpr,
        sense: ConstraintSense,
        rhs: f64,
    ) -> Result<usize, ModelError> {
        self.add_constraint(tag, &expr.terms, sense, rhs - expr.constant)
    }

    pub fn set_objective(&mut self, sense: ObjectiveSense, expr: LinExpr) -> Result<(), ModelError> {
        for &(v, a) in &expr.terms {
            if v.0 >= self.vars.len() {
                return Err(ModelError::UnknownVariable(v.0));
            }
            if !a.is_finite() {
                return Err(ModelError::NonFinite("objective".into()));
            }
        }
        self.objective = Objective {
            sense,
            expr: expr.normalized(),
        };
        Ok(())
    }

    pub fn set_bounds(&mut self, var: VarId, lower: f64, upper: f64) -> Result<(), ModelError> {
        let v = self
            .vars
            .get_mut(var.0)
            .ok_or(ModelError::UnknownVariable(var.0))?;
        if lower.is_nan() || upper.is_nan() || lower > upper {
            return Err(ModelError::InvalidBounds {
                var: v.name.to_string(),
                lower,
                upper,
            });
        }
        v.lower = lower;
        v.upper = upper;
        Ok(())
    }

    pub fn fix(&mut self, var: VarId, value: f64) -> Result<(), ModelError> {
        self.set_bounds(var, value, value)
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn var(&self, id: VarId) -> &Variable {
        &self.vars[id.0]
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn var_by_name(&self, name: &str) -> Option<VarId> {
        self.var_index.get(name).copied()
    }

    pub fn constraint_by_tag(&self, tag: &str) -> Option<&Constraint> {
        self.tag_index.get(tag).map(|&r| &self.constraints[r])
    }

    pub fn integer_vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.vars
            .iter()
            .enumerate()
            .filter(|(_, v)| v.kind.is_integral())
            .map(|(k, _)| VarId(k))
    }

    /// Integer variables whose bounds still leave more than one value.
    pub fn free_integer_vars(&self) -> Vec<VarId> {
        self.integer_vars()
            .filter(|&v| {
                let var = &self.vars[v.0];
                var.lower.ceil() < var.upper.floor()
            })
            .collect()
    }

    pub fn has_integers(&self) -> bool {
        self.vars.iter().any(|v| v.kind.is_integral())
    }

    /// Copy of the model with every integrality requirement dropped.
    pub fn relaxed(&self) -> ModelIr {
        let mut m = self.clone();
        for v in &mut m.vars {
            v.kind = VarKind::Continuous;
        }
        m
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective.expr.eval(values)
    }

    /// Checks internal consistency. Builders maintain these by construction;
    /// this is used after importing external files.
    pub fn validate(&self) -> Result<(), ModelError> {
        for v in &self.vars {
            if v.lower > v.upper || v.lower.is_nan() || v.upper.is_nan() {
                return Err(ModelError::InvalidBounds {
                    var: v.name.to_string(),
                    lower: v.lower,
                    upper: v.upper,
                });
            }
        }
        for c in &self.constraints {
            let mut seen = std::collections::HashSet::new();
            for &(v, a) in &c.terms {
                if v.0 >= self.vars.len() {
                    return Err(ModelError::UnknownVariable(v.0));
                }
                if !seen.insert(v) {
                    return Err(ModelError::DuplicateTerm(c.tag.to_string()));
                }
                if !a.is_finite() {
                    return Err(ModelError::NonFinite(c.tag.to_string()));
                }
            }
        }
        Ok(())
    }
}
