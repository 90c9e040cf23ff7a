//! Plain-text solution files: one `name value` pair per line, `#` comments.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::time::Duration;

use crate::branch::{SolveStatus, Solution};
use crate::check::{check_solution, ViolationReport};
use crate::error::SolutionFileError;
use crate::model::ModelIr;
use crate::names::NameMap;

/// Writes values under the model's own names, or under the names used in an
/// exported file when `map` is given.
pub fn write_solution(ir: &ModelIr, sol: &Solution, map: Option<&NameMap>) -> String {
    let reverse: HashMap<&str, &str> = map
        .map(|m| m.columns.iter().map(|(w, o)| (o.as_str(), w.as_str())).collect())
        .unwrap_or_default();
    let mut out = String::new();
    let _ = writeln!(out, "# model {}", ir.name);
    let _ = writeln!(out, "# status {}", status_word(sol.status));
    let _ = writeln!(out, "# objective {}", sol.objective);
    for (v, x) in ir.vars().iter().zip(&sol.values) {
        let name = v.name.to_string();
        let written = reverse.get(name.as_str()).copied().unwrap_or(&name);
        let _ = writeln!(out, "{written} {x}");
    }
    out
}

fn status_word(s: SolveStatus) -> &'static str {
    match s {
        SolveStatus::Optimal => "optimal",
        SolveStatus::Infeasible => "infeasible",
        SolveStatus::Unbounded => "unbounded",
        SolveStatus::LimitHit => "limit-hit",
        SolveStatus::NumericalFailure => "numerical-failure",
    }
}

fn parse_status(s: &str) -> Option<SolveStatus> {
    Some(match s {
        "optimal" => SolveStatus::Optimal,
        "infeasible" => SolveStatus::Infeasible,
        "unbounded" => SolveStatus::Unbounded,
        "limit-hit" => SolveStatus::LimitHit,
        "numerical-failure" => SolveStatus::NumericalFailure,
        _ => return None,
    })
}

#[derive(Debug, Clone)]
pub struct ImportedSolution {
    pub solution: Solution,
    /// Result of checking the imported point against the model.
    pub report: ViolationReport,
}

/// Reads a solution file for `ir`. Every model variable must be present
/// exactly once; unknown names and missing values are reported by name.
/// The status defaults to optimal unless a `# status` comment says otherwise.
pub fn import_solution(
    text: &str,
    ir: &ModelIr,
    map: Option<&NameMap>,
    tol: f64,
) -> Result<ImportedSolution, SolutionFileError> {
    let mut values = vec![f64::NAN; ir.num_vars()];
    let mut unknown = Vec::new();
    let mut status = SolveStatus::Optimal;
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix('#') {
            let mut it = comment.split_whitespace();
            if it.next() == Some("status") {
                if let Some(s) = it.next().and_then(parse_status) {
                    status = s;
                }
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let (Some(name), Some(val), None) = (it.next(), it.next(), it.next()) else {
            return Err(SolutionFileError::Parse {
                line: k + 1,
                msg: "expected `name value`".into(),
            });
        };
        let value: f64 = val.parse().map_err(|_| SolutionFileError::Parse {
            line: k + 1,
            msg: format!("bad number `{val}`"),
        })?;
        let original = map.map_or(name, |m| m.column(name));
        match ir.var_by_name(original) {
            Some(v) => values[v.0] = value,
            None => unknown.push(name.to_string()),
        }
    }
    if !unknown.is_empty() {
        return Err(SolutionFileError::UnknownNames(unknown));
    }
    let missing: Vec<String> = ir
        .vars()
        .iter()
        .zip(&values)
        .filter(|(_, x)| x.is_nan())
        .map(|(v, _)| v.name.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(SolutionFileError::MissingValues(missing));
    }
    let report = check_solution(ir, &values, tol);
    let objective = ir.objective_value(&values);
    let solution = Solution {
        status,
        objective,
        bound: f64::NAN,
        gap: f64::NAN,
        nodes: 0,
        wall_time: Duration::ZERO,
        incumbent_history: vec![objective],
        diagnostic: None,
        values,
    };
    Ok(ImportedSolution { solution, report })
}
