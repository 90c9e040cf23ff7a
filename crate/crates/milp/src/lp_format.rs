//! CPLEX-style LP text writer and a reader for the subset it produces.
//!
//! Square brackets are not legal in LP identifiers, so `energy[3,17]` is
//! written as `energy(3,17)`; the returned [`NameMap`] records the change.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use crate::error::FormatError;
use crate::model::{ConstraintSense, LinExpr, ModelIr, Name, ObjectiveSense, VarId, VarKind};
use crate::mps::fmt_num;
use crate::names::{assign, record, valid_lp_name, NameMap};

const TERMS_PER_LINE: usize = 6;

fn bracket_to_paren(s: &str) -> String {
    s.replace('[', "(").replace(']', ")")
}

fn write_terms(out: &mut String, terms: &[(usize, f64)], names: &[String]) {
    if terms.is_empty() {
        out.push_str(" 0 ");
        out.push_str(names.first().map(String::as_str).unwrap_or("0"));
        return;
    }
    for (k, &(j, a)) in terms.iter().enumerate() {
        if k > 0 && k % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let sign = if a < 0.0 { '-' } else { '+' };
        let _ = write!(out, " {sign} {} {}", fmt_num(a.abs()), names[j]);
    }
}

pub fn write_lp(ir: &ModelIr) -> (String, NameMap) {
    let col_orig: Vec<String> = ir.vars().iter().map(|v| v.name.to_string()).collect();
    let row_orig: Vec<String> = ir.constraints().iter().map(|c| c.tag.to_string()).collect();
    let cols = assign(&col_orig, 'x', bracket_to_paren, valid_lp_name, &HashSet::new());
    let mut reserved: HashSet<String> = cols.iter().cloned().collect();
    reserved.insert("obj".into());
    let rows = assign(&row_orig, 'r', bracket_to_paren, valid_lp_name, &reserved);
    let mut map = NameMap {
        model: ir.name.clone(),
        objective: "obj".into(),
        ..NameMap::default()
    };
    record(&mut map.columns, &cols, &col_orig);
    record(&mut map.rows, &rows, &row_orig);

    let mut out = String::new();
    let _ = writeln!(out, "\\ model {}", ir.name.replace('\n', " "));
    out.push_str(match ir.objective().sense {
        ObjectiveSense::Minimize => "Minimize\n",
        ObjectiveSense::Maximize => "Maximize\n",
    });
    out.push_str(" obj:");
    let obj_terms: Vec<(usize, f64)> = ir.objective().expr.terms.iter().map(|&(v, a)| (v.0, a)).collect();
    let c = ir.objective().expr.constant;
    if obj_terms.is_empty() && c == 0.0 {
        out.push_str(" 0");
    } else {
        if !obj_terms.is_empty() {
            write_terms(&mut out, &obj_terms, &cols);
        }
        if c != 0.0 {
            let sign = if c < 0.0 { '-' } else { '+' };
            let _ = write!(out, " {sign} {}", fmt_num(c.abs()));
        }
    }
    out.push_str("\nSubject To\n");
    for (con, name) in ir.constraints().iter().zip(&rows) {
        let _ = write!(out, " {name}:");
        let terms: Vec<(usize, f64)> = con.terms.iter().map(|&(v, a)| (v.0, a)).collect();
        write_terms(&mut out, &terms, &cols);
        let op = match con.sense {
            ConstraintSense::Le => "<=",
            ConstraintSense::Ge => ">=",
            ConstraintSense::Eq => "=",
        };
        let _ = writeln!(out, " {op} {}", fmt_num(con.rhs));
    }
    out.push_str("Bounds\n");
    // every column is listed so that unused columns survive and order is kept
    for (v, name) in ir.vars().iter().zip(&cols) {
        let (l, u) = (v.lower, v.upper);
        if l == u {
            let _ = writeln!(out, " {name} = {}", fmt_num(l));
        } else if !l.is_finite() && !u.is_finite() {
            let _ = writeln!(out, " {name} free");
        } else if !u.is_finite() {
            let _ = writeln!(out, " {name} >= {}", fmt_num(l));
        } else {
            let lo = if l.is_finite() { fmt_num(l) } else { "-inf".into() };
            let _ = writeln!(out, " {lo} <= {name} <= {}", fmt_num(u));
        }
    }
    let section = |kind: VarKind, title: &str, out: &mut String| {
        let names: Vec<&str> = ir
            .vars()
            .iter()
            .zip(&cols)
            .filter(|(v, _)| v.kind == kind)
            .map(|(_, n)| n.as_str())
            .collect();
        if !names.is_empty() {
            out.push_str(title);
            out.push('\n');
            for chunk in names.chunks(8) {
                let _ = writeln!(out, " {}", chunk.join(" "));
            }
        }
    };
    section(VarKind::Integer, "Generals", &mut out);
    section(VarKind::Binary, "Binaries", &mut out);
    out.push_str("End\n");
    (out, map)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(&'static str),
    Colon,
    Sign(f64),
}

fn tokenize(line: usize, s: &str) -> Result<Vec<Tok>, FormatError> {
    let mut out = Vec::new();
    for w in s.split_whitespace() {
        let mut w = w;
        // labels may be glued to their colon
        if let Some(stripped) = w.strip_suffix(':') {
            if !stripped.is_empty() {
                out.push(Tok::Ident(stripped.to_string()));
            }
            out.push(Tok::Colon);
            continue;
        }
        match w {
            "+" => out.push(Tok::Sign(1.0)),
            "-" => out.push(Tok::Sign(-1.0)),
            "<=" | "=<" | "<" => out.push(Tok::Op("<=")),
            ">=" | "=>" | ">" => out.push(Tok::Op(">=")),
            "=" => out.push(Tok::Op("=")),
            _ => {
                let lower = w.to_ascii_lowercase();
                if lower == "inf" || lower == "infinity" || lower == "+inf" {
                    out.push(Tok::Num(f64::INFINITY));
                } else if lower == "-inf" || lower == "-infinity" {
                    out.push(Tok::Num(f64::NEG_INFINITY));
                } else if let Ok(v) = w.parse::<f64>() {
                    out.push(Tok::Num(v));
                } else {
                    if w.starts_with('-') || w.starts_with('+') {
                        out.push(Tok::Sign(if w.starts_with('-') { -1.0 } else { 1.0 }));
                        w = &w[1..];
                    }
                    if !valid_lp_name(w) {
                        return Err(FormatError::parse(line, format!("bad token `{w}`")));
                    }
                    out.push(Tok::Ident(w.to_string()));
                }
            }
        }
    }
    Ok(out)
}

/// Linear expression as (name, coef) pairs plus constant.
fn parse_linear(line: usize, toks: &[Tok]) -> Result<(Vec<(String, f64)>, f64), FormatError> {
    let mut terms = Vec::new();
    let mut constant = 0.0;
    let mut sign = 1.0;
    let mut coef: Option<f64> = None;
    for t in toks {
        match t {
            Tok::Sign(s) => {
                if let Some(c) = coef.take() {
                    constant += sign * c;
                    sign = 1.0;
                }
                sign *= s;
            }
            Tok::Num(v) => {
                if let Some(c) = coef.take() {
                    constant += sign * c;
                    sign = 1.0;
                }
                coef = Some(*v);
            }
            Tok::Ident(n) => {
                terms.push((n.clone(), sign * coef.take().unwrap_or(1.0)));
                sign = 1.0;
            }
            _ => return Err(FormatError::parse(line, "unexpected token in expression")),
        }
    }
    if let Some(c) = coef {
        constant += sign * c;
    }
    Ok((terms, constant))
}

#[derive(PartialEq)]
enum Sec {
    Head,
    Objective,
    Constraints,
    Bounds,
    Generals,
    Binaries,
    Done,
}

/// Reads LP text as produced by [`write_lp`] (and simple hand-written
/// files in the same dialect).
pub fn read_lp(text: &str, map: Option<&NameMap>) -> Result<ModelIr, FormatError> {
    let mut sec = Sec::Head;
    let mut sense = ObjectiveSense::Minimize;
    let mut stmt: Vec<Tok> = Vec::new();
    let mut stmt_line = 0;
    let mut obj: Option<(Vec<(String, f64)>, f64)> = None;
    let mut cons: Vec<(String, Vec<(String, f64)>, ConstraintSense, f64)> = Vec::new();
    let mut bounds: Vec<(String, Option<f64>, Option<f64>)> = Vec::new();
    let mut generals: Vec<String> = Vec::new();
    let mut binaries: Vec<String> = Vec::new();

    let flush = |sec: &Sec,
                 stmt: &mut Vec<Tok>,
                 line: usize,
                 obj: &mut Option<(Vec<(String, f64)>, f64)>,
                 cons: &mut Vec<(String, Vec<(String, f64)>, ConstraintSense, f64)>|
     -> Result<(), FormatError> {
        if stmt.is_empty() {
            return Ok(());
        }
        let toks = std::mem::take(stmt);
        let body = match (toks.first(), toks.get(1)) {
            (Some(Tok::Ident(_)), Some(Tok::Colon)) => &toks[2..],
            _ => &toks[..],
        };
        let label = match (toks.first(), toks.get(1)) {
            (Some(Tok::Ident(n)), Some(Tok::Colon)) => Some(n.clone()),
            _ => None,
        };
        match sec {
            Sec::Objective => *obj = Some(parse_linear(line, body)?),
            Sec::Constraints => {
                let p = body
                    .iter()
                    .position(|t| matches!(t, Tok::Op(_)))
                    .ok_or_else(|| FormatError::parse(line, "constraint without operator"))?;
                let Tok::Op(op) = body[p] else { unreachable!() };
                let (lhs, lc) = parse_linear(line, &body[..p])?;
                let (rterms, rc) = parse_linear(line, &body[p + 1..])?;
                if !rterms.is_empty() {
                    return Err(FormatError::parse(line, "variables on the right-hand side"));
                }
                let s = match op {
                    "<=" => ConstraintSense::Le,
                    ">=" => ConstraintSense::Ge,
                    _ => ConstraintSense::Eq,
                };
                let label = label.unwrap_or_else(|| format!("R{}", cons.len()));
                cons.push((label, lhs, s, rc - lc));
            }
            _ => {}
        }
        Ok(())
    };

    for (k, raw) in text.lines().enumerate() {
        let ln = k + 1;
        let line = raw.split('\\').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let head = line.trim().to_ascii_lowercase();
        let new_sec = match head.as_str() {
            "minimize" | "minimum" | "min" => {
                sense = ObjectiveSense::Minimize;
                Some(Sec::Objective)
            }
            "maximize" | "maximum" | "max" => {
                sense = ObjectiveSense::Maximize;
                Some(Sec::Objective)
            }
            "subject to" | "such that" | "st" | "s.t." => Some(Sec::Constraints),
            "bounds" | "bound" => Some(Sec::Bounds),
            "generals" | "general" | "integers" | "gen" => Some(Sec::Generals),
            "binaries" | "binary" | "bin" => Some(Sec::Binaries),
            "end" => Some(Sec::Done),
            _ => None,
        };
        if let Some(s) = new_sec {
            flush(&sec, &mut stmt, stmt_line, &mut obj, &mut cons)?;
            sec = s;
            continue;
        }
        let toks = tokenize(ln, line)?;
        match sec {
            Sec::Head => return Err(FormatError::parse(ln, "content before the objective section")),
            Sec::Done => return Err(FormatError::parse(ln, "content after End")),
            Sec::Objective => {
                if stmt.is_empty() {
                    stmt_line = ln;
                }
                stmt.extend(toks);
            }
            Sec::Constraints => {
                let starts_label =
                    matches!((toks.first(), toks.get(1)), (Some(Tok::Ident(_)), Some(Tok::Colon)));
                let prev_complete = stmt.iter().any(|t| matches!(t, Tok::Op(_)))
                    && matches!(stmt.last(), Some(Tok::Num(_)));
                if starts_label || prev_complete {
                    flush(&sec, &mut stmt, stmt_line, &mut obj, &mut cons)?;
                }
                if stmt.is_empty() {
                    stmt_line = ln;
                }
                stmt.extend(toks);
            }
            Sec::Bounds => {
                bounds.push(parse_bound(ln, &toks)?);
            }
            Sec::Generals | Sec::Binaries => {
                for t in toks {
                    let Tok::Ident(n) = t else {
                        return Err(FormatError::parse(ln, "expected variable names"));
                    };
                    if sec == Sec::Generals {
                        generals.push(n);
                    } else {
                        binaries.push(n);
                    }
                }
            }
        }
    }
    flush(&sec, &mut stmt, stmt_line, &mut obj, &mut cons)?;
    if sec != Sec::Done {
        return Err(FormatError::parse(text.lines().count(), "missing End"));
    }

    // column order: bounds first (the writer lists every column there)
    let mut order: Vec<String> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    {
        let mut note = |n: &String| {
            if seen.insert(n.clone()) {
                order.push(n.clone());
            }
        };
        bounds.iter().for_each(|b| note(&b.0));
        generals.iter().chain(&binaries).for_each(&mut note);
        if let Some((t, _)) = &obj {
            t.iter().for_each(|(n, _)| note(n));
        }
        for (_, t, _, _) in &cons {
            t.iter().for_each(|(n, _)| note(n));
        }
    }
    let col_name = |s: &str| -> String { map.map_or(s, |m| m.column(s)).to_string() };
    let row_name = |s: &str| -> String { map.map_or(s, |m| m.row(s)).to_string() };
    let gen: HashSet<&str> = generals.iter().map(String::as_str).collect();
    let bin: HashSet<&str> = binaries.iter().map(String::as_str).collect();
    let mut lo: HashMap<&str, f64> = HashMap::new();
    let mut up: HashMap<&str, f64> = HashMap::new();
    for (n, l, u) in &bounds {
        if let Some(l) = l {
            lo.insert(n, *l);
        }
        if let Some(u) = u {
            up.insert(n, *u);
        }
    }
    let mut ir = ModelIr::new(map.map_or_else(|| "model".to_string(), |m| m.model.clone()));
    let mut ids: HashMap<&str, VarId> = HashMap::new();
    for n in &order {
        let (kind, dl, du) = if bin.contains(n.as_str()) {
            (VarKind::Binary, 0.0, 1.0)
        } else if gen.contains(n.as_str()) {
            (VarKind::Integer, 0.0, f64::INFINITY)
        } else {
            (VarKind::Continuous, 0.0, f64::INFINITY)
        };
        let l = lo.get(n.as_str()).copied().unwrap_or(dl);
        let u = up.get(n.as_str()).copied().unwrap_or(du);
        let name: Name = col_name(n).parse().expect("name parsing is infallible");
        ids.insert(n, ir.add_var(name, kind, l, u)?);
    }
    let resolve = |terms: &[(String, f64)]| -> Vec<(VarId, f64)> {
        terms.iter().map(|(n, a)| (ids[n.as_str()], *a)).collect()
    };
    for (label, terms, s, rhs) in &cons {
        let tag: Name = row_name(label).parse().expect("name parsing is infallible");
        ir.add_constraint(tag, &resolve(terms), *s, *rhs)?;
    }
    let (oterms, oc) = obj.unwrap_or_default();
    let mut expr = LinExpr::constant(oc);
    for (v, a) in resolve(&oterms) {
        expr.add_term(v, a);
    }
    ir.set_objective(sense, expr)?;
    Ok(ir)
}

fn parse_bound(ln: usize, toks: &[Tok]) -> Result<(String, Option<f64>, Option<f64>), FormatError> {
    let signed = |toks: &[Tok]| -> Vec<Tok> {
        // fold a leading sign into the following number
        let mut out = Vec::new();
        let mut pending = 1.0;
        for t in toks {
            match t {
                Tok::Sign(s) => pending *= s,
                Tok::Num(v) => {
                    out.push(Tok::Num(pending * v));
                    pending = 1.0;
                }
                other => out.push(other.clone()),
            }
        }
        out
    };
    let t = signed(toks);
    let bad = || FormatError::parse(ln, "malformed bound");
    match t.as_slice() {
        [Tok::Ident(n), Tok::Ident(f)] if f.eq_ignore_ascii_case("free") => {
            Ok((n.clone(), Some(f64::NEG_INFINITY), Some(f64::INFINITY)))
        }
        [Tok::Num(l), Tok::Op("<="), Tok::Ident(n), Tok::Op("<="), Tok::Num(u)] => {
            Ok((n.clone(), Some(*l), Some(*u)))
        }
        [Tok::Ident(n), Tok::Op("="), Tok::Num(v)] => Ok((n.clone(), Some(*v), Some(*v))),
        [Tok::Ident(n), Tok::Op("<="), Tok::Num(u)] => Ok((n.clone(), None, Some(*u))),
        [Tok::Ident(n), Tok::Op(">="), Tok::Num(l)] => Ok((n.clone(), Some(*l), None)),
        [Tok::Num(l), Tok::Op("<="), Tok::Ident(n)] => Ok((n.clone(), Some(*l), None)),
        [Tok::Num(u), Tok::Op(">="), Tok::Ident(n)] => Ok((n.clone(), None, Some(*u))),
        _ => Err(bad()),
    }
}
