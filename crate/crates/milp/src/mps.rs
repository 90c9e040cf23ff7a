//! Fixed-format MPS writer and reader.
//!
//! Layout follows the classic column positions (fields at 2, 5, 15, 25, 40).
//! Numbers carry 12 significant digits. Integer columns are bracketed by
//! `MARKER` lines and always receive explicit bounds so that readers which
//! default unbounded integers to binaries interpret the file the same way.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use crate::error::FormatError;
use crate::model::{ConstraintSense, LinExpr, ModelIr, Name, ObjectiveSense, VarKind};
use crate::names::{assign, record, valid_mps_name, NameMap};

/// Formats `v` rounded to 12 significant digits, as short as possible.
pub fn fmt_num(v: f64) -> String {
    let r: f64 = format!("{v:.11e}").parse().expect("formatted float parses");
    let r = if r == 0.0 { 0.0 } else { r };
    let plain = format!("{r}");
    if plain.len() <= 12 {
        plain
    } else {
        format!("{r:e}")
    }
}

fn field_line(out: &mut String, code: &str, f2: &str, f3: &str, f4: &str) {
    let mut line = format!(" {code:<2} {f2:<8}  {f3:<8}  {f4}");
    let trimmed = line.trim_end().len();
    line.truncate(trimmed);
    out.push_str(&line);
    out.push('\n');
}

/// Writes `ir` as fixed-format MPS, returning the text and the name map
/// needed to translate file names back.
pub fn write_mps(ir: &ModelIr) -> (String, NameMap) {
    let col_orig: Vec<String> = ir.vars().iter().map(|v| v.name.to_string()).collect();
    let row_orig: Vec<String> = ir.constraints().iter().map(|c| c.tag.to_string()).collect();
    let cols = assign(&col_orig, 'C', str::to_string, valid_mps_name, &HashSet::new());
    let rows = assign(&row_orig, 'R', str::to_string, valid_mps_name, &HashSet::new());
    let taken: HashSet<&str> = rows.iter().map(String::as_str).collect();
    let obj_name = ["COST", "OBJ", "OBJROW"]
        .into_iter()
        .find(|n| !taken.contains(n))
        .map(str::to_string)
        .unwrap_or_else(|| "N0000000".into());

    let mut map = NameMap {
        model: ir.name.clone(),
        objective: obj_name.clone(),
        ..NameMap::default()
    };
    record(&mut map.columns, &cols, &col_orig);
    record(&mut map.rows, &rows, &row_orig);

    let model_name = if valid_mps_name(&ir.name) { ir.name.as_str() } else { "MODEL" };
    let mut out = String::new();
    let _ = writeln!(out, "NAME          {model_name}");
    if ir.objective().sense == ObjectiveSense::Maximize {
        out.push_str("OBJSENSE\n    MAX\n");
    }
    out.push_str("ROWS\n");
    field_line(&mut out, "N", &obj_name, "", "");
    for (c, name) in ir.constraints().iter().zip(&rows) {
        let code = match c.sense {
            ConstraintSense::Le => "L",
            ConstraintSense::Ge => "G",
            ConstraintSense::Eq => "E",
        };
        field_line(&mut out, code, name, "", "");
    }

    // column-major view
    let mut entries: Vec<Vec<(usize, f64)>> = vec![Vec::new(); ir.num_vars()];
    for (r, c) in ir.constraints().iter().enumerate() {
        for &(v, a) in &c.terms {
            entries[v.0].push((r, a));
        }
    }
    let mut obj = vec![0.0; ir.num_vars()];
    for &(v, a) in &ir.objective().expr.terms {
        obj[v.0] += a;
    }

    out.push_str("COLUMNS\n");
    let mut in_int = false;
    let mut marker = 0usize;
    for (j, var) in ir.vars().iter().enumerate() {
        let is_int = var.kind.is_integral();
        if is_int != in_int {
            let (tag, kind) = if is_int { ("'MARKER'", "'INTORG'") } else { ("'MARKER'", "'INTEND'") };
            let _ = writeln!(out, "    {:<8}  {:<8}                 {}", format!("M{marker:07}"), tag, kind);
            marker += 1;
            in_int = is_int;
        }
        let mut wrote = false;
        if obj[j] != 0.0 {
            field_line(&mut out, "", &cols[j], &obj_name, &fmt_num(obj[j]));
            wrote = true;
        }
        for &(r, a) in &entries[j] {
            field_line(&mut out, "", &cols[j], &rows[r], &fmt_num(a));
            wrote = true;
        }
        if !wrote {
            field_line(&mut out, "", &cols[j], &obj_name, "0");
        }
    }
    if in_int {
        let _ = writeln!(out, "    {:<8}  {:<8}                 {}", format!("M{marker:07}"), "'MARKER'", "'INTEND'");
    }

    out.push_str("RHS\n");
    let constant = ir.objective().expr.constant;
    if constant != 0.0 {
        field_line(&mut out, "", "RHS", &obj_name, &fmt_num(-constant));
    }
    for (c, name) in ir.constraints().iter().zip(&rows) {
        if c.rhs != 0.0 {
            field_line(&mut out, "", "RHS", name, &fmt_num(c.rhs));
        }
    }

    let mut bounds = String::new();
    for (var, name) in ir.vars().iter().zip(&cols) {
        let (l, u) = (var.lower, var.upper);
        let mut b = |code: &str, v: Option<f64>| {
            field_line(&mut bounds, code, "BND", name, &v.map(fmt_num).unwrap_or_default());
        };
        if l == u {
            b("FX", Some(l));
            continue;
        }
        match (l.is_finite(), u.is_finite()) {
            (false, false) => b("FR", None),
            (false, true) => {
                b("MI", None);
                b("UP", Some(u));
            }
            (true, fin_u) => {
                if l != 0.0 || (fin_u && u < 0.0) {
                    b("LO", Some(l));
                }
                if fin_u {
                    b("UP", Some(u));
                } else if var.kind.is_integral() {
                    b("PL", None);
                }
            }
        }
    }
    if !bounds.is_empty() {
        out.push_str("BOUNDS\n");
        out.push_str(&bounds);
    }
    out.push_str("ENDATA\n");
    (out, map)
}

fn parse_num(line: usize, s: &str) -> Result<f64, FormatError> {
    let v: f64 = s
        .parse()
        .map_err(|_| FormatError::parse(line, format!("bad number `{s}`")))?;
    if v.is_nan() {
        return Err(FormatError::parse(line, "NaN is not allowed"));
    }
    Ok(v)
}

#[derive(PartialEq, Clone, Copy)]
enum Section {
    None,
    ObjSense,
    Rows,
    Columns,
    Rhs,
    Bounds,
    Ranges,
}

struct PendingCol {
    name: String,
    integer: bool,
    lower: Option<f64>,
    upper: Option<f64>,
    entries: Vec<(usize, f64)>,
    obj: f64,
}

/// Reads MPS text (fixed or whitespace-separated). When `map` is given,
/// names are translated back to model names.
pub fn read_mps(text: &str, map: Option<&NameMap>) -> Result<ModelIr, FormatError> {
    let mut section = Section::None;
    let mut name = String::from("model");
    let mut sense = ObjectiveSense::Minimize;
    let mut obj_row: Option<String> = None;
    let mut rows: Vec<(String, ConstraintSense)> = Vec::new();
    let mut row_idx: HashMap<String, usize> = HashMap::new();
    let mut rhs: Vec<f64> = Vec::new();
    let mut obj_const = 0.0;
    let mut cols: Vec<PendingCol> = Vec::new();
    let mut col_idx: HashMap<String, usize> = HashMap::new();
    let mut in_int = false;
    let mut ended = false;

    for (k, raw) in text.lines().enumerate() {
        let ln = k + 1;
        if raw.trim().is_empty() || raw.starts_with('*') {
            continue;
        }
        let toks: Vec<&str> = raw.split_whitespace().collect();
        if !raw.starts_with(' ') && !raw.starts_with('\t') {
            let head = toks[0].to_ascii_uppercase();
            section = match head.as_str() {
                "NAME" => {
                    if let Some(n) = toks.get(1) {
                        name = n.to_string();
                    }
                    Section::None
                }
                "OBJSENSE" => {
                    if let Some(s) = toks.get(1) {
                        sense = parse_sense(ln, s)?;
                        Section::None
                    } else {
                        Section::ObjSense
                    }
                }
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "BOUNDS" => Section::Bounds,
                "RANGES" => Section::Ranges,
                "ENDATA" => {
                    ended = true;
                    break;
                }
                other => return Err(FormatError::parse(ln, format!("unknown section `{other}`"))),
            };
            continue;
        }
        match section {
            Section::None => return Err(FormatError::parse(ln, "data outside a section")),
            Section::ObjSense => sense = parse_sense(ln, toks[0])?,
            Section::Ranges => return Err(FormatError::parse(ln, "RANGES are not supported")),
            Section::Rows => {
                if toks.len() != 2 {
                    return Err(FormatError::parse(ln, "ROWS entry needs a type and a name"));
                }
                let s = match toks[0].to_ascii_uppercase().as_str() {
                    "N" => {
                        if obj_row.is_none() {
                            obj_row = Some(toks[1].to_string());
                        }
                        // extra free rows are ignored
                        continue;
                    }
                    "L" => ConstraintSense::Le,
                    "G" => ConstraintSense::Ge,
                    "E" => ConstraintSense::Eq,
                    t => return Err(FormatError::parse(ln, format!("unknown row type `{t}`"))),
                };
                if row_idx.insert(toks[1].to_string(), rows.len()).is_some() {
                    return Err(FormatError::parse(ln, format!("duplicate row `{}`", toks[1])));
                }
                rows.push((toks[1].to_string(), s));
                rhs.push(0.0);
            }
            Section::Columns => {
                if toks.len() >= 3 && toks[1] == "'MARKER'" {
                    match toks[2] {
                        "'INTORG'" => in_int = true,
                        "'INTEND'" => in_int = false,
                        m => return Err(FormatError::parse(ln, format!("unknown marker {m}"))),
                    }
                    continue;
                }
                if toks.len() != 3 && toks.len() != 5 {
                    return Err(FormatError::parse(ln, "COLUMNS entry needs 3 or 5 fields"));
                }
                let cname = toks[0];
                let j = match col_idx.get(cname) {
                    Some(&j) => j,
                    None => {
                        col_idx.insert(cname.to_string(), cols.len());
                        cols.push(PendingCol {
                            name: cname.to_string(),
                            integer: in_int,
                            lower: None,
                            upper: None,
                            entries: Vec::new(),
                            obj: 0.0,
                        });
                        cols.len() - 1
                    }
                };
                for pair in toks[1..].chunks(2) {
                    let v = parse_num(ln, pair[1])?;
                    if Some(pair[0]) == obj_row.as_deref() {
                        cols[j].obj += v;
                    } else if let Some(&r) = row_idx.get(pair[0]) {
                        cols[j].entries.push((r, v));
                    } else {
                        return Err(FormatError::parse(ln, format!("unknown row `{}`", pair[0])));
                    }
                }
            }
            Section::Rhs => {
                let body = if toks.len() % 2 == 1 { &toks[1..] } else { &toks[..] };
                for pair in body.chunks(2) {
                    if pair.len() != 2 {
                        return Err(FormatError::parse(ln, "RHS entry needs name/value pairs"));
                    }
                    let v = parse_num(ln, pair[1])?;
                    if Some(pair[0]) == obj_row.as_deref() {
                        obj_const = -v;
                    } else if let Some(&r) = row_idx.get(pair[0]) {
                        rhs[r] = v;
                    } else {
                        return Err(FormatError::parse(ln, format!("unknown row `{}`", pair[0])));
                    }
                }
            }
            Section::Bounds => {
                let code = toks[0].to_ascii_uppercase();
                let needs_value = matches!(code.as_str(), "UP" | "LO" | "FX" | "BV" | "LI" | "UI");
                let (cname, value) = match (toks.len(), needs_value) {
                    (4, true) => (toks[2], Some(parse_num(ln, toks[3])?)),
                    (3, true) if code == "BV" => (toks[2], None),
                    (3, false) => (toks[2], None),
                    (2, false) => (toks[1], None),
                    _ => return Err(FormatError::parse(ln, "malformed BOUNDS entry")),
                };
                let &j = col_idx
                    .get(cname)
                    .ok_or_else(|| FormatError::parse(ln, format!("unknown column `{cname}`")))?;
                let c = &mut cols[j];
                match code.as_str() {
                    "UP" => c.upper = value,
                    "LO" => c.lower = value,
                    "FX" => {
                        c.lower = value;
                        c.upper = value;
                    }
                    "FR" => {
                        c.lower = Some(f64::NEG_INFINITY);
                        c.upper = Some(f64::INFINITY);
                    }
                    "MI" => c.lower = Some(f64::NEG_INFINITY),
                    "PL" => c.upper = Some(f64::INFINITY),
                    "BV" => {
                        c.integer = true;
                        c.lower = Some(0.0);
                        c.upper = Some(1.0);
                    }
                    "LI" => {
                        c.integer = true;
                        c.lower = value;
                    }
                    "UI" => {
                        c.integer = true;
                        c.upper = value;
                    }
                    other => return Err(FormatError::parse(ln, format!("unknown bound type `{other}`"))),
                }
            }
        }
    }
    if !ended {
        return Err(FormatError::parse(text.lines().count(), "missing ENDATA"));
    }

    let col_name = |s: &str| -> String { map.map_or(s, |m| m.column(s)).to_string() };
    let row_name = |s: &str| -> String { map.map_or(s, |m| m.row(s)).to_string() };
    let mut ir = ModelIr::new(map.map_or(name, |m| m.model.clone()));
    let mut ids = Vec::with_capacity(cols.len());
    for c in &cols {
        let lower = c.lower.unwrap_or(0.0);
        let upper = c.upper.unwrap_or(if c.integer && c.lower.is_none() && c.upper.is_none() {
            1.0
        } else {
            f64::INFINITY
        });
        let kind = if c.integer {
            if lower >= 0.0 && upper <= 1.0 {
                VarKind::Binary
            } else {
                VarKind::Integer
            }
        } else {
            VarKind::Continuous
        };
        let n: Name = col_name(&c.name).parse().expect("name parsing is infallible");
        ids.push(ir.add_var(n, kind, lower, upper)?);
    }
    let mut row_terms: Vec<Vec<_>> = vec![Vec::new(); rows.len()];
    for (j, c) in cols.iter().enumerate() {
        for &(r, a) in &c.entries {
            row_terms[r].push((ids[j], a));
        }
    }
    for (r, (rname, s)) in rows.iter().enumerate() {
        let tag: Name = row_name(rname).parse().expect("name parsing is infallible");
        ir.add_constraint(tag, &row_terms[r], *s, rhs[r])?;
    }
    let mut expr = LinExpr::constant(obj_const);
    for (j, c) in cols.iter().enumerate() {
        expr.add_term(ids[j], c.obj);
    }
    ir.set_objective(sense, expr)?;
    Ok(ir)
}

fn parse_sense(ln: usize, s: &str) -> Result<ObjectiveSense, FormatError> {
    match s.to_ascii_uppercase().as_str() {
        "MAX" | "MAXIMIZE" => Ok(ObjectiveSense::Maximize),
        "MIN" | "MINIMIZE" => Ok(ObjectiveSense::Minimize),
        other => Err(FormatError::parse(ln, format!("unknown objective sense `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formatting() {
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(-2.5), "-2.5");
        assert_eq!(fmt_num(0.1 + 0.2), "0.3");
        assert_eq!(fmt_num(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(fmt_num(1e20), "1e20");
        assert_eq!(fmt_num(-0.0), "0");
    }
}
