use std::fmt::Write;

use super::{fbound_cells, Cmp, Constraint, Model, Objective};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::variety::Variety;

fn var_name(v: Variety) -> String {
    let (i, j) = v.coords();
    format!("x_{i}_{j}")
}

fn parse_var_name(s: &str) -> Option<Variety> {
    let rest = s.strip_prefix("x_")?;
    let (i, j) = rest.split_once('_')?;
    Variety::from_coords(i.parse().ok()?, j.parse().ok()?).ok()
}

/// Writes `terms` wrapped to short lines; continuation lines start with a
/// space, which the format reads as part of the same expression.
fn write_expr(out: &mut String, head: &str, terms: &[(Variety, i64)]) {
    let mut line = format!(" {head}");
    for (k, (v, c)) in terms.iter().enumerate() {
        let sign = if *c < 0 {
            "-"
        } else if k == 0 {
            ""
        } else {
            "+"
        };
        let mag = c.unsigned_abs();
        let coef = if mag == 1 { String::new() } else { format!("{mag} ") };
        let term = format!(" {sign}{}{coef}{}", if sign.is_empty() { "" } else { " " }, var_name(*v));
        if line.len() + term.len() > 78 {
            out.push_str(&line);
            out.push('\n');
            line = String::from("   ");
        }
        line.push_str(&term);
    }
    out.push_str(&line);
}

type Row = (Vec<(Variety, i64)>, Cmp, i64);

fn linear_rows(model: &Model) -> Result<Vec<Row>> {
    let mut rows = Vec::with_capacity(model.constraints().len());
    for c in model.constraints() {
        match c {
            Constraint::Linear { terms, cmp, rhs } => rows.push((terms.clone(), *cmp, *rhs)),
            Constraint::HallRequired { target, subset } => {
                let (terms, rhs) = Constraint::hall_terms(*target, *subset);
                rows.push((terms, Cmp::Ge, rhs));
            }
            Constraint::FBound { target, line } => {
                let cells = fbound_cells(*target, *line);
                // min(x, 2) is just x when the domain already stops at 2
                if let Some(v) = cells.iter().find(|v| model.domain(**v).hi > 2) {
                    return Err(Error::UnsupportedModel(format!(
                        "f-bound on {target} {line} needs min(x, 2) but x{v} may exceed 2"
                    )));
                }
                let mut terms = vec![(*target, 1)];
                terms.extend(cells.into_iter().map(|v| (v, 1)));
                rows.push((terms, Cmp::Le, 7));
            }
            Constraint::NonComposable { target } => {
                return Err(Error::UnsupportedModel(format!(
                    "the non-composability disjunction on {target} has no linear form; use the DIMACS export"
                )));
            }
        }
    }
    Ok(rows)
}

/// CPLEX LP text for models made of linear rows, Hall rows and f-bound cuts
/// over domains capped at 2.
pub fn export_lp(model: &Model) -> Result<String> {
    let rows = linear_rows(model)?;
    let mut out = String::new();
    writeln!(out, "\\ {}", model.name).expect("string write");
    let all: Vec<(Variety, i64)> = Variety::all().map(|v| (v, 1)).collect();
    match model.objective() {
        Objective::MaximizeTotal => {
            out.push_str("Maximize\n");
            write_expr(&mut out, "obj:", &all);
        }
        Objective::MinimizeTotal => {
            out.push_str("Minimize\n");
            write_expr(&mut out, "obj:", &all);
        }
        Objective::None => {
            out.push_str("Minimize\n");
            write_expr(&mut out, "obj:", &[]);
            write!(out, " 0 {}", var_name(Variety::from_index(0))).expect("string write");
        }
    }
    out.push_str("\nSubject To\n");
    for (k, (terms, cmp, rhs)) in rows.iter().enumerate() {
        if terms.is_empty() {
            // a constant row; keep it visible through a zero term
            write_expr(&mut out, &format!("c{}:", k + 1), &[]);
            write!(out, " 0 {}", var_name(Variety::from_index(0))).expect("string write");
        } else {
            write_expr(&mut out, &format!("c{}:", k + 1), terms);
        }
        writeln!(out, " {} {rhs}", cmp.symbol()).expect("string write");
    }
    out.push_str("Bounds\n");
    for v in Variety::all() {
        let d = model.domain(v);
        writeln!(out, " {} <= {} <= {}", d.lo, var_name(v), d.hi).expect("string write");
    }
    out.push_str("General\n");
    let mut line = String::new();
    for v in Variety::all() {
        if line.len() > 70 {
            writeln!(out, "{line}").expect("string write");
            line.clear();
        }
        write!(line, " {}", var_name(v)).expect("string write");
    }
    writeln!(out, "{line}\nEnd").expect("string write");
    Ok(out)
}

/// Reads variable values from a solver's solution listing: on each line, a
/// variable name followed (possibly after other tokens such as `*`) by its
/// value. Missing variables are zero.
pub fn decode_lp_solution(text: &str) -> Result<Instance> {
    let mut x = Instance::empty();
    for line in text.lines() {
        let tokens: Vec<&str> = line.split(|c: char| c.is_whitespace() || c == '=').filter(|t| !t.is_empty()).collect();
        for (k, tok) in tokens.iter().enumerate() {
            let Some(v) = parse_var_name(tok) else { continue };
            let Some(value) = tokens[k + 1..].iter().find_map(|t| t.parse::<f64>().ok()) else {
                continue;
            };
            let rounded = value.round();
            if (value - rounded).abs() > 1e-6 || rounded < 0.0 {
                return Err(Error::MalformedInstance(format!("{tok} = {value} is not a non-negative integer")));
            }
            x.set(v, rounded as u32);
        }
    }
    Ok(x)
}
