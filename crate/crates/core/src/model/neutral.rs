//! Line-oriented dump of a model: a header, one `var` line per count and one
//! line per constraint. Structured constraints carry their identifying
//! header before `:` and their fully expanded rows after it.

use std::fmt::Write;

use super::{fbound_cells, Cmp, Constraint, Domain, Line, Model, Objective};
use crate::error::{Error, Result};
use crate::variety::Variety;

fn name(v: Variety) -> String {
    let (i, j) = v.coords();
    format!("x_{i}_{j}")
}

fn row(terms: &[(Variety, i64)]) -> String {
    terms.iter().map(|(v, c)| format!("{c:+} {}", name(*v))).collect::<Vec<_>>().join(" ")
}

fn constraint_line(k: usize, c: &Constraint) -> String {
    match c {
        Constraint::Linear { terms, cmp, rhs } => format!("c{k} linear {} {rhs} : {}", cmp.symbol(), row(terms)),
        Constraint::HallRequired { target, subset } => {
            let (terms, rhs) = Constraint::hall_terms(*target, *subset);
            format!("c{k} hall {target} subset {subset:#04x} >= {rhs} : {}", row(&terms))
        }
        Constraint::NonComposable { target } => {
            let alternatives: Vec<String> = (1..=255u8)
                .map(|s| {
                    let (terms, need) = Constraint::hall_terms(*target, s);
                    format!("[ {} < {need} ]", row(&terms))
                })
                .collect();
            format!("c{k} noncomposable {target} : any of {} : {}", alternatives.len(), alternatives.join(" | "))
        }
        Constraint::FBound { target, line } => {
            let mut parts = vec![format!("+1 {}", name(*target))];
            parts.extend(fbound_cells(*target, *line).into_iter().map(|v| format!("+1 min2({})", name(v))));
            format!("c{k} fbound {target} {line} <= 7 : {}", parts.join(" "))
        }
    }
}

pub fn export_neutral(model: &Model) -> String {
    let mut out = String::new();
    writeln!(out, "# eightblocks model {}", model.name).expect("string write");
    let objective = match model.objective() {
        Objective::None => "none",
        Objective::MinimizeTotal => "minimize-total",
        Objective::MaximizeTotal => "maximize-total",
    };
    writeln!(out, "objective {objective}").expect("string write");
    for v in Variety::all() {
        let d = model.domain(v);
        writeln!(out, "var {} {} {}", name(v), d.lo, d.hi).expect("string write");
    }
    for (k, c) in model.constraints().iter().enumerate() {
        writeln!(out, "{}", constraint_line(k + 1, c)).expect("string write");
    }
    out
}

fn bad(line: &str) -> Error {
    let shown: String = line.chars().take(60).collect();
    Error::MalformedInstance(format!("unreadable model line: {shown}"))
}

fn parse_var(tok: &str) -> Option<Variety> {
    let (i, j) = tok.strip_prefix("x_")?.split_once('_')?;
    Variety::from_coords(i.parse().ok()?, j.parse().ok()?).ok()
}

fn parse_cmp(tok: &str) -> Option<Cmp> {
    match tok {
        ">=" => Some(Cmp::Ge),
        "<=" => Some(Cmp::Le),
        "=" => Some(Cmp::Eq),
        _ => None,
    }
}

fn parse_constraint(line: &str) -> Option<Constraint> {
    let (head, body) = line.split_once(" : ")?;
    let tok: Vec<&str> = head.split_whitespace().collect();
    match tok.get(1).copied()? {
        "linear" => {
            let cmp = parse_cmp(tok.get(2)?)?;
            let rhs = tok.get(3)?.parse().ok()?;
            let b: Vec<&str> = body.split_whitespace().collect();
            if !b.len().is_multiple_of(2) {
                return None;
            }
            let terms =
                b.chunks(2).map(|p| Some((parse_var(p[1])?, p[0].parse().ok()?))).collect::<Option<Vec<_>>>()?;
            Some(Constraint::Linear { terms, cmp, rhs })
        }
        "hall" => {
            let target = tok.get(2)?.parse().ok()?;
            let subset = u8::from_str_radix(tok.get(4)?.strip_prefix("0x")?, 16).ok()?;
            Some(Constraint::HallRequired { target, subset })
        }
        "noncomposable" => Some(Constraint::NonComposable { target: tok.get(2)?.parse().ok()? }),
        "fbound" => {
            let target = tok.get(2)?.parse().ok()?;
            let index = tok.get(4)?.parse().ok()?;
            let line = match *tok.get(3)? {
                "row" => Line::Row(index),
                "col" => Line::Col(index),
                _ => return None,
            };
            Some(Constraint::FBound { target, line })
        }
        _ => None,
    }
}

/// Reads a dump written by [`export_neutral`]. Expanded rows must match the
/// structured headers exactly.
pub fn parse_neutral(text: &str) -> Result<Model> {
    let mut lines = text.lines();
    let first = lines.next().ok_or_else(|| bad(""))?;
    let model_name = first.strip_prefix("# eightblocks model ").ok_or_else(|| bad(first))?;
    let mut m = Model::new(model_name, 0);
    for line in lines {
        let tok: Vec<&str> = line.split_whitespace().collect();
        match tok.first().copied() {
            None => continue,
            Some("objective") => {
                m.set_objective(match tok.get(1).copied() {
                    Some("none") => Objective::None,
                    Some("minimize-total") => Objective::MinimizeTotal,
                    Some("maximize-total") => Objective::MaximizeTotal,
                    _ => return Err(bad(line)),
                });
            }
            Some("var") => {
                let v = tok.get(1).and_then(|t| parse_var(t)).ok_or_else(|| bad(line))?;
                let lo = tok.get(2).and_then(|t| t.parse().ok()).ok_or_else(|| bad(line))?;
                let hi = tok.get(3).and_then(|t| t.parse().ok()).ok_or_else(|| bad(line))?;
                m.set_domain(v, Domain::new(lo, hi));
            }
            Some(_) => {
                let c = parse_constraint(line).ok_or_else(|| bad(line))?;
                if constraint_line(m.constraints().len() + 1, &c) != line {
                    return Err(bad(line));
                }
                m.push(c);
            }
        }
    }
    Ok(m)
}
