use std::fmt;

use serde::Serialize;

use super::{fbound_cells, Constraint, ConstraintKind, Domain, Model};
use crate::composability::adjacent_cube_count;
use crate::instance::Instance;
use crate::variety::Variety;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    Domain { variety: Variety, value: u32, domain: Domain },
    Constraint { index: usize, kind: ConstraintKind, detail: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Domain { variety, value, domain } => {
                write!(f, "x{variety} = {value} outside {}..={}", domain.lo, domain.hi)
            }
            Violation::Constraint { index, kind, detail } => write!(f, "constraint {index} ({kind:?}): {detail}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn satisfied(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Why `x` violates `c`, if it does.
pub(crate) fn violation(x: &Instance, c: &Constraint) -> Option<String> {
    match c {
        Constraint::Linear { terms, cmp, rhs } => {
            let lhs: i64 = terms.iter().map(|(v, k)| k * i64::from(x.get(*v))).sum();
            (!cmp.holds(lhs, *rhs)).then(|| format!("lhs {lhs} {} {rhs} fails", cmp.symbol()))
        }
        Constraint::HallRequired { target, subset } => {
            let cover = adjacent_cube_count(x.counts(), *target, *subset);
            let need = u64::from(subset.count_ones());
            (cover < need).then(|| format!("target {target} subset {subset:#04x}: {cover} adjacent cubes < {need}"))
        }
        Constraint::NonComposable { target } => {
            let deficient =
                (1..=255u8).any(|s| adjacent_cube_count(x.counts(), *target, s) < u64::from(s.count_ones()));
            (!deficient).then(|| format!("every triple subset of {target} has enough adjacent cubes"))
        }
        Constraint::FBound { target, line } => {
            let lhs = x.get(*target) + fbound_cells(*target, *line).iter().map(|v| x.get(*v).min(2)).sum::<u32>();
            (lhs > 7).then(|| format!("target {target} {line}: {lhs} > 7"))
        }
    }
}

/// Evaluates every domain and constraint of `model` on `x`.
pub fn check_assignment(model: &Model, x: &Instance) -> CheckReport {
    let mut violations = Vec::new();
    for v in Variety::all() {
        let d = model.domain(v);
        if !d.contains(x.get(v)) {
            violations.push(Violation::Domain { variety: v, value: x.get(v), domain: d });
        }
    }
    for (index, c) in model.constraints().iter().enumerate() {
        if let Some(detail) = violation(x, c) {
            violations.push(Violation::Constraint { index, kind: c.kind(), detail });
        }
    }
    CheckReport { violations }
}
