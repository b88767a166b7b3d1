use std::collections::HashMap;

use crate::model::{fbound_cells, Cmp, Constraint, Model, Objective};
use crate::variety::{Variety, VarietyMask, NUM_VARIETIES};

/// A linear row `sum coef * x >= rhs` (`<=` and `=` rows are split).
#[derive(Clone, Debug)]
pub(crate) struct Row {
    pub terms: Vec<(u8, i64)>,
    pub rhs: i64,
}

/// The model in the shape the propagators want: the total size as a
/// window, complete Hall families as "required" targets, disjunctions as
/// "forbidden" targets, everything else linear.
#[derive(Clone, Debug)]
pub struct CompiledModel {
    pub(crate) lo: [u32; NUM_VARIETIES],
    pub(crate) hi: [u32; NUM_VARIETIES],
    pub(crate) rows: Vec<Row>,
    pub(crate) total_lo: i64,
    pub(crate) total_hi: i64,
    pub(crate) required: VarietyMask,
    pub(crate) forbidden: VarietyMask,
    /// `(target, the line's compatible cells)`.
    pub(crate) fbounds: Vec<(u8, Vec<u8>)>,
    pub(crate) objective: Objective,
}

fn is_total(terms: &[(Variety, i64)]) -> bool {
    let mut seen = [0i64; NUM_VARIETIES];
    for (v, c) in terms {
        seen[v.index()] += c;
    }
    seen.iter().all(|&c| c == 1)
}

impl CompiledModel {
    pub fn new(model: &Model) -> CompiledModel {
        let mut m = CompiledModel {
            lo: model.domains().map(|d| d.lo),
            hi: model.domains().map(|d| d.hi),
            rows: Vec::new(),
            total_lo: 0,
            total_hi: i64::MAX,
            required: 0,
            forbidden: 0,
            fbounds: Vec::new(),
            objective: model.objective(),
        };
        let mut hall: HashMap<Variety, [bool; 256]> = HashMap::new();
        for c in model.constraints() {
            match c {
                Constraint::Linear { terms, cmp, rhs } if is_total(terms) => {
                    if matches!(cmp, Cmp::Ge | Cmp::Eq) {
                        m.total_lo = m.total_lo.max(*rhs);
                    }
                    if matches!(cmp, Cmp::Le | Cmp::Eq) {
                        m.total_hi = m.total_hi.min(*rhs);
                    }
                }
                Constraint::Linear { terms, cmp, rhs } => m.push_linear(terms, *cmp, *rhs),
                Constraint::HallRequired { target, subset } => {
                    hall.entry(*target).or_insert([false; 256])[*subset as usize] = true;
                }
                Constraint::NonComposable { target } => m.forbidden |= target.bit(),
                Constraint::FBound { target, line } => {
                    let cells = fbound_cells(*target, *line).iter().map(|v| v.index() as u8).collect();
                    m.fbounds.push((target.index() as u8, cells));
                }
            }
        }
        let mut partial: Vec<(Variety, u8)> = Vec::new();
        for (t, seen) in &hall {
            if seen[1..].iter().all(|&s| s) {
                m.required |= t.bit();
            } else {
                partial.extend((1..=255u8).filter(|&s| seen[s as usize]).map(|s| (*t, s)));
            }
        }
        partial.sort();
        for (t, s) in partial {
            let (terms, rhs) = Constraint::hall_terms(t, s);
            m.push_linear(&terms, Cmp::Ge, rhs);
        }
        m
    }

    fn push_linear(&mut self, terms: &[(Variety, i64)], cmp: Cmp, rhs: i64) {
        let pos: Vec<(u8, i64)> = terms.iter().map(|(v, c)| (v.index() as u8, *c)).collect();
        if matches!(cmp, Cmp::Ge | Cmp::Eq) {
            self.rows.push(Row { terms: pos.clone(), rhs });
        }
        if matches!(cmp, Cmp::Le | Cmp::Eq) {
            self.rows.push(Row { terms: pos.iter().map(|(v, c)| (*v, -c)).collect(), rhs: -rhs });
        }
    }

    pub fn required(&self) -> VarietyMask {
        self.required
    }

    pub fn forbidden(&self) -> VarietyMask {
        self.forbidden
    }

    pub fn total_window(&self) -> (i64, i64) {
        (self.total_lo, self.total_hi)
    }

    pub fn objective(&self) -> Objective {
        self.objective
    }
}
