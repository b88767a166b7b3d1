//! Constraint models over the 30 count variables `x_(i,j)`.
//!
//! A [`Model`] is a neutral description: integer domains, a list of
//! [`Constraint`]s and an optional objective on the total size. It is
//! solved by [`crate::search`] or exported with [`export_lp`],
//! [`export_dimacs`] and [`export_neutral`].

mod build;
mod check;
mod dimacs;
mod lp;
mod neutral;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use build::{build_existence_model, build_max_infeasible_model, build_min_universal_model, fbound_cells};
pub use check::{check_assignment, CheckReport, Violation};
pub use dimacs::{decode_dimacs_solution, export_dimacs, Cnf, DimacsEncoding};
pub use lp::{decode_lp_solution, export_lp};
pub use neutral::{export_neutral, parse_neutral};

use crate::composability::{target_info, TripleSubset};
use crate::symmetry::Symmetry;
use crate::variety::{iter_mask, Variety, VarietyMask, NUM_VARIETIES};

/// Domain caps for variables outside the required set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DomainMode {
    /// `0..=2` off the required set, `0..=8` on it.
    Paper,
    /// `0..=7` off the required set, `0..=8` on it.
    Rigorous,
}

impl DomainMode {
    pub fn off_cap(self) -> u32 {
        match self {
            DomainMode::Paper => 2,
            DomainMode::Rigorous => 7,
        }
    }
}

impl std::str::FromStr for DomainMode {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "paper" => Ok(DomainMode::Paper),
            "rigorous" => Ok(DomainMode::Rigorous),
            _ => Err(crate::Error::InvalidInput(format!("unknown mode {s:?} (expected paper or rigorous)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Domain {
    pub lo: u32,
    pub hi: u32,
}

impl Domain {
    pub fn new(lo: u32, hi: u32) -> Domain {
        Domain { lo, hi }
    }

    pub fn contains(&self, x: u32) -> bool {
        self.lo <= x && x <= self.hi
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cmp {
    Ge,
    Le,
    Eq,
}

impl Cmp {
    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Cmp::Ge => lhs >= rhs,
            Cmp::Le => lhs <= rhs,
            Cmp::Eq => lhs == rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Ge => ">=",
            Cmp::Le => "<=",
            Cmp::Eq => "=",
        }
    }
}

/// A table row or column used by an f-bound cut.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Line {
    Row(usize),
    Col(usize),
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Line::Row(r) => write!(f, "row {r}"),
            Line::Col(c) => write!(f, "col {c}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Constraint {
    /// `sum coef * x  cmp  rhs`.
    Linear { terms: Vec<(Variety, i64)>, cmp: Cmp, rhs: i64 },
    /// `x_t + sum of x_v over compatible v touching the subset >= |subset|`.
    HallRequired { target: Variety, subset: TripleSubset },
    /// Some subset of the target's triples has fewer adjacent cubes than
    /// triples, i.e. the target is not composable.
    NonComposable { target: Variety },
    /// `x_t + sum over the line's compatible cells of min(x_v, 2) <= 7`.
    FBound { target: Variety, line: Line },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConstraintKind {
    LinearGE,
    LinearLE,
    LinearEQ,
    HallRequired,
    NonComposableDisjunction,
    FBound,
}

impl Constraint {
    pub fn kind(&self) -> ConstraintKind {
        match self {
            Constraint::Linear { cmp: Cmp::Ge, .. } => ConstraintKind::LinearGE,
            Constraint::Linear { cmp: Cmp::Le, .. } => ConstraintKind::LinearLE,
            Constraint::Linear { cmp: Cmp::Eq, .. } => ConstraintKind::LinearEQ,
            Constraint::HallRequired { .. } => ConstraintKind::HallRequired,
            Constraint::NonComposable { .. } => ConstraintKind::NonComposableDisjunction,
            Constraint::FBound { .. } => ConstraintKind::FBound,
        }
    }

    /// `sum x over all varieties  cmp  rhs`.
    pub fn total(cmp: Cmp, rhs: i64) -> Constraint {
        Constraint::Linear { terms: Variety::all().map(|v| (v, 1)).collect(), cmp, rhs }
    }

    /// Linear form of a Hall row: unit terms and `|subset|` on the right.
    pub fn hall_terms(target: Variety, subset: TripleSubset) -> (Vec<(Variety, i64)>, i64) {
        let mut terms = vec![(target, 1)];
        terms.extend(iter_mask(target_info(target).neighbors[subset as usize]).map(|v| (v, 1)));
        terms.sort();
        (terms, i64::from(subset.count_ones()))
    }

    fn key(&self) -> ConstraintKey {
        match self {
            Constraint::Linear { terms, cmp, rhs } => {
                let mut merged: HashMap<usize, i64> = HashMap::new();
                for (v, c) in terms {
                    *merged.entry(v.index()).or_default() += c;
                }
                let mut t: Vec<(u8, i64)> =
                    merged.into_iter().filter(|(_, c)| *c != 0).map(|(v, c)| (v as u8, c)).collect();
                t.sort();
                ConstraintKey::Linear(t, *cmp, *rhs)
            }
            Constraint::HallRequired { target, subset } => {
                ConstraintKey::Hall(target.index() as u8, global_triple_mask(*target, *subset))
            }
            Constraint::NonComposable { target } => ConstraintKey::NonComposable(target.index() as u8),
            Constraint::FBound { target, line } => {
                ConstraintKey::FBound(target.index() as u8, fbound_mask(*target, *line))
            }
        }
    }
}

fn global_triple_mask(target: Variety, subset: TripleSubset) -> u64 {
    target.triples().iter().enumerate().filter(|(k, _)| subset & (1 << k) != 0).fold(0, |m, (_, t)| m | 1 << t.id())
}

fn fbound_mask(target: Variety, line: Line) -> VarietyMask {
    fbound_cells(target, line).into_iter().fold(0, |m, v| m | v.bit())
}

/// Symmetry-comparable form of a constraint.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum ConstraintKey {
    Linear(Vec<(u8, i64)>, Cmp, i64),
    Hall(u8, u64),
    NonComposable(u8),
    FBound(u8, VarietyMask),
}

impl ConstraintKey {
    fn image(&self, s: &Symmetry) -> ConstraintKey {
        let p = s.variety_perm();
        match self {
            ConstraintKey::Linear(terms, cmp, rhs) => {
                let mut t: Vec<(u8, i64)> = terms.iter().map(|(v, c)| (p[*v as usize], *c)).collect();
                t.sort();
                ConstraintKey::Linear(t, *cmp, *rhs)
            }
            ConstraintKey::Hall(t, mask) => ConstraintKey::Hall(p[*t as usize], s.apply_triple_mask(*mask)),
            ConstraintKey::NonComposable(t) => ConstraintKey::NonComposable(p[*t as usize]),
            ConstraintKey::FBound(t, mask) => ConstraintKey::FBound(p[*t as usize], s.apply_mask(*mask)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Objective {
    None,
    MinimizeTotal,
    MaximizeTotal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub name: String,
    domains: [Domain; NUM_VARIETIES],
    constraints: Vec<Constraint>,
    objective: Objective,
}

impl Model {
    /// All domains `0..=hi`, no constraints.
    pub fn new(name: impl Into<String>, hi: u32) -> Model {
        Model {
            name: name.into(),
            domains: [Domain::new(0, hi); NUM_VARIETIES],
            constraints: Vec::new(),
            objective: Objective::None,
        }
    }

    pub fn domains(&self) -> &[Domain; NUM_VARIETIES] {
        &self.domains
    }

    pub fn domain(&self, v: Variety) -> Domain {
        self.domains[v.index()]
    }

    pub fn set_domain(&mut self, v: Variety, d: Domain) {
        self.domains[v.index()] = d;
    }

    /// Fixes every variable outside `support` to zero.
    pub fn restrict_support(&mut self, support: VarietyMask) {
        for v in Variety::all() {
            if support & v.bit() == 0 {
                self.domains[v.index()] = Domain::new(0, 0);
            }
        }
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn push(&mut self, c: Constraint) {
        self.constraints.push(c);
    }

    pub fn objective(&self) -> Objective {
        self.objective
    }

    pub fn set_objective(&mut self, o: Objective) {
        self.objective = o;
    }

    pub fn count(&self, kind: ConstraintKind) -> usize {
        self.constraints.iter().filter(|c| c.kind() == kind).count()
    }

    /// True when `s` maps domains and the constraint multiset onto
    /// themselves.
    pub fn is_stabilized_by(&self, s: &Symmetry) -> bool {
        self.stabilized_by(&self.key_counts(), s)
    }

    fn key_counts(&self) -> HashMap<ConstraintKey, usize> {
        let mut keys = HashMap::new();
        for c in &self.constraints {
            *keys.entry(c.key()).or_insert(0) += 1;
        }
        keys
    }

    fn stabilized_by(&self, keys: &HashMap<ConstraintKey, usize>, s: &Symmetry) -> bool {
        if Variety::all().any(|v| self.domains[s.apply(v).index()] != self.domains[v.index()]) {
            return false;
        }
        keys.iter().all(|(k, n)| keys.get(&k.image(s)) == Some(n))
    }

    /// The first element of `group` that does not stabilize the model.
    pub fn first_non_stabilizing(&self, group: &[Symmetry]) -> Option<Symmetry> {
        let keys = self.key_counts();
        group.iter().find(|s| !self.stabilized_by(&keys, s)).copied()
    }

    /// Every group element stabilizing the model; the identity comes first.
    pub fn symmetry_group(&self) -> Vec<Symmetry> {
        let keys = self.key_counts();
        Symmetry::all().filter(|s| self.stabilized_by(&keys, s)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variety::mask_of;

    fn v(i: usize, j: usize) -> Variety {
        Variety::from_coords(i, j).unwrap()
    }

    #[test]
    fn stabilizers_follow_the_required_set() {
        let all = build_min_universal_model();
        assert_eq!(all.symmetry_group().len(), 1440);
        let row1: Vec<Variety> = (2..=6).map(|j| v(1, j)).collect();
        let m = build_existence_model(mask_of(row1), DomainMode::Paper);
        let g = m.symmetry_group();
        assert_eq!(g.len(), 120);
        let mut custom = Model::new("custom", 8);
        custom.push(Constraint::Linear { terms: vec![(v(1, 2), 1)], cmp: Cmp::Ge, rhs: 9 });
        assert_eq!(custom.symmetry_group().len(), 48);
    }

    #[test]
    fn hall_terms_expand_neighbors() {
        let (terms, rhs) = Constraint::hall_terms(v(1, 2), 0xff);
        assert_eq!(rhs, 8);
        assert_eq!(terms.len(), 21);
        let (terms, rhs) = Constraint::hall_terms(v(1, 2), 0);
        assert_eq!((terms.len(), rhs), (1, 0));
    }
}
