use super::propagate::{PruneCause, SearchState};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::model::Model;
use crate::symmetry::Symmetry;
use crate::variety::NUM_VARIETIES;

/// Lex-leader constraints `x <=lex sigma(x)` for every group element, where
/// `sigma(x)` is the permuted instance. Exactly the lexicographically
/// smallest member of each orbit satisfies all of them.
#[derive(Clone, Debug)]
pub struct LexLeader {
    /// For each non-identity element, `src[i]` is the variable whose value
    /// lands on position `i` after permuting.
    sources: Vec<[u8; NUM_VARIETIES]>,
}

impl LexLeader {
    /// Fails unless every element of `group` stabilizes `model`.
    pub fn new(model: &Model, group: &[Symmetry]) -> Result<LexLeader> {
        if let Some(s) = model.first_non_stabilizing(group) {
            return Err(Error::InvalidInput(format!("symmetry {} does not stabilize model {}", s.id(), model.name)));
        }
        let mut sources = Vec::with_capacity(group.len());
        for s in group {
            let inv = s.inverse();
            let src = *inv.variety_perm();
            if src.iter().enumerate().any(|(i, &j)| i != j as usize) {
                sources.push(src);
            }
        }
        Ok(LexLeader { sources })
    }

    pub fn trivial() -> LexLeader {
        LexLeader { sources: Vec::new() }
    }

    /// Number of group elements, identity included.
    pub fn group_order(&self) -> usize {
        self.sources.len() + 1
    }

    /// True when `x` is the lexicographically smallest member of its orbit.
    pub fn is_leader(&self, x: &Instance) -> bool {
        let c = x.counts();
        self.sources.iter().all(|src| {
            for (i, &j) in src.iter().enumerate() {
                let (a, b) = (c[i], c[j as usize]);
                if a != b {
                    return a < b;
                }
            }
            true
        })
    }

    /// Enforces `x_i <= x_src(i)` at the first position where `x` and its
    /// image are not already fixed to the same value.
    pub(crate) fn propagate(&self, s: &mut SearchState) -> std::result::Result<bool, PruneCause> {
        let mut changed = false;
        for src in &self.sources {
            for (i, &j) in src.iter().enumerate() {
                let j = j as usize;
                if i == j {
                    continue;
                }
                if s.lb[i] > s.ub[j] {
                    return Err(PruneCause::Symmetry);
                }
                if s.ub[i] > s.ub[j] {
                    s.ub[i] = s.ub[j];
                    changed = true;
                }
                if s.lb[j] < s.lb[i] {
                    s.lb[j] = s.lb[i];
                    changed = true;
                }
                if !(s.is_fixed(i) && s.is_fixed(j) && s.lb[i] == s.lb[j]) {
                    break;
                }
            }
        }
        Ok(changed)
    }
}

/// Applies the lex-leader cuts of `group` to `state` (once, without the
/// model's other propagators). `Ok(false)` means the state holds no orbit
/// leader and can be discarded.
pub fn symmetry_break(state: &mut SearchState, model: &Model, group: &[Symmetry]) -> Result<bool> {
    let lex = LexLeader::new(model, group)?;
    loop {
        match lex.propagate(state) {
            Err(_) => return Ok(false),
            Ok(false) => return Ok(true),
            Ok(true) => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_existence_model, build_max_infeasible_model, DomainMode};
    use crate::search::compile::CompiledModel;
    use crate::variety::{mask_of, Variety};

    #[test]
    fn non_stabilizing_group_is_rejected() {
        let t = Variety::from_coords(1, 2).unwrap();
        let m = build_existence_model(mask_of([t]), DomainMode::Paper);
        let all: Vec<Symmetry> = Symmetry::all().collect();
        assert!(matches!(LexLeader::new(&m, &all), Err(Error::InvalidInput(_))));
        assert_eq!(LexLeader::new(&m, &m.symmetry_group()).unwrap().group_order(), 48);
    }

    #[test]
    fn identity_group_leaves_state_alone() {
        let m = build_max_infeasible_model(5, DomainMode::Paper);
        let mut s = SearchState::root(&CompiledModel::new(&m));
        let before = s;
        assert!(symmetry_break(&mut s, &m, &[Symmetry::identity()]).unwrap());
        assert_eq!(s, before);
    }

    #[test]
    fn leaders_are_orbit_minima() {
        let m = build_max_infeasible_model(5, DomainMode::Paper);
        let lex = LexLeader::new(&m, &m.symmetry_group()).unwrap();
        let v = Variety::from_coords(4, 2).unwrap();
        let x = Instance::copies(v, 2);
        let orbit: Vec<Instance> = Symmetry::all().map(|s| x.permuted(&s)).collect();
        let min = *orbit.iter().min().unwrap();
        for y in &orbit {
            assert_eq!(lex.is_leader(y), *y == min);
        }
    }
}
