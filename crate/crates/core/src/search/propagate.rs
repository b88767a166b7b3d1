use std::fmt;

use serde::{Deserialize, Serialize};

use super::compile::CompiledModel;
use crate::composability::{target_info, tree_components};
use crate::instance::Instance;
use crate::variety::{iter_mask, Variety, NUM_VARIETIES};

/// Current bounds of every count; the search only ever shrinks them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchState {
    pub lb: [u32; NUM_VARIETIES],
    pub ub: [u32; NUM_VARIETIES],
}

impl SearchState {
    pub fn root(model: &CompiledModel) -> SearchState {
        SearchState { lb: model.lo, ub: model.hi }
    }

    pub fn is_fixed(&self, v: usize) -> bool {
        self.lb[v] == self.ub[v]
    }

    pub fn is_complete(&self) -> bool {
        (0..NUM_VARIETIES).all(|v| self.is_fixed(v))
    }

    pub fn total_lb(&self) -> i64 {
        self.lb.iter().map(|&x| i64::from(x)).sum()
    }

    pub fn total_ub(&self) -> i64 {
        self.ub.iter().map(|&x| i64::from(x)).sum()
    }

    /// The assignment, once every count is fixed.
    pub fn instance(&self) -> Option<Instance> {
        self.is_complete().then(|| Instance::from_counts(self.lb))
    }

    fn set_ub(&mut self, v: usize, x: u32, cause: PruneCause) -> Result<bool, PruneCause> {
        if x >= self.ub[v] {
            return Ok(false);
        }
        if x < self.lb[v] {
            return Err(cause);
        }
        self.ub[v] = x;
        Ok(true)
    }

    fn set_lb(&mut self, v: usize, x: u32, cause: PruneCause) -> Result<bool, PruneCause> {
        if x <= self.lb[v] {
            return Ok(false);
        }
        if x > self.ub[v] {
            return Err(cause);
        }
        self.lb[v] = x;
        Ok(true)
    }
}

/// Why a branch was cut.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PruneCause {
    /// The total size window cannot be met.
    Total,
    Linear,
    /// A required target cannot become composable even at the upper bounds.
    Required,
    /// A forbidden target is already composable at the lower bounds.
    Forbidden,
    FBound,
    /// Required targets need more cubes than the total allows.
    CoverBound,
    Symmetry,
}

impl PruneCause {
    pub const ALL: [PruneCause; 7] = [
        PruneCause::Total,
        PruneCause::Linear,
        PruneCause::Required,
        PruneCause::Forbidden,
        PruneCause::FBound,
        PruneCause::CoverBound,
        PruneCause::Symmetry,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PruneCause::Total => "total",
            PruneCause::Linear => "linear",
            PruneCause::Required => "required",
            PruneCause::Forbidden => "forbidden",
            PruneCause::FBound => "fbound",
            PruneCause::CoverBound => "cover-bound",
            PruneCause::Symmetry => "symmetry",
        }
    }
}

impl fmt::Display for PruneCause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn total(s: &mut SearchState, m: &CompiledModel) -> Result<bool, PruneCause> {
    let (lo, hi) = (s.total_lb(), s.total_ub());
    if lo > m.total_hi || hi < m.total_lo {
        return Err(PruneCause::Total);
    }
    let mut changed = false;
    for v in 0..NUM_VARIETIES {
        let room = m.total_hi - (lo - i64::from(s.lb[v]));
        if room < i64::from(s.ub[v]) {
            changed |= s.set_ub(v, room as u32, PruneCause::Total)?;
        }
        let need = m.total_lo - (hi - i64::from(s.ub[v]));
        if need > i64::from(s.lb[v]) {
            changed |= s.set_lb(v, need as u32, PruneCause::Total)?;
        }
    }
    Ok(changed)
}

fn linear(s: &mut SearchState, m: &CompiledModel) -> Result<bool, PruneCause> {
    let mut changed = false;
    for row in &m.rows {
        let best = |s: &SearchState, v: u8, c: i64| {
            if c > 0 {
                c * i64::from(s.ub[v as usize])
            } else {
                c * i64::from(s.lb[v as usize])
            }
        };
        let max: i64 = row.terms.iter().map(|&(v, c)| best(s, v, c)).sum();
        if max < row.rhs {
            return Err(PruneCause::Linear);
        }
        for &(v, c) in &row.terms {
            // c * x >= rhs - (max - best(v))
            let need = row.rhs - (max - best(s, v, c));
            if c > 0 {
                let lb = need.div_euclid(c) + i64::from(need.rem_euclid(c) != 0);
                if lb > i64::from(s.lb[v as usize]) {
                    changed |= s.set_lb(v as usize, lb.min(i64::from(u32::MAX)) as u32, PruneCause::Linear)?;
                }
            } else if c < 0 {
                // x <= need / c rounded down, with c < 0
                let ub = (-need).div_euclid(-c);
                if ub < i64::from(s.ub[v as usize]) {
                    if ub < 0 {
                        return Err(PruneCause::Linear);
                    }
                    changed |= s.set_ub(v as usize, ub as u32, PruneCause::Linear)?;
                }
            }
        }
    }
    Ok(changed)
}

fn fbounds(s: &mut SearchState, m: &CompiledModel) -> Result<bool, PruneCause> {
    let mut changed = false;
    for (t, cells) in &m.fbounds {
        let t = *t as usize;
        let low: u32 = s.lb[t] + cells.iter().map(|&v| s.lb[v as usize].min(2)).sum::<u32>();
        if low > 7 {
            return Err(PruneCause::FBound);
        }
        changed |= s.set_ub(t, 7 - (low - s.lb[t]), PruneCause::FBound)?;
        for &v in cells {
            let v = v as usize;
            let room = 7 - (low - s.lb[v].min(2));
            if room < 2 {
                changed |= s.set_ub(v, room, PruneCause::FBound)?;
            }
        }
    }
    Ok(changed)
}

/// Forbidden targets must stay below their tree count. Raising a count
/// never adds tree components, so the lower bounds give the most room.
fn forbidden(s: &mut SearchState, m: &CompiledModel, tight: &mut [u32; NUM_VARIETIES]) -> Result<bool, PruneCause> {
    let mut changed = false;
    for t in iter_mask(m.forbidden) {
        let ti = t.index();
        let trees = tree_components(&s.lb, t);
        if s.lb[ti] >= trees {
            return Err(PruneCause::Forbidden);
        }
        changed |= s.set_ub(ti, trees - 1, PruneCause::Forbidden)?;
        // one cube takes away at most one tree, and only the first two
        // copies of a variety can
        if s.lb[ti] + 2 < trees {
            continue;
        }
        for &(v, _, _) in &target_info(t).edges {
            let v = v as usize;
            if s.lb[v] >= 2 || s.is_fixed(v) {
                continue;
            }
            tight[v] += 1;
            let mut probe = s.lb;
            let top = s.ub[v].min(2);
            for k in s.lb[v] + 1..=top {
                probe[v] = k;
                if s.lb[ti] >= tree_components(&probe, t) {
                    changed |= s.set_ub(v, k - 1, PruneCause::Forbidden)?;
                    break;
                }
            }
        }
    }
    Ok(changed)
}

/// Required targets must be composable at the upper bounds; any count
/// whose lowering would break that gets its lower bound raised.
fn required(s: &mut SearchState, m: &CompiledModel, tight: &mut [u32; NUM_VARIETIES]) -> Result<bool, PruneCause> {
    let mut changed = false;
    for t in iter_mask(m.required) {
        let ti = t.index();
        let trees = tree_components(&s.ub, t);
        if s.ub[ti] < trees {
            return Err(PruneCause::Required);
        }
        changed |= s.set_lb(ti, trees, PruneCause::Required)?;
        if s.ub[ti] >= 8 {
            continue;
        }
        for &(v, _, _) in &target_info(t).edges {
            let v = v as usize;
            if s.lb[v] >= 2 || s.is_fixed(v) {
                continue;
            }
            tight[v] += 1;
            let mut probe = s.ub;
            let top = s.ub[v].min(2);
            let first_ok = (s.lb[v]..top)
                .find(|&k| {
                    probe[v] = k;
                    tree_components(&probe, t) <= s.ub[ti]
                })
                .unwrap_or(top);
            changed |= s.set_lb(v, first_ok, PruneCause::Required)?;
        }
    }
    Ok(changed)
}

/// Every required target needs at least eight cubes among itself and its
/// compatible varieties, and one extra cube serves at most 21 targets.
fn cover_bound(s: &SearchState, m: &CompiledModel) -> Result<(), PruneCause> {
    if m.required == 0 || m.total_hi == i64::MAX {
        return Ok(());
    }
    let mut deficient = 0u32;
    let mut need = 0i64;
    for t in iter_mask(m.required) {
        let cover: u32 = s.lb[t.index()] + iter_mask(t.compatible_mask()).map(|v| s.lb[v.index()]).sum::<u32>();
        if cover < 8 {
            deficient |= t.bit();
            need += i64::from(8 - cover);
        }
    }
    if need == 0 {
        return Ok(());
    }
    let best = Variety::all()
        .filter(|v| s.ub[v.index()] > s.lb[v.index()])
        .map(|v| ((v.compatible_mask() | v.bit()) & deficient).count_ones())
        .max()
        .unwrap_or(0);
    if best == 0 || s.total_lb() + (need as u64).div_ceil(u64::from(best)) as i64 > m.total_hi {
        return Err(PruneCause::CoverBound);
    }
    Ok(())
}

/// Runs every propagator to a fixpoint. `tight[v]` counts the targets for
/// which `v` is currently critical, as input for variable ordering.
pub(crate) fn propagate_counting(
    s: &mut SearchState,
    m: &CompiledModel,
    tight: &mut [u32; NUM_VARIETIES],
) -> Result<(), PruneCause> {
    loop {
        *tight = [0; NUM_VARIETIES];
        let mut changed = total(s, m)?;
        changed |= linear(s, m)?;
        changed |= fbounds(s, m)?;
        changed |= forbidden(s, m, tight)?;
        changed |= required(s, m, tight)?;
        if !changed {
            return cover_bound(s, m);
        }
    }
}

/// Shrinks the bounds of `state` as far as the model's propagators can, or
/// reports the contradiction that empties some domain.
pub fn propagate(state: &mut SearchState, model: &CompiledModel) -> Result<(), PruneCause> {
    propagate_counting(state, model, &mut [0; NUM_VARIETIES])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        build_existence_model, build_max_infeasible_model, build_min_universal_model, Cmp, Constraint, DomainMode,
        Model,
    };
    use crate::variety::mask_of;

    fn v(i: usize, j: usize) -> Variety {
        Variety::from_coords(i, j).unwrap()
    }

    #[test]
    fn forbidden_target_composable_at_lower_bounds() {
        let t = v(1, 2);
        let m = CompiledModel::new(&build_existence_model(mask_of([v(2, 1)]), DomainMode::Rigorous));
        let mut s = SearchState::root(&m);
        s.lb[t.index()] = 7;
        // the only way to reach eight is through compatible cubes
        for c in t.compatible_set() {
            s.lb[c.index()] = 2;
            s.ub[c.index()] = 2;
        }
        // the f-bound sees it first; either cause is sound
        assert!(matches!(propagate(&mut s, &m), Err(PruneCause::Forbidden | PruneCause::FBound)));
    }

    #[test]
    fn required_target_failing_at_upper_bounds() {
        let t = v(1, 2);
        let m = CompiledModel::new(&build_existence_model(mask_of([t]), DomainMode::Paper));
        let mut s = SearchState::root(&m);
        s.ub = [0; NUM_VARIETIES];
        s.ub[t.index()] = 7;
        assert!(matches!(propagate(&mut s, &m), Err(PruneCause::Required | PruneCause::Total)));
    }

    #[test]
    fn fbound_of_eight_contradicts() {
        let t = v(1, 2);
        let m = CompiledModel::new(&build_max_infeasible_model(10, DomainMode::Rigorous));
        let mut s = SearchState::root(&m);
        s.lb[t.index()] = 4;
        // two cubes each of two compatible varieties in row 3
        let cells: Vec<Variety> =
            (1..=6).filter(|&j| j != 3).map(|j| v(3, j)).filter(|c| t.is_compatible(*c)).collect();
        for c in &cells[..2] {
            s.lb[c.index()] = 2;
        }
        assert!(propagate(&mut s, &m).is_err());
    }

    #[test]
    fn total_and_linear_bounds() {
        let mut model = Model::new("toy", 8);
        model.push(Constraint::Linear { terms: vec![(v(1, 2), 1)], cmp: Cmp::Ge, rhs: 9 });
        let m = CompiledModel::new(&model);
        assert_eq!(propagate(&mut SearchState::root(&m), &m), Err(PruneCause::Linear));

        let mut model = Model::new("toy", 3);
        model.push(Constraint::total(Cmp::Eq, 89));
        let m = CompiledModel::new(&model);
        let mut s = SearchState::root(&m);
        propagate(&mut s, &m).unwrap();
        assert_eq!(s.total_lb(), 60);
        assert!(s.lb.iter().all(|&x| x == 2));
    }

    #[test]
    fn universal_root_passes_cover_bound_only_from_twelve() {
        let mut model = build_min_universal_model();
        model.push(Constraint::total(Cmp::Le, 11));
        let m = CompiledModel::new(&model);
        assert_eq!(propagate(&mut SearchState::root(&m), &m), Err(PruneCause::CoverBound));
        let mut model = build_min_universal_model();
        model.push(Constraint::total(Cmp::Le, 12));
        let m = CompiledModel::new(&model);
        assert!(propagate(&mut SearchState::root(&m), &m).is_ok());
    }
}
