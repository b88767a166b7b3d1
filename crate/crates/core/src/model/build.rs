use super::{Cmp, Constraint, Domain, DomainMode, Line, Model, Objective};
use crate::variety::{Variety, VarietyMask};

/// The line's varieties that are compatible with `target` (four of them for
/// any row or column not through the target).
pub fn fbound_cells(target: Variety, line: Line) -> Vec<Variety> {
    let cells: Vec<Variety> = match line {
        Line::Row(r) => {
            (1..=6).filter(|&j| j != r).map(|j| Variety::from_coords(r, j).expect("off-diagonal")).collect()
        }
        Line::Col(c) => {
            (1..=6).filter(|&i| i != c).map(|i| Variety::from_coords(i, c).expect("off-diagonal")).collect()
        }
    };
    cells.into_iter().filter(|v| target.is_compatible(*v)).collect()
}

fn push_hall_family(m: &mut Model, target: Variety) {
    for subset in 0..=255u8 {
        m.push(Constraint::HallRequired { target, subset });
    }
}

fn push_noncomposable(m: &mut Model, target: Variety) {
    m.push(Constraint::NonComposable { target });
    let (ti, tj) = target.coords();
    for r in (1..=6).filter(|&r| r != ti) {
        m.push(Constraint::FBound { target, line: Line::Row(r) });
    }
    for c in (1..=6).filter(|&c| c != tj) {
        m.push(Constraint::FBound { target, line: Line::Col(c) });
    }
}

/// Instances of size at least 8 whose solution set is exactly `required`.
///
/// Required targets get the full Hall family; every other target gets the
/// non-composability disjunction plus the ten f-bound cuts.
pub fn build_existence_model(required: VarietyMask, mode: DomainMode) -> Model {
    let mut m = Model::new(format!("existence-{required:08x}"), mode.off_cap());
    m.push(Constraint::total(Cmp::Ge, 8));
    for t in Variety::all() {
        if required & t.bit() != 0 {
            m.set_domain(t, Domain::new(0, 8));
            push_hall_family(&mut m, t);
        } else {
            push_noncomposable(&mut m, t);
        }
    }
    m
}

/// Infeasible instances of exactly `size` cubes.
pub fn build_max_infeasible_model(size: u32, mode: DomainMode) -> Model {
    let mut m = Model::new(format!("max-infeasible-{size}"), mode.off_cap());
    m.push(Constraint::total(Cmp::Eq, i64::from(size)));
    for t in Variety::all() {
        push_noncomposable(&mut m, t);
    }
    m
}

/// Smallest universal instance: all 30 Hall families, minimize the total.
pub fn build_min_universal_model() -> Model {
    let mut m = Model::new("min-universal", 8);
    for t in Variety::all() {
        push_hall_family(&mut m, t);
    }
    m.set_objective(Objective::MinimizeTotal);
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ConstraintKind;
    use crate::variety::{mask_of, ALL_VARIETIES_MASK};

    #[test]
    fn constraint_counts() {
        let m = build_min_universal_model();
        assert_eq!(m.count(ConstraintKind::HallRequired), 7680);
        assert_eq!(m.constraints().len(), 7680);

        let m = build_max_infeasible_model(24, DomainMode::Paper);
        assert_eq!(m.count(ConstraintKind::NonComposableDisjunction), 30);
        assert_eq!(m.count(ConstraintKind::FBound), 300);
        assert_eq!(m.count(ConstraintKind::LinearEQ), 1);
        assert!(m.domains().iter().all(|d| *d == Domain::new(0, 2)));

        let v = Variety::from_coords(1, 2).unwrap();
        let m = build_existence_model(mask_of([v]), DomainMode::Rigorous);
        assert_eq!(m.count(ConstraintKind::HallRequired), 256);
        assert_eq!(m.count(ConstraintKind::NonComposableDisjunction), 29);
        assert_eq!(m.domain(v), Domain::new(0, 8));
        assert_eq!(m.domain(Variety::from_coords(2, 1).unwrap()), Domain::new(0, 7));

        let m = build_existence_model(ALL_VARIETIES_MASK, DomainMode::Paper);
        assert_eq!(m.count(ConstraintKind::FBound), 0);
    }

    #[test]
    fn every_fbound_line_has_four_cells() {
        for t in Variety::all() {
            let (ti, tj) = t.coords();
            for r in (1..=6).filter(|&r| r != ti) {
                assert_eq!(fbound_cells(t, Line::Row(r)).len(), 4);
            }
            for c in (1..=6).filter(|&c| c != tj) {
                assert_eq!(fbound_cells(t, Line::Col(c)).len(), 4);
            }
        }
    }
}
