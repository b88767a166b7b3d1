use crate::instance::Instance;
use crate::variety::{Variety, NUM_VARIETIES};

fn line_score(counts: &[u32; NUM_VARIETIES], target: Variety, cells: impl Iterator<Item = Variety>) -> u32 {
    cells.filter(|v| target.is_compatible(*v)).map(|v| counts[v.index()].min(2)).sum()
}

/// Best single-row supply: `max over rows i0 != row(target)` of the capped
/// counts of the row's four varieties compatible with the target.
pub fn f_row(instance: &Instance, target: Variety) -> u32 {
    let (ti, _) = target.coords();
    (1..=6)
        .filter(|&r| r != ti)
        .map(|r| {
            let cells =
                (1..=6).filter(move |&j| j != r).map(move |j| Variety::from_coords(r, j).expect("off-diagonal"));
            line_score(instance.counts(), target, cells)
        })
        .max()
        .unwrap_or(0)
}

/// Column counterpart of [`f_row`].
pub fn f_col(instance: &Instance, target: Variety) -> u32 {
    let (_, tj) = target.coords();
    (1..=6)
        .filter(|&c| c != tj)
        .map(|c| {
            let cells =
                (1..=6).filter(move |&i| i != c).map(move |i| Variety::from_coords(i, c).expect("off-diagonal"));
            line_score(instance.counts(), target, cells)
        })
        .max()
        .unwrap_or(0)
}

/// Own count plus the better of [`f_row`] and [`f_col`]. A score of eight
/// or more guarantees the target is composable.
pub fn f_score(instance: &Instance, target: Variety) -> u32 {
    instance.get(target) + f_row(instance, target).max(f_col(instance, target))
}

/// The counting bound on universal instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LowerBound {
    /// Sum over all targets of the eight cubes each one needs.
    pub required_total: u32,
    /// Number of targets a single cube can serve (itself plus compatibles).
    pub per_cube: u32,
    /// Smallest size `m` with `per_cube * m >= required_total`.
    pub bound: u32,
}

/// A universal instance needs `|E_t| + I_t >= 8` for each of the 30 targets,
/// and each cube adds one to exactly 21 of these sums.
pub fn universal_lower_bound() -> LowerBound {
    let required_total = 8 * NUM_VARIETIES as u32;
    let per_cube: Vec<u32> = Variety::all().map(|v| 1 + v.compatible_set().len() as u32).collect();
    let per_cube = per_cube[0];
    debug_assert!(Variety::all().all(|v| 1 + v.compatible_set().len() as u32 == per_cube));
    LowerBound { required_total, per_cube, bound: required_total.div_ceil(per_cube) }
}
