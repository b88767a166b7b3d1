use serde::Serialize;

use crate::composability::{
    hall_witness, is_composable_matching, is_composable_treecount, solution_set, universal_lower_bound,
};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::variety::{Variety, NUM_VARIETIES};

fn from_cells(cells: &[(usize, usize, u32)]) -> Instance {
    let mut x = Instance::empty();
    for &(i, j, n) in cells {
        x.set(Variety::from_coords(i, j).expect("off-diagonal"), n);
    }
    x
}

/// Nine cubes that build a `(1,2)`-solid but not a `(2,3)`-solid.
pub fn small_example() -> Instance {
    from_cells(&[(1, 2, 2), (2, 6, 1), (3, 5, 1), (3, 6, 1), (5, 6, 2), (6, 4, 1), (6, 5, 1)])
}

/// 23 cubes on the first table row from which no solid can be built.
pub fn infeasible_23() -> Instance {
    from_cells(&[(1, 2, 7), (1, 3, 7), (1, 4, 7), (1, 5, 1), (1, 6, 1)])
}

/// 12 cubes from which every one of the 30 solids can be built.
pub fn universal_12() -> Instance {
    from_cells(&[
        (1, 2, 1),
        (1, 3, 1),
        (2, 1, 1),
        (2, 3, 1),
        (3, 1, 1),
        (3, 2, 1),
        (4, 5, 1),
        (4, 6, 1),
        (5, 4, 1),
        (5, 6, 1),
        (6, 4, 1),
        (6, 5, 1),
    ])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KnownInstancesReport {
    pub checks: Vec<Check>,
    /// Full solution set of [`small_example`].
    pub small_example_solutions: Vec<Variety>,
}

impl std::fmt::Display for KnownInstancesReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail)?;
        }
        let s: Vec<String> = self.small_example_solutions.iter().map(|v| v.to_string()).collect();
        writeln!(f, "small example solution set: {{{}}}", s.join(", "))
    }
}

/// Solution set computed by both oracles; an error if they disagree.
fn both_oracles(x: &Instance) -> Result<Vec<Variety>> {
    let mut out = Vec::new();
    for t in Variety::all() {
        let m = is_composable_matching(x, t);
        if m != is_composable_treecount(x, t) {
            return Err(Error::KnownInstanceCheck(format!("oracles disagree on {t} for {}", x.to_row_string())));
        }
        if !m && hall_witness(x, t).is_none() {
            return Err(Error::KnownInstanceCheck(format!("no Hall witness for {t}")));
        }
        if m {
            out.push(t);
        }
    }
    Ok(out)
}

/// Checks the three reference instances and the universal lower bound with
/// both composability oracles. Any failed check is returned as an error
/// naming it.
pub fn verify_known_instances() -> Result<KnownInstancesReport> {
    let mut checks = Vec::new();
    let mut check = |name: &str, passed: bool, detail: String| {
        checks.push(Check { name: name.to_string(), passed, detail });
    };
    let v12 = Variety::from_coords(1, 2)?;
    let v23 = Variety::from_coords(2, 3)?;

    let small = both_oracles(&small_example())?;
    check("small example builds (1,2)", small.contains(&v12), format!("size {}", small_example().size()));
    check("small example misses (2,3)", !small.contains(&v23), format!("{} solids buildable", small.len()));
    let n = both_oracles(&infeasible_23())?;
    check("23-cube instance is infeasible", n.is_empty(), format!("{} solids buildable", n.len()));
    check("23-cube instance size", infeasible_23().size() == 23, format!("size {}", infeasible_23().size()));
    let u = both_oracles(&universal_12())?;
    check("12-cube instance is universal", u.len() == NUM_VARIETIES, format!("{} solids buildable", u.len()));
    check("12-cube instance size", universal_12().size() == 12, format!("size {}", universal_12().size()));
    let lb = universal_lower_bound();
    check(
        "universal lower bound",
        lb.bound == 12,
        format!("{} / {} rounded up = {}", lb.required_total, lb.per_cube, lb.bound),
    );
    let matching_only = solution_set(&small_example());
    check("oracles agree on small example", matching_only == small, format!("{} solids", matching_only.len()));

    if let Some(bad) = checks.iter().find(|c| !c.passed) {
        return Err(Error::KnownInstanceCheck(format!("{}: {}", bad.name, bad.detail)));
    }
    Ok(KnownInstancesReport { checks, small_example_solutions: small })
}
