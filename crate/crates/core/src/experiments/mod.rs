//! Packaged runs: reference-instance checks, the eight-cube census, the
//! single-row scan, the three model searches and the existence sweep over
//! families of solution sets.

mod census;
mod known;
mod scan;

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::Serialize;

pub use census::{
    multiset_count, octet_census, octet_census_raw, orbit_leader, orbit_leaders, CensusEntry, HistogramRow,
    OctetCensus, Orbit,
};
pub use known::{infeasible_23, small_example, universal_12, verify_known_instances, Check, KnownInstancesReport};
pub use scan::{row_restricted_max_infeasible, row_scan, RowScan};

use crate::composability::solution_mask_fast;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::model::{build_existence_model, build_max_infeasible_model, build_min_universal_model, DomainMode};
use crate::search::{solve, SearchOptions, SearchResult};
use crate::symmetry::Symmetry;
use crate::variety::{iter_mask, mask_of, Variety, VarietyMask, ALL_VARIETIES_MASK, NUM_VARIETIES};

fn solution_mask_matching(x: &Instance) -> VarietyMask {
    mask_of(crate::composability::solution_set(x))
}

/// Fails unless the witness (if any) builds exactly `expected`.
fn recheck(result: &SearchResult, expected: VarietyMask) -> Result<()> {
    if let Some(x) = result.verdict.witness() {
        let got = solution_mask_matching(x);
        if got != expected || solution_mask_fast(x.counts()) != got {
            return Err(Error::Internal(format!(
                "witness {} builds {:08x}, expected {expected:08x}",
                x.to_row_string(),
                got
            )));
        }
    }
    Ok(())
}

/// Searches for an instance whose solution set is exactly `required`.
pub fn run_existence(required: VarietyMask, mode: DomainMode, options: &SearchOptions) -> Result<SearchResult> {
    let r = solve(&build_existence_model(required, mode), options)?;
    recheck(&r, required)?;
    Ok(r)
}

/// Searches for an infeasible instance of exactly `size` cubes.
pub fn run_max_infeasible(size: u32, mode: DomainMode, options: &SearchOptions) -> Result<SearchResult> {
    let r = solve(&build_max_infeasible_model(size, mode), options)?;
    recheck(&r, 0)?;
    Ok(r)
}

/// Minimizes the size of a universal instance.
pub fn run_min_universal(options: &SearchOptions) -> Result<SearchResult> {
    let r = solve(&build_min_universal_model(), options)?;
    recheck(&r, ALL_VARIETIES_MASK)?;
    Ok(r)
}

/// Parses a set of varieties: `all`, `none`, `row:i`, `col:j`, or a list
/// such as `(1,2),(1,3)` or `12 13`.
pub fn parse_variety_set(s: &str) -> Result<VarietyMask> {
    let s = s.trim();
    let line = |prefix: &str| -> Result<Option<usize>> {
        match s.strip_prefix(prefix) {
            Some(n) => n
                .parse()
                .ok()
                .filter(|k| (1..=6).contains(k))
                .map(Some)
                .ok_or_else(|| Error::InvalidInput(format!("bad line in {s:?}"))),
            None => Ok(None),
        }
    };
    if s == "all" {
        return Ok(ALL_VARIETIES_MASK);
    }
    if s == "none" || s == "empty" || s.is_empty() {
        return Ok(0);
    }
    if let Some(r) = line("row:")? {
        return Ok(mask_of((1..=6).filter(|&j| j != r).map(|j| Variety::from_coords(r, j).expect("off-diagonal"))));
    }
    if let Some(c) = line("col:")? {
        return Ok(mask_of((1..=6).filter(|&i| i != c).map(|i| Variety::from_coords(i, c).expect("off-diagonal"))));
    }
    let digits: Vec<usize> = s.chars().filter_map(|c| c.to_digit(10)).map(|d| d as usize).collect();
    if !digits.len().is_multiple_of(2) {
        return Err(Error::InvalidInput(format!("odd number of coordinates in {s:?}")));
    }
    digits.chunks(2).map(|p| Variety::from_coords(p[0], p[1]).map(Variety::bit)).try_fold(0, |m, b| Ok(m | b?))
}

/// Families of solution sets for [`explore_open_problems`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Sets(Vec<VarietyMask>),
    /// One set per symmetry class of sets with this many varieties.
    Size(usize),
    Rows,
    Columns,
}

impl FromStr for Family {
    type Err = Error;

    /// `rows`, `columns`, `size:k`, or sets separated by `;`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "rows" => Ok(Family::Rows),
            "columns" | "cols" => Ok(Family::Columns),
            t => match t.strip_prefix("size:") {
                Some(k) => {
                    let k: usize = k.parse().map_err(|_| Error::InvalidInput(format!("bad size in {t:?}")))?;
                    if k > NUM_VARIETIES {
                        return Err(Error::InvalidInput(format!("size {k} exceeds {NUM_VARIETIES}")));
                    }
                    Ok(Family::Size(k))
                }
                None => t.split(';').map(parse_variety_set).collect::<Result<_>>().map(Family::Sets),
            },
        }
    }
}

/// Smallest image of each `k`-set under the symmetry group, ascending.
pub fn set_orbit_leaders(k: usize) -> Vec<VarietyMask> {
    let group: Vec<Symmetry> = Symmetry::all().collect();
    (0..NUM_VARIETIES)
        .combinations(k)
        .map(|c| c.iter().fold(0, |m, &i| m | 1 << i))
        .filter(|&m: &VarietyMask| group.iter().all(|s| s.apply_mask(m) >= m))
        .collect()
}

impl Family {
    pub fn sets(&self) -> Vec<VarietyMask> {
        match self {
            Family::Sets(v) => v.clone(),
            Family::Size(k) => set_orbit_leaders(*k),
            Family::Rows => (1..=6).map(|r| parse_variety_set(&format!("row:{r}")).expect("valid row")).collect(),
            Family::Columns => (1..=6).map(|c| parse_variety_set(&format!("col:{c}")).expect("valid column")).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExploreRow {
    pub set: VarietyMask,
    pub verdict: &'static str,
    pub nodes: u64,
    pub witness: Option<Instance>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ExploreReport {
    pub rows: Vec<ExploreRow>,
}

fn set_string(m: VarietyMask) -> String {
    if m == 0 {
        return "{}".into();
    }
    format!("{{{}}}", iter_mask(m).map(|v| v.to_string()).join(","))
}

impl fmt::Display for ExploreReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            write!(f, "{:<8} nodes {:>9}  {}", r.verdict, r.nodes, set_string(r.set))?;
            match &r.witness {
                Some(x) => writeln!(f, "  witness {}", x.to_row_string())?,
                None => writeln!(f)?,
            }
        }
        let count = |v: &str| self.rows.iter().filter(|r| r.verdict == v).count();
        writeln!(f, "SAT {} UNSAT {} TIMEOUT {}", count("SAT"), count("UNSAT"), count("TIMEOUT"))
    }
}

/// Runs the existence search for every set of `family` within the budgets
/// of `options` and tabulates the verdicts.
pub fn explore_open_problems(family: &Family, mode: DomainMode, options: &SearchOptions) -> Result<ExploreReport> {
    let mut report = ExploreReport::default();
    for set in family.sets() {
        let r = run_existence(set, mode, options)?;
        report.rows.push(ExploreRow {
            set,
            verdict: r.verdict.name(),
            nodes: r.stats.nodes,
            witness: r.verdict.witness().copied(),
        });
    }
    Ok(report)
}
