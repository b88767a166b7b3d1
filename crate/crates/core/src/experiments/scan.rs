use std::collections::BTreeMap;

use serde::Serialize;

use crate::composability::{solution_mask_fast, solution_set};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::variety::Variety;

/// Result of scanning every instance on one table row with entries 0..=7.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowScan {
    pub row: usize,
    pub scanned: u64,
    /// Infeasible instances per size.
    pub infeasible_by_size: BTreeMap<u64, u64>,
    pub max_size: u64,
    /// Every infeasible instance of the maximum size.
    pub maximizers: Vec<Instance>,
}

impl std::fmt::Display for RowScan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "row {} scanned {}", self.row, self.scanned)?;
        let sizes: Vec<String> = self.infeasible_by_size.iter().map(|(s, n)| format!("{s}:{n}")).collect();
        writeln!(f, "infeasible by size {}", sizes.join(" "))?;
        writeln!(f, "max infeasible size {} ({} maximizers)", self.max_size, self.maximizers.len())?;
        for x in &self.maximizers {
            writeln!(f, "  {}", x.to_row_string())?;
        }
        Ok(())
    }
}

/// Exhaustive scan of the 8^5 instances supported on table row `row`.
/// Maximizers are re-checked with the matching oracle.
pub fn row_scan(row: usize) -> Result<RowScan> {
    if !(1..=6).contains(&row) {
        return Err(Error::InvalidInput(format!("row {row} is not in 1..=6")));
    }
    let cells: Vec<Variety> =
        (1..=6).filter(|&j| j != row).map(|j| Variety::from_coords(row, j)).collect::<Result<_>>()?;
    let mut scan =
        RowScan { row, scanned: 0, infeasible_by_size: BTreeMap::new(), max_size: 0, maximizers: Vec::new() };
    for code in 0..8u32.pow(5) {
        let mut x = Instance::empty();
        for (k, v) in cells.iter().enumerate() {
            x.set(*v, code / 8u32.pow(k as u32) % 8);
        }
        scan.scanned += 1;
        if solution_mask_fast(x.counts()) != 0 {
            continue;
        }
        let size = x.size();
        *scan.infeasible_by_size.entry(size).or_insert(0) += 1;
        if size > scan.max_size {
            scan.max_size = size;
            scan.maximizers.clear();
        }
        if size == scan.max_size {
            scan.maximizers.push(x);
        }
    }
    for x in &scan.maximizers {
        if !solution_set(x).is_empty() {
            return Err(Error::Internal(format!("oracles disagree on {}", x.to_row_string())));
        }
    }
    scan.maximizers.sort();
    Ok(scan)
}

/// [`row_scan`] on the first row.
pub fn row_restricted_max_infeasible() -> Result<RowScan> {
    row_scan(1)
}
