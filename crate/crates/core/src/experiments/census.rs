use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::composability::{solution_mask_fast, solution_set};
use crate::instance::Instance;
use crate::model::Model;
use crate::search::LexLeader;
use crate::symmetry::{Symmetry, GROUP_ORDER};
use crate::variety::NUM_VARIETIES;

/// Number of multisets of `k` items drawn from `n` kinds.
pub fn multiset_count(n: u64, k: u64) -> u64 {
    // C(n + k - 1, k), exact in u128 for the sizes used here
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n + i) / u128::from(i + 1);
    }
    acc as u64
}

/// One orbit of instances under the full symmetry group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Orbit {
    /// Lexicographically smallest member.
    pub leader: Instance,
    pub size: u32,
}

fn full_group_lex() -> LexLeader {
    let all: Vec<Symmetry> = Symmetry::all().collect();
    LexLeader::new(&Model::new("all", u32::MAX), &all).expect("an unconstrained model has every symmetry")
}

fn stabilizer_order(x: &Instance) -> u32 {
    Symmetry::all().filter(|s| x.permuted(s) == *x).count() as u32
}

fn fill(counts: &mut [u32; NUM_VARIETIES], pos: usize, left: u32, visit: &mut dyn FnMut(&[u32; NUM_VARIETIES])) {
    if pos == NUM_VARIETIES - 1 {
        counts[pos] = left;
        visit(counts);
        counts[pos] = 0;
        return;
    }
    for k in (0..=left).rev() {
        counts[pos] = k;
        fill(counts, pos + 1, left - k, visit);
    }
    counts[pos] = 0;
}

/// Leaders of all orbits of instances with exactly `total` cubes, sorted.
/// Every multiset is generated and kept only when it is the smallest member
/// of its orbit.
pub fn orbit_leaders(total: u32) -> Vec<Orbit> {
    let lex = full_group_lex();
    let prefixes: Vec<(u32, u32)> = (0..=total).flat_map(|a| (0..=total - a).map(move |b| (a, b))).collect();
    let mut out: Vec<Orbit> = prefixes
        .par_iter()
        .flat_map_iter(|&(a, b)| {
            let mut found = Vec::new();
            let mut counts = [0; NUM_VARIETIES];
            counts[0] = a;
            counts[1] = b;
            fill(&mut counts, 2, total - a - b, &mut |c| {
                let x = Instance::from_counts(*c);
                if lex.is_leader(&x) {
                    found.push(Orbit { leader: x, size: GROUP_ORDER as u32 / stabilizer_order(&x) });
                }
            });
            found
        })
        .collect();
    out.sort_by_key(|o| o.leader);
    out
}

/// Smallest member of the orbit of `x`.
pub fn orbit_leader(x: &Instance) -> Instance {
    Symmetry::all().map(|s| x.permuted(&s)).min().expect("non-empty group")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CensusEntry {
    pub orbit: Orbit,
    /// Number of buildable solids.
    pub solutions: u8,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HistogramRow {
    pub solutions: usize,
    pub orbits: u64,
    pub raw: u64,
}

/// Solution-set sizes over every instance of eight cubes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OctetCensus {
    /// One entry per orbit, sorted by leader.
    pub entries: Vec<CensusEntry>,
    /// Rows for the sizes that occur, ascending.
    pub histogram: Vec<HistogramRow>,
}

impl OctetCensus {
    pub fn raw_total(&self) -> u64 {
        self.histogram.iter().map(|r| r.raw).sum()
    }

    pub fn max_solutions(&self) -> usize {
        self.histogram.last().map_or(0, |r| r.solutions)
    }

    /// First orbit leader attaining the maximum.
    pub fn example(&self) -> Option<Instance> {
        let max = self.max_solutions();
        self.entries.iter().find(|e| usize::from(e.solutions) == max).map(|e| e.orbit.leader)
    }

    /// Entry for the orbit of `x`.
    pub fn lookup(&self, x: &Instance) -> Option<&CensusEntry> {
        let leader = orbit_leader(x);
        self.entries.binary_search_by_key(&leader, |e| e.orbit.leader).ok().map(|i| &self.entries[i])
    }

    /// `solutions,orbits,raw` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("solutions,orbits,raw\n");
        for r in &self.histogram {
            out.push_str(&format!("{},{},{}\n", r.solutions, r.orbits, r.raw));
        }
        out
    }
}

impl fmt::Display for OctetCensus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "orbits {} instances {}", self.entries.len(), self.raw_total())?;
        writeln!(f, "{:>9} {:>8} {:>10}", "solutions", "orbits", "instances")?;
        for r in &self.histogram {
            writeln!(f, "{:>9} {:>8} {:>10}", r.solutions, r.orbits, r.raw)?;
        }
        writeln!(f, "max {}", self.max_solutions())?;
        if let Some(x) = self.example() {
            writeln!(f, "example {}", x.to_row_string())?;
        }
        Ok(())
    }
}

fn histogram(pairs: impl Iterator<Item = (usize, u64, u64)>) -> Vec<HistogramRow> {
    let mut rows = vec![HistogramRow::default(); NUM_VARIETIES + 1];
    for (s, orbits, raw) in pairs {
        rows[s].solutions = s;
        rows[s].orbits += orbits;
        rows[s].raw += raw;
    }
    rows.into_iter().filter(|r| r.raw > 0).collect()
}

/// Census over orbit leaders, each decided by the matching oracle and
/// weighted by its orbit size.
pub fn octet_census() -> OctetCensus {
    let entries: Vec<CensusEntry> = orbit_leaders(8)
        .into_par_iter()
        .map(|orbit| CensusEntry { orbit, solutions: solution_set(&orbit.leader).len() as u8 })
        .collect();
    let histogram = histogram(entries.iter().map(|e| (usize::from(e.solutions), 1, u64::from(e.orbit.size))));
    OctetCensus { entries, histogram }
}

/// Histogram over every multiset of eight cubes without symmetry
/// reduction, decided by the tree-count oracle. The `orbits` column is zero.
pub fn octet_census_raw() -> Vec<HistogramRow> {
    let total = 8;
    let prefixes: Vec<(u32, u32)> = (0..=total).flat_map(|a| (0..=total - a).map(move |b| (a, b))).collect();
    let counts: Vec<[u64; NUM_VARIETIES + 1]> = prefixes
        .par_iter()
        .map(|&(a, b)| {
            let mut h = [0u64; NUM_VARIETIES + 1];
            let mut counts = [0; NUM_VARIETIES];
            counts[0] = a;
            counts[1] = b;
            fill(&mut counts, 2, total - a - b, &mut |c| {
                h[solution_mask_fast(c).count_ones() as usize] += 1;
            });
            h
        })
        .collect();
    histogram(counts.iter().flat_map(|h| h.iter().enumerate().map(|(s, &n)| (s, 0, n))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiset_counts() {
        assert_eq!(multiset_count(30, 8), 38_608_020);
        assert_eq!(multiset_count(30, 0), 1);
        assert_eq!(multiset_count(30, 1), 30);
        assert_eq!(multiset_count(5, 3), 35);
    }

    #[test]
    fn small_orbit_sums() {
        for total in 0..=3 {
            let orbits = orbit_leaders(total);
            let sum: u64 = orbits.iter().map(|o| u64::from(o.size)).sum();
            assert_eq!(sum, multiset_count(30, u64::from(total)));
        }
        // all 30 varieties form a single orbit
        assert_eq!(orbit_leaders(1).len(), 1);
    }
}
