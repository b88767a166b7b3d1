//! Deciding which solids an instance can build.
//!
//! Two exact criteria are implemented independently:
//!
//! * [`is_composable_matching`]: the cube/triple bipartite graph of the
//!   target has a matching covering all eight triples;
//! * [`is_composable_treecount`]: contracting every compatible cube to an
//!   edge between its two shared triples, the number of tree components does
//!   not exceed the number of cubes of the target variety itself.
//!
//! [`hall_check`] is a third, brute-force route over all 256 triple subsets.
//! The matching oracle is the authoritative one; the tree count is the fast
//! path used inside searches.

mod bipartite;
mod bounds;
mod certificate;
mod multigraph;

use std::sync::OnceLock;

pub use bipartite::{
    build_bipartite, hall_witness, is_composable_matching, max_matching, CornerBipartite, HallWitness, Matching,
};
pub use bounds::{f_col, f_row, f_score, universal_lower_bound, LowerBound};
pub use certificate::{extract_arrangement, verify_arrangement, ArrangementCertificate, Placement};
pub use multigraph::{build_multigraph, count_tree_components, is_composable_treecount, CornerMultigraph};

use crate::instance::Instance;
use crate::variety::{iter_mask, Variety, VarietyMask, NUM_VARIETIES};

/// A set of the eight triples of a target, as a bitmask over local indices.
pub type TripleSubset = u8;

pub(crate) struct TargetInfo {
    /// `(variety, local a, local b)` for each compatible variety.
    pub(crate) edges: [(u8, u8, u8); 20],
    /// Compatible varieties touching each subset of the target's triples.
    pub(crate) neighbors: [VarietyMask; 256],
}

pub(crate) fn target_info(t: Variety) -> &'static TargetInfo {
    static INFO: OnceLock<Vec<TargetInfo>> = OnceLock::new();
    &INFO.get_or_init(|| {
        Variety::all()
            .map(|t| {
                let mut edges = [(0, 0, 0); 20];
                for (slot, v) in edges.iter_mut().zip(t.compatible_set()) {
                    let (a, b) = t.shared_pair(v).expect("compatible");
                    *slot = (v.index() as u8, a, b);
                }
                let neighbors = std::array::from_fn(|mask| {
                    edges
                        .iter()
                        .filter(|(_, a, b)| mask & (1 << a) != 0 || mask & (1 << b) != 0)
                        .fold(0, |m, (v, _, _)| m | 1 << v)
                });
                TargetInfo { edges, neighbors }
            })
            .collect()
    })[t.index()]
}

/// Varieties whose cubes are adjacent to the triples in `subset` of the
/// target `t`, i.e. compatible varieties sharing a triple in the subset.
/// Cubes of `t` itself are adjacent to every non-empty subset and are not
/// included.
pub fn subset_neighbors(t: Variety, subset: TripleSubset) -> Vec<Variety> {
    iter_mask(target_info(t).neighbors[subset as usize]).collect()
}

/// `|I(T)|` for a subset `T` of the target's triples.
pub fn adjacent_cube_count(counts: &[u32; NUM_VARIETIES], t: Variety, subset: TripleSubset) -> u64 {
    if subset == 0 {
        return 0;
    }
    let nb = target_info(t).neighbors[subset as usize];
    u64::from(counts[t.index()]) + iter_mask(nb).map(|v| u64::from(counts[v.index()])).sum::<u64>()
}

/// Brute-force Hall check: `|T| <= |I(T)|` for all 256 subsets.
pub fn hall_check(counts: &[u32; NUM_VARIETIES], t: Variety) -> bool {
    (1..=255u8).all(|s| adjacent_cube_count(counts, t, s) >= u64::from(s.count_ones()))
}

/// Number of tree components (isolated triples included) in the target's
/// multigraph built from raw counts; allocation free. Composable exactly
/// when the target's own count reaches this number.
pub fn tree_components(counts: &[u32; NUM_VARIETIES], t: Variety) -> u32 {
    let info = target_info(t);
    let mut parent = [0u8, 1, 2, 3, 4, 5, 6, 7];
    fn find(p: &mut [u8; 8], mut x: u8) -> u8 {
        while p[x as usize] != x {
            p[x as usize] = p[p[x as usize] as usize];
            x = p[x as usize];
        }
        x
    }
    let mut edge_count = [0u64; 8];
    for &(v, a, b) in &info.edges {
        let c = counts[v as usize];
        if c == 0 {
            continue;
        }
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra as usize] = rb;
            edge_count[rb as usize] += edge_count[ra as usize];
        }
        edge_count[rb as usize] += u64::from(c);
    }
    let mut nodes = [0u64; 8];
    for x in 0..8 {
        let r = find(&mut parent, x);
        nodes[r as usize] += 1;
    }
    (0..8).filter(|&r| nodes[r] > 0 && parent[r] as usize == r && edge_count[r] + 1 == nodes[r]).count() as u32
}

/// Tree-count criterion on raw counts.
pub fn treecount_fast(counts: &[u32; NUM_VARIETIES], t: Variety) -> bool {
    let own = counts[t.index()];
    own >= 8 || own >= tree_components(counts, t)
}

/// Solution set as a bitmask, via the fast tree-count criterion.
pub fn solution_mask_fast(counts: &[u32; NUM_VARIETIES]) -> VarietyMask {
    Variety::all().filter(|&t| treecount_fast(counts, t)).fold(0, |m, t| m | t.bit())
}

/// Varieties whose solid is composable from `instance`, decided by the
/// matching criterion.
pub fn solution_set(instance: &Instance) -> Vec<Variety> {
    Variety::all().filter(|&t| is_composable_matching(instance, t)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Infeasible,
    Universal,
    Partial,
}

pub fn classify(solutions: &[Variety]) -> Classification {
    match solutions.len() {
        0 => Classification::Infeasible,
        NUM_VARIETIES => Classification::Universal,
        _ => Classification::Partial,
    }
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Classification::Infeasible => "infeasible",
            Classification::Universal => "universal",
            Classification::Partial => "partial",
        })
    }
}
