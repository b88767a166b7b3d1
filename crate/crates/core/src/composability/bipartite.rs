use crate::cube::CornerTriple;
use crate::instance::Instance;
use crate::variety::Variety;

/// Cubes of an instance on one side, the eight triples of a target on the
/// other; a cube is joined to every target triple it carries.
#[derive(Clone, Debug)]
pub struct CornerBipartite {
    pub target: Variety,
    /// `(variety, copy index)` for each cube node.
    pub cubes: Vec<(Variety, u32)>,
    /// Local triple indices adjacent to each cube node.
    pub cube_adj: Vec<Vec<u8>>,
}

impl CornerBipartite {
    pub fn triples(&self) -> &'static [CornerTriple; 8] {
        self.target.triples()
    }

    pub fn degree(&self, cube: usize) -> usize {
        self.cube_adj[cube].len()
    }

    fn triple_adj(&self) -> [Vec<usize>; 8] {
        let mut adj: [Vec<usize>; 8] = Default::default();
        for (c, ts) in self.cube_adj.iter().enumerate() {
            for &t in ts {
                adj[t as usize].push(c);
            }
        }
        adj
    }
}

pub fn build_bipartite(instance: &Instance, target: Variety) -> CornerBipartite {
    let mut cubes = Vec::new();
    let mut cube_adj = Vec::new();
    for v in instance.support() {
        let adj: Vec<u8> = if v == target {
            (0..8).collect()
        } else {
            match target.shared_pair(v) {
                Some((a, b)) => vec![a, b],
                None => Vec::new(),
            }
        };
        for copy in 0..instance.get(v) {
            cubes.push((v, copy));
            cube_adj.push(adj.clone());
        }
    }
    CornerBipartite { target, cubes, cube_adj }
}

/// A matching, recorded per target triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pub triple_to_cube: [Option<usize>; 8],
}

impl Matching {
    pub fn size(&self) -> usize {
        self.triple_to_cube.iter().flatten().count()
    }
}

/// Maximum matching by repeated augmenting-path search from the triple
/// side. Triples and cubes are visited in index order, so the result is
/// deterministic.
pub fn max_matching(g: &CornerBipartite) -> Matching {
    let adj = g.triple_adj();
    let mut cube_to_triple: Vec<Option<u8>> = vec![None; g.cubes.len()];
    let mut triple_to_cube = [None; 8];

    fn augment(
        t: usize,
        adj: &[Vec<usize>; 8],
        seen: &mut [bool],
        cube_to_triple: &mut [Option<u8>],
        triple_to_cube: &mut [Option<usize>; 8],
    ) -> bool {
        for &c in &adj[t] {
            if seen[c] {
                continue;
            }
            seen[c] = true;
            let free = match cube_to_triple[c] {
                None => true,
                Some(other) => augment(other as usize, adj, seen, cube_to_triple, triple_to_cube),
            };
            if free {
                cube_to_triple[c] = Some(t as u8);
                triple_to_cube[t] = Some(c);
                return true;
            }
        }
        false
    }

    for t in 0..8 {
        let mut seen = vec![false; g.cubes.len()];
        augment(t, &adj, &mut seen, &mut cube_to_triple, &mut triple_to_cube);
    }
    Matching { triple_to_cube }
}

/// True iff a matching saturates all eight triples of `target`.
///
/// Cubes with no edge are dropped and each variety keeps at most as many
/// copies as it has triples, which cannot change the maximum.
pub fn is_composable_matching(instance: &Instance, target: Variety) -> bool {
    let mut reduced = Instance::empty();
    for v in instance.support() {
        let degree = if v == target {
            8
        } else if target.is_compatible(v) {
            2
        } else {
            0
        };
        reduced.set(v, instance.get(v).min(degree));
    }
    if reduced.size() < 8 {
        return false;
    }
    max_matching(&build_bipartite(&reduced, target)).size() == 8
}

/// A subset of target triples with fewer adjacent cubes than triples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallWitness {
    pub target: Variety,
    pub triples: Vec<CornerTriple>,
    pub adjacent_cube_count: usize,
}

impl HallWitness {
    /// Local-index mask of the witness triples.
    pub fn subset(&self) -> u8 {
        self.triples.iter().fold(0, |m, t| m | 1 << self.target.local_triple(t).expect("target triple"))
    }
}

/// Violating subset for a non-composable target, or `None` when the target
/// is composable.
///
/// The subset is everything reachable from the unmatched triples of a
/// maximum matching along alternating paths; every cube reached is matched
/// back into the subset, so the subset has exactly as many adjacent cubes
/// as it has matched triples.
pub fn hall_witness(instance: &Instance, target: Variety) -> Option<HallWitness> {
    let g = build_bipartite(instance, target);
    let m = max_matching(&g);
    if m.size() == 8 {
        return None;
    }
    let adj = g.triple_adj();
    let mut cube_to_triple = vec![None; g.cubes.len()];
    for (t, c) in m.triple_to_cube.iter().enumerate() {
        if let Some(c) = c {
            cube_to_triple[*c] = Some(t);
        }
    }
    let mut in_t = [false; 8];
    let mut reached = vec![false; g.cubes.len()];
    let mut stack: Vec<usize> = (0..8).filter(|&t| m.triple_to_cube[t].is_none()).collect();
    for &t in &stack {
        in_t[t] = true;
    }
    while let Some(t) = stack.pop() {
        for &c in &adj[t] {
            if std::mem::replace(&mut reached[c], true) {
                continue;
            }
            let next = cube_to_triple[c].expect("maximum matching leaves no augmenting path");
            if !std::mem::replace(&mut in_t[next], true) {
                stack.push(next);
            }
        }
    }
    let triples = (0..8).filter(|&t| in_t[t]).map(|t| target.triples()[t]).collect();
    Some(HallWitness { target, triples, adjacent_cube_count: reached.iter().filter(|&&r| r).count() })
}
