use crate::cube::CornerTriple;
use crate::instance::Instance;
use crate::variety::Variety;

/// The target's eight triples as nodes, one edge per compatible cube joining
/// the two triples it shares with the target. Parallel edges are kept.
#[derive(Clone, Debug)]
pub struct CornerMultigraph {
    pub target: Variety,
    /// `(local a, local b, variety of the cube)`, one entry per cube.
    pub edges: Vec<(u8, u8, Variety)>,
}

impl CornerMultigraph {
    pub fn nodes(&self) -> &'static [CornerTriple; 8] {
        self.target.triples()
    }

    /// Components as sorted lists of local node indices, with their edge
    /// counts.
    pub fn components(&self) -> Vec<(Vec<u8>, usize)> {
        let mut label: [usize; 8] = std::array::from_fn(|k| k);
        // relabel until stable; eight nodes need no union-find
        loop {
            let mut changed = false;
            for &(a, b, _) in &self.edges {
                let m = label[a as usize].min(label[b as usize]);
                for x in [a, b] {
                    if label[x as usize] != m {
                        label[x as usize] = m;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut out = Vec::new();
        for root in 0..8 {
            let nodes: Vec<u8> = (0..8u8).filter(|&x| label[x as usize] == root).collect();
            if nodes.is_empty() {
                continue;
            }
            let edges = self.edges.iter().filter(|(a, _, _)| label[*a as usize] == root).count();
            out.push((nodes, edges));
        }
        out
    }
}

pub fn build_multigraph(instance: &Instance, target: Variety) -> CornerMultigraph {
    let mut edges = Vec::new();
    for v in instance.support() {
        if let Some((a, b)) = target.shared_pair(v) {
            for _ in 0..instance.get(v) {
                edges.push((a, b, v));
            }
        }
    }
    CornerMultigraph { target, edges }
}

/// Components whose edge count, parallel edges included, is one less than
/// their node count. Isolated nodes count.
pub fn count_tree_components(g: &CornerMultigraph) -> usize {
    g.components().iter().filter(|(nodes, edges)| *edges + 1 == nodes.len()).count()
}

pub fn is_composable_treecount(instance: &Instance, target: Variety) -> bool {
    instance.get(target) as usize >= count_tree_components(&build_multigraph(instance, target))
}
