//! The 1440-element symmetry group: color relabellings combined with an
//! optional reflection.
//!
//! Both parts act on colorings, hence on varieties and corner triples, and
//! both preserve the number of triples two varieties share. In table
//! coordinates a relabelling permutes row/column labels and the reflection
//! transposes.

use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;

use crate::cube::{Color, CornerTriple};
use crate::variety::{iter_mask, Variety, VarietyMask, NUM_VARIETIES};

pub const GROUP_ORDER: usize = 1440;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symmetry {
    id: u16,
}

struct SymmetryData {
    color_perm: [Color; 6],
    mirrored: bool,
    varieties: [u8; NUM_VARIETIES],
    triples: [u8; 40],
}

fn perm_rank(p: &[Color; 6]) -> usize {
    let mut rank = 0;
    for i in 0..6 {
        let smaller = (i + 1..6).filter(|&j| p[j] < p[i]).count();
        rank = rank * (6 - i) + smaller;
    }
    rank
}

fn group() -> &'static [SymmetryData] {
    static GROUP: OnceLock<Vec<SymmetryData>> = OnceLock::new();
    GROUP.get_or_init(|| {
        let mut out = Vec::with_capacity(GROUP_ORDER);
        for perm in Color::ALL.into_iter().permutations(6) {
            let color_perm: [Color; 6] = perm.try_into().expect("six colors");
            for mirrored in [false, true] {
                let varieties = std::array::from_fn(|k| {
                    let mut c = Variety::from_index(k).canonical_coloring().permute_colors(&color_perm);
                    if mirrored {
                        c = c.mirror();
                    }
                    Variety::of_coloring(&c).index() as u8
                });
                let triples = std::array::from_fn(|k| {
                    let mut t = CornerTriple::from_id(k).permute(&color_perm);
                    if mirrored {
                        t = t.mirror();
                    }
                    t.id() as u8
                });
                out.push(SymmetryData { color_perm, mirrored, varieties, triples });
            }
        }
        debug_assert!(out.iter().enumerate().all(|(k, d)| perm_rank(&d.color_perm) * 2 + d.mirrored as usize == k));
        out
    })
}

impl Symmetry {
    pub fn identity() -> Symmetry {
        Symmetry { id: 0 }
    }

    /// The reflection with no color change.
    pub fn mirror() -> Symmetry {
        Symmetry { id: 1 }
    }

    pub fn new(color_perm: [Color; 6], mirrored: bool) -> Symmetry {
        Symmetry { id: (perm_rank(&color_perm) * 2 + mirrored as usize) as u16 }
    }

    /// All 1440 elements; the identity comes first.
    pub fn all() -> impl Iterator<Item = Symmetry> + Clone {
        (0..GROUP_ORDER as u16).map(|id| Symmetry { id })
    }

    pub fn id(&self) -> usize {
        self.id as usize
    }

    fn data(&self) -> &'static SymmetryData {
        &group()[self.id()]
    }

    pub fn color_perm(&self) -> [Color; 6] {
        self.data().color_perm
    }

    pub fn is_mirrored(&self) -> bool {
        self.data().mirrored
    }

    pub fn apply(&self, v: Variety) -> Variety {
        Variety::from_index(self.data().varieties[v.index()] as usize)
    }

    pub fn apply_triple(&self, t: &CornerTriple) -> CornerTriple {
        CornerTriple::from_id(self.data().triples[t.id()] as usize)
    }

    /// Image of each dense variety index.
    pub fn variety_perm(&self) -> &'static [u8; NUM_VARIETIES] {
        &self.data().varieties
    }

    /// Image of each triple id.
    pub fn triple_perm(&self) -> &'static [u8; 40] {
        &self.data().triples
    }

    pub fn apply_mask(&self, mask: VarietyMask) -> VarietyMask {
        iter_mask(mask).fold(0, |m, v| m | self.apply(v).bit())
    }

    pub fn apply_triple_mask(&self, mask: u64) -> u64 {
        let perm = self.triple_perm();
        (0..40).filter(|k| mask & (1 << k) != 0).fold(0, |m, k| m | 1 << perm[k])
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Symmetry) -> Symmetry {
        let a = self.color_perm();
        let b = other.color_perm();
        Symmetry::new(b.map(|c| a[c.index()]), self.is_mirrored() != other.is_mirrored())
    }

    pub fn inverse(&self) -> Symmetry {
        let p = self.color_perm();
        let mut inv = [Color::P; 6];
        for (k, c) in p.iter().enumerate() {
            inv[c.index()] = Color::from_index(k);
        }
        Symmetry::new(inv, self.is_mirrored())
    }
}

impl fmt::Debug for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let perm: String = self.color_perm().iter().map(|c| c.letter()).collect();
        write!(f, "Symmetry(pqrstu->{perm}{})", if self.is_mirrored() { ", mirrored" } else { "" })
    }
}

/// Group elements mapping the set `mask` onto itself.
pub fn stabilizer(mask: VarietyMask) -> Vec<Symmetry> {
    Symmetry::all().filter(|s| s.apply_mask(mask) == mask).collect()
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::variety::{mask_of, ALL_VARIETIES_MASK};

    fn v(i: usize, j: usize) -> Variety {
        Variety::from_coords(i, j).unwrap()
    }

    #[test]
    fn group_acts_faithfully() {
        let perms: BTreeSet<_> = Symmetry::all().map(|s| *s.variety_perm()).collect();
        assert_eq!(perms.len(), GROUP_ORDER);
        for s in Symmetry::all() {
            let img: BTreeSet<_> = Variety::all().map(|x| s.apply(x)).collect();
            assert_eq!(img.len(), 30);
        }
    }

    #[test]
    fn action_laws() {
        let id = Symmetry::identity();
        assert!(Variety::all().all(|x| id.apply(x) == x));
        assert_eq!(Symmetry::mirror().apply(v(1, 2)), v(2, 1));
        let sample: Vec<Symmetry> = Symmetry::all().step_by(37).collect();
        for a in &sample {
            assert_eq!(a.compose(&a.inverse()), id);
            for b in &sample {
                let ab = a.compose(b);
                for x in Variety::all() {
                    assert_eq!(ab.apply(x), a.apply(b.apply(x)));
                }
            }
        }
    }

    #[test]
    fn compatibility_is_equivariant() {
        for s in Symmetry::all() {
            for a in Variety::all() {
                let sa = s.apply(a);
                assert_eq!(s.apply_mask(a.compatible_mask()), sa.compatible_mask());
                // triples move along with varieties
                assert_eq!(s.apply_triple_mask(a.triple_mask()), sa.triple_mask());
            }
        }
    }

    #[test]
    fn acts_on_table_labels() {
        // every element relabels rows/columns by one permutation, transposing when mirrored
        for s in Symmetry::all() {
            let mut label = [0usize; 7];
            for x in Variety::all() {
                let (i, j) = x.coords();
                let (a, b) = s.apply(x).coords();
                let (a, b) = if s.is_mirrored() { (b, a) } else { (a, b) };
                for (from, to) in [(i, a), (j, b)] {
                    assert!(label[from] == 0 || label[from] == to, "{s:?}");
                    label[from] = to;
                }
            }
        }
    }

    #[test]
    fn stabilizers() {
        assert_eq!(stabilizer(0).len(), GROUP_ORDER);
        assert_eq!(stabilizer(ALL_VARIETIES_MASK).len(), GROUP_ORDER);
        let row1 = mask_of((2..=6).map(|j| v(1, j)));
        let stab = stabilizer(row1);
        assert_eq!(stab.len(), 120);
        assert!(stab.iter().all(|s| s.apply_mask(row1) == row1));
        assert_eq!(stabilizer(v(1, 2).bit()).len(), 48);
    }
}
