//! The 30 cube varieties and the corner-triple algebra between them.
//!
//! A variety is a rotation class of colorings. Varieties are addressed by
//! their Conway-table cell `(i, j)` with `i != j`, both in `1..=6`; the
//! dense index used throughout the crate is the row-major position of that
//! cell with the diagonal skipped, so `(1,2)` is 0 and `(6,5)` is 29.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::cube::{Coloring, CornerTriple, Face, CORNERS};
use crate::error::{Error, Result};
use crate::table;

pub const NUM_VARIETIES: usize = 30;

/// A set of varieties as a bitmask over dense indices.
pub type VarietyMask = u32;

pub const ALL_VARIETIES_MASK: VarietyMask = (1 << NUM_VARIETIES) - 1;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Variety(u8);

impl Variety {
    pub fn from_index(index: usize) -> Variety {
        assert!(index < NUM_VARIETIES, "variety index {index} out of range");
        Variety(index as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_coords(i: usize, j: usize) -> Result<Variety> {
        if !(1..=6).contains(&i) || !(1..=6).contains(&j) || i == j {
            return Err(Error::InvalidInput(format!("({i},{j}) is not an off-diagonal table cell")));
        }
        let col = if j < i { j - 1 } else { j - 2 };
        Ok(Variety(((i - 1) * 5 + col) as u8))
    }

    /// Table cell `(row, column)`, 1-based.
    pub fn coords(self) -> (usize, usize) {
        let i = self.index() / 5;
        let k = self.index() % 5;
        let j = if k < i { k } else { k + 1 };
        (i + 1, j + 1)
    }

    pub fn row(self) -> usize {
        self.coords().0
    }

    pub fn col(self) -> usize {
        self.coords().1
    }

    pub fn all() -> impl Iterator<Item = Variety> + Clone {
        (0..NUM_VARIETIES).map(Variety::from_index)
    }

    pub fn bit(self) -> VarietyMask {
        1 << self.0
    }

    /// Lexicographically minimal coloring of this variety.
    pub fn canonical_coloring(self) -> Coloring {
        universe().data[self.index()].coloring
    }

    /// The eight corner triples, sorted.
    pub fn triples(self) -> &'static [CornerTriple; 8] {
        &universe().data[self.index()].triples
    }

    /// The eight triples as a bitmask over [`CornerTriple::id`].
    pub fn triple_mask(self) -> u64 {
        universe().data[self.index()].triple_mask
    }

    /// Position of `t` in [`Variety::triples`], if this variety has it.
    pub fn local_triple(self, t: &CornerTriple) -> Option<usize> {
        self.triples().iter().position(|x| x == t)
    }

    pub fn mirror(self) -> Variety {
        Variety(universe().data[self.index()].mirror)
    }

    /// Variety of an arbitrary coloring.
    pub fn of_coloring(c: &Coloring) -> Variety {
        universe().by_coloring[&c.canonical()]
    }

    /// Corner triples shared with another variety; always 0 or 2 of them.
    pub fn shared_triples(self, other: Variety) -> Result<Vec<CornerTriple>> {
        if self == other {
            return Err(Error::InvalidInput(format!("shared triples of {self} with itself")));
        }
        let common = self.triple_mask() & other.triple_mask();
        let mut out: Vec<CornerTriple> = iter_bits64(common).map(CornerTriple::from_id).collect();
        out.sort();
        Ok(out)
    }

    pub fn is_compatible(self, other: Variety) -> bool {
        self.compatible_mask() & other.bit() != 0
    }

    pub fn compatible_mask(self) -> VarietyMask {
        universe().compatible[self.index()]
    }

    pub fn incompatible_mask(self) -> VarietyMask {
        ALL_VARIETIES_MASK & !self.compatible_mask() & !self.bit()
    }

    /// Varieties sharing two corner triples with this one (20 of them).
    pub fn compatible_set(self) -> Vec<Variety> {
        iter_mask(self.compatible_mask()).collect()
    }

    /// Other varieties sharing no corner triple with this one (9 of them).
    pub fn incompatible_set(self) -> Vec<Variety> {
        iter_mask(self.incompatible_mask()).collect()
    }

    /// For a compatible `other`, the local indices (into `self.triples()`)
    /// of the two shared triples.
    pub fn shared_pair(self, other: Variety) -> Option<(u8, u8)> {
        universe().shared_pair[self.index()][other.index()]
    }

    /// Varieties reachable by exchanging the colors of two faces that share
    /// an edge (12 of them).
    pub fn neighbors_by_swap(self) -> Vec<Variety> {
        let c = self.canonical_coloring();
        let mut out = Vec::new();
        for (a, b) in adjacent_face_pairs() {
            let mut faces = c.faces();
            faces.swap(a.index(), b.index());
            let v = Variety::of_coloring(&Coloring::new(faces).expect("swap keeps a bijection"));
            if v != self && !out.contains(&v) {
                out.push(v);
            }
        }
        out.sort();
        out
    }

    /// Varieties reachable by cycling the three colors around a corner,
    /// which keeps that corner's triple (8 of them).
    pub fn neighbors_by_rotation(self) -> Vec<Variety> {
        let c = self.canonical_coloring();
        let mut out = Vec::new();
        for [a, b, d] in CORNERS {
            for (x, y, z) in [(a, b, d), (a, d, b)] {
                let mut faces = c.faces();
                faces[y.index()] = c.color(x);
                faces[z.index()] = c.color(y);
                faces[x.index()] = c.color(z);
                let v = Variety::of_coloring(&Coloring::new(faces).expect("cycle keeps a bijection"));
                if v != self && !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out.sort();
        out
    }
}

fn adjacent_face_pairs() -> impl Iterator<Item = (Face, Face)> {
    Face::ALL.into_iter().enumerate().flat_map(|(k, a)| {
        Face::ALL[k + 1..]
            .iter()
            .copied()
            .filter(move |b| {
                let (na, nb) = (a.normal(), b.normal());
                na.iter().zip(nb).map(|(x, y)| i32::from(*x) * i32::from(y)).sum::<i32>() == 0
            })
            .map(move |b| (a, b))
    })
}

impl fmt::Display for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j) = self.coords();
        write!(f, "({i},{j})")
    }
}

impl fmt::Debug for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Variety {
    type Err = Error;

    /// Accepts `(i,j)`, `i,j` or `i j`.
    fn from_str(s: &str) -> Result<Self> {
        let digits: Vec<usize> = s
            .split(|c: char| !c.is_ascii_digit())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse().map_err(|_| Error::InvalidInput(format!("bad variety {s:?}"))))
            .collect::<Result<_>>()?;
        match digits[..] {
            [i, j] => Variety::from_coords(i, j),
            _ => Err(Error::InvalidInput(format!("expected a variety like (1,2), got {s:?}"))),
        }
    }
}

impl From<Variety> for String {
    fn from(v: Variety) -> String {
        v.to_string()
    }
}

impl TryFrom<String> for Variety {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

pub fn iter_mask(mask: VarietyMask) -> impl Iterator<Item = Variety> + Clone {
    (0..NUM_VARIETIES).filter(move |k| mask & (1 << k) != 0).map(Variety::from_index)
}

pub fn mask_of<I: IntoIterator<Item = Variety>>(vs: I) -> VarietyMask {
    vs.into_iter().fold(0, |m, v| m | v.bit())
}

fn iter_bits64(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |k| mask & (1 << k) != 0)
}

/// All 30 canonical colorings, one per rotation class, sorted.
pub fn enumerate_classes() -> Vec<Coloring> {
    let mut classes: Vec<Coloring> = Coloring::all().map(|c| c.canonical()).collect();
    classes.sort();
    classes.dedup();
    classes
}

pub(crate) struct VarietyData {
    pub(crate) coloring: Coloring,
    pub(crate) triples: [CornerTriple; 8],
    pub(crate) triple_mask: u64,
    pub(crate) mirror: u8,
}

pub(crate) struct Universe {
    pub(crate) data: Vec<VarietyData>,
    pub(crate) by_coloring: HashMap<Coloring, Variety>,
    compatible: [VarietyMask; NUM_VARIETIES],
    shared_pair: [[Option<(u8, u8)>; NUM_VARIETIES]; NUM_VARIETIES],
}

pub(crate) fn universe() -> &'static Universe {
    static UNIVERSE: OnceLock<Universe> = OnceLock::new();
    UNIVERSE.get_or_init(build_universe)
}

fn triple_mask(ts: &[CornerTriple; 8]) -> u64 {
    ts.iter().fold(0, |m, t| m | 1 << t.id())
}

fn build_universe() -> Universe {
    let classes = enumerate_classes();
    assert_eq!(classes.len(), NUM_VARIETIES);
    let masks: Vec<u64> = classes.iter().map(|c| triple_mask(&c.corner_triples())).collect();
    let cells = table::arrange(&classes, &masks).unwrap_or_else(|e| panic!("{e}"));

    // cells[row][col] holds an index into `classes`
    let mut order = Vec::with_capacity(NUM_VARIETIES);
    for (i, row) in cells.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            if i != j {
                order.push(cell.expect("off-diagonal cells are filled"));
            }
        }
    }
    let mut by_coloring = HashMap::new();
    let mut data = Vec::with_capacity(NUM_VARIETIES);
    for (idx, &raw) in order.iter().enumerate() {
        let coloring = classes[raw];
        by_coloring.insert(coloring, Variety::from_index(idx));
        let triples = coloring.corner_triples();
        data.push(VarietyData { coloring, triples, triple_mask: triple_mask(&triples), mirror: 0 });
    }
    for idx in 0..NUM_VARIETIES {
        let m = by_coloring[&data[idx].coloring.mirror().canonical()];
        data[idx].mirror = m.0;
    }

    let mut compatible = [0; NUM_VARIETIES];
    let mut shared_pair = [[None; NUM_VARIETIES]; NUM_VARIETIES];
    for a in 0..NUM_VARIETIES {
        for b in 0..NUM_VARIETIES {
            if a == b {
                continue;
            }
            let common = data[a].triple_mask & data[b].triple_mask;
            if common != 0 {
                compatible[a] |= 1 << b;
                let local: Vec<u8> = data[a]
                    .triples
                    .iter()
                    .enumerate()
                    .filter(|(_, t)| common & (1 << t.id()) != 0)
                    .map(|(k, _)| k as u8)
                    .collect();
                assert_eq!(local.len(), 2, "compatible varieties share exactly two triples");
                shared_pair[a][b] = Some((local[0], local[1]));
            }
        }
    }
    Universe { data, by_coloring, compatible, shared_pair }
}
