//! Conway's 6×6 arrangement of the 30 varieties.
//!
//! The arrangement is rebuilt by backtracking: cell `(1,2)` holds the variety
//! with triples `{pqt, psu, pts, puq, qrt, qur, rst, rus}`, the transposed cell
//! holds the mirror variety, and every row and every column is a set of five
//! pairwise incompatible varieties. Cells are filled in row-major order and
//! candidates are tried in order of their canonical coloring.
//!
//! These rules leave 48 arrangements, all related by the color permutations
//! fixing `(1,2)`. The one used is the first in search order in which the
//! cubes of [`LABEL_EXAMPLE`] other than `(1,2)` itself touch every triple
//! of `(1,2)` except `psu`.

use std::fmt;
use std::str::FromStr;

use crate::cube::{Coloring, CornerTriple};
use crate::error::{Error, Result};
use crate::variety::Variety;

/// Triples of the variety pinned to cell `(1,2)`.
pub const PINNED_TRIPLES: [&str; 8] = ["pqt", "psu", "pts", "puq", "qrt", "qur", "rst", "rus"];

/// Cells of the nine-cube example used to fix the labelling.
pub const LABEL_EXAMPLE: [(usize, usize); 7] = [(1, 2), (2, 6), (3, 5), (3, 6), (5, 6), (6, 4), (6, 5)];

/// The one triple of `(1,2)` the example leaves untouched.
pub const LABEL_UNTOUCHED: &str = "psu";

pub(crate) type Cells = [[Option<usize>; 6]; 6];

fn pinned_mask() -> u64 {
    PINNED_TRIPLES.iter().map(|s| s.parse::<CornerTriple>().expect("valid triple")).fold(0, |m, t| m | 1 << t.id())
}

struct Arranger<'a> {
    masks: &'a [u64],
    mirror: Vec<usize>,
    cells: Cells,
    used: Vec<bool>,
    limit: usize,
    found: Vec<Cells>,
}

impl Arranger<'_> {
    fn compatible(&self, a: usize, b: usize) -> bool {
        self.masks[a] & self.masks[b] != 0
    }

    fn fits(&self, i: usize, j: usize, v: usize) -> bool {
        if self.used[v] {
            return false;
        }
        if let Some(t) = self.cells[j][i] {
            if self.mirror[v] != t {
                return false;
            }
        }
        for k in 0..6 {
            if let Some(w) = self.cells[i][k] {
                if self.compatible(v, w) {
                    return false;
                }
            }
            if let Some(w) = self.cells[k][j] {
                if self.compatible(v, w) {
                    return false;
                }
            }
        }
        true
    }

    fn fill(&mut self, pos: usize) {
        if self.found.len() >= self.limit {
            return;
        }
        if pos == 36 {
            self.found.push(self.cells);
            return;
        }
        let (i, j) = (pos / 6, pos % 6);
        if i == j || self.cells[i][j].is_some() {
            self.fill(pos + 1);
            return;
        }
        for v in 0..self.masks.len() {
            if self.fits(i, j, v) {
                self.place(i, j, Some(v));
                self.fill(pos + 1);
                self.place(i, j, None);
            }
        }
    }

    fn place(&mut self, i: usize, j: usize, v: Option<usize>) {
        if let Some(old) = self.cells[i][j] {
            self.used[old] = false;
        }
        if let Some(v) = v {
            self.used[v] = true;
        }
        self.cells[i][j] = v;
    }
}

fn arrangements(classes: &[Coloring], masks: &[u64], limit: usize) -> Result<Vec<Cells>> {
    let pinned = masks
        .iter()
        .position(|&m| m == pinned_mask())
        .ok_or_else(|| Error::Internal("no variety carries the pinned triple set".into()))?;
    let mirror = classes
        .iter()
        .map(|c| {
            let m = c.mirror().canonical();
            classes.iter().position(|x| *x == m).expect("mirror class exists")
        })
        .collect();
    let mut arranger =
        Arranger { masks, mirror, cells: [[None; 6]; 6], used: vec![false; classes.len()], limit, found: Vec::new() };
    arranger.place(0, 1, Some(pinned));
    arranger.fill(0);
    Ok(arranger.found)
}

fn untouched(cells: &Cells, masks: &[u64]) -> u64 {
    let pinned = pinned_mask();
    let touched = LABEL_EXAMPLE
        .iter()
        .filter(|&&cell| cell != (1, 2))
        .map(|&(i, j)| cells[i - 1][j - 1].map_or(0, |k| masks[k] & pinned))
        .fold(0, |m, x| m | x);
    pinned & !touched
}

/// The labelled arrangement; `classes` must be sorted by canonical coloring.
pub(crate) fn arrange(classes: &[Coloring], masks: &[u64]) -> Result<Cells> {
    let want = 1u64 << LABEL_UNTOUCHED.parse::<CornerTriple>()?.id();
    arrangements(classes, masks, usize::MAX)?
        .into_iter()
        .find(|cells| untouched(cells, masks) == want)
        .ok_or_else(|| Error::Internal("no Conway table satisfies the mirror, row/column and labelling rules".into()))
}

/// Every arrangement with `(1,2)` pinned, as grids of canonical colorings.
pub fn all_arrangements() -> Result<Vec<[[Option<Coloring>; 6]; 6]>> {
    let classes = crate::variety::enumerate_classes();
    let masks: Vec<u64> = classes.iter().map(|c| c.corner_triples().iter().fold(0, |m, t| m | 1 << t.id())).collect();
    Ok(arrangements(&classes, &masks, usize::MAX)?
        .into_iter()
        .map(|cells| cells.map(|row| row.map(|cell| cell.map(|k| classes[k]))))
        .collect())
}

/// The table of varieties; off-diagonal cell `(i, j)` holds variety `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConwayTable {
    cells: [[Option<Coloring>; 6]; 6],
}

impl ConwayTable {
    pub fn build() -> ConwayTable {
        let mut cells = [[None; 6]; 6];
        for v in Variety::all() {
            let (i, j) = v.coords();
            cells[i - 1][j - 1] = Some(v.canonical_coloring());
        }
        ConwayTable { cells }
    }

    /// Canonical coloring at 1-based cell `(i, j)`.
    pub fn cell(&self, i: usize, j: usize) -> Option<Coloring> {
        self.cells.get(i.wrapping_sub(1))?.get(j.wrapping_sub(1)).copied().flatten()
    }

    pub fn row(&self, i: usize) -> Vec<Variety> {
        (1..=6).filter(|&j| j != i).map(|j| Variety::from_coords(i, j).expect("off-diagonal")).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Variety> {
        (1..=6).filter(|&i| i != j).map(|i| Variety::from_coords(i, j).expect("off-diagonal")).collect()
    }

    /// Checks both table properties: transposed cells are mirrors, and each
    /// row and column is pairwise incompatible.
    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for i in 1..=6 {
            for j in 1..=6 {
                let c = self.cell(i, j);
                if i == j {
                    if c.is_some() {
                        return Err(Error::InvalidInput(format!("diagonal cell ({i},{i}) is filled")));
                    }
                    continue;
                }
                let c = c.ok_or_else(|| Error::InvalidInput(format!("cell ({i},{j}) is empty")))?;
                if !seen.insert(c.canonical()) {
                    return Err(Error::InvalidInput(format!("variety {c} appears twice")));
                }
                let t = self.cell(j, i).expect("off-diagonal");
                if c.mirror().canonical() != t.canonical() {
                    return Err(Error::InvalidInput(format!("cell ({j},{i}) is not the mirror of ({i},{j})")));
                }
            }
        }
        let compatible = |a: Coloring, b: Coloring| {
            let ta = a.corner_triples();
            b.corner_triples().iter().any(|t| ta.contains(t))
        };
        for k in 1..=6 {
            for (a, b) in
                (1..=6).filter(|&x| x != k).flat_map(|a| (1..=6).filter(move |&b| b != k && b > a).map(move |b| (a, b)))
            {
                if compatible(self.cell(k, a).unwrap(), self.cell(k, b).unwrap()) {
                    return Err(Error::InvalidInput(format!("row {k} has compatible cells {a} and {b}")));
                }
                if compatible(self.cell(a, k).unwrap(), self.cell(b, k).unwrap()) {
                    return Err(Error::InvalidInput(format!("column {k} has compatible cells {a} and {b}")));
                }
            }
        }
        Ok(())
    }
}

/// Six lines of six tokens; the diagonal is `-`, other tokens are face
/// colors in `U D F B L R` order.
impl fmt::Display for ConwayTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.cells {
            let tokens: Vec<String> =
                row.iter().map(|c| c.map_or_else(|| "-".to_string(), |c| c.to_string())).collect();
            writeln!(f, "{}", tokens.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for ConwayTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lines: Vec<&str> = s.lines().filter(|l| !l.trim().is_empty()).collect();
        if lines.len() != 6 {
            return Err(Error::InvalidInput(format!("a table dump has 6 lines, got {}", lines.len())));
        }
        let mut cells = [[None; 6]; 6];
        for (i, line) in lines.iter().enumerate() {
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != 6 {
                return Err(Error::InvalidInput(format!("line {} has {} tokens", i + 1, tokens.len())));
            }
            for (j, tok) in tokens.iter().enumerate() {
                cells[i][j] = if *tok == "-" { None } else { Some(tok.parse()?) };
            }
        }
        Ok(ConwayTable { cells })
    }
}
