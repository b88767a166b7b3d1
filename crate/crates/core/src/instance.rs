//! Instances: multisets of cubes stored as per-variety counts.
//!
//! Text forms:
//!
//! * dense: six lines of six whitespace-separated non-negative integers, the
//!   diagonal zero (entry `(i,j)` counts `(i,j)`-cubes);
//! * sparse: one `i j count` line per non-zero cell.
//!
//! Blank lines and `#` comments are ignored. The parser picks the form by
//! the number of tokens per line.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symmetry::Symmetry;
use crate::variety::{Variety, NUM_VARIETIES};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Instance {
    counts: [u32; NUM_VARIETIES],
}

impl Instance {
    pub fn empty() -> Instance {
        Instance::default()
    }

    pub fn from_counts(counts: [u32; NUM_VARIETIES]) -> Instance {
        Instance { counts }
    }

    /// Builds an instance from a 6×6 matrix with zero diagonal.
    pub fn from_matrix(m: [[u32; 6]; 6]) -> Result<Instance> {
        let mut counts = [0; NUM_VARIETIES];
        for (i, row) in m.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if i == j {
                    if c != 0 {
                        return Err(Error::MalformedInstance(format!("diagonal entry ({},{}) is {c}", i + 1, i + 1)));
                    }
                } else {
                    counts[Variety::from_coords(i + 1, j + 1)?.index()] = c;
                }
            }
        }
        Ok(Instance { counts })
    }

    /// `copies` cubes of a single variety.
    pub fn copies(v: Variety, copies: u32) -> Instance {
        let mut out = Instance::empty();
        out.set(v, copies);
        out
    }

    pub fn matrix(&self) -> [[u32; 6]; 6] {
        let mut m = [[0; 6]; 6];
        for v in Variety::all() {
            let (i, j) = v.coords();
            m[i - 1][j - 1] = self.get(v);
        }
        m
    }

    pub fn counts(&self) -> &[u32; NUM_VARIETIES] {
        &self.counts
    }

    pub fn get(&self, v: Variety) -> u32 {
        self.counts[v.index()]
    }

    pub fn set(&mut self, v: Variety, count: u32) {
        self.counts[v.index()] = count;
    }

    pub fn add(&mut self, v: Variety, count: u32) {
        self.counts[v.index()] += count;
    }

    pub fn size(&self) -> u64 {
        self.counts.iter().map(|&c| u64::from(c)).sum()
    }

    /// Varieties with at least one cube.
    pub fn support(&self) -> impl Iterator<Item = Variety> + '_ {
        Variety::all().filter(|v| self.get(*v) > 0)
    }

    /// Image under a symmetry: a cube of variety `v` becomes a cube of `s·v`.
    pub fn permuted(&self, s: &Symmetry) -> Instance {
        let mut out = Instance::empty();
        for v in Variety::all() {
            out.set(s.apply(v), self.get(v));
        }
        out
    }

    /// `i j count` lines for the non-zero cells.
    pub fn to_sparse_string(&self) -> String {
        let mut out = String::new();
        for v in self.support() {
            let (i, j) = v.coords();
            out.push_str(&format!("{i} {j} {}\n", self.get(v)));
        }
        out
    }

    /// Compact one-line form: the six matrix rows separated by `/`.
    pub fn to_row_string(&self) -> String {
        self.matrix().iter().map(|r| r.map(|c| c.to_string()).join(" ")).collect::<Vec<_>>().join(" / ")
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.matrix() {
            writeln!(f, "{}", row.map(|c| c.to_string()).join(" "))?;
        }
        Ok(())
    }
}

fn parse_count(tok: &str) -> Result<u32> {
    let value: i64 = tok.parse().map_err(|_| Error::MalformedInstance(format!("{tok:?} is not an integer")))?;
    if value < 0 {
        return Err(Error::MalformedInstance(format!("negative count {value}")));
    }
    u32::try_from(value).map_err(|_| Error::MalformedInstance(format!("count {value} is too large")))
}

impl FromStr for Instance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows: Vec<Vec<&str>> = s
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(|l| l.split_whitespace().collect())
            .collect();
        if rows.is_empty() {
            return Err(Error::MalformedInstance("no data lines".into()));
        }
        if rows.iter().all(|r| r.len() == 3) {
            let mut out = Instance::empty();
            for r in &rows {
                let idx =
                    |t: &str| t.parse::<usize>().map_err(|_| Error::MalformedInstance(format!("bad index {t:?}")));
                let (i, j) = (idx(r[0])?, idx(r[1])?);
                if i == j {
                    if parse_count(r[2])? != 0 {
                        return Err(Error::MalformedInstance(format!("diagonal entry ({i},{i}) is non-zero")));
                    }
                    continue;
                }
                let v = Variety::from_coords(i, j).map_err(|e| Error::MalformedInstance(e.to_string()))?;
                out.add(v, parse_count(r[2])?);
            }
            return Ok(out);
        }
        if rows.len() != 6 || rows.iter().any(|r| r.len() != 6) {
            return Err(Error::MalformedInstance(format!(
                "expected a 6x6 matrix or `i j count` lines, got {} lines with {:?} tokens",
                rows.len(),
                rows.iter().map(Vec::len).collect::<Vec<_>>()
            )));
        }
        let mut m = [[0; 6]; 6];
        for (i, r) in rows.iter().enumerate() {
            for (j, tok) in r.iter().enumerate() {
                m[i][j] = parse_count(tok)?;
            }
        }
        Instance::from_matrix(m)
    }
}
