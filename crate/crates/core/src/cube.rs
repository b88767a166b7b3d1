//! Unit-cube geometry: colors, face slots, rotations, corners and corner triples.
//!
//! The cube is placed with its faces pointing along the coordinate axes:
//! `Up = +z`, `Down = -z`, `Front = -y`, `Back = +y`, `Left = -x`,
//! `Right = +x`. Every other type in the crate is built from the tables in
//! this module.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// One of the six palette colors, ordered `p < q < r < s < t < u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Color {
    P,
    Q,
    R,
    S,
    T,
    U,
}

impl Color {
    pub const ALL: [Color; 6] = [Color::P, Color::Q, Color::R, Color::S, Color::T, Color::U];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Color {
        Color::ALL[i]
    }

    pub fn letter(self) -> char {
        (b'p' + self as u8) as char
    }

    pub fn from_letter(c: char) -> Result<Color, Error> {
        match c {
            'p'..='u' => Ok(Color::ALL[(c as u8 - b'p') as usize]),
            _ => Err(Error::InvalidInput(format!("unknown color letter {c:?}"))),
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// The six face slots of a cube in a fixed frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Face {
    Up,
    Down,
    Front,
    Back,
    Left,
    Right,
}

impl Face {
    pub const ALL: [Face; 6] = [Face::Up, Face::Down, Face::Front, Face::Back, Face::Left, Face::Right];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Outward unit normal.
    pub fn normal(self) -> [i8; 3] {
        match self {
            Face::Up => [0, 0, 1],
            Face::Down => [0, 0, -1],
            Face::Front => [0, -1, 0],
            Face::Back => [0, 1, 0],
            Face::Left => [-1, 0, 0],
            Face::Right => [1, 0, 0],
        }
    }

    fn from_normal(n: [i8; 3]) -> Face {
        *Face::ALL.iter().find(|f| f.normal() == n).expect("axis-aligned unit normal")
    }

    pub fn letter(self) -> char {
        match self {
            Face::Up => 'U',
            Face::Down => 'D',
            Face::Front => 'F',
            Face::Back => 'B',
            Face::Left => 'L',
            Face::Right => 'R',
        }
    }
}

/// The eight corners, each given as its three faces in clockwise order when
/// the corner is viewed from outside the cube.
///
/// For a corner with face normals `a, b, c` the order is clockwise exactly
/// when `det[a, b, c] < 0`; see the `corner_orientation` test.
pub const CORNERS: [[Face; 3]; 8] = [
    [Face::Right, Face::Up, Face::Back],
    [Face::Right, Face::Back, Face::Down],
    [Face::Right, Face::Front, Face::Up],
    [Face::Right, Face::Down, Face::Front],
    [Face::Left, Face::Back, Face::Up],
    [Face::Left, Face::Down, Face::Back],
    [Face::Left, Face::Up, Face::Front],
    [Face::Left, Face::Front, Face::Down],
];

/// A proper rotation of the cube, stored as the face-slot permutation it
/// induces: the content of slot `f` moves to slot `perm[f]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rotation {
    perm: [Face; 6],
}

impl Rotation {
    pub fn image(&self, f: Face) -> Face {
        self.perm[f.index()]
    }

    /// All 24 rotations; the identity comes first.
    pub fn all() -> &'static [Rotation; 24] {
        static ROTATIONS: OnceLock<[Rotation; 24]> = OnceLock::new();
        ROTATIONS.get_or_init(generate_rotations)
    }
}

type Matrix = [[i8; 3]; 3];

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = [[0i8; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn mat_apply(m: &Matrix, v: [i8; 3]) -> [i8; 3] {
    let mut out = [0i8; 3];
    for i in 0..3 {
        out[i] = (0..3).map(|k| m[i][k] * v[k]).sum();
    }
    out
}

fn generate_rotations() -> [Rotation; 24] {
    const IDENTITY: Matrix = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    // quarter turns about z and about x
    const GENERATORS: [Matrix; 2] = [[[0, -1, 0], [1, 0, 0], [0, 0, 1]], [[1, 0, 0], [0, 0, -1], [0, 1, 0]]];

    let mut found: Vec<Matrix> = vec![IDENTITY];
    let mut next = 0;
    while next < found.len() {
        let m = found[next];
        next += 1;
        for g in &GENERATORS {
            let p = mat_mul(g, &m);
            if !found.contains(&p) {
                found.push(p);
            }
        }
    }
    assert_eq!(found.len(), 24, "rotation group of the cube has order 24");
    let rotations: Vec<Rotation> = found
        .iter()
        .map(|m| {
            let mut perm = [Face::Up; 6];
            for f in Face::ALL {
                perm[f.index()] = Face::from_normal(mat_apply(m, f.normal()));
            }
            Rotation { perm }
        })
        .collect();
    rotations.try_into().expect("24 rotations")
}

/// An ordered triple of distinct colors read clockwise around a corner,
/// rotated so that the smallest color leads.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CornerTriple([Color; 3]);

impl CornerTriple {
    /// Canonicalizes three colors given in clockwise order.
    pub fn new(a: Color, b: Color, c: Color) -> Result<CornerTriple, Error> {
        if a == b || b == c || a == c {
            return Err(Error::InvalidInput(format!("corner colors must be distinct, got ({a},{b},{c})")));
        }
        let t = if a < b && a < c {
            [a, b, c]
        } else if b < c {
            [b, c, a]
        } else {
            [c, a, b]
        };
        Ok(CornerTriple(t))
    }

    pub fn colors(&self) -> [Color; 3] {
        self.0
    }

    /// The same three colors read in the opposite direction.
    pub fn mirror(&self) -> CornerTriple {
        let [a, b, c] = self.0;
        CornerTriple([a, c, b])
    }

    /// Dense id in `0..40`: the color set picks one of 20 slots, the
    /// orientation picks the parity.
    pub fn id(&self) -> usize {
        let [_, b, c] = self.0;
        let mut sorted = self.0;
        sorted.sort();
        2 * triple_set_rank(sorted) + usize::from(b > c)
    }

    pub fn from_id(id: usize) -> CornerTriple {
        all_triples()[id]
    }

    /// Applies a color relabelling, keeping the orientation.
    pub fn permute(&self, color_perm: &[Color; 6]) -> CornerTriple {
        let [a, b, c] = self.0;
        CornerTriple::new(color_perm[a.index()], color_perm[b.index()], color_perm[c.index()])
            .expect("a permutation keeps colors distinct")
    }
}

fn triple_set_rank(sorted: [Color; 3]) -> usize {
    let mut rank = 0;
    for x in 0..6 {
        for y in x + 1..6 {
            for z in y + 1..6 {
                if [x, y, z] == [sorted[0].index(), sorted[1].index(), sorted[2].index()] {
                    return rank;
                }
                rank += 1;
            }
        }
    }
    unreachable!("three distinct colors")
}

/// All 40 canonical corner triples, ordered by [`CornerTriple::id`].
pub fn all_triples() -> &'static [CornerTriple; 40] {
    static TRIPLES: OnceLock<[CornerTriple; 40]> = OnceLock::new();
    TRIPLES.get_or_init(|| {
        let mut out = Vec::with_capacity(40);
        for x in 0..6 {
            for y in x + 1..6 {
                for z in y + 1..6 {
                    let (a, b, c) = (Color::ALL[x], Color::ALL[y], Color::ALL[z]);
                    out.push(CornerTriple([a, b, c]));
                    out.push(CornerTriple([a, c, b]));
                }
            }
        }
        out.try_into().expect("40 triples")
    })
}

impl fmt::Display for CornerTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0;
        write!(f, "({a},{b},{c})")
    }
}

impl FromStr for CornerTriple {
    type Err = Error;

    /// Accepts `pqt`, `(p,q,t)` or `p q t`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let letters: Vec<char> = s.chars().filter(|c| c.is_ascii_lowercase()).collect();
        if letters.len() != 3 {
            return Err(Error::InvalidInput(format!("expected three color letters, got {s:?}")));
        }
        CornerTriple::new(
            Color::from_letter(letters[0])?,
            Color::from_letter(letters[1])?,
            Color::from_letter(letters[2])?,
        )
    }
}

/// An assignment of the six colors to the six face slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Coloring([Color; 6]);

impl Coloring {
    /// Face colors in `U, D, F, B, L, R` order; all six colors must appear.
    pub fn new(faces: [Color; 6]) -> Result<Coloring, Error> {
        let mut seen = [false; 6];
        for c in faces {
            if std::mem::replace(&mut seen[c.index()], true) {
                return Err(Error::InvalidInput(format!("color {c} appears twice")));
            }
        }
        Ok(Coloring(faces))
    }

    pub fn faces(&self) -> [Color; 6] {
        self.0
    }

    pub fn color(&self, f: Face) -> Color {
        self.0[f.index()]
    }

    /// All 720 colorings in lexicographic order.
    pub fn all() -> impl Iterator<Item = Coloring> {
        use itertools::Itertools;
        Color::ALL.into_iter().permutations(6).map(|p| Coloring(p.try_into().expect("six colors")))
    }

    pub fn rotate(&self, r: &Rotation) -> Coloring {
        let mut out = self.0;
        for f in Face::ALL {
            out[r.image(f).index()] = self.0[f.index()];
        }
        Coloring(out)
    }

    /// Reflection through the plane between Left and Right.
    pub fn mirror(&self) -> Coloring {
        let mut out = self.0;
        out.swap(Face::Left.index(), Face::Right.index());
        Coloring(out)
    }

    pub fn permute_colors(&self, color_perm: &[Color; 6]) -> Coloring {
        Coloring(self.0.map(|c| color_perm[c.index()]))
    }

    /// Lexicographically smallest rotation of this coloring.
    pub fn canonical(&self) -> Coloring {
        Rotation::all().iter().map(|r| self.rotate(r)).min().expect("non-empty")
    }

    pub fn corner_triple(&self, corner: usize) -> CornerTriple {
        let [a, b, c] = CORNERS[corner];
        CornerTriple::new(self.color(a), self.color(b), self.color(c)).expect("a coloring has distinct colors")
    }

    /// The eight corner triples, sorted.
    pub fn corner_triples(&self) -> [CornerTriple; 8] {
        let mut out: [CornerTriple; 8] = std::array::from_fn(|k| self.corner_triple(k));
        out.sort();
        out
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.0 {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Coloring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.trim().chars().collect();
        if chars.len() != 6 {
            return Err(Error::InvalidInput(format!("a coloring has six letters, got {s:?}")));
        }
        let mut faces = [Color::P; 6];
        for (slot, ch) in faces.iter_mut().zip(chars) {
            *slot = Color::from_letter(ch)?;
        }
        Coloring::new(faces)
    }
}
