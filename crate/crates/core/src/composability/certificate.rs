use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::bipartite::{build_bipartite, max_matching};
use crate::cube::{Coloring, CornerTriple, Face, Rotation, CORNERS};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::variety::Variety;

/// One unit cube placed at one corner of the solid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Placement {
    /// Index into [`CORNERS`].
    pub corner: usize,
    pub triple: CornerTriple,
    pub variety: Variety,
    /// Which copy of `variety` in the instance is used.
    pub copy: u32,
    /// Face colors of the placed cube, in `U D F B L R` order.
    pub orientation: Coloring,
}

/// A complete way to build the target solid: one placement per corner.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArrangementCertificate {
    pub target: Variety,
    /// The solid's coloring; corner `k` shows `solid.corner_triple(k)`.
    pub solid: Coloring,
    pub placements: Vec<Placement>,
}

impl fmt::Display for ArrangementCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "solid {} colored {}", self.target, self.solid)?;
        for p in &self.placements {
            let faces: String = CORNERS[p.corner].iter().map(|x| x.letter()).collect();
            writeln!(f, "  corner {faces} {} <- {} copy {} oriented {}", p.triple, p.variety, p.copy, p.orientation)?;
        }
        Ok(())
    }
}

/// The unique rotation of `cube` showing the solid's colors on the three
/// exposed faces of `corner`.
fn orient(cube: Coloring, solid: Coloring, corner: usize) -> Option<Coloring> {
    let faces: [Face; 3] = CORNERS[corner];
    Rotation::all().iter().map(|r| cube.rotate(r)).find(|c| faces.iter().all(|&f| c.color(f) == solid.color(f)))
}

/// Builds the solid of `target` from the instance, if possible.
pub fn extract_arrangement(instance: &Instance, target: Variety) -> Result<ArrangementCertificate> {
    let g = build_bipartite(instance, target);
    let m = max_matching(&g);
    if m.size() < 8 {
        return Err(Error::NoCertificate(target.to_string()));
    }
    let solid = target.canonical_coloring();
    let mut placements = Vec::with_capacity(8);
    for corner in 0..8 {
        let triple = solid.corner_triple(corner);
        let local = target.local_triple(&triple).expect("solid corners carry target triples");
        let cube = m.triple_to_cube[local].expect("perfect matching");
        let (variety, copy) = g.cubes[cube];
        let orientation = orient(variety.canonical_coloring(), solid, corner)
            .ok_or_else(|| Error::Internal(format!("{variety} cannot show {triple} at corner {corner}")))?;
        placements.push(Placement { corner, triple, variety, copy, orientation });
    }
    Ok(ArrangementCertificate { target, solid, placements })
}

/// Independent re-check of a certificate against an instance: every corner
/// shows the solid's colors, every placed cube really is of its claimed
/// variety, and no cube copy is used twice.
pub fn verify_arrangement(instance: &Instance, cert: &ArrangementCertificate) -> Result<()> {
    let fail = |msg: String| Err(Error::InvalidInput(msg));
    if Variety::of_coloring(&cert.solid) != cert.target {
        return fail(format!("solid coloring {} is not of variety {}", cert.solid, cert.target));
    }
    if cert.placements.len() != 8 {
        return fail(format!("{} placements instead of 8", cert.placements.len()));
    }
    let corners: BTreeSet<usize> = cert.placements.iter().map(|p| p.corner).collect();
    if corners.len() != 8 || corners.iter().any(|&c| c >= 8) {
        return fail("corners are not each covered once".into());
    }
    let mut used = BTreeSet::new();
    for p in &cert.placements {
        if Variety::of_coloring(&p.orientation) != p.variety {
            return fail(format!("placed cube {} is not a {}", p.orientation, p.variety));
        }
        for f in CORNERS[p.corner] {
            if p.orientation.color(f) != cert.solid.color(f) {
                return fail(format!("corner {} shows the wrong color on face {}", p.corner, f.letter()));
            }
        }
        let [a, b, c] = CORNERS[p.corner].map(|f| p.orientation.color(f));
        if CornerTriple::new(a, b, c)? != p.triple {
            return fail(format!("corner {} does not show {}", p.corner, p.triple));
        }
        if p.copy >= instance.get(p.variety) {
            return fail(format!("copy {} of {} is not in the instance", p.copy, p.variety));
        }
        if !used.insert((p.variety, p.copy)) {
            return fail(format!("copy {} of {} used twice", p.copy, p.variety));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eight_copies_fill_every_corner() {
        for t in Variety::all() {
            let inst = Instance::copies(t, 8);
            let cert = extract_arrangement(&inst, t).unwrap();
            verify_arrangement(&inst, &cert).unwrap();
            let copies: BTreeSet<u32> = cert.placements.iter().map(|p| p.copy).collect();
            assert_eq!(copies.len(), 8);
        }
    }

    #[test]
    fn tampered_certificates_fail() {
        let t = Variety::from_coords(2, 4).unwrap();
        let inst = Instance::copies(t, 8);
        let cert = extract_arrangement(&inst, t).unwrap();
        let mut dup = cert.clone();
        dup.placements[1].copy = dup.placements[0].copy;
        assert!(verify_arrangement(&inst, &dup).is_err());
        let mut turned = cert.clone();
        turned.placements[0].orientation = turned.placements[0].orientation.rotate(&Rotation::all()[1]);
        assert!(verify_arrangement(&inst, &turned).is_err());
        assert!(verify_arrangement(&Instance::copies(t, 7), &cert).is_err());
    }

    #[test]
    fn not_composable_means_no_certificate() {
        let t = Variety::from_coords(1, 2).unwrap();
        assert!(matches!(extract_arrangement(&Instance::copies(t, 7), t), Err(Error::NoCertificate(_))));
    }
}
