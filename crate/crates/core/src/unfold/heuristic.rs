//! Obtuse-angle turning: hinge each A-triangle so that its obtuse corner
//! does not sit on the hinge with a B-triangle. A search strategy only; it
//! can overlap.

use std::f64::consts::FRAC_PI_2;

use crate::error::Result;
use crate::geom::angle_at;
use crate::polyhedron::{ConvexPolyhedron, EdgeKey};

use super::petal::{PetalChoice, PetalFan, PetalStructure};

/// Vertex of face `f` with an angle above π/2 (beyond `eps`), if any.
pub fn obtuse_corner(poly: &ConvexPolyhedron, f: usize, eps: f64) -> Result<Option<usize>> {
    let cyc = &poly.faces[f];
    let n = cyc.len();
    for k in 0..n {
        let (u, v, w) = (cyc[(k + n - 1) % n], cyc[k], cyc[(k + 1) % n]);
        if angle_at(poly.vertices[v], poly.vertices[u], poly.vertices[w])? > FRAC_PI_2 + eps {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

fn hinge(fan: &PetalFan, j: usize, split: usize) -> EdgeKey {
    if j < split {
        fan.crossings[j]
    } else {
        fan.crossings[j + 1]
    }
}

/// Split of one fan minimising the number of faces whose obtuse corner lies
/// on their hinge edge; ties go to the smallest split.
pub fn obtuse_turn_split(poly: &ConvexPolyhedron, fan: &PetalFan, eps: f64) -> Result<usize> {
    let corners = fan.faces.iter().map(|&f| obtuse_corner(poly, f, eps)).collect::<Result<Vec<_>>>()?;
    let cost = |k: usize| {
        corners
            .iter()
            .enumerate()
            .filter(|(j, c)| c.is_some_and(|v| {
                let e = hinge(fan, *j, k);
                e.0 == v || e.1 == v
            }))
            .count()
    };
    Ok((0..=fan.faces.len()).min_by_key(|&k| cost(k)).unwrap_or(0))
}

/// Topless choice from [`obtuse_turn_split`] on every fan.
pub fn obtuse_turn_choice(s: &PetalStructure, eps: f64) -> Result<PetalChoice> {
    let splits = s.fans.iter().map(|f| obtuse_turn_split(&s.poly, f, eps)).collect::<Result<Vec<_>>>()?;
    Ok(PetalChoice { splits, top: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::wings_ccw;
    use crate::geom::Point2;
    use crate::overlap::layout_overlaps;
    use crate::prismatoid::Prismatoid;

    #[test]
    fn resolves_the_crossed_wings() {
        let p = wings_ccw();
        let s = PetalStructure::topless(&p).unwrap();
        let c = obtuse_turn_choice(&s, p.tol.eps_ang).unwrap();
        let l = s.layout(&c).unwrap();
        assert!(!layout_overlaps(&l, &p.tol).overlapping, "{c}");
    }

    #[test]
    fn right_angles_are_not_obtuse() {
        let top = vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)];
        let base = crate::prismatoid::regular_polygon(5, 3.0, 0.1, Point2::new(0.3, 0.3));
        let p = Prismatoid::new(top, base, 1.0).unwrap();
        let poly = p.to_polyhedron();
        assert_eq!(obtuse_corner(&poly, Prismatoid::TOP_FACE, 1e-9).unwrap(), None);
    }
}
