//! A-fans: the A-triangles around one base vertex, and the angles their
//! a-chain forms when the fan is unfolded as a unit.

use std::f64::consts::PI;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::angle_at;
use crate::prismatoid::{FaceOrientation, Prismatoid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChainClass {
    Convex,
    /// Within `eps_ang` of `π`.
    Straight,
    Reflex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AFan {
    /// Base vertex index `i`.
    pub vertex: usize,
    /// Lateral face indices (into the hull band), from `B_{i-1}` to `B_i`.
    pub faces: Vec<usize>,
    /// Top vertex indices `a_0 ..= a_m` of the chain.
    pub chain: Vec<usize>,
    pub up: Vec<bool>,
    pub prev_b_up: bool,
    pub next_b_up: bool,
    /// Angle at each interior chain vertex `a_1 .. a_{m-1}` (sum of the two incident triangle angles).
    pub angles: Vec<f64>,
    pub classes: Vec<ChainClass>,
    /// Up faces occupy `faces[s..t]`; the tangents from `b_i` touch chain vertices `s` and `t`.
    pub tangents: Option<(usize, usize)>,
}

impl AFan {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn has_up_faces(&self) -> bool {
        self.up.iter().any(|&u| u)
    }

    /// Whether the up faces form one contiguous run.
    pub fn up_faces_contiguous(&self) -> bool {
        let runs = self.up.windows(2).filter(|w| !w[0] && w[1]).count() + usize::from(self.up.first() == Some(&true));
        runs <= 1
    }

    /// Convex prefix, reflex middle and convex suffix of the interior chain
    /// vertices (indices into `angles`), if the chain has that shape.
    /// Straight vertices may sit in any part.
    pub fn segmentation(&self) -> Option<(Range<usize>, Range<usize>, Range<usize>)> {
        let n = self.classes.len();
        let first_reflex = self.classes.iter().position(|&c| c == ChainClass::Reflex);
        let last_reflex = self.classes.iter().rposition(|&c| c == ChainClass::Reflex);
        match (first_reflex, last_reflex) {
            (None, _) | (_, None) => Some((0..n, n..n, n..n)),
            (Some(r0), Some(r1)) => {
                if self.classes[r0..=r1].contains(&ChainClass::Convex) {
                    None
                } else {
                    Some((0..r0, r0..r1 + 1, r1 + 1..n))
                }
            }
        }
    }
}

/// A-fan at base vertex `i` at the prismatoid's current height.
pub fn a_fan(p: &Prismatoid, i: usize) -> Result<AFan> {
    if i >= p.n_base() {
        return Err(Error::InvalidVertex(i));
    }
    let n = p.n_base();
    let (start, len) = p.hull.fans[i];
    let faces: Vec<usize> = (start..start + len).collect();
    let chain = p.hull.fan_vertices(i);
    let up: Vec<bool> = faces.iter().map(|&k| p.hull.faces[k].orientation == FaceOrientation::UpFace).collect();
    let b = p.b3(i);
    let mut angles = Vec::with_capacity(len.saturating_sub(1));
    for j in 1..len {
        let a = p.a3(chain[j]);
        let lo = angle_at(a, b, p.a3(chain[j - 1]))?;
        let hi = angle_at(a, b, p.a3(chain[j + 1]))?;
        angles.push(lo + hi);
    }
    let classes = angles.iter().map(|&a| classify(a, p.tol.eps_ang)).collect();
    let tangents = {
        let s = up.iter().position(|&u| u);
        let t = up.iter().rposition(|&u| u);
        s.zip(t).map(|(s, t)| (s, t + 1))
    };
    let orient = |k: usize| p.hull.faces[p.hull.b_faces[k]].orientation == FaceOrientation::UpFace;
    Ok(AFan {
        vertex: i,
        faces,
        chain,
        up,
        prev_b_up: orient((i + n - 1) % n),
        next_b_up: orient(i),
        angles,
        classes,
        tangents,
    })
}

pub fn classify(angle: f64, eps: f64) -> ChainClass {
    if angle < PI - eps {
        ChainClass::Convex
    } else if angle > PI + eps {
        ChainClass::Reflex
    } else {
        ChainClass::Straight
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point2;
    use crate::prismatoid::regular_polygon;

    #[test]
    fn single_triangle_fan_has_trivial_segmentation() {
        let base = regular_polygon(3, 2.0, 0.1, Point2::default());
        let top = regular_polygon(3, 0.5, 0.9, Point2::default());
        let p = Prismatoid::new(top, base, 1.0).unwrap();
        for i in 0..3 {
            let f = a_fan(&p, i).unwrap();
            assert_eq!(f.len(), 1);
            assert!(f.angles.is_empty());
            assert_eq!(f.segmentation(), Some((0..0, 0..0, 0..0)));
        }
    }

    #[test]
    fn shrunken_top_reflex_chain() {
        // B far outside A: b sees most of A, so chains bend away from b.
        let base = regular_polygon(3, 5.0, 0.0, Point2::default());
        let top = regular_polygon(9, 1.0, 0.05, Point2::default());
        let p = Prismatoid::new(top, base, 0.0).unwrap();
        for i in 0..3 {
            let f = a_fan(&p, i).unwrap();
            assert!(f.up.iter().all(|&u| u));
            assert!(f.classes.iter().all(|&c| c == ChainClass::Reflex));
            assert_eq!(f.tangents, Some((0, f.len())));
        }
    }
}
