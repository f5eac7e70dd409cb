//! Band unfoldings: cut one lateral edge and lay the lateral band flat as a
//! strip, with the base and the top each hinged to one band face.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyhedron::{edge_key, EdgeKey};
use crate::prismatoid::{FaceKind, LateralFace, Prismatoid, VertexRef};

use super::layout::{develop, FaceTag, Layout, RootFrame, Tree};

/// Which band faces carry the base and the top.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BandAttach {
    /// The nearest B-triangle and A-triangle on the two sides of the cut.
    Adjacent,
    /// Explicit lateral face indices.
    Explicit { base_on: usize, top_on: usize },
}

/// Number of lateral edges, i.e. of distinct band unfoldings.
pub fn lateral_edge_count(p: &Prismatoid) -> usize {
    p.hull.faces.len()
}

/// Lateral edge `c`, shared by band faces `c` and `c + 1`.
pub fn lateral_edge(p: &Prismatoid, c: usize) -> Result<(VertexRef, VertexRef)> {
    let l = p.hull.faces.len();
    if c >= l {
        return Err(Error::InvalidFace(c));
    }
    let f = &p.hull.faces[c].vertices;
    let g = &p.hull.faces[(c + 1) % l].vertices;
    let shared: Vec<VertexRef> = f.iter().copied().filter(|v| g.contains(v)).collect();
    match shared.as_slice() {
        [u, v] => match (u, v) {
            (VertexRef::A(_), VertexRef::B(_)) => Ok((*v, *u)),
            _ => Ok((*u, *v)),
        },
        _ => Err(Error::Malformed("consecutive band faces do not share an edge".into())),
    }
}

/// Index of the top vertex on lateral edge `c`.
pub fn cut_top_vertex(p: &Prismatoid, c: usize) -> Result<usize> {
    match lateral_edge(p, c)? {
        (VertexRef::B(_), VertexRef::A(j)) | (VertexRef::A(j), VertexRef::B(_)) => Ok(j),
        _ => Err(Error::Malformed("lateral edge without a top vertex".into())),
    }
}

pub fn band_unfolding(p: &Prismatoid, cut: usize) -> Result<Layout> {
    band_unfolding_with(p, cut, BandAttach::Adjacent)
}

pub fn band_unfolding_with(p: &Prismatoid, cut: usize, attach: BandAttach) -> Result<Layout> {
    let faces = &p.hull.faces;
    let l = faces.len();
    if cut >= l {
        return Err(Error::InvalidFace(cut));
    }
    let (base_on, top_on) = match attach {
        BandAttach::Explicit { base_on, top_on } => {
            if base_on >= l || faces[base_on].kind != FaceKind::BTriangle {
                return Err(Error::InvalidFace(base_on));
            }
            if top_on >= l || faces[top_on].kind != FaceKind::ATriangle {
                return Err(Error::InvalidFace(top_on));
            }
            (base_on, top_on)
        }
        BandAttach::Adjacent => {
            let back_kind = faces[cut].kind;
            let back = (0..l).map(|s| (cut + l - s) % l).find(|&k| faces[k].kind == back_kind);
            let other = match back_kind {
                FaceKind::BTriangle => FaceKind::ATriangle,
                FaceKind::ATriangle => FaceKind::BTriangle,
            };
            let fwd = (1..=l).map(|s| (cut + s) % l).find(|&k| faces[k].kind == other);
            match (back_kind, back, fwd) {
                (FaceKind::BTriangle, Some(b), Some(a)) => (b, a),
                (FaceKind::ATriangle, Some(a), Some(b)) => (b, a),
                _ => return Err(Error::Malformed("band lacks an A- or B-triangle".into())),
            }
        }
    };

    let id = Prismatoid::lateral_face_id;
    let mut parent: BTreeMap<usize, (usize, EdgeKey)> = BTreeMap::new();
    // Band order starting right after the cut: positions 0..l map to faces cut+1, ..., cut.
    let order: Vec<usize> = (1..=l).map(|s| (cut + s) % l).collect();
    let root_pos = order.iter().position(|&k| k == base_on).expect("face in band");
    for w in 0..root_pos {
        let (k, next) = (order[w], order[w + 1]);
        parent.insert(id(k), (id(next), shared_edge(p, &faces[k], &faces[next])));
    }
    for w in root_pos + 1..l {
        let (k, prev) = (order[w], order[w - 1]);
        parent.insert(id(k), (id(prev), shared_edge(p, &faces[k], &faces[prev])));
    }
    let n = p.n_base();
    let e = faces[base_on].edge;
    parent.insert(id(base_on), (Prismatoid::BASE_FACE, edge_key(e, (e + 1) % n)));
    let j = faces[top_on].edge;
    let m = p.n_top();
    parent.insert(Prismatoid::TOP_FACE, (id(top_on), edge_key(n + j, n + (j + 1) % m)));

    let poly = p.to_polyhedron();
    let tree = Tree { root: Prismatoid::BASE_FACE, frame: RootFrame::Horizontal, parent };
    develop(&poly, &[tree], &|f| prismatoid_tag(p, f))
}

fn shared_edge(p: &Prismatoid, f: &LateralFace, g: &LateralFace) -> EdgeKey {
    let s: Vec<usize> = f
        .vertices
        .iter()
        .filter(|v| g.vertices.contains(v))
        .map(|&v| p.vertex_id(v))
        .collect();
    edge_key(s[0], s[1])
}

pub(crate) fn prismatoid_tag(p: &Prismatoid, f: usize) -> FaceTag {
    match f {
        Prismatoid::BASE_FACE => FaceTag::Base,
        Prismatoid::TOP_FACE => FaceTag::Top,
        k => match p.hull.faces[k - 2].kind {
            FaceKind::BTriangle => FaceTag::BTriangle,
            FaceKind::ATriangle => FaceTag::ATriangle,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point2;
    use crate::overlap::layout_overlaps;
    use crate::prismatoid::regular_polygon;

    #[test]
    fn near_prism_band_is_straight_and_clear() {
        let base = regular_polygon(4, 1.0, 0.0, Point2::default());
        let top = regular_polygon(4, 0.95, 0.05, Point2::default());
        let p = Prismatoid::new(top, base, 2.0).unwrap();
        for c in 0..lateral_edge_count(&p) {
            let l = band_unfolding(&p, c).unwrap();
            l.check_structure().unwrap();
            assert_eq!(l.faces.len(), 10);
            assert!(l.isometry_residual(&p.to_polyhedron()) < 1e-12);
            let r = layout_overlaps(&l, &p.tol);
            assert!(!r.overlapping, "cut {c}: {:?}", r.witnesses);
        }
    }

    #[test]
    fn band_is_a_single_tree() {
        let base = regular_polygon(5, 2.0, 0.0, Point2::default());
        let top = regular_polygon(3, 0.7, 0.4, Point2::default());
        let p = Prismatoid::new(top, base, 0.8).unwrap();
        let l = band_unfolding(&p, 3).unwrap();
        assert_eq!(l.faces.iter().filter(|f| f.parent.is_none()).count(), 1);
        // The cut lateral edge plus every top and base edge but one.
        assert_eq!(l.cuts.len(), 1 + 2 + 4);
    }
}
