use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{centroid2, place_about_hinge, HingeSide, Plane, Point2, Point3};
use crate::polyhedron::{edge_key, ConvexPolyhedron, EdgeKey};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaceTag {
    Base,
    Top,
    BTriangle,
    ATriangle,
    Other,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacedFace {
    /// Face id in the source polyhedron.
    pub id: usize,
    /// Source vertex ids, parallel to `polygon`.
    pub vertices: Vec<usize>,
    pub tag: FaceTag,
    pub polygon: Vec<Point2>,
    /// Face this one is hinged to (`None` for tree roots).
    pub parent: Option<usize>,
    pub hinge: Option<EdgeKey>,
}

impl PlacedFace {
    pub fn position_of(&self, v: usize) -> Option<Point2> {
        self.vertices.iter().position(|&w| w == v).map(|k| self.polygon[k])
    }
}

/// A planar placement of faces, each attached to its parent across a hinge.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Layout {
    pub faces: Vec<PlacedFace>,
    /// Surface edges shared by two placed faces that are not hinges.
    pub cuts: Vec<EdgeKey>,
}

impl Layout {
    pub fn face(&self, id: usize) -> Option<&PlacedFace> {
        self.faces.iter().find(|f| f.id == id)
    }

    pub fn hinges(&self) -> Vec<EdgeKey> {
        self.faces.iter().filter_map(|f| f.hinge).collect()
    }

    /// Largest deviation between a placed and a spatial intra-face distance.
    pub fn isometry_residual(&self, poly: &ConvexPolyhedron) -> f64 {
        let mut worst: f64 = 0.0;
        for f in &self.faces {
            for a in 0..f.vertices.len() {
                for b in a + 1..f.vertices.len() {
                    let d3 = poly.vertices[f.vertices[a]].dist(poly.vertices[f.vertices[b]]);
                    let d2 = f.polygon[a].dist(f.polygon[b]);
                    worst = worst.max((d3 - d2).abs());
                }
            }
        }
        worst
    }

    /// Hinges and cuts partition the shared edges, and parent links form a forest.
    pub fn check_structure(&self) -> Result<()> {
        let shared = shared_edges(self.faces.iter().map(|f| f.vertices.as_slice()));
        let hinges: BTreeSet<EdgeKey> = self.hinges().into_iter().collect();
        let cuts: BTreeSet<EdgeKey> = self.cuts.iter().copied().collect();
        if hinges.len() != self.hinges().len() || !hinges.is_disjoint(&cuts) {
            return Err(Error::Malformed("hinge used twice or also cut".into()));
        }
        let union: BTreeSet<EdgeKey> = hinges.union(&cuts).copied().collect();
        if union != shared {
            return Err(Error::Malformed("hinges and cuts do not cover the shared edges".into()));
        }
        let ids: BTreeMap<usize, &PlacedFace> = self.faces.iter().map(|f| (f.id, f)).collect();
        for f in &self.faces {
            let mut cur = f;
            let mut steps = 0;
            while let Some(p) = cur.parent {
                cur = ids.get(&p).ok_or(Error::InvalidFace(p))?;
                steps += 1;
                if steps > self.faces.len() {
                    return Err(Error::Malformed("cycle in attachment forest".into()));
                }
            }
        }
        Ok(())
    }
}

/// Edges that occur in two of the given vertex cycles.
pub(crate) fn shared_edges<'a>(cycles: impl Iterator<Item = &'a [usize]>) -> BTreeSet<EdgeKey> {
    let mut count: BTreeMap<EdgeKey, usize> = BTreeMap::new();
    for c in cycles {
        for k in 0..c.len() {
            *count.entry(edge_key(c[k], c[(k + 1) % c.len()])).or_default() += 1;
        }
    }
    count.into_iter().filter(|&(_, n)| n >= 2).map(|(e, _)| e).collect()
}

/// How a tree root is placed in the plane.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootFrame {
    /// Keep `(x, y)`, dropping `z` (the view from above).
    Horizontal,
    /// Intrinsic frame along the face's first edge, seen from outside.
    Intrinsic,
}

/// Attachment data for one tree of a layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    pub root: usize,
    pub frame: RootFrame,
    /// `child → (parent, hinge)`.
    pub parent: BTreeMap<usize, (usize, EdgeKey)>,
}

/// Develop faces of `poly` into the plane along the hinges of `trees`.
///
/// Each child is laid on the side of its hinge opposite its parent, which is
/// the rigid rotation about the hinge that flattens the dihedral angle.
pub fn develop(poly: &ConvexPolyhedron, trees: &[Tree], tag: &dyn Fn(usize) -> FaceTag) -> Result<Layout> {
    let mut faces: Vec<PlacedFace> = Vec::new();
    for tree in trees {
        let mut children: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (&c, &(p, _)) in &tree.parent {
            children.entry(p).or_default().push(c);
        }
        let root_poly = place_root(poly, tree.root, &tree.frame)?;
        let base_index = faces.len();
        faces.push(PlacedFace {
            id: tree.root,
            vertices: poly.faces[tree.root].clone(),
            tag: tag(tree.root),
            polygon: root_poly,
            parent: None,
            hinge: None,
        });
        let mut queue = VecDeque::from([(tree.root, base_index)]);
        let mut placed = 1;
        while let Some((f, slot)) = queue.pop_front() {
            let Some(kids) = children.get(&f) else { continue };
            for &c in kids {
                let (_, hinge) = tree.parent[&c];
                let polygon = place_child(poly, &faces[slot], c, hinge)?;
                faces.push(PlacedFace {
                    id: c,
                    vertices: poly.faces[c].clone(),
                    tag: tag(c),
                    polygon,
                    parent: Some(f),
                    hinge: Some(hinge),
                });
                queue.push_back((c, faces.len() - 1));
                placed += 1;
            }
        }
        if placed != tree.parent.len() + 1 {
            return Err(Error::Malformed("attachment tree is not connected to its root".into()));
        }
    }
    let hinges: BTreeSet<EdgeKey> = faces.iter().filter_map(|f| f.hinge).collect();
    let cuts = shared_edges(faces.iter().map(|f| f.vertices.as_slice()))
        .into_iter()
        .filter(|e| !hinges.contains(e))
        .collect();
    Ok(Layout { faces, cuts })
}

fn place_root(poly: &ConvexPolyhedron, f: usize, frame: &RootFrame) -> Result<Vec<Point2>> {
    let pts = poly.face_points(f);
    Ok(match frame {
        RootFrame::Horizontal => pts.iter().map(|p| p.xy()).collect(),
        RootFrame::Intrinsic => {
            let n = poly.face_normal(f);
            let u = (pts[1] - pts[0]).normalized();
            let plane = Plane { origin: pts[0], u, v: n.cross(u) };
            pts.iter().map(|&p| plane.to_local(p)).collect()
        }
    })
}

fn place_child(poly: &ConvexPolyhedron, parent: &PlacedFace, child: usize, hinge: EdgeKey) -> Result<Vec<Point2>> {
    let (u, v) = hinge;
    let (Some(pu), Some(pv)) = (parent.position_of(u), parent.position_of(v)) else {
        return Err(Error::Malformed(format!("hinge {hinge:?} is not an edge of face {}", parent.id)));
    };
    if !poly.faces[child].contains(&u) || !poly.faces[child].contains(&v) {
        return Err(Error::Malformed(format!("hinge {hinge:?} is not an edge of face {child}")));
    }
    let xu: Point3 = poly.vertices[u];
    let xv: Point3 = poly.vertices[v];
    let axis = xv - xu;
    let len = axis.norm();
    if !(len > 0.0) {
        return Err(Error::DegenerateHinge);
    }
    let side = HingeSide::away_from(pu, pv, centroid2(&parent.polygon));
    Ok(place_about_hinge(&poly.face_points(child), xu, axis * (1.0 / len), pu, pv, side))
}
