//! Convex polyhedra, their 3D hulls, and disk-like face patches.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{angle_at, check_planar, convex_hull2, newell_normal, Plane, Point2, Point3, Tolerance};

/// Undirected edge key with `0 <= 1`.
pub type EdgeKey = (usize, usize);

pub fn edge_key(u: usize, v: usize) -> EdgeKey {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexPolyhedron {
    pub vertices: Vec<Point3>,
    /// Vertex cycles, ccw as seen from outside.
    pub faces: Vec<Vec<usize>>,
}

impl ConvexPolyhedron {
    pub fn new(vertices: Vec<Point3>, faces: Vec<Vec<usize>>, tol: &Tolerance) -> Result<Self> {
        let p = ConvexPolyhedron { vertices, faces };
        p.validate(tol)?;
        Ok(p)
    }

    pub(crate) fn from_parts_unchecked(vertices: Vec<Point3>, faces: Vec<Vec<usize>>) -> Self {
        ConvexPolyhedron { vertices, faces }
    }

    pub fn face_points(&self, f: usize) -> Vec<Point3> {
        self.faces[f].iter().map(|&v| self.vertices[v]).collect()
    }

    /// Unit outward normal via Newell's method.
    pub fn face_normal(&self, f: usize) -> Point3 {
        newell_normal(&self.face_points(f)).normalized()
    }

    /// Directed edges of a face, following its cycle.
    pub fn face_edges(&self, f: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let c = &self.faces[f];
        (0..c.len()).map(move |k| (c[k], c[(k + 1) % c.len()]))
    }

    /// Faces on each undirected edge.
    pub fn edge_faces(&self) -> BTreeMap<EdgeKey, Vec<usize>> {
        let mut m: BTreeMap<EdgeKey, Vec<usize>> = BTreeMap::new();
        for f in 0..self.faces.len() {
            for (u, v) in self.face_edges(f) {
                m.entry(edge_key(u, v)).or_default().push(f);
            }
        }
        m
    }

    /// Faces containing each vertex.
    pub fn vertex_faces(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertices.len()];
        for (f, c) in self.faces.iter().enumerate() {
            for &v in c {
                out[v].push(f);
            }
        }
        out
    }

    /// Face across the directed edge `u → v` of face `f`, if any.
    pub fn neighbor_across(&self, f: usize, u: usize, v: usize) -> Option<usize> {
        (0..self.faces.len()).find(|&g| g != f && self.face_edges(g).any(|(a, b)| a == v && b == u))
    }

    /// Interior angle of face `f` at its vertex `v`.
    pub fn face_angle(&self, f: usize, v: usize) -> Result<f64> {
        let c = &self.faces[f];
        let k = c.iter().position(|&w| w == v).ok_or(Error::InvalidVertex(v))?;
        let prev = c[(k + c.len() - 1) % c.len()];
        let next = c[(k + 1) % c.len()];
        angle_at(self.vertices[v], self.vertices[prev], self.vertices[next])
    }

    /// Angle defect `2π − Σ face angles` at `v`.
    pub fn curvature(&self, v: usize) -> Result<f64> {
        if v >= self.vertices.len() {
            return Err(Error::InvalidVertex(v));
        }
        let mut s = 0.0;
        for (f, c) in self.faces.iter().enumerate() {
            if c.contains(&v) {
                s += self.face_angle(f, v)?;
            }
        }
        Ok(2.0 * PI - s)
    }

    pub fn total_curvature(&self) -> Result<f64> {
        (0..self.vertices.len()).map(|v| self.curvature(v)).sum()
    }

    /// Structural and geometric checks: closed 2-manifold, planar convex
    /// faces, and face planes supporting every vertex.
    pub fn validate(&self, tol: &Tolerance) -> Result<()> {
        if self.vertices.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite);
        }
        for (f, c) in self.faces.iter().enumerate() {
            if c.len() < 3 || c.iter().any(|&v| v >= self.vertices.len()) {
                return Err(Error::InvalidFace(f));
            }
            let pts = self.face_points(f);
            check_planar(&pts, tol)?;
            let n = newell_normal(&pts);
            if !(n.norm() > 0.0) {
                return Err(Error::InvalidFace(f));
            }
            let n = n.normalized();
            for (k, &p) in pts.iter().enumerate() {
                let q = pts[(k + 1) % pts.len()];
                let r = pts[(k + 2) % pts.len()];
                if (q - p).cross(r - q).dot(n) <= 0.0 {
                    return Err(Error::InvalidFace(f));
                }
            }
            for &v in &self.vertices {
                if (v - pts[0]).dot(n) > tol.eps_len * 10.0 {
                    return Err(Error::InvalidFace(f));
                }
            }
        }
        let mut directed = BTreeSet::new();
        for f in 0..self.faces.len() {
            for e in self.face_edges(f) {
                if !directed.insert(e) {
                    return Err(Error::InvalidFace(f));
                }
            }
        }
        if directed.iter().any(|&(u, v)| !directed.contains(&(v, u))) {
            return Err(Error::Malformed("surface is not closed".into()));
        }
        Ok(())
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, &p) in self.vertices.iter().enumerate() {
            for &q in &self.vertices[i + 1..] {
                d = d.max(p.dist(q));
            }
        }
        d
    }
}

/// Hull of a small point set, with coplanar facets merged into single faces.
///
/// Brute force over candidate planes through point triples, which is fine
/// for the tens of points this crate handles.
pub fn convex_hull3(points: &[Point3], tol: &Tolerance) -> Result<ConvexPolyhedron> {
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::NonFinite);
    }
    let np = points.len();
    if np < 4 {
        return Err(Error::DegenerateHull);
    }
    let scale = {
        let mut d: f64 = 0.0;
        for i in 0..np {
            for j in i + 1..np {
                d = d.max(points[i].dist(points[j]));
            }
        }
        d
    };
    let eps = tol.eps_len.max(1e-12 * scale) * 10.0;
    // Planar merge threshold on the dihedral deviation between facet normals.
    const MERGE_ANGLE: f64 = 1e-7;

    let mut planes: Vec<(Point3, f64)> = Vec::new();
    for i in 0..np {
        for j in i + 1..np {
            for k in j + 1..np {
                let n = (points[j] - points[i]).cross(points[k] - points[i]);
                let nn = n.norm();
                if nn <= eps * scale {
                    continue;
                }
                let n = n * (1.0 / nn);
                let d = n.dot(points[i]);
                let (mut above, mut below) = (false, false);
                for p in points {
                    let s = n.dot(*p) - d;
                    above |= s > eps;
                    below |= s < -eps;
                }
                let n = match (above, below) {
                    (false, false) => return Err(Error::DegenerateHull),
                    (true, true) => continue,
                    (false, true) => n,
                    (true, false) => -n,
                };
                let d = n.dot(points[i]);
                let dup = planes
                    .iter()
                    .any(|(m, e)| m.dot(n).clamp(-1.0, 1.0).acos() < MERGE_ANGLE && (e - d).abs() <= eps);
                if !dup {
                    planes.push((n, d));
                }
            }
        }
    }
    if planes.len() < 4 {
        return Err(Error::DegenerateHull);
    }

    let mut faces = Vec::with_capacity(planes.len());
    for (n, d) in &planes {
        let on: Vec<usize> = (0..np).filter(|&k| (n.dot(points[k]) - d).abs() <= eps).collect();
        let u = {
            let t = if n.x.abs() < 0.9 { Point3::new(1., 0., 0.) } else { Point3::new(0., 1., 0.) };
            n.cross(t).normalized()
        };
        let v = n.cross(u);
        let frame = Plane { origin: points[on[0]], u, v };
        let local: Vec<Point2> = on.iter().map(|&k| frame.to_local(points[k])).collect();
        let hull = convex_hull2(&local, &Tolerance { eps_len: eps, eps_ang: tol.eps_ang });
        // Map hull points back to indices (the lowest index wins for duplicates).
        let cycle: Vec<usize> = hull
            .iter()
            .map(|h| on[local.iter().position(|q| q.dist(*h) <= eps).expect("hull point from input")])
            .collect();
        faces.push(cycle);
    }

    // Drop points that are not hull vertices and reindex.
    let used: BTreeSet<usize> = faces.iter().flatten().copied().collect();
    let remap: BTreeMap<usize, usize> = used.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let vertices = used.iter().map(|&k| points[k]).collect();
    let faces = faces.into_iter().map(|c| c.into_iter().map(|k| remap[&k]).collect()).collect();
    Ok(ConvexPolyhedron { vertices, faces })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NeighborhoodKind {
    #[serde(rename = "edge")]
    EdgeNeighborhood,
    #[serde(rename = "vertex")]
    VertexNeighborhood,
}

/// A connected, disk-like set of faces of a convex polyhedron.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexPatch {
    pub parent: ConvexPolyhedron,
    /// Sorted face ids.
    pub faces: Vec<usize>,
    /// Distinguished base face, when the patch was grown from one.
    pub base_face: Option<usize>,
}

impl ConvexPatch {
    pub fn new(parent: ConvexPolyhedron, faces: impl IntoIterator<Item = usize>, base_face: Option<usize>) -> Result<Self> {
        let faces: BTreeSet<usize> = faces.into_iter().collect();
        if let Some(&f) = faces.iter().find(|&&f| f >= parent.faces.len()) {
            return Err(Error::InvalidFace(f));
        }
        if let Some(b) = base_face {
            if !faces.contains(&b) {
                return Err(Error::InvalidFace(b));
            }
        }
        let p = ConvexPatch { parent, faces: faces.into_iter().collect(), base_face };
        p.check_disk()?;
        Ok(p)
    }

    pub fn contains(&self, f: usize) -> bool {
        self.faces.binary_search(&f).is_ok()
    }

    /// Edges with their incident patch faces.
    pub fn edge_faces(&self) -> BTreeMap<EdgeKey, Vec<usize>> {
        let mut m: BTreeMap<EdgeKey, Vec<usize>> = BTreeMap::new();
        for &f in &self.faces {
            for (u, v) in self.parent.face_edges(f) {
                m.entry(edge_key(u, v)).or_default().push(f);
            }
        }
        m
    }

    /// Edges shared by two patch faces.
    pub fn interior_edges(&self) -> Vec<EdgeKey> {
        self.edge_faces().into_iter().filter(|(_, fs)| fs.len() == 2).map(|(e, _)| e).collect()
    }

    /// Boundary edges, directed as in their patch face, chained into a cycle.
    pub fn boundary(&self) -> Vec<(usize, usize)> {
        let ef = self.edge_faces();
        let mut next: BTreeMap<usize, usize> = BTreeMap::new();
        for &f in &self.faces {
            for (u, v) in self.parent.face_edges(f) {
                if ef[&edge_key(u, v)].len() == 1 {
                    next.insert(u, v);
                }
            }
        }
        let Some(&start) = next.keys().next() else {
            return Vec::new();
        };
        let mut out = Vec::with_capacity(next.len());
        let mut u = start;
        loop {
            let v = next[&u];
            out.push((u, v));
            u = v;
            if u == start || out.len() > next.len() {
                break;
            }
        }
        out
    }

    pub fn boundary_vertices(&self) -> BTreeSet<usize> {
        self.boundary().into_iter().map(|(u, _)| u).collect()
    }

    pub fn vertices(&self) -> BTreeSet<usize> {
        self.faces.iter().flat_map(|&f| self.parent.faces[f].iter().copied()).collect()
    }

    /// Vertices of the patch not on its boundary.
    pub fn interior_vertices(&self) -> BTreeSet<usize> {
        let b = self.boundary_vertices();
        self.vertices().into_iter().filter(|v| !b.contains(v)).collect()
    }

    /// Connected, single boundary cycle, and `V − E + F = 1`.
    pub fn check_disk(&self) -> Result<()> {
        if self.faces.is_empty() {
            return Err(Error::NotADisk("empty patch".into()));
        }
        let ef = self.edge_faces();
        if ef.values().any(|fs| fs.len() > 2) {
            return Err(Error::NotADisk("non-manifold edge".into()));
        }
        // Connectivity over shared edges.
        let mut seen = BTreeSet::from([self.faces[0]]);
        let mut stack = vec![self.faces[0]];
        while let Some(f) = stack.pop() {
            for (u, v) in self.parent.face_edges(f) {
                for &g in &ef[&edge_key(u, v)] {
                    if seen.insert(g) {
                        stack.push(g);
                    }
                }
            }
        }
        if seen.len() != self.faces.len() {
            return Err(Error::NotADisk("faces not connected".into()));
        }
        let n_boundary = ef.values().filter(|fs| fs.len() == 1).count();
        if n_boundary == 0 {
            return Err(Error::NotADisk("closed surface".into()));
        }
        let chi = self.vertices().len() as i64 - ef.len() as i64 + self.faces.len() as i64;
        if chi != 1 {
            return Err(Error::NotADisk(format!("Euler characteristic {chi}")));
        }
        if self.boundary().len() != n_boundary {
            return Err(Error::NotADisk("boundary is not a single cycle".into()));
        }
        Ok(())
    }
}

/// `face` together with every face sharing an edge (or a vertex) with it.
pub fn neighborhood(p: &ConvexPolyhedron, face: usize, kind: NeighborhoodKind) -> Result<ConvexPatch> {
    if face >= p.faces.len() {
        return Err(Error::InvalidFace(face));
    }
    let fv: BTreeSet<usize> = p.faces[face].iter().copied().collect();
    let fe: BTreeSet<EdgeKey> = p.face_edges(face).map(|(u, v)| edge_key(u, v)).collect();
    let faces = (0..p.faces.len()).filter(|&g| {
        g == face
            || match kind {
                NeighborhoodKind::VertexNeighborhood => p.faces[g].iter().any(|v| fv.contains(v)),
                NeighborhoodKind::EdgeNeighborhood => p.face_edges(g).any(|(u, v)| fe.contains(&edge_key(u, v))),
            }
    });
    ConvexPatch::new(p.clone(), faces, Some(face))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn tetra() -> Vec<Point3> {
        vec![
            Point3::new(1., 1., 1.),
            Point3::new(1., -1., -1.),
            Point3::new(-1., 1., -1.),
            Point3::new(-1., -1., 1.),
        ]
    }

    #[test]
    fn tetrahedron_hull() {
        let h = convex_hull3(&tetra(), &tol()).unwrap();
        assert_eq!(h.faces.len(), 4);
        assert!(h.faces.iter().all(|f| f.len() == 3));
        h.validate(&tol()).unwrap();
        assert!((h.total_curvature().unwrap() - 4.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn cube_merges_coplanar_facets() {
        let mut pts = Vec::new();
        for x in [0., 1.] {
            for y in [0., 1.] {
                for z in [0., 1.] {
                    pts.push(Point3::new(x, y, z));
                }
            }
        }
        pts.push(Point3::new(0.5, 0.5, 0.5));
        let h = convex_hull3(&pts, &tol()).unwrap();
        assert_eq!(h.vertices.len(), 8);
        assert_eq!(h.faces.len(), 6);
        assert!(h.faces.iter().all(|f| f.len() == 4));
        h.validate(&tol()).unwrap();
    }

    #[test]
    fn coplanar_points_are_degenerate() {
        let pts = [Point3::new(0., 0., 0.), Point3::new(1., 0., 0.), Point3::new(0., 1., 0.), Point3::new(1., 1., 0.)];
        assert!(matches!(convex_hull3(&pts, &tol()), Err(Error::DegenerateHull)));
    }

    #[test]
    fn tetrahedron_neighborhoods_are_closed() {
        let h = convex_hull3(&tetra(), &tol()).unwrap();
        for kind in [NeighborhoodKind::EdgeNeighborhood, NeighborhoodKind::VertexNeighborhood] {
            assert!(matches!(neighborhood(&h, 0, kind), Err(Error::NotADisk(_))));
        }
    }

    #[test]
    fn cube_neighborhoods() {
        let mut pts = Vec::new();
        for x in [0., 1.] {
            for y in [0., 1.] {
                for z in [0., 1.] {
                    pts.push(Point3::new(x, y, z));
                }
            }
        }
        let h = convex_hull3(&pts, &tol()).unwrap();
        let e = neighborhood(&h, 0, NeighborhoodKind::EdgeNeighborhood).unwrap();
        assert_eq!(e.faces.len(), 5);
        assert_eq!(e.boundary().len(), 4);
        assert_eq!(e.interior_vertices().len(), 4);
    }
}
