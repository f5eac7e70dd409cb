//! Prismatoids: the convex hull of a top polygon A at height z over a base
//! polygon B at height 0, with the lateral band triangulated by merging the
//! two edge-normal cycles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{diameter2, is_strictly_convex_ccw, Point2, Point3, Tolerance};
use crate::polyhedron::ConvexPolyhedron;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FaceKind {
    /// Two base vertices and one top vertex.
    BTriangle,
    /// Two top vertices and one base vertex.
    ATriangle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FaceOrientation {
    UpFace,
    DownFace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexRef {
    A(usize),
    B(usize),
}

/// A lateral triangle. Vertices are listed ccw as seen from outside.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LateralFace {
    pub kind: FaceKind,
    pub orientation: FaceOrientation,
    pub vertices: [VertexRef; 3],
    /// Index of the A-edge (`a_e → a_{e+1}`) or B-edge (`b_e → b_{e+1}`) the face stands on.
    pub edge: usize,
    /// The single vertex on the opposite polygon.
    pub apex: usize,
}

/// The cyclic band of lateral faces.
///
/// Faces are ordered as: fan at `b_0`, `B_0`, fan at `b_1`, `B_1`, … so
/// consecutive faces share a lateral edge and the last wraps to the first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HullStructure {
    pub faces: Vec<LateralFace>,
    /// For base vertex `i`, the A-fan occupies `faces[fans[i].0 .. fans[i].0 + fans[i].1]`.
    pub fans: Vec<(usize, usize)>,
    /// Position of `B_i` in `faces`.
    pub b_faces: Vec<usize>,
    /// `apex[i]`: the top vertex of `B_i`.
    pub apex: Vec<usize>,
}

impl HullStructure {
    /// The lateral faces of the A-fan at base vertex `i`, in order from `B_{i-1}` to `B_i`.
    pub fn fan(&self, i: usize) -> &[LateralFace] {
        let (s, len) = self.fans[i];
        &self.faces[s..s + len]
    }

    /// Top vertices of the fan at `b_i`, from the apex of `B_{i-1}` to the apex of `B_i`.
    pub fn fan_vertices(&self, i: usize) -> Vec<usize> {
        let n = self.apex.len();
        let mut out = vec![self.apex[(i + n - 1) % n]];
        out.extend(self.fan(i).iter().map(|f| match f.vertices[0] {
            VertexRef::A(j) => j,
            VertexRef::B(_) => unreachable!("A-triangle starts at a top vertex"),
        }));
        out
    }

    /// Combinatorics only, ignoring up/down labels.
    pub fn combinatorics(&self) -> Vec<(FaceKind, [VertexRef; 3])> {
        self.faces.iter().map(|f| (f.kind, f.vertices)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prismatoid {
    /// Top polygon A (ccw), at height `z`.
    pub top: Vec<Point2>,
    /// Base polygon B (ccw), at height 0.
    pub base: Vec<Point2>,
    pub z: f64,
    pub tol: Tolerance,
    pub hull: HullStructure,
}

/// Diameter of the planar footprint of A ∪ B.
pub fn footprint_diameter(top: &[Point2], base: &[Point2]) -> f64 {
    let pts: Vec<Point2> = top.iter().chain(base.iter()).copied().collect();
    diameter2(&pts)
}

impl Prismatoid {
    /// Build with the default tolerance for the footprint (honouring `PATCHFOLD_TOL`).
    pub fn new(top: Vec<Point2>, base: Vec<Point2>, z: f64) -> Result<Self> {
        let tol = Tolerance::from_env(footprint_diameter(&top, &base));
        Self::with_tolerance(top, base, z, tol)
    }

    pub fn with_tolerance(top: Vec<Point2>, base: Vec<Point2>, z: f64, tol: Tolerance) -> Result<Self> {
        if !z.is_finite() || top.iter().chain(base.iter()).any(|p| !p.is_finite()) {
            return Err(Error::NonFinite);
        }
        if z < 0.0 {
            return Err(Error::NegativeHeight(z));
        }
        if !is_strictly_convex_ccw(&top, &tol) {
            return Err(Error::NonConvexInput("A"));
        }
        if !is_strictly_convex_ccw(&base, &tol) {
            return Err(Error::NonConvexInput("B"));
        }
        let hull = merge_hull(&top, &base, &tol)?;
        let p = Prismatoid { top, base, z, tol, hull };
        if z > 0.0 {
            p.check_supporting_planes()?;
        }
        Ok(p)
    }

    /// The same footprints at another height.
    pub fn at_height(&self, z: f64) -> Result<Self> {
        if !z.is_finite() {
            return Err(Error::NonFinite);
        }
        if z < 0.0 {
            return Err(Error::NegativeHeight(z));
        }
        let mut p = self.clone();
        p.z = z;
        if z > 0.0 {
            p.check_supporting_planes()?;
        }
        Ok(p)
    }

    pub fn n_base(&self) -> usize {
        self.base.len()
    }

    pub fn n_top(&self) -> usize {
        self.top.len()
    }

    pub fn diameter(&self) -> f64 {
        footprint_diameter(&self.top, &self.base)
    }

    pub fn a3(&self, j: usize) -> Point3 {
        Point3::from_xy(self.top[j], self.z)
    }

    pub fn b3(&self, i: usize) -> Point3 {
        Point3::from_xy(self.base[i], 0.0)
    }

    pub fn point3(&self, v: VertexRef) -> Point3 {
        match v {
            VertexRef::A(j) => self.a3(j),
            VertexRef::B(i) => self.b3(i),
        }
    }

    pub fn face_points(&self, f: &LateralFace) -> [Point3; 3] {
        f.vertices.map(|v| self.point3(v))
    }

    /// Up/down labels, which do not depend on `z`.
    pub fn classify_up_down(&self) -> Vec<FaceOrientation> {
        self.hull.faces.iter().map(|f| f.orientation).collect()
    }

    /// Outward (unnormalised) normal of a lateral face at height `z`.
    pub fn face_normal(&self, f: &LateralFace) -> Point3 {
        let [p, q, r] = self.face_points(f);
        (q - p).cross(r - p)
    }

    /// Every vertex of A and B lies on or behind every lateral face plane.
    pub fn check_supporting_planes(&self) -> Result<()> {
        let pts: Vec<Point3> = (0..self.n_top())
            .map(|j| self.a3(j))
            .chain((0..self.n_base()).map(|i| self.b3(i)))
            .collect();
        for (k, f) in self.hull.faces.iter().enumerate() {
            let n = self.face_normal(f);
            let nn = n.norm();
            if !(nn > 0.0) {
                return Err(Error::UnsupportedFace { face: k });
            }
            let n = n * (1.0 / nn);
            let p0 = self.point3(f.vertices[0]);
            if pts.iter().any(|&p| (p - p0).dot(n) > self.tol.eps_len * 10.0) {
                return Err(Error::UnsupportedFace { face: k });
            }
        }
        Ok(())
    }

    /// Edges from `b_i` to the top vertices of its fan, as `(top index, length)` at the current height.
    pub fn lateral_edge_lengths(&self, i: usize) -> Result<Vec<(usize, f64)>> {
        if i >= self.n_base() {
            return Err(Error::InvalidVertex(i));
        }
        let b = self.b3(i);
        Ok(self
            .hull
            .fan_vertices(i)
            .into_iter()
            .map(|j| (j, self.a3(j).dist(b)))
            .collect())
    }

    /// Polyhedron with vertex ids `b_i → i`, `a_j → n + j`; face 0 is B,
    /// face 1 is A, and face `2 + k` is lateral face `k`.
    pub fn to_polyhedron(&self) -> ConvexPolyhedron {
        let n = self.n_base();
        let vertices: Vec<Point3> = (0..n)
            .map(|i| self.b3(i))
            .chain((0..self.n_top()).map(|j| self.a3(j)))
            .collect();
        let mut faces: Vec<Vec<usize>> = Vec::with_capacity(2 + self.hull.faces.len());
        faces.push((0..n).rev().collect());
        faces.push((0..self.n_top()).map(|j| n + j).collect());
        for f in &self.hull.faces {
            faces.push(f.vertices.iter().map(|&v| self.vertex_id(v)).collect());
        }
        ConvexPolyhedron::from_parts_unchecked(vertices, faces)
    }

    pub fn vertex_id(&self, v: VertexRef) -> usize {
        match v {
            VertexRef::B(i) => i,
            VertexRef::A(j) => self.n_base() + j,
        }
    }

    pub const BASE_FACE: usize = 0;
    pub const TOP_FACE: usize = 1;

    /// Polyhedron face id of lateral face `k`.
    pub fn lateral_face_id(k: usize) -> usize {
        k + 2
    }
}

/// Merge the outward edge normals of A and B into the lateral band.
fn merge_hull(top: &[Point2], base: &[Point2], tol: &Tolerance) -> Result<HullStructure> {
    let n = base.len();
    let m = top.len();
    let mut apex = Vec::with_capacity(n);
    for i in 0..n {
        let d = base[(i + 1) % n] - base[i];
        let nrm = d.perp_cw().normalized();
        let mut best = 0;
        let mut best_v = f64::NEG_INFINITY;
        for (j, a) in top.iter().enumerate() {
            let v = a.dot(nrm);
            if v > best_v {
                best_v = v;
                best = j;
            }
        }
        // A second vertex attaining the maximum means an A-edge parallel to this B-edge.
        let ties = top.iter().filter(|a| best_v - a.dot(nrm) <= tol.eps_len).count();
        if ties > 1 {
            return Err(Error::QuadLateralFace { base_edge: i });
        }
        apex.push(best);
    }

    let mut faces = Vec::with_capacity(n + m);
    let mut fans = Vec::with_capacity(n);
    let mut b_faces = Vec::with_capacity(n);
    for i in 0..n {
        let start = apex[(i + n - 1) % n];
        let len = (apex[i] + m - start) % m;
        fans.push((faces.len(), len));
        for s in 0..len {
            let j = (start + s) % m;
            let j1 = (j + 1) % m;
            let e = top[j1] - top[j];
            let side = e.cross(base[i] - top[j1]);
            let orientation = horizontal_check(side, e.norm(), tol, faces.len())?;
            // b sees the A-edge from outside ⇔ the face normal points up.
            let orientation = if orientation < 0 { FaceOrientation::UpFace } else { FaceOrientation::DownFace };
            faces.push(LateralFace {
                kind: FaceKind::ATriangle,
                orientation,
                vertices: [VertexRef::A(j1), VertexRef::A(j), VertexRef::B(i)],
                edge: j,
                apex: i,
            });
        }
        let i1 = (i + 1) % n;
        let d = base[i1] - base[i];
        let side = d.cross(top[apex[i]] - base[i]);
        let orientation = horizontal_check(side, d.norm(), tol, faces.len())?;
        let orientation = if orientation > 0 { FaceOrientation::UpFace } else { FaceOrientation::DownFace };
        b_faces.push(faces.len());
        faces.push(LateralFace {
            kind: FaceKind::BTriangle,
            orientation,
            vertices: [VertexRef::B(i), VertexRef::B(i1), VertexRef::A(apex[i])],
            edge: i,
            apex: apex[i],
        });
    }
    let total: usize = fans.iter().map(|f| f.1).sum();
    if total != m {
        return Err(Error::NonConvexInput("A"));
    }
    Ok(HullStructure { faces, fans, b_faces, apex })
}

/// Sign of a side test, rejecting faces whose normal would be horizontal.
fn horizontal_check(side: f64, edge_len: f64, tol: &Tolerance, face: usize) -> Result<i8> {
    if side.abs() <= tol.eps_len * edge_len {
        Err(Error::ExactlyHorizontalNormal { face })
    } else if side > 0.0 {
        Ok(1)
    } else {
        Ok(-1)
    }
}

/// Regular `n`-gon of circumradius `r`, first vertex at angle `phase`.
pub fn regular_polygon(n: usize, r: f64, phase: f64, center: Point2) -> Vec<Point2> {
    (0..n)
        .map(|k| {
            let t = phase + 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            center + Point2::new(r * t.cos(), r * t.sin())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri_prismatoid(z: f64) -> Prismatoid {
        let base = regular_polygon(3, 2.0, 0.1, Point2::default());
        let top = regular_polygon(3, 0.5, 0.9, Point2::default());
        Prismatoid::new(top, base, z).unwrap()
    }

    #[test]
    fn generic_triangular_prismatoid_alternates() {
        let p = tri_prismatoid(1.0);
        let kinds: Vec<FaceKind> = p.hull.faces.iter().map(|f| f.kind).collect();
        assert_eq!(kinds.len(), 6);
        assert_eq!(kinds.iter().filter(|k| **k == FaceKind::ATriangle).count(), 3);
        for w in 0..6 {
            assert_ne!(kinds[w], kinds[(w + 1) % 6]);
        }
    }

    #[test]
    fn prism_is_rejected() {
        let sq = regular_polygon(4, 1.0, 0.0, Point2::default());
        assert!(matches!(
            Prismatoid::new(sq.clone(), sq, 1.0),
            Err(Error::QuadLateralFace { .. })
        ));
    }

    #[test]
    fn nonconvex_is_rejected() {
        let bad = vec![Point2::new(0., 0.), Point2::new(1., 0.), Point2::new(0.2, 0.2), Point2::new(0., 1.)];
        let good = regular_polygon(3, 1.0, 0.3, Point2::default());
        assert!(matches!(Prismatoid::new(good.clone(), bad.clone(), 1.0), Err(Error::NonConvexInput("B"))));
        let cw: Vec<Point2> = good.iter().rev().copied().collect();
        assert!(matches!(Prismatoid::new(cw, good, 1.0), Err(Error::NonConvexInput("A"))));
    }

    #[test]
    fn shrunken_top_faces_point_up() {
        let p = tri_prismatoid(1.0);
        for f in &p.hull.faces {
            assert_eq!(f.orientation, FaceOrientation::UpFace);
            assert!(p.face_normal(f).z > 0.0);
        }
        let inverted = Prismatoid::new(p.base.clone(), p.top.clone(), 1.0).unwrap();
        for f in &inverted.hull.faces {
            assert_eq!(f.orientation, FaceOrientation::DownFace);
        }
    }

    #[test]
    fn lateral_edge_lengths_follow_slant() {
        let p = tri_prismatoid(0.0);
        let q = p.at_height(5.0).unwrap();
        for i in 0..3 {
            let l0 = p.lateral_edge_lengths(i).unwrap();
            let l5 = q.lateral_edge_lengths(i).unwrap();
            for (a, b) in l0.iter().zip(&l5) {
                assert_eq!(a.0, b.0);
                assert!((b.1 - (a.1 * a.1 + 25.0).sqrt()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fan_vertices_span_apexes() {
        let p = tri_prismatoid(1.0);
        for i in 0..3 {
            let fv = p.hull.fan_vertices(i);
            assert_eq!(fv.len(), p.hull.fan(i).len() + 1);
            assert_eq!(*fv.last().unwrap(), p.hull.apex[i]);
        }
    }

    #[test]
    fn polyhedron_faces_are_outward() {
        let p = tri_prismatoid(0.7);
        let poly = p.to_polyhedron();
        poly.validate(&p.tol).unwrap();
    }
}
