//! The base unfolding of a prismatoid and the regions it induces: altitude
//! regions `R_i`, diamonds `D_i` and wedges `V_i`, all anchored at base vertices.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{
    angle_at, centroid2, cw_sweep, ray_line_params, rays_cross, segment_crosses_ray, segments_cross,
    signed_angle, Point2, Ray2, Segment2, Tolerance, Vector2,
};
use crate::prismatoid::Prismatoid;

/// B together with every B-triangle rotated about its base edge into the base plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaseUnfolding {
    pub base: Vec<Point2>,
    /// `triangles[i] = [b_i, b_{i+1}, a'_i]`, hinged on base edge `i`.
    pub triangles: Vec<[Point2; 3]>,
    /// Outward unit normal of base edge `i`.
    pub normals: Vec<Vector2>,
}

impl BaseUnfolding {
    pub fn apex(&self, i: usize) -> Point2 {
        self.triangles[i][2]
    }
}

pub fn base_unfolding(p: &Prismatoid) -> BaseUnfolding {
    let n = p.n_base();
    let mut triangles = Vec::with_capacity(n);
    let mut normals = Vec::with_capacity(n);
    for i in 0..n {
        let b0 = p.base[i];
        let b1 = p.base[(i + 1) % n];
        let d = (b1 - b0).normalized();
        let nout = d.perp_cw();
        let a = p.a3(p.hull.apex[i]);
        let w = a - p.b3(i);
        let t = w.dot(crate::geom::Point3::from_xy(d, 0.0));
        let h = (w - crate::geom::Point3::from_xy(d * t, 0.0)).norm();
        triangles.push([b0, b1, b0 + d * t + nout * h]);
        normals.push(nout);
    }
    BaseUnfolding { base: p.base.clone(), triangles, normals }
}

/// Unfolded apex of `B_i` at each height.
pub fn apex_track(p: &Prismatoid, i: usize, z_list: &[f64]) -> Result<Vec<Point2>> {
    if i >= p.n_base() {
        return Err(Error::InvalidFace(i));
    }
    z_list
        .iter()
        .map(|&z| Ok(base_unfolding(&p.at_height(z)?).apex(i)))
        .collect()
}

/// Largest distance of the points from their principal line.
pub fn collinearity_residual(pts: &[Point2]) -> f64 {
    if pts.len() < 3 {
        return 0.0;
    }
    let c = centroid2(pts);
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in pts {
        let d = *p - c;
        sxx += d.x * d.x;
        sxy += d.x * d.y;
        syy += d.y * d.y;
    }
    let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let dir = Point2::new(theta.cos(), theta.sin());
    pts.iter().map(|p| dir.cross(*p - c).abs()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionKind {
    AltitudeRegion,
    Diamond,
    VWedge,
}

/// A planar region whose interior lies to the right of its boundary path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RegionShape {
    /// A closed clockwise polygon.
    Closed(Vec<Point2>),
    /// Inward along the ray from `chain[0]` in `start_dir`, through `chain`,
    /// then out along the ray from the last chain point in `end_dir`.
    Open { start_dir: Vector2, chain: Vec<Point2>, end_dir: Vector2 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub kind: RegionKind,
    /// Base vertex the region is anchored at.
    pub vertex: usize,
    pub shape: RegionShape,
}

impl Region {
    pub fn segments(&self) -> Vec<Segment2> {
        match &self.shape {
            RegionShape::Closed(c) => (0..c.len()).map(|k| Segment2::new(c[k], c[(k + 1) % c.len()])).collect(),
            RegionShape::Open { chain, .. } => chain.windows(2).map(|w| Segment2::new(w[0], w[1])).collect(),
        }
    }

    pub fn rays(&self) -> Vec<Ray2> {
        match &self.shape {
            RegionShape::Closed(_) => Vec::new(),
            RegionShape::Open { start_dir, chain, end_dir } => vec![
                Ray2 { origin: chain[0], dir: *start_dir },
                Ray2 { origin: *chain.last().expect("nonempty chain"), dir: *end_dir },
            ],
        }
    }

    pub fn boundary_dist(&self, p: Point2) -> f64 {
        let s = self.segments().iter().map(|s| s.dist_to(p)).fold(f64::INFINITY, f64::min);
        self.rays().iter().map(|r| r.dist_to(p)).fold(s, f64::min)
    }

    /// Closed membership: points within `eps_len` of the boundary are inside.
    pub fn contains_point(&self, p: Point2, tol: &Tolerance) -> bool {
        if self.boundary_dist(p) <= tol.eps_len {
            return true;
        }
        match &self.shape {
            RegionShape::Closed(c) => {
                let w: f64 = (0..c.len()).map(|k| signed_angle(c[k] - p, c[(k + 1) % c.len()] - p)).sum();
                w.abs() > std::f64::consts::PI
            }
            RegionShape::Open { start_dir, chain, end_dir } => {
                let mut w = signed_angle(*start_dir, chain[0] - p);
                for s in chain.windows(2) {
                    w += signed_angle(s[0] - p, s[1] - p);
                }
                w += signed_angle(*chain.last().expect("nonempty chain") - p, *end_dir);
                w -= cw_sweep(*end_dir, *start_dir);
                w < -std::f64::consts::PI
            }
        }
    }

    /// Closed containment of a convex polygon.
    pub fn contains_polygon(&self, poly: &[Point2], tol: &Tolerance) -> bool {
        let n = poly.len();
        let samples = poly
            .iter()
            .copied()
            .chain((0..n).map(|k| poly[k].lerp(poly[(k + 1) % n], 0.5)))
            .chain(std::iter::once(centroid2(poly)));
        for q in samples {
            if !self.contains_point(q, tol) {
                return false;
            }
        }
        let segs = self.segments();
        let rays = self.rays();
        for k in 0..n {
            let e = Segment2::new(poly[k], poly[(k + 1) % n]);
            if segs.iter().any(|s| segments_cross(e, *s, tol)) || rays.iter().any(|r| edge_crosses_ray(e, r, tol)) {
                return false;
            }
        }
        true
    }
}

fn edge_crosses_ray(e: Segment2, r: &Ray2, tol: &Tolerance) -> bool {
    segment_crosses_ray(e, r, tol)
}

/// Altitude rays `r_i` (from `a'_i` along the outward normal of base edge `i`)
/// and the regions `R_i` between `r_{i-1}` and `r_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AltitudePartition {
    pub unfolding: BaseUnfolding,
    pub rays: Vec<Ray2>,
    pub regions: Vec<Region>,
}

pub fn altitude_partition(p: &Prismatoid) -> Result<AltitudePartition> {
    let bu = base_unfolding(p);
    let n = p.n_base();
    let rays: Vec<Ray2> = (0..n).map(|i| Ray2 { origin: bu.apex(i), dir: bu.normals[i] }).collect();
    for i in 0..n {
        for j in i + 1..n {
            if rays_cross(&rays[i], &rays[j], &p.tol) {
                return Err(Error::RayCrossing(i, j));
            }
        }
    }
    let regions = (0..n).map(|i| altitude_region(&bu, i)).collect();
    Ok(AltitudePartition { unfolding: bu, rays, regions })
}

/// Pairs of crossing altitude rays (empty for every valid prismatoid).
pub fn crossing_ray_pairs(p: &Prismatoid) -> Vec<(usize, usize)> {
    let bu = base_unfolding(p);
    let n = p.n_base();
    let rays: Vec<Ray2> = (0..n).map(|i| Ray2 { origin: bu.apex(i), dir: bu.normals[i] }).collect();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rays_cross(&rays[i], &rays[j], &p.tol) {
                out.push((i, j));
            }
        }
    }
    out
}

fn altitude_region(bu: &BaseUnfolding, i: usize) -> Region {
    let n = bu.base.len();
    let prev = (i + n - 1) % n;
    Region {
        kind: RegionKind::AltitudeRegion,
        vertex: i,
        shape: RegionShape::Open {
            start_dir: bu.normals[prev],
            chain: vec![bu.apex(prev), bu.base[i], bu.apex(i)],
            end_dir: bu.normals[i],
        },
    }
}

/// Fails with [`Error::ObtuseFace`] on the first lateral face with an angle above `π/2`.
pub fn check_nonobtuse_lateral(p: &Prismatoid) -> Result<()> {
    for (k, f) in p.hull.faces.iter().enumerate() {
        if !triangle_nonobtuse(&p.face_points(f), &p.tol)? {
            return Err(Error::ObtuseFace { face: Prismatoid::lateral_face_id(k) });
        }
    }
    Ok(())
}

pub fn triangle_nonobtuse<P: crate::geom::AngleSpace>(t: &[P; 3], tol: &Tolerance) -> Result<bool> {
    for k in 0..3 {
        if angle_at(t[k], t[(k + 1) % 3], t[(k + 2) % 3])? > FRAC_PI_2 + tol.eps_ang {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Diamond `D_i`: the part of `R_i` on the `b_i` side of the perpendiculars
/// to `b_i a'_{i-1}` at `a'_{i-1}` and to `b_i a'_i` at `a'_i`.
pub fn diamond(p: &Prismatoid, i: usize) -> Result<Region> {
    if i >= p.n_base() {
        return Err(Error::InvalidVertex(i));
    }
    check_nonobtuse_lateral(p)?;
    let bu = base_unfolding(p);
    Ok(diamond_from(&bu, i))
}

pub(crate) fn diamond_from(bu: &BaseUnfolding, i: usize) -> Region {
    let n = bu.base.len();
    let b = bu.base[i];
    let a0 = bu.apex((i + n - 1) % n);
    let a1 = bu.apex(i);
    let d0 = (b - a0).perp_cw().normalized();
    let d1 = (a1 - b).perp_cw().normalized();
    let r0 = Ray2 { origin: a0, dir: d0 };
    let r1 = Ray2 { origin: a1, dir: d1 };
    let shape = match ray_line_params(&r0, &r1) {
        Some((t, s)) if t > 0.0 && s > 0.0 => RegionShape::Closed(vec![a0, b, a1, r0.at(t)]),
        _ => RegionShape::Open { start_dir: d0, chain: vec![a0, b, a1], end_dir: d1 },
    };
    Region { kind: RegionKind::Diamond, vertex: i, shape }
}

/// Wedge `V_i` at `b_i` bounded by the rays through `a'_{i-1}` and `a'_i`.
pub fn v_wedge(p: &Prismatoid, i: usize) -> Result<Region> {
    if i >= p.n_base() {
        return Err(Error::InvalidVertex(i));
    }
    check_nonobtuse_lateral(p)?;
    let bu = base_unfolding(p);
    Ok(v_wedge_from(&bu, i))
}

pub(crate) fn v_wedge_from(bu: &BaseUnfolding, i: usize) -> Region {
    let n = bu.base.len();
    let b = bu.base[i];
    let a0 = bu.apex((i + n - 1) % n);
    let a1 = bu.apex(i);
    Region {
        kind: RegionKind::VWedge,
        vertex: i,
        shape: RegionShape::Open { start_dir: (a0 - b).normalized(), chain: vec![b], end_dir: (a1 - b).normalized() },
    }
}

/// Whether region `inner` lies inside `outer`, judged on the boundary of
/// `inner` clipped to a disk of radius `reach` around its anchor.
pub fn region_within(inner: &Region, outer: &Region, reach: f64, tol: &Tolerance) -> bool {
    let mut pts: Vec<Point2> = Vec::new();
    for s in inner.segments() {
        for k in 0..=16 {
            pts.push(s.a.lerp(s.b, k as f64 / 16.0));
        }
    }
    for r in inner.rays() {
        for k in 0..=64 {
            pts.push(r.at(reach * k as f64 / 64.0));
        }
    }
    pts.iter().all(|&q| outer.contains_point(q, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prismatoid::regular_polygon;

    fn sym_tri(z: f64) -> Prismatoid {
        let base = regular_polygon(3, 2.0, 0.0, Point2::default());
        let top = regular_polygon(3, 0.6, std::f64::consts::PI / 3.0, Point2::default());
        Prismatoid::new(top, base, z).unwrap()
    }

    #[test]
    fn unfolded_triangles_are_isometric() {
        let p = sym_tri(0.9);
        let bu = base_unfolding(&p);
        let n = p.n_base();
        for i in 0..n {
            let a = p.a3(p.hull.apex[i]);
            let [b0, b1, a2] = bu.triangles[i];
            assert!((a2.dist(b0) - a.dist(p.b3(i))).abs() < 1e-12);
            assert!((a2.dist(b1) - a.dist(p.b3((i + 1) % n))).abs() < 1e-12);
            assert!((b1 - b0).cross(a2 - b0) < 0.0, "apex outside B");
        }
    }

    #[test]
    fn symmetric_rays_follow_bisectors() {
        let p = sym_tri(1.0);
        let part = altitude_partition(&p).unwrap();
        for r in &part.rays {
            // Through the centre of the symmetric configuration.
            assert!(r.dir.cross(r.origin).abs() < 1e-12);
        }
    }

    #[test]
    fn region_membership_square() {
        let base = regular_polygon(4, 1.0, std::f64::consts::FRAC_PI_4, Point2::default());
        let top = regular_polygon(4, 0.3, 0.2, Point2::default());
        let p = Prismatoid::new(top, base, 0.5).unwrap();
        let part = altitude_partition(&p).unwrap();
        let tol = p.tol;
        for (i, r) in part.regions.iter().enumerate() {
            let b = p.base[i];
            assert!(r.contains_point(b, &tol));
            assert!(r.contains_point(b * 3.0, &tol));
            assert!(!r.contains_point(b * -3.0, &tol));
            assert!(!r.contains_point(Point2::default(), &tol));
        }
    }

    #[test]
    fn apex_track_is_collinear_and_outward() {
        let p = sym_tri(0.0);
        let zs = [0.0, 0.01, 0.1, 1.0, 10.0];
        for i in 0..3 {
            let t = apex_track(&p, i, &zs).unwrap();
            assert!(collinearity_residual(&t) < 1e-9 * p.diameter());
            let n = p.n_base();
            let line = crate::geom::Line2::through(p.base[i], p.base[(i + 1) % n]).unwrap();
            let d: Vec<f64> = t.iter().map(|q| -line.signed_dist(*q)).collect();
            assert!(d.windows(2).all(|w| w[1] > w[0]));
        }
    }
}
