//! Planar and spatial primitives shared by every unfolding routine.
//!
//! All arithmetic is `f64` with an explicit [`Tolerance`]. The orientation
//! predicate snaps near-zero signed areas to zero, so collinearity decisions
//! are made in exactly one place.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point (or free vector) in the base plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

pub type Vector2 = Point2;

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn try_new(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() {
            Ok(Point2 { x, y })
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, o: Vector2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, o: Vector2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    pub fn normalized(self) -> Vector2 {
        let n = self.norm();
        Point2::new(self.x / n, self.y / n)
    }

    /// Rotate by +90°.
    pub fn perp(self) -> Vector2 {
        Point2::new(-self.y, self.x)
    }

    /// Rotate by -90°; for an edge direction of a ccw polygon this is the outward normal.
    pub fn perp_cw(self) -> Vector2 {
        Point2::new(self.y, -self.x)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn lerp(self, o: Point2, t: f64) -> Point2 {
        self + (o - self) * t
    }

    pub fn rotated(self, theta: f64) -> Point2 {
        let (s, c) = theta.sin_cos();
        Point2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// A point (or free vector) in space.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

pub type Vector3 = Point3;

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn try_new(x: f64, y: f64, z: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() && z.is_finite() {
            Ok(Point3 { x, y, z })
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn from_xy(p: Point2, z: f64) -> Self {
        Point3::new(p.x, p.y, z)
    }

    pub fn xy(self) -> Point2 {
        Point2::new(self.x, self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn dot(self, o: Vector3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vector3) -> Vector3 {
        Point3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dist(self, o: Point3) -> f64 {
        (self - o).norm()
    }

    pub fn normalized(self) -> Vector3 {
        self * (1.0 / self.norm())
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, o: Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, s: f64) -> Point3 {
        Point3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Point3 {
    type Output = Point3;
    fn neg(self) -> Point3 {
        Point3::new(-self.x, -self.y, -self.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment2 {
    pub a: Point2,
    pub b: Point2,
}

impl Segment2 {
    pub fn new(a: Point2, b: Point2) -> Self {
        Segment2 { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    /// Distance from `p` to the closed segment.
    pub fn dist_to(&self, p: Point2) -> f64 {
        let d = self.b - self.a;
        let l2 = d.norm2();
        if l2 == 0.0 {
            return p.dist(self.a);
        }
        let t = ((p - self.a).dot(d) / l2).clamp(0.0, 1.0);
        p.dist(self.a + d * t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ray2 {
    pub origin: Point2,
    /// Unit direction.
    pub dir: Vector2,
}

impl Ray2 {
    pub fn new(origin: Point2, dir: Vector2) -> Result<Self> {
        let n = dir.norm();
        if !(n > 0.0) || !n.is_finite() || !origin.is_finite() {
            return Err(Error::DegenerateDirection);
        }
        Ok(Ray2 { origin, dir: dir * (1.0 / n) })
    }

    pub fn at(&self, t: f64) -> Point2 {
        self.origin + self.dir * t
    }

    pub fn dist_to(&self, p: Point2) -> f64 {
        let t = (p - self.origin).dot(self.dir).max(0.0);
        p.dist(self.at(t))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line2 {
    pub origin: Point2,
    /// Unit direction.
    pub dir: Vector2,
}

impl Line2 {
    pub fn through(a: Point2, b: Point2) -> Result<Self> {
        let d = b - a;
        let n = d.norm();
        if !(n > 0.0) {
            return Err(Error::DegenerateDirection);
        }
        Ok(Line2 { origin: a, dir: d * (1.0 / n) })
    }

    /// Signed distance, positive on the left of the direction.
    pub fn signed_dist(&self, p: Point2) -> f64 {
        self.dir.cross(p - self.origin)
    }

    pub fn project(&self, p: Point2) -> Point2 {
        self.origin + self.dir * (p - self.origin).dot(self.dir)
    }
}

/// Absolute length and angle tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub eps_len: f64,
    pub eps_ang: f64,
}

/// Relative factor applied to the instance diameter for `eps_len`.
pub const DEFAULT_REL_LEN: f64 = 1e-9;
pub const DEFAULT_EPS_ANG: f64 = 1e-9;

impl Tolerance {
    pub fn new(eps_len: f64, eps_ang: f64) -> Result<Self> {
        if eps_len > 0.0 && eps_ang > 0.0 && eps_len.is_finite() && eps_ang.is_finite() {
            Ok(Tolerance { eps_len, eps_ang })
        } else {
            Err(Error::InvalidTolerance)
        }
    }

    /// Default tolerance scaled to an instance of the given diameter.
    pub fn for_diameter(diameter: f64) -> Self {
        let d = if diameter > 0.0 && diameter.is_finite() { diameter } else { 1.0 };
        Tolerance { eps_len: DEFAULT_REL_LEN * d, eps_ang: DEFAULT_EPS_ANG }
    }

    /// Like [`Tolerance::for_diameter`] but honouring the `PATCHFOLD_TOL`
    /// override (`"<rel_len>"` or `"<rel_len>,<eps_ang>"`).
    pub fn from_env(diameter: f64) -> Self {
        let mut tol = Tolerance::for_diameter(diameter);
        if let Ok(spec) = std::env::var("PATCHFOLD_TOL") {
            if let Some((rel, ang)) = parse_tol_override(&spec) {
                let d = if diameter > 0.0 { diameter } else { 1.0 };
                tol.eps_len = rel * d;
                if let Some(a) = ang {
                    tol.eps_ang = a;
                }
            } else {
                log::warn!("ignoring malformed PATCHFOLD_TOL={spec:?}");
            }
        }
        tol
    }
}

fn parse_tol_override(spec: &str) -> Option<(f64, Option<f64>)> {
    let mut parts = spec.split(',').map(str::trim);
    let rel: f64 = parts.next()?.parse().ok()?;
    let ang = match parts.next() {
        Some(s) => Some(s.parse::<f64>().ok()?),
        None => None,
    };
    if parts.next().is_some() || !(rel > 0.0) || ang.is_some_and(|a| !(a > 0.0)) {
        return None;
    }
    Some((rel, ang))
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::for_diameter(1.0)
    }
}

/// Sign of the turn p→q→r.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Clockwise,
    Collinear,
    CounterClockwise,
}

impl Orientation {
    pub fn sign(self) -> i8 {
        match self {
            Orientation::Clockwise => -1,
            Orientation::Collinear => 0,
            Orientation::CounterClockwise => 1,
        }
    }
}

/// Orientation of the triangle pqr. The triple is collinear when `r` lies
/// within `eps_len` of the line through the longer of `pq`, `pr`.
pub fn orient2d(p: Point2, q: Point2, r: Point2, tol: &Tolerance) -> Result<Orientation> {
    if !(p.is_finite() && q.is_finite() && r.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(orient2d_unchecked(p, q, r, tol))
}

pub(crate) fn orient2d_unchecked(p: Point2, q: Point2, r: Point2, tol: &Tolerance) -> Orientation {
    let area2 = (q - p).cross(r - p);
    let scale = (q - p).norm().max((r - p).norm()).max((r - q).norm());
    if area2.abs() <= tol.eps_len * scale {
        Orientation::Collinear
    } else if area2 > 0.0 {
        Orientation::CounterClockwise
    } else {
        Orientation::Clockwise
    }
}

/// True iff the segments share interior points: a transversal crossing or a
/// collinear overlap of positive length. Touching at endpoints is not an
/// intersection.
pub fn segments_properly_intersect(s1: Segment2, s2: Segment2, tol: &Tolerance) -> bool {
    let o1 = orient2d_unchecked(s1.a, s1.b, s2.a, tol);
    let o2 = orient2d_unchecked(s1.a, s1.b, s2.b, tol);
    let o3 = orient2d_unchecked(s2.a, s2.b, s1.a, tol);
    let o4 = orient2d_unchecked(s2.a, s2.b, s1.b, tol);
    use Orientation::Collinear;
    if o1 == Collinear && o2 == Collinear {
        // Collinear: overlap length along the common direction.
        let d = s1.b - s1.a;
        let l = d.norm();
        if l == 0.0 {
            return false;
        }
        let u = d * (1.0 / l);
        let (t0, t1) = {
            let a = (s2.a - s1.a).dot(u);
            let b = (s2.b - s1.a).dot(u);
            (a.min(b), a.max(b))
        };
        let lo = t0.max(0.0);
        let hi = t1.min(l);
        return hi - lo > tol.eps_len;
    }
    // A T-shaped contact shares a single point, so only strict crossings count.
    let _ = (o3, o4);
    segments_cross(s1, s2, tol)
}

/// Strict transversal crossing: each segment's endpoints lie strictly on
/// opposite sides of the other's line.
pub fn segments_cross(s1: Segment2, s2: Segment2, tol: &Tolerance) -> bool {
    let o1 = orient2d_unchecked(s1.a, s1.b, s2.a, tol).sign();
    let o2 = orient2d_unchecked(s1.a, s1.b, s2.b, tol).sign();
    let o3 = orient2d_unchecked(s2.a, s2.b, s1.a, tol).sign();
    let o4 = orient2d_unchecked(s2.a, s2.b, s1.b, tol).sign();
    o1 * o2 < 0 && o3 * o4 < 0
}

/// Strict crossing of a segment and a ray (proper interior points of both).
pub fn segment_crosses_ray(s: Segment2, r: &Ray2, tol: &Tolerance) -> bool {
    let o1 = r.dir.cross(s.a - r.origin);
    let o2 = r.dir.cross(s.b - r.origin);
    if o1.abs() <= tol.eps_len || o2.abs() <= tol.eps_len || o1.signum() == o2.signum() {
        return false;
    }
    let t = o1 / (o1 - o2);
    let hit = s.a.lerp(s.b, t);
    (hit - r.origin).dot(r.dir) > tol.eps_len
}

/// Parameters `(t, s)` with `r1.at(t) == r2.at(s)`, or `None` for parallel rays.
pub fn ray_line_params(r1: &Ray2, r2: &Ray2) -> Option<(f64, f64)> {
    let den = r1.dir.cross(r2.dir);
    if den.abs() < 1e-15 {
        return None;
    }
    let w = r2.origin - r1.origin;
    let t = w.cross(r2.dir) / den;
    let s = w.cross(r1.dir) / den;
    Some((t, s))
}

/// True when the two rays share a point beyond both origins.
pub fn rays_cross(r1: &Ray2, r2: &Ray2, tol: &Tolerance) -> bool {
    match ray_line_params(r1, r2) {
        Some((t, s)) => t > tol.eps_len && s > tol.eps_len,
        None => {
            // Parallel: only collinear rays pointing at each other overlap.
            let off = r1.dir.cross(r2.origin - r1.origin).abs();
            if off > tol.eps_len {
                return false;
            }
            let along = (r2.origin - r1.origin).dot(r1.dir);
            let same = r1.dir.dot(r2.dir) > 0.0;
            same || along > tol.eps_len
        }
    }
}

/// Mirror image of `p` across `line`.
pub fn reflect_across_line(p: Point2, line: &Line2) -> Point2 {
    let foot = line.project(p);
    foot * 2.0 - p
}

/// Unsigned angle at `apex` between the rays towards `u` and `v`, in `[0, π]`.
pub fn angle_at<P: AngleSpace>(apex: P, u: P, v: P) -> Result<f64> {
    let a = P::sub(u, apex);
    let b = P::sub(v, apex);
    let (na, nb) = (P::norm(a), P::norm(b));
    if !(na > 0.0 && nb > 0.0) || !na.is_finite() || !nb.is_finite() {
        return Err(Error::DegenerateAngle);
    }
    Ok(P::cross_norm(a, b).atan2(P::dot(a, b)))
}

/// Points for which [`angle_at`] is defined.
pub trait AngleSpace: Copy {
    fn sub(a: Self, b: Self) -> Self;
    fn dot(a: Self, b: Self) -> f64;
    fn cross_norm(a: Self, b: Self) -> f64;
    fn norm(a: Self) -> f64;
}

impl AngleSpace for Point2 {
    fn sub(a: Self, b: Self) -> Self {
        a - b
    }
    fn dot(a: Self, b: Self) -> f64 {
        a.dot(b)
    }
    fn cross_norm(a: Self, b: Self) -> f64 {
        a.cross(b).abs()
    }
    fn norm(a: Self) -> f64 {
        a.norm()
    }
}

impl AngleSpace for Point3 {
    fn sub(a: Self, b: Self) -> Self {
        a - b
    }
    fn dot(a: Self, b: Self) -> f64 {
        a.dot(b)
    }
    fn cross_norm(a: Self, b: Self) -> f64 {
        a.cross(b).norm()
    }
    fn norm(a: Self) -> f64 {
        a.norm()
    }
}

/// Signed angle from `a` to `b` in `(-π, π]`.
pub fn signed_angle(a: Vector2, b: Vector2) -> f64 {
    a.cross(b).atan2(a.dot(b))
}

/// Clockwise sweep from direction `a` to direction `b`, in `[0, 2π)`.
pub fn cw_sweep(a: Vector2, b: Vector2) -> f64 {
    let s = -signed_angle(a, b);
    if s < 0.0 {
        s + 2.0 * PI
    } else {
        s
    }
}

/// An affine plane with an orthonormal in-plane frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane {
    pub origin: Point3,
    pub u: Vector3,
    pub v: Vector3,
}

impl Plane {
    /// The horizontal plane at height `z`, with in-plane coordinates equal to `(x, y)`.
    pub fn horizontal(z: f64) -> Self {
        Plane {
            origin: Point3::new(0.0, 0.0, z),
            u: Point3::new(1.0, 0.0, 0.0),
            v: Point3::new(0.0, 1.0, 0.0),
        }
    }

    pub fn normal(&self) -> Vector3 {
        self.u.cross(self.v)
    }

    pub fn to_local(&self, p: Point3) -> Point2 {
        let d = p - self.origin;
        Point2::new(d.dot(self.u), d.dot(self.v))
    }

    pub fn to_world(&self, p: Point2) -> Point3 {
        self.origin + self.u * p.x + self.v * p.y
    }

    pub fn signed_dist(&self, p: Point3) -> f64 {
        (p - self.origin).dot(self.normal())
    }
}

/// Which side of a directed hinge (in target-plane coordinates) receives the face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HingeSide {
    Left,
    Right,
}

impl HingeSide {
    /// The side of the directed segment `p→q` opposite to `occupied`.
    pub fn away_from(p: Point2, q: Point2, occupied: Point2) -> Self {
        if (q - p).cross(occupied - p) > 0.0 {
            HingeSide::Right
        } else {
            HingeSide::Left
        }
    }
}

/// Place a planar face into the plane of its hinge.
///
/// The hinge endpoints are kept fixed (they must already lie in `target`);
/// every other vertex keeps its coordinate along the hinge and its distance
/// from the hinge line, and lands on `side` of the directed hinge.
pub fn unfold_face_about_edge(
    face: &[Point3],
    hinge: (Point3, Point3),
    target: &Plane,
    side: HingeSide,
    tol: &Tolerance,
) -> Result<Vec<Point2>> {
    let (h0, h1) = hinge;
    let axis = h1 - h0;
    let len = axis.norm();
    if !(len > tol.eps_len) {
        return Err(Error::DegenerateHinge);
    }
    if target.signed_dist(h0).abs() > tol.eps_len || target.signed_dist(h1).abs() > tol.eps_len {
        return Err(Error::HingeNotInPlane);
    }
    check_planar(face, tol)?;
    let e = axis * (1.0 / len);
    let p0 = target.to_local(h0);
    let p1 = target.to_local(h1);
    Ok(place_about_hinge(face, h0, e, p0, p1, side))
}

/// Core of [`unfold_face_about_edge`] without validation: `h0` and unit `e`
/// give the spatial hinge, `p0→p1` its planar image.
pub(crate) fn place_about_hinge(
    face: &[Point3],
    h0: Point3,
    e: Vector3,
    p0: Point2,
    p1: Point2,
    side: HingeSide,
) -> Vec<Point2> {
    let d2 = (p1 - p0).normalized();
    let n2 = match side {
        HingeSide::Left => d2.perp(),
        HingeSide::Right => d2.perp_cw(),
    };
    face.iter()
        .map(|&p| {
            let w = p - h0;
            let t = w.dot(e);
            let h = (w - e * t).norm();
            p0 + d2 * t + n2 * h
        })
        .collect()
}

/// Newell normal (unnormalised) of a polygon, following its vertex order.
pub fn newell_normal(face: &[Point3]) -> Vector3 {
    let mut n = Point3::default();
    for i in 0..face.len() {
        let a = face[i];
        let b = face[(i + 1) % face.len()];
        n.x += (a.y - b.y) * (a.z + b.z);
        n.y += (a.z - b.z) * (a.x + b.x);
        n.z += (a.x - b.x) * (a.y + b.y);
    }
    n
}

/// Fails with [`Error::NonPlanarFace`] if any vertex is farther than
/// `eps_len` from the best-fit plane through the face.
pub fn check_planar(face: &[Point3], tol: &Tolerance) -> Result<()> {
    if face.len() < 3 {
        return Ok(());
    }
    let n = newell_normal(face);
    let nn = n.norm();
    if nn == 0.0 {
        // Degenerate (all collinear); planarity is trivially satisfied.
        return Ok(());
    }
    let n = n * (1.0 / nn);
    let c = centroid3(face);
    if face.iter().any(|&p| (p - c).dot(n).abs() > tol.eps_len * 10.0) {
        return Err(Error::NonPlanarFace);
    }
    Ok(())
}

pub fn centroid2(pts: &[Point2]) -> Point2 {
    let n = pts.len() as f64;
    let s = pts.iter().fold(Point2::default(), |acc, &p| acc + p);
    s * (1.0 / n)
}

pub fn centroid3(pts: &[Point3]) -> Point3 {
    let n = pts.len() as f64;
    let s = pts.iter().fold(Point3::default(), |acc, &p| acc + p);
    s * (1.0 / n)
}

/// Twice the signed area (positive for ccw).
pub fn signed_area2(poly: &[Point2]) -> f64 {
    (0..poly.len())
        .map(|i| poly[i].cross(poly[(i + 1) % poly.len()]))
        .sum()
}

/// Largest pairwise distance among the points.
pub fn diameter2(pts: &[Point2]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, &p) in pts.iter().enumerate() {
        for &q in &pts[i + 1..] {
            d = d.max(p.dist(q));
        }
    }
    d
}

/// Strict convexity test for a ccw polygon: every consecutive triple turns left.
pub fn is_strictly_convex_ccw(poly: &[Point2], tol: &Tolerance) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    let turns_left = (0..n).all(|i| {
        orient2d_unchecked(poly[i], poly[(i + 1) % n], poly[(i + 2) % n], tol)
            == Orientation::CounterClockwise
    });
    // Total turning of exactly one revolution rules out star-shaped windings.
    let mut turning = 0.0;
    for i in 0..n {
        let d0 = poly[(i + 1) % n] - poly[i];
        let d1 = poly[(i + 2) % n] - poly[(i + 1) % n];
        turning += signed_angle(d0, d1);
    }
    turns_left && (turning - 2.0 * PI).abs() < 1e-6
}

/// Andrew's monotone chain; returns the strictly convex hull in ccw order.
pub fn convex_hull2(points: &[Point2], tol: &Tolerance) -> Vec<Point2> {
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup_by(|a, b| a.dist(*b) <= tol.eps_len);
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2
            && orient2d_unchecked(lower[lower.len() - 2], lower[lower.len() - 1], p, tol)
                != Orientation::CounterClockwise
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2
            && orient2d_unchecked(upper[upper.len() - 2], upper[upper.len() - 1], p, tol)
                != Orientation::CounterClockwise
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    #[test]
    fn orient2d_examples() {
        let t = tol();
        assert_eq!(orient2d(p(0., 0.), p(1., 0.), p(0., 1.), &t).unwrap().sign(), 1);
        assert_eq!(orient2d(p(0., 0.), p(1., 0.), p(2., 0.), &t).unwrap().sign(), 0);
        assert_eq!(orient2d(p(0., 0.), p(0., 1.), p(1., 0.), &t).unwrap().sign(), -1);
        assert!(matches!(
            orient2d(p(f64::NAN, 0.), p(1., 0.), p(0., 1.), &t),
            Err(Error::NonFinite)
        ));
    }

    #[test]
    fn segment_intersection_examples() {
        let t = tol();
        let s = |a: (f64, f64), b: (f64, f64)| Segment2::new(p(a.0, a.1), p(b.0, b.1));
        assert!(segments_properly_intersect(s((0., 0.), (1., 1.)), s((0., 1.), (1., 0.)), &t));
        assert!(!segments_properly_intersect(s((0., 0.), (1., 0.)), s((1., 0.), (2., 0.)), &t));
        assert!(segments_properly_intersect(s((0., 0.), (2., 0.)), s((1., 0.), (3., 0.)), &t));
        // Shared endpoint at an angle.
        assert!(!segments_properly_intersect(s((0., 0.), (1., 0.)), s((0., 0.), (0., 1.)), &t));
        // Disjoint parallel.
        assert!(!segments_properly_intersect(s((0., 0.), (1., 0.)), s((0., 1.), (1., 1.)), &t));
    }

    #[test]
    fn unfold_vertical_triangle() {
        let t = tol();
        let face = [Point3::new(0., 0., 0.), Point3::new(1., 0., 0.), Point3::new(0.5, 0., 1.)];
        let hinge = (face[0], face[1]);
        let plane = Plane::horizontal(0.0);
        let left = unfold_face_about_edge(&face, hinge, &plane, HingeSide::Left, &t).unwrap();
        let right = unfold_face_about_edge(&face, hinge, &plane, HingeSide::Right, &t).unwrap();
        assert!(left[2].dist(p(0.5, 1.0)) < 1e-15);
        assert!(right[2].dist(p(0.5, -1.0)) < 1e-15);
        assert!(left[0].dist(p(0., 0.)) < 1e-15 && left[1].dist(p(1., 0.)) < 1e-15);
    }

    #[test]
    fn unfold_face_already_in_plane_is_identity() {
        let t = tol();
        let face = [Point3::new(0., 0., 0.), Point3::new(2., 0., 0.), Point3::new(0.3, 1.7, 0.)];
        let out = unfold_face_about_edge(
            &face,
            (face[0], face[1]),
            &Plane::horizontal(0.0),
            HingeSide::Left,
            &t,
        )
        .unwrap();
        for (a, b) in out.iter().zip(face.iter()) {
            assert!(a.dist(b.xy()) < 1e-15);
        }
    }

    #[test]
    fn unfold_errors() {
        let t = tol();
        let face = [Point3::new(0., 0., 0.), Point3::new(1., 0., 0.), Point3::new(0.5, 0., 1.)];
        let plane = Plane::horizontal(0.0);
        assert!(matches!(
            unfold_face_about_edge(&face, (face[0], face[0]), &plane, HingeSide::Left, &t),
            Err(Error::DegenerateHinge)
        ));
        let skew = [
            Point3::new(0., 0., 0.),
            Point3::new(1., 0., 0.),
            Point3::new(1., 1., 1.),
            Point3::new(0., 1., -1.),
        ];
        assert!(matches!(
            unfold_face_about_edge(&skew, (skew[0], skew[1]), &plane, HingeSide::Left, &t),
            Err(Error::NonPlanarFace)
        ));
    }

    #[test]
    fn reflection_examples() {
        let x_axis = Line2::through(p(0., 0.), p(1., 0.)).unwrap();
        assert!(reflect_across_line(p(1., 1.), &x_axis).dist(p(1., -1.)) < 1e-15);
        assert!(reflect_across_line(p(3., 0.), &x_axis).dist(p(3., 0.)) < 1e-15);
        let l = Line2::through(p(0.3, -1.2), p(2.0, 0.7)).unwrap();
        let q = p(-0.4, 5.5);
        assert!(reflect_across_line(reflect_across_line(q, &l), &l).dist(q) < 1e-12);
    }

    #[test]
    fn angle_examples() {
        assert!((angle_at(p(0., 0.), p(1., 0.), p(0., 1.)).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!(angle_at(p(0., 0.), p(1., 0.), p(3., 0.)).unwrap().abs() < 1e-15);
        assert!(matches!(angle_at(p(0., 0.), p(0., 0.), p(1., 0.)), Err(Error::DegenerateAngle)));
    }

    #[test]
    fn exterior_angle_matches_closed_form_cosine() {
        // Canonical frame b = 0, a1 = (1, 0, z), a2 = (1 + x, y, z): the angle
        // between a1 - b and a2 - a1 is the supplement of the triangle angle at a1.
        for &(x, y) in &[(0.3, 0.8), (-0.7, 0.2), (0.0, 1.0), (2.5, 0.1)] {
            for &z in &[0.0, 0.5, 1.0, 4.0] {
                let b = Point3::new(0., 0., 0.);
                let a1 = Point3::new(1., 0., z);
                let a2 = Point3::new(1. + x, y, z);
                let alpha1 = angle_at(a1, b, a2).unwrap();
                let closed = x / ((x * x + y * y).sqrt() * (1.0 + z * z).sqrt());
                assert!(((PI - alpha1).cos() - closed).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn hull2_drops_collinear_and_interior() {
        let t = tol();
        let pts = [p(0., 0.), p(1., 0.), p(2., 0.), p(2., 2.), p(0., 2.), p(1., 1.)];
        let h = convex_hull2(&pts, &t);
        assert_eq!(h.len(), 4);
        assert!(signed_area2(&h) > 0.0);
        assert!(is_strictly_convex_ccw(&h, &t));
    }

    #[test]
    fn tolerance_override_parsing() {
        assert_eq!(parse_tol_override("1e-8"), Some((1e-8, None)));
        assert_eq!(parse_tol_override("1e-8, 1e-10"), Some((1e-8, Some(1e-10))));
        assert_eq!(parse_tol_override("-1"), None);
        assert_eq!(parse_tol_override("abc"), None);
        assert!(Tolerance::new(0.0, 1.0).is_err());
    }
}
