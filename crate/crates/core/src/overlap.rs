//! Nonoverlap certification for layouts and angle gaps at layout vertices.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{angle_at, centroid2, signed_area2, Point2, Segment2, Tolerance};
use crate::unfold::Layout;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub a: usize,
    pub b: usize,
    /// A point interior to both faces.
    pub point: Point2,
    /// Penetration depth along the least-overlapping axis.
    pub depth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapReport {
    pub overlapping: bool,
    pub witnesses: Vec<Witness>,
    /// Smallest positive gap between two faces, when faces do not overlap.
    pub min_clearance: Option<f64>,
}

impl OverlapReport {
    /// Whether face `id` takes part in some witness pair.
    pub fn involves(&self, id: usize) -> bool {
        self.witnesses.iter().any(|w| w.a == id || w.b == id)
    }
}

/// Pairwise interior-intersection test of the placed convex faces.
///
/// Two faces overlap when their projections overlap by more than `eps_len`
/// on every edge normal of both; a shared edge or vertex is not an overlap.
pub fn layout_overlaps(l: &Layout, tol: &Tolerance) -> OverlapReport {
    let polys: Vec<Vec<Point2>> = l.faces.iter().map(|f| ccw(&f.polygon)).collect();
    let boxes: Vec<[f64; 4]> = polys.iter().map(|p| bbox(p)).collect();
    let mut witnesses = Vec::new();
    let mut clearance = f64::INFINITY;
    for i in 0..polys.len() {
        for j in i + 1..polys.len() {
            let (bi, bj) = (boxes[i], boxes[j]);
            let gap_box = (bj[0] - bi[2]).max(bi[0] - bj[2]).max(bj[1] - bi[3]).max(bi[1] - bj[3]);
            if gap_box > tol.eps_len {
                clearance = clearance.min(polygon_distance(&polys[i], &polys[j]));
                continue;
            }
            let depth = sat_depth(&polys[i], &polys[j]);
            if depth > tol.eps_len {
                let clip = clip_convex(&polys[i], &polys[j]);
                let point = if clip.len() >= 3 { centroid2(&clip) } else { centroid2(&polys[i]) };
                witnesses.push(Witness { a: l.faces[i].id, b: l.faces[j].id, point, depth });
            } else {
                let d = polygon_distance(&polys[i], &polys[j]);
                if d > tol.eps_len {
                    clearance = clearance.min(d);
                }
            }
        }
    }
    let overlapping = !witnesses.is_empty();
    OverlapReport {
        overlapping,
        witnesses,
        min_clearance: (!overlapping && clearance.is_finite()).then_some(clearance),
    }
}

fn ccw(p: &[Point2]) -> Vec<Point2> {
    if signed_area2(p) < 0.0 {
        p.iter().rev().copied().collect()
    } else {
        p.to_vec()
    }
}

fn bbox(p: &[Point2]) -> [f64; 4] {
    let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
    for q in p {
        b[0] = b[0].min(q.x);
        b[1] = b[1].min(q.y);
        b[2] = b[2].max(q.x);
        b[3] = b[3].max(q.y);
    }
    b
}

/// Minimum over separating-axis candidates of the projection overlap
/// (negative when separated).
fn sat_depth(p: &[Point2], q: &[Point2]) -> f64 {
    let mut depth = f64::INFINITY;
    for poly in [p, q] {
        for k in 0..poly.len() {
            let e = poly[(k + 1) % poly.len()] - poly[k];
            let len = e.norm();
            if len == 0.0 {
                continue;
            }
            let axis = e.perp() * (1.0 / len);
            let (a0, a1) = project(p, axis);
            let (b0, b1) = project(q, axis);
            depth = depth.min(a1.min(b1) - a0.max(b0));
        }
    }
    depth
}

fn project(p: &[Point2], axis: Point2) -> (f64, f64) {
    p.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), q| {
        let t = q.dot(axis);
        (lo.min(t), hi.max(t))
    })
}

/// Sutherland–Hodgman clip of `subject` by the ccw convex `clip`.
pub fn clip_convex(subject: &[Point2], clip: &[Point2]) -> Vec<Point2> {
    let mut out = subject.to_vec();
    for k in 0..clip.len() {
        if out.is_empty() {
            break;
        }
        let a = clip[k];
        let b = clip[(k + 1) % clip.len()];
        let inside = |p: Point2| (b - a).cross(p - a) >= 0.0;
        let input = std::mem::take(&mut out);
        for m in 0..input.len() {
            let cur = input[m];
            let prev = input[(m + input.len() - 1) % input.len()];
            let (ci, pi) = (inside(cur), inside(prev));
            if ci != pi {
                let d1 = (b - a).cross(prev - a);
                let d2 = (b - a).cross(cur - a);
                out.push(prev.lerp(cur, d1 / (d1 - d2)));
            }
            if ci {
                out.push(cur);
            }
        }
    }
    out
}

/// Euclidean distance between two convex polygons (0 if they intersect).
pub fn polygon_distance(p: &[Point2], q: &[Point2]) -> f64 {
    if sat_depth(p, q) > 0.0 {
        return 0.0;
    }
    let mut d = f64::INFINITY;
    for (a, b) in [(p, q), (q, p)] {
        for k in 0..a.len() {
            let s = Segment2::new(a[k], a[(k + 1) % a.len()]);
            for &v in b {
                d = d.min(s.dist_to(v));
            }
        }
    }
    d
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub vertex: usize,
    /// `2π` minus the placed angles around the vertex.
    pub gap: f64,
    pub faces: Vec<usize>,
}

/// Angle gap at surface vertex `v`: `2π` minus the placed corner angles of
/// every face containing `v`, provided all its copies coincide.
pub fn angle_gap(l: &Layout, v: usize, tol: &Tolerance) -> Result<CurvatureReport> {
    let mut groups: Vec<(Point2, f64, Vec<usize>)> = Vec::new();
    for f in &l.faces {
        let Some(k) = f.vertices.iter().position(|&w| w == v) else { continue };
        let n = f.polygon.len();
        let here = f.polygon[k];
        let ang = angle_at(here, f.polygon[(k + n - 1) % n], f.polygon[(k + 1) % n])?;
        match groups.iter_mut().find(|g| g.0.dist(here) <= tol.eps_len * 10.0) {
            Some(g) => {
                g.1 += ang;
                g.2.push(f.id);
            }
            None => groups.push((here, ang, vec![f.id])),
        }
    }
    match groups.len() {
        0 => Err(Error::VertexNotPlaced(v)),
        1 => {
            let (_, s, faces) = groups.pop().expect("one group");
            Ok(CurvatureReport { vertex: v, gap: 2.0 * PI - s, faces })
        }
        _ => Err(Error::VertexNotSurrounded { vertex: v, partial_sums: groups.iter().map(|g| g.1).collect() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unfold::{FaceTag, PlacedFace};

    fn face(id: usize, pts: &[(f64, f64)]) -> PlacedFace {
        PlacedFace {
            id,
            vertices: (0..pts.len()).map(|k| 100 * id + k).collect(),
            tag: FaceTag::Other,
            polygon: pts.iter().map(|&(x, y)| Point2::new(x, y)).collect(),
            parent: None,
            hinge: None,
        }
    }

    fn layout(faces: Vec<PlacedFace>) -> Layout {
        Layout { faces, cuts: vec![] }
    }

    #[test]
    fn separated_squares_have_clearance() {
        let l = layout(vec![
            face(0, &[(0., 0.), (1., 0.), (1., 1.), (0., 1.)]),
            face(1, &[(2., 0.), (3., 0.), (3., 1.), (2., 1.)]),
        ]);
        let r = layout_overlaps(&l, &Tolerance::default());
        assert!(!r.overlapping);
        assert!((r.min_clearance.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coincident_triangles_overlap() {
        let t = [(0., 0.), (1., 0.), (0., 1.)];
        let l = layout(vec![face(0, &t), face(1, &t)]);
        let r = layout_overlaps(&l, &Tolerance::default());
        assert!(r.overlapping);
        let w = &r.witnesses[0];
        assert!(w.point.x > 0.0 && w.point.y > 0.0 && w.point.x + w.point.y < 1.0);
    }

    #[test]
    fn touching_is_not_overlap() {
        let l = layout(vec![
            face(0, &[(0., 0.), (1., 0.), (0., 1.)]),
            face(1, &[(1., 0.), (0., 1.), (1., 1.)]),
            face(2, &[(1., 1.), (2., 1.), (2., 2.)]),
        ]);
        let r = layout_overlaps(&l, &Tolerance::default());
        assert!(!r.overlapping);
        assert_eq!(r.min_clearance, Some(((0.5f64).powi(2) * 2.0).sqrt()));
    }

    #[test]
    fn orientation_of_input_is_irrelevant() {
        let l = layout(vec![face(0, &[(0., 0.), (0., 1.), (1., 0.)]), face(1, &[(0.2, 0.2), (2., 0.2), (0.2, 2.)])]);
        assert!(layout_overlaps(&l, &Tolerance::default()).overlapping);
    }

    #[test]
    fn flat_vertex_has_zero_gap() {
        let mut faces = Vec::new();
        for k in 0..6 {
            let a = Point2::new(1.0, 0.0).rotated(k as f64 * PI / 3.0);
            let b = Point2::new(1.0, 0.0).rotated((k + 1) as f64 * PI / 3.0);
            faces.push(PlacedFace {
                id: k,
                vertices: vec![0, k + 1, (k + 1) % 6 + 1],
                tag: FaceTag::Other,
                polygon: vec![Point2::default(), a, b],
                parent: None,
                hinge: None,
            });
        }
        let g = angle_gap(&layout(faces), 0, &Tolerance::default()).unwrap();
        assert!(g.gap.abs() < 1e-12);
    }
}
