//! Independent oracles shared by the integration suites. They avoid the
//! library's own predicates: overlap is measured by clipped area, region
//! membership by crossing parity against a closed, truncated boundary.

#![allow(dead_code)]

use std::f64::consts::PI;

use patchfold::geom::Point2;
use patchfold::regions::{Region, RegionShape};
use patchfold::unfold::Layout;

pub fn area(poly: &[Point2]) -> f64 {
    let n = poly.len();
    (0..n).map(|k| poly[k].x * poly[(k + 1) % n].y - poly[(k + 1) % n].x * poly[k].y).sum::<f64>() / 2.0
}

fn ccw(poly: &[Point2]) -> Vec<Point2> {
    let mut v = poly.to_vec();
    if area(&v) < 0.0 {
        v.reverse();
    }
    v
}

/// Area of the intersection of two convex polygons (Sutherland-Hodgman).
pub fn intersection_area(p: &[Point2], q: &[Point2]) -> f64 {
    let clip = ccw(q);
    let mut out = ccw(p);
    for k in 0..clip.len() {
        if out.is_empty() {
            break;
        }
        let (a, b) = (clip[k], clip[(k + 1) % clip.len()]);
        let side = |p: Point2| (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
        let input = std::mem::take(&mut out);
        for j in 0..input.len() {
            let (s, e) = (input[j], input[(j + 1) % input.len()]);
            let (ds, de) = (side(s), side(e));
            if de >= 0.0 {
                if ds < 0.0 {
                    out.push(s.lerp(e, ds / (ds - de)));
                }
                out.push(e);
            } else if ds >= 0.0 {
                out.push(s.lerp(e, ds / (ds - de)));
            }
        }
    }
    if out.len() < 3 {
        0.0
    } else {
        area(&out).abs()
    }
}

/// Face pairs whose interiors share more than `min_area`.
pub fn overlapping_pairs(l: &Layout, min_area: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, f) in l.faces.iter().enumerate() {
        for g in &l.faces[i + 1..] {
            if intersection_area(&f.polygon, &g.polygon) > min_area {
                out.push((f.id, g.id));
            }
        }
    }
    out
}

pub fn layout_diameter(l: &Layout) -> f64 {
    let pts: Vec<Point2> = l.faces.iter().flat_map(|f| f.polygon.iter().copied()).collect();
    let mut d: f64 = 0.0;
    for a in &pts {
        for b in &pts {
            d = d.max(a.dist(*b));
        }
    }
    d
}

fn seg_dist(p: Point2, a: Point2, b: Point2) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let l2 = dx * dx + dy * dy;
    let t = if l2 > 0.0 { (((p.x - a.x) * dx + (p.y - a.y) * dy) / l2).clamp(0.0, 1.0) } else { 0.0 };
    p.dist(Point2::new(a.x + t * dx, a.y + t * dy))
}

/// The region as a closed polygon, with open regions truncated far away.
pub fn closed_boundary(r: &Region, reach: f64) -> Vec<Point2> {
    match &r.shape {
        RegionShape::Closed(c) => c.clone(),
        RegionShape::Open { start_dir, chain, end_dir } => {
            let first = chain[0];
            let last = *chain.last().unwrap();
            let mut path = vec![Point2::new(first.x + reach * start_dir.x, first.y + reach * start_dir.y)];
            path.extend(chain.iter().copied());
            path.push(Point2::new(last.x + reach * end_dir.x, last.y + reach * end_dir.y));
            // Close clockwise from the end direction round to the start direction.
            let (a1, a0) = (end_dir.y.atan2(end_dir.x), start_dir.y.atan2(start_dir.x));
            let mut sweep = (a1 - a0).rem_euclid(2.0 * PI);
            if sweep == 0.0 {
                sweep = 2.0 * PI;
            }
            let c = Point2::new(chain.iter().map(|p| p.x).sum::<f64>() / chain.len() as f64, chain.iter().map(|p| p.y).sum::<f64>() / chain.len() as f64);
            let far = 4.0 * reach;
            for k in 1..64 {
                let t = a1 - sweep * k as f64 / 64.0;
                path.push(Point2::new(c.x + far * t.cos(), c.y + far * t.sin()));
            }
            path
        }
    }
}

/// Crossing-number membership, closed within `eps` of the boundary.
pub fn in_polygon(poly: &[Point2], p: Point2, eps: f64) -> bool {
    let n = poly.len();
    if (0..n).any(|k| seg_dist(p, poly[k], poly[(k + 1) % n]) <= eps) {
        return true;
    }
    let mut inside = false;
    for k in 0..n {
        let (a, b) = (poly[k], poly[(k + 1) % n]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if x > p.x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Vertices and edge midpoints of `poly` all lie in the region.
pub fn region_holds(r: &Region, poly: &[Point2], reach: f64, eps: f64) -> bool {
    let b = closed_boundary(r, reach);
    let n = poly.len();
    (0..n).all(|k| in_polygon(&b, poly[k], eps) && in_polygon(&b, poly[k].lerp(poly[(k + 1) % n], 0.5), eps))
}

/// Whether two rays (origin, direction) meet at a point other than a shared origin.
pub fn rays_meet(o1: Point2, d1: Point2, o2: Point2, d2: Point2, eps: f64) -> bool {
    let den = d1.x * d2.y - d1.y * d2.x;
    let (wx, wy) = (o2.x - o1.x, o2.y - o1.y);
    if den.abs() < 1e-15 {
        return false;
    }
    let s = (wx * d2.y - wy * d2.x) / den;
    let t = (wx * d1.y - wy * d1.x) / den;
    let scale = (d1.x.hypot(d1.y)).min(d2.x.hypot(d2.y));
    s * scale > eps && t * scale > eps
}
