//! How triangle angles change as the top is raised.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{angle_at, Point2, Point3};
use crate::prismatoid::Prismatoid;

use super::afan::{a_fan, classify, ChainClass};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleMonotonicityReport {
    /// Canonical coordinates of `a2` relative to `a1` (with `a1 − b` scaled to `(1, 0)`).
    pub x: f64,
    pub y: f64,
    pub z: Vec<f64>,
    /// Triangle angle at `a1` for each height.
    pub alpha1: Vec<f64>,
    /// Triangle angle at `a2` for each height.
    pub alpha2: Vec<f64>,
    /// Largest deviation of `cos(π − α1)` from `x / (√(x²+y²) √(1+z²))`.
    pub max_cos_error: f64,
    /// Both angles move monotonically towards `π/2` without crossing it.
    pub monotone: bool,
}

/// Triangle `b, a1, a2` with `b` at height 0 and `a1, a2` at each height in `z_grid`.
pub fn angle_monotonicity_check(b: Point2, a1: Point2, a2: Point2, z_grid: &[f64]) -> Result<AngleMonotonicityReport> {
    let d = a1 - b;
    let l = d.norm();
    if !(l > 0.0) || a2.dist(a1) == 0.0 {
        return Err(Error::DegenerateAngle);
    }
    let u = d * (1.0 / l);
    let w = a2 - a1;
    let (x, y) = (w.dot(u) / l, u.cross(w) / l);
    let mut alpha1 = Vec::with_capacity(z_grid.len());
    let mut alpha2 = Vec::with_capacity(z_grid.len());
    let mut max_cos_error: f64 = 0.0;
    for &z in z_grid {
        let (pb, p1, p2) = (Point3::from_xy(b, 0.0), Point3::from_xy(a1, z), Point3::from_xy(a2, z));
        let t1 = angle_at(p1, pb, p2)?;
        alpha1.push(t1);
        alpha2.push(angle_at(p2, pb, p1)?);
        let zc = z / l;
        let closed = x / ((x * x + y * y).sqrt() * (1.0 + zc * zc).sqrt());
        max_cos_error = max_cos_error.max(((PI - t1).cos() - closed).abs());
    }
    let monotone = towards(&alpha1, FRAC_PI_2) && towards(&alpha2, FRAC_PI_2);
    Ok(AngleMonotonicityReport { x, y, z: z_grid.to_vec(), alpha1, alpha2, max_cos_error, monotone })
}

/// The sequence approaches `target` monotonically and stays on one side of it.
fn towards(seq: &[f64], target: f64) -> bool {
    const SLACK: f64 = 1e-12;
    let side = |v: f64| {
        if v > target + SLACK {
            1
        } else if v < target - SLACK {
            -1
        } else {
            0
        }
    };
    let s0 = seq.first().map(|&v| side(v)).unwrap_or(0);
    seq.windows(2).all(|w| {
        let ok_side = side(w[1]) == s0 || side(w[1]) == 0;
        let ok_step = (w[1] - target).abs() <= (w[0] - target).abs() + SLACK;
        ok_side && ok_step
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainVertexTrack {
    /// Top vertex index.
    pub vertex: usize,
    pub angles: Vec<f64>,
    pub classes: Vec<ChainClass>,
    pub class_invariant: bool,
    pub monotone_to_pi: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainFactsReport {
    pub base_vertex: usize,
    pub z: Vec<f64>,
    pub tracks: Vec<ChainVertexTrack>,
}

impl ChainFactsReport {
    pub fn holds(&self) -> bool {
        self.tracks.iter().all(|t| t.class_invariant && t.monotone_to_pi)
    }
}

/// Track the a-chain angles of the fan at `b_i` over the heights `z_grid`.
pub fn chain_angle_facts_check(p: &Prismatoid, i: usize, z_grid: &[f64]) -> Result<ChainFactsReport> {
    let fans = z_grid
        .iter()
        .map(|&z| a_fan(&p.at_height(z)?, i))
        .collect::<Result<Vec<_>>>()?;
    let chain = a_fan(p, i)?.chain;
    let inner = chain.len().saturating_sub(2);
    let eps = p.tol.eps_ang;
    let tracks = (0..inner)
        .map(|j| {
            let angles: Vec<f64> = fans.iter().map(|f| f.angles[j]).collect();
            let classes: Vec<ChainClass> = angles.iter().map(|&a| classify(a, eps)).collect();
            let class_invariant = classes.windows(2).all(|w| w[0] == w[1]);
            let monotone_to_pi = angles.windows(2).all(|w| (w[1] - PI).abs() <= (w[0] - PI).abs() + eps)
                && angles.iter().all(|&a| classify(a, eps) == classes[0] || classify(a, eps) == ChainClass::Straight);
            ChainVertexTrack { vertex: chain[j + 1], angles, classes, class_invariant, monotone_to_pi }
        })
        .collect();
    Ok(ChainFactsReport { base_vertex: i, z: z_grid.to_vec(), tracks })
}

#[cfg(test)]
mod tests {
    use super::*;

    const GRID: [f64; 7] = [0.0, 0.1, 0.3, 1.0, 2.0, 5.0, 20.0];

    #[test]
    fn right_angle_is_constant() {
        let r = angle_monotonicity_check(Point2::new(0., 0.), Point2::new(1., 0.), Point2::new(1., 0.7), &GRID).unwrap();
        assert!(r.alpha1.iter().all(|a| (a - FRAC_PI_2).abs() < 1e-12));
        assert!(r.max_cos_error < 1e-12);
    }

    #[test]
    fn sign_of_x_decides_direction() {
        let pos = angle_monotonicity_check(Point2::new(0., 0.), Point2::new(1., 0.), Point2::new(1.4, 0.5), &GRID).unwrap();
        assert!(pos.alpha1[0] > FRAC_PI_2);
        assert!(pos.alpha1.windows(2).all(|w| w[1] < w[0]));
        let neg = angle_monotonicity_check(Point2::new(0., 0.), Point2::new(1., 0.), Point2::new(0.6, 0.5), &GRID).unwrap();
        assert!(neg.alpha1[0] < FRAC_PI_2);
        assert!(neg.alpha1.windows(2).all(|w| w[1] > w[0]));
        assert!(pos.monotone && neg.monotone);
    }
}
