//! SVG rendering of layouts, altitude rays and overlap witnesses (y axis up).

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::geom::Point2;
use crate::overlap::Witness;
use crate::regions::AltitudePartition;
use crate::unfold::{FaceTag, Layout};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderStyle {
    pub stroke_width: f64,
    pub cut_width: f64,
    pub fill_base: String,
    pub fill_b: String,
    pub fill_a: String,
    pub fill_top: String,
    pub fill_other: String,
    pub ray_stroke: String,
    pub witness_fill: String,
    /// World units per pixel.
    pub scale: f64,
    pub margin: f64,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            stroke_width: 1.0,
            cut_width: 2.5,
            fill_base: "#d0d0d0".into(),
            fill_b: "#8fd18f".into(),
            fill_a: "#f3e27a".into(),
            fill_top: "#9fc5e8".into(),
            fill_other: "#e0e0e0".into(),
            ray_stroke: "#555555".into(),
            witness_fill: "#e02020".into(),
            scale: 0.01,
            margin: 20.0,
        }
    }
}

/// Deterministic SVG document for a layout.
pub fn render_svg(l: &Layout, partition: Option<&AltitudePartition>, witnesses: &[Witness], style: &RenderStyle) -> String {
    let pts: Vec<Point2> = l.faces.iter().flat_map(|f| f.polygon.iter().copied()).collect();
    let (mut lo, mut hi) = (Point2::new(f64::INFINITY, f64::INFINITY), Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for p in &pts {
        lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    if pts.is_empty() {
        lo = Point2::default();
        hi = Point2::default();
    }
    let s = if style.scale > 0.0 { style.scale } else { 0.01 };
    let w = (hi.x - lo.x) / s + 2.0 * style.margin;
    let h = (hi.y - lo.y) / s + 2.0 * style.margin;
    let tx = |p: Point2| ((p.x - lo.x) / s + style.margin, (hi.y - p.y) / s + style.margin);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.6}" height="{h:.6}" viewBox="0 0 {w:.6} {h:.6}">"#
    );
    let _ = writeln!(out, r##"<rect x="0" y="0" width="{w:.6}" height="{h:.6}" fill="none" stroke="#999999"/>"##);
    for f in &l.faces {
        let fill = match f.tag {
            FaceTag::Base => &style.fill_base,
            FaceTag::BTriangle => &style.fill_b,
            FaceTag::ATriangle => &style.fill_a,
            FaceTag::Top => &style.fill_top,
            FaceTag::Other => &style.fill_other,
        };
        let mut d = String::new();
        for (k, p) in f.polygon.iter().enumerate() {
            let (x, y) = tx(*p);
            let _ = write!(d, "{}{x:.6},{y:.6}", if k == 0 { "" } else { " " });
        }
        let _ = writeln!(
            out,
            r#"<polygon data-face="{}" points="{d}" fill="{fill}" fill-opacity="0.85" stroke="black" stroke-width="{:.6}"/>"#,
            f.id, style.stroke_width
        );
    }
    for &(u, v) in &l.cuts {
        for f in &l.faces {
            if let (Some(a), Some(b)) = (f.position_of(u), f.position_of(v)) {
                let ((x1, y1), (x2, y2)) = (tx(a), tx(b));
                let _ = writeln!(
                    out,
                    r#"<line x1="{x1:.6}" y1="{y1:.6}" x2="{x2:.6}" y2="{y2:.6}" stroke="black" stroke-width="{:.6}"/>"#,
                    style.cut_width
                );
            }
        }
    }
    if let Some(part) = partition {
        let reach = (hi - lo).norm().max(1.0);
        for r in &part.rays {
            let ((x1, y1), (x2, y2)) = (tx(r.origin), tx(r.at(reach)));
            let _ = writeln!(
                out,
                r#"<line x1="{x1:.6}" y1="{y1:.6}" x2="{x2:.6}" y2="{y2:.6}" stroke="{}" stroke-width="{:.6}" stroke-dasharray="6,4"/>"#,
                style.ray_stroke, style.stroke_width
            );
        }
    }
    for wi in witnesses {
        let (x, y) = tx(wi.point);
        let _ = writeln!(
            out,
            r#"<circle data-witness="{}-{}" cx="{x:.6}" cy="{y:.6}" r="4" fill="{}"/>"#,
            wi.a, wi.b, style.witness_fill
        );
    }
    out.push_str("</svg>\n");
    out
}
