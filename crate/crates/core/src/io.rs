//! JSON schemas for prismatoids, polyhedra, patches, layouts and reports.
//!
//! Numbers are written with 17 significant digits (trailing zeros trimmed),
//! so every `f64` survives a write/read cycle bit for bit.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Point2, Point3, Tolerance};
use crate::polyhedron::{neighborhood, ConvexPatch, ConvexPolyhedron, EdgeKey, NeighborhoodKind};
use crate::prismatoid::Prismatoid;
use crate::unfold::{FaceTag, Layout, PlacedFace};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrismatoidJson {
    #[serde(rename = "A")]
    pub a: Vec<[f64; 2]>,
    #[serde(rename = "B")]
    pub b: Vec<[f64; 2]>,
    pub z: f64,
}

impl PrismatoidJson {
    pub fn from_prismatoid(p: &Prismatoid) -> Self {
        PrismatoidJson { a: p.top.iter().map(|q| [q.x, q.y]).collect(), b: p.base.iter().map(|q| [q.x, q.y]).collect(), z: p.z }
    }

    pub fn build(&self) -> Result<Prismatoid> {
        let conv = |v: &[[f64; 2]]| v.iter().map(|q| Point2::try_new(q[0], q[1])).collect::<Result<Vec<_>>>();
        Prismatoid::new(conv(&self.a)?, conv(&self.b)?, self.z)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyhedronJson {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<Vec<usize>>,
}

impl PolyhedronJson {
    pub fn from_polyhedron(p: &ConvexPolyhedron) -> Self {
        PolyhedronJson { vertices: p.vertices.iter().map(|v| [v.x, v.y, v.z]).collect(), faces: p.faces.clone() }
    }

    pub fn build(&self) -> Result<ConvexPolyhedron> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| Point3::try_new(v[0], v[1], v[2]))
            .collect::<Result<Vec<_>>>()?;
        let p = ConvexPolyhedron::from_parts_unchecked(vertices, self.faces.clone());
        p.validate(&Tolerance::from_env(p.diameter()))?;
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatchJson {
    pub polyhedron: PolyhedronJson,
    pub base_face: usize,
    pub kind: NeighborhoodKind,
}

impl PatchJson {
    pub fn build(&self) -> Result<ConvexPatch> {
        neighborhood(&self.polyhedron.build()?, self.base_face, self.kind)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceJson {
    pub id: usize,
    #[serde(default)]
    pub vertices: Vec<usize>,
    #[serde(default = "default_tag")]
    pub tag: FaceTag,
    pub polygon: Vec<[f64; 2]>,
    pub parent: Option<usize>,
    pub hinge: Option<[usize; 2]>,
}

fn default_tag() -> FaceTag {
    FaceTag::Other
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutJson {
    pub faces: Vec<FaceJson>,
    pub cuts: Vec<[usize; 2]>,
}

impl LayoutJson {
    pub fn from_layout(l: &Layout) -> Self {
        LayoutJson {
            faces: l
                .faces
                .iter()
                .map(|f| FaceJson {
                    id: f.id,
                    vertices: f.vertices.clone(),
                    tag: f.tag,
                    polygon: f.polygon.iter().map(|q| [q.x, q.y]).collect(),
                    parent: f.parent,
                    hinge: f.hinge.map(|(u, v)| [u, v]),
                })
                .collect(),
            cuts: l.cuts.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }

    pub fn to_layout(&self) -> Result<Layout> {
        let mut faces = Vec::with_capacity(self.faces.len());
        for f in &self.faces {
            let polygon = f.polygon.iter().map(|q| Point2::try_new(q[0], q[1])).collect::<Result<Vec<_>>>()?;
            if polygon.len() < 3 {
                return Err(Error::Malformed(format!("face {} has fewer than 3 vertices", f.id)));
            }
            // Layouts written by other tools may omit vertex ids; give each face private ones.
            let vertices = if f.vertices.len() == polygon.len() {
                f.vertices.clone()
            } else {
                (0..polygon.len()).map(|k| usize::MAX - 64 * f.id - k).collect()
            };
            faces.push(PlacedFace {
                id: f.id,
                vertices,
                tag: f.tag,
                polygon,
                parent: f.parent,
                hinge: f.hinge.map(|h| (h[0].min(h[1]), h[0].max(h[1]))),
            });
        }
        let cuts: Vec<EdgeKey> = self.cuts.iter().map(|c| (c[0].min(c[1]), c[0].max(c[1]))).collect();
        Ok(Layout { faces, cuts })
    }
}

/// Any of the accepted unfolding inputs.
#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Prismatoid(Prismatoid),
    Patch(ConvexPatch),
    Polyhedron(ConvexPolyhedron),
}

/// Parse a prismatoid, patch or polyhedron document, deciding by its keys.
pub fn parse_input(text: &str) -> Result<Input> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    let obj = v.as_object().ok_or_else(|| Error::Malformed("expected a JSON object".into()))?;
    if obj.contains_key("A") && obj.contains_key("B") {
        let p: PrismatoidJson = serde_json::from_value(v)?;
        Ok(Input::Prismatoid(p.build()?))
    } else if obj.contains_key("polyhedron") {
        let p: PatchJson = serde_json::from_value(v)?;
        Ok(Input::Patch(p.build()?))
    } else if obj.contains_key("vertices") && obj.contains_key("faces") {
        let p: PolyhedronJson = serde_json::from_value(v)?;
        Ok(Input::Polyhedron(p.build()?))
    } else {
        Err(Error::Malformed("unrecognised document: expected prismatoid, patch or polyhedron".into()))
    }
}

/// Serializer formatter writing floats with 17 significant digits.
#[derive(Debug, Clone, Copy, Default)]
pub struct Digits17;

impl serde_json::ser::Formatter for Digits17 {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        writer.write_all(format_f64(value as f64).as_bytes())
    }
}

/// `value` with 17 significant digits, trailing zeros trimmed.
pub fn format_f64(value: f64) -> String {
    if !value.is_finite() {
        return "null".into();
    }
    if value == 0.0 {
        return if value.is_sign_negative() { "-0.0".into() } else { "0.0".into() };
    }
    let sci = format!("{value:.16e}");
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mant) = mant.strip_prefix('-').map_or(("", mant), |m| ("-", m));
    let digits: String = mant.chars().filter(|c| *c != '.').collect();
    if (-5..17).contains(&exp) {
        let (int, frac) = if exp >= 0 {
            let k = exp as usize + 1;
            (digits[..k].to_string(), digits[k..].to_string())
        } else {
            ("0".to_string(), format!("{}{}", "0".repeat((-exp - 1) as usize), digits))
        };
        let frac = frac.trim_end_matches('0');
        let frac = if frac.is_empty() { "0" } else { frac };
        format!("{sign}{int}.{frac}")
    } else {
        let frac = digits[1..].trim_end_matches('0');
        let frac = if frac.is_empty() { "0" } else { frac };
        format!("{sign}{}.{frac}e{exp}", &digits[..1])
    }
}

/// Compact JSON with 17-digit floats.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

pub fn prismatoid_json(p: &Prismatoid) -> Result<String> {
    to_json(&PrismatoidJson::from_prismatoid(p))
}

pub fn layout_json(l: &Layout) -> Result<String> {
    to_json(&LayoutJson::from_layout(l))
}

pub fn parse_layout(text: &str) -> Result<Layout> {
    serde_json::from_str::<LayoutJson>(text)?.to_layout()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for &x in &[0.1, 1.0, -2.5, 1e-7, 6.03626, 123456789.125, 1e20, -0.0, 0.603496, f64::MIN_POSITIVE, 1.0 / 3.0] {
            let s = format_f64(x);
            let y: f64 = s.parse().unwrap();
            assert_eq!(x.to_bits(), y.to_bits(), "{x} -> {s}");
        }
        assert_eq!(format_f64(1.0), "1.0");
        assert_eq!(format_f64(0.5), "0.5");
        assert_eq!(format_f64(-0.2), "-0.20000000000000001");
        assert_eq!(format_f64(1e-7), "9.9999999999999995e-8");
    }

    #[test]
    fn prismatoid_json_is_stable() {
        let j = PrismatoidJson { a: vec![[0.1, 0.2], [0.5, 0.1], [0.3, 0.6]], b: vec![[-2.0, -2.0], [2.0, -2.0], [0.0, 2.5]], z: 0.7 };
        let s1 = to_json(&j).unwrap();
        let back: PrismatoidJson = serde_json::from_str(&s1).unwrap();
        assert_eq!(back, j);
        assert_eq!(to_json(&back).unwrap(), s1);
    }
}
