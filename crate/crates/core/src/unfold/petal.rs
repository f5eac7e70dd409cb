//! Petal unfoldings: the base stays fixed, every face across a base edge
//! hinges to the base, and the faces around each base vertex are split into
//! two chains that hinge to the two edge faces at that vertex.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyhedron::{edge_key, ConvexPatch, ConvexPolyhedron, EdgeKey};
use crate::prismatoid::{FaceKind, Prismatoid};

use super::layout::{develop, FaceTag, Layout, RootFrame, Tree};

/// Per-fan split indices and the optional top attachment.
///
/// `splits[f] = k` hinges the first `k` faces of fan `f` (counted from its
/// `first` edge face) to `first`, and the rest to `last`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PetalChoice {
    pub splits: Vec<usize>,
    /// Face the top hinges to.
    pub top: Option<usize>,
}

impl std::fmt::Display for PetalChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.splits.iter().map(|k| k.to_string()).collect();
        write!(f, "s{}", s.join("-"))?;
        if let Some(t) = self.top {
            write!(f, "_t{t}")?;
        }
        Ok(())
    }
}

/// The faces around one base vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PetalFan {
    pub vertex: usize,
    /// Edge face across the base edge leaving `vertex`.
    pub first: usize,
    /// Edge face across the base edge entering `vertex`.
    pub last: usize,
    /// Faces strictly between `first` and `last`, in rotation order.
    pub faces: Vec<usize>,
    /// `crossings[k]` is shared by the `k`-th and `(k+1)`-th faces of `first, faces.., last`.
    pub crossings: Vec<EdgeKey>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PetalStructure {
    pub poly: ConvexPolyhedron,
    pub base: usize,
    /// Edge faces, one per base edge in base-cycle order.
    pub edge_faces: Vec<usize>,
    /// Fans sorted by base vertex id.
    pub fans: Vec<PetalFan>,
    /// A face beyond the petals, hinged to a neighbouring petal face.
    pub top: Option<usize>,
    pub frame: RootFrame,
    tags: BTreeMap<usize, FaceTag>,
}

impl PetalStructure {
    /// Petal structure of a patch grown from `patch.base_face`.
    pub fn from_patch(patch: &ConvexPatch) -> Result<Self> {
        let base = patch
            .base_face
            .ok_or_else(|| Error::PetalNotApplicable("patch has no base face".into()))?;
        Self::new(patch.parent.clone(), &patch.faces, base, None, RootFrame::Intrinsic)
    }

    /// Petal structure of `faces` around `base`; `top` may be any other face
    /// in `faces` that shares an edge with a petal face.
    pub fn new(poly: ConvexPolyhedron, faces: &[usize], base: usize, top: Option<usize>, frame: RootFrame) -> Result<Self> {
        let in_set: BTreeSet<usize> = faces.iter().copied().collect();
        if !in_set.contains(&base) {
            return Err(Error::InvalidFace(base));
        }
        let cycle = poly.faces[base].clone();
        let nb = cycle.len();
        let mut edge_faces = Vec::with_capacity(nb);
        for k in 0..nb {
            let (u, v) = (cycle[k], cycle[(k + 1) % nb]);
            let g = poly
                .neighbor_across(base, u, v)
                .filter(|g| in_set.contains(g))
                .ok_or_else(|| Error::PetalNotApplicable(format!("base edge ({u},{v}) has no neighbour in the patch")))?;
            edge_faces.push(g);
        }

        let mut fans = Vec::with_capacity(nb);
        for k in 0..nb {
            let v = cycle[k];
            let first = edge_faces[k];
            let last = edge_faces[(k + nb - 1) % nb];
            let mut seq = vec![first];
            let mut crossings = Vec::new();
            let mut cur = first;
            while cur != last {
                let c = &poly.faces[cur];
                let pos = c.iter().position(|&w| w == v).expect("face around v contains v");
                let w = c[(pos + 1) % c.len()];
                let next = poly
                    .neighbor_across(cur, v, w)
                    .ok_or_else(|| Error::Malformed("open surface around a base vertex".into()))?;
                crossings.push(edge_key(v, w));
                seq.push(next);
                cur = next;
                if seq.len() > poly.faces.len() {
                    return Err(Error::Malformed("rotation around a base vertex does not close".into()));
                }
            }
            let inner = &seq[1..seq.len() - 1];
            let inside = inner.iter().filter(|f| in_set.contains(f)).count();
            let fan_faces = if inside == inner.len() {
                inner.to_vec()
            } else if inside == 0 {
                crossings.clear();
                Vec::new()
            } else {
                return Err(Error::PetalNotApplicable(format!(
                    "faces around base vertex {v} are partly outside the patch"
                )));
            };
            fans.push(PetalFan { vertex: v, first, last, faces: fan_faces, crossings });
        }
        fans.sort_by_key(|f| f.vertex);

        let mut covered: BTreeSet<usize> = BTreeSet::from([base]);
        covered.extend(edge_faces.iter().copied());
        for f in &fans {
            covered.extend(f.faces.iter().copied());
        }
        let extra: Vec<usize> = in_set.difference(&covered).copied().collect();
        match (extra.as_slice(), top) {
            ([], None) => {}
            ([t], Some(t2)) if *t == t2 => {}
            _ => {
                return Err(Error::PetalNotApplicable(format!(
                    "faces {extra:?} are not incident to the base"
                )))
            }
        }

        let mut tags = BTreeMap::new();
        tags.insert(base, FaceTag::Base);
        for &g in &edge_faces {
            tags.insert(g, FaceTag::BTriangle);
        }
        for f in &fans {
            for &g in &f.faces {
                tags.insert(g, FaceTag::ATriangle);
            }
        }
        if let Some(t) = top {
            tags.insert(t, FaceTag::Top);
        }
        let s = PetalStructure { poly, base, edge_faces, fans, top, frame, tags };
        if let Some(t) = top {
            if s.top_options(t).is_empty() {
                return Err(Error::PetalNotApplicable("top shares no edge with a petal face".into()));
            }
        }
        Ok(s)
    }

    /// Topless petal structure of a prismatoid (viewed from above).
    pub fn topless(p: &Prismatoid) -> Result<Self> {
        Self::for_prismatoid(p, false)
    }

    pub fn for_prismatoid(p: &Prismatoid, include_top: bool) -> Result<Self> {
        let poly = p.to_polyhedron();
        let faces: Vec<usize> = (0..poly.faces.len())
            .filter(|&f| include_top || f != Prismatoid::TOP_FACE)
            .collect();
        let top = include_top.then_some(Prismatoid::TOP_FACE);
        let mut s = Self::new(poly, &faces, Prismatoid::BASE_FACE, top, RootFrame::Horizontal)?;
        for (k, lf) in p.hull.faces.iter().enumerate() {
            let tag = match lf.kind {
                FaceKind::BTriangle => FaceTag::BTriangle,
                FaceKind::ATriangle => FaceTag::ATriangle,
            };
            s.tags.insert(Prismatoid::lateral_face_id(k), tag);
        }
        Ok(s)
    }

    pub fn tag(&self, f: usize) -> FaceTag {
        self.tags.get(&f).copied().unwrap_or(FaceTag::Other)
    }

    /// Petal faces sharing an edge with `top`.
    pub fn top_options(&self, top: usize) -> Vec<usize> {
        let te: BTreeSet<EdgeKey> = self.poly.face_edges(top).map(|(u, v)| edge_key(u, v)).collect();
        let mut out: Vec<usize> = self
            .edge_faces
            .iter()
            .chain(self.fans.iter().flat_map(|f| f.faces.iter()))
            .copied()
            .filter(|&g| self.poly.face_edges(g).any(|(u, v)| te.contains(&edge_key(u, v))))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The fan containing `face`, with the face's position in it.
    pub fn fan_of(&self, face: usize) -> Option<(usize, usize)> {
        self.fans
            .iter()
            .enumerate()
            .find_map(|(i, f)| f.faces.iter().position(|&g| g == face).map(|k| (i, k)))
    }

    /// Number of choices, `Π (|fan| + 1)` times the top options.
    pub fn choice_count(&self, include_top: bool) -> u128 {
        let mut n: u128 = self.fans.iter().map(|f| f.faces.len() as u128 + 1).product();
        if include_top {
            if let Some(t) = self.top {
                n *= self.top_options(t).len() as u128;
            }
        }
        n
    }

    pub fn validate_choice(&self, c: &PetalChoice) -> Result<()> {
        if c.splits.len() != self.fans.len() {
            return Err(Error::InvalidChoice(format!("expected {} splits", self.fans.len())));
        }
        for (f, &k) in self.fans.iter().zip(&c.splits) {
            if k > f.faces.len() {
                return Err(Error::InvalidChoice(format!("split {k} exceeds fan size {}", f.faces.len())));
            }
        }
        match (self.top, c.top) {
            (None, None) => Ok(()),
            (Some(t), Some(a)) if self.top_options(t).contains(&a) => Ok(()),
            (Some(_), Some(a)) => Err(Error::InvalidChoice(format!("top cannot hinge to face {a}"))),
            (Some(_), None) => Err(Error::InvalidChoice("top attachment missing".into())),
            (None, Some(_)) => Err(Error::InvalidChoice("no top face to attach".into())),
        }
    }

    /// Attachment tree for a choice.
    pub fn tree(&self, c: &PetalChoice) -> Result<Tree> {
        self.validate_choice(c)?;
        let mut parent = BTreeMap::new();
        let cycle = &self.poly.faces[self.base];
        for (k, &g) in self.edge_faces.iter().enumerate() {
            parent.insert(g, (self.base, edge_key(cycle[k], cycle[(k + 1) % cycle.len()])));
        }
        for (fan, &k) in self.fans.iter().zip(&c.splits) {
            let m = fan.faces.len();
            for j in 0..k {
                let p = if j == 0 { fan.first } else { fan.faces[j - 1] };
                parent.insert(fan.faces[j], (p, fan.crossings[j]));
            }
            for j in k..m {
                let p = if j + 1 == m { fan.last } else { fan.faces[j + 1] };
                parent.insert(fan.faces[j], (p, fan.crossings[j + 1]));
            }
        }
        if let (Some(t), Some(a)) = (self.top, c.top) {
            let te: BTreeSet<EdgeKey> = self.poly.face_edges(t).map(|(u, v)| edge_key(u, v)).collect();
            let hinge = self
                .poly
                .face_edges(a)
                .map(|(u, v)| edge_key(u, v))
                .find(|e| te.contains(e))
                .expect("validated top option");
            parent.insert(t, (a, hinge));
        }
        Ok(Tree { root: self.base, frame: self.frame.clone(), parent })
    }

    pub fn layout(&self, c: &PetalChoice) -> Result<Layout> {
        let tree = self.tree(c)?;
        develop(&self.poly, &[tree], &|f| self.tag(f))
    }

    /// All choices in mixed-radix order (first fan varies slowest).
    pub fn choices(&self, include_top: bool, cap: u128) -> Result<ChoiceIter> {
        let n = self.choice_count(include_top);
        if n > cap {
            return Err(Error::CombinatorialExplosion { size: n, cap });
        }
        let tops = match (include_top, self.top) {
            (true, Some(t)) => self.top_options(t).into_iter().map(Some).collect(),
            _ => vec![None],
        };
        let radix = self.fans.iter().map(|f| f.faces.len() + 1).collect();
        Ok(ChoiceIter { radix, tops, next: Some((vec![0; self.fans.len()], 0)) })
    }
}

/// Iterator over every [`PetalChoice`] of a structure.
#[derive(Debug, Clone)]
pub struct ChoiceIter {
    radix: Vec<usize>,
    tops: Vec<Option<usize>>,
    next: Option<(Vec<usize>, usize)>,
}

impl Iterator for ChoiceIter {
    type Item = PetalChoice;

    fn next(&mut self) -> Option<PetalChoice> {
        let (splits, t) = self.next.take()?;
        let out = PetalChoice { splits: splits.clone(), top: self.tops[t] };
        let mut s = splits;
        let mut t = t + 1;
        if t == self.tops.len() {
            t = 0;
            let mut k = s.len();
            loop {
                if k == 0 {
                    return Some(out);
                }
                k -= 1;
                s[k] += 1;
                if s[k] < self.radix[k] {
                    break;
                }
                s[k] = 0;
            }
        }
        self.next = Some((s, t));
        Some(out)
    }
}

/// Every petal unfolding of a structure, with its choice.
pub fn enumerate_petal_unfoldings(
    s: &PetalStructure,
    include_top: bool,
    cap: u128,
) -> Result<impl Iterator<Item = (PetalChoice, Result<Layout>)> + '_> {
    Ok(s.choices(include_top, cap)?.map(move |c| {
        let l = s.layout(&c);
        (c, l)
    }))
}

/// Default cap on enumerated petal choices.
pub const DEFAULT_PETAL_CAP: u128 = 1_000_000;
