//! Single-tree unfoldings of a patch: the cut edges form one tree spanning
//! all interior vertices that reaches the patch boundary at exactly one vertex.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::polyhedron::{ConvexPatch, EdgeKey};

use super::layout::{develop, FaceTag, Layout, RootFrame, Tree};

/// Default cap on enumerated cut trees.
pub const DEFAULT_TREE_CAP: usize = 100_000;

/// A cut tree and the layout it induces.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeUnfolding {
    /// Boundary vertex the cut tree reaches.
    pub anchor: Option<usize>,
    pub cut_tree: Vec<EdgeKey>,
    pub layout: Layout,
}

/// Every admissible single-tree unfolding of the patch.
pub fn spanning_tree_unfoldings(
    patch: &ConvexPatch,
    frame: RootFrame,
    tag: &dyn Fn(usize) -> FaceTag,
    cap: usize,
) -> Result<Vec<TreeUnfolding>> {
    let interior = patch.interior_vertices();
    let edges = patch.interior_edges();
    let root = patch.base_face.unwrap_or(patch.faces[0]);
    let mut out = Vec::new();
    if interior.is_empty() {
        if let Some(layout) = layout_for(patch, &edges, &[], root, &frame, tag)? {
            out.push(TreeUnfolding { anchor: None, cut_tree: Vec::new(), layout });
        }
        return Ok(out);
    }
    let mut count = 0usize;
    for w in patch.boundary_vertices() {
        let mut verts: BTreeSet<usize> = interior.clone();
        verts.insert(w);
        let sub: Vec<EdgeKey> = edges.iter().copied().filter(|(u, v)| verts.contains(u) && verts.contains(v)).collect();
        let trees = spanning_trees(&verts, &sub, cap.saturating_sub(count))?;
        count += trees.len();
        for t in trees {
            if let Some(layout) = layout_for(patch, &edges, &t, root, &frame, tag)? {
                out.push(TreeUnfolding { anchor: Some(w), cut_tree: t, layout });
            }
        }
    }
    Ok(out)
}

/// Develop the patch with hinges = interior edges minus `cuts`, if those
/// hinges form a spanning tree of the faces.
fn layout_for(
    patch: &ConvexPatch,
    interior_edges: &[EdgeKey],
    cuts: &[EdgeKey],
    root: usize,
    frame: &RootFrame,
    tag: &dyn Fn(usize) -> FaceTag,
) -> Result<Option<Layout>> {
    let cut: BTreeSet<EdgeKey> = cuts.iter().copied().collect();
    let ef = patch.edge_faces();
    let hinges: Vec<EdgeKey> = interior_edges.iter().copied().filter(|e| !cut.contains(e)).collect();
    if hinges.len() + 1 != patch.faces.len() {
        return Ok(None);
    }
    let mut adj: BTreeMap<usize, Vec<(usize, EdgeKey)>> = BTreeMap::new();
    for e in &hinges {
        let fs = &ef[e];
        adj.entry(fs[0]).or_default().push((fs[1], *e));
        adj.entry(fs[1]).or_default().push((fs[0], *e));
    }
    let mut parent = BTreeMap::new();
    let mut seen = BTreeSet::from([root]);
    let mut queue = VecDeque::from([root]);
    while let Some(f) = queue.pop_front() {
        for &(g, e) in adj.get(&f).map(Vec::as_slice).unwrap_or(&[]) {
            if seen.insert(g) {
                parent.insert(g, (f, e));
                queue.push_back(g);
            }
        }
    }
    if seen.len() != patch.faces.len() {
        return Ok(None);
    }
    let tree = Tree { root, frame: frame.clone(), parent };
    Ok(Some(develop(&patch.parent, &[tree], tag)?))
}

/// All spanning trees of the graph `(verts, edges)`.
pub fn spanning_trees(verts: &BTreeSet<usize>, edges: &[EdgeKey], cap: usize) -> Result<Vec<Vec<EdgeKey>>> {
    let index: BTreeMap<usize, usize> = verts.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let need = verts.len() - 1;
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(need);
    let mut parent: Vec<usize> = (0..verts.len()).collect();
    backtrack(edges, &index, 0, need, &mut chosen, &mut parent, &mut out, cap)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn backtrack(
    edges: &[EdgeKey],
    index: &BTreeMap<usize, usize>,
    k: usize,
    need: usize,
    chosen: &mut Vec<EdgeKey>,
    uf: &mut Vec<usize>,
    out: &mut Vec<Vec<EdgeKey>>,
    cap: usize,
) -> Result<()> {
    if chosen.len() == need {
        if out.len() >= cap {
            return Err(Error::CombinatorialExplosion { size: out.len() as u128 + 1, cap: cap as u128 });
        }
        out.push(chosen.clone());
        return Ok(());
    }
    if edges.len() - k < need - chosen.len() {
        return Ok(());
    }
    let (u, v) = edges[k];
    let (ru, rv) = (find(uf, index[&u]), find(uf, index[&v]));
    if ru != rv {
        let saved = uf.clone();
        uf[ru] = rv;
        chosen.push(edges[k]);
        backtrack(edges, index, k + 1, need, chosen, uf, out, cap)?;
        chosen.pop();
        *uf = saved;
    }
    backtrack(edges, index, k + 1, need, chosen, uf, out, cap)
}

fn find(uf: &[usize], mut x: usize) -> usize {
    while uf[x] != x {
        x = uf[x];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spanning_trees_of_k4() {
        let verts: BTreeSet<usize> = (0..4).collect();
        let mut edges = Vec::new();
        for a in 0..4 {
            for b in a + 1..4 {
                edges.push((a, b));
            }
        }
        // Cayley: 4^(4-2) = 16.
        assert_eq!(spanning_trees(&verts, &edges, 100).unwrap().len(), 16);
        assert!(spanning_trees(&verts, &edges, 10).is_err());
    }

    #[test]
    fn spanning_trees_of_cycle() {
        let verts: BTreeSet<usize> = (0..6).collect();
        let edges: Vec<EdgeKey> = (0..6).map(|k| crate::polyhedron::edge_key(k, (k + 1) % 6)).collect();
        assert_eq!(spanning_trees(&verts, &edges, 100).unwrap().len(), 6);
    }
}
