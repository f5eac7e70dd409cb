//! Petal unfoldings of prismatoids whose lateral faces have no obtuse angle.
//! Every split works there, and for triangular prismatoids with a nonobtuse
//! top every top attachment works as well.

use crate::error::{Error, Result};
use crate::overlap::layout_overlaps;
use crate::prismatoid::Prismatoid;
use crate::regions::{altitude_partition, check_nonobtuse_lateral, diamond, region_within, triangle_nonobtuse, v_wedge};

use super::layout::Layout;
use super::petal::{PetalChoice, PetalStructure};

/// Preconditions for [`petal_unfold_nonobtuse`].
pub fn check_nonobtuse(p: &Prismatoid, include_top: bool) -> Result<()> {
    check_nonobtuse_lateral(p)?;
    if include_top {
        if p.n_top() != 3 || p.n_base() != 3 {
            return Err(Error::NotTriangular);
        }
        let t = [p.top[0], p.top[1], p.top[2]];
        if !triangle_nonobtuse(&t, &p.tol)? {
            return Err(Error::ObtuseFace { face: Prismatoid::TOP_FACE });
        }
    }
    Ok(())
}

/// The default choice: every fan hinged to its later B-neighbour and the top
/// on the first available A-triangle.
pub fn petal_unfold_nonobtuse(p: &Prismatoid, include_top: bool) -> Result<Layout> {
    let s = PetalStructure::for_prismatoid(p, include_top)?;
    let choice = PetalChoice {
        splits: vec![0; s.fans.len()],
        top: include_top.then(|| s.top_options(Prismatoid::TOP_FACE)[0]),
    };
    petal_unfold_nonobtuse_with(p, &s, &choice)
}

pub fn petal_unfold_nonobtuse_with(p: &Prismatoid, s: &PetalStructure, choice: &PetalChoice) -> Result<Layout> {
    check_nonobtuse(p, choice.top.is_some())?;
    let layout = s.layout(choice)?;
    let r = layout_overlaps(&layout, &p.tol);
    if r.overlapping {
        return Err(Error::OverlapDetected { pairs: r.witnesses.len() });
    }
    Ok(layout)
}

/// Whether every diamond lies in the altitude region of its base vertex.
pub fn diamonds_in_regions(p: &Prismatoid) -> Result<bool> {
    let part = altitude_partition(p)?;
    let reach = 4.0 * p.diameter();
    for i in 0..p.n_base() {
        if !region_within(&diamond(p, i)?, &part.regions[i], reach, &p.tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether the placed top lies in the V-region of the base vertex whose
/// fan carries it. `None` when the layout has no top.
pub fn top_in_v_region(p: &Prismatoid, s: &PetalStructure, layout: &Layout) -> Result<Option<bool>> {
    let Some(top) = layout.face(Prismatoid::TOP_FACE) else { return Ok(None) };
    let parent = top.parent.ok_or(Error::VertexNotPlaced(Prismatoid::TOP_FACE))?;
    let (i, _) = s
        .fan_of(parent)
        .ok_or_else(|| Error::InvalidChoice(format!("top hinged to face {parent}, which is not an A-triangle")))?;
    let v = v_wedge(p, s.fans[i].vertex)?;
    Ok(Some(v.contains_polygon(&top.polygon, &p.tol)))
}
