//! The constructive petal unfolding of a topless prismatoid.
//!
//! Every fan split is decided on the flat prismatoid `P(0)` from the up/down
//! pattern of the fan and its two B-neighbours, checked for containment in
//! the altitude region, and then held fixed when the layout is rebuilt at
//! the real height.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::overlap::{layout_overlaps, OverlapReport};
use crate::prismatoid::Prismatoid;
use crate::regions::{altitude_partition, AltitudePartition};

use super::afan::{a_fan, AFan};
use super::layout::Layout;
use super::petal::{PetalChoice, PetalStructure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DispatchCase {
    /// No A-triangles at this base vertex.
    Empty,
    /// No up A-faces; the fan stays on a down B-neighbour.
    Convex,
    /// Up A-faces between two down B-neighbours; flip across a tangent.
    ReflexBothDown,
    /// `B_{i-1}` is an up face and is flipped together with the up A-faces.
    UpPrev,
    /// `B_i` is an up face and is flipped together with the up A-faces.
    UpNext,
    /// Both B-neighbours are up faces.
    BothUp,
}

impl DispatchCase {
    pub const ALL: [DispatchCase; 6] = [
        DispatchCase::Empty,
        DispatchCase::Convex,
        DispatchCase::ReflexBothDown,
        DispatchCase::UpPrev,
        DispatchCase::UpNext,
        DispatchCase::BothUp,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FlipSide {
    /// Reflect across `b a_t`; the up faces hinge towards `B_i`.
    LeftTangent,
    /// Reflect across `b a_s`; the up faces hinge towards `B_{i-1}`.
    RightTangent,
}

impl FlipSide {
    /// Split index realising this flip for a fan with up faces `[s, t)`.
    pub fn split(self, s: usize, t: usize) -> usize {
        match self {
            FlipSide::LeftTangent => s,
            FlipSide::RightTangent => t,
        }
    }
}

/// Case table: the case and the split candidates to try, in order.
pub fn dispatch(fan: &AFan) -> (DispatchCase, Vec<usize>) {
    let m = fan.len();
    if m == 0 {
        return (DispatchCase::Empty, vec![0]);
    }
    let all = |first: &[usize]| {
        let mut v = first.to_vec();
        v.extend((0..=m).filter(|k| !first.contains(k)));
        v
    };
    match fan.tangents {
        None => match (fan.prev_b_up, fan.next_b_up) {
            (_, false) if !fan.prev_b_up => (DispatchCase::Convex, vec![0, m]),
            (_, false) => (DispatchCase::Convex, vec![0]),
            (false, true) => (DispatchCase::Convex, vec![m]),
            (true, true) => (DispatchCase::BothUp, all(&[0, m])),
        },
        Some((s, t)) => match (fan.prev_b_up, fan.next_b_up) {
            (false, false) => (DispatchCase::ReflexBothDown, vec![s, t]),
            (true, false) => (DispatchCase::UpPrev, vec![t, s]),
            (false, true) => (DispatchCase::UpNext, vec![s, t]),
            (true, true) => (DispatchCase::BothUp, all(&[s, t])),
        },
    }
}

/// Per-run counters of which cases fired and how often the table's
/// candidates had to be widened.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DispatchStats {
    pub cases: std::collections::BTreeMap<String, u64>,
    /// Fans where no table candidate was contained at `P(0)`.
    pub flat_fallbacks: u64,
    /// Fans whose `P(0)` split was not contained at the target height.
    pub lift_fallbacks: u64,
}

impl DispatchStats {
    pub fn merge(&mut self, o: &DispatchStats) {
        for (k, v) in &o.cases {
            *self.cases.entry(k.clone()).or_default() += v;
        }
        self.flat_fallbacks += o.flat_fallbacks;
        self.lift_fallbacks += o.lift_fallbacks;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToplessUnfolding {
    pub layout: Layout,
    pub choice: PetalChoice,
    pub cases: Vec<DispatchCase>,
    pub stats: DispatchStats,
    pub partition: AltitudePartition,
}

/// Containment of each fan's placed faces in its altitude region, for one layout.
pub fn fans_contained(s: &PetalStructure, layout: &Layout, part: &AltitudePartition, tol: &crate::Tolerance) -> Vec<bool> {
    s.fans
        .iter()
        .enumerate()
        .map(|(i, fan)| {
            fan.faces.iter().all(|&f| {
                let placed = layout.face(f).expect("every fan face is placed");
                part.regions[i].contains_polygon(&placed.polygon, tol)
            })
        })
        .collect()
}

/// For every fan, the first candidate split (in order) under which the fan
/// lies in its region; other fans are held at `base`.
fn first_contained(
    s: &PetalStructure,
    part: &AltitudePartition,
    tol: &crate::Tolerance,
    base: &[usize],
    candidates: &[Vec<usize>],
) -> Result<Vec<Option<usize>>> {
    let n = s.fans.len();
    let mut found: Vec<Option<usize>> = vec![None; n];
    let rounds = candidates.iter().map(Vec::len).max().unwrap_or(0);
    for r in 0..rounds {
        let mut splits = base.to_vec();
        let mut active = vec![false; n];
        for i in 0..n {
            if found[i].is_none() && r < candidates[i].len() {
                splits[i] = candidates[i][r];
                active[i] = true;
            }
        }
        if !active.contains(&true) {
            break;
        }
        let layout = s.layout(&PetalChoice { splits: splits.clone(), top: None })?;
        let ok = fans_contained(s, &layout, part, tol);
        for i in 0..n {
            if active[i] && ok[i] {
                found[i] = Some(splits[i]);
            }
        }
    }
    Ok(found)
}

/// Nonoverlapping petal unfolding of the topless prismatoid.
pub fn petal_unfold_topless(p: &Prismatoid) -> Result<ToplessUnfolding> {
    let (unf, report) = petal_unfold_topless_report(p)?;
    if report.overlapping {
        return Err(Error::OverlapDetected { pairs: report.witnesses.len() });
    }
    Ok(unf)
}

/// The dispatcher's layout with its overlap report, returned even when the
/// layout overlaps so that failures can be inspected.
pub fn petal_unfold_topless_report(p: &Prismatoid) -> Result<(ToplessUnfolding, OverlapReport)> {
    let n = p.n_base();
    let flat = p.at_height(0.0)?;
    let fans: Vec<AFan> = (0..n).map(|i| a_fan(&flat, i)).collect::<Result<_>>()?;
    let table: Vec<(DispatchCase, Vec<usize>)> = fans.iter().map(dispatch).collect();
    let mut stats = DispatchStats::default();
    for (case, _) in &table {
        *stats.cases.entry(format!("{case:?}")).or_default() += 1;
        log::trace!("dispatch {case:?}");
    }

    // Decide on P(0).
    let s0 = PetalStructure::topless(&flat)?;
    let part0 = altitude_partition(&flat)?;
    let cands: Vec<Vec<usize>> = table.iter().map(|t| t.1.clone()).collect();
    let base: Vec<usize> = cands.iter().map(|c| c[0]).collect();
    let mut decided = first_contained(&s0, &part0, &flat.tol, &base, &cands)?;
    if decided.contains(&None) {
        let widened: Vec<Vec<usize>> = (0..n)
            .map(|i| if decided[i].is_none() { (0..=fans[i].len()).collect() } else { Vec::new() })
            .collect();
        let again = first_contained(&s0, &part0, &flat.tol, &base, &widened)?;
        for i in 0..n {
            if decided[i].is_none() {
                stats.flat_fallbacks += 1;
                decided[i] = again[i];
            }
        }
    }
    let flat_splits: Vec<usize> = (0..n).map(|i| decided[i].unwrap_or(base[i])).collect();

    // Lift to the target height.
    let (s, part) = if p.z == 0.0 {
        (s0, part0)
    } else {
        (PetalStructure::topless(p)?, altitude_partition(p)?)
    };
    let mut choice = PetalChoice { splits: flat_splits, top: None };
    let mut layout = s.layout(&choice)?;
    let ok = fans_contained(&s, &layout, &part, &p.tol);
    if ok.contains(&false) {
        let widened: Vec<Vec<usize>> = (0..n)
            .map(|i| if ok[i] { Vec::new() } else { (0..=fans[i].len()).collect() })
            .collect();
        let again = first_contained(&s, &part, &p.tol, &choice.splits, &widened)?;
        for i in 0..n {
            if !ok[i] {
                stats.lift_fallbacks += 1;
                log::debug!("lift fallback at base vertex {i}");
                choice.splits[i] = again[i].ok_or(Error::ContainmentFailure { vertex: i })?;
            }
        }
        layout = s.layout(&choice)?;
    }
    let report = layout_overlaps(&layout, &p.tol);
    let unf = ToplessUnfolding { layout, choice, cases: table.into_iter().map(|t| t.0).collect(), stats, partition: part };
    Ok((unf, report))
}

/// Result of trying both tangent flips of a reflex fan on `P(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipTrial {
    pub left_safe: bool,
    pub right_safe: bool,
}

/// Try both flips of the up faces of fan `i` on the flat prismatoid.
pub fn flip_trial(p: &Prismatoid, i: usize) -> Result<FlipTrial> {
    let flat = p.at_height(0.0)?;
    let fan = a_fan(&flat, i)?;
    let (s_idx, t_idx) = fan
        .tangents
        .ok_or_else(|| Error::PetalNotApplicable(format!("fan at base vertex {i} has no up faces")))?;
    let st = PetalStructure::topless(&flat)?;
    let part = altitude_partition(&flat)?;
    let base: Vec<usize> = st.fans.iter().map(|_| 0).collect();
    let mut safe = [false; 2];
    for (slot, side) in [FlipSide::LeftTangent, FlipSide::RightTangent].into_iter().enumerate() {
        let mut splits = base.clone();
        splits[i] = side.split(s_idx, t_idx);
        let layout = st.layout(&PetalChoice { splits, top: None })?;
        safe[slot] = fans_contained(&st, &layout, &part, &flat.tol)[i];
    }
    Ok(FlipTrial { left_safe: safe[0], right_safe: safe[1] })
}

/// A flip of the up faces of fan `i` that keeps the fan inside its altitude
/// region; when both are safe, the side with a down B-neighbour wins, then
/// the left tangent.
pub fn safe_flip_side(p: &Prismatoid, i: usize) -> Result<FlipSide> {
    let trial = flip_trial(p, i)?;
    let fan = a_fan(&p.at_height(0.0)?, i)?;
    match (trial.left_safe, trial.right_safe) {
        (true, false) => Ok(FlipSide::LeftTangent),
        (false, true) => Ok(FlipSide::RightTangent),
        (true, true) if fan.next_b_up && !fan.prev_b_up => Ok(FlipSide::RightTangent),
        (true, true) => Ok(FlipSide::LeftTangent),
        (false, false) => Err(Error::NoSafeFlip { vertex: i }),
    }
}
