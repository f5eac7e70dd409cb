//! Unfolding algorithms. Every routine returns a [`Layout`].

pub mod afan;
pub mod angles;
pub mod band;
pub mod heuristic;
pub mod layout;
pub mod nonobtuse;
pub mod petal;
pub mod topless;
pub mod tree;

pub use afan::{a_fan, AFan, ChainClass};
pub use angles::{angle_monotonicity_check, chain_angle_facts_check, AngleMonotonicityReport, ChainFactsReport};
pub use band::{band_unfolding, band_unfolding_with, cut_top_vertex, lateral_edge, lateral_edge_count, BandAttach};
pub use heuristic::{obtuse_corner, obtuse_turn_choice, obtuse_turn_split};
pub use layout::{develop, FaceTag, Layout, PlacedFace, RootFrame, Tree};
pub use nonobtuse::{
    check_nonobtuse, diamonds_in_regions, petal_unfold_nonobtuse, petal_unfold_nonobtuse_with, top_in_v_region,
};
pub use petal::{enumerate_petal_unfoldings, PetalChoice, PetalStructure, DEFAULT_PETAL_CAP};
pub use topless::{
    dispatch, fans_contained, flip_trial, petal_unfold_topless, petal_unfold_topless_report, safe_flip_side, DispatchCase, DispatchStats, FlipSide, FlipTrial,
    ToplessUnfolding,
};
pub use tree::{spanning_tree_unfoldings, TreeUnfolding, DEFAULT_TREE_CAP};
