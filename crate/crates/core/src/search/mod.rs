//! Multi-start maximization of Wigner negativity over constellations, the
//! constrained families (square pyramid, two triangles, tetrahedron snap,
//! the spin-1 and spin-3/2 families) and the Thomson problem.

mod engine;
mod gauge;
mod sweep;

pub use engine::{
    maximize_negativity, maximize_with_tetra_snap, minimize_coulomb, minimize_negativity, polish,
    ClusterSummary, Goal, PolishReport, SearchOutcome, CLUSTER_TOL, POLISH_BOX,
};
pub use gauge::{gauge_rotation, GaugeFixedParams};
pub use sweep::{
    linspace, spin32_csv, sweep_pyramid, sweep_spin1_family, sweep_spin32_family,
    sweep_two_triangles, Spin32Point, Sweep1d, TwoTrianglesSweep,
};
