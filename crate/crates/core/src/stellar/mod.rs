//! Majorana stellar representation: states, constellations, the map between
//! them, rigid rotations and rotation-invariant constellation geometry.

mod assignment;
pub mod constellation;
pub mod geometry;
pub mod majorana;
pub mod poly;
pub mod rotate;
pub mod state;

pub use assignment::min_cost_assignment;
pub use constellation::{Constellation, Star};
pub use geometry::{
    alignment_residual, constellations_equivalent, coulomb_energy, gram_spectrum, GramSpectrum,
};
pub use majorana::{
    constellation_to_state, majorana_polynomial, state_from_angles, state_to_constellation,
};
pub use rotate::{random_rotation, rotate_state, rotate_state_by, EulerAngles};
pub use state::SpinState;
