//! Exact angular-momentum arithmetic: spins, Clebsch-Gordan coefficients,
//! Legendre functions, spherical harmonics and rotation matrices.

pub mod clebsch;
pub mod factorial;
pub mod legendre;
pub mod quadrature;
pub mod rotation;
pub mod spin;

pub use clebsch::{clebsch_gordan, clebsch_gordan_f64, SignedSqrt};
pub use legendre::{legendre_p, spherical_harmonic, NormalizedLegendre};
pub use quadrature::gauss_legendre;
pub use rotation::{small_d_matrix, wigner_big_d, wigner_small_d};
pub use spin::{HalfInt, Spin, MAX_TWICE_J};
