//! Spin phase space: the SU(2) Wigner kernel, Wigner and Husimi functions,
//! product quadrature on the sphere and the negativity functional.

pub mod grid;
pub mod kernel;
pub mod multipole;
pub mod negativity;
pub mod trig;
pub mod wigner;

pub use grid::{pairwise_sum, SphereGrid};
pub use kernel::{kernel_spectrum, KernelSpectrum};
pub use multipole::{multipole_coeffs, MultipoleCoeffs, WignerSeries};
pub use negativity::{
    coherent_negativity_scan, default_fixed_panels, negativity, negativity_fixed,
    negativity_of_series, negativity_on_grid, negativity_report, CoherentScanRow,
    NegativityOptions, NegativityReport, DEFAULT_REL_TOL, MAX_REFINEMENTS,
};
pub use trig::TrigPoly;
pub use wigner::{
    husimi_eval, overlap_via_traciality, wigner_at, wigner_diagonal_at, wigner_eval, WignerField,
};
