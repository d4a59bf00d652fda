//! Comparison measures of nonclassicality and the catalog of named states.

mod anticoherence;
pub mod catalog;
mod entanglement;

use serde::Serialize;

pub use anticoherence::{anticoherence_measure, anticoherence_profile, coherent_order_one};
pub use catalog::{catalog, known_max, resolve, Definition, NamedState};
pub use entanglement::{
    geometric_entanglement, husimi_max, linear_entropy_one_qubit, spin_expectation, HusimiMax,
};

use crate::angular::Spin;
use crate::error::Result;
use crate::phasespace::negativity;
use crate::stellar::{coulomb_energy, state_to_constellation, SpinState};

#[derive(Clone, Debug, Serialize)]
pub struct MeasureReport {
    pub spin: Spin,
    pub negativity: f64,
    /// `A_M` for `M = 1..=2j`.
    pub anticoherence: Vec<f64>,
    /// `A_1` equals the coherent-state value, its maximum.
    pub a1_maximal: bool,
    pub geometric_entanglement: f64,
    pub linear_entropy: f64,
    /// `null` in JSON when stars coincide.
    pub coulomb_energy: f64,
}

pub fn measure_report(psi: &SpinState, rel_tol: f64) -> Result<MeasureReport> {
    let anticoherence = anticoherence_profile(psi);
    let a1_maximal = (anticoherence[0] - coherent_order_one(psi.spin().twice())).abs() < 1e-10;
    Ok(MeasureReport {
        spin: psi.spin(),
        negativity: negativity(psi, rel_tol)?,
        anticoherence,
        a1_maximal,
        geometric_entanglement: geometric_entanglement(psi),
        linear_entropy: linear_entropy_one_qubit(psi),
        coulomb_energy: coulomb_energy(&state_to_constellation(psi)),
    })
}
