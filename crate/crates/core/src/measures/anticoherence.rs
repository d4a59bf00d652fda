use crate::error::{Error, Result};
use crate::phasespace::multipole_coeffs;
use crate::stellar::SpinState;

/// Cumulative multipole weight `A_M = sum_{K=1}^{M} sum_q |rho_{Kq}|^2`.
pub fn anticoherence_measure(psi: &SpinState, order: usize) -> Result<f64> {
    let max = psi.spin().twice() as usize;
    if order == 0 || order > max {
        return Err(Error::OrderOutOfRange { order, max });
    }
    let m = multipole_coeffs(psi);
    Ok((1..=order).map(|k| m.rank_weight(k)).sum())
}

/// `A_1, ..., A_{2j}` in one pass.
pub fn anticoherence_profile(psi: &SpinState) -> Vec<f64> {
    let m = multipole_coeffs(psi);
    let mut acc = 0.0;
    (1..=psi.spin().twice() as usize)
        .map(|k| {
            acc += m.rank_weight(k);
            acc
        })
        .collect()
}

/// `A_1` of a coherent state, the largest value any state reaches.
pub fn coherent_order_one(twice_j: u32) -> f64 {
    let j = f64::from(twice_j) / 2.0;
    3.0 * j / ((2.0 * j + 1.0) * (j + 1.0))
}
