//! The Majorana map between Dicke amplitudes and constellations.
//!
//! A state `sum_m a_m |j,m>` has the polynomial
//! `P(z) = sum_m (-1)^{j-m} sqrt(C(2j, j-m)) a_m z^{j+m}` whose roots are the
//! stereographic images `z = tan(theta/2) e^{i phi}` of its stars. Missing
//! degree means roots at infinity, i.e. stars on the south pole.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::constellation::{Constellation, Star};
use super::poly;
use super::state::SpinState;
use crate::angular::factorial::binomial;
use crate::error::Result;

fn coefficient_weight(n: usize, k: usize) -> f64 {
    // (-1)^{j-m} sqrt(C(2j, j-m)) with k = j + m, j - m = n - k
    let s = if (n - k).is_multiple_of(2) { 1.0 } else { -1.0 };
    s * binomial(n, k).sqrt()
}

/// Ascending coefficients of the Majorana polynomial.
pub fn majorana_polynomial(psi: &SpinState) -> Vec<Complex64> {
    let n = psi.spin().twice() as usize;
    psi.amps()
        .iter()
        .enumerate()
        .map(|(k, &a)| a * coefficient_weight(n, k))
        .collect()
}

/// Stars of a state. Roots at zero become north-pole stars, the degree
/// deficit becomes south-pole stars.
pub fn state_to_constellation(psi: &SpinState) -> Constellation {
    let coeffs = majorana_polynomial(psi);
    let (finite, n_zero, n_inf) = poly::roots(&coeffs);
    let mut stars = Vec::with_capacity(psi.spin().twice() as usize);
    stars.extend(std::iter::repeat_n(Star::north(), n_zero));
    stars.extend(
        finite
            .iter()
            .map(|z| Star::new(2.0 * z.norm().atan(), z.arg())),
    );
    stars.extend(std::iter::repeat_n(Star::south(), n_inf));
    Constellation::new(stars).expect("2j stars for a valid spin")
}

/// Normalized state whose Majorana roots are the given stars.
///
/// Expands `prod_i (cos(theta_i/2) z - sin(theta_i/2) e^{i phi_i})`, which
/// handles south-pole stars without special cases, then divides out the
/// Majorana weights.
pub fn constellation_to_state(c: &Constellation) -> SpinState {
    let factors: Vec<(Complex64, Complex64)> = c
        .stars()
        .iter()
        .map(|s| {
            let (h_sin, h_cos) = (s.theta / 2.0).sin_cos();
            let h_cos = if (s.theta - PI).abs() < 1e-15 {
                0.0
            } else {
                h_cos
            };
            (
                Complex64::new(h_cos, 0.0),
                Complex64::from_polar(h_sin, s.phi),
            )
        })
        .collect();
    let coeffs = poly::from_homogeneous_roots(&factors);
    let n = c.len();
    let amps = coeffs
        .iter()
        .enumerate()
        .map(|(k, &ck)| ck / coefficient_weight(n, k))
        .collect();
    SpinState::new(c.spin(), amps).expect("product of unit-norm factors is nonzero")
}

/// Convenience: constellation from `(theta, phi)` pairs straight to a state.
pub fn state_from_angles(pairs: &[(f64, f64)]) -> Result<SpinState> {
    Ok(constellation_to_state(&Constellation::from_angles(pairs)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angular::{HalfInt, Spin};

    #[test]
    fn dicke_constellations() {
        for tj in 1..=12u32 {
            let j = Spin::from_twice(tj);
            for m in j.projections() {
                let c = state_to_constellation(&SpinState::dicke(j, m));
                let k = ((tj as i32 - m.twice()) / 2) as usize; // k = j - m
                let north = c.stars().iter().filter(|s| s.theta == 0.0).count();
                let south = c.stars().iter().filter(|s| s.theta == PI).count();
                // |j, j-k> has 2j-k stars north, k south
                assert_eq!(north, tj as usize - k, "j={j} m={m:?}");
                assert_eq!(south, k);
            }
        }
    }

    #[test]
    fn spin_one_zero_is_antipodal() {
        let c = state_to_constellation(&SpinState::dicke(Spin::from_twice(2), HalfInt::ZERO));
        let mut t: Vec<f64> = c.stars().iter().map(|s| s.theta).collect();
        t.sort_by(f64::total_cmp);
        assert_eq!(t, vec![0.0, PI]);
    }

    #[test]
    fn ghz_is_equatorial_triangle() {
        let j = Spin::from_twice(3);
        let psi = SpinState::from_real(j, &[1.0, 0.0, 0.0, 1.0]).unwrap();
        let c = state_to_constellation(&psi);
        for s in c.stars() {
            assert!((s.theta - PI / 2.0).abs() < 1e-12);
        }
        let mut phis: Vec<f64> = c.stars().iter().map(|s| s.phi).collect();
        phis.sort_by(f64::total_cmp);
        for w in phis.windows(2) {
            assert!((w[1] - w[0] - 2.0 * PI / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn tetrahedron_amplitudes() {
        let tt = 2.0 * (1.0 / 3f64.sqrt()).acos();
        let psi = state_from_angles(&[
            (0.0, 0.0),
            (tt, 0.0),
            (tt, 2.0 * PI / 3.0),
            (tt, 4.0 * PI / 3.0),
        ])
        .unwrap();
        let expect = SpinState::from_real(
            Spin::from_twice(4),
            &[0.0, (2.0f64 / 3.0).sqrt(), 0.0, 0.0, 1.0 / 3f64.sqrt()],
        )
        .unwrap();
        assert!(psi.equal_up_to_phase(&expect, 1e-14));
        // the stated phase convention gives real non-negative amplitudes here
        let canon = psi.canonical_phase();
        for (a, b) in canon.amps().iter().zip(expect.amps()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn all_north_is_top_state() {
        for tj in 1..=8 {
            let j = Spin::from_twice(tj);
            let c = Constellation::new(vec![Star::north(); tj as usize]).unwrap();
            assert!(constellation_to_state(&c)
                .equal_up_to_phase(&SpinState::dicke(j, HalfInt::from(j)), 1e-15));
        }
    }

    #[test]
    fn coherent_state_stars_coincide() {
        let psi = SpinState::coherent(Spin::from_twice(2), 1.1, 0.7);
        let c = state_to_constellation(&psi);
        for s in c.stars() {
            assert!(s.angle_to(Star::new(1.1, 0.7)) < 1e-7);
        }
    }
}
