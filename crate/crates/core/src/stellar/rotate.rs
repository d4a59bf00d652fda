use nalgebra::{Rotation3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::state::SpinState;
use crate::angular::wigner_big_d;

/// z-y-z Euler angles of the active rotation `R_z(alpha) R_y(beta) R_z(gamma)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl EulerAngles {
    pub const IDENTITY: EulerAngles = EulerAngles {
        alpha: 0.0,
        beta: 0.0,
        gamma: 0.0,
    };

    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        EulerAngles { alpha, beta, gamma }
    }

    pub fn to_rotation(self) -> Rotation3<f64> {
        Rotation3::from_axis_angle(&Vector3::z_axis(), self.alpha)
            * Rotation3::from_axis_angle(&Vector3::y_axis(), self.beta)
            * Rotation3::from_axis_angle(&Vector3::z_axis(), self.gamma)
    }

    pub fn from_rotation(r: &Rotation3<f64>) -> Self {
        let m = r.matrix();
        let cb = m[(2, 2)].clamp(-1.0, 1.0);
        let beta = cb.acos();
        let sb = beta.sin();
        if sb > 1e-12 {
            EulerAngles {
                alpha: m[(1, 2)].atan2(m[(0, 2)]),
                beta,
                gamma: m[(2, 1)].atan2(-m[(2, 0)]),
            }
        } else if cb > 0.0 {
            EulerAngles {
                alpha: m[(1, 0)].atan2(m[(0, 0)]),
                beta: 0.0,
                gamma: 0.0,
            }
        } else {
            EulerAngles {
                alpha: (-m[(1, 0)]).atan2(m[(1, 1)]),
                beta: std::f64::consts::PI,
                gamma: 0.0,
            }
        }
    }
}

/// Applies `D^j(alpha, beta, gamma)`. The output constellation is the input
/// constellation rotated by `R_z(alpha) R_y(beta) R_z(gamma)`.
pub fn rotate_state(psi: &SpinState, euler: EulerAngles) -> SpinState {
    let d = wigner_big_d(psi.spin(), euler.alpha, euler.beta, euler.gamma);
    let n = psi.spin().dim();
    let amps: Vec<Complex64> = (0..n)
        .map(|r| (0..n).map(|c| d[(r, c)] * psi.amps()[c]).sum())
        .collect();
    SpinState::new(psi.spin(), amps).expect("unitary image of a unit vector")
}

pub fn rotate_state_by(psi: &SpinState, r: &Rotation3<f64>) -> SpinState {
    rotate_state(psi, EulerAngles::from_rotation(r))
}

/// Haar-uniform random rotation from a unit quaternion.
pub fn random_rotation<R: rand::Rng + ?Sized>(rng: &mut R) -> Rotation3<f64> {
    use rand_distr::{Distribution, StandardNormal};
    let q: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(rng));
    let uq = nalgebra::UnitQuaternion::from_quaternion(nalgebra::Quaternion::new(
        q[0], q[1], q[2], q[3],
    ));
    uq.to_rotation_matrix()
}
