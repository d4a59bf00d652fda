use std::f64::consts::{PI, TAU};

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::Serialize;

use crate::angular::factorial::binomial;
use crate::optim::{nelder_mead, NelderMeadOptions};
use crate::phasespace::husimi_eval;
use crate::stellar::{SpinState, Star};

const COARSE_THETA: usize = 64;
const COARSE_PHI: usize = 128;
const REFINE_CANDIDATES: usize = 8;

/// `(<J_x>, <J_y>, <J_z>)` from the ladder-operator matrix elements.
pub fn spin_expectation(psi: &SpinState) -> [f64; 3] {
    let j = psi.spin().value();
    let a = psi.amps();
    let mut jz = 0.0;
    let mut jp = Complex64::new(0.0, 0.0);
    for k in 0..a.len() {
        let m = k as f64 - j;
        jz += m * a[k].norm_sqr();
        if k + 1 < a.len() {
            // <m+1| J+ |m>
            jp += a[k + 1].conj() * a[k] * (j * (j + 1.0) - m * (m + 1.0)).sqrt();
        }
    }
    [jp.re, jp.im, jz]
}

/// Linear entropy `(1 - |<J>/j|^2) / 2` of one qubit of the symmetric
/// `2j`-qubit state.
pub fn linear_entropy_one_qubit(psi: &SpinState) -> f64 {
    let j = psi.spin().value();
    let v = spin_expectation(psi);
    let r2 = v.iter().map(|x| x * x).sum::<f64>() / (j * j);
    (0.5 * (1.0 - r2)).clamp(0.0, 0.5)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct HusimiMax {
    pub theta: f64,
    pub phi: f64,
    pub value: f64,
}

/// Global maximum of the Husimi function: coarse grid, then local
/// refinement from the best cells.
pub fn husimi_max(psi: &SpinState) -> HusimiMax {
    let n = psi.spin().twice() as usize;
    let a = psi.amps();
    let dt = PI / COARSE_THETA as f64;
    let dp = TAU / COARSE_PHI as f64;
    let mut cells = Vec::with_capacity(COARSE_THETA * COARSE_PHI);
    let mut b = vec![Complex64::new(0.0, 0.0); n + 1];
    for i in 0..COARSE_THETA {
        let theta = (i as f64 + 0.5) * dt;
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        for k in 0..=n {
            b[k] = a[k] * binomial(n, k).sqrt() * c.powi(k as i32) * s.powi((n - k) as i32);
        }
        for l in 0..COARSE_PHI {
            let phi = l as f64 * dp;
            // <theta phi|psi> = sum_k b_k e^{-i (n-k) phi}, Horner in e^{-i phi}
            let w = Complex64::from_polar(1.0, -phi);
            let z = b
                .iter()
                .fold(Complex64::new(0.0, 0.0), |acc, &bk| acc * w + bk);
            cells.push((z.norm_sqr(), theta, phi));
        }
    }
    cells.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut best = HusimiMax {
        theta: cells[0].1,
        phi: cells[0].2,
        value: cells[0].0,
    };
    let opts = NelderMeadOptions {
        step: 0.5 * dt,
        f_tol: 1e-16,
        max_iters: 500,
        max_restarts: 2,
    };
    for &(_, theta, phi) in cells.iter().take(REFINE_CANDIDATES) {
        let p0 = Star::new(theta, phi).to_vec();
        let e_t = Vector3::new(
            theta.cos() * phi.cos(),
            theta.cos() * phi.sin(),
            -theta.sin(),
        );
        let e_p = Vector3::new(-phi.sin(), phi.cos(), 0.0);
        let at = |x: &[f64]| Star::from_vec(&(p0 + e_t * x[0] + e_p * x[1]).normalize());
        let f = |x: &[f64]| {
            let s = at(x);
            -husimi_eval(psi, s.theta, s.phi)
        };
        let r = nelder_mead(&f, &[0.0, 0.0], opts);
        if -r.value > best.value {
            let s = at(&r.x);
            best = HusimiMax {
                theta: s.theta,
                phi: s.phi,
                value: -r.value,
            };
        }
    }
    best
}

/// Geometric measure `1 - max Q`.
pub fn geometric_entanglement(psi: &SpinState) -> f64 {
    (1.0 - husimi_max(psi).value).clamp(0.0, 1.0)
}
