use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Legendre polynomial `P_l(x)` by the three-term upward recurrence.
pub fn legendre_p(l: usize, x: f64) -> Result<f64> {
    if x.is_nan() || x.abs() > 1.0 + 1e-12 {
        return Err(Error::Domain(x));
    }
    Ok(legendre_unchecked(l, x))
}

pub(crate) fn legendre_unchecked(l: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if l == 0 {
        return p0;
    }
    for k in 1..l {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Orthonormal associated Legendre functions `N_lm P_l^m(cos t)` for
/// `0 <= m <= l <= l_max`, Condon-Shortley phase included.
///
/// Stored triangularly: entry `(l, m)` lives at `l * (l + 1) / 2 + m`. The
/// recurrence carries the normalization along, so nothing overflows for
/// large `l`.
#[derive(Clone, Debug)]
pub struct NormalizedLegendre {
    l_max: usize,
    values: Vec<f64>,
}

impl NormalizedLegendre {
    pub fn new(l_max: usize, cos_t: f64, sin_t: f64) -> Self {
        let mut values = vec![0.0; (l_max + 1) * (l_max + 2) / 2];
        Self::fill(l_max, cos_t, sin_t, &mut values);
        NormalizedLegendre { l_max, values }
    }

    /// Recomputes into an existing buffer of the right length.
    pub fn fill(l_max: usize, x: f64, s: f64, out: &mut [f64]) {
        let idx = |l: usize, m: usize| l * (l + 1) / 2 + m;
        let mut pmm = 1.0 / (4.0 * PI).sqrt();
        for m in 0..=l_max {
            if m > 0 {
                let mf = m as f64;
                pmm *= -((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * s;
            }
            out[idx(m, m)] = pmm;
            if m == l_max {
                break;
            }
            let mut p_prev = pmm;
            let mut p_cur = x * (2.0 * m as f64 + 3.0).sqrt() * pmm;
            out[idx(m + 1, m)] = p_cur;
            let m2 = (m * m) as f64;
            for l in (m + 2)..=l_max {
                let lf = l as f64;
                let a = ((4.0 * lf * lf - 1.0) / (lf * lf - m2)).sqrt();
                let b =
                    (((lf - 1.0) * (lf - 1.0) - m2) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
                let p_next = a * (x * p_cur - b * p_prev);
                out[idx(l, m)] = p_next;
                p_prev = p_cur;
                p_cur = p_next;
            }
        }
    }

    #[inline]
    pub fn get(&self, l: usize, m: usize) -> f64 {
        debug_assert!(m <= l && l <= self.l_max);
        self.values[l * (l + 1) / 2 + m]
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }
}

/// Orthonormal spherical harmonic `Y_{Kq}(theta, phi)` with Condon-Shortley phase.
pub fn spherical_harmonic(k: usize, q: i32, theta: f64, phi: f64) -> Complex64 {
    assert!(q.unsigned_abs() as usize <= k, "|q| must not exceed K");
    let table = NormalizedLegendre::new(k, theta.cos(), theta.sin());
    let aq = q.unsigned_abs() as usize;
    let y = Complex64::from_polar(table.get(k, aq), aq as f64 * phi);
    if q >= 0 {
        y
    } else if aq.is_multiple_of(2) {
        y.conj()
    } else {
        -y.conj()
    }
}
