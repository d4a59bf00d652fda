use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::trig::TrigPoly;
use crate::angular::{clebsch_gordan, HalfInt, NormalizedLegendre, Spin, MAX_TWICE_J};
use crate::stellar::SpinState;

/// Float table of `sqrt((2K+1)/(2j+1)) C^{j,m+q}_{jm;Kq}` for one spin,
/// indexed by `(K, q, k)` with `k = j + m`.
pub(crate) struct CgTable {
    dim: usize,
    values: Vec<f64>,
}

impl CgTable {
    fn build(spin: Spin) -> Self {
        let tj = spin.twice() as i32;
        let dim = spin.dim();
        let mut values = vec![0.0; dim * dim * dim];
        for kk in 0..=tj {
            let big_k = Spin::from_twice(2 * kk as u32);
            let scale = ((2 * kk + 1) as f64 / dim as f64).sqrt();
            for q in -kk..=kk {
                for k in 0..dim as i32 {
                    let m2 = 2 * k - tj;
                    let mp2 = m2 + 2 * q;
                    if mp2.abs() > tj {
                        continue;
                    }
                    let c = clebsch_gordan(
                        spin,
                        HalfInt::from_twice(m2),
                        big_k,
                        HalfInt::from_twice(2 * q),
                        spin,
                        HalfInt::from_twice(mp2),
                    );
                    values[Self::slot(dim, kk, q, k)] = scale * c.to_f64();
                }
            }
        }
        CgTable { dim, values }
    }

    #[inline]
    fn slot(dim: usize, kk: i32, q: i32, k: i32) -> usize {
        ((kk * kk + kk + q) as usize) * dim + k as usize
    }

    #[inline]
    pub(crate) fn get(&self, kk: i32, q: i32, k: i32) -> f64 {
        self.values[Self::slot(self.dim, kk, q, k)]
    }

    /// Cached per spin; built once from exact coefficients.
    pub(crate) fn for_spin(spin: Spin) -> &'static CgTable {
        static TABLES: OnceLock<Vec<OnceLock<CgTable>>> = OnceLock::new();
        let tables = TABLES.get_or_init(|| (0..=MAX_TWICE_J).map(|_| OnceLock::new()).collect());
        tables[spin.twice() as usize].get_or_init(|| CgTable::build(spin))
    }
}

/// Multipole expansion `rho_{Kq} = tr[rho T_{Kq}^dagger]` of a pure state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultipoleCoeffs {
    pub spin: Spin,
    /// `rho_{Kq}` at index `K^2 + K + q`.
    pub rho: Vec<Complex64>,
}

impl MultipoleCoeffs {
    #[inline]
    pub fn get(&self, k: usize, q: i32) -> Complex64 {
        assert!(q.unsigned_abs() as usize <= k && k <= self.spin.twice() as usize);
        self.rho[((k * k + k) as i64 + q as i64) as usize]
    }

    /// Weight `sum_q |rho_{Kq}|^2` of rank `K`.
    pub fn rank_weight(&self, k: usize) -> f64 {
        (-(k as i32)..=k as i32)
            .map(|q| self.get(k, q).norm_sqr())
            .sum()
    }

    /// `sum |rho_{Kq}|^2`, equal to `tr rho^2`.
    pub fn purity(&self) -> f64 {
        self.rho.iter().map(|z| z.norm_sqr()).sum()
    }
}

pub fn multipole_coeffs(psi: &SpinState) -> MultipoleCoeffs {
    let spin = psi.spin();
    let table = CgTable::for_spin(spin);
    let tj = spin.twice() as i32;
    let a = psi.amps();
    let mut rho = Vec::with_capacity(spin.dim() * spin.dim());
    for kk in 0..=tj {
        for q in -kk..=kk {
            let (lo, hi) = (0.max(-q), tj.min(tj - q));
            let mut t = Complex64::new(0.0, 0.0);
            for k in lo..=hi {
                t += a[k as usize] * a[(k + q) as usize].conj() * table.get(kk, q, k);
            }
            rho.push(t.conj());
        }
    }
    MultipoleCoeffs { spin, rho }
}

/// Per-latitude Fourier form of the Wigner function.
///
/// Holds `sqrt(4 pi/(2j+1)) rho_{Kq}` for `q >= 0` in the triangular layout of
/// [`NormalizedLegendre`]; along a latitude `W = c_0 + 2 Re sum_q c_q e^{i q phi}`.
#[derive(Clone, Debug)]
pub struct WignerSeries {
    spin: Spin,
    coef: Vec<Complex64>,
}

impl WignerSeries {
    pub fn new(m: &MultipoleCoeffs) -> Self {
        let tj = m.spin.twice() as usize;
        let pref = (4.0 * PI / m.spin.dim() as f64).sqrt();
        let mut coef = vec![Complex64::new(0.0, 0.0); (tj + 1) * (tj + 2) / 2];
        for k in 0..=tj {
            for q in 0..=k {
                coef[k * (k + 1) / 2 + q] = m.get(k, q as i32) * pref;
            }
        }
        WignerSeries { spin: m.spin, coef }
    }

    pub fn from_state(psi: &SpinState) -> Self {
        Self::new(&multipole_coeffs(psi))
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    /// True when no `q != 0` multipole survives, i.e. `W` depends on `theta` only.
    pub fn is_axial(&self) -> bool {
        let tj = self.spin.twice() as usize;
        let scale = self.coef.iter().map(|c| c.norm()).fold(0.0, f64::max);
        (0..=tj).all(|k| (1..=k).all(|q| self.coef[k * (k + 1) / 2 + q].norm() <= 1e-14 * scale))
    }

    pub fn legendre_len(&self) -> usize {
        self.coef.len()
    }

    /// Azimuthal trigonometric polynomial at polar angle with the given
    /// cosine and sine. `buf` needs [`Self::legendre_len`] entries.
    pub fn latitude(&self, cos_t: f64, sin_t: f64, buf: &mut [f64]) -> TrigPoly {
        let tj = self.spin.twice() as usize;
        NormalizedLegendre::fill(tj, cos_t, sin_t, buf);
        let mut cos_c = vec![0.0; tj + 1];
        let mut sin_c = vec![0.0; tj + 1];
        for q in 0..=tj {
            let mut c = Complex64::new(0.0, 0.0);
            for k in q..=tj {
                let i = k * (k + 1) / 2 + q;
                c += self.coef[i] * buf[i];
            }
            if q == 0 {
                cos_c[0] = c.re;
            } else {
                cos_c[q] = 2.0 * c.re;
                sin_c[q] = -2.0 * c.im;
            }
        }
        TrigPoly::new(cos_c, sin_c)
    }

    pub fn eval(&self, theta: f64, phi: f64) -> f64 {
        let mut buf = vec![0.0; self.legendre_len()];
        self.latitude(theta.cos(), theta.sin(), &mut buf).eval(phi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angular::clebsch_gordan_f64;
    use crate::stellar::state_from_angles;
    use rand::{Rng, SeedableRng};

    pub(crate) fn random_state(rng: &mut impl Rng, tj: u32) -> SpinState {
        let amps = (0..=tj)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        SpinState::new(Spin::from_twice(tj), amps).unwrap()
    }

    #[test]
    fn identity_multipole() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for tj in 1..=10 {
            let m = multipole_coeffs(&random_state(&mut rng, tj));
            let want = 1.0 / ((tj + 1) as f64).sqrt();
            assert!((m.get(0, 0) - want).norm() < 1e-14);
        }
    }

    #[test]
    fn hermiticity_and_purity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for tj in 1..=10 {
            let m = multipole_coeffs(&random_state(&mut rng, tj));
            for k in 0..=tj as usize {
                for q in 0..=k as i32 {
                    let s = if q % 2 == 0 { 1.0 } else { -1.0 };
                    assert!((m.get(k, -q) - m.get(k, q).conj() * s).norm() < 1e-12);
                }
            }
            assert!((m.purity() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn top_state_single_term() {
        for tj in 1..=8u32 {
            let j = Spin::from_twice(tj);
            let top = HalfInt::from(j);
            let m = multipole_coeffs(&SpinState::dicke(j, top));
            for k in 0..=tj as usize {
                let cg = clebsch_gordan_f64(
                    j,
                    top,
                    Spin::from_twice(2 * k as u32),
                    HalfInt::ZERO,
                    j,
                    top,
                );
                let want = ((2 * k + 1) as f64 / j.dim() as f64).sqrt() * cg;
                for q in -(k as i32)..=k as i32 {
                    let expect = if q == 0 { want } else { 0.0 };
                    assert!((m.get(k, q) - expect).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn tetrahedron_has_no_dipole() {
        let tt = 2.0 * (1.0 / 3f64.sqrt()).acos();
        let psi = state_from_angles(&[
            (0.0, 0.0),
            (tt, 0.0),
            (tt, 2.0 * PI / 3.0),
            (tt, 4.0 * PI / 3.0),
        ])
        .unwrap();
        // independent check: <J> from ladder operators
        let a = psi.amps();
        let j = 2.0;
        let jz: f64 = (0..5).map(|k| (k as f64 - j) * a[k].norm_sqr()).sum();
        let jp: Complex64 = (0..4)
            .map(|k| {
                let m = k as f64 - j;
                a[k + 1].conj() * a[k] * (j * (j + 1.0) - m * (m + 1.0)).sqrt()
            })
            .sum();
        assert!(jz.abs() < 1e-14 && jp.norm() < 1e-14);
        let m = multipole_coeffs(&psi);
        assert!(m.rank_weight(1) < 1e-28);
    }
}
