use num_complex::Complex64;
use serde::Serialize;

use super::grid::SphereGrid;
use super::kernel::KernelSpectrum;
use super::multipole::{multipole_coeffs, WignerSeries};
use crate::angular::{wigner_big_d, NormalizedLegendre};
use crate::error::{Error, Result};
use crate::io::fmt_sig;
use crate::stellar::SpinState;

/// Imaginary parts above this abort a grid evaluation.
pub const REALNESS_TOL: f64 = 1e-10;

/// Wigner function sampled on a [`SphereGrid`], row-major with theta outermost.
#[derive(Clone, Debug, Serialize)]
pub struct WignerField {
    pub twice_j: u32,
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    pub values: Vec<f64>,
    /// Largest `|Im W|` seen before the imaginary part was dropped.
    pub max_imag_residue: f64,
    #[serde(skip)]
    weights: Vec<f64>,
}

impl WignerField {
    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.values[i * self.phi.len() + k]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Quadrature of `f(W)` with the grid's measure weights.
    pub fn integrate_with(&self, f: impl Fn(f64) -> f64) -> f64 {
        let n_phi = self.phi.len();
        let rows: Vec<f64> = self
            .values
            .chunks(n_phi)
            .zip(&self.weights)
            .map(|(row, w)| {
                w * super::grid::pairwise_sum(&row.iter().map(|&v| f(v)).collect::<Vec<_>>())
            })
            .collect();
        super::grid::pairwise_sum(&rows)
    }

    /// `theta,phi,W` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,phi,W\n");
        for (i, t) in self.theta.iter().enumerate() {
            for (k, p) in self.phi.iter().enumerate() {
                out.push_str(&format!(
                    "{},{},{}\n",
                    fmt_sig(*t),
                    fmt_sig(*p),
                    fmt_sig(self.get(i, k))
                ));
            }
        }
        out
    }
}

fn check_grid(psi: &SpinState, grid: &SphereGrid) -> Result<()> {
    if grid.spin() != psi.spin() {
        return Err(Error::Dimension {
            expected: grid.spin().dim(),
            got: psi.spin().dim(),
        });
    }
    Ok(())
}

/// Evaluates `W = sqrt(4 pi/(2j+1)) sum_{Kq} rho_{Kq} Y_{Kq}` on every grid
/// node, keeping both signs of `q` so the imaginary part is a genuine check.
pub fn wigner_eval(psi: &SpinState, grid: &SphereGrid) -> Result<WignerField> {
    check_grid(psi, grid)?;
    let m = multipole_coeffs(psi);
    let tj = psi.spin().twice() as usize;
    let pref = (4.0 * std::f64::consts::PI / psi.spin().dim() as f64).sqrt();
    let n_phi = grid.n_phi();
    let phis: Vec<f64> = (0..n_phi).map(|k| grid.phi(k)).collect();
    let mut legendre = vec![0.0; (tj + 1) * (tj + 2) / 2];
    let mut values = Vec::with_capacity(grid.len());
    let mut residue: f64 = 0.0;
    let mut c = vec![Complex64::new(0.0, 0.0); 2 * tj + 1];
    for i in 0..grid.n_theta() {
        let (ct, st) = grid.cos_sin(i);
        NormalizedLegendre::fill(tj, ct, st, &mut legendre);
        for (slot, q) in c.iter_mut().zip(-(tj as i32)..=tj as i32) {
            let aq = q.unsigned_abs() as usize;
            let sign = if q < 0 && aq % 2 == 1 { -1.0 } else { 1.0 };
            *slot = (aq..=tj)
                .map(|k| m.get(k, q) * (sign * legendre[k * (k + 1) / 2 + aq]))
                .sum::<Complex64>()
                * pref;
        }
        for &phi in &phis {
            let w: Complex64 = c
                .iter()
                .zip(-(tj as i32)..=tj as i32)
                .map(|(cq, q)| cq * Complex64::from_polar(1.0, q as f64 * phi))
                .sum();
            residue = residue.max(w.im.abs());
            values.push(w.re);
        }
    }
    if residue > REALNESS_TOL {
        return Err(Error::Invalid(format!(
            "Wigner function has imaginary residue {residue:e}"
        )));
    }
    Ok(WignerField {
        twice_j: psi.spin().twice(),
        theta: grid.thetas().to_vec(),
        phi: phis,
        values,
        max_imag_residue: residue,
        weights: (0..grid.n_theta()).map(|i| grid.weight(i)).collect(),
    })
}

/// Single-point Wigner value through the multipole series.
pub fn wigner_at(psi: &SpinState, theta: f64, phi: f64) -> f64 {
    WignerSeries::from_state(psi).eval(theta, phi)
}

/// Single-point Wigner value through the rotated diagonal kernel,
/// `sum_m Delta_{j,m} |<j,m;n|psi>|^2`.
pub fn wigner_diagonal_at(psi: &SpinState, kernel: &KernelSpectrum, theta: f64, phi: f64) -> f64 {
    assert_eq!(kernel.spin, psi.spin());
    let d = wigner_big_d(psi.spin(), phi, theta, 0.0);
    let a = psi.amps();
    let n = a.len();
    (0..n)
        .map(|col| {
            let b: Complex64 = (0..n).map(|row| d[(row, col)].conj() * a[row]).sum();
            kernel.delta[col] * b.norm_sqr()
        })
        .sum()
}

/// Husimi function `|<theta, phi|psi>|^2`, peaked at the coherent state's own
/// direction in the star convention of the stellar module.
pub fn husimi_eval(psi: &SpinState, theta: f64, phi: f64) -> f64 {
    let coh = SpinState::coherent(psi.spin(), theta, phi);
    coh.inner(psi).norm_sqr()
}

/// `int W_1 W_2 d mu`; exact once the grid resolves degree `4j`.
pub fn overlap_via_traciality(
    psi1: &SpinState,
    psi2: &SpinState,
    grid: &SphereGrid,
) -> Result<f64> {
    if psi1.spin() != psi2.spin() {
        return Err(Error::Dimension {
            expected: psi1.spin().dim(),
            got: psi2.spin().dim(),
        });
    }
    let required = 2 * psi1.spin().twice() as usize + 1;
    if grid.n_theta() < required || grid.n_phi() < required {
        return Err(Error::UnderResolved {
            n_theta: grid.n_theta().min(grid.n_phi()),
            required,
        });
    }
    let w1 = wigner_eval(psi1, grid)?;
    let w2 = wigner_eval(psi2, grid)?;
    let prod: Vec<f64> = w1
        .values
        .iter()
        .zip(&w2.values)
        .map(|(a, b)| a * b)
        .collect();
    Ok(grid.integrate(&prod))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angular::{legendre_p, HalfInt, Spin};
    use crate::phasespace::kernel::kernel_spectrum;
    use crate::stellar::{rotate_state, EulerAngles};
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    fn random_state(rng: &mut impl Rng, tj: u32) -> SpinState {
        use rand_distr::{Distribution, StandardNormal};
        let amps = (0..=tj)
            .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
            .collect();
        SpinState::new(Spin::from_twice(tj), amps).unwrap()
    }

    #[test]
    fn dicke_matches_legendre_sum() {
        for tj in 1..=8u32 {
            let j = Spin::from_twice(tj);
            let k = kernel_spectrum(j);
            for m in j.projections() {
                let psi = SpinState::dicke(j, m);
                for &theta in &[0.0, 0.3, 1.2, 2.5, PI] {
                    let expect: f64 = (0..=tj)
                        .map(|l| {
                            let c = crate::angular::clebsch_gordan_f64(
                                j,
                                m,
                                Spin::from_twice(2 * l),
                                HalfInt::ZERO,
                                j,
                                m,
                            );
                            (2 * l + 1) as f64 / j.dim() as f64
                                * c
                                * legendre_p(l as usize, theta.cos()).unwrap()
                        })
                        .sum();
                    for &phi in &[0.0, 1.0, 4.0] {
                        assert!((wigner_at(&psi, theta, phi) - expect).abs() < 1e-12);
                    }
                }
                assert!((wigner_at(&psi, 0.0, 0.0) - k.get(m)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn dicke_azimuthal_variance() {
        let j = Spin::from_twice(6);
        let grid = SphereGrid::new(j, 13, 40);
        for m in j.projections() {
            let f = wigner_eval(&SpinState::dicke(j, m), &grid).unwrap();
            for i in 0..grid.n_theta() {
                let row: Vec<f64> = (0..grid.n_phi()).map(|k| f.get(i, k)).collect();
                let mean = row.iter().sum::<f64>() / row.len() as f64;
                let var = row.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / row.len() as f64;
                assert!(var < 1e-20);
            }
        }
    }

    #[test]
    fn spin_one_family_decomposition() {
        let j = Spin::from_twice(2);
        for &eta in &[0.0, 0.7, 1.9, PI] {
            let (c, s) = ((eta / 2.0).cos(), (eta / 2.0).sin());
            let psi = SpinState::from_real(j, &[0.0, s, 2f64.sqrt() * c]).unwrap();
            let n = 1.0 + c * c;
            for &(theta, phi) in &[(0.2f64, 0.1f64), (1.0, 2.0), (2.2, 4.0), (3.0, 5.5)] {
                let ct = theta.cos();
                let w11 = (1.0 - (5.0f64 / 8.0).sqrt()) / 3.0
                    + 0.5f64.sqrt() * ct
                    + 0.5 * 2.5f64.sqrt() * ct * ct;
                let w10 = (1.0 + 2.5f64.sqrt()) / 3.0 - 2.5f64.sqrt() * ct * ct;
                let wint = theta.sin() * (1.0 + 5f64.sqrt() * ct) * phi.cos();
                let expect = (2.0 * c * c * w11 + s * s * w10 + eta.sin() / 2f64.sqrt() * wint) / n;
                assert!(
                    (wigner_at(&psi, theta, phi) - expect).abs() < 1e-12,
                    "eta={eta}"
                );
            }
        }
    }

    #[test]
    fn realness_and_standardization() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for tj in 1..=12u32 {
            let j = Spin::from_twice(tj);
            let grid = SphereGrid::new(j, tj as usize + 1, 2 * tj as usize + 1);
            for _ in 0..20 {
                let f = wigner_eval(&random_state(&mut rng, tj), &grid).unwrap();
                assert!(f.max_imag_residue < 1e-10);
                assert!((f.integrate_with(|w| w) - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn routes_agree() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for tj in 1..=8u32 {
            let k = kernel_spectrum(Spin::from_twice(tj));
            for _ in 0..5 {
                let psi = random_state(&mut rng, tj);
                for _ in 0..10 {
                    let (t, p) = (rng.gen::<f64>() * PI, rng.gen::<f64>() * 2.0 * PI);
                    assert!(
                        (wigner_at(&psi, t, p) - wigner_diagonal_at(&psi, &k, t, p)).abs() < 1e-9
                    );
                }
            }
        }
    }

    #[test]
    fn traciality() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for tj in 1..=8u32 {
            let j = Spin::from_twice(tj);
            let grid = SphereGrid::new(j, 2 * tj as usize + 1, 2 * tj as usize + 1);
            for _ in 0..10 {
                let (a, b) = (random_state(&mut rng, tj), random_state(&mut rng, tj));
                let direct = a.inner(&b).norm_sqr();
                assert!((overlap_via_traciality(&a, &b, &grid).unwrap() - direct).abs() < 1e-10);
            }
            let self_overlap = overlap_via_traciality(
                &SpinState::dicke(j, HalfInt::from(j)),
                &SpinState::dicke(j, HalfInt::from(j)),
                &grid,
            )
            .unwrap();
            assert!((self_overlap - 1.0).abs() < 1e-10);
            let n = SpinState::coherent(j, 0.7, 1.1);
            let s = SpinState::coherent(j, PI - 0.7, PI + 1.1);
            assert!(overlap_via_traciality(&n, &s, &grid).unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn traciality_needs_resolution() {
        let j = Spin::from_twice(4);
        let grid = SphereGrid::new(j, 5, 20);
        let psi = SpinState::dicke(j, HalfInt::ZERO);
        assert!(matches!(
            overlap_via_traciality(&psi, &psi, &grid),
            Err(Error::UnderResolved { required: 9, .. })
        ));
        let other = SphereGrid::new(Spin::from_twice(3), 20, 20);
        assert!(wigner_eval(&psi, &other).is_err());
    }

    #[test]
    fn husimi() {
        let j = Spin::from_twice(5);
        let top = SpinState::dicke(j, HalfInt::from(j));
        assert!((husimi_eval(&top, 0.0, 0.3) - 1.0).abs() < 1e-14);
        assert!(husimi_eval(&top, PI, 0.3) < 1e-30);
        let psi = SpinState::coherent(j, 1.2, 2.3);
        assert!((husimi_eval(&psi, 1.2, 2.3) - 1.0).abs() < 1e-14);
        let grid = SphereGrid::new(j, 6, 11);
        let q: Vec<f64> = grid
            .nodes()
            .map(|(t, p, _)| husimi_eval(&psi, t, p))
            .collect();
        assert!((grid.integrate(&q) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rotation_covariance_pointwise() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(14);
        let psi = random_state(&mut rng, 5);
        let e = EulerAngles::new(0.4, 1.3, -2.0);
        let rotated = rotate_state(&psi, e);
        let r = e.to_rotation();
        for _ in 0..20 {
            let (t, p) = (rng.gen::<f64>() * PI, rng.gen::<f64>() * 2.0 * PI);
            let v = crate::stellar::Star::new(t, p).to_vec();
            let moved = crate::stellar::Star::from_vec(&(r * v));
            assert!(
                (wigner_at(&psi, t, p) - wigner_at(&rotated, moved.theta, moved.phi)).abs() < 1e-10
            );
        }
    }

    #[test]
    fn csv_rows() {
        let j = Spin::from_twice(4);
        let grid = SphereGrid::new(j, 3, 4);
        let f = wigner_eval(&SpinState::dicke(j, HalfInt::ZERO), &grid).unwrap();
        let csv = f.to_csv();
        assert_eq!(csv.lines().count(), 13);
        assert!(csv.starts_with("theta,phi,W\n"));
    }
}
