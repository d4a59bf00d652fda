//! Rotation-invariant geometry of constellations: the Gram (`A A^T`)
//! spectrum, rotational equivalence, and Coulomb energy.

use nalgebra::{Matrix3, Rotation3, Vector3};
use serde::{Deserialize, Serialize};

use super::assignment::min_cost_assignment;
use super::constellation::Constellation;

/// Eigenvalues of `A A^T`, where the columns of `A` are the Cartesian star
/// vectors. Sorted descending; they sum to the number of stars.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GramSpectrum(pub [f64; 3]);

impl GramSpectrum {
    pub fn max_abs_diff(&self, other: &GramSpectrum) -> f64 {
        (0..3)
            .map(|i| (self.0[i] - other.0[i]).abs())
            .fold(0.0, f64::max)
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }
}

pub fn gram_spectrum(c: &Constellation) -> GramSpectrum {
    let mut g = Matrix3::<f64>::zeros();
    for v in c.vectors() {
        g += v * v.transpose();
    }
    let eig = g.symmetric_eigenvalues();
    let mut e = [eig[0].max(0.0), eig[1].max(0.0), eig[2].max(0.0)];
    e.sort_by(|a, b| b.total_cmp(a));
    GramSpectrum(e)
}

/// Best rotation (Kabsch) taking the points `from[i]` onto `to[i]`.
fn kabsch(from: &[Vector3<f64>], to: &[Vector3<f64>]) -> Rotation3<f64> {
    let mut h = Matrix3::<f64>::zeros();
    for (a, b) in from.iter().zip(to) {
        h += b * a.transpose();
    }
    let svd = h.svd(true, true);
    let (u, vt) = (svd.u.unwrap(), svd.v_t.unwrap());
    let d = (u * vt).determinant().signum();
    let fix = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, d));
    Rotation3::from_matrix_unchecked(u * fix * vt)
}

/// Rotation taking unit vectors `a -> p` and `b -> q` as closely as possible,
/// built from orthonormal frames.
fn frame_rotation(
    a: &Vector3<f64>,
    b: &Vector3<f64>,
    p: &Vector3<f64>,
    q: &Vector3<f64>,
) -> Option<Rotation3<f64>> {
    let frame = |x: &Vector3<f64>, y: &Vector3<f64>| -> Option<Matrix3<f64>> {
        let e1 = x.normalize();
        let cross = x.cross(y);
        if cross.norm() < 1e-9 {
            return None;
        }
        let e3 = cross.normalize();
        let e2 = e3.cross(&e1);
        Some(Matrix3::from_columns(&[e1, e2, e3]))
    };
    let f1 = frame(a, b)?;
    let f2 = frame(p, q)?;
    Some(Rotation3::from_matrix_unchecked(f2 * f1.transpose()))
}

fn residual_after(
    r: &Rotation3<f64>,
    src: &[Vector3<f64>],
    dst: &[Vector3<f64>],
) -> (f64, Vec<usize>) {
    let n = src.len();
    let moved: Vec<Vector3<f64>> = src.iter().map(|v| r * v).collect();
    let cost: Vec<f64> = (0..n)
        .flat_map(|i| (0..n).map(move |k| (i, k)))
        .map(|(i, k)| (moved[i] - dst[k]).norm_squared())
        .collect();
    let assign = min_cost_assignment(n, &cost);
    let worst = (0..n)
        .map(|i| (moved[i] - dst[assign[i]]).norm())
        .fold(0.0, f64::max);
    (worst, assign)
}

/// Smallest achievable worst-star distance between `c1` rotated and `c2`,
/// over rotations seeded by mapping a reference star pair of `c1` onto every
/// compatible pair of `c2`, each refined by assignment + Kabsch.
pub fn alignment_residual(c1: &Constellation, c2: &Constellation) -> f64 {
    assert_eq!(c1.len(), c2.len(), "star counts differ");
    let src = c1.vectors();
    let dst = c2.vectors();
    let n = src.len();
    let a = src[0];
    let b_idx = (1..n).find(|&i| a.cross(&src[i]).norm() > 1e-6);
    let mut best = f64::INFINITY;
    // axis seeds cover (nearly) collinear constellations on either side
    for p in &dst {
        let r = Rotation3::rotation_between(&a, p).unwrap_or_else(|| {
            let perp = if a.x.abs() < 0.9 {
                Vector3::x()
            } else {
                Vector3::y()
            };
            Rotation3::from_axis_angle(
                &nalgebra::Unit::new_normalize(a.cross(&perp)),
                std::f64::consts::PI,
            )
        });
        let (res0, assign) = residual_after(&r, &src, &dst);
        let matched: Vec<Vector3<f64>> = assign.iter().map(|&k| dst[k]).collect();
        let (res1, _) = residual_after(&kabsch(&src, &matched), &src, &dst);
        best = best.min(res0.min(res1));
    }
    if let Some(bi) = b_idx {
        let b = src[bi];
        let ab = a.dot(&b);
        for (pi, p) in dst.iter().enumerate() {
            for (qi, q) in dst.iter().enumerate() {
                if pi == qi || (p.dot(q) - ab).abs() > 0.05 {
                    continue;
                }
                let Some(r0) = frame_rotation(&a, &b, p, q) else {
                    continue;
                };
                let (res0, assign) = residual_after(&r0, &src, &dst);
                if res0 > 0.5 {
                    continue;
                }
                let matched: Vec<Vector3<f64>> = assign.iter().map(|&k| dst[k]).collect();
                let r1 = kabsch(&src, &matched);
                let (res1, _) = residual_after(&r1, &src, &dst);
                best = best.min(res0.min(res1));
            }
        }
    }
    best
}

/// Two-stage equivalence test: distinct Gram spectra prove the constellations
/// differ; otherwise an explicit rotation must align them within `tol`.
pub fn constellations_equivalent(c1: &Constellation, c2: &Constellation, tol: f64) -> bool {
    if c1.len() != c2.len() {
        return false;
    }
    if gram_spectrum(c1).max_abs_diff(&gram_spectrum(c2)) > tol {
        return false;
    }
    alignment_residual(c1, c2) < tol
}

/// `sum_{i<k} 1 / |v_i - v_k|`; `+inf` when two stars coincide.
pub fn coulomb_energy(c: &Constellation) -> f64 {
    let v = c.vectors();
    let mut e = 0.0;
    for i in 0..v.len() {
        for k in (i + 1)..v.len() {
            let d = (v[i] - v[k]).norm();
            if d < 1e-12 {
                return f64::INFINITY;
            }
            e += 1.0 / d;
        }
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stellar::rotate::random_rotation;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    fn tetra() -> Constellation {
        let tt = 2.0 * (1.0 / 3f64.sqrt()).acos();
        Constellation::from_angles(&[
            (0.0, 0.0),
            (tt, 0.0),
            (tt, 2.0 * PI / 3.0),
            (tt, 4.0 * PI / 3.0),
        ])
        .unwrap()
    }

    fn random_constellation(rng: &mut impl Rng, n: usize) -> Constellation {
        let pairs: Vec<(f64, f64)> = (0..n)
            .map(|_| {
                (
                    (rng.gen::<f64>() * 2.0 - 1.0).acos(),
                    rng.gen::<f64>() * 2.0 * PI,
                )
            })
            .collect();
        Constellation::from_angles(&pairs).unwrap()
    }

    #[test]
    fn nearly_antipodal_matches_exact_pair() {
        let exact = Constellation::from_angles(&[(0.0, 0.0), (PI, 0.0)]).unwrap();
        let near = Constellation::from_angles(&[(1.0, 2.0), (PI - 1.0 + 2e-5, 2.0 + PI)]).unwrap();
        assert!(constellations_equivalent(&near, &exact, 1e-3));
        assert!(constellations_equivalent(&exact, &near, 1e-3));
    }

    #[test]
    fn spectra_by_hand() {
        let ap = Constellation::from_angles(&[(0.0, 0.0), (PI, 0.0)]).unwrap();
        let s = gram_spectrum(&ap).0;
        assert!((s[0] - 2.0).abs() < 1e-14 && s[1].abs() < 1e-14 && s[2].abs() < 1e-14);
        let s = gram_spectrum(&tetra()).0;
        for e in s {
            assert!((e - 4.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn spectrum_rotation_invariant_and_trace() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for n in 2..10 {
            let c = random_constellation(&mut rng, n);
            let s = gram_spectrum(&c);
            assert!((s.sum() - n as f64).abs() < 1e-10);
            let r = random_rotation(&mut rng);
            assert!(s.max_abs_diff(&gram_spectrum(&c.rotated(&r))) < 1e-10);
        }
    }

    #[test]
    fn equivalence() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for n in 2..10 {
            let c = random_constellation(&mut rng, n);
            let r = random_rotation(&mut rng);
            let mut rotated: Vec<_> = c.rotated(&r).stars().to_vec();
            rotated.reverse();
            let c2 = Constellation::new(rotated).unwrap();
            assert!(constellations_equivalent(&c, &c2, 1e-6), "n={n}");
            let other = random_constellation(&mut rng, n);
            assert!(!constellations_equivalent(&c, &other, 1e-6), "n={n}");
        }
        let square = Constellation::from_angles(&[
            (PI / 2.0, 0.0),
            (PI / 2.0, PI / 2.0),
            (PI / 2.0, PI),
            (PI / 2.0, 1.5 * PI),
        ])
        .unwrap();
        assert!(!constellations_equivalent(&tetra(), &square, 1e-3));
        // mirror images share a spectrum but are not rotations of each other
        let chiral = random_constellation(&mut rng, 5);
        let mirrored = Constellation::from_vectors(
            &chiral
                .vectors()
                .iter()
                .map(|v| Vector3::new(v.x, v.y, -v.z))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        assert!(gram_spectrum(&chiral).max_abs_diff(&gram_spectrum(&mirrored)) < 1e-12);
        assert!(!constellations_equivalent(&chiral, &mirrored, 1e-6));
    }

    #[test]
    fn degenerate_axes() {
        let a = Constellation::from_angles(&[(0.0, 0.0), (0.0, 0.0), (PI, 0.0)]).unwrap();
        let b =
            Constellation::from_angles(&[(PI / 2.0, 1.0), (PI / 2.0, 1.0), (PI / 2.0, 1.0 + PI)])
                .unwrap();
        assert!(constellations_equivalent(&a, &b, 1e-9));
        let c = Constellation::from_angles(&[(0.0, 0.0), (PI, 0.0), (PI, 0.0)]).unwrap();
        assert!(constellations_equivalent(&a, &c, 1e-9));
    }

    #[test]
    fn coulomb_values() {
        let ap = Constellation::from_angles(&[(0.0, 0.0), (PI, 0.0)]).unwrap();
        assert!((coulomb_energy(&ap) - 0.5).abs() < 1e-15);
        assert!((coulomb_energy(&tetra()) - 6.0 / (8.0f64 / 3.0).sqrt()).abs() < 1e-12);
        let oct = Constellation::from_angles(&[
            (0.0, 0.0),
            (PI, 0.0),
            (PI / 2.0, 0.0),
            (PI / 2.0, PI / 2.0),
            (PI / 2.0, PI),
            (PI / 2.0, 1.5 * PI),
        ])
        .unwrap();
        assert!((coulomb_energy(&oct) - (1.5 + 12.0 / 2f64.sqrt())).abs() < 1e-12);
        let coincident = Constellation::from_angles(&[(1.0, 1.0), (1.0, 1.0)]).unwrap();
        assert!(coulomb_energy(&coincident).is_infinite());
    }
}
