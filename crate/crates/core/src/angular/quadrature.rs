use std::f64::consts::PI;

use super::legendre::legendre_unchecked;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes ascending.
///
/// Newton iteration on `P_n` from the Chebyshev-like initial guess; converges
/// to machine precision in a handful of steps for any practical `n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = p_and_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = p_and_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn p_and_derivative(n: usize, z: f64) -> (f64, f64) {
    let p = legendre_unchecked(n, z);
    let pm1 = legendre_unchecked(n - 1, z);
    let d = n as f64 * (z * p - pm1) / (z * z - 1.0);
    (p, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angular::legendre::spherical_harmonic;

    #[test]
    fn integrates_polynomials_exactly() {
        for n in 1..40 {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            for deg in 0..2 * n {
                let approx: f64 = x
                    .iter()
                    .zip(&w)
                    .map(|(xi, wi)| wi * xi.powi(deg as i32))
                    .sum();
                let exact = if deg % 2 == 1 {
                    0.0
                } else {
                    2.0 / (deg as f64 + 1.0)
                };
                assert!((approx - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn spherical_harmonics_orthonormal_on_grid() {
        let kmax = 10usize;
        let n_t = kmax + 1;
        let n_p = 2 * kmax + 2;
        let (x, w) = gauss_legendre(n_t);
        let pairs: Vec<(usize, i32)> = (0..=kmax)
            .flat_map(|k| (-(k as i32)..=k as i32).map(move |q| (k, q)))
            .collect();
        for &(k1, q1) in &pairs {
            for &(k2, q2) in &pairs {
                let mut s = num_complex::Complex64::new(0.0, 0.0);
                for (xi, wi) in x.iter().zip(&w) {
                    let t = xi.acos();
                    for ip in 0..n_p {
                        let p = 2.0 * PI * ip as f64 / n_p as f64;
                        s += spherical_harmonic(k1, q1, t, p)
                            * spherical_harmonic(k2, q2, t, p).conj()
                            * (wi * 2.0 * PI / n_p as f64);
                    }
                }
                let expect = if (k1, q1) == (k2, q2) { 1.0 } else { 0.0 };
                assert!(
                    (s.re - expect).abs() < 1e-12 && s.im.abs() < 1e-12,
                    "({k1},{q1}) ({k2},{q2})"
                );
            }
        }
    }
}
