use nalgebra::DMatrix;
use num_complex::Complex64;

use super::factorial::factorial_f64;
use super::spin::{HalfInt, Spin};

/// Wigner small-d matrix element `d^j_{m'm}(beta)` from the explicit
/// factorial sum.
pub fn wigner_small_d(j: Spin, mp: HalfInt, m: HalfInt, beta: f64) -> f64 {
    if !j.contains(mp) || !j.contains(m) {
        return 0.0;
    }
    let tj = j.twice() as i64;
    let (tmp, tm) = (mp.twice() as i64, m.twice() as i64);
    let h = |x: i64| (x / 2) as usize;
    let jpm = h(tj + tm);
    let jmm = h(tj - tm);
    let jpmp = h(tj + tmp);
    let jmmp = h(tj - tmp);
    let diff = (tmp - tm) / 2; // m' - m, integer

    let pref =
        (factorial_f64(jpmp) * factorial_f64(jmmp) * factorial_f64(jpm) * factorial_f64(jmm))
            .sqrt();
    let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
    let s_min = 0.max(-diff) as usize;
    let s_max = (jpm as i64).min(jmmp as i64) as usize;
    let mut total = 0.0;
    for k in s_min..=s_max {
        let ki = k as i64;
        let den = factorial_f64(jpm - k)
            * factorial_f64(k)
            * factorial_f64((diff + ki) as usize)
            * factorial_f64(jmmp - k);
        let pc = tj - diff - 2 * ki; // 2j + m - m' - 2k
        let ps = diff + 2 * ki; // m' - m + 2k
        let sign = if (diff + ki) % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * powi(c, pc) * powi(s, ps) / den;
    }
    pref * total
}

fn powi(x: f64, p: i64) -> f64 {
    if p == 0 {
        1.0
    } else {
        x.powi(p as i32)
    }
}

/// Full small-d matrix, rows `m'` and columns `m`, both ascending from `-j`.
pub fn small_d_matrix(j: Spin, beta: f64) -> DMatrix<f64> {
    let n = j.dim();
    let ms: Vec<HalfInt> = j.projections().collect();
    DMatrix::from_fn(n, n, |r, c| wigner_small_d(j, ms[r], ms[c], beta))
}

/// Wigner D matrix `D^j_{m'm}(alpha, beta, gamma) = e^{-i m' alpha} d^j_{m'm}(beta) e^{-i m gamma}`
/// for the z-y-z rotation `R_z(alpha) R_y(beta) R_z(gamma)`.
pub fn wigner_big_d(j: Spin, alpha: f64, beta: f64, gamma: f64) -> DMatrix<Complex64> {
    let d = small_d_matrix(j, beta);
    let ms: Vec<f64> = j.projections().map(HalfInt::value).collect();
    DMatrix::from_fn(j.dim(), j.dim(), |r, c| {
        Complex64::from_polar(d[(r, c)], -ms[r] * alpha - ms[c] * gamma)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn spins() -> impl Iterator<Item = Spin> {
        (1..=7).map(Spin::from_twice)
    }

    #[test]
    fn identity_at_zero() {
        for j in spins() {
            let d = small_d_matrix(j, 0.0);
            assert_abs_diff_eq!(
                (d - DMatrix::identity(j.dim(), j.dim())).norm(),
                0.0,
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn spin_half_closed_form() {
        let j = Spin::from_twice(1);
        let (up, dn) = (HalfInt::from_twice(1), HalfInt::from_twice(-1));
        for &b in &[0.3, 1.2, 2.8] {
            assert_abs_diff_eq!(
                wigner_small_d(j, up, up, b),
                f64::cos(b / 2.0),
                epsilon = 1e-15
            );
            assert_abs_diff_eq!(
                wigner_small_d(j, up, dn, b),
                -f64::sin(b / 2.0),
                epsilon = 1e-15
            );
            assert_abs_diff_eq!(
                wigner_small_d(j, dn, up, b),
                f64::sin(b / 2.0),
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn spin_one_closed_form() {
        // d^1_{1,0} = -sin(b)/sqrt2, d^1_{0,0} = cos b, d^1_{-1,1} = (1 - cos b)/2
        let j = Spin::from_twice(2);
        let m = HalfInt::from_twice;
        let b = 0.83f64;
        assert_abs_diff_eq!(
            wigner_small_d(j, m(2), m(0), b),
            -b.sin() / 2f64.sqrt(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(wigner_small_d(j, m(0), m(0), b), b.cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(
            wigner_small_d(j, m(-2), m(2), b),
            (1.0 - b.cos()) / 2.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn rows_normalized_and_composition() {
        for j in spins() {
            let d = small_d_matrix(j, 1.1);
            for c in 0..j.dim() {
                let s: f64 = (0..j.dim()).map(|r| d[(r, c)].powi(2)).sum();
                assert_abs_diff_eq!(s, 1.0, epsilon = 1e-13);
            }
            let lhs = small_d_matrix(j, 0.4) * small_d_matrix(j, 1.3);
            let rhs = small_d_matrix(j, 1.7);
            assert!((lhs - rhs).norm() < 1e-12, "j={j}");
        }
    }
}
