//! Complex polynomial roots through companion-matrix eigenvalues.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Coefficients below `ZERO_REL * max|c|` are treated as exact zeros when
/// trimming the ends of a polynomial.
pub const ZERO_REL: f64 = 1e-14;

/// Horner evaluation, coefficients ascending (`c[k]` multiplies `z^k`).
pub fn eval(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &ck| acc * z + ck)
}

fn eval_with_derivative(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &ck in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ck;
    }
    (p, dp)
}

/// Roots of the polynomial with ascending coefficients `c`.
///
/// Returns `(finite_roots, n_zero, n_infinite)` where `n_zero` counts roots
/// at exactly `z = 0` (trailing zero coefficients) and `n_infinite` counts the
/// degree deficit relative to `c.len() - 1` (leading zero coefficients).
/// `finite_roots` excludes the zero roots.
pub fn roots(c: &[Complex64]) -> (Vec<Complex64>, usize, usize) {
    let scale = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!(scale > 0.0, "zero polynomial");
    let tiny = ZERO_REL * scale;
    let hi = c.iter().rposition(|z| z.norm() > tiny).unwrap();
    let lo = c.iter().position(|z| z.norm() > tiny).unwrap();
    let n_inf = c.len() - 1 - hi;
    let n_zero = lo;
    let core: Vec<Complex64> = c[lo..=hi].to_vec();
    let deg = core.len() - 1;
    if deg == 0 {
        return (Vec::new(), n_zero, n_inf);
    }
    let lead = core[deg];
    let mut m = DMatrix::<Complex64>::zeros(deg, deg);
    for i in 1..deg {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..deg {
        m[(i, deg - 1)] = -core[i] / lead;
    }
    // unshifted QR stalls on cyclic companions such as z^4 + c; Aberth takes over
    let eig: Vec<Complex64> = match nalgebra::linalg::Schur::try_new(m, 1e-15, 10_000) {
        Some(schur) => schur
            .eigenvalues()
            .expect("complex Schur form is triangular")
            .iter()
            .copied()
            .collect(),
        None => aberth(&core),
    };
    let rev: Vec<Complex64> = core.iter().rev().copied().collect();
    let found = eig.iter().map(|&z| polish(&core, &rev, z)).collect();
    (found, n_zero, n_inf)
}

/// Simultaneous Aberth-Ehrlich iteration for all roots; `c[0]` and the
/// leading coefficient must be nonzero.
fn aberth(c: &[Complex64]) -> Vec<Complex64> {
    let deg = c.len() - 1;
    let lead = c[deg].norm();
    // geometric mean of root moduli, with a twist that breaks symmetry
    let radius = (c[0].norm() / lead).powf(1.0 / deg as f64);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / deg as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let (p, dp) = eval_with_derivative(c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..deg)
                .filter(|&k| k != i)
                .map(|k| (z[i] - z[k]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            z[i] -= step;
            moved = moved.max(step.norm() / (1.0 + z[i].norm()));
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// A few Newton steps, done on the reversed polynomial for `|z| > 1` so large
/// roots are refined in a well-scaled variable. Steps that do not reduce the
/// residual are rejected.
fn polish(c: &[Complex64], rev: &[Complex64], z0: Complex64) -> Complex64 {
    let (poly, mut x) = if z0.norm() <= 1.0 {
        (c, z0)
    } else {
        (rev, z0.inv())
    };
    let (mut px, _) = eval_with_derivative(poly, x);
    for _ in 0..4 {
        let (_, d) = eval_with_derivative(poly, x);
        if d.norm() == 0.0 {
            break;
        }
        let cand = x - px / d;
        let (pc, _) = eval_with_derivative(poly, cand);
        if pc.norm() < px.norm() {
            x = cand;
            px = pc;
        } else {
            break;
        }
    }
    if z0.norm() <= 1.0 {
        x
    } else {
        x.inv()
    }
}

/// Expands `prod_i (u_i z - v_i)` into ascending coefficients. Each factor is
/// a homogeneous root `[u : v]`; `u = 0` lowers the degree (root at infinity).
pub fn from_homogeneous_roots(factors: &[(Complex64, Complex64)]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &(u, v) in factors {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (k, &ck) in c.iter().enumerate() {
            next[k + 1] += ck * u;
            next[k] -= ck * v;
        }
        c = next;
    }
    c
}
