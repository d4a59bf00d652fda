use std::sync::OnceLock;

use num_bigint::BigInt;

use super::spin::MAX_TWICE_J;

/// Largest argument in the factorial table. The Racah sum for coupling two
/// spins of `2j <= 60` into a third never needs more than `(j1+j2+J+1)!`.
pub const FACTORIAL_MAX: usize = 2 * MAX_TWICE_J as usize + 2;

struct Tables {
    exact: Vec<BigInt>,
    float: Vec<f64>,
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let mut exact = Vec::with_capacity(FACTORIAL_MAX + 1);
        exact.push(BigInt::from(1));
        for n in 1..=FACTORIAL_MAX {
            let next = &exact[n - 1] * BigInt::from(n);
            exact.push(next);
        }
        // Beyond ~170! the f64 overflows; only exact values are used that far.
        let float = exact
            .iter()
            .map(|v| num_traits::ToPrimitive::to_f64(v).unwrap_or(f64::INFINITY))
            .collect();
        Tables { exact, float }
    })
}

/// Exact `n!`.
pub fn factorial(n: usize) -> &'static BigInt {
    &tables().exact[n]
}

/// `n!` rounded to the nearest f64.
pub fn factorial_f64(n: usize) -> f64 {
    tables().float[n]
}

/// Binomial coefficient as f64, exact for the sizes used here.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let t = tables();
    let v = &t.exact[n] / (&t.exact[k] * &t.exact[n - k]);
    num_traits::ToPrimitive::to_f64(&v).unwrap_or(f64::INFINITY)
}
