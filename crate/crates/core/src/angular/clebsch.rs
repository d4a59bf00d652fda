use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::factorial::factorial;
use super::spin::{HalfInt, Spin};

/// Signed square root of a non-negative rational, `sign * sqrt(radicand)`.
///
/// Clebsch-Gordan coefficients are always of this form, so they can be kept
/// exact until the last moment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedSqrt {
    sign: i8,
    radicand: BigRational,
}

impl SignedSqrt {
    pub fn zero() -> Self {
        SignedSqrt {
            sign: 0,
            radicand: BigRational::zero(),
        }
    }

    pub fn new(sign: i8, radicand: BigRational) -> Self {
        debug_assert!(!radicand.is_negative());
        if sign == 0 || radicand.is_zero() {
            return Self::zero();
        }
        SignedSqrt {
            sign: sign.signum(),
            radicand,
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// The squared magnitude, exact.
    pub fn radicand(&self) -> &BigRational {
        &self.radicand
    }

    /// `sign * value^2`, exact.
    pub fn signed_square(&self) -> BigRational {
        match self.sign {
            0 => BigRational::zero(),
            s if s > 0 => self.radicand.clone(),
            _ => -self.radicand.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn to_f64(&self) -> f64 {
        f64::from(self.sign) * self.radicand.to_f64().unwrap_or(f64::NAN).sqrt()
    }
}

impl fmt::Display for SignedSqrt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => write!(f, "{}sqrt({})", if s > 0 { "" } else { "-" }, self.radicand),
        }
    }
}

fn triangle(a: u32, b: u32, c: u32) -> bool {
    // all in units of 1/2
    c <= a + b && a <= b + c && b <= a + c && (a + b + c).is_multiple_of(2)
}

fn fact(n: i64) -> &'static BigInt {
    debug_assert!(n >= 0);
    factorial(n as usize)
}

/// Clebsch-Gordan coefficient `<j1 m1; j2 m2 | J M>` in the Condon-Shortley
/// convention, exact, via Racah's single-sum formula.
///
/// Selection-rule violations return zero.
pub fn clebsch_gordan(
    j1: Spin,
    m1: HalfInt,
    j2: Spin,
    m2: HalfInt,
    jj: Spin,
    mm: HalfInt,
) -> SignedSqrt {
    let (tj1, tj2, tjj) = (j1.twice(), j2.twice(), jj.twice());
    if !j1.contains(m1) || !j2.contains(m2) || !jj.contains(mm) {
        return SignedSqrt::zero();
    }
    if m1.twice() + m2.twice() != mm.twice() || !triangle(tj1, tj2, tjj) {
        return SignedSqrt::zero();
    }

    let (j1, j2, jj) = (tj1 as i64, tj2 as i64, tjj as i64);
    let (m1, m2, mm) = (m1.twice() as i64, m2.twice() as i64, mm.twice() as i64);
    // every combination below is an even number of half units
    let h = |x: i64| -> i64 {
        debug_assert!(x % 2 == 0);
        x / 2
    };

    let a = h(jj + j1 - j2);
    let b = h(jj - j1 + j2);
    let c = h(j1 + j2 - jj);
    let d = h(j1 + j2 + jj) + 1;
    let num = BigInt::from(jj + 1)
        * fact(a)
        * fact(b)
        * fact(c)
        * fact(h(jj + mm))
        * fact(h(jj - mm))
        * fact(h(j1 - m1))
        * fact(h(j1 + m1))
        * fact(h(j2 - m2))
        * fact(h(j2 + m2));
    let radicand = BigRational::new(num, fact(d).clone());

    // sum over k with all factorial arguments non-negative
    let t1 = c; // j1 + j2 - J - k
    let t2 = h(j1 - m1); // j1 - m1 - k
    let t3 = h(j2 + m2); // j2 + m2 - k
    let t4 = h(jj - j2 + m1); // J - j2 + m1 + k
    let t5 = h(jj - j1 - m2); // J - j1 - m2 + k
    let k_min = 0.max(-t4).max(-t5);
    let k_max = t1.min(t2).min(t3);
    let mut sum = BigRational::zero();
    for k in k_min..=k_max {
        let den =
            fact(k) * fact(t1 - k) * fact(t2 - k) * fact(t3 - k) * fact(t4 + k) * fact(t5 + k);
        let term = BigRational::new(BigInt::from(1), den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }

    let sign = match sum.numer().sign() {
        num_bigint::Sign::Plus => 1,
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
    };
    let sq = &sum * &sum;
    SignedSqrt::new(sign, radicand * sq)
}

/// Float value of a Clebsch-Gordan coefficient.
pub fn clebsch_gordan_f64(
    j1: Spin,
    m1: HalfInt,
    j2: Spin,
    m2: HalfInt,
    jj: Spin,
    mm: HalfInt,
) -> f64 {
    clebsch_gordan(j1, m1, j2, m2, jj, mm).to_f64()
}

impl PartialOrd for SignedSqrt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.signed_square().cmp(&other.signed_square()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: u32) -> Spin {
        Spin::from_twice(t)
    }
    fn m(t: i32) -> HalfInt {
        HalfInt::from_twice(t)
    }
    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn scalar_coupling_is_one() {
        for tj in 0..8u32 {
            for tm in (-(tj as i32)..=tj as i32).step_by(2) {
                let c = clebsch_gordan(s(tj), m(tm), s(0), m(0), s(tj), m(tm));
                assert_eq!(c, SignedSqrt::new(1, q(1, 1)), "j={tj}/2 m={tm}/2");
            }
        }
    }

    #[test]
    fn half_with_one() {
        // <1/2 1/2; 1 0 | 1/2 1/2> = +sqrt(1/3)
        let c = clebsch_gordan(s(1), m(1), s(2), m(0), s(1), m(1));
        assert_eq!(c, SignedSqrt::new(1, q(1, 3)));
    }

    #[test]
    fn stretched() {
        let c = clebsch_gordan(s(1), m(1), s(1), m(1), s(2), m(2));
        assert_eq!(c, SignedSqrt::new(1, q(1, 1)));
    }

    #[test]
    fn singlet_sign() {
        // <1/2 1/2; 1/2 -1/2 | 0 0> = +1/sqrt2, <1/2 -1/2; 1/2 1/2 | 0 0> = -1/sqrt2
        assert_eq!(
            clebsch_gordan(s(1), m(1), s(1), m(-1), s(0), m(0)),
            SignedSqrt::new(1, q(1, 2))
        );
        assert_eq!(
            clebsch_gordan(s(1), m(-1), s(1), m(1), s(0), m(0)),
            SignedSqrt::new(-1, q(1, 2))
        );
    }

    #[test]
    fn selection_rules_zero() {
        assert!(clebsch_gordan(s(2), m(2), s(2), m(0), s(2), m(0)).is_zero());
        assert!(clebsch_gordan(s(2), m(0), s(2), m(0), s(8), m(0)).is_zero());
        // <1 0; 1 0 | 1 0> vanishes by symmetry
        assert!(clebsch_gordan(s(2), m(0), s(2), m(0), s(2), m(0)).is_zero());
    }

    fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
        let (n, d) = (r.numer().clone(), r.denom().clone());
        let (rn, rd) = (n.sqrt(), d.sqrt());
        (&rn * &rn == n && &rd * &rd == d).then(|| BigRational::new(rn, rd))
    }

    #[test]
    fn orthogonality_exact() {
        // sum_{m1,m2} C^{JM} C^{J'M} = delta_{JJ'} for j1, j2 <= 4. Cross terms
        // share one square-free factor for fixed (J, J', M), so the sum is
        // evaluated as sqrt(common) * (exact rational).
        for tj1 in 0..=8u32 {
            for tj2 in 0..=8u32 {
                let lo = (tj1 as i32 - tj2 as i32).unsigned_abs();
                let js: Vec<u32> = (lo..=tj1 + tj2).step_by(2).collect();
                for &ja in &js {
                    for &jb in &js {
                        for tm in (-(ja.min(jb) as i32)..=ja.min(jb) as i32).step_by(2) {
                            let mut common: Option<BigRational> = None;
                            let mut acc = BigRational::zero();
                            for tm1 in (-(tj1 as i32)..=tj1 as i32).step_by(2) {
                                let tm2 = tm - tm1;
                                let ca =
                                    clebsch_gordan(s(tj1), m(tm1), s(tj2), m(tm2), s(ja), m(tm));
                                let cb =
                                    clebsch_gordan(s(tj1), m(tm1), s(tj2), m(tm2), s(jb), m(tm));
                                if ca.is_zero() || cb.is_zero() {
                                    continue;
                                }
                                let prod = ca.radicand() * cb.radicand();
                                let base = common.get_or_insert_with(|| prod.clone()).clone();
                                let ratio = rational_sqrt(&(prod / &base))
                                    .expect("common square-free part");
                                acc += ratio * BigInt::from(ca.sign() * cb.sign());
                            }
                            let expect = if ja == jb { q(1, 1) } else { q(0, 1) };
                            let total = match common {
                                Some(c) if ja == jb => {
                                    // base is r^2 for the first term, so sqrt(base) is rational
                                    acc * rational_sqrt(&c).unwrap()
                                }
                                Some(_) => acc,
                                None => BigRational::zero(),
                            };
                            assert_eq!(total, expect, "j1={tj1} j2={tj2} J={ja} J'={jb} M={tm}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn orthogonality_float_cross_terms() {
        for tj1 in 0..=8u32 {
            for tj2 in 0..=8u32 {
                let lo = (tj1 as i32 - tj2 as i32).unsigned_abs();
                for ja in (lo..=tj1 + tj2).step_by(2) {
                    for jb in (lo..=tj1 + tj2).step_by(2) {
                        if ja == jb {
                            continue;
                        }
                        let mut acc = 0.0;
                        let tm = (ja % 2) as i32;
                        for tm1 in (-(tj1 as i32)..=tj1 as i32).step_by(2) {
                            let tm2 = tm - tm1;
                            acc += clebsch_gordan_f64(s(tj1), m(tm1), s(tj2), m(tm2), s(ja), m(tm))
                                * clebsch_gordan_f64(s(tj1), m(tm1), s(tj2), m(tm2), s(jb), m(tm));
                        }
                        assert!(acc.abs() < 1e-14);
                    }
                }
            }
        }
    }
}
