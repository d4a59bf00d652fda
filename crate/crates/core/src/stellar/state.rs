use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angular::factorial::binomial;
use crate::angular::{HalfInt, Spin};
use crate::error::{Error, Result};

/// Pure spin-j state in the Dicke basis. `amps[k]` is the amplitude of
/// `|j, m>` with `m = k - j`, so index 0 is `m = -j`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinState {
    spin: Spin,
    amps: Vec<Complex64>,
}

impl SpinState {
    /// Builds and normalizes a state. Fails on the zero vector.
    pub fn new(spin: Spin, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != spin.dim() {
            return Err(Error::Dimension {
                expected: spin.dim(),
                got: amps.len(),
            });
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::Invalid("non-finite amplitude".into()));
        }
        let norm = amps.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::ZeroState);
        }
        Ok(SpinState {
            spin,
            amps: amps.into_iter().map(|a| a / norm).collect(),
        })
    }

    /// Infers the spin from the number of amplitudes.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::ZeroState);
        }
        let spin = Spin::physical((amps.len() - 1) as u32)?;
        Self::new(spin, amps)
    }

    /// Real amplitudes, ordered from `m = -j`.
    pub fn from_real(spin: Spin, amps: &[f64]) -> Result<Self> {
        Self::new(spin, amps.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// Dicke state `|j, m>`.
    pub fn dicke(spin: Spin, m: HalfInt) -> Self {
        assert!(spin.contains(m), "projection outside spin");
        let mut amps = vec![Complex64::new(0.0, 0.0); spin.dim()];
        amps[spin.index_of(m)] = Complex64::new(1.0, 0.0);
        SpinState { spin, amps }
    }

    /// Spin coherent state pointing at `(theta, phi)`; all stars sit there.
    pub fn coherent(spin: Spin, theta: f64, phi: f64) -> Self {
        let n = spin.twice() as usize;
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let amps = (0..=n)
            .map(|k| {
                // k = j + m, so j - m = n - k
                let mag = binomial(n, k).sqrt() * c.powi(k as i32) * s.powi((n - k) as i32);
                Complex64::from_polar(mag, (n - k) as f64 * phi)
            })
            .collect();
        SpinState { spin, amps }
    }

    #[inline]
    pub fn spin(&self) -> Spin {
        self.spin
    }

    #[inline]
    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amp(&self, m: HalfInt) -> Complex64 {
        self.amps[self.spin.index_of(m)]
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &SpinState) -> Complex64 {
        assert_eq!(self.spin, other.spin, "spin mismatch");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &SpinState) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Equality up to a global phase, used when two routes may legitimately
    /// disagree by `e^{i chi}`.
    pub fn equal_up_to_phase(&self, other: &SpinState, tol: f64) -> bool {
        self.spin == other.spin && 1.0 - self.fidelity(other) <= tol
    }

    /// Removes the global phase so the largest amplitude is real positive.
    pub fn canonical_phase(&self) -> SpinState {
        let (_, big) =
            self.amps
                .iter()
                .enumerate()
                .fold((0, Complex64::new(0.0, 0.0)), |acc, (i, a)| {
                    if a.norm() > acc.1.norm() + 1e-12 {
                        (i, *a)
                    } else {
                        acc
                    }
                });
        let rot = big.conj() / big.norm();
        SpinState {
            spin: self.spin,
            amps: self.amps.iter().map(|a| a * rot).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    twice_j: u32,
    amps: Vec<[f64; 2]>,
}

impl Serialize for SpinState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StateRepr {
            twice_j: self.spin.twice(),
            amps: self.amps.iter().map(|a| [a.re, a.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpinState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = StateRepr::deserialize(d)?;
        let spin = Spin::physical(r.twice_j).map_err(serde::de::Error::custom)?;
        SpinState::new(
            spin,
            r.amps
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect(),
        )
        .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_and_rejects_zero() {
        let s = SpinState::from_real(Spin::from_twice(2), &[3.0, 0.0, 4.0]).unwrap();
        assert!((s.amps()[0].re - 0.6).abs() < 1e-15);
        assert!(matches!(
            SpinState::from_real(Spin::from_twice(2), &[0.0; 3]),
            Err(Error::ZeroState)
        ));
        assert!(matches!(
            SpinState::from_amplitudes(vec![]),
            Err(Error::ZeroState)
        ));
        assert!(SpinState::from_real(Spin::from_twice(2), &[1.0; 2]).is_err());
    }

    #[test]
    fn coherent_north_is_top_dicke() {
        let j = Spin::from_twice(5);
        let c = SpinState::coherent(j, 0.0, 1.3);
        assert!(c.equal_up_to_phase(&SpinState::dicke(j, HalfInt::from(j)), 1e-15));
        let s = SpinState::coherent(j, std::f64::consts::PI, 0.0);
        assert!(s.equal_up_to_phase(&SpinState::dicke(j, -HalfInt::from(j)), 1e-15));
    }

    #[test]
    fn json_schema() {
        let s = SpinState::dicke(Spin::from_twice(2), HalfInt::ZERO);
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["twice_j"], 2);
        assert_eq!(v["amps"][1][0], 1.0);
        let back: SpinState = serde_json::from_value(v).unwrap();
        assert_eq!(back, s);
        let bad = serde_json::from_str::<SpinState>(r#"{"twice_j":2,"amps":[[0,0],[0,0],[0,0]]}"#);
        assert!(bad.unwrap_err().to_string().contains("zero state"));
    }
}
