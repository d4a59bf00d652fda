use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported `2j`.
pub const MAX_TWICE_J: u32 = 60;

/// A spin quantum number stored as `2j` so half-integers stay exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Spin(u32);

impl Spin {
    /// Spin with the given `2j`. Zero is allowed here (coupling with a scalar);
    /// physical states require `2j >= 1`, enforced by [`Spin::physical`].
    pub const fn from_twice(twice_j: u32) -> Self {
        Spin(twice_j)
    }

    pub fn physical(twice_j: u32) -> Result<Self> {
        if twice_j == 0 || twice_j > MAX_TWICE_J {
            return Err(Error::InvalidSpin(twice_j));
        }
        Ok(Spin(twice_j))
    }

    /// Parses `2`, `2.5`, `5/2` style spin values.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let twice = if let Some((n, d)) = s.split_once('/') {
            let n: u32 = n
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad spin {s:?}")))?;
            match d.trim() {
                "2" => n,
                "1" => 2 * n,
                _ => return Err(Error::Parse(format!("bad spin {s:?}"))),
            }
        } else {
            let v: f64 = s
                .parse()
                .map_err(|_| Error::Parse(format!("bad spin {s:?}")))?;
            let t = (2.0 * v).round();
            if (2.0 * v - t).abs() > 1e-9 || t < 0.0 {
                return Err(Error::Parse(format!("spin {s:?} is not a half-integer")));
            }
            t as u32
        };
        Spin::physical(twice)
    }

    #[inline]
    pub const fn twice(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    /// Hilbert space dimension `2j + 1`.
    #[inline]
    pub const fn dim(self) -> usize {
        self.0 as usize + 1
    }

    /// Projections `m = -j ..= j` in increasing order.
    pub fn projections(self) -> impl Iterator<Item = HalfInt> {
        let tj = self.0 as i32;
        (0..=tj).map(move |k| HalfInt(2 * k - tj))
    }

    /// Array index of projection `m` (0 for `m = -j`).
    #[inline]
    pub fn index_of(self, m: HalfInt) -> usize {
        ((m.0 + self.0 as i32) / 2) as usize
    }

    pub fn contains(self, m: HalfInt) -> bool {
        m.0.unsigned_abs() <= self.0 && (m.0 + self.0 as i32) % 2 == 0
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// A half-integer (`2m` stored), used for magnetic projections.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    #[inline]
    pub const fn from_twice(twice_m: i32) -> Self {
        HalfInt(twice_m)
    }

    #[inline]
    pub const fn twice(self) -> i32 {
        self.0
    }

    #[inline]
    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    /// Parses `-1`, `0.5`, `-3/2` style projections.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad projection {s:?}"));
        if let Some((n, d)) = s.split_once('/') {
            let n: i32 = n.trim().parse().map_err(|_| bad())?;
            return match d.trim() {
                "2" => Ok(HalfInt(n)),
                "1" => Ok(HalfInt(2 * n)),
                _ => Err(bad()),
            };
        }
        let v: f64 = s.parse().map_err(|_| bad())?;
        let t = (2.0 * v).round();
        if (2.0 * v - t).abs() > 1e-9 {
            return Err(bad());
        }
        Ok(HalfInt(t as i32))
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 + o.0)
    }
}

impl std::ops::Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl From<Spin> for HalfInt {
    fn from(s: Spin) -> Self {
        HalfInt(s.0 as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(Spin::parse("2.5").unwrap().twice(), 5);
        assert_eq!(Spin::parse("7/2").unwrap().twice(), 7);
        assert_eq!(Spin::parse("3").unwrap().twice(), 6);
        assert!(Spin::parse("0.3").is_err());
        assert!(Spin::parse("0").is_err());
        assert_eq!(HalfInt::parse("-3/2").unwrap().twice(), -3);
        assert_eq!(HalfInt::parse("-1").unwrap().twice(), -2);
        assert_eq!(HalfInt::parse("0.5").unwrap().to_string(), "1/2");
        assert!(HalfInt::parse("1/3").is_err());
    }

    #[test]
    fn projections_and_index() {
        let s = Spin::from_twice(3);
        let ms: Vec<i32> = s.projections().map(|m| m.twice()).collect();
        assert_eq!(ms, vec![-3, -1, 1, 3]);
        assert_eq!(s.index_of(HalfInt::from_twice(1)), 2);
        assert!(s.contains(HalfInt::from_twice(-3)));
        assert!(!s.contains(HalfInt::from_twice(2)));
        assert_eq!(s.dim(), 4);
        assert_eq!(s.to_string(), "3/2");
    }
}
