use std::f64::consts::{PI, TAU};

use nalgebra::{Rotation3, Vector3};
use serde::{Deserialize, Serialize};

use crate::angular::Spin;
use crate::error::{Error, Result};

/// Angular distance below which a star counts as sitting on a pole.
const POLE_EPS: f64 = 1e-12;

/// A point on the unit sphere in polar coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Star {
    pub theta: f64,
    pub phi: f64,
}

impl Star {
    /// Wraps arbitrary angles into `theta in [0, pi]`, `phi in [0, 2pi)`.
    /// Out-of-range `theta` is reflected through the pole with `phi += pi`;
    /// stars on a pole get `phi = 0`.
    pub fn new(theta: f64, phi: f64) -> Self {
        let mut t = theta.rem_euclid(TAU);
        let mut p = phi;
        if t > PI {
            t = TAU - t;
            p += PI;
        }
        let mut p = p.rem_euclid(TAU);
        if p >= TAU {
            p = 0.0;
        }
        if t < POLE_EPS || PI - t < POLE_EPS {
            p = 0.0;
        }
        Star { theta: t, phi: p }
    }

    pub fn north() -> Self {
        Star {
            theta: 0.0,
            phi: 0.0,
        }
    }

    pub fn south() -> Self {
        Star {
            theta: PI,
            phi: 0.0,
        }
    }

    pub fn to_vec(self) -> Vector3<f64> {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        Vector3::new(st * cp, st * sp, ct)
    }

    pub fn from_vec(v: &Vector3<f64>) -> Self {
        let n = v.norm();
        let z = (v.z / n).clamp(-1.0, 1.0);
        let theta = z.acos();
        let phi = v.y.atan2(v.x);
        Star::new(theta, phi)
    }

    /// Great-circle distance to another star.
    pub fn angle_to(self, other: Star) -> f64 {
        let (a, b) = (self.to_vec(), other.to_vec());
        a.cross(&b).norm().atan2(a.dot(&b))
    }
}

/// Unordered multiset of `2j` stars: the geometric face of a pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct Constellation {
    stars: Vec<Star>,
}

impl Constellation {
    pub fn new(stars: Vec<Star>) -> Result<Self> {
        if stars.is_empty() {
            return Err(Error::Invalid(
                "constellation needs at least one star".into(),
            ));
        }
        Spin::physical(stars.len() as u32)?;
        Ok(Constellation {
            stars: stars
                .into_iter()
                .map(|s| Star::new(s.theta, s.phi))
                .collect(),
        })
    }

    /// From `(theta, phi)` pairs.
    pub fn from_angles(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(t, p)| Star::new(t, p)).collect())
    }

    pub fn from_vectors(vs: &[Vector3<f64>]) -> Result<Self> {
        Self::new(vs.iter().map(Star::from_vec).collect())
    }

    pub fn spin(&self) -> Spin {
        Spin::from_twice(self.stars.len() as u32)
    }

    pub fn stars(&self) -> &[Star] {
        &self.stars
    }

    pub fn len(&self) -> usize {
        self.stars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stars.is_empty()
    }

    pub fn vectors(&self) -> Vec<Vector3<f64>> {
        self.stars.iter().map(|s| s.to_vec()).collect()
    }

    /// Rigidly rotates every star.
    pub fn rotated(&self, r: &Rotation3<f64>) -> Constellation {
        Constellation {
            stars: self
                .stars
                .iter()
                .map(|s| Star::from_vec(&(r * s.to_vec())))
                .collect(),
        }
    }

    /// Largest per-star angular deviation after optimally pairing the stars
    /// of two constellations (multiset comparison).
    pub fn matched_distance(&self, other: &Constellation) -> f64 {
        assert_eq!(self.len(), other.len());
        let n = self.len();
        let cost: Vec<f64> = (0..n)
            .flat_map(|i| (0..n).map(move |k| (i, k)))
            .map(|(i, k)| (self.stars[i].to_vec() - other.stars[k].to_vec()).norm_squared())
            .collect();
        let assignment = super::assignment::min_cost_assignment(n, &cost);
        (0..n)
            .map(|i| self.stars[i].angle_to(other.stars[assignment[i]]))
            .fold(0.0, f64::max)
    }
}

#[derive(Serialize, Deserialize)]
struct ConstellationRepr {
    twice_j: u32,
    stars: Vec<[f64; 2]>,
}

impl Serialize for Constellation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ConstellationRepr {
            twice_j: self.stars.len() as u32,
            stars: self.stars.iter().map(|st| [st.theta, st.phi]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Constellation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ConstellationRepr::deserialize(d)?;
        if r.stars.len() != r.twice_j as usize {
            return Err(serde::de::Error::custom(format!(
                "star count {} does not match twice_j = {}",
                r.stars.len(),
                r.twice_j
            )));
        }
        Constellation::new(r.stars.iter().map(|&[t, p]| Star::new(t, p)).collect())
            .map_err(serde::de::Error::custom)
    }
}
