use nalgebra::{Rotation3, Vector3};
use serde::Serialize;

use crate::angular::Spin;
use crate::stellar::{Constellation, Star};

/// Constellation modulo rotations: star 1 on the north pole, star 2 in the
/// `phi = 0` half-plane. Layout `[theta_2, theta_3, phi_3, ..., theta_n, phi_n]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaugeFixedParams {
    pub spin: Spin,
    pub params: Vec<f64>,
}

impl GaugeFixedParams {
    /// `4j - 3` for `2j >= 2`, nothing for a qubit.
    pub fn len_for(spin: Spin) -> usize {
        (2 * spin.twice() as usize).saturating_sub(3)
    }

    pub fn new(spin: Spin, params: Vec<f64>) -> Self {
        assert_eq!(params.len(), Self::len_for(spin), "gauge parameter count");
        GaugeFixedParams { spin, params }
    }

    pub fn stars(&self) -> Vec<Star> {
        stars_from(self.spin.twice() as usize, &self.params)
    }

    pub fn to_constellation(&self) -> Constellation {
        Constellation::new(self.stars()).expect("2j stars")
    }

    /// Angles wrapped into `theta in [0, pi]`, `phi in [0, 2 pi)`.
    pub fn canonical(&self) -> Self {
        let stars = self.stars();
        let mut p = Vec::with_capacity(self.params.len());
        for (i, s) in stars.iter().enumerate().skip(1) {
            p.push(s.theta);
            if i >= 2 {
                p.push(s.phi);
            }
        }
        GaugeFixedParams {
            spin: self.spin,
            params: p,
        }
    }

    /// Rotates the first star to the north pole and the second into the
    /// `phi = 0` half-plane.
    pub fn from_constellation(c: &Constellation) -> Self {
        let spin = c.spin();
        let r = gauge_rotation(c);
        let rotated = c.rotated(&r);
        let mut params = Vec::with_capacity(Self::len_for(spin));
        for (i, s) in rotated.stars().iter().enumerate().skip(1) {
            params.push(s.theta);
            if i >= 2 {
                params.push(s.phi);
            }
        }
        GaugeFixedParams { spin, params }
    }
}

/// Stars from raw (possibly unwrapped) gauge parameters.
pub(crate) fn stars_from(n: usize, p: &[f64]) -> Vec<Star> {
    let mut stars = vec![Star::north()];
    if n >= 2 {
        stars.push(Star::new(p[0], 0.0));
    }
    for i in 0..n.saturating_sub(2) {
        stars.push(Star::new(p[1 + 2 * i], p[2 + 2 * i]));
    }
    stars
}

/// Rotation bringing a constellation into gauge.
pub fn gauge_rotation(c: &Constellation) -> Rotation3<f64> {
    let v = c.vectors();
    let z = Vector3::z();
    let r1 = Rotation3::rotation_between(&v[0], &z)
        .unwrap_or_else(|| Rotation3::from_axis_angle(&Vector3::x_axis(), std::f64::consts::PI));
    if v.len() < 2 {
        return r1;
    }
    let w = r1 * v[1];
    let phi = w.y.atan2(w.x);
    if w.x.hypot(w.y) < 1e-12 {
        return r1;
    }
    Rotation3::from_axis_angle(&Vector3::z_axis(), -phi) * r1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phasespace::negativity;
    use crate::stellar::{constellation_to_state, constellations_equivalent, random_rotation};
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn random_constellation(rng: &mut impl rand::Rng, n: usize) -> Constellation {
        let stars = (0..n)
            .map(|_| {
                Star::new(
                    (1.0 - 2.0 * rng.gen::<f64>()).acos(),
                    std::f64::consts::TAU * rng.gen::<f64>(),
                )
            })
            .collect();
        Constellation::new(stars).unwrap()
    }

    #[test]
    fn lengths() {
        assert_eq!(GaugeFixedParams::len_for(Spin::from_twice(1)), 0);
        assert_eq!(GaugeFixedParams::len_for(Spin::from_twice(2)), 1);
        assert_eq!(GaugeFixedParams::len_for(Spin::from_twice(7)), 11);
    }

    #[test]
    fn gauged_negativity_matches() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for n in 2..=6 {
            let c = random_constellation(&mut rng, n);
            let g = GaugeFixedParams::from_constellation(&c);
            let tol = 1e-6;
            let d0 = negativity(&constellation_to_state(&c), tol).unwrap();
            let d1 = negativity(&constellation_to_state(&g.to_constellation()), tol).unwrap();
            assert!((d0 - d1).abs() <= 2.0 * tol * d0);
        }
    }

    #[test]
    fn antipodal_first_star() {
        let c = Constellation::from_angles(&[(std::f64::consts::PI, 0.0), (1.0, 2.0)]).unwrap();
        let g = GaugeFixedParams::from_constellation(&c);
        assert!((g.params[0] - (std::f64::consts::PI - 1.0)).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn gauge_completeness(seed in any::<u64>(), n in 1usize..9) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let c = random_constellation(&mut rng, n).rotated(&random_rotation(&mut rng));
            let g = GaugeFixedParams::from_constellation(&c);
            prop_assert_eq!(g.params.len(), GaugeFixedParams::len_for(c.spin()));
            let back = g.to_constellation();
            prop_assert!(back.stars()[0].theta < 1e-9);
            if n >= 2 {
                prop_assert!(back.stars()[1].phi.abs() < 1e-9 || back.stars()[1].theta < 1e-9);
            }
            prop_assert!(constellations_equivalent(&c, &back, 1e-7));
            let canon = g.canonical();
            prop_assert!(canon.to_constellation().matched_distance(&back) < 1e-12);
        }
    }
}
