//! Named reference states.
//!
//! Fixed entries carry their own spin. Parametric entries take arguments in
//! parentheses (`dicke(-1/2)`, `pyramid(1.841)`) and, where the spin is not
//! implied, need it supplied by the caller.

use std::f64::consts::{PI, TAU};

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::Serialize;

use crate::angular::{HalfInt, Spin};
use crate::error::{Error, Result};
use crate::stellar::{constellation_to_state, Constellation, SpinState};

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Definition {
    /// Amplitudes ordered from `m = -j`; normalized on resolution.
    Dicke(Vec<[f64; 2]>),
    Stars(Vec<[f64; 2]>),
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedState {
    pub name: String,
    pub spin: Spin,
    pub definition: Definition,
}

impl NamedState {
    fn dicke(name: &str, twice_j: u32, amps: &[(f64, f64)]) -> Self {
        let amps = amps.iter().map(|&(re, im)| [re, im]).collect();
        NamedState {
            name: name.into(),
            spin: Spin::from_twice(twice_j),
            definition: Definition::Dicke(amps),
        }
    }

    fn stars(name: &str, stars: &[(f64, f64)]) -> Self {
        NamedState {
            name: name.into(),
            spin: Spin::from_twice(stars.len() as u32),
            definition: Definition::Stars(stars.iter().map(|&(t, p)| [t, p]).collect()),
        }
    }

    fn from_vectors(name: &str, vs: &[Vector3<f64>]) -> Self {
        let c = Constellation::from_vectors(vs).expect("unit vectors");
        let stars: Vec<(f64, f64)> = c.stars().iter().map(|s| (s.theta, s.phi)).collect();
        Self::stars(name, &stars)
    }

    pub fn state(&self) -> SpinState {
        match &self.definition {
            Definition::Dicke(a) => {
                let amps = a.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
                SpinState::new(self.spin, amps).expect("catalog amplitudes are nonzero")
            }
            Definition::Stars(s) => {
                let pairs: Vec<(f64, f64)> = s.iter().map(|&[t, p]| (t, p)).collect();
                constellation_to_state(&Constellation::from_angles(&pairs).expect("catalog stars"))
            }
        }
    }

    pub fn constellation(&self) -> Constellation {
        match &self.definition {
            Definition::Stars(s) => {
                let pairs: Vec<(f64, f64)> = s.iter().map(|&[t, p]| (t, p)).collect();
                Constellation::from_angles(&pairs).expect("catalog stars")
            }
            Definition::Dicke(_) => crate::stellar::state_to_constellation(&self.state()),
        }
    }
}

/// Polar angle of the tetrahedron vertices below a polar vertex.
pub fn theta_tetrahedron() -> f64 {
    2.0 * (1.0 / 3f64.sqrt()).acos()
}

/// `(2j, negativity, constellation as (theta, phi) pairs)`.
pub type MaximumRow = (u32, f64, &'static [(f64, f64)]);

/// Known maxima: `(2j, negativity, constellation)`.
pub const KNOWN_MAXIMA: [MaximumRow; 6] = [
    (2, 0.26935, &[(0.0, 0.0), (PI, 0.0)]),
    (
        3,
        0.39634,
        &[(0.0, 0.0), (2.0 * PI / 3.0, 0.0), (2.0 * PI / 3.0, PI)],
    ),
    (4, 0.50078, &[]),
    (
        5,
        0.57016,
        &[
            (0.0, 0.0),
            (1.66, 0.0),
            (1.43, 2.21),
            (2.86, 2.23),
            (1.65, 4.43),
        ],
    ),
    (
        6,
        0.65354,
        &[
            (0.0, 0.0),
            (1.62, 0.0),
            (1.71, 2.03),
            (1.71, 4.25),
            (2.02, 4.54),
            (2.02, 1.75),
        ],
    ),
    (
        7,
        0.73395,
        &[
            (0.0, 0.0),
            (1.97, 0.0),
            (1.83, 2.18),
            (2.07, 4.51),
            (1.83, 4.09),
            (2.06, 1.76),
            (0.43, 6.25),
        ],
    ),
];

/// Known maximal negativity for `2j <= 7`.
pub fn known_max(spin: Spin) -> Option<f64> {
    KNOWN_MAXIMA
        .iter()
        .find(|r| r.0 == spin.twice())
        .map(|r| r.1)
}

fn tetrahedron_stars() -> Vec<(f64, f64)> {
    let t = theta_tetrahedron();
    vec![(0.0, 0.0), (t, 0.0), (t, TAU / 3.0), (t, 2.0 * TAU / 3.0)]
}

fn maximum_stars(twice_j: u32) -> Vec<(f64, f64)> {
    if twice_j == 4 {
        return tetrahedron_stars();
    }
    KNOWN_MAXIMA
        .iter()
        .find(|r| r.0 == twice_j)
        .expect("table row")
        .2
        .to_vec()
}

fn maximum_amplitudes() -> Vec<NamedState> {
    let s = |x: f64| x.sqrt();
    vec![
        NamedState::dicke("maxamp-1", 2, &[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0)]),
        NamedState::dicke(
            "maxamp-3/2",
            3,
            &[(0.0, 0.0), (-s(3.0) / 2.0, 0.0), (0.0, 0.0), (0.5, 0.0)],
        ),
        NamedState::dicke(
            "maxamp-2",
            4,
            &[
                (0.0, 0.0),
                (s(2.0 / 3.0), 0.0),
                (0.0, 0.0),
                (0.0, 0.0),
                (1.0 / s(3.0), 0.0),
            ],
        ),
        NamedState::dicke(
            "maxamp-5/2",
            5,
            &[
                (0.0, 0.0),
                (-0.594, 0.373),
                (0.090, 0.034),
                (0.053, 0.200),
                (-0.391, 0.507),
                (0.216, 0.0),
            ],
        ),
        NamedState::dicke(
            "maxamp-3",
            6,
            &[
                (0.0, 0.0),
                (0.743, -0.001),
                (-0.02, 0.0),
                (0.156, 0.0),
                (0.37, 0.0),
                (-0.111, 0.0),
                (0.523, 0.0),
            ],
        ),
        NamedState::dicke(
            "maxamp-7/2",
            7,
            &[
                (0.0, 0.0),
                (0.299, -0.008),
                (0.687, -0.006),
                (-0.227, -0.005),
                (0.299, -0.001),
                (0.215, -0.003),
                (-0.074, -0.005),
                (0.496, 0.0),
            ],
        ),
    ]
}

fn cube() -> NamedState {
    let mut vs = Vec::new();
    for x in [-1.0, 1.0] {
        for y in [-1.0, 1.0] {
            for z in [-1.0, 1.0] {
                vs.push(Vector3::new(x, y, z).normalize());
            }
        }
    }
    NamedState::from_vectors("cube", &vs)
}

fn icosahedron() -> NamedState {
    let g = (1.0 + 5f64.sqrt()) / 2.0;
    let mut vs = Vec::new();
    for a in [-1.0, 1.0] {
        for b in [-g, g] {
            vs.push(Vector3::new(0.0, a, b).normalize());
            vs.push(Vector3::new(a, b, 0.0).normalize());
            vs.push(Vector3::new(b, 0.0, a).normalize());
        }
    }
    NamedState::from_vectors("icosahedron", &vs)
}

/// Every fixed (spin-carrying, argument-free) entry.
pub fn catalog() -> Vec<NamedState> {
    let mut out = vec![
        NamedState::stars("tetrahedron", &tetrahedron_stars()),
        NamedState::dicke(
            "octahedron",
            6,
            &[
                (0.0, 0.0),
                (1.0, 0.0),
                (0.0, 0.0),
                (0.0, 0.0),
                (0.0, 0.0),
                (1.0, 0.0),
                (0.0, 0.0),
            ],
        ),
        cube(),
        icosahedron(),
    ];
    for &(tj, _, _) in &KNOWN_MAXIMA {
        out.push(NamedState::stars(
            &format!("max-{}", Spin::from_twice(tj)),
            &maximum_stars(tj),
        ));
    }
    out.extend(maximum_amplitudes());
    out
}

/// Names that need arguments or an explicit spin, with their signatures.
pub const PARAMETRIC: [&str; 9] = [
    "coherent[(theta,phi)]",
    "dicke(m)",
    "ghz",
    "noon",
    "w",
    "pyramid(theta_base)",
    "two-triangles(theta1,theta2)",
    "spin1-family(eta)",
    "spin32-family(theta1,theta2,phi)",
];

/// Square pyramid: apex at the north pole, base at polar angle `theta_base`
/// with azimuths `0, pi/2, pi, 3pi/2`.
pub fn pyramid_stars(theta_base: f64) -> Vec<(f64, f64)> {
    let mut s = vec![(0.0, 0.0)];
    s.extend((0..4).map(|k| (theta_base, k as f64 * PI / 2.0)));
    s
}

/// Pole plus two parallel equilateral triangles with matching azimuths.
pub fn two_triangles_stars(theta1: f64, theta2: f64) -> Vec<(f64, f64)> {
    let mut s = vec![(0.0, 0.0)];
    for t in [theta1, theta2] {
        s.extend((0..3).map(|k| (t, k as f64 * TAU / 3.0)));
    }
    s
}

/// `(sqrt 2 cos(eta/2) |1,1> + sin(eta/2) |1,0>) / sqrt(1 + cos^2(eta/2))`.
pub fn spin1_family(eta: f64) -> SpinState {
    let (c, s) = ((eta / 2.0).cos(), (eta / 2.0).sin());
    SpinState::from_real(Spin::from_twice(2), &[0.0, s, 2f64.sqrt() * c]).expect("nonzero")
}

/// Three stars: north pole, `(theta1, 0)` and `(theta2, phi)`.
pub fn spin32_family(theta1: f64, theta2: f64, phi: f64) -> SpinState {
    let (c1, s1) = ((theta1 / 2.0).cos(), (theta1 / 2.0).sin());
    let (c2, s2) = ((theta2 / 2.0).cos(), (theta2 / 2.0).sin());
    let e = Complex64::from_polar(1.0, phi);
    let r3 = 3f64.sqrt();
    let amps = vec![
        Complex64::new(0.0, 0.0),
        e * (r3 * s1 * s2),
        (e * (c1 * s2) + s1 * c2) * r3,
        Complex64::new(3.0 * c1 * c2, 0.0),
    ];
    SpinState::new(Spin::from_twice(3), amps).expect("nonzero")
}

fn split_args(name: &str) -> Result<(String, Vec<String>)> {
    let name = name.trim().to_ascii_lowercase();
    match name.split_once('(') {
        None => Ok((name, Vec::new())),
        Some((head, rest)) => {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("unclosed argument list in {name:?}")))?;
            let args = inner
                .split(',')
                .map(|a| a.trim().to_string())
                .filter(|a| !a.is_empty())
                .collect();
            Ok((head.trim().to_string(), args))
        }
    }
}

fn real_args(args: &[String], n: usize, name: &str) -> Result<Vec<f64>> {
    if args.len() != n {
        return Err(Error::Parse(format!(
            "{name} takes {n} argument(s), got {}",
            args.len()
        )));
    }
    args.iter()
        .map(|a| {
            a.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number {a:?} in {name}")))
        })
        .collect()
}

fn check_spin(name: &str, implied: u32, given: Option<Spin>) -> Result<()> {
    match given {
        Some(s) if s.twice() != implied => Err(Error::Invalid(format!(
            "{name} has spin {}, but spin {s} was requested",
            Spin::from_twice(implied)
        ))),
        _ => Ok(()),
    }
}

/// Resolves a catalog name to a state. `spin` is required for `coherent`,
/// `dicke`, `ghz`/`noon` and `w`, and checked against the implied spin
/// otherwise.
pub fn resolve(name: &str, spin: Option<Spin>) -> Result<SpinState> {
    let (head, args) = split_args(name)?;
    let need_spin = || spin.ok_or_else(|| Error::Invalid(format!("{head} needs a spin")));
    match head.as_str() {
        "coherent" => {
            let j = need_spin()?;
            let (t, p) = if args.is_empty() {
                (0.0, 0.0)
            } else {
                let v = real_args(&args, 2, &head)?;
                (v[0], v[1])
            };
            Ok(SpinState::coherent(j, t, p))
        }
        "dicke" => {
            let j = need_spin()?;
            if args.len() != 1 {
                return Err(Error::Parse("dicke takes one argument m".into()));
            }
            let m = HalfInt::parse(&args[0])?;
            if !j.contains(m) {
                return Err(Error::Invalid(format!(
                    "m = {m} is not a projection of spin {j}"
                )));
            }
            Ok(SpinState::dicke(j, m))
        }
        "ghz" | "noon" => {
            let j = need_spin()?;
            let mut amps = vec![0.0; j.dim()];
            amps[0] = 1.0;
            amps[j.dim() - 1] = 1.0;
            SpinState::from_real(j, &amps)
        }
        "w" => {
            let j = need_spin()?;
            Ok(SpinState::dicke(
                j,
                HalfInt::from_twice(j.twice() as i32 - 2),
            ))
        }
        "pyramid" => {
            check_spin(&head, 5, spin)?;
            let v = real_args(&args, 1, &head)?;
            Ok(constellation_to_state(&Constellation::from_angles(
                &pyramid_stars(v[0]),
            )?))
        }
        "two-triangles" => {
            check_spin(&head, 7, spin)?;
            let v = real_args(&args, 2, &head)?;
            Ok(constellation_to_state(&Constellation::from_angles(
                &two_triangles_stars(v[0], v[1]),
            )?))
        }
        "spin1-family" => {
            check_spin(&head, 2, spin)?;
            let v = real_args(&args, 1, &head)?;
            Ok(spin1_family(v[0]))
        }
        "spin32-family" => {
            check_spin(&head, 3, spin)?;
            let v = real_args(&args, 3, &head)?;
            Ok(spin32_family(v[0], v[1], v[2]))
        }
        _ => {
            if !args.is_empty() {
                return Err(Error::UnknownState(name.to_string()));
            }
            let entry = catalog()
                .into_iter()
                .find(|e| {
                    e.name == head || normalize_spin_suffix(&e.name) == normalize_spin_suffix(&head)
                })
                .ok_or_else(|| Error::UnknownState(name.to_string()))?;
            check_spin(&entry.name, entry.spin.twice(), spin)?;
            Ok(entry.state())
        }
    }
}

/// Lets `max-2.5` stand for `max-5/2`.
fn normalize_spin_suffix(name: &str) -> String {
    match name.rsplit_once('-') {
        Some((prefix, tail)) => match Spin::parse(tail) {
            Ok(s) => format!("{prefix}-{s}"),
            Err(_) => name.to_string(),
        },
        None => name.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stellar::{
        constellations_equivalent, coulomb_energy, gram_spectrum, state_to_constellation,
    };

    fn j(tj: u32) -> Option<Spin> {
        Some(Spin::from_twice(tj))
    }

    #[test]
    fn all_entries_resolve() {
        for e in catalog() {
            let psi = resolve(&e.name, None).unwrap();
            assert_eq!(psi.spin(), e.spin, "{}", e.name);
            let norm: f64 = psi.amps().iter().map(|a| a.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn octahedron_and_tetrahedron_amplitudes() {
        let oct = resolve("octahedron", None).unwrap();
        let r = 0.5f64.sqrt();
        let want =
            SpinState::from_real(Spin::from_twice(6), &[0.0, r, 0.0, 0.0, 0.0, r, 0.0]).unwrap();
        assert!(oct.equal_up_to_phase(&want, 1e-14));
        let tet = resolve("tetrahedron", None).unwrap();
        let want = SpinState::from_real(
            Spin::from_twice(4),
            &[0.0, (2.0f64 / 3.0).sqrt(), 0.0, 0.0, 1.0 / 3f64.sqrt()],
        )
        .unwrap();
        assert!(tet.equal_up_to_phase(&want, 1e-12));
    }

    #[test]
    fn platonic_geometry() {
        // octahedron stars: six axis directions, Coulomb energy 3/2 + 12/sqrt 2
        let oct = state_to_constellation(&resolve("octahedron", None).unwrap());
        assert!((coulomb_energy(&oct) - (1.5 + 12.0 / 2f64.sqrt())).abs() < 1e-8);
        for name in ["cube", "icosahedron", "tetrahedron", "octahedron"] {
            let c = state_to_constellation(&resolve(name, None).unwrap());
            let g = gram_spectrum(&c);
            let n = c.len() as f64;
            for e in g.0 {
                assert!((e - n / 3.0).abs() < 1e-8, "{name} {g:?}");
            }
        }
        // cube edge 2/sqrt 3: 12 edges, 12 face diagonals, 4 body diagonals
        let cube = state_to_constellation(&resolve("cube", None).unwrap());
        let want = 12.0 * 3f64.sqrt() / 2.0 + 12.0 * 3f64.sqrt() / (2.0 * 2f64.sqrt()) + 4.0 / 2.0;
        assert!((coulomb_energy(&cube) - want).abs() < 1e-7);
    }

    #[test]
    fn amplitude_and_star_forms_agree() {
        // amplitude forms agree with the star forms
        for (tj, name) in [(2, "1"), (3, "3/2"), (4, "2")] {
            let a = state_to_constellation(&resolve(&format!("maxamp-{name}"), None).unwrap());
            let b = Constellation::from_angles(&maximum_stars(tj)).unwrap();
            assert!(constellations_equivalent(&a, &b, 1e-6), "{name}");
        }
    }

    #[test]
    fn ghz_is_great_circle_triangle() {
        let c = state_to_constellation(&resolve("ghz", j(3)).unwrap());
        for s in c.stars() {
            assert!((s.theta - PI / 2.0).abs() < 1e-12);
        }
        let max32 = Constellation::from_angles(&maximum_stars(3)).unwrap();
        assert!(constellations_equivalent(&c, &max32, 1e-8));
    }

    #[test]
    fn w_state_stars() {
        let c = state_to_constellation(&resolve("w", j(3)).unwrap());
        let north = c.stars().iter().filter(|s| s.theta < 1e-9).count();
        assert_eq!(north, 2);
    }

    #[test]
    fn families_match_constellations() {
        for eta in [0.0, 0.4, 1.3, 2.9, PI] {
            let want = constellation_to_state(
                &Constellation::from_angles(&[(0.0, 0.0), (eta, 0.0)]).unwrap(),
            );
            assert!(spin1_family(eta).equal_up_to_phase(&want, 1e-12));
        }
        for (a, b, p) in [
            (0.3, 1.2, 0.7),
            (2.0, 2.5, 3.0),
            (2.0 * PI / 3.0, 2.0 * PI / 3.0, PI),
        ] {
            let want = constellation_to_state(
                &Constellation::from_angles(&[(0.0, 0.0), (a, 0.0), (b, p)]).unwrap(),
            );
            assert!(spin32_family(a, b, p).equal_up_to_phase(&want, 1e-12));
        }
    }

    #[test]
    fn parametric_names() {
        assert!(resolve("dicke(-1/2)", j(3)).unwrap().equal_up_to_phase(
            &SpinState::dicke(Spin::from_twice(3), HalfInt::from_twice(-1)),
            0.0
        ));
        assert!(matches!(resolve("dicke(2)", j(3)), Err(Error::Invalid(_))));
        assert!(matches!(resolve("coherent", None), Err(Error::Invalid(_))));
        assert!(matches!(
            resolve("nonsense", None),
            Err(Error::UnknownState(_))
        ));
        assert!(matches!(
            resolve("pyramid(1.8)", j(4)),
            Err(Error::Invalid(_))
        ));
        assert!(resolve("pyramid(1.8)", None).is_ok());
        assert!(resolve("Max-2.5", None).is_ok());
        assert!(matches!(
            resolve("two-triangles(1.0)", None),
            Err(Error::Parse(_))
        ));
        let p = state_to_constellation(&resolve("pyramid(1.841)", None).unwrap());
        let want = Constellation::from_angles(&pyramid_stars(1.841)).unwrap();
        assert!(p.matched_distance(&want) < 1e-8);
    }
}
