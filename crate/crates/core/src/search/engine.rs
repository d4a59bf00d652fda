use std::f64::consts::TAU;

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::gauge::{stars_from, GaugeFixedParams};
use crate::angular::Spin;
use crate::error::Result;
use crate::optim::{nelder_mead, NelderMeadOptions};
use crate::phasespace::{default_fixed_panels, negativity, negativity_fixed, WignerSeries};
use crate::stellar::{
    constellation_to_state, coulomb_energy, gram_spectrum, Constellation, EulerAngles,
    GramSpectrum, Star,
};

/// Spectra closer than this belong to the same cluster.
pub const CLUSTER_TOL: f64 = 1e-4;
/// Half-width of the polish box relative to each parameter.
pub const POLISH_BOX: f64 = 0.05;
/// Box half-width floor for parameters near zero.
const POLISH_BOX_FLOOR: f64 = 0.1 * POLISH_BOX;

#[derive(Clone, Debug, Serialize)]
pub struct ClusterSummary {
    pub negativity: f64,
    pub spectrum: GramSpectrum,
    pub size: usize,
    pub constellation: Constellation,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome {
    pub constellation: Constellation,
    pub negativity: f64,
    pub spectrum: GramSpectrum,
    pub n_starts: usize,
    pub n_converged_to_best: usize,
    pub seed: u64,
    /// Clusters in objective order, best first. Cluster values come from the
    /// exploration rule, `negativity` above from the adaptive integrator.
    pub clusters: Vec<ClusterSummary>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Goal {
    Maximize,
    Minimize,
}

impl Goal {
    fn sign(self) -> f64 {
        match self {
            Goal::Maximize => -1.0,
            Goal::Minimize => 1.0,
        }
    }
}

/// How a parameter vector becomes a constellation, and where starts come from.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Family {
    /// Gauge-fixed free constellation.
    Free,
    /// Four stars on a regular tetrahedron with Euler orientation
    /// `p[0..3]`, the other stars free as `(theta, phi)` pairs.
    TetraSnap,
}

impl Family {
    fn dim(self, n: usize) -> usize {
        match self {
            Family::Free => (2 * n).saturating_sub(3),
            Family::TetraSnap => 3 + 2 * (n - 4),
        }
    }

    pub(crate) fn stars(self, n: usize, p: &[f64]) -> Vec<Star> {
        match self {
            Family::Free => stars_from(n, p),
            Family::TetraSnap => {
                let r = EulerAngles::new(p[0], p[1], p[2]).to_rotation();
                let mut out: Vec<Star> = tetrahedron()
                    .iter()
                    .map(|v| Star::from_vec(&(r * v)))
                    .collect();
                for i in 0..n - 4 {
                    out.push(Star::new(p[3 + 2 * i], p[4 + 2 * i]));
                }
                out
            }
        }
    }

    fn random_start(self, n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
        match self {
            Family::Free => {
                let c = Constellation::new((0..n).map(|_| random_star(rng)).collect())
                    .expect("n stars");
                GaugeFixedParams::from_constellation(&c).params
            }
            Family::TetraSnap => {
                let mut p = Vec::with_capacity(self.dim(n));
                let r = crate::stellar::random_rotation(rng);
                let e = EulerAngles::from_rotation(&r);
                p.extend([e.alpha, e.beta, e.gamma]);
                for _ in 0..n - 4 {
                    let s = random_star(rng);
                    p.extend([s.theta, s.phi]);
                }
                p
            }
        }
    }
}

/// Uniform on the sphere.
pub(crate) fn random_star(rng: &mut impl Rng) -> Star {
    Star::new(
        (1.0 - 2.0 * rng.gen::<f64>()).acos(),
        TAU * rng.gen::<f64>(),
    )
}

pub(crate) fn tetrahedron() -> [Vector3<f64>; 4] {
    let t = crate::measures::catalog::theta_tetrahedron();
    [(0.0, 0.0), (t, 0.0), (t, TAU / 3.0), (t, 2.0 * TAU / 3.0)]
        .map(|(a, b)| Star::new(a, b).to_vec())
}

fn constellation(stars: Vec<Star>) -> Constellation {
    Constellation::new(stars).expect("nonempty")
}

/// Cheap negativity surrogate used while exploring.
pub(crate) fn explore_negativity(c: &Constellation, panels: usize) -> f64 {
    negativity_fixed(
        &WignerSeries::from_state(&constellation_to_state(c)),
        panels,
    )
}

struct Local {
    params: Vec<f64>,
    value: f64,
    constellation: Constellation,
    spectrum: GramSpectrum,
}

fn explore_options(dim: usize) -> NelderMeadOptions {
    NelderMeadOptions {
        step: 0.3,
        f_tol: 1e-11,
        max_iters: 200 * dim as u64 + 200,
        max_restarts: 3,
    }
}

fn run_starts<F>(family: Family, n: usize, n_starts: usize, seed: u64, objective: &F) -> Vec<Local>
where
    F: Fn(&Constellation) -> f64 + Sync,
{
    let dim = family.dim(n);
    (0..n_starts)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let x0 = family.random_start(n, &mut rng);
            let f = |p: &[f64]| objective(&constellation(family.stars(n, p)));
            let r = nelder_mead(&f, &x0, explore_options(dim));
            let c = constellation(family.stars(n, &r.x));
            Local {
                params: r.x,
                value: r.value,
                spectrum: gram_spectrum(&c),
                constellation: c,
            }
        })
        .collect()
}

/// Leader clustering by Gram spectrum, leaders taken in objective order.
fn cluster(mut locals: Vec<Local>) -> Vec<(Local, usize)> {
    locals.sort_by(|a, b| a.value.total_cmp(&b.value));
    let mut out: Vec<(Local, usize)> = Vec::new();
    for l in locals {
        match out
            .iter_mut()
            .find(|(lead, _)| lead.spectrum.max_abs_diff(&l.spectrum) < CLUSTER_TOL)
        {
            Some((_, size)) => *size += 1,
            None => out.push((l, 1)),
        }
    }
    out
}

/// Polishes inside `center +- POLISH_BOX |center|` with the box enforced by
/// the substitution `p = center + w sin(x)`.
fn polish_in_box<F>(family: Family, n: usize, center: &[f64], objective: &F) -> Vec<f64>
where
    F: Fn(&Constellation) -> f64,
{
    let width: Vec<f64> = center
        .iter()
        .map(|c| (POLISH_BOX * c.abs()).max(POLISH_BOX_FLOOR))
        .collect();
    let map = |x: &[f64]| -> Vec<f64> {
        (0..x.len())
            .map(|i| center[i] + width[i] * x[i].sin())
            .collect()
    };
    let f = |x: &[f64]| objective(&constellation(family.stars(n, &map(x))));
    let opts = NelderMeadOptions {
        step: 0.5,
        f_tol: 1e-14,
        max_iters: 400 * center.len() as u64 + 400,
        max_restarts: 4,
    };
    let r = nelder_mead(&f, &vec![0.0; center.len()], opts);
    map(&r.x)
}

fn outcome(
    family: Family,
    n: usize,
    goal: Goal,
    n_starts: usize,
    seed: u64,
    rel_tol: f64,
    locals: Vec<Local>,
) -> Result<SearchOutcome> {
    let clusters = cluster(locals);
    let sign = goal.sign();
    let (best, size) = &clusters[0];
    let fine_panels = 4 * default_fixed_panels(Spin::from_twice(n as u32));
    let fine = |c: &Constellation| sign * explore_negativity(c, fine_panels);
    let params = polish_in_box(family, n, &best.params, &fine);
    let mut c = constellation(family.stars(n, &params));
    let mut delta = negativity(&constellation_to_state(&c), rel_tol)?;
    // keep the unpolished point if polishing did not help
    let before = negativity(&constellation_to_state(&best.constellation), rel_tol)?;
    if sign * before < sign * delta {
        c = best.constellation.clone();
        delta = before;
    }
    if let Family::Free = family {
        c = GaugeFixedParams::from_constellation(&c)
            .canonical()
            .to_constellation();
    }
    Ok(SearchOutcome {
        spectrum: gram_spectrum(&c),
        constellation: c,
        negativity: delta,
        n_starts,
        n_converged_to_best: *size,
        seed,
        clusters: clusters
            .par_iter()
            .map(|(l, size)| {
                Ok(ClusterSummary {
                    negativity: negativity(&constellation_to_state(&l.constellation), rel_tol)?,
                    spectrum: l.spectrum,
                    size: *size,
                    constellation: l.constellation.clone(),
                })
            })
            .collect::<Result<_>>()?,
    })
}

fn search(
    family: Family,
    spin: Spin,
    goal: Goal,
    n_starts: usize,
    seed: u64,
    rel_tol: f64,
) -> Result<SearchOutcome> {
    let n = spin.twice() as usize;
    let n_starts = n_starts.max(1);
    if n == 1 {
        // every qubit state is coherent
        let c = constellation(vec![Star::north()]);
        let delta = negativity(&constellation_to_state(&c), rel_tol)?;
        let spectrum = gram_spectrum(&c);
        let summary = ClusterSummary {
            negativity: delta,
            spectrum,
            size: n_starts,
            constellation: c.clone(),
        };
        return Ok(SearchOutcome {
            constellation: c,
            negativity: delta,
            spectrum,
            n_starts,
            n_converged_to_best: n_starts,
            seed,
            clusters: vec![summary],
        });
    }
    let panels = default_fixed_panels(spin);
    let sign = goal.sign();
    let objective = |c: &Constellation| sign * explore_negativity(c, panels);
    let locals = run_starts(family, n, n_starts, seed, &objective);
    outcome(family, n, goal, n_starts, seed, rel_tol, locals)
}

/// Multi-start Nelder-Mead over gauge-fixed constellations.
pub fn maximize_negativity(
    spin: Spin,
    n_starts: usize,
    seed: u64,
    rel_tol: f64,
) -> Result<SearchOutcome> {
    search(Family::Free, spin, Goal::Maximize, n_starts, seed, rel_tol)
}

pub fn minimize_negativity(
    spin: Spin,
    n_starts: usize,
    seed: u64,
    rel_tol: f64,
) -> Result<SearchOutcome> {
    search(Family::Free, spin, Goal::Minimize, n_starts, seed, rel_tol)
}

/// Maximization with four stars held on a regular tetrahedron whose
/// orientation is optimized along with the remaining stars.
pub fn maximize_with_tetra_snap(
    spin: Spin,
    n_starts: usize,
    seed: u64,
    rel_tol: f64,
) -> Result<SearchOutcome> {
    if spin.twice() < 4 {
        return Err(crate::error::Error::Invalid(format!(
            "tetra-snap needs 2j >= 4, got spin {spin}"
        )));
    }
    search(
        Family::TetraSnap,
        spin,
        Goal::Maximize,
        n_starts,
        seed,
        rel_tol,
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct PolishReport {
    pub start: Constellation,
    pub negativity_before: f64,
    pub constellation: Constellation,
    pub negativity: f64,
}

/// Maximizes negativity in the box around a given constellation, after
/// bringing it into gauge.
pub fn polish(c: &Constellation, rel_tol: f64) -> Result<PolishReport> {
    let n = c.len();
    let before = negativity(&constellation_to_state(c), rel_tol)?;
    if n < 2 {
        return Ok(PolishReport {
            start: c.clone(),
            negativity_before: before,
            constellation: c.clone(),
            negativity: before,
        });
    }
    let g = GaugeFixedParams::from_constellation(c);
    let panels = 4 * default_fixed_panels(c.spin());
    let f = |x: &Constellation| -explore_negativity(x, panels);
    let p = polish_in_box(Family::Free, n, &g.params, &f);
    let out = GaugeFixedParams::new(c.spin(), p)
        .canonical()
        .to_constellation();
    let after = negativity(&constellation_to_state(&out), rel_tol)?;
    Ok(PolishReport {
        start: c.clone(),
        negativity_before: before,
        constellation: out,
        negativity: after,
    })
}

/// Thomson problem: multi-start minimization of the Coulomb energy.
pub fn minimize_coulomb(n_stars: usize, n_starts: usize, seed: u64) -> Result<Constellation> {
    if n_stars < 2 {
        return Err(crate::error::Error::Invalid(format!(
            "Thomson problem needs at least 2 stars, got {n_stars}"
        )));
    }
    let family = Family::Free;
    let locals = run_starts(family, n_stars, n_starts.max(1), seed, &coulomb_energy);
    let best = locals
        .into_iter()
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .expect("at least one start");
    Ok(
        GaugeFixedParams::new(Spin::from_twice(n_stars as u32), best.params)
            .canonical()
            .to_constellation(),
    )
}
