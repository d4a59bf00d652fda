use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::io::fmt_sig;
use crate::measures::catalog::{pyramid_stars, spin1_family, spin32_family, two_triangles_stars};
use crate::optim::{nelder_mead, NelderMeadOptions};
use crate::phasespace::negativity;
use crate::stellar::{state_from_angles, SpinState};

fn pyramid_state(theta: f64) -> SpinState {
    state_from_angles(&pyramid_stars(theta)).expect("five stars")
}

fn two_triangles_state(t1: f64, t2: f64) -> SpinState {
    state_from_angles(&two_triangles_stars(t1, t2)).expect("seven stars")
}

#[derive(Clone, Debug, Serialize)]
pub struct Sweep1d {
    pub parameter: &'static str,
    pub rows: Vec<(f64, f64)>,
    /// Refined location and value of the largest grid maximum.
    pub peak: (f64, f64),
}

impl Sweep1d {
    pub fn to_csv(&self) -> String {
        let mut s = format!("{},negativity\n", self.parameter);
        for (x, d) in &self.rows {
            s += &format!("{},{}\n", fmt_sig(*x), fmt_sig(*d));
        }
        s
    }
}

fn sweep_1d<F>(parameter: &'static str, grid: &[f64], rel_tol: f64, f: F) -> Result<Sweep1d>
where
    F: Fn(f64) -> SpinState + Sync,
{
    assert!(!grid.is_empty(), "empty grid");
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&x| negativity(&f(x), rel_tol))
        .collect::<Result<_>>()?;
    let rows: Vec<(f64, f64)> = grid.iter().copied().zip(values.iter().copied()).collect();
    let i = (0..rows.len())
        .max_by(|&a, &b| rows[a].1.total_cmp(&rows[b].1))
        .expect("nonempty");
    let peak = if i == 0 || i + 1 == rows.len() {
        rows[i]
    } else {
        golden_max(
            |x| negativity(&f(x), (rel_tol * 1e-2).max(1e-10)),
            rows[i - 1].0,
            rows[i + 1].0,
        )?
    };
    Ok(Sweep1d {
        parameter,
        rows,
        peak,
    })
}

/// Golden-section search for the maximum of a unimodal function on `[lo, hi]`.
fn golden_max<F: Fn(f64) -> Result<f64>>(f: F, mut lo: f64, mut hi: f64) -> Result<(f64, f64)> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while hi - lo > 1e-7 {
        if f1 > f2 {
            hi = x2;
            (x2, f2) = (x1, f1);
            x1 = hi - g * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            (x1, f1) = (x2, f2);
            x2 = lo + g * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 > f2 { (x1, f1) } else { (x2, f2) })
}

/// Square-pyramid family of spin 5/2 over the base polar angle.
pub fn sweep_pyramid(theta_grid: &[f64], rel_tol: f64) -> Result<Sweep1d> {
    sweep_1d("theta_base", theta_grid, rel_tol, pyramid_state)
}

/// Two stars at polar separation `eta`.
pub fn sweep_spin1_family(eta_grid: &[f64], rel_tol: f64) -> Result<Sweep1d> {
    sweep_1d("eta", eta_grid, rel_tol, spin1_family)
}

#[derive(Clone, Debug, Serialize)]
pub struct TwoTrianglesSweep {
    pub theta1: Vec<f64>,
    pub theta2: Vec<f64>,
    /// `values[i][k]` at `(theta1[i], theta2[k])`.
    pub values: Vec<Vec<f64>>,
    pub peak_theta1: f64,
    pub peak_theta2: f64,
    pub peak_negativity: f64,
    /// Axial distance `|cos theta1 - cos theta2|` of the triangles at the peak.
    pub peak_separation: f64,
}

impl TwoTrianglesSweep {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("theta1,theta2,negativity\n");
        for (i, t1) in self.theta1.iter().enumerate() {
            for (k, t2) in self.theta2.iter().enumerate() {
                s += &format!(
                    "{},{},{}\n",
                    fmt_sig(*t1),
                    fmt_sig(*t2),
                    fmt_sig(self.values[i][k])
                );
            }
        }
        s
    }
}

/// Pole plus two parallel, equally oriented triangles (spin 7/2).
pub fn sweep_two_triangles(
    theta1: &[f64],
    theta2: &[f64],
    rel_tol: f64,
) -> Result<TwoTrianglesSweep> {
    assert!(!theta1.is_empty() && !theta2.is_empty(), "empty grid");
    let points: Vec<(f64, f64)> = theta1
        .iter()
        .flat_map(|&a| theta2.iter().map(move |&b| (a, b)))
        .collect();
    let flat: Vec<f64> = points
        .par_iter()
        .map(|&(a, b)| negativity(&two_triangles_state(a, b), rel_tol))
        .collect::<Result<_>>()?;
    let values: Vec<Vec<f64>> = flat.chunks(theta2.len()).map(<[f64]>::to_vec).collect();
    let best = (0..flat.len())
        .max_by(|&a, &b| flat[a].total_cmp(&flat[b]))
        .expect("nonempty");
    let (a0, b0) = points[best];
    let step = if theta1.len() > 1 {
        (theta1[1] - theta1[0]).abs()
    } else {
        0.05
    };
    let fine_tol = (rel_tol * 1e-2).max(1e-9);
    let f = |p: &[f64]| -negativity(&two_triangles_state(p[0], p[1]), fine_tol).unwrap_or(0.0);
    let r = nelder_mead(
        &f,
        &[a0, b0],
        NelderMeadOptions {
            step: 0.5 * step,
            f_tol: 1e-13,
            max_iters: 2000,
            max_restarts: 3,
        },
    );
    let (peak_theta1, peak_theta2) = (r.x[0], r.x[1]);
    Ok(TwoTrianglesSweep {
        theta1: theta1.to_vec(),
        theta2: theta2.to_vec(),
        values,
        peak_theta1,
        peak_theta2,
        peak_negativity: negativity(&two_triangles_state(peak_theta1, peak_theta2), fine_tol)?,
        peak_separation: (peak_theta1.cos() - peak_theta2.cos()).abs(),
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Spin32Point {
    pub theta1: f64,
    pub theta2: f64,
    pub phi: f64,
    pub negativity: f64,
}

/// Three-star family: pole, `(theta1, 0)`, `(theta2, phi)`, restricted to
/// `theta2 >= theta1`.
pub fn sweep_spin32_family(
    theta1: &[f64],
    theta2: &[f64],
    phi: &[f64],
    rel_tol: f64,
) -> Result<Vec<Spin32Point>> {
    let mut points = Vec::new();
    for &a in theta1 {
        for &b in theta2.iter().filter(|&&b| b >= a) {
            for &p in phi {
                points.push((a, b, p));
            }
        }
    }
    points
        .par_iter()
        .map(|&(a, b, p)| {
            let negativity = negativity(&spin32_family(a, b, p), rel_tol)?;
            Ok(Spin32Point {
                theta1: a,
                theta2: b,
                phi: p,
                negativity,
            })
        })
        .collect()
}

pub fn spin32_csv(points: &[Spin32Point]) -> String {
    let mut s = String::from("theta1,theta2,phi,negativity\n");
    for p in points {
        s += &format!(
            "{},{},{},{}\n",
            fmt_sig(p.theta1),
            fmt_sig(p.theta2),
            fmt_sig(p.phi),
            fmt_sig(p.negativity)
        );
    }
    s
}

/// `n` evenly spaced points covering `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}
