//! Wigner negativity `delta = (int |W| d mu - 1) / 2`.
//!
//! Along each latitude `W` is a trigonometric polynomial in `phi`, so the
//! azimuthal integral of `|W|` is taken exactly between its sign changes.
//! The remaining polar integral is only piecewise smooth (nodal lines that
//! run along or touch a latitude leave kinks), and is handled by adaptive
//! Gauss-Kronrod panels. Each refinement pass halves the error budget; the
//! result is accepted once two consecutive passes agree to `rel_tol`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use serde::Serialize;

use super::grid::SphereGrid;
use super::multipole::WignerSeries;
use super::wigner::wigner_eval;
use crate::angular::{HalfInt, Spin};
use crate::error::{Error, Result};
use crate::stellar::SpinState;

pub const DEFAULT_REL_TOL: f64 = 1e-6;
pub const MAX_REFINEMENTS: usize = 8;

/// Fraction of `rel_tol * delta` granted to the Kronrod error estimate in the
/// first pass.
const BUDGET_SAFETY: f64 = 0.25;

// Kronrod 15-point abscissae (descending, last is the centre) and weights;
// the odd entries are the embedded 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
pub struct NegativityOptions {
    pub rel_tol: f64,
    pub max_refinements: usize,
}

impl Default for NegativityOptions {
    fn default() -> Self {
        NegativityOptions {
            rel_tol: DEFAULT_REL_TOL,
            max_refinements: MAX_REFINEMENTS,
        }
    }
}

impl NegativityOptions {
    pub fn with_tol(rel_tol: f64) -> Self {
        NegativityOptions {
            rel_tol,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NegativityReport {
    pub value: f64,
    /// Estimate after each refinement pass.
    pub estimates: Vec<f64>,
    pub rel_tol: f64,
    /// Polar panels in the final partition.
    pub panels: usize,
    /// Latitudes whose azimuthal integral was evaluated.
    pub latitudes: usize,
}

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    est: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then(other.a.total_cmp(&self.a))
    }
}

struct Integrator<'a> {
    series: &'a WignerSeries,
    buf: Vec<f64>,
    scale: f64,
    latitudes: usize,
}

impl Integrator<'_> {
    /// `(2j+1)/(4 pi) sin(theta) int_0^{2 pi} |W(theta, phi)| d phi`.
    fn ring(&mut self, theta: f64) -> f64 {
        self.latitudes += 1;
        let (s, c) = theta.sin_cos();
        let poly = self.series.latitude(c, s, &mut self.buf);
        poly.abs_integral() * s * self.scale
    }

    fn panel(&mut self, a: f64, b: f64) -> Panel {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let fc = self.ring(c);
        let mut k = WGK[7] * fc;
        let mut g = WG[3] * fc;
        for i in 0..7 {
            let f = self.ring(c - h * XGK[i]) + self.ring(c + h * XGK[i]);
            k += WGK[i] * f;
            if i % 2 == 1 {
                g += WG[i / 2] * f;
            }
        }
        Panel {
            a,
            b,
            est: k * h,
            err: ((k - g) * h).abs(),
        }
    }
}

fn initial_panels(spin: Spin) -> usize {
    (spin.twice() as usize + 2).max(6)
}

/// Polar sign changes of an axial Wigner function. Its `|W|` has kinks
/// exactly there, so they become panel boundaries.
fn axial_nodes(series: &WignerSeries) -> Vec<f64> {
    let f = |t: f64| series.eval(t, 0.0);
    let n = 64 * series.spin().dim();
    let h = PI / n as f64;
    let mut out = Vec::new();
    let mut fa = f(0.0);
    for i in 1..=n {
        let b = i as f64 * h;
        let fb = f(b);
        if (fa >= 0.0) != (fb >= 0.0) {
            let (mut lo, mut hi, mut flo) = (b - h, b, fa);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if (fm >= 0.0) == (flo >= 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        fa = fb;
    }
    out
}

/// Negativity with the default tolerance.
pub fn negativity(psi: &SpinState, rel_tol: f64) -> Result<f64> {
    negativity_report(psi, NegativityOptions::with_tol(rel_tol)).map(|r| r.value)
}

pub fn negativity_report(psi: &SpinState, opts: NegativityOptions) -> Result<NegativityReport> {
    negativity_of_series(&WignerSeries::from_state(psi), opts)
}

pub fn negativity_of_series(
    series: &WignerSeries,
    opts: NegativityOptions,
) -> Result<NegativityReport> {
    if !(opts.rel_tol.is_finite() && opts.rel_tol > 0.0) {
        return Err(Error::Invalid(format!(
            "rel_tol must be positive and finite, got {}",
            opts.rel_tol
        )));
    }
    let spin = series.spin();
    let mut it = Integrator {
        series,
        buf: vec![0.0; series.legendre_len()],
        scale: spin.dim() as f64 / (4.0 * PI),
        latitudes: 0,
    };
    let n0 = initial_panels(spin);
    let mut cuts: Vec<f64> = (0..=n0).map(|i| PI * i as f64 / n0 as f64).collect();
    if series.is_axial() {
        cuts.extend(axial_nodes(series));
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    }
    let mut heap: BinaryHeap<Panel> = cuts.windows(2).map(|w| it.panel(w[0], w[1])).collect();
    let mut done: Vec<Panel> = Vec::new();
    let total = |heap: &BinaryHeap<Panel>, done: &[Panel]| -> (f64, f64) {
        let mut all: Vec<&Panel> = heap.iter().chain(done.iter()).collect();
        all.sort_by(|x, y| x.a.total_cmp(&y.a));
        let est: Vec<f64> = all.iter().map(|p| p.est).collect();
        (
            super::grid::pairwise_sum(&est),
            heap.iter().map(|p| p.err).sum(),
        )
    };

    let mut estimates = Vec::new();
    let (mut integral, mut err) = total(&heap, &done);
    for pass in 0..=opts.max_refinements {
        let delta_scale = ((integral - 1.0) / 2.0).max(1e-6);
        let budget = BUDGET_SAFETY * opts.rel_tol * delta_scale * 0.5f64.powi(pass as i32);
        while err > budget {
            let Some(worst) = heap.pop() else { break };
            if worst.b - worst.a < 1e-9 {
                // cannot resolve further; keep the value, stop counting its error
                done.push(Panel { err: 0.0, ..worst });
            } else {
                let mid = 0.5 * (worst.a + worst.b);
                let left = it.panel(worst.a, mid);
                let right = it.panel(mid, worst.b);
                heap.push(left);
                heap.push(right);
            }
            err = heap.iter().map(|p| p.err).sum();
            if heap.len() + done.len() > 200_000 {
                break;
            }
        }
        (integral, err) = total(&heap, &done);
        let delta = (integral - 1.0) / 2.0;
        estimates.push(delta);
        let n = estimates.len();
        if n >= 3 {
            let agree = |x: f64, y: f64| (x - y).abs() <= opts.rel_tol * x.abs().max(1e-300);
            if agree(estimates[n - 1], estimates[n - 2])
                && agree(estimates[n - 2], estimates[n - 3])
            {
                return Ok(NegativityReport {
                    value: delta,
                    estimates,
                    rel_tol: opts.rel_tol,
                    panels: heap.len() + done.len(),
                    latitudes: it.latitudes,
                });
            }
        }
    }
    let n = estimates.len();
    Err(Error::NonConvergence {
        passes: n,
        previous: if n >= 2 { estimates[n - 2] } else { f64::NAN },
        last: estimates.last().copied().unwrap_or(f64::NAN),
    })
}

/// Non-adaptive estimate from Kronrod panels of equal width in `theta`.
///
/// A smooth, cheap surrogate for optimizer exploration: the relative error
/// stays below a few parts in 10^4 but carries no certificate.
pub fn negativity_fixed(series: &WignerSeries, panels: usize) -> f64 {
    let spin = series.spin();
    let mut it = Integrator {
        series,
        buf: vec![0.0; series.legendre_len()],
        scale: spin.dim() as f64 / (4.0 * PI),
        latitudes: 0,
    };
    let est: Vec<f64> = (0..panels)
        .map(|i| {
            it.panel(
                PI * i as f64 / panels as f64,
                PI * (i + 1) as f64 / panels as f64,
            )
            .est
        })
        .collect();
    (super::grid::pairwise_sum(&est) - 1.0) / 2.0
}

/// Panel count used by [`negativity_fixed`] callers by default.
pub fn default_fixed_panels(spin: Spin) -> usize {
    initial_panels(spin)
}

/// Plain product-rule estimate on a fixed grid, for cross-checks. Only
/// first-order accurate near nodal lines.
pub fn negativity_on_grid(psi: &SpinState, grid: &SphereGrid) -> Result<f64> {
    let field = wigner_eval(psi, grid)?;
    Ok((field.integrate_with(f64::abs) - 1.0) / 2.0)
}

#[derive(Clone, Debug, Serialize)]
pub struct CoherentScanRow {
    pub twice_j: u32,
    pub negativity: f64,
    /// Minimum of `W_{|j,j>}` over the polar angle.
    pub min_wigner: f64,
    pub theta_at_min: f64,
}

/// Negativity and Wigner minimum of `|j,j>` for every `j` up to `j_max`.
pub fn coherent_negativity_scan(j_max: Spin, rel_tol: f64) -> Result<Vec<CoherentScanRow>> {
    (1..=j_max.twice())
        .map(|tj| {
            let spin = Spin::from_twice(tj);
            let psi = SpinState::dicke(spin, HalfInt::from(spin));
            let series = WignerSeries::from_state(&psi);
            let negativity =
                negativity_of_series(&series, NegativityOptions::with_tol(rel_tol))?.value;
            let (theta_at_min, min_wigner) = polar_minimum(&series);
            Ok(CoherentScanRow {
                twice_j: tj,
                negativity,
                min_wigner,
                theta_at_min,
            })
        })
        .collect()
}

/// Minimum of an azimuthally symmetric Wigner function over `theta`.
fn polar_minimum(series: &WignerSeries) -> (f64, f64) {
    let f = |t: f64| series.eval(t, 0.0);
    let n = 2000;
    let h = PI / n as f64;
    let (mut best_t, mut best) = (0.0, f(0.0));
    for i in 1..=n {
        let t = i as f64 * h;
        let v = f(t);
        if v < best {
            (best_t, best) = (t, v);
        }
    }
    // golden-section polish inside the bracketing cells
    let (mut lo, mut hi) = ((best_t - h).max(0.0), (best_t + h).min(PI));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let x1 = hi - g * (hi - lo);
        let x2 = lo + g * (hi - lo);
        if f(x1) < f(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    let t = 0.5 * (lo + hi);
    let v = f(t);
    if v < best {
        (t, v)
    } else {
        (best_t, best)
    }
}
