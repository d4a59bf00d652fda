//! Haar-random pure states and batch statistics of negativity and one-qubit
//! linear entropy.
//!
//! Sample `i` of a batch draws from ChaCha8 stream `i` of the batch seed, so
//! results do not depend on thread count or scheduling, and the negativity
//! and entropy of a joint batch are evaluated on the same states.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::angular::Spin;
use crate::error::{Error, Result};
use crate::io::fmt_sig;
use crate::measures::{known_max, linear_entropy_one_qubit};
use crate::phasespace::negativity;
use crate::stellar::SpinState;

/// Negativity tolerance used for sampled states.
pub const SAMPLE_REL_TOL: f64 = 1e-4;
pub const DEFAULT_BINS: usize = 100;
pub const DEFAULT_SAMPLES: usize = 20_000;

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// Haar-random state: a normalized complex Gaussian vector, distributed as
/// one column of a CUE matrix.
pub fn haar_state<R: Rng + ?Sized>(spin: Spin, rng: &mut R) -> SpinState {
    loop {
        let amps: Vec<Complex64> = (0..spin.dim()).map(|_| complex_normal(rng)).collect();
        if let Ok(s) = SpinState::new(spin, amps) {
            return s;
        }
    }
}

/// CUE matrix from the QR decomposition of a Ginibre matrix, with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn cue_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| complex_normal(rng));
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, k)] *= phase;
        }
    }
    q
}

/// Applies a CUE matrix to the fiducial `|j, j>`.
pub fn cue_state<R: Rng + ?Sized>(spin: Spin, rng: &mut R) -> SpinState {
    let u = cue_matrix(spin.dim(), rng);
    let top = spin.dim() - 1;
    SpinState::new(spin, (0..spin.dim()).map(|i| u[(i, top)]).collect()).expect("unitary column")
}

/// RNG for sample `index` of a batch.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Negativity,
    Entropy,
}

impl Measure {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "negativity" => Ok(Measure::Negativity),
            "entropy" => Ok(Measure::Entropy),
            _ => Err(Error::Parse(format!(
                "unknown measure {s:?} (negativity|entropy)"
            ))),
        }
    }

    /// Largest value used for the "within p percent of max" fraction:
    /// Known maxima for negativity up to spin 7/2, the entropy bound 1/2.
    pub fn reference_max(self, spin: Spin) -> Option<f64> {
        match self {
            Measure::Negativity => known_max(spin),
            Measure::Entropy => Some(0.5),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BatchStats {
    pub spin: Spin,
    pub measure: Measure,
    pub n_samples: usize,
    pub seed: u64,
    #[serde(skip)]
    pub values: Vec<f64>,
    pub mean: f64,
    pub std: f64,
    pub max: f64,
    pub min: f64,
}

impl BatchStats {
    pub fn new(spin: Spin, measure: Measure, seed: u64, values: Vec<f64>) -> Self {
        let n = values.len();
        assert!(n > 0, "empty batch");
        let mean = crate::phasespace::pairwise_sum(&values) / n as f64;
        let var = if n > 1 {
            let dev: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
            crate::phasespace::pairwise_sum(&dev) / (n - 1) as f64
        } else {
            0.0
        };
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        BatchStats {
            spin,
            measure,
            n_samples: n,
            seed,
            values,
            mean,
            std: var.sqrt(),
            max,
            min,
        }
    }

    /// Fraction of samples `>= (1 - pct/100) * reference`.
    pub fn fraction_within(&self, pct: f64, reference: f64) -> f64 {
        let cut = (1.0 - pct / 100.0) * reference;
        self.values.iter().filter(|&&v| v >= cut).count() as f64 / self.n_samples as f64
    }

    /// Reference defaults to [`Measure::reference_max`], else the sample max.
    pub fn fraction_near_max(&self, pct: f64) -> f64 {
        let reference = self.measure.reference_max(self.spin).unwrap_or(self.max);
        self.fraction_within(pct, reference)
    }

    pub fn histogram(&self, bins: usize) -> Histogram {
        Histogram::new(&self.values, bins, self.min, self.max)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Histogram {
    /// Equal-width bins over `[lo, hi]`; the last bin is closed.
    pub fn new(values: &[f64], bins: usize, lo: f64, hi: f64) -> Self {
        let bins = bins.max(1);
        let width = if hi > lo {
            (hi - lo) / bins as f64
        } else {
            1.0
        };
        let edges = (0..=bins).map(|i| lo + width * i as f64).collect();
        let mut counts = vec![0; bins];
        for &v in values {
            let k = (((v - lo) / width) as usize).min(bins - 1);
            counts[k] += 1;
        }
        Histogram { edges, counts }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("bin_left,bin_right,count\n");
        for (i, c) in self.counts.iter().enumerate() {
            s += &format!(
                "{},{},{}\n",
                fmt_sig(self.edges[i]),
                fmt_sig(self.edges[i + 1]),
                c
            );
        }
        s
    }

    /// Centre of the fullest bin.
    pub fn mode(&self) -> f64 {
        let i = (0..self.counts.len())
            .max_by_key(|&i| (self.counts[i], std::cmp::Reverse(i)))
            .expect("bins");
        0.5 * (self.edges[i] + self.edges[i + 1])
    }
}

/// Negativity and entropy of the same `n` Haar states.
pub fn sample_joint(
    spin: Spin,
    n: usize,
    seed: u64,
    rel_tol: f64,
) -> Result<(BatchStats, BatchStats)> {
    let pairs: Vec<(f64, f64)> = (0..n.max(1) as u64)
        .into_par_iter()
        .map(|i| {
            let psi = haar_state(spin, &mut substream(seed, i));
            Ok((negativity(&psi, rel_tol)?, linear_entropy_one_qubit(&psi)))
        })
        .collect::<Result<_>>()?;
    let (neg, ent): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    Ok((
        BatchStats::new(spin, Measure::Negativity, seed, neg),
        BatchStats::new(spin, Measure::Entropy, seed, ent),
    ))
}

pub fn sample(
    spin: Spin,
    n: usize,
    seed: u64,
    measure: Measure,
    rel_tol: f64,
) -> Result<BatchStats> {
    let values: Vec<f64> = (0..n.max(1) as u64)
        .into_par_iter()
        .map(|i| {
            let psi = haar_state(spin, &mut substream(seed, i));
            match measure {
                Measure::Negativity => negativity(&psi, rel_tol),
                Measure::Entropy => Ok(linear_entropy_one_qubit(&psi)),
            }
        })
        .collect::<Result<_>>()?;
    Ok(BatchStats::new(spin, measure, seed, values))
}

pub fn negativity_histogram(
    spin: Spin,
    n: usize,
    seed: u64,
    bins: usize,
) -> Result<(BatchStats, Histogram)> {
    let stats = sample(spin, n, seed, Measure::Negativity, SAMPLE_REL_TOL)?;
    let h = stats.histogram(bins);
    Ok((stats, h))
}

pub fn entropy_histogram(
    spin: Spin,
    n: usize,
    seed: u64,
    bins: usize,
) -> Result<(BatchStats, Histogram)> {
    let stats = sample(spin, n, seed, Measure::Entropy, SAMPLE_REL_TOL)?;
    let h = stats.histogram(bins);
    Ok((stats, h))
}

/// Fraction of Haar states whose negativity is within `pct` percent of
/// `reference_max` (default: the known maximum, else the sample maximum).
pub fn fraction_near_max(
    spin: Spin,
    n: usize,
    seed: u64,
    pct: f64,
    reference_max: Option<f64>,
) -> Result<f64> {
    if let Some(r) = reference_max {
        if r <= 0.0 {
            return Err(Error::Invalid(format!(
                "reference maximum must be positive, got {r}"
            )));
        }
    }
    let stats = sample(spin, n, seed, Measure::Negativity, SAMPLE_REL_TOL)?;
    Ok(match reference_max {
        Some(r) => stats.fraction_within(pct, r),
        None => stats.fraction_near_max(pct),
    })
}
