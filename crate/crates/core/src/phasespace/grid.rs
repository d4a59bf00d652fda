use std::f64::consts::PI;

use crate::angular::{gauss_legendre, Spin};

/// Product quadrature on the sphere: Gauss-Legendre in `cos(theta)` times the
/// periodic trapezoid rule in `phi`. Weights include the `(2j+1)/(4 pi)`
/// measure factor, so they sum to `2j + 1`.
///
/// Exact for spherical polynomials of degree below `2 n_theta` in `cos(theta)`
/// and below `n_phi` in azimuthal frequency.
#[derive(Clone, Debug)]
pub struct SphereGrid {
    spin: Spin,
    theta: Vec<f64>,
    cos_theta: Vec<f64>,
    sin_theta: Vec<f64>,
    w_theta: Vec<f64>,
    n_phi: usize,
}

impl SphereGrid {
    pub fn new(spin: Spin, n_theta: usize, n_phi: usize) -> Self {
        assert!(n_theta >= 1 && n_phi >= 1, "empty grid");
        let (x, w) = gauss_legendre(n_theta);
        let scale = (2.0 * PI / n_phi as f64) * (spin.dim() as f64) / (4.0 * PI);
        // descending x so that theta ascends
        let cos_theta: Vec<f64> = x.iter().rev().copied().collect();
        let w_theta: Vec<f64> = w.iter().rev().map(|wi| wi * scale).collect();
        let theta = cos_theta.iter().map(|c| c.acos()).collect();
        let sin_theta = cos_theta
            .iter()
            .map(|c| (1.0 - c * c).max(0.0).sqrt())
            .collect();
        SphereGrid {
            spin,
            theta,
            cos_theta,
            sin_theta,
            w_theta,
            n_phi,
        }
    }

    /// `n_theta = n`, `n_phi = 2n`.
    pub fn square(spin: Spin, n: usize) -> Self {
        Self::new(spin, n, 2 * n)
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn n_theta(&self) -> usize {
        self.theta.len()
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn len(&self) -> usize {
        self.n_theta() * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn thetas(&self) -> &[f64] {
        &self.theta
    }

    pub(crate) fn cos_sin(&self, i: usize) -> (f64, f64) {
        (self.cos_theta[i], self.sin_theta[i])
    }

    pub fn phi(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.n_phi as f64
    }

    /// Measure weight of node `(i, k)`; independent of `k`.
    pub fn weight(&self, i: usize) -> f64 {
        self.w_theta[i]
    }

    /// `(theta, phi, weight)` in row-major order, theta outermost.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        (0..self.n_theta()).flat_map(move |i| {
            (0..self.n_phi).map(move |k| (self.theta[i], self.phi(k), self.w_theta[i]))
        })
    }

    /// Weighted sum of a row-major field over the grid, pairwise reduced.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.len());
        let rows: Vec<f64> = values
            .chunks(self.n_phi)
            .zip(&self.w_theta)
            .map(|(row, w)| w * pairwise_sum(row))
            .collect();
        pairwise_sum(&rows)
    }
}

/// Tree reduction; the result depends only on the input order.
pub fn pairwise_sum(x: &[f64]) -> f64 {
    if x.len() <= 8 {
        return x.iter().sum();
    }
    let mid = x.len() / 2;
    pairwise_sum(&x[..mid]) + pairwise_sum(&x[mid..])
}
