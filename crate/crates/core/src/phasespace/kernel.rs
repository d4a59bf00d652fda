use serde::{Deserialize, Serialize};

use crate::angular::{clebsch_gordan, HalfInt, Spin};

/// Eigenvalues `Delta_{j,m}` of the Wigner kernel at the north pole,
/// ordered from `m = -j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelSpectrum {
    pub spin: Spin,
    pub delta: Vec<f64>,
}

impl KernelSpectrum {
    pub fn get(&self, m: HalfInt) -> f64 {
        self.delta[self.spin.index_of(m)]
    }
}

/// `Delta_{j,m} = sum_l (2l+1)/(2j+1) C^{jm}_{jm;l0}`, each coefficient exact
/// before conversion.
pub fn kernel_spectrum(spin: Spin) -> KernelSpectrum {
    let tj = spin.twice();
    let dim = spin.dim() as f64;
    let delta = spin
        .projections()
        .map(|m| {
            (0..=tj)
                .map(|l| {
                    let c =
                        clebsch_gordan(spin, m, Spin::from_twice(2 * l), HalfInt::ZERO, spin, m);
                    (2 * l + 1) as f64 / dim * c.to_f64()
                })
                .sum()
        })
        .collect();
    KernelSpectrum { spin, delta }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_values() {
        let k = kernel_spectrum(Spin::from_twice(1));
        let r3 = 3f64.sqrt() / 2.0;
        assert!((k.delta[0] - (0.5 - r3)).abs() < 1e-15);
        assert!((k.delta[1] - (0.5 + r3)).abs() < 1e-15);
    }

    #[test]
    fn unit_trace() {
        for tj in 1..=20 {
            let k = kernel_spectrum(Spin::from_twice(tj));
            assert!((k.delta.iter().sum::<f64>() - 1.0).abs() < 1e-12, "2j={tj}");
        }
    }

    #[test]
    fn spin_one_top_value() {
        let k = kernel_spectrum(Spin::from_twice(2));
        let expect = (1.0 - (5.0f64 / 8.0).sqrt()) / 3.0 + 0.5f64.sqrt() + 0.5 * 2.5f64.sqrt();
        assert!((k.get(HalfInt::from_twice(2)) - expect).abs() < 1e-14);
    }
}
