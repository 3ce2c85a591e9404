//! Seeded random operators for property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{ComplexMatrix, StateVector, C64};

/// Deterministic generator of random Hermitian matrices, density matrices and states.
pub struct RandomOps {
    rng: ChaCha8Rng,
}

impl RandomOps {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn entry(&mut self) -> C64 {
        C64::new(self.rng.gen_range(-1.0..1.0), self.rng.gen_range(-1.0..1.0))
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    pub fn matrix(&mut self, dim: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(dim, |_, _| self.entry())
    }

    pub fn hermitian(&mut self, dim: usize) -> ComplexMatrix {
        self.matrix(dim).hermitian_part()
    }

    /// `A·A†` normalized to unit trace; with `rank < dim` the result is singular.
    pub fn density_matrix(&mut self, dim: usize, rank: usize) -> ComplexMatrix {
        let rank = rank.clamp(1, dim);
        let cols: Vec<Vec<C64>> = (0..rank).map(|_| (0..dim).map(|_| self.entry()).collect()).collect();
        let rho = ComplexMatrix::from_fn(dim, |i, j| cols.iter().map(|c| c[i] * c[j].conj()).sum());
        let tr = rho.trace().re;
        rho.scale(C64::new(1.0 / tr, 0.0)).hermitian_part()
    }

    pub fn state(&mut self, dim: usize) -> StateVector {
        let amps: Vec<C64> = (0..dim).map(|_| self.entry()).collect();
        StateVector::normalized(amps).expect("random amplitudes are almost surely nonzero")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_well_formed() {
        let a = RandomOps::new(7).hermitian(4);
        let b = RandomOps::new(7).hermitian(4);
        assert_eq!(a.max_abs_diff(&b), 0.0);
        assert!(a.is_hermitian(0.0));
        let rho = RandomOps::new(1).density_matrix(8, 3);
        assert!((rho.trace().re - 1.0).abs() < 1e-14);
        let spec = crate::linalg::eigh(&rho).unwrap();
        assert!(spec.eigenvalues.iter().all(|&l| l > -1e-12));
        assert_eq!(spec.eigenvalues.iter().filter(|&&l| l > 1e-10).count(), 3);
        assert!((RandomOps::new(3).state(16).norm_sqr() - 1.0).abs() < 1e-12);
    }
}
