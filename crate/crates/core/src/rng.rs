//! Seeded randomness. All sampling in the crate flows from one `u64` seed
//! through xoshiro256++ seeded by splitmix64.

use alloc::vec::Vec;
use num_traits::Float;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::linalg::{CMatrix, C64};

#[derive(Clone, Debug)]
pub struct Rng(Xoshiro256PlusPlus);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(Xoshiro256PlusPlus::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform on [0, 1) with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `0..n`; `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }

    /// Standard normal via Box–Muller.
    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        Float::sqrt(-2.0 * Float::ln(u1)) * Float::cos(core::f64::consts::TAU * u2)
    }

    pub fn complex_normal(&mut self) -> C64 {
        let re = self.normal();
        let im = self.normal();
        C64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
    }

    /// Matrix with iid standard complex Gaussian entries.
    pub fn ginibre(&mut self, rows: usize, cols: usize) -> CMatrix {
        let data: Vec<C64> = (0..rows * cols).map(|_| self.complex_normal()).collect();
        CMatrix::from_vec(rows, cols, data)
    }

    /// Haar-ish unitary: Gram–Schmidt on a Ginibre matrix.
    pub fn unitary(&mut self, n: usize) -> CMatrix {
        loop {
            let g = self.ginibre(n, n);
            if let Some(q) = g.orthonormalize_columns(1e-8) {
                if q.cols == n {
                    return q;
                }
            }
        }
    }

    pub fn hermitian(&mut self, n: usize) -> CMatrix {
        let g = self.ginibre(n, n);
        g.add(&g.adjoint()).scale_re(0.5)
    }

    /// Effect with uniformly drawn spectrum in [0, 1] and random eigenbasis.
    pub fn effect(&mut self, n: usize) -> CMatrix {
        let spectrum: Vec<f64> = (0..n).map(|_| self.uniform()).collect();
        self.with_spectrum(&spectrum)
    }

    /// Projection of uniformly drawn rank `0..=n` in a random basis.
    pub fn projection(&mut self, n: usize) -> CMatrix {
        let rank = self.below(n + 1);
        self.projection_of_rank(n, rank)
    }

    pub fn projection_of_rank(&mut self, n: usize, rank: usize) -> CMatrix {
        let spectrum: Vec<f64> = (0..n).map(|i| if i < rank { 1.0 } else { 0.0 }).collect();
        self.with_spectrum(&spectrum)
    }

    fn with_spectrum(&mut self, spectrum: &[f64]) -> CMatrix {
        let n = spectrum.len();
        let u = self.unitary(n);
        let d = CMatrix::diag_real(spectrum);
        u.mul(&d).mul(&u.adjoint()).hermitian_part()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = Rng::new(7);
        let mut b = Rng::new(7);
        for _ in 0..16 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn unitary_is_unitary() {
        let mut r = Rng::new(1);
        let u = r.unitary(5);
        assert!(u.adjoint().mul(&u).sub(&CMatrix::identity(5)).max_abs() < 1e-12);
    }

    #[test]
    fn uniform_range() {
        let mut r = Rng::new(3);
        for _ in 0..1000 {
            let x = r.uniform();
            assert!((0.0..1.0).contains(&x));
        }
    }
}
