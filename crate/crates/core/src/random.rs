//! Seeded random states and observables for the property harnesses.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::density::DensityMatrix;
use crate::matrix::{ComplexMatrix, HermitianMatrix, C64};

pub type TrialRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed for trial `index` of a run started from `base`, independent of execution order.
pub fn trial_seed(base: u64, index: u64) -> u64 {
    // splitmix64 finalizer over the combined input
    let mut z = base ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Standard complex Gaussian entry: real and imaginary parts N(0, 1/2).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Ginibre matrix with i.i.d. standard complex Gaussian entries.
pub fn random_complex<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let data = (0..dim * dim).map(|_| complex_gaussian(rng)).collect();
    ComplexMatrix::new(dim, data).expect("dim > 0")
}

/// `(G + G*)/2` for a Ginibre matrix `G`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> HermitianMatrix {
    HermitianMatrix::from_hermitian_part(&random_complex(rng, dim))
}

/// `M*M / Tr(M*M)` for a Ginibre matrix `M`; positive definite with probability one.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    loop {
        let m = random_complex(rng, dim);
        let gram = &m.adjoint() * &m;
        let tr = gram.trace().re;
        if let Ok(rho) = DensityMatrix::new(gram.scale_real(1.0 / tr)) {
            return rho;
        }
    }
}

/// Projector onto a Haar-random unit vector.
pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let psi: Vec<C64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut out = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            out[(i, j)] = psi[i] * psi[j].conj() / (norm * norm);
        }
    }
    out
}
