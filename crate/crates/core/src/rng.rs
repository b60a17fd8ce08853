//! Seeded random sampling of vectors, matrices and maps.
//!
//! Every stream is a ChaCha8 generator keyed by `(seed, stream)`, so restart
//! `i` of a search draws the same numbers whether it runs first, last or on
//! another thread.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::matrix::{ComplexMatrix, C64};
use crate::spectrum::normalize;

pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Complex number with independent standard-normal parts.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    loop {
        let mut v: Vec<C64> = (0..n).map(|_| complex_normal(rng)).collect();
        if normalize(&mut v) > 1e-8 {
            return v;
        }
    }
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Gaussian matrix rescaled to `‖X‖_F² = target`.
pub fn scaled_gaussian_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    target_norm_sqr: f64,
) -> ComplexMatrix {
    let g = gaussian_matrix(rng, rows, cols);
    let norm = g.frobenius_norm();
    g.scale_real(target_norm_sqr.sqrt() / norm)
}

pub fn gaussian_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    gaussian_matrix(rng, n, n).hermitian_part()
}

/// Random density matrix `G G* / Tr(G G*)` with `G` of shape `n × rank`.
pub fn density_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, rank.max(1));
    let rho = &g * &g.adjoint();
    let tr = rho.trace().re;
    rho.scale_real(1.0 / tr).hermitian_part()
}

pub fn exponential<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(Exp1)
}
