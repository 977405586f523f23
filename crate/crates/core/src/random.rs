//! Seeded generators for verification inputs.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::series::TaylorSeries;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Point of the unit box `[-1, 1) × [-1, 1)`.
pub fn unit_box(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Polynomial of uniformly random degree in `0..=max_degree` with
/// unit-box coefficients.
pub fn polynomial(rng: &mut impl Rng, max_degree: usize) -> TaylorSeries {
    let degree = rng.gen_range(0..=max_degree);
    polynomial_of_degree(rng, degree)
}

pub fn polynomial_of_degree(rng: &mut impl Rng, degree: usize) -> TaylorSeries {
    TaylorSeries::new((0..=degree).map(|_| unit_box(rng)).collect())
}

/// Random element of `S_{n,0}`: the first `n` coefficients are zeroed.
pub fn vanishing_polynomial(rng: &mut impl Rng, max_degree: usize, n: usize) -> TaylorSeries {
    let degree = rng.gen_range(n.min(max_degree)..=max_degree);
    let mut coeffs = polynomial_of_degree(rng, degree).into_coeffs();
    for c in coeffs.iter_mut().take(n) {
        *c = Complex64::new(0.0, 0.0);
    }
    TaylorSeries::new(coeffs)
}
