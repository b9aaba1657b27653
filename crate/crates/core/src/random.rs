//! Seeded instance generators shared by the models, measurements and
//! certification campaigns.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c, hermitian_part, trace, ComplexMatrix, DensityMatrix, HermitianMatrix};

/// Weight of `I/d` mixed into random full-rank states.
pub const MIXING_WEIGHT: f64 = 0.1;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derive an independent seed for `index` within a campaign (SplitMix64 finalizer).
pub fn trial_seed(campaign_seed: u64, index: u64) -> u64 {
    let mut z =
        campaign_seed.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Matrix with i.i.d. standard complex Gaussian entries (`E|z|² = 1`).
pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(s * re, s * im)
    })
}

/// Hermitian part of a complex Gaussian matrix.
pub fn gaussian_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> HermitianMatrix {
    HermitianMatrix::hermitize(&hermitian_part(&gaussian_matrix(rng, dim, dim)))
}

/// Hilbert–Schmidt random state `AA†/tr(AA†)` mixed with `I/d` at weight
/// [`MIXING_WEIGHT`], so every eigenvalue is at least `0.1/d`.
pub fn random_density_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    let a = gaussian_matrix(rng, dim, dim);
    let aa = &a * a.adjoint();
    let hs = aa.unscale(trace(&aa).re);
    let mixed = hs.scale(1.0 - MIXING_WEIGHT)
        + ComplexMatrix::identity(dim, dim).scale(MIXING_WEIGHT / dim as f64);
    DensityMatrix::new(hermitian_part(&mixed)).expect("mixture of states is a state")
}

/// Columns of a random `rows × cols` isometry (`rows ≥ cols`).
pub fn random_isometry<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    gaussian_matrix(rng, rows, cols).qr().q()
}
