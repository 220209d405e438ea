use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channels::{dual_basis, ObliqueBasis};
use crate::qmat::linalg::qr_unitary;
use crate::qmat::{check_dims, ComplexMatrix, DensityMatrix, StateVector};
use crate::{Error, Result};

/// Attempts before [`random_oblique_basis`] gives up.
pub const RESAMPLE_BUDGET: usize = 100;

/// Seed for the crate's generator, ChaCha8 (`rand_chacha`) initialized with
/// `seed_from_u64`. The stream is platform independent.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// `seed ⊕ index`; used for optimizer restarts.
    pub fn derive(self, index: u64) -> RngSeed {
        RngSeed(self.0 ^ index)
    }

    /// Hash-mixed child seed `splitmix64(seed ⊕ splitmix64(index))`; used for
    /// search samples so that neighbouring indices get unrelated streams.
    pub fn mix(self, index: u64) -> RngSeed {
        RngSeed(splitmix64(self.0 ^ splitmix64(index)))
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Standard complex Gaussian: real and imaginary parts drawn in that order.
pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Row-major complex Gaussian matrix.
pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| gaussian_complex(rng)).collect();
    ComplexMatrix::from_row_major(rows, cols, data).expect("length matches")
}

/// `GG†/tr(GG†)` for a complex Gaussian `order × rank` matrix `G`.
pub fn random_density(dims: &[usize], rank: usize, seed: RngSeed) -> Result<DensityMatrix> {
    random_density_with(dims, rank, &mut seed.rng())
}

pub fn random_density_with<R: Rng + ?Sized>(
    dims: &[usize],
    rank: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    let order: usize = dims.iter().product();
    check_dims(dims, order)?;
    if rank == 0 || rank > order {
        return Err(Error::InvalidConfig(alloc::format!(
            "rank {rank} outside 1..={order}"
        )));
    }
    let g = gaussian_matrix(order, rank, rng);
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    Ok(DensityMatrix::from_parts_unchecked(
        dims.to_vec(),
        m.hermitian_part().scaled(1.0 / tr),
    ))
}

/// `dim` normalized complex Gaussian vectors, resampled until the condition
/// number is within `condition_cap`.
pub fn random_oblique_basis(dim: usize, condition_cap: f64, seed: RngSeed) -> Result<ObliqueBasis> {
    random_oblique_basis_with(dim, condition_cap, &mut seed.rng())
}

pub fn random_oblique_basis_with<R: Rng + ?Sized>(
    dim: usize,
    condition_cap: f64,
    rng: &mut R,
) -> Result<ObliqueBasis> {
    if dim < 2 {
        return Err(Error::InvalidDims(alloc::format!(
            "basis dimension {dim} < 2"
        )));
    }
    for _ in 0..RESAMPLE_BUDGET {
        let vectors: Result<Vec<StateVector>> = (0..dim)
            .map(|_| StateVector::normalized((0..dim).map(|_| gaussian_complex(rng)).collect()))
            .collect();
        match vectors.and_then(|v| dual_basis(v, condition_cap)) {
            Ok(basis) => return Ok(basis),
            Err(Error::IllConditioned { .. }) | Err(Error::NotNormalized { .. }) => continue,
            Err(other) => return Err(other),
        }
    }
    Err(Error::ResampleBudgetExhausted {
        attempts: RESAMPLE_BUDGET,
    })
}

/// Haar-random unitary via QR of a complex Gaussian matrix.
pub fn random_unitary(dim: usize, seed: RngSeed) -> ComplexMatrix {
    random_unitary_with(dim, &mut seed.rng())
}

pub fn random_unitary_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    qr_unitary(&gaussian_matrix(dim, dim, rng))
}
