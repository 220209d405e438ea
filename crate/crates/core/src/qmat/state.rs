use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::{Error, Result};

/// Normalized vectors must have unit norm to this tolerance.
pub const NORMALIZATION_TOL: f64 = 1e-10;

/// A vector on one subsystem. Basis vectors carry `normalized = true`; dual
/// vectors are generally not unit length and carry `normalized = false`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    normalized: bool,
}

impl StateVector {
    /// Rescales `amplitudes` to unit norm. Fails on a zero or non-finite vector.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = l2_norm(&amplitudes);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::NotNormalized { index: 0, norm });
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|z| z / norm).collect(),
            normalized: true,
        })
    }

    /// Wraps amplitudes that are already unit norm, checking the norm.
    pub fn unit(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = l2_norm(&amplitudes);
        if (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { index: 0, norm });
        }
        Ok(Self {
            amplitudes,
            normalized: true,
        })
    }

    /// A vector exempt from the normalization invariant.
    pub fn unnormalized(amplitudes: Vec<Complex64>) -> Self {
        Self {
            amplitudes,
            normalized: false,
        }
    }

    /// Computational basis vector `|k⟩` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[k] = Complex64::new(1.0, 0.0);
        Self {
            amplitudes,
            normalized: true,
        }
    }

    /// `(|0⟩ + |1⟩)/√2`.
    pub fn plus() -> Self {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        Self {
            amplitudes: vec![Complex64::new(s, 0.0), Complex64::new(s, 0.0)],
            normalized: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amplitudes)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|v⟩⟨v|`.
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }
}

pub(crate) fn l2_norm(v: &[Complex64]) -> f64 {
    libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum())
}
