use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::eigen::eigenvalues_unchecked;
use super::{tensor, ComplexMatrix, StateVector};
use crate::{Error, Result};

/// Tolerance for the Hermitian, unit-trace and PSD invariants.
pub const VALIDITY_TOL: f64 = 1e-10;
/// Largest supported matrix order (dense algorithms only).
pub const MAX_ORDER: usize = 4096;

/// Hermitian, positive semidefinite, unit-trace matrix with its subsystem
/// dimensions `[n_1, …, n_N]`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: ComplexMatrix,
}

/// Residuals of the density-matrix invariants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Validity {
    pub hermitian_residual: f64,
    pub trace_residual: f64,
    pub min_eigenvalue: f64,
}

impl Validity {
    pub fn within(&self, tol: f64) -> bool {
        self.hermitian_residual <= tol && self.trace_residual <= tol && self.min_eigenvalue >= -tol
    }
}

/// Checks subsystem dimensions against a matrix order.
pub fn check_dims(dims: &[usize], order: usize) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::InvalidDims("no subsystems".into()));
    }
    if let Some(d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::InvalidDims(format!("subsystem dimension {d} < 2")));
    }
    let product = dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .filter(|&p| p <= MAX_ORDER)
        .ok_or_else(|| Error::InvalidDims(format!("order exceeds {MAX_ORDER}")))?;
    if product != order {
        return Err(Error::InvalidDims(format!(
            "product of {dims:?} is {product}, matrix order is {order}"
        )));
    }
    Ok(())
}

pub fn validity_of(matrix: &ComplexMatrix) -> Validity {
    let hermitian_residual = matrix.hermitian_residual();
    let trace = matrix.trace();
    let trace_residual = libm::hypot(trace.re - 1.0, trace.im);
    let min_eigenvalue = eigenvalues_unchecked(matrix)
        .first()
        .copied()
        .unwrap_or(f64::NAN);
    Validity {
        hermitian_residual,
        trace_residual,
        min_eigenvalue,
    }
}

impl DensityMatrix {
    /// Validates all invariants.
    pub fn new(dims: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidDims(format!(
                "matrix is {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        check_dims(&dims, matrix.rows())?;
        let v = validity_of(&matrix);
        if v.hermitian_residual > VALIDITY_TOL {
            return Err(Error::NotHermitian {
                residual: v.hermitian_residual,
            });
        }
        if v.trace_residual > VALIDITY_TOL {
            return Err(Error::NotUnitTrace {
                trace: matrix.trace().re,
            });
        }
        if !(v.min_eigenvalue >= -VALIDITY_TOL) {
            return Err(Error::NotPositive {
                min_eigenvalue: v.min_eigenvalue,
            });
        }
        Ok(Self { dims, matrix })
    }

    /// Internal constructor for matrices valid by construction.
    pub(crate) fn from_parts_unchecked(dims: Vec<usize>, matrix: ComplexMatrix) -> Self {
        debug_assert!(check_dims(&dims, matrix.rows()).is_ok());
        Self { dims, matrix }
    }

    /// `|ψ⟩⟨ψ|` for a normalized vector.
    pub fn pure(dims: Vec<usize>, psi: &StateVector) -> Result<Self> {
        check_dims(&dims, psi.dim())?;
        let psi = StateVector::unit(psi.amplitudes().to_vec())?;
        Ok(Self {
            dims,
            matrix: psi.projector(),
        })
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let n: usize = dims.iter().product();
        check_dims(&dims, n)?;
        let mut m = ComplexMatrix::identity(n);
        m.scale_mut(1.0 / n as f64);
        Ok(Self { dims, matrix: m })
    }

    /// Normalizes a PSD operator by its trace.
    pub fn from_unnormalized(dims: Vec<usize>, op: &ComplexMatrix) -> Result<Self> {
        let tr = op.trace().re;
        if !(tr > 0.0) {
            return Err(Error::NotUnitTrace { trace: tr });
        }
        Self::new(dims, op.hermitian_part().scaled(1.0 / tr))
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn order(&self) -> usize {
        self.matrix.rows()
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn validity(&self) -> Validity {
        validity_of(&self.matrix)
    }

    /// `ρ ⊗ σ` with concatenated dimensions.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self {
            dims,
            matrix: tensor(&self.matrix, &other.matrix),
        }
    }

    /// `U ρ U†` for a unitary of matching order.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        if u.rows() != self.order() || u.cols() != self.order() {
            return Err(Error::DimensionMismatch {
                expected: self.order(),
                found: u.rows(),
            });
        }
        Ok(Self {
            dims: self.dims.clone(),
            matrix: self.matrix.conjugate_by(u).hermitian_part(),
        })
    }

    /// Mixture `Σ w_k ρ_k` of states with identical dimensions.
    pub fn mixture(terms: &[(f64, &DensityMatrix)]) -> Result<DensityMatrix> {
        let (_, first) = terms
            .first()
            .ok_or_else(|| Error::InvalidWeights("empty mixture".into()))?;
        let mut m = ComplexMatrix::zeros(first.order(), first.order());
        for (w, rho) in terms {
            if rho.dims != first.dims {
                return Err(Error::DimensionMismatch {
                    expected: first.order(),
                    found: rho.order(),
                });
            }
            m.add_scaled(&rho.matrix, Complex64::new(*w, 0.0));
        }
        Self::new(first.dims.clone(), m)
    }
}
