use alloc::vec::Vec;

use num_complex::Complex64;

use crate::qmat::linalg::{condition_number, inverse};
use crate::qmat::{ComplexMatrix, StateVector, NORMALIZATION_TOL};
use crate::{Error, Result};

/// Default cap on the condition number of a basis matrix.
pub const DEFAULT_CONDITION_CAP: f64 = 1e8;

/// A normalized, linearly independent (not necessarily orthogonal) basis
/// `{|i⟩}` together with its dual basis `{|ĩ⟩}`, `⟨i|j̃⟩ = δ_ij`.
#[derive(Clone, Debug, PartialEq)]
pub struct ObliqueBasis {
    vectors: Vec<StateVector>,
    duals: Vec<StateVector>,
    condition: f64,
}

/// Computes the dual basis of `n` unit vectors in dimension `n`.
///
/// With the vectors stacked as the columns of `S`, the duals are the columns
/// of `(S†)⁻¹`. Sets whose condition number exceeds `condition_cap` are
/// rejected with the condition number in the error.
pub fn dual_basis(vectors: Vec<StateVector>, condition_cap: f64) -> Result<ObliqueBasis> {
    let n = vectors.len();
    if n == 0 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: 0,
        });
    }
    for (index, v) in vectors.iter().enumerate() {
        if v.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.dim(),
            });
        }
        let norm = v.norm();
        if !v.is_normalized() || (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { index, norm });
        }
    }
    let columns: Vec<&[Complex64]> = vectors.iter().map(StateVector::amplitudes).collect();
    let s = ComplexMatrix::from_columns(&columns);
    let condition = condition_number(&s);
    let ill = |condition| Error::IllConditioned {
        condition,
        cap: condition_cap,
    };
    if !(condition <= condition_cap) {
        return Err(ill(condition));
    }
    let inv = inverse(&s.adjoint()).ok_or(ill(f64::INFINITY))?;
    let duals = (0..n)
        .map(|j| StateVector::unnormalized(inv.column(j)))
        .collect();
    Ok(ObliqueBasis {
        vectors,
        duals,
        condition,
    })
}

impl ObliqueBasis {
    /// Dual basis with the default condition cap.
    pub fn new(vectors: Vec<StateVector>) -> Result<Self> {
        dual_basis(vectors, DEFAULT_CONDITION_CAP)
    }

    pub fn with_condition_cap(vectors: Vec<StateVector>, condition_cap: f64) -> Result<Self> {
        dual_basis(vectors, condition_cap)
    }

    /// Normalizes each column of `m` and builds the basis.
    pub fn from_columns(m: &ComplexMatrix, condition_cap: f64) -> Result<Self> {
        let vectors = (0..m.cols())
            .map(|j| {
                StateVector::normalized(m.column(j)).map_err(|e| match e {
                    Error::NotNormalized { norm, .. } => Error::NotNormalized { index: j, norm },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        dual_basis(vectors, condition_cap)
    }

    /// `{|0⟩, …, |n−1⟩}`.
    pub fn computational(dim: usize) -> Self {
        let vectors: Vec<StateVector> = (0..dim).map(|k| StateVector::basis(dim, k)).collect();
        let duals = (0..dim)
            .map(|k| StateVector::unnormalized(StateVector::basis(dim, k).amplitudes().to_vec()))
            .collect();
        Self {
            vectors,
            duals,
            condition: 1.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[StateVector] {
        &self.vectors
    }

    pub fn duals(&self) -> &[StateVector] {
        &self.duals
    }

    /// Condition number of the matrix whose columns are the basis vectors.
    pub fn condition(&self) -> f64 {
        self.condition
    }

    /// Gram matrix `G_ij = ⟨i|j⟩`.
    pub fn gram(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut g = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = self.vectors[i].inner(&self.vectors[j]);
            }
        }
        g
    }

    /// `max_ij |⟨i|j̃⟩ − δ_ij|`.
    pub fn biorthogonality_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, v) in self.vectors.iter().enumerate() {
            for (j, d) in self.duals.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((v.inner(d) - target).norm());
            }
        }
        worst
    }

    /// Whether the basis is orthonormal within `tol` (entrywise on the Gram matrix).
    pub fn is_orthonormal(&self, tol: f64) -> bool {
        self.gram()
            .max_abs_diff(&ComplexMatrix::identity(self.dim()))
            <= tol
    }

    /// Largest off-diagonal overlap `max_{i≠j} |⟨i|j⟩|`.
    pub fn max_overlap(&self) -> f64 {
        let g = self.gram();
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    worst = worst.max(g[(i, j)].norm());
                }
            }
        }
        worst
    }
}
