use alloc::vec::Vec;

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::{Error, Result};

/// Inputs to the eigensolver must be Hermitian to this tolerance.
pub const HERMITIAN_INPUT_TOL: f64 = 1e-8;

/// Spectral decomposition `M = V diag(λ) V†` with ascending eigenvalues.
#[derive(Clone, Debug)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl Eigensystem {
    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(&self.values)
    }

    /// `V diag(μ) V†` for replacement eigenvalues `μ`.
    pub fn reconstruct_with(&self, values: &[f64]) -> ComplexMatrix {
        let n = self.vectors.rows();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in values.iter().enumerate() {
            if lambda == 0.0 {
                continue;
            }
            let v = self.vectors.column(k);
            for i in 0..n {
                let vi = v[i] * lambda;
                for j in 0..n {
                    out[(i, j)] += vi * v[j].conj();
                }
            }
        }
        out
    }
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    let residual = m.hermitian_residual();
    if residual > HERMITIAN_INPUT_TOL {
        return Err(Error::NotHermitian { residual });
    }
    Ok(())
}

/// Eigenvalues and eigenvectors of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigensystem(m: &ComplexMatrix) -> Result<Eigensystem> {
    check_hermitian(m)?;
    Ok(eigensystem_unchecked(m))
}

/// Eigensystem of the Hermitian part of `m`, closed form for 2×2.
pub(crate) fn eigensystem_unchecked(m: &ComplexMatrix) -> Eigensystem {
    if m.rows() == 2 {
        return eigensystem_2x2(m);
    }
    let eig = m.hermitian_part().to_nalgebra().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let n = m.rows();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, dst)] = eig.eigenvectors[(i, src)];
        }
    }
    Eigensystem {
        values: order.iter().map(|&k| eig.eigenvalues[k]).collect(),
        vectors,
    }
}

fn eigensystem_2x2(m: &ComplexMatrix) -> Eigensystem {
    let zero = Complex64::new(0.0, 0.0);
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = (m[(0, 1)] + m[(1, 0)].conj()) * 0.5;
    let mean = 0.5 * (a + d);
    let half_gap = libm::hypot(0.5 * (a - d), b.norm());
    let (lo, hi) = (mean - half_gap, mean + half_gap);
    // Eigenvector of `hi`: the larger of the two null-space candidates
    // (b, hi − a) and (hi − d, b*).
    let (u0, u1) = if b == zero {
        if a >= d {
            (Complex64::new(1.0, 0.0), zero)
        } else {
            (zero, Complex64::new(1.0, 0.0))
        }
    } else if (hi - a).abs() >= (hi - d).abs() {
        (b, Complex64::new(hi - a, 0.0))
    } else {
        (Complex64::new(hi - d, 0.0), b.conj())
    };
    let norm = libm::hypot(u0.norm(), u1.norm());
    let (u0, u1) = (u0 / norm, u1 / norm);
    let vectors = ComplexMatrix::from_row_major(2, 2, alloc::vec![-u1.conj(), u0, u0.conj(), u1])
        .expect("2x2");
    Eigensystem {
        values: alloc::vec![lo, hi],
        vectors,
    }
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    Ok(eigenvalues_unchecked(m))
}

/// Ascending eigenvalues of the Hermitian part of `m`.
pub(crate) fn eigenvalues_unchecked(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.rows();
    let mut values: Vec<f64> = match n {
        0 => Vec::new(),
        1 => alloc::vec![m[(0, 0)].re],
        2 => {
            let a = m[(0, 0)].re;
            let d = m[(1, 1)].re;
            let b = (m[(0, 1)] + m[(1, 0)].conj()) * 0.5;
            let mean = 0.5 * (a + d);
            let half_gap = libm::hypot(0.5 * (a - d), libm::hypot(b.re, b.im));
            alloc::vec![mean - half_gap, mean + half_gap]
        }
        _ => m
            .hermitian_part()
            .to_nalgebra()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect(),
    };
    values.sort_by(f64::total_cmp);
    values
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::RngSeed;
    use alloc::vec;
    use num_complex::Complex64;
    use rand::Rng;

    #[test]
    fn closed_form_2x2_eigensystem() {
        let mut rng = RngSeed(7).rng();
        for _ in 0..200 {
            let mut m = ComplexMatrix::zeros(2, 2);
            for z in m.as_mut_slice() {
                *z = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            }
            let h = m.hermitian_part();
            let e = eigensystem_unchecked(&h);
            assert!(e.reconstruct().max_abs_diff(&h) < 1e-14);
            let vvh = &e.vectors * &e.vectors.adjoint();
            assert!(vvh.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-14);
        }
        let diag = eigensystem_unchecked(&ComplexMatrix::from_real_diagonal(&[1.0, 3.0]));
        assert_eq!(diag.values, vec![1.0, 3.0]);
        assert!(
            diag.reconstruct()
                .max_abs_diff(&ComplexMatrix::from_real_diagonal(&[1.0, 3.0]))
                == 0.0
        );
    }

    #[test]
    fn diagonal_input_sorted() {
        let e =
            hermitian_eigensystem(&ComplexMatrix::from_real_diagonal(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn pauli_x_spectral_pair() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let x = ComplexMatrix::from_row_major(2, 2, vec![zero, one, one, zero]).unwrap();
        let e = hermitian_eigensystem(&x).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14 && (e.values[1] - 1.0).abs() < 1e-14);
        let s = core::f64::consts::FRAC_1_SQRT_2;
        // |⟨expected|v⟩| = 1 up to phase.
        let minus = [s, -s];
        let plus = [s, s];
        for (k, expected) in [minus, plus].iter().enumerate() {
            let v = e.vectors.column(k);
            let overlap: Complex64 = v.iter().zip(expected).map(|(a, b)| a * *b).sum();
            assert!((overlap.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let mut rng = RngSeed(11).rng();
        let n = 6;
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            }
        }
        let h = m.hermitian_part();
        let e = hermitian_eigensystem(&h).unwrap();
        assert!(e.reconstruct().max_abs_diff(&h) <= 1e-9);
        let gram = &e.vectors.adjoint() * &e.vectors;
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(n)) <= 1e-9);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        // the closed-form 2×2 and general paths agree with the full solver
        let fast = eigenvalues_unchecked(&h);
        for (a, b) in fast.iter().zip(&e.values) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn two_by_two_closed_form_matches_solver() {
        let m = ComplexMatrix::from_row_major(
            2,
            2,
            vec![
                Complex64::new(0.7, 0.0),
                Complex64::new(0.2, -0.4),
                Complex64::new(0.2, 0.4),
                Complex64::new(0.3, 0.0),
            ],
        )
        .unwrap();
        let fast = eigenvalues_unchecked(&m);
        let full = hermitian_eigensystem(&m).unwrap().values;
        assert!((fast[0] - full[0]).abs() < 1e-14 && (fast[1] - full[1]).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_row_major(
            2,
            2,
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            ],
        )
        .unwrap();
        assert!(matches!(
            hermitian_eigensystem(&m),
            Err(Error::NotHermitian { .. })
        ));
    }
}
