//! Factorizations delegated to nalgebra.

use num_complex::Complex64;

use super::ComplexMatrix;

/// Ratio of extreme singular values; infinite for a singular or non-finite matrix.
pub fn condition_number(m: &ComplexMatrix) -> f64 {
    if m.as_slice()
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return f64::INFINITY;
    }
    let sv = m.to_nalgebra().singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min <= 0.0 || !min.is_finite() {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse(m: &ComplexMatrix) -> Option<ComplexMatrix> {
    m.to_nalgebra()
        .lu()
        .try_inverse()
        .map(|inv| ComplexMatrix::from_nalgebra(&inv))
}

/// Unitary factor of a QR decomposition, phase-fixed so that `R` has a
/// nonnegative real diagonal. Maps a complex Gaussian matrix to a Haar unitary.
pub fn qr_unitary(z: &ComplexMatrix) -> ComplexMatrix {
    let qr = z.to_nalgebra().qr();
    let q = qr.q();
    let r = qr.r();
    let n = q.ncols();
    let mut out = ComplexMatrix::from_nalgebra(&q);
    for j in 0..n {
        let d = r[(j, j)];
        let norm = d.norm();
        let phase = if norm > 0.0 {
            d / norm
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..out.rows() {
            out[(i, j)] *= phase;
        }
    }
    out
}
