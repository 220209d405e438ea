//! Unconstrained real parameterizations of bases.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::channels::ObliqueBasis;
use crate::qmat::linalg::qr_unitary;
use crate::qmat::{ComplexMatrix, StateVector};

/// Maps a real parameter vector to a basis of one subsystem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    /// `dim` vectors of `2·dim` reals (interleaved re, im), each normalized.
    Oblique { dim: usize },
    /// Columns of the phase-fixed QR unitary of a `dim × dim` complex matrix,
    /// stored row-major as interleaved re, im.
    Unitary { dim: usize },
}

impl Chart {
    pub fn new(dim: usize, orthonormal: bool) -> Self {
        if orthonormal {
            Chart::Unitary { dim }
        } else {
            Chart::Oblique { dim }
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Chart::Oblique { dim } | Chart::Unitary { dim } => dim,
        }
    }

    pub fn len(self) -> usize {
        2 * self.dim() * self.dim()
    }

    /// `None` when the parameters give a zero vector or a basis past `cap`.
    pub fn decode(self, params: &[f64], cap: f64) -> Option<ObliqueBasis> {
        let n = self.dim();
        debug_assert_eq!(params.len(), self.len());
        let complex: Vec<Complex64> = params
            .chunks_exact(2)
            .map(|p| Complex64::new(p[0], p[1]))
            .collect();
        let vectors: Vec<StateVector> = match self {
            Chart::Oblique { .. } => complex
                .chunks_exact(n)
                .map(|v| StateVector::normalized(v.to_vec()).ok())
                .collect::<Option<_>>()?,
            Chart::Unitary { .. } => {
                if complex
                    .iter()
                    .any(|z| !z.re.is_finite() || !z.im.is_finite())
                {
                    return None;
                }
                let z = ComplexMatrix::from_row_major(n, n, complex).ok()?;
                let q = qr_unitary(&z);
                (0..n)
                    .map(|j| StateVector::normalized(q.column(j)).ok())
                    .collect::<Option<_>>()?
            }
        };
        ObliqueBasis::with_condition_cap(vectors, cap).ok()
    }

    /// Parameters that decode to `basis` (up to rounding).
    pub fn encode(self, basis: &ObliqueBasis) -> Vec<f64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(self.len());
        match self {
            Chart::Oblique { .. } => {
                for v in basis.vectors() {
                    for z in v.amplitudes() {
                        out.push(z.re);
                        out.push(z.im);
                    }
                }
            }
            Chart::Unitary { .. } => {
                for i in 0..n {
                    for v in basis.vectors() {
                        let z = v.amplitudes()[i];
                        out.push(z.re);
                        out.push(z.im);
                    }
                }
            }
        }
        out
    }

    /// Standard normal parameters: a Gaussian basis or a Haar unitary.
    pub fn random<R: Rng + ?Sized>(self, rng: &mut R) -> Vec<f64> {
        (0..self.len())
            .map(|_| rng.sample(StandardNormal))
            .collect()
    }
}

/// Several charts laid end to end, one per subsystem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductChart {
    charts: Vec<Chart>,
}

impl ProductChart {
    pub fn new(dims: &[usize], orthonormal: bool) -> Self {
        Self {
            charts: dims.iter().map(|&d| Chart::new(d, orthonormal)).collect(),
        }
    }

    pub fn single(chart: Chart) -> Self {
        Self {
            charts: alloc::vec![chart],
        }
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn len(&self) -> usize {
        self.charts.iter().map(|c| c.len()).sum()
    }

    pub fn decode(&self, params: &[f64], cap: f64) -> Option<Vec<ObliqueBasis>> {
        let mut offset = 0;
        self.charts
            .iter()
            .map(|c| {
                let b = c.decode(&params[offset..offset + c.len()], cap);
                offset += c.len();
                b
            })
            .collect()
    }

    pub fn encode(&self, bases: &[ObliqueBasis]) -> Vec<f64> {
        self.charts
            .iter()
            .zip(bases)
            .flat_map(|(c, b)| c.encode(b))
            .collect()
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.charts.iter().flat_map(|c| c.random(rng)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{random_oblique_basis, random_unitary, RngSeed};

    #[test]
    fn oblique_round_trip() {
        let b = random_oblique_basis(3, 1e8, RngSeed(4)).unwrap();
        let chart = Chart::Oblique { dim: 3 };
        let back = chart.decode(&chart.encode(&b), 1e8).unwrap();
        for (u, v) in b.vectors().iter().zip(back.vectors()) {
            for (x, y) in u.amplitudes().iter().zip(v.amplitudes()) {
                assert!((x - y).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn unitary_chart_is_orthonormal_and_round_trips() {
        let chart = Chart::Unitary { dim: 3 };
        let params = chart.random(&mut RngSeed(9).rng());
        let b = chart.decode(&params, 1e8).unwrap();
        assert!(b.is_orthonormal(1e-12));
        let back = chart.decode(&chart.encode(&b), 1e8).unwrap();
        for (u, v) in b.vectors().iter().zip(back.vectors()) {
            for (x, y) in u.amplitudes().iter().zip(v.amplitudes()) {
                assert!((x - y).norm() < 1e-12);
            }
        }
        let u = random_unitary(3, RngSeed(2));
        let cols: Vec<StateVector> = (0..3)
            .map(|j| StateVector::unit(u.column(j)).unwrap())
            .collect();
        let basis = ObliqueBasis::new(cols).unwrap();
        assert!(chart
            .decode(&chart.encode(&basis), 1e8)
            .unwrap()
            .is_orthonormal(1e-12));
    }

    #[test]
    fn degenerate_parameters_decode_to_none() {
        let chart = Chart::Oblique { dim: 2 };
        assert!(chart
            .decode(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], 1e8)
            .is_none());
        assert!(chart
            .decode(&[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1e-12, 0.0], 1e8)
            .is_none());
        assert!(chart
            .decode(&[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1e-12, 0.0], 1e20)
            .is_some());
    }

    #[test]
    fn product_chart_splits() {
        let pc = ProductChart::new(&[2, 3], false);
        assert_eq!(pc.len(), 8 + 18);
        let params = pc.random(&mut RngSeed(1).rng());
        let bases = pc.decode(&params, 1e8).unwrap();
        assert_eq!(bases[0].dim(), 2);
        assert_eq!(bases[1].dim(), 3);
    }
}
