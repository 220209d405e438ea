use alloc::vec::Vec;

use super::{ObliqueBasis, ObliqueChannel};
use crate::qmat::{ComplexMatrix, DensityMatrix};
use crate::{Error, Result};

/// Oblique channels on pairwise-distinct subsystems, applied in sequence.
///
/// Channels on different subsystems commute, so the composite does not
/// depend on the order of application.
#[derive(Clone, Debug, PartialEq)]
pub struct CompositeChannel {
    channels: Vec<ObliqueChannel>,
}

impl CompositeChannel {
    pub fn new(channels: Vec<ObliqueChannel>) -> Result<Self> {
        for (k, c) in channels.iter().enumerate() {
            if channels[..k].iter().any(|o| o.target() == c.target()) {
                return Err(Error::DuplicateTarget { target: c.target() });
            }
        }
        Ok(Self { channels })
    }

    /// One channel per subsystem, basis `k` on subsystem `k`.
    pub fn on_all(bases: Vec<ObliqueBasis>) -> Self {
        Self {
            channels: bases
                .into_iter()
                .enumerate()
                .map(|(k, b)| ObliqueChannel::new(k, b))
                .collect(),
        }
    }

    pub fn channels(&self) -> &[ObliqueChannel] {
        &self.channels
    }

    /// Same channels applied in reverse order.
    pub fn reversed(&self) -> Self {
        Self {
            channels: self.channels.iter().rev().cloned().collect(),
        }
    }

    pub fn apply_operator(&self, dims: &[usize], op: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.channels
            .iter()
            .try_fold(op.clone(), |acc, c| c.apply_operator(dims, &acc))
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self.apply_operator(rho.dims(), rho.matrix())?;
        Ok(DensityMatrix::from_parts_unchecked(
            rho.dims().to_vec(),
            out,
        ))
    }

    /// `‖Φρ − ρ‖_max`.
    pub fn fixed_point_residual(&self, rho: &DensityMatrix) -> Result<f64> {
        Ok(self
            .apply_operator(rho.dims(), rho.matrix())?
            .max_abs_diff(rho.matrix()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{random_density, random_oblique_basis, RngSeed};
    use alloc::vec;

    #[test]
    fn classical_state_is_fixed() {
        let rho = DensityMatrix::new(
            vec![2, 2],
            ComplexMatrix::from_real_diagonal(&[0.5, 0.0, 0.0, 0.5]),
        )
        .unwrap();
        let c = CompositeChannel::on_all(vec![
            ObliqueBasis::computational(2),
            ObliqueBasis::computational(2),
        ]);
        assert!(c.fixed_point_residual(&rho).unwrap() < 1e-15);
    }

    #[test]
    fn order_does_not_matter() {
        let rho = random_density(&[2, 2, 2], 8, RngSeed(21)).unwrap();
        let c = CompositeChannel::new(vec![
            ObliqueChannel::new(0, random_oblique_basis(2, 1e8, RngSeed(1)).unwrap()),
            ObliqueChannel::new(2, random_oblique_basis(2, 1e8, RngSeed(2)).unwrap()),
        ])
        .unwrap();
        let a = c.apply(&rho).unwrap();
        let b = c.reversed().apply(&rho).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-10);
    }

    #[test]
    fn duplicate_targets_rejected() {
        let b = ObliqueBasis::computational(2);
        let err = CompositeChannel::new(vec![
            ObliqueChannel::new(1, b.clone()),
            ObliqueChannel::new(1, b),
        ]);
        assert_eq!(err.unwrap_err(), Error::DuplicateTarget { target: 1 });
    }
}
