use alloc::vec::Vec;

use super::blocks::{contract, embed_add, Split};
use super::ObliqueBasis;
use crate::qmat::{ComplexMatrix, DensityMatrix};
use crate::{Error, Result};

/// Denominators `tr Σ⟨ĩ|ρ|ĩ⟩` at or below this are rejected.
pub const NORMALIZATION_FLOOR: f64 = 1e-12;
/// Default tolerance for fixed-point checks (max norm).
pub const FIXED_POINT_TOL: f64 = 1e-8;
/// Decomposition terms with weight below this are dropped.
pub const WEIGHT_FLOOR: f64 = 1e-12;

/// The renormalized oblique channel on one subsystem:
///
/// `Φ ρ = Σ_i |i⟩⟨ĩ| ρ |ĩ⟩⟨i| / tr[Σ_i ⟨ĩ|ρ|ĩ⟩]`.
///
/// The map is nonlinear off its fixed points because of the renormalization.
#[derive(Clone, Debug, PartialEq)]
pub struct ObliqueChannel {
    target: usize,
    basis: ObliqueBasis,
}

/// Conditional blocks `⟨ĩ|ρ|ĩ⟩` and their total trace.
#[derive(Clone, Debug)]
pub struct ConditionalBlocks {
    pub blocks: Vec<ComplexMatrix>,
    pub normalization: f64,
}

impl ObliqueChannel {
    pub fn new(target: usize, basis: ObliqueBasis) -> Self {
        Self { target, basis }
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn basis(&self) -> &ObliqueBasis {
        &self.basis
    }

    fn split(&self, dims: &[usize], op: &ComplexMatrix) -> Result<Split> {
        let split = Split::new(dims, self.target)?;
        if split.dim != self.basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.basis.dim(),
                found: split.dim,
            });
        }
        if !op.is_square() || op.rows() != split.order() {
            return Err(Error::DimensionMismatch {
                expected: split.order(),
                found: op.rows(),
            });
        }
        Ok(split)
    }

    /// `⟨ĩ|op|ĩ⟩` for every dual vector, as operators on the other subsystems.
    pub fn conditional_blocks(
        &self,
        dims: &[usize],
        op: &ComplexMatrix,
    ) -> Result<ConditionalBlocks> {
        let split = self.split(dims, op)?;
        let blocks: Vec<ComplexMatrix> = self
            .basis
            .duals()
            .iter()
            .map(|d| contract(op, split, d.amplitudes()))
            .collect();
        let normalization = blocks.iter().map(|b| b.trace().re).sum();
        Ok(ConditionalBlocks {
            blocks,
            normalization,
        })
    }

    /// Applies the channel to an arbitrary Hermitian operator and renormalizes.
    pub fn apply_operator(&self, dims: &[usize], op: &ComplexMatrix) -> Result<ComplexMatrix> {
        let split = self.split(dims, op)?;
        let ConditionalBlocks {
            blocks,
            normalization,
        } = self.conditional_blocks(dims, op)?;
        if !(normalization > NORMALIZATION_FLOOR) {
            return Err(Error::VanishingNormalization {
                value: normalization,
            });
        }
        let mut out = ComplexMatrix::zeros(op.rows(), op.cols());
        for (v, block) in self.basis.vectors().iter().zip(&blocks) {
            embed_add(
                &mut out,
                split,
                v.amplitudes(),
                &block.hermitian_part(),
                1.0 / normalization,
            );
        }
        Ok(out.hermitian_part())
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self.apply_operator(rho.dims(), rho.matrix())?;
        Ok(DensityMatrix::from_parts_unchecked(
            rho.dims().to_vec(),
            out,
        ))
    }
}

/// Norm used for fixed-point residuals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ResidualNorm {
    /// `max_jk |a_jk − b_jk|`
    #[default]
    Max,
    /// `sqrt(Σ |a_jk − b_jk|²)`
    Frobenius,
}

impl ResidualNorm {
    pub fn distance(self, a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
        match self {
            ResidualNorm::Max => a.max_abs_diff(b),
            ResidualNorm::Frobenius => libm::sqrt((a - b).frobenius_sq()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedPointCheck {
    pub is_fixed: bool,
    pub residual: f64,
}

/// `‖Φρ − ρ‖_max ≤ tol`, with the residual.
pub fn is_fixed_point(
    phi: &ObliqueChannel,
    rho: &DensityMatrix,
    tol: f64,
) -> Result<FixedPointCheck> {
    is_fixed_point_with(phi, rho, tol, ResidualNorm::Max)
}

pub fn is_fixed_point_with(
    phi: &ObliqueChannel,
    rho: &DensityMatrix,
    tol: f64,
    norm: ResidualNorm,
) -> Result<FixedPointCheck> {
    let out = phi.apply_operator(rho.dims(), rho.matrix())?;
    let residual = norm.distance(&out, rho.matrix());
    Ok(FixedPointCheck {
        is_fixed: residual <= tol,
        residual,
    })
}

/// One term `p_i |i⟩⟨i| ⊗ σ_i` of a fixed-point decomposition. `index` is the
/// basis label `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub index: usize,
    pub weight: f64,
    pub state: DensityMatrix,
}

/// Writes a fixed point as `Σ p_i |i⟩⟨i| ⊗ σ_i` with `p_i ∝ tr⟨ĩ|ρ|ĩ⟩` and
/// `σ_i = ⟨ĩ|ρ|ĩ⟩ / tr⟨ĩ|ρ|ĩ⟩`. Terms with `p_i < 1e-12` are omitted.
pub fn decompose_fixed_point(phi: &ObliqueChannel, rho: &DensityMatrix) -> Result<Vec<Component>> {
    if rho.num_subsystems() < 2 {
        return Err(Error::InvalidDims(
            "decomposition needs at least two subsystems".into(),
        ));
    }
    let check = is_fixed_point(phi, rho, FIXED_POINT_TOL)?;
    if !check.is_fixed {
        return Err(Error::NotFixedPoint {
            residual: check.residual,
        });
    }
    let ConditionalBlocks {
        blocks,
        normalization,
    } = phi.conditional_blocks(rho.dims(), rho.matrix())?;
    let rest_dims: Vec<usize> = rho
        .dims()
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != phi.target())
        .map(|(_, &d)| d)
        .collect();
    let mut components = Vec::new();
    for (index, block) in blocks.into_iter().enumerate() {
        let tr = block.trace().re;
        let weight = tr / normalization;
        if weight < WEIGHT_FLOOR {
            continue;
        }
        let state = block.hermitian_part().scaled(1.0 / tr);
        components.push(Component {
            index,
            weight,
            state: DensityMatrix::from_parts_unchecked(rest_dims.clone(), state),
        });
    }
    Ok(components)
}

/// `Σ p_i |i⟩⟨i| ⊗ σ_i` with `|i⟩⟨i|` on the channel's target subsystem.
pub fn reconstruct(phi: &ObliqueChannel, components: &[Component]) -> Result<DensityMatrix> {
    let first = components
        .first()
        .ok_or_else(|| Error::InvalidWeights("no components".into()))?;
    let mut dims = first.state.dims().to_vec();
    if phi.target() > dims.len() {
        return Err(Error::InvalidSubsystem {
            index: phi.target(),
            count: dims.len() + 1,
        });
    }
    dims.insert(phi.target(), phi.basis().dim());
    let split = Split::new(&dims, phi.target())?;
    let mut out = ComplexMatrix::zeros(split.order(), split.order());
    for c in components {
        if c.state.dims() != first.state.dims() {
            return Err(Error::DimensionMismatch {
                expected: first.state.order(),
                found: c.state.order(),
            });
        }
        let v = phi
            .basis()
            .vectors()
            .get(c.index)
            .ok_or(Error::InvalidSubsystem {
                index: c.index,
                count: phi.basis().dim(),
            })?;
        embed_add(&mut out, split, v.amplitudes(), c.state.matrix(), c.weight);
    }
    DensityMatrix::new(dims, out.hermitian_part())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{tensor, StateVector};
    use crate::states::{random_density, random_oblique_basis, RngSeed};
    use alloc::vec;
    use num_complex::Complex64;

    fn bell() -> DensityMatrix {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let z = Complex64::new(0.0, 0.0);
        let psi =
            StateVector::unit(vec![Complex64::new(s, 0.0), z, z, Complex64::new(s, 0.0)]).unwrap();
        DensityMatrix::pure(vec![2, 2], &psi).unwrap()
    }

    fn zero_plus() -> ObliqueBasis {
        ObliqueBasis::new(vec![StateVector::basis(2, 0), StateVector::plus()]).unwrap()
    }

    /// Applies the channel term by term with explicit Kraus-like operators
    /// `(|i⟩⟨ĩ| ⊗ I)`, independently of the contraction path.
    fn dense_oracle(basis: &ObliqueBasis, rho: &ComplexMatrix, rest: usize) -> ComplexMatrix {
        let n = basis.dim();
        let mut num = ComplexMatrix::zeros(rho.rows(), rho.cols());
        let mut den = 0.0;
        for i in 0..n {
            let k = ComplexMatrix::outer(
                basis.vectors()[i].amplitudes(),
                basis.duals()[i].amplitudes(),
            );
            let big = tensor(&k, &ComplexMatrix::identity(rest));
            let term = &(&big * rho) * &big.adjoint();
            num = &num + &term;
            // tr⟨ĩ|ρ|ĩ⟩ = tr[(|ĩ⟩⟨ĩ| ⊗ I) ρ]
            let p = tensor(
                &basis.duals()[i].projector(),
                &ComplexMatrix::identity(rest),
            );
            den += (&p * rho).trace().re;
        }
        num.scaled(1.0 / den)
    }

    #[test]
    fn computational_basis_on_bell_dephases() {
        let phi = ObliqueChannel::new(0, ObliqueBasis::computational(2));
        let out = phi.apply(&bell()).unwrap();
        let expected = ComplexMatrix::from_real_diagonal(&[0.5, 0.0, 0.0, 0.5]);
        assert!(out.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn zero_plus_on_bell_matches_dense_oracle() {
        let phi = ObliqueChannel::new(0, zero_plus());
        let out = phi.apply(&bell()).unwrap();
        let oracle = dense_oracle(phi.basis(), bell().matrix(), 2);
        assert!(out.matrix().max_abs_diff(&oracle) < 1e-14);
        assert!(out.validity().within(1e-12));
    }

    #[test]
    fn random_channel_matches_dense_oracle_on_second_factor() {
        // target = 1 exercises the left/right split; oracle permutes via I ⊗ K.
        let rho = random_density(&[2, 3], 6, RngSeed(3)).unwrap();
        let basis = random_oblique_basis(3, 1e8, RngSeed(4)).unwrap();
        let phi = ObliqueChannel::new(1, basis.clone());
        let out = phi.apply(&rho).unwrap();
        let mut num = ComplexMatrix::zeros(6, 6);
        let mut den = 0.0;
        for i in 0..3 {
            let k = ComplexMatrix::outer(
                basis.vectors()[i].amplitudes(),
                basis.duals()[i].amplitudes(),
            );
            let big = tensor(&ComplexMatrix::identity(2), &k);
            num = &num + &(&(&big * rho.matrix()) * &big.adjoint());
            let p = tensor(&ComplexMatrix::identity(2), &basis.duals()[i].projector());
            den += (&p * rho.matrix()).trace().re;
        }
        assert!(out.matrix().max_abs_diff(&num.scaled(1.0 / den)) < 1e-13);
    }

    #[test]
    fn zod_state_is_fixed_and_decomposes() {
        let rho0 = random_density(&[3], 2, RngSeed(1)).unwrap();
        let rho1 = random_density(&[3], 3, RngSeed(2)).unwrap();
        let basis = zero_plus();
        let mut m = tensor(&basis.vectors()[0].projector(), rho0.matrix()).scaled(0.5);
        m.add_scaled(
            &tensor(&basis.vectors()[1].projector(), rho1.matrix()),
            Complex64::new(0.5, 0.0),
        );
        let rho = DensityMatrix::new(vec![2, 3], m).unwrap();
        let phi = ObliqueChannel::new(0, basis);
        let check = is_fixed_point(&phi, &rho, 1e-10).unwrap();
        assert!(check.is_fixed, "residual {}", check.residual);

        let parts = decompose_fixed_point(&phi, &rho).unwrap();
        assert_eq!(parts.len(), 2);
        assert!((parts[0].weight - 0.5).abs() < 1e-12 && (parts[1].weight - 0.5).abs() < 1e-12);
        assert!(parts[0].state.matrix().max_abs_diff(rho0.matrix()) < 1e-12);
        assert!(parts[1].state.matrix().max_abs_diff(rho1.matrix()) < 1e-12);
        let back = reconstruct(&phi, &parts).unwrap();
        assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-8);
    }

    #[test]
    fn single_term_decomposition() {
        let rho_b = random_density(&[2], 2, RngSeed(8)).unwrap();
        let rho = DensityMatrix::pure(vec![2], &StateVector::basis(2, 0))
            .unwrap()
            .tensor(&rho_b);
        let phi = ObliqueChannel::new(0, zero_plus());
        let parts = decompose_fixed_point(&phi, &rho).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].index, 0);
        assert!((parts[0].weight - 1.0).abs() < 1e-12);
        assert!(parts[0].state.matrix().max_abs_diff(rho_b.matrix()) < 1e-12);
    }

    #[test]
    fn bell_is_not_fixed_and_does_not_decompose() {
        let phi = ObliqueChannel::new(0, zero_plus());
        let check = is_fixed_point(&phi, &bell(), FIXED_POINT_TOL).unwrap();
        assert!(!check.is_fixed && check.residual > 0.1);
        assert!(matches!(
            decompose_fixed_point(&phi, &bell()),
            Err(Error::NotFixedPoint { .. })
        ));
    }

    #[test]
    fn dimension_mismatch_and_vanishing_normalization() {
        let rho = random_density(&[3, 2], 6, RngSeed(1)).unwrap();
        let phi = ObliqueChannel::new(0, zero_plus());
        assert!(matches!(
            phi.apply(&rho),
            Err(Error::DimensionMismatch { .. })
        ));
        let phi = ObliqueChannel::new(2, zero_plus());
        assert!(matches!(
            phi.apply(&bell()),
            Err(Error::InvalidSubsystem { .. })
        ));
        let zero = ComplexMatrix::zeros(4, 4);
        let phi = ObliqueChannel::new(0, zero_plus());
        assert!(matches!(
            phi.apply_operator(&[2, 2], &zero),
            Err(Error::VanishingNormalization { .. })
        ));
    }

    #[test]
    fn frobenius_residual_norm() {
        let phi = ObliqueChannel::new(0, ObliqueBasis::computational(2));
        let check = is_fixed_point_with(&phi, &bell(), 1e-8, ResidualNorm::Frobenius).unwrap();
        // Φρ − ρ has entries ±½ at (0,3),(3,0): Frobenius norm √(½)
        assert!((check.residual - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
    }
}
