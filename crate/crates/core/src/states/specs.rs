use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::channels::{CompositeChannel, ObliqueBasis, ObliqueChannel};
use crate::qmat::{tensor, tensor_all, ComplexMatrix, DensityMatrix};
use crate::{Error, Result};

/// Weights must sum to one within this tolerance.
pub const WEIGHT_TOL: f64 = 1e-12;

/// Which sets of the hierarchy a constructed state belongs to by construction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Membership {
    pub separable: bool,
    /// Zero oblique discord with respect to subsystem 0.
    pub zero_oblique_discord: bool,
    /// Zero discord with respect to subsystem 0.
    pub zero_discord: bool,
    pub zero_global_oblique_discord: bool,
}

/// A state together with the memberships its construction guarantees.
#[derive(Clone, Debug, PartialEq)]
pub struct Constructed {
    pub state: DensityMatrix,
    pub membership: Membership,
}

fn check_weights(weights: &[f64]) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::InvalidWeights("no weights".into()));
    }
    if let Some(w) = weights.iter().find(|w| !(**w >= 0.0 && w.is_finite())) {
        return Err(Error::InvalidWeights(format!(
            "weight {w} is negative or not finite"
        )));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > WEIGHT_TOL {
        return Err(Error::InvalidWeights(format!("weights sum to {sum}")));
    }
    Ok(())
}

/// One term `p ρ^A ⊗ ρ^B` of a separable decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparableTerm {
    pub weight: f64,
    pub a: DensityMatrix,
    pub b: DensityMatrix,
}

/// `Σ_i p_i ρ_i^A ⊗ ρ_i^B`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparableSpec {
    pub terms: Vec<SeparableTerm>,
}

pub fn build_separable(spec: &SeparableSpec) -> Result<Constructed> {
    let weights: Vec<f64> = spec.terms.iter().map(|t| t.weight).collect();
    check_weights(&weights)?;
    let first = &spec.terms[0];
    let mut dims = first.a.dims().to_vec();
    dims.extend_from_slice(first.b.dims());
    let order = first.a.order() * first.b.order();
    let mut m = ComplexMatrix::zeros(order, order);
    for t in &spec.terms {
        if t.a.dims() != first.a.dims() || t.b.dims() != first.b.dims() {
            return Err(Error::DimensionMismatch {
                expected: order,
                found: t.a.order() * t.b.order(),
            });
        }
        m.add_scaled(
            &tensor(t.a.matrix(), t.b.matrix()),
            Complex64::new(t.weight, 0.0),
        );
    }
    Ok(Constructed {
        state: DensityMatrix::new(dims, m.hermitian_part())?,
        membership: Membership {
            separable: true,
            ..Membership::default()
        },
    })
}

/// `Σ_i p_i |i⟩⟨i| ⊗ ρ_i` over a normalized basis of subsystem 0. Fewer than
/// `n_A` terms are allowed; the missing basis elements get zero weight.
#[derive(Clone, Debug, PartialEq)]
pub struct ZodSpec {
    pub basis: ObliqueBasis,
    pub weights: Vec<f64>,
    pub conditionals: Vec<DensityMatrix>,
}

impl ZodSpec {
    /// The channel whose fixed points include this state.
    pub fn channel(&self) -> ObliqueChannel {
        ObliqueChannel::new(0, self.basis.clone())
    }

    /// The same state written as a separable decomposition.
    pub fn to_separable(&self) -> Result<SeparableSpec> {
        let terms = self
            .weights
            .iter()
            .zip(&self.conditionals)
            .zip(self.basis.vectors())
            .map(|((&weight, b), v)| {
                Ok(SeparableTerm {
                    weight,
                    a: DensityMatrix::pure(alloc::vec![self.basis.dim()], v)?,
                    b: b.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SeparableSpec { terms })
    }
}

pub fn build_zod(spec: &ZodSpec) -> Result<Constructed> {
    let n = spec.basis.dim();
    if spec.weights.len() != spec.conditionals.len() {
        return Err(Error::LengthMismatch {
            expected: spec.weights.len(),
            found: spec.conditionals.len(),
        });
    }
    if spec.weights.len() > n {
        return Err(Error::TooManyTerms {
            terms: spec.weights.len(),
            dim: n,
        });
    }
    check_weights(&spec.weights)?;
    let b_dims = spec.conditionals[0].dims();
    let b_order = spec.conditionals[0].order();
    let mut m = ComplexMatrix::zeros(n * b_order, n * b_order);
    for ((&w, rho_b), v) in spec
        .weights
        .iter()
        .zip(&spec.conditionals)
        .zip(spec.basis.vectors())
    {
        if rho_b.dims() != b_dims {
            return Err(Error::DimensionMismatch {
                expected: b_order,
                found: rho_b.order(),
            });
        }
        m.add_scaled(
            &tensor(&v.projector(), rho_b.matrix()),
            Complex64::new(w, 0.0),
        );
    }
    let mut dims = alloc::vec![n];
    dims.extend_from_slice(b_dims);
    Ok(Constructed {
        state: DensityMatrix::new(dims, m.hermitian_part())?,
        membership: Membership {
            separable: true,
            zero_oblique_discord: true,
            zero_discord: spec.basis.is_orthonormal(1e-10),
            zero_global_oblique_discord: false,
        },
    })
}

/// `Σ p_{i_1…i_N} |i_1⟩⟨i_1| ⊗ … ⊗ |i_N⟩⟨i_N|` with one normalized basis per
/// subsystem. `weights` is the joint tensor flattened row-major (first
/// subsystem slowest).
#[derive(Clone, Debug, PartialEq)]
pub struct GlobalZodSpec {
    pub bases: Vec<ObliqueBasis>,
    pub weights: Vec<f64>,
}

impl GlobalZodSpec {
    pub fn channel(&self) -> CompositeChannel {
        CompositeChannel::on_all(self.bases.clone())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(ObliqueBasis::dim).collect()
    }
}

pub fn build_global_zod(spec: &GlobalZodSpec) -> Result<Constructed> {
    if spec.bases.len() < 2 {
        return Err(Error::InvalidDims("need at least two subsystems".into()));
    }
    let dims = spec.dims();
    let order: usize = dims.iter().product();
    if spec.weights.len() != order {
        return Err(Error::LengthMismatch {
            expected: order,
            found: spec.weights.len(),
        });
    }
    check_weights(&spec.weights)?;
    let projectors: Vec<Vec<ComplexMatrix>> = spec
        .bases
        .iter()
        .map(|b| b.vectors().iter().map(|v| v.projector()).collect())
        .collect();
    let mut m = ComplexMatrix::zeros(order, order);
    for (flat, &w) in spec.weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let mut rem = flat;
        let mut digits = alloc::vec![0usize; dims.len()];
        for (k, &d) in dims.iter().enumerate().rev() {
            digits[k] = rem % d;
            rem /= d;
        }
        let factors: Vec<&ComplexMatrix> = digits
            .iter()
            .enumerate()
            .map(|(k, &i)| &projectors[k][i])
            .collect();
        m.add_scaled(&tensor_all(&factors), Complex64::new(w, 0.0));
    }
    let orthonormal = spec.bases.iter().all(|b| b.is_orthonormal(1e-10));
    Ok(Constructed {
        state: DensityMatrix::new(dims, m.hermitian_part())?,
        membership: Membership {
            separable: true,
            zero_oblique_discord: true,
            zero_discord: orthonormal,
            zero_global_oblique_discord: true,
        },
    })
}
