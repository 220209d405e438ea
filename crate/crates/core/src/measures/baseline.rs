//! Discord and geometric discord over projective measurements.

use alloc::vec::Vec;

use super::{
    check_arity, multistart, Chart, MeasureKind, MeasureResult, OptimizerConfig, ProductChart,
    PENALTY,
};
use crate::channels::blocks::{contract, embed_add, Split};
use crate::channels::ObliqueBasis;
use crate::qmat::{mutual_information_op, ComplexMatrix, DensityMatrix, Partition, ENTROPY_CLAMP};
use crate::{Error, Result};

/// `Σ_i (|i⟩⟨i| ⊗ 1) op (|i⟩⟨i| ⊗ 1)` for the vectors of `basis` placed on
/// subsystem `target`. A projective measurement when the basis is orthonormal.
pub fn projective_measurement(
    dims: &[usize],
    op: &ComplexMatrix,
    target: usize,
    basis: &ObliqueBasis,
) -> Result<ComplexMatrix> {
    let split = Split::new(dims, target)?;
    if split.dim != basis.dim() || op.rows() != split.order() || !op.is_square() {
        return Err(Error::DimensionMismatch {
            expected: split.order(),
            found: op.rows(),
        });
    }
    let mut out = ComplexMatrix::zeros(op.rows(), op.cols());
    for v in basis.vectors() {
        let block = contract(op, split, v.amplitudes());
        embed_add(&mut out, split, v.amplitudes(), &block, 1.0);
    }
    Ok(out)
}

fn measure_all(
    dims: &[usize],
    op: &ComplexMatrix,
    bases: &[ObliqueBasis],
) -> Result<ComplexMatrix> {
    bases
        .iter()
        .enumerate()
        .try_fold(op.clone(), |acc, (k, b)| {
            projective_measurement(dims, &acc, k, b)
        })
}

/// Which subsystems are measured and how information is split.
struct Setup {
    chart: ProductChart,
    partition: Partition,
}

fn setup(kind: MeasureKind, rho: &DensityMatrix) -> Result<Setup> {
    check_arity(kind, rho)?;
    let n = rho.num_subsystems();
    Ok(if kind.is_global() {
        Setup {
            chart: ProductChart::new(rho.dims(), true),
            partition: Partition::individual(n)?,
        }
    } else {
        Setup {
            chart: ProductChart::single(Chart::Unitary { dim: rho.dims()[0] }),
            partition: Partition::cut(0, n)?,
        }
    })
}

fn info_measure(
    kind: MeasureKind,
    rho: &DensityMatrix,
    config: &OptimizerConfig,
) -> Result<MeasureResult> {
    let Setup { chart, partition } = setup(kind, rho)?;
    let dims = rho.dims();
    let before = mutual_information_op(dims, rho.matrix(), &partition, ENTROPY_CLAMP)?;
    multistart(kind, config, &chart, Vec::new(), |x| {
        let Some(bases) = chart.decode(x, config.condition_cap) else {
            return PENALTY;
        };
        measure_all(dims, rho.matrix(), &bases)
            .and_then(|m| mutual_information_op(dims, &m, &partition, ENTROPY_CLAMP))
            .map_or(PENALTY, |after| before - after)
    })
}

fn geometric_measure(
    kind: MeasureKind,
    rho: &DensityMatrix,
    config: &OptimizerConfig,
) -> Result<MeasureResult> {
    let Setup { chart, .. } = setup(kind, rho)?;
    let dims = rho.dims();
    multistart(kind, config, &chart, Vec::new(), |x| {
        let Some(bases) = chart.decode(x, config.condition_cap) else {
            return PENALTY;
        };
        measure_all(dims, rho.matrix(), &bases)
            .map_or(PENALTY, |m| (rho.matrix() - &m).frobenius_sq())
    })
}

/// `D^A(ρ) = inf_Π [I(ρ) − I(Π_A ρ)]` over orthonormal bases of subsystem 0.
pub fn discord_info(rho: &DensityMatrix, config: &OptimizerConfig) -> Result<MeasureResult> {
    info_measure(MeasureKind::Discord, rho, config)
}

/// `inf ‖ρ − χ‖²` over zero-discord `χ = Σ_α |α⟩⟨α| ⊗ M_α`. For a fixed basis
/// the optimal blocks are `M_α = ⟨α|ρ|α⟩`, so only the basis is searched.
pub fn discord_geometric(rho: &DensityMatrix, config: &OptimizerConfig) -> Result<MeasureResult> {
    geometric_measure(MeasureKind::DiscordGeometric, rho, config)
}

/// Multipartite discord: projective measurements on every subsystem, with the
/// total correlation `Σ_k S(ρ_k) − S(ρ)` as the information.
pub fn discord_global(rho: &DensityMatrix, config: &OptimizerConfig) -> Result<MeasureResult> {
    info_measure(MeasureKind::DiscordGlobal, rho, config)
}

/// Distance to the nearest state diagonal in a product of orthonormal bases;
/// for fixed bases the optimum is the full dephasing of `ρ`.
pub fn discord_global_geometric(
    rho: &DensityMatrix,
    config: &OptimizerConfig,
) -> Result<MeasureResult> {
    geometric_measure(MeasureKind::DiscordGlobalGeometric, rho, config)
}
