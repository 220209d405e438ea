//! Oblique discord measures: infima over oblique channels and over states
//! with zero oblique discord.

use alloc::vec;
use alloc::vec::Vec;

use super::baseline::discord_geometric;
use super::inner::InnerProblem;
use super::{
    check_arity, minimize, multistart, Chart, MeasureKind, MeasureResult, OptimizerConfig,
    ProductChart, PENALTY,
};
use crate::channels::{
    CompositeChannel, ObliqueBasis, ObliqueChannel, ResidualNorm, NORMALIZATION_FLOOR,
};
use crate::qmat::{mutual_information_op, ComplexMatrix, DensityMatrix, Partition, ENTROPY_CLAMP};
use crate::Result;

fn bipartite_chart(rho: &DensityMatrix, config: &OptimizerConfig) -> ProductChart {
    ProductChart::single(Chart::new(rho.dims()[0], config.orthonormal_only))
}

/// `inf_Φ ‖ρ − Φ_A ρ‖²` over oblique channels on subsystem 0.
pub fn oblique_geometric_phi(
    rho: &DensityMatrix,
    config: &OptimizerConfig,
) -> Result<MeasureResult> {
    let kind = MeasureKind::ObliqueGeometricPhi;
    check_arity(kind, rho)?;
    let chart = bipartite_chart(rho, config);
    let dims = rho.dims();
    multistart(kind, config, &chart, Vec::new(), |x| {
        let Some(mut bases) = chart.decode(x, config.condition_cap) else {
            return PENALTY;
        };
        ObliqueChannel::new(0, bases.remove(0))
            .apply_operator(dims, rho.matrix())
            .map_or(PENALTY, |out| (rho.matrix() - &out).frobenius_sq())
    })
}

/// `inf_Φ [I(ρ) − I(Φ_A ρ)]` over oblique channels on subsystem 0. No sign
/// is guaranteed; see [`MeasureResult::counterexample_candidate`].
pub fn oblique_info(rho: &DensityMatrix, config: &OptimizerConfig) -> Result<MeasureResult> {
    let kind = MeasureKind::ObliqueInfo;
    check_arity(kind, rho)?;
    let chart = bipartite_chart(rho, config);
    let dims = rho.dims();
    let partition = Partition::cut(0, dims.len())?;
    let before = mutual_information_op(dims, rho.matrix(), &partition, ENTROPY_CLAMP)?;
    multistart(kind, config, &chart, Vec::new(), |x| {
        let Some(mut bases) = chart.decode(x, config.condition_cap) else {
            return PENALTY;
        };
        ObliqueChannel::new(0, bases.remove(0))
            .apply_operator(dims, rho.matrix())
            .and_then(|out| mutual_information_op(dims, &out, &partition, ENTROPY_CLAMP))
            .map_or(PENALTY, |after| before - after)
    })
}

/// Value of the inner problem at `basis`, started from the channel blocks
/// `⟨ĩ|ρ|ĩ⟩ / Z` so that it never exceeds `‖ρ − Φ_A ρ‖²`.
fn closest_zod_distance(dims: &[usize], rho: &ComplexMatrix, basis: ObliqueBasis) -> f64 {
    let problem = match InnerProblem::new(dims, rho, &basis) {
        Ok(p) => p,
        Err(_) => return PENALTY,
    };
    let channel = ObliqueChannel::new(0, basis);
    let Ok(cb) = channel.conditional_blocks(dims, rho) else {
        return PENALTY;
    };
    if !(cb.normalization > NORMALIZATION_FLOOR) {
        return PENALTY;
    }
    let init = cb
        .blocks
        .iter()
        .map(|b| b.hermitian_part().scaled(1.0 / cb.normalization))
        .collect();
    problem.solve(init).value
}

/// `inf ‖ρ − χ‖²` over `χ = Σ_i |i⟩⟨i| ⊗ M_i` with `{|i⟩}` any normalized
/// basis of subsystem 0, `M_i ⪰ 0` and `Σ_i tr M_i = 1`.
///
/// The basis is searched by Nelder–Mead; the blocks by an accelerated
/// projected gradient. The first two runs start from the best bases of
/// [`discord_geometric`] and [`oblique_geometric_phi`] under the same
/// configuration, so the result is at most either of those values.
pub fn oblique_geometric(rho: &DensityMatrix, config: &OptimizerConfig) -> Result<MeasureResult> {
    let kind = MeasureKind::ObliqueGeometric;
    check_arity(kind, rho)?;
    let chart = bipartite_chart(rho, config);
    let seeds: Vec<Vec<f64>> = [
        discord_geometric(rho, config)?,
        oblique_geometric_phi(rho, config)?,
    ]
    .iter()
    .filter(|r| !r.best_bases.is_empty())
    .map(|r| chart.encode(&r.best_bases))
    .collect();
    let dims = rho.dims();
    multistart(kind, config, &chart, seeds, |x| {
        let Some(mut bases) = chart.decode(x, config.condition_cap) else {
            return PENALTY;
        };
        closest_zod_distance(dims, rho.matrix(), bases.remove(0))
    })
}

fn global_setup(
    kind: MeasureKind,
    rho: &DensityMatrix,
    config: &OptimizerConfig,
) -> Result<ProductChart> {
    check_arity(kind, rho)?;
    Ok(ProductChart::new(rho.dims(), config.orthonormal_only))
}

/// `inf ‖ρ − Φ_{A_1…A_N} ρ‖²` over one oblique channel per subsystem.
pub fn oblique_global_geometric(
    rho: &DensityMatrix,
    config: &OptimizerConfig,
) -> Result<MeasureResult> {
    let kind = MeasureKind::ObliqueGlobalGeometric;
    let chart = global_setup(kind, rho, config)?;
    let dims = rho.dims();
    multistart(kind, config, &chart, Vec::new(), |x| {
        let Some(bases) = chart.decode(x, config.condition_cap) else {
            return PENALTY;
        };
        CompositeChannel::on_all(bases)
            .apply_operator(dims, rho.matrix())
            .map_or(PENALTY, |out| (rho.matrix() - &out).frobenius_sq())
    })
}

/// `inf [I(ρ) − I(Φ_{A_1…A_N} ρ)]` with `I` the total correlation
/// `Σ_k S(ρ_k) − S(ρ)`. No sign is guaranteed.
pub fn oblique_global_info(rho: &DensityMatrix, config: &OptimizerConfig) -> Result<MeasureResult> {
    let kind = MeasureKind::ObliqueGlobalInfo;
    let chart = global_setup(kind, rho, config)?;
    let dims = rho.dims();
    let partition = Partition::individual(dims.len())?;
    let before = mutual_information_op(dims, rho.matrix(), &partition, ENTROPY_CLAMP)?;
    multistart(kind, config, &chart, Vec::new(), |x| {
        let Some(bases) = chart.decode(x, config.condition_cap) else {
            return PENALTY;
        };
        CompositeChannel::on_all(bases)
            .apply_operator(dims, rho.matrix())
            .and_then(|out| mutual_information_op(dims, &out, &partition, ENTROPY_CLAMP))
            .map_or(PENALTY, |after| before - after)
    })
}

/// Outcome of searching for a channel on `target` that fixes a state.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointSearch {
    /// Smallest `‖Φρ − ρ‖` found.
    pub residual: f64,
    pub basis: Option<ObliqueBasis>,
    pub per_start_residuals: Vec<f64>,
    pub converged: bool,
}

/// Searches oblique bases of subsystem `target` for a channel fixing `rho`,
/// from `config.restarts` random starts. Each run minimizes the Frobenius
/// residual `‖Φρ − ρ‖_F`; the residual reported per run is `‖Φρ − ρ‖` in
/// `norm` at its end point.
pub fn fixed_point_search(
    rho: &DensityMatrix,
    target: usize,
    norm: ResidualNorm,
    config: &OptimizerConfig,
) -> Result<FixedPointSearch> {
    config.validate()?;
    check_arity(MeasureKind::ObliqueGeometricPhi, rho)?;
    let dims = rho.dims();
    if target >= dims.len() {
        return Err(crate::Error::InvalidSubsystem {
            index: target,
            count: dims.len(),
        });
    }
    let chart = Chart::new(dims[target], config.orthonormal_only);
    let output = |x: &[f64]| {
        let basis = chart.decode(x, config.condition_cap)?;
        ObliqueChannel::new(target, basis)
            .apply_operator(dims, rho.matrix())
            .ok()
    };
    let objective = |x: &[f64]| {
        output(x).map_or(PENALTY, |out| {
            libm::sqrt((&out - rho.matrix()).frobenius_sq())
        })
    };
    let opts = config.nelder_mead();
    let mut per_start_residuals = vec![];
    let mut best: Option<(f64, Vec<f64>, bool)> = None;
    for r in 0..config.restarts {
        let start = chart.random(&mut config.seed.derive(r as u64).rng());
        let out = minimize(objective, &start, &opts);
        let residual = output(&out.x).map_or(f64::INFINITY, |o| norm.distance(&o, rho.matrix()));
        per_start_residuals.push(residual);
        if best.as_ref().map_or(true, |b| residual < b.0) {
            best = Some((residual, out.x, out.converged));
        }
    }
    let (residual, x, converged) = best.expect("restarts >= 1");
    Ok(FixedPointSearch {
        residual,
        basis: chart.decode(&x, config.condition_cap),
        per_start_residuals,
        converged,
    })
}
