//! Discord-like measures and the multi-start optimizer behind them.
//!
//! Every measure is an infimum over bases (or measurements) and is computed
//! by Nelder–Mead from several starts. Reported values are the best feasible
//! objective found, hence upper bounds on the true infima.
//!
//! Bipartite measures act on subsystem 0 against all remaining subsystems.
//! Global measures act on every subsystem.

mod baseline;
mod chart;
mod inner;
mod nelder_mead;
mod oblique;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::channels::{ObliqueBasis, DEFAULT_CONDITION_CAP};
use crate::qmat::DensityMatrix;
use crate::states::RngSeed;
use crate::{Error, Result};

pub use baseline::{
    discord_geometric, discord_global, discord_global_geometric, discord_info,
    projective_measurement,
};
pub use chart::{Chart, ProductChart};
pub use inner::{INNER_MAX_ITERATIONS, INNER_TOLERANCE};
pub use nelder_mead::{minimize, NelderMeadOptions, NelderMeadOutcome};
pub use oblique::{
    fixed_point_search, oblique_geometric, oblique_geometric_phi, oblique_global_geometric,
    oblique_global_info, oblique_info, FixedPointSearch,
};

/// Objective assigned to bases past the condition cap or with a vanishing
/// channel normalization.
pub const PENALTY: f64 = 1e6;

/// Converged information values below this are flagged as counterexample
/// candidates for `I(ρ) ≥ I(Φρ)`.
pub const CANDIDATE_THRESHOLD: f64 = -1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MeasureKind {
    /// `inf_Π [I(ρ) − I(Π_A ρ)]` over projective measurements on A.
    Discord,
    /// `inf ‖ρ − χ‖²` over zero-discord `χ`.
    DiscordGeometric,
    /// Projective measurements on every subsystem.
    DiscordGlobal,
    DiscordGlobalGeometric,
    /// `inf ‖ρ − χ‖²` over zero-oblique-discord `χ`.
    ObliqueGeometric,
    /// `inf_Φ ‖ρ − Φ_A ρ‖²`.
    ObliqueGeometricPhi,
    /// `inf_Φ [I(ρ) − I(Φ_A ρ)]`.
    ObliqueInfo,
    ObliqueGlobalGeometric,
    ObliqueGlobalInfo,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 9] = [
        MeasureKind::Discord,
        MeasureKind::DiscordGeometric,
        MeasureKind::DiscordGlobal,
        MeasureKind::DiscordGlobalGeometric,
        MeasureKind::ObliqueGeometric,
        MeasureKind::ObliqueGeometricPhi,
        MeasureKind::ObliqueInfo,
        MeasureKind::ObliqueGlobalGeometric,
        MeasureKind::ObliqueGlobalInfo,
    ];

    /// Identifier used in serialized results.
    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::Discord => "discord",
            MeasureKind::DiscordGeometric => "discord_geo",
            MeasureKind::DiscordGlobal => "discord_global",
            MeasureKind::DiscordGlobalGeometric => "discord_global_geo",
            MeasureKind::ObliqueGeometric => "d_go",
            MeasureKind::ObliqueGeometricPhi => "d_go1",
            MeasureKind::ObliqueInfo => "d_o",
            MeasureKind::ObliqueGlobalGeometric => "d_go_global",
            MeasureKind::ObliqueGlobalInfo => "d_o_global",
        }
    }

    pub fn is_global(self) -> bool {
        matches!(
            self,
            MeasureKind::DiscordGlobal
                | MeasureKind::DiscordGlobalGeometric
                | MeasureKind::ObliqueGlobalGeometric
                | MeasureKind::ObliqueGlobalInfo
        )
    }

    /// Information measures are in bits, the others in squared
    /// Hilbert–Schmidt units.
    pub fn is_information(self) -> bool {
        matches!(
            self,
            MeasureKind::Discord
                | MeasureKind::DiscordGlobal
                | MeasureKind::ObliqueInfo
                | MeasureKind::ObliqueGlobalInfo
        )
    }

    /// Whether the measure is known to be nonnegative. The oblique
    /// information measures are not.
    pub fn is_nonnegative(self) -> bool {
        !matches!(
            self,
            MeasureKind::ObliqueInfo | MeasureKind::ObliqueGlobalInfo
        )
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeasureKind {
    type Err = Error;

    /// Accepts `d_go` and `d-go` spellings alike.
    fn from_str(s: &str) -> Result<Self> {
        let canonical: String = s.chars().map(|c| if c == '-' { '_' } else { c }).collect();
        MeasureKind::ALL
            .into_iter()
            .find(|k| k.name() == canonical)
            .ok_or_else(|| Error::InvalidConfig(alloc::format!("unknown measure `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    /// Nelder–Mead iterations per restart.
    pub max_iterations: usize,
    /// Objective spread at which a simplex counts as converged.
    pub tolerance: f64,
    pub initial_scale: f64,
    pub seed: RngSeed,
    /// Bases with a larger Gram condition number are penalized.
    pub condition_cap: f64,
    /// Restrict oblique measures to orthonormal bases.
    pub orthonormal_only: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iterations: 2000,
            tolerance: 1e-9,
            initial_scale: 0.1,
            seed: RngSeed(0),
            condition_cap: DEFAULT_CONDITION_CAP,
            orthonormal_only: false,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if !(self.tolerance > 0.0) || !(self.initial_scale > 0.0) {
            return Err(Error::InvalidConfig(
                "tolerances and scales must be positive".into(),
            ));
        }
        if !(self.condition_cap >= 1.0) {
            return Err(Error::InvalidConfig(
                "condition cap must be at least 1".into(),
            ));
        }
        Ok(())
    }

    pub fn nelder_mead(&self) -> NelderMeadOptions {
        NelderMeadOptions {
            max_iterations: self.max_iterations,
            tolerance: self.tolerance,
            initial_scale: self.initial_scale,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasureResult {
    pub kind: MeasureKind,
    /// Minimum of `per_restart_values`.
    pub value: f64,
    pub best_parameters: Vec<f64>,
    /// One basis per measured subsystem at the best point.
    pub best_bases: Vec<ObliqueBasis>,
    /// Whether the restart that produced `value` met the tolerance.
    pub converged: bool,
    pub restarts_used: usize,
    pub per_restart_values: Vec<f64>,
    pub seed: RngSeed,
    /// Converged information value below [`CANDIDATE_THRESHOLD`].
    pub counterexample_candidate: bool,
}

/// `tr[(ρ − χ)²]`.
pub fn hs_distance(rho: &DensityMatrix, chi: &DensityMatrix) -> Result<f64> {
    if rho.dims() != chi.dims() {
        return Err(Error::DimensionMismatch {
            expected: rho.order(),
            found: chi.order(),
        });
    }
    Ok((rho.matrix() - chi.matrix()).frobenius_sq())
}

/// Dispatches to the measure named by `kind`.
pub fn evaluate(
    kind: MeasureKind,
    rho: &DensityMatrix,
    config: &OptimizerConfig,
) -> Result<MeasureResult> {
    match kind {
        MeasureKind::Discord => discord_info(rho, config),
        MeasureKind::DiscordGeometric => discord_geometric(rho, config),
        MeasureKind::DiscordGlobal => discord_global(rho, config),
        MeasureKind::DiscordGlobalGeometric => discord_global_geometric(rho, config),
        MeasureKind::ObliqueGeometric => oblique_geometric(rho, config),
        MeasureKind::ObliqueGeometricPhi => oblique_geometric_phi(rho, config),
        MeasureKind::ObliqueInfo => oblique_info(rho, config),
        MeasureKind::ObliqueGlobalGeometric => oblique_global_geometric(rho, config),
        MeasureKind::ObliqueGlobalInfo => oblique_global_info(rho, config),
    }
}

fn check_arity(kind: MeasureKind, rho: &DensityMatrix) -> Result<()> {
    if rho.num_subsystems() < 2 {
        return Err(Error::Arity {
            measure: kind.name(),
            expected: "at least two subsystems",
            found: rho.num_subsystems(),
        });
    }
    Ok(())
}

/// Runs Nelder–Mead from each seeded start, then from random starts until
/// `config.restarts` runs have been made. Random start `r` draws from
/// `config.seed ⊕ r`.
fn multistart<F>(
    kind: MeasureKind,
    config: &OptimizerConfig,
    chart: &ProductChart,
    seeded: Vec<Vec<f64>>,
    mut objective: F,
) -> Result<MeasureResult>
where
    F: FnMut(&[f64]) -> f64,
{
    config.validate()?;
    let total = config.restarts.max(seeded.len());
    let opts = config.nelder_mead();
    let mut per_restart_values = Vec::with_capacity(total);
    let mut best: Option<NelderMeadOutcome> = None;
    let mut seeded = seeded.into_iter();
    for r in 0..total {
        let start = seeded
            .next()
            .unwrap_or_else(|| chart.random(&mut config.seed.derive(r as u64).rng()));
        let outcome = minimize(&mut objective, &start, &opts);
        per_restart_values.push(outcome.value);
        if best.as_ref().map_or(true, |b| outcome.value < b.value) {
            best = Some(outcome);
        }
    }
    let best = best.expect("at least one restart");
    let best_bases = chart
        .decode(&best.x, config.condition_cap)
        .unwrap_or_default();
    let candidate = kind.is_information()
        && !kind.is_nonnegative()
        && best.converged
        && best.value < CANDIDATE_THRESHOLD;
    Ok(MeasureResult {
        kind,
        value: best.value,
        best_parameters: best.x,
        best_bases,
        converged: best.converged,
        restarts_used: total,
        per_restart_values,
        seed: config.seed,
        counterexample_candidate: candidate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::StateVector;
    use crate::states::random_density;
    use alloc::vec;

    #[test]
    fn hs_distance_values() {
        let k = |i| DensityMatrix::pure(vec![2], &StateVector::basis(2, i)).unwrap();
        assert_eq!(hs_distance(&k(0), &k(0)).unwrap(), 0.0);
        assert_eq!(hs_distance(&k(0), &k(1)).unwrap(), 2.0);
        let a = random_density(&[2, 2], 4, RngSeed(1)).unwrap();
        let b = random_density(&[2, 2], 2, RngSeed(2)).unwrap();
        let mut entrywise = 0.0;
        for r in 0..4 {
            for c in 0..4 {
                entrywise += (a.matrix()[(r, c)] - b.matrix()[(r, c)]).norm_sqr();
            }
        }
        assert!((hs_distance(&a, &b).unwrap() - entrywise).abs() < 1e-15);
        assert!(hs_distance(&a, &k(0)).is_err());
    }

    #[test]
    fn names_round_trip() {
        for k in MeasureKind::ALL {
            assert_eq!(k.name().parse::<MeasureKind>().unwrap(), k);
            assert_eq!(
                k.name().replace('_', "-").parse::<MeasureKind>().unwrap(),
                k
            );
        }
        assert!("discord_x".parse::<MeasureKind>().is_err());
    }

    #[test]
    fn config_validation() {
        assert!(OptimizerConfig::default().validate().is_ok());
        let bad = OptimizerConfig {
            restarts: 0,
            ..OptimizerConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
