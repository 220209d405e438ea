use alloc::vec::Vec;

use super::{delta_i_with, SearchRecord};
use crate::channels::{ObliqueBasis, ObliqueChannel};
use crate::qmat::{
    eigenvalues_unchecked, spectral_entropy_compensated, validity_of, DensityMatrix, Validity,
};
use crate::Error;

/// Eigenvalue clamps over which a certified `ΔI` must keep its sign.
pub const CERTIFICATION_CLAMPS: [f64; 3] = [1e-12, 1e-13, 1e-14];

/// A record with its state and basis stored inline.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub record: SearchRecord,
    pub state: DensityMatrix,
    pub basis: ObliqueBasis,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub state: DensityMatrix,
    pub basis: ObliqueBasis,
    /// `ΔI` at each of [`CERTIFICATION_CLAMPS`], with compensated summation.
    pub delta_i_by_clamp: Vec<(f64, f64)>,
    /// `ΔI` at the tightest clamp.
    pub delta_i: f64,
    pub compensated_summation: bool,
    pub biorthogonality_residual: f64,
    pub condition: f64,
    pub state_validity: Validity,
    pub output_validity: Validity,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Rejection {
    /// The recorded `ΔI` is not negative.
    NotNegative {
        delta_i: f64,
    },
    IllConditioned {
        condition: f64,
        cap: f64,
    },
    Biorthogonality {
        residual: f64,
    },
    InvalidState(Validity),
    InvalidOutput(Validity),
    /// `ΔI` changes sign as the clamp varies.
    ClampSensitive {
        values: Vec<(f64, f64)>,
    },
    /// Stable in sign but not below the threshold at every clamp.
    AboveThreshold {
        delta_i: f64,
        threshold: f64,
    },
    /// The recomputed value disagrees with the recorded one.
    ReplayMismatch {
        recorded: f64,
        recomputed: f64,
    },
    Evaluation(Error),
}

impl Rejection {
    pub fn reason(&self) -> &'static str {
        match self {
            Rejection::NotNegative { .. } => "precondition: recorded delta_i is not negative",
            Rejection::IllConditioned { .. } => "ill-conditioned basis",
            Rejection::Biorthogonality { .. } => "biorthogonality residual",
            Rejection::InvalidState(_) => "state validity or PSD margin",
            Rejection::InvalidOutput(_) => "channel output PSD margin",
            Rejection::ClampSensitive { .. } => "entropy clamp sensitivity",
            Rejection::AboveThreshold { .. } => "above negativity threshold",
            Rejection::ReplayMismatch { .. } => "replay mismatch",
            Rejection::Evaluation(_) => "evaluation error",
        }
    }
}

/// Rechecks a candidate from its inline state and basis: conditioning,
/// biorthogonality, validity and PSD margins of `ρ` and `Φρ` within
/// `tolerance`, sign stability of `ΔI` across [`CERTIFICATION_CLAMPS`],
/// every value below `threshold`, and agreement with the recorded value
/// within `tolerance` at the search clamp.
pub fn certify(
    candidate: &Candidate,
    threshold: f64,
    tolerance: f64,
    condition_cap: f64,
) -> Result<Certificate, Rejection> {
    let Candidate {
        record,
        state,
        basis,
    } = candidate;
    if !(record.delta_i < 0.0) {
        return Err(Rejection::NotNegative {
            delta_i: record.delta_i,
        });
    }
    let condition = basis.condition();
    if !(condition <= condition_cap) {
        return Err(Rejection::IllConditioned {
            condition,
            cap: condition_cap,
        });
    }
    let biorthogonality_residual = basis.biorthogonality_residual();
    if !(biorthogonality_residual <= tolerance) {
        return Err(Rejection::Biorthogonality {
            residual: biorthogonality_residual,
        });
    }
    let state_validity = validity_of(state.matrix());
    if !state_validity.within(tolerance) {
        return Err(Rejection::InvalidState(state_validity));
    }
    let channel = ObliqueChannel::new(0, basis.clone());
    let output = channel
        .apply_operator(state.dims(), state.matrix())
        .map_err(Rejection::Evaluation)?;
    let output_validity = validity_of(&output);
    if !output_validity.within(tolerance) {
        return Err(Rejection::InvalidOutput(output_validity));
    }

    let mut values = Vec::with_capacity(CERTIFICATION_CLAMPS.len());
    for clamp in CERTIFICATION_CLAMPS {
        let v = delta_i_with(state, &channel, |m| {
            spectral_entropy_compensated(&eigenvalues_unchecked(m), clamp)
        })
        .map_err(Rejection::Evaluation)?;
        values.push((clamp, v));
    }
    let negative = values.iter().filter(|(_, v)| *v < 0.0).count();
    if negative != values.len() {
        return Err(Rejection::ClampSensitive { values });
    }
    if let Some(&(_, worst)) = values.iter().find(|(_, v)| !(*v < threshold)) {
        return Err(Rejection::AboveThreshold {
            delta_i: worst,
            threshold,
        });
    }
    let recomputed = values[0].1;
    if !((recomputed - record.delta_i).abs() <= tolerance) {
        return Err(Rejection::ReplayMismatch {
            recorded: record.delta_i,
            recomputed,
        });
    }
    Ok(Certificate {
        state: state.clone(),
        basis: basis.clone(),
        delta_i: values[values.len() - 1].1,
        delta_i_by_clamp: values,
        compensated_summation: true,
        biorthogonality_residual,
        condition,
        state_validity,
        output_validity,
    })
}
