//! Randomized search for states and channels with `I(ρ) < I(Φ_A ρ)`, and
//! certification of any such candidates.
//!
//! The search is split into independent samples keyed by `(master seed,
//! sample index)`, so it can be sharded and resumed by the caller. Each
//! sample yields two records: the random starting basis and the end point of
//! a short Nelder–Mead descent on `ΔI = I(ρ) − I(Φ_A ρ)`.

mod certify;
mod search;
mod summary;

pub use certify::{certify, Candidate, Certificate, Rejection, CERTIFICATION_CLAMPS};
pub use search::{
    delta_i, delta_i_with, evaluate_sample, replay, RankSchedule, SearchConfig, SearchRecord, Stage,
};
pub use summary::{DimsSummary, Summary, SummaryBuilder, HISTOGRAM_EDGES};
