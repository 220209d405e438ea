//! Dual bases, the oblique channel and its fixed points.
//!
//! States of the form `Σ p_i |i⟩⟨i| ⊗ σ_i` over a normalized basis `{|i⟩}`
//! of the target subsystem are exactly the fixed points of the channel built
//! from that basis; [`is_fixed_point`] tests one direction and
//! [`decompose_fixed_point`] recovers `(p_i, σ_i)` for the other.

mod basis;
pub(crate) mod blocks;
mod channel;
mod composite;

pub use basis::{dual_basis, ObliqueBasis, DEFAULT_CONDITION_CAP};
pub use channel::{
    decompose_fixed_point, is_fixed_point, is_fixed_point_with, reconstruct, Component,
    ConditionalBlocks, FixedPointCheck, ObliqueChannel, ResidualNorm, FIXED_POINT_TOL,
    NORMALIZATION_FLOOR, WEIGHT_FLOOR,
};
pub use composite::CompositeChannel;
