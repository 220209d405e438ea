//! Numerical core for oblique discord.
//!
//! A zero-oblique-discord state has the form `Σ p_i |i⟩⟨i| ⊗ ρ_i` where the
//! normalized vectors `|i⟩` form a basis of the first subsystem that need not
//! be orthogonal. This crate provides:
//!
//! - [`qmat`]: dense complex matrices, density matrices, partial traces,
//!   entropies and mutual information;
//! - [`channels`]: dual (biorthogonal) bases, the renormalized oblique channel
//!   `Φ_A ρ = Σ |i⟩⟨ĩ|ρ|ĩ⟩⟨i| / tr Σ ⟨ĩ|ρ|ĩ⟩`, fixed-point checks and
//!   decompositions, and multipartite composites;
//! - [`states`]: constructors for the separable / zero-oblique-discord /
//!   zero-discord hierarchy and seeded random ensembles;
//! - [`measures`]: discord baselines and the oblique measures, all realized by
//!   a seeded multi-start Nelder–Mead optimizer;
//! - [`conjecture`]: per-sample search for states and channels with
//!   `I(ρ) < I(Φ_A ρ)`, summary aggregation and candidate certification.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, logging and the
//! command line live in the companion `oblique` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod channels;
pub mod conjecture;
mod error;
pub mod measures;
pub mod qmat;
pub mod states;

pub use error::{Error, Result};
pub use num_complex::Complex64;
