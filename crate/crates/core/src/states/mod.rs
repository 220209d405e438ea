//! State constructors for the hierarchy
//! zero discord ⊂ zero oblique discord ⊂ separable, and seeded ensembles.

mod random;
mod specs;
mod witnesses;

pub use random::{
    gaussian_complex, gaussian_matrix, random_density, random_density_with, random_oblique_basis,
    random_oblique_basis_with, random_unitary, random_unitary_with, RngSeed, RESAMPLE_BUDGET,
};
pub use specs::{
    build_global_zod, build_separable, build_zod, Constructed, GlobalZodSpec, Membership,
    SeparableSpec, SeparableTerm, ZodSpec, WEIGHT_TOL,
};
pub use witnesses::{hierarchy_witnesses, HierarchyWitness};
