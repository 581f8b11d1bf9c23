//! Finite Heisenberg groups, their Schrödinger representations, and the
//! Heisenberg group of a transversal pair of Lagrangians.
//!
//! Only reduced (étale) finite groups appear: the central Q/Z of phases stands in for G_m.

mod group;
mod lagrangian;
mod rep;

pub use group::{
    frac, isotropic_subgroups, lift_isotropic, maximal_isotropic, maximal_isotropic_subgroups,
    FinAb, HeisenbergData, IsotropicLift, Phase, SkewPairing, Subgroup,
};
pub use lagrangian::{
    curve_form, hom_degree_twisted, hom_fibre, hom_space, intersection_heisenberg, lagrangian,
    momenta, polarization_graph, positions, FibreData, HomRoute, HomSpace, IntersectionHeisenberg,
};
pub use rep::{
    brute_force_multiplicities, character_norm, equivalent, invariants_dim, is_irreducible_weight1,
    restrict_multiplicities, schrodinger, schrodinger_default, CharacterCount, MonomialRep,
    Multiplicities,
};

/// Default order bound for subgroup enumeration and brute-force decompositions.
pub const DEFAULT_BRUTE_BOUND: usize = 64;
