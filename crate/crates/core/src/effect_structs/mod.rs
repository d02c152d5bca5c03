//! Exact effect-algebraic structures: effect algebras, monoids and
//! divisoids, ortholattices, the `D_M` monad and finite abstract convex sets.
//!
//! No tolerances here. Finite carriers are swept exhaustively; the rational
//! unit interval is sampled from a seed and the trial count is reported.

mod convex;
mod dm;
mod ea;
mod lattice;

pub use convex::{
    aconv_coproduct, all_semilattices, candidate_convex_sets, least_congruence, semilattice_bridge,
    semilattice_coproduct_oracle, semilattice_from_convex, verify_coproduct, Coproduct,
    FiniteConvexSet, Quotient, Semilattice,
};
pub use dm::{dm_eta, dm_map, dm_monad_check, dm_mu, random_dist, FiniteScalars, FormalDist, Reading, Scalars};
pub use ea::{
    divisoid_check, ea_harness, emonoid_check, emonoid_lemma_check, predicates_as_module, BooleanAlgebra,
    EffectAlgebra, EffectDivisoid, EffectMonoid, Mode, TableEa, UnitRational,
};
pub use lattice::{modularity_check, oml_check, FiniteOrtholattice};
