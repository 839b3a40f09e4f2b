//! Seed representations: the (3,4,4) triangle matrices, symmetric powers,
//! sign twists, integral conjugation and loxodromy spot checks.

mod lattice;
mod rep;
mod seed;

pub use lattice::{descend_to_rationals, integralize};
pub use rep::{ProvenanceEntry, SurfaceRep, SurfaceRepJson};
pub use seed::{
    genus2_seed, loxodromy_check, loxodromy_check_images, reduced_words, seed_relations, tau_n, tau_n_rep,
    triangle_images, triangle_seed, twist_by_character, LoxodromyReport, SeedRelations,
};
