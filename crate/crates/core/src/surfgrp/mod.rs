//! Finitely presented groups: words, presentations, coset enumeration and
//! surface subgroups of triangle groups.

pub mod coset;
pub mod fixture;
pub mod hnn;
pub mod presentation;
pub mod search;
pub mod word;

pub use coset::{
    cycle_type, reidemeister_schreier, schreier_generators, todd_coxeter, torsion_free_check, CosetTable,
    SubgroupPresentation,
};
pub use fixture::SurfaceSubgroupFixture;
pub use hnn::HnnSplitting;
pub use presentation::{surface_relator, triangle_orbifold_euler, Presentation};
pub use search::{
    eval_word, find_surface_tuple, find_triangle_permutations, letter_images, relator_is_identity,
    verify_surface_tuple, SurfaceTuple,
};
pub use word::{Letter, Word};
