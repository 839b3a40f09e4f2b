//! Bending matrices: integral powers, the three centralizer constructions,
//! certificates and the bend itself.

mod certificate;
mod construct;
mod power;

pub use certificate::{apply_bend, BendCertificate, BendCertificateJson, BendChecks, Construction};
pub use construct::{
    bend_matrix_identity_blocks, bend_matrix_irreducible, bend_matrix_unit_blocks, charpoly_factors, det_one_splits,
};
pub use power::{integral_power, MAX_POWER_ORDER};
