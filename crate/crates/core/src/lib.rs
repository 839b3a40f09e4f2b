//! Exact construction and certification of bent integral surface-group
//! representations.
//!
//! The algebra is generic over the scalar traits in [`scalar`]; the concrete
//! aliases below fix the usual instantiations.

pub mod bendcore;
pub mod density;
pub mod error;
pub mod exactmat;
pub mod modsearch;
pub mod nfield;
pub mod pipeline;
pub mod polyring;
pub mod repkit;
pub mod scalar;
pub mod surfgrp;

pub use error::{Error, Result};

pub type Z = num_bigint::BigInt;
pub type Q = num_rational::BigRational;
pub type NfMatrix = exactmat::Matrix<nfield::NfElement>;
pub type QMatrix = exactmat::Matrix<Q>;
pub type ZMatrix = exactmat::Matrix<Z>;
pub type ZPoly = polyring::Poly<Z>;
pub type QPoly = polyring::Poly<Q>;
pub type NfPoly = polyring::Poly<nfield::NfElement>;
