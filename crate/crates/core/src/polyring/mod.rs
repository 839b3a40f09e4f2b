//! Univariate polynomials over ℤ, ℚ, number fields and prime fields.

mod factor;
mod fp;
mod poly;
mod sturm;

pub use factor::{
    combinations, factor_over_int, factor_over_quadratic_field, squarefree_decomposition, IntFactorization,
    IrreducibilityWitness,
};
pub use fp::{invmod, is_irreducible_mod_p, is_prime, mulmod, next_prime, powmod, sqrt_mod, FpPoly};
pub use poly::Poly;
pub use sturm::{
    count_real_roots, has_distinct_absolute_values, is_real_rooted_distinct_positive, is_real_rooted_positive,
    is_reciprocal, sturm_count, sturm_count_rational, sturm_sequence, Bound,
};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::nfield::{NfElement, NumberField};

/// Serialized polynomial: base-ring tag plus coefficients, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub ring: String,
    pub coeffs: Vec<serde_json::Value>,
}

pub fn int_poly_json(f: &Poly<BigInt>) -> PolyJson {
    PolyJson { ring: "Int".into(), coeffs: f.coeffs().iter().map(|c| serde_json::Value::String(c.to_string())).collect() }
}

pub fn int_poly_from_json(j: &PolyJson) -> Result<Poly<BigInt>> {
    let v = j
        .coeffs
        .iter()
        .map(|c| {
            c.as_str()
                .and_then(|s| s.parse::<BigInt>().ok())
                .ok_or_else(|| Error::Parse(format!("bad integer coefficient {c}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(v))
}

/// Ring tag is "OK" when every coefficient is integral, else "K".
pub fn nf_poly_json(k: &NumberField, f: &Poly<NfElement>) -> PolyJson {
    use crate::scalar::Integrality;
    let integral = f.coeffs().iter().all(|c| c.is_integral());
    PolyJson {
        ring: if integral { "OK".into() } else { "K".into() },
        coeffs: f.coeffs().iter().map(|c| serde_json::json!(c.to_strings(k.degree()))).collect(),
    }
}

pub fn nf_poly_from_json(k: &Arc<NumberField>, j: &PolyJson) -> Result<Poly<NfElement>> {
    let v = j
        .coeffs
        .iter()
        .map(|c| {
            let s: Vec<String> = serde_json::from_value(c.clone())?;
            NfElement::from_strings(k, &s)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(v))
}

pub fn fp_poly_json(f: &FpPoly) -> PolyJson {
    PolyJson {
        ring: format!("Fp({})", f.modulus()),
        coeffs: f.coeffs().iter().map(|&c| serde_json::json!(c)).collect(),
    }
}
