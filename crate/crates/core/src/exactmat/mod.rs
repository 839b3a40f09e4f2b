//! Exact dense linear algebra: determinants, inverses, characteristic
//! polynomials, rational canonical forms, centralizers and invariant forms.

mod canonical;
mod forms;
mod hnf;
mod matrix;

pub use canonical::{
    frobenius_form, frobenius_form_field, local_minpoly, maximal_vector, minimal_polynomial, primary_split,
    FrobeniusForm,
};
pub use forms::{block_assemble, centralizer_space, invariant_form_space, preserves_form, FormSpace};
pub use hnf::hermite_normal_form;
pub use matrix::Matrix;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nfield::{FieldJson, NfElement, NumberField};

/// Serialized matrix over a number field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub field: FieldJson,
    pub n: usize,
    pub entries: Vec<Vec<Vec<String>>>,
}

pub fn matrix_to_json(k: &NumberField, m: &Matrix<NfElement>) -> MatrixJson {
    MatrixJson {
        field: k.to_json(),
        n: m.rows(),
        entries: m.to_rows().iter().map(|r| r.iter().map(|e| e.to_strings(k.degree())).collect()).collect(),
    }
}

pub fn matrix_from_json(j: &MatrixJson) -> Result<(Arc<NumberField>, Matrix<NfElement>)> {
    let k = NumberField::from_json(&j.field)?;
    let m = matrix_entries_from_json(&k, &j.entries)?;
    if m.rows() != j.n || m.cols() != j.n {
        return Err(Error::Parse(format!("declared size {} does not match entries", j.n)));
    }
    Ok((k, m))
}

pub fn matrix_entries_from_json(k: &Arc<NumberField>, rows: &[Vec<Vec<String>>]) -> Result<Matrix<NfElement>> {
    let n = rows.len();
    let parsed = rows
        .iter()
        .map(|r| {
            if r.len() != n {
                return Err(Error::Parse("matrix is not square".into()));
            }
            r.iter().map(|e| NfElement::from_strings(k, e)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(parsed))
}

pub fn matrix_entries_to_json(k: &NumberField, m: &Matrix<NfElement>) -> Vec<Vec<Vec<String>>> {
    m.to_rows().iter().map(|r| r.iter().map(|e| e.to_strings(k.degree())).collect()).collect()
}
