use std::sync::Arc;

use num_traits::One;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exactmat::{matrix_entries_from_json, matrix_entries_to_json, Matrix};
use crate::nfield::{FieldJson, NumberField};
use crate::surfgrp::{eval_word, letter_images, surface_relator, Word};
use crate::NfMatrix;

/// One derivation step recorded on a representation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProvenanceEntry {
    pub operation: String,
    pub params: serde_json::Value,
    pub input_hash: String,
}

/// Representation of the closed genus-`g` surface group, generators in the
/// order `a1, b1, ..., ag, bg`.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceRep {
    pub genus: usize,
    pub field: Arc<NumberField>,
    pub n: usize,
    pub generators: Vec<NfMatrix>,
    pub provenance: Vec<ProvenanceEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceRepJson {
    pub field: FieldJson,
    pub genus: usize,
    pub n: usize,
    pub generators: Vec<Vec<Vec<Vec<String>>>>,
    #[serde(default)]
    pub provenance: Vec<ProvenanceEntry>,
}

impl SurfaceRep {
    /// Checks sizes, determinant one and the relator identity.
    pub fn new(genus: usize, field: Arc<NumberField>, generators: Vec<NfMatrix>) -> Result<Self> {
        if generators.len() != 2 * genus || genus == 0 {
            return Err(Error::SizeMismatch(format!("{} images for genus {genus}", generators.len())));
        }
        let n = generators[0].rows();
        if generators.iter().any(|g| g.rows() != n || g.cols() != n) {
            return Err(Error::SizeMismatch("generator images differ in size".into()));
        }
        let generators: Vec<NfMatrix> = generators.into_iter().map(|g| g.map(|e| e.clone().in_field(&field))).collect();
        if let Some(i) = generators.iter().position(|g| !g.det().is_one()) {
            return Err(Error::Precondition(format!("generator {i} does not have determinant 1")));
        }
        let rep = SurfaceRep { genus, field, n, generators, provenance: Vec::new() };
        if !rep.relator_holds()? {
            return Err(Error::RelatorBroken("product of commutators is not the identity".into()));
        }
        Ok(rep)
    }

    pub fn generator_names(&self) -> Vec<String> {
        (1..=self.genus).flat_map(|i| [format!("a{i}"), format!("b{i}")]).collect()
    }

    pub fn letter_images(&self) -> Result<Vec<NfMatrix>> {
        letter_images(&self.generators)
    }

    pub fn eval(&self, w: &Word) -> Result<NfMatrix> {
        Ok(eval_word(w, &self.letter_images()?))
    }

    pub fn relator_matrix(&self) -> Result<NfMatrix> {
        self.eval(&surface_relator(self.genus))
    }

    pub fn relator_holds(&self) -> Result<bool> {
        Ok(self.relator_matrix()?.is_identity())
    }

    pub fn is_integral(&self) -> bool {
        self.generators.iter().all(Matrix::is_integral)
    }

    /// Conjugate every image: `g ↦ P·g·P⁻¹`.
    pub fn conjugate(&self, p: &NfMatrix) -> Result<Self> {
        let pinv = p.inverse()?;
        let gens = self.generators.iter().map(|g| &(p * g) * &pinv).collect();
        let mut out = SurfaceRep::new(self.genus, self.field.clone(), gens)?;
        out.provenance = self.provenance.clone();
        Ok(out)
    }

    pub fn with_generator(&self, i: usize, m: NfMatrix) -> Result<Self> {
        let mut gens = self.generators.clone();
        gens[i] = m;
        let mut out = SurfaceRep::new(self.genus, self.field.clone(), gens)?;
        out.provenance = self.provenance.clone();
        Ok(out)
    }

    pub fn push_provenance(&mut self, operation: &str, params: serde_json::Value, input_hash: String) {
        self.provenance.push(ProvenanceEntry { operation: operation.into(), params, input_hash });
    }

    pub fn to_json(&self) -> SurfaceRepJson {
        SurfaceRepJson {
            field: self.field.to_json(),
            genus: self.genus,
            n: self.n,
            generators: self.generators.iter().map(|g| matrix_entries_to_json(&self.field, g)).collect(),
            provenance: self.provenance.clone(),
        }
    }

    pub fn from_json(j: &SurfaceRepJson) -> Result<Self> {
        let k = NumberField::from_json(&j.field)?;
        let gens = j.generators.iter().map(|g| matrix_entries_from_json(&k, g)).collect::<Result<Vec<_>>>()?;
        let mut rep = SurfaceRep::new(j.genus, k, gens)?;
        if rep.n != j.n {
            return Err(Error::Parse(format!("declared dimension {} but images are {}", j.n, rep.n)));
        }
        rep.provenance = j.provenance.clone();
        Ok(rep)
    }

    /// SHA-256 over the field, genus and generator entries (provenance excluded).
    pub fn content_hash(&self) -> String {
        let mut j = self.to_json();
        j.provenance.clear();
        let bytes = serde_json::to_vec(&j).expect("serializable");
        hex::encode(Sha256::digest(&bytes))
    }
}
