use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmat::{matrix_entries_from_json, matrix_entries_to_json, minimal_polynomial};
use crate::nfield::{FieldJson, NfElement, NumberField};
use crate::polyring::{is_real_rooted_distinct_positive, is_real_rooted_positive, is_reciprocal, Poly};
use crate::repkit::SurfaceRep;
use crate::{NfMatrix, NfPoly};

/// How the bending matrix was built.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Construction {
    /// `u^{n₂}` on the first primary block, `u^{−n₁}·C₂` on the second.
    UnitBlocks { unit: Vec<String>, power: u64, split: (usize, usize) },
    /// Identity on the first blocks, `C₂` on the last (rational case).
    IdentityBlocks { power: u64, split: (usize, usize), fixed_line: bool },
    /// A unit `p(C)` of the order generated by an irreducible block.
    IrreducibleUnit { power: u64, height: u32, coefficients: Vec<i64>, fixed_line: bool },
}

/// Properties of `A` relative to the image of the bending curve. Every field
/// is recomputed from the two matrices alone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BendChecks {
    pub centralizes: bool,
    pub integral: bool,
    pub det_one: bool,
    /// Positive real spectrum and squarefree minimal polynomial, so `A` has a
    /// real diagonalizable logarithm.
    pub positive_semisimple: bool,
    pub distinct_spectrum: bool,
    pub non_reciprocal_charpoly: bool,
    pub eigenvalue_one_multiplicity: usize,
}

fn root_multiplicity_at_one(f: &NfPoly) -> usize {
    let lin = Poly::new(vec![-NfElement::one(), NfElement::one()]);
    let mut g = f.clone();
    let mut k = 0;
    while !g.is_zero() && g.eval(&NfElement::one()).is_zero() {
        g = g.div_rem(&lin).0;
        k += 1;
    }
    k
}

impl BendChecks {
    pub fn compute(a: &NfMatrix, curve_image: &NfMatrix) -> Self {
        let f = a.charpoly();
        BendChecks {
            centralizes: a.commutes_with(curve_image),
            integral: a.is_integral(),
            det_one: a.det().is_one(),
            positive_semisimple: is_real_rooted_positive(&f) && minimal_polynomial(a).is_squarefree(),
            distinct_spectrum: is_real_rooted_distinct_positive(&f),
            non_reciprocal_charpoly: !is_reciprocal(&f),
            eigenvalue_one_multiplicity: root_multiplicity_at_one(&f),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BendCertificate {
    pub field: Arc<NumberField>,
    pub a: NfMatrix,
    pub curve: usize,
    pub checks: BendChecks,
    pub construction: Construction,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BendCertificateJson {
    pub field: FieldJson,
    pub a: Vec<Vec<Vec<String>>>,
    pub curve: usize,
    pub checks: BendChecks,
    pub construction: Construction,
}

impl BendCertificate {
    pub fn new(field: Arc<NumberField>, a: NfMatrix, curve_image: &NfMatrix, construction: Construction) -> Self {
        let checks = BendChecks::compute(&a, curve_image);
        BendCertificate { field, a, curve: 0, checks, construction }
    }

    /// Checks required for the construction: every recipe needs an integral
    /// determinant-one centralizing matrix with a real logarithm; the unit
    /// recipes must also break inverse pairing, while the identity-block
    /// recipe must carry a repeated eigenvalue one.
    pub fn is_valid(&self) -> bool {
        let c = &self.checks;
        let base = c.centralizes && c.integral && c.det_one && c.positive_semisimple;
        base && match self.construction {
            Construction::UnitBlocks { .. } | Construction::IrreducibleUnit { .. } => c.non_reciprocal_charpoly,
            Construction::IdentityBlocks { .. } => c.eigenvalue_one_multiplicity > 1,
        }
    }

    /// Recompute the checks against a representation and compare with the
    /// stored ones.
    pub fn reverify(&self, rep: &SurfaceRep) -> bool {
        rep.generators.get(self.curve).is_some_and(|g| BendChecks::compute(&self.a, g) == self.checks)
    }

    /// The same certificate data for a power of `A`.
    pub fn power(&self, e: u64, curve_image: &NfMatrix) -> Self {
        let a = self.a.pow(e);
        BendCertificate { field: self.field.clone(), checks: BendChecks::compute(&a, curve_image), a, ..self.clone() }
    }

    pub fn to_json(&self) -> BendCertificateJson {
        BendCertificateJson {
            field: self.field.to_json(),
            a: matrix_entries_to_json(&self.field, &self.a),
            curve: self.curve,
            checks: self.checks.clone(),
            construction: self.construction.clone(),
        }
    }

    pub fn from_json(j: &BendCertificateJson) -> Result<Self> {
        let field = NumberField::from_json(&j.field)?;
        let a = matrix_entries_from_json(&field, &j.a)?;
        Ok(BendCertificate { field, a, curve: j.curve, checks: j.checks.clone(), construction: j.construction.clone() })
    }
}

/// `b1 ↦ ρ(b1)·A`, leaving the other generators fixed. The relator is
/// re-verified exactly.
pub fn apply_bend(rep: &SurfaceRep, cert: &BendCertificate) -> Result<SurfaceRep> {
    if cert.curve != 0 {
        return Err(Error::Precondition("bending is only supported along a1".into()));
    }
    if !cert.reverify(rep) || !cert.is_valid() {
        return Err(Error::Precondition("bend certificate does not hold for this representation".into()));
    }
    let bent = &rep.generators[1] * &cert.a;
    let mut gens = rep.generators.clone();
    gens[1] = bent;
    let mut out = SurfaceRep::new(rep.genus, rep.field.clone(), gens)?;
    out.provenance = rep.provenance.clone();
    out.push_provenance(
        "apply_bend",
        serde_json::json!({ "curve": "a1", "stable_letter": "b1", "side": "right", "construction": cert.construction }),
        rep.content_hash(),
    );
    Ok(out)
}
