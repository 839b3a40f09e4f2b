//! Zariski-closure certificates: invariant forms plus the principal-SL(2)
//! spectral test.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmat::{invariant_form_space, matrix_entries_from_json, matrix_entries_to_json, preserves_form, Matrix};
use crate::nfield::{FieldJson, NfElement, NumberField};
use crate::polyring::{count_real_roots, nf_poly_from_json, nf_poly_json, sturm_count, Bound, Poly, PolyJson};
use crate::repkit::{reduced_words, SurfaceRep};
use crate::scalar::rat;
use crate::surfgrp::{eval_word, Word};
use crate::{NfMatrix, NfPoly};

/// Theorems the classification relies on; recorded in every certificate.
pub const IMPORTED_THEOREMS: [&str; 2] = [
    "Guichard: the Zariski closure of a Hitchin representation is conjugate to the principal SL(2), Sp(2k), SO(k,k+1), G2 (n = 7) or SL(n)",
    "the input representation lies in the Hitchin component",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClosureClass {
    PrincipalSL2,
    Symplectic,
    SplitOrthogonal,
    FullSL,
}

impl ClosureClass {
    fn tier(self) -> u8 {
        match self {
            ClosureClass::PrincipalSL2 => 0,
            ClosureClass::Symplectic | ClosureClass::SplitOrthogonal => 1,
            ClosureClass::FullSL => 2,
        }
    }
}

impl fmt::Display for ClosureClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ClosureClass::PrincipalSL2 => "PrincipalSL2",
            ClosureClass::Symplectic => "Symplectic",
            ClosureClass::SplitOrthogonal => "SplitOrthogonal",
            ClosureClass::FullSL => "FullSL",
        };
        f.write_str(s)
    }
}

/// Outcome of comparing a spectrum with the spectra of `τₙ(SL(2))`.
#[derive(Clone, Debug, PartialEq)]
pub enum PrincipalTest {
    /// `trace_poly` is the gcd of the coefficient equations in the trace `s`;
    /// it has a real root with `|s| > 2`. `trace` is that root when it lies
    /// in the field.
    Consistent { trace_poly: NfPoly, trace: Option<NfElement> },
    Refuted,
}

impl PrincipalTest {
    pub fn is_refuted(&self) -> bool {
        matches!(self, PrincipalTest::Refuted)
    }
}

fn principal_charpoly_cache() -> &'static Mutex<HashMap<usize, Arc<Poly<Poly<BigInt>>>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Poly<Poly<BigInt>>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Characteristic polynomial of `τₙ([[0,−1],[1,s]])` with coefficients in `ℤ[s]`.
pub fn principal_charpoly(n: usize) -> Arc<Poly<Poly<BigInt>>> {
    let mut cache = principal_charpoly_cache().lock().unwrap();
    cache
        .entry(n)
        .or_insert_with(|| {
            // Row i is (−y)^{n−1−i}·(x + s·y)^i on the basis x^{n−1−j} y^j.
            let rows = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let low = n - 1 - i;
                            if j < low || j - low > i {
                                return Poly::zero();
                            }
                            let m = j - low;
                            let sign = if low % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                            Poly::monomial(sign * binomial(i, m), m)
                        })
                        .collect()
                })
                .collect();
            Arc::new(Matrix::<Poly<BigInt>>::from_rows(rows).charpoly())
        })
        .clone()
}

fn field_of(m: &NfMatrix) -> Arc<NumberField> {
    m.entries().iter().find_map(|e| e.field().cloned()).unwrap_or_else(NumberField::rationals)
}

/// Decide whether the spectrum of `m` is `{λ^{n−1−2i}}` for some real `λ`.
pub fn principal_sl2_test(m: &NfMatrix) -> Result<PrincipalTest> {
    let n = m.rows();
    let f = m.charpoly();
    if count_real_roots(&f) != f.squarefree_part().deg() {
        return Err(Error::Precondition("spectrum is not real".into()));
    }
    if !f.is_squarefree() {
        return Ok(PrincipalTest::Refuted);
    }
    let k = field_of(m);
    let template = principal_charpoly(n);
    let mut g: Option<NfPoly> = None;
    for i in 0..n {
        let ci: NfPoly = template.coeff(i).map(|c| NfElement::from_integer(c.clone()).in_field(&k));
        let h = &ci - &NfPoly::constant(f.coeff(i).in_field(&k));
        g = Some(match g {
            None => h,
            Some(prev) => prev.gcd(&h),
        });
    }
    let g = g.unwrap_or_else(Poly::zero);
    if g.is_zero() || g.deg() == 0 {
        return Ok(PrincipalTest::Refuted);
    }
    let g = g.make_monic();
    let sf = g.squarefree_part();
    let two = NfElement::from_rational(rat(2, 1));
    let above = sturm_count(&sf, &Bound::Finite(rat(2, 1)), &Bound::PosInf)?;
    let below = sturm_count(&sf, &Bound::NegInf, &Bound::Finite(rat(-2, 1)))?;
    let at_minus_two = sf.eval(&-two).is_zero() as usize;
    if above + below - at_minus_two == 0 {
        return Ok(PrincipalTest::Refuted);
    }
    let trace = if g.deg() == 1 { Some(-g.coeff(0)) } else { None };
    Ok(PrincipalTest::Consistent { trace_poly: g, trace })
}

#[derive(Clone, Debug, PartialEq)]
pub struct WordTest {
    pub word: Word,
    pub result: PrincipalTest,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosureCertificate {
    pub field: Arc<NumberField>,
    pub n: usize,
    pub class: ClosureClass,
    pub form_space_dim: usize,
    /// The preserved form for the middle tier and the principal case.
    pub form: Option<NfMatrix>,
    pub tests: Vec<WordTest>,
    pub imported_theorems: Vec<String>,
}

impl ClosureCertificate {
    pub fn elements_tested(&self) -> Vec<Word> {
        self.tests.iter().map(|t| t.word.clone()).collect()
    }

    pub fn refutation(&self) -> Option<&Word> {
        self.tests.iter().find(|t| t.result.is_refuted()).map(|t| &t.word)
    }

    /// Re-derive the certificate's claims from the representation.
    pub fn verify(&self, rep: &SurfaceRep) -> Result<bool> {
        if rep.n != self.n {
            return Ok(false);
        }
        if self.n == 2 {
            return Ok(self.class == ClosureClass::FullSL);
        }
        let fs = invariant_form_space(&rep.generators)?;
        if fs.dim() != self.form_space_dim {
            return Ok(false);
        }
        let letters = rep.letter_images()?;
        for t in &self.tests {
            if principal_sl2_test(&eval_word(&t.word, &letters))?.is_refuted() != t.result.is_refuted() {
                return Ok(false);
            }
        }
        Ok(match self.class {
            ClosureClass::FullSL => fs.dim() == 0 && self.refutation().is_some(),
            ClosureClass::Symplectic | ClosureClass::SplitOrthogonal | ClosureClass::PrincipalSL2 => {
                let Some(j) = &self.form else { return Ok(false) };
                let shape_ok = match self.class {
                    ClosureClass::Symplectic => j.transpose() == -j,
                    ClosureClass::SplitOrthogonal => j.transpose() == *j,
                    _ => true,
                };
                shape_ok
                    && !j.det().is_zero()
                    && rep.generators.iter().all(|g| preserves_form(g, j))
                    && (self.class != ClosureClass::PrincipalSL2 || self.refutation().is_none())
            }
        })
    }
}

/// Classify the Zariski closure of a (Hitchin) representation from its
/// invariant forms and spectral tests on words up to `word_bound`.
pub fn certify_closure(rep: &SurfaceRep, word_bound: usize) -> Result<ClosureCertificate> {
    let n = rep.n;
    if n == 7 {
        return Err(Error::G2Unsupported);
    }
    let mut cert = ClosureCertificate {
        field: rep.field.clone(),
        n,
        class: ClosureClass::FullSL,
        form_space_dim: 0,
        form: None,
        tests: Vec::new(),
        imported_theorems: IMPORTED_THEOREMS.iter().map(|s| s.to_string()).collect(),
    };
    if n == 2 {
        // Every Hitchin image in SL(2) is Zariski dense.
        return Ok(cert);
    }
    let fs = invariant_form_space(&rep.generators)?;
    cert.form_space_dim = fs.dim();
    if fs.dim() >= 2 {
        return Err(Error::Inconclusive(format!("{}-dimensional space of invariant forms", fs.dim())));
    }
    let letters = rep.letter_images()?;
    for w in reduced_words(rep.generators.len(), word_bound) {
        let result = principal_sl2_test(&eval_word(&w, &letters))?;
        let refuted = result.is_refuted();
        cert.tests.push(WordTest { word: w, result });
        if refuted {
            break;
        }
    }
    let refuted = cert.refutation().is_some();
    if fs.dim() == 1 {
        let j = fs.basis().remove(0);
        if j.det().is_zero() {
            return Err(Error::Inconclusive("invariant form is degenerate".into()));
        }
        let alternating = !fs.alternating.is_empty();
        cert.form = Some(j);
        cert.class = if !refuted {
            ClosureClass::PrincipalSL2
        } else if alternating && n % 2 == 0 {
            ClosureClass::Symplectic
        } else if !alternating && n % 2 == 1 {
            ClosureClass::SplitOrthogonal
        } else {
            return Err(Error::Inconclusive("form type does not match the parity of n".into()));
        };
        return Ok(cert);
    }
    if refuted {
        Ok(cert)
    } else {
        Err(Error::Inconclusive("no invariant form, but every tested word is principal".into()))
    }
}

/// Strict increase in `PrincipalSL2 < {Symplectic, SplitOrthogonal} < FullSL`.
pub fn closure_strictly_increased(before: &ClosureCertificate, after: &ClosureCertificate) -> Result<bool> {
    if before.n != after.n {
        return Err(Error::SizeMismatch(format!("dimensions {} and {}", before.n, after.n)));
    }
    let (b, a) = (before.class, after.class);
    if b.tier() == 1 && a.tier() == 1 && a != b {
        return Err(Error::IncomparableClasses(b.to_string(), a.to_string()));
    }
    Ok(a.tier() > b.tier())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum PrincipalTestJson {
    Consistent { trace_poly: PolyJson },
    Refuted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WordTestJson {
    pub word: Word,
    pub test: PrincipalTestJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosureCertificateJson {
    pub field: FieldJson,
    pub n: usize,
    pub class: ClosureClass,
    pub form_space_dim: usize,
    pub form: Option<Vec<Vec<Vec<String>>>>,
    pub tests: Vec<WordTestJson>,
    pub imported_theorems: Vec<String>,
}

impl ClosureCertificate {
    pub fn to_json(&self) -> ClosureCertificateJson {
        ClosureCertificateJson {
            field: self.field.to_json(),
            n: self.n,
            class: self.class,
            form_space_dim: self.form_space_dim,
            form: self.form.as_ref().map(|j| matrix_entries_to_json(&self.field, j)),
            tests: self
                .tests
                .iter()
                .map(|t| WordTestJson {
                    word: t.word.clone(),
                    test: match &t.result {
                        PrincipalTest::Consistent { trace_poly, .. } => {
                            PrincipalTestJson::Consistent { trace_poly: nf_poly_json(&self.field, trace_poly) }
                        }
                        PrincipalTest::Refuted => PrincipalTestJson::Refuted,
                    },
                })
                .collect(),
            imported_theorems: self.imported_theorems.clone(),
        }
    }

    pub fn from_json(j: &ClosureCertificateJson) -> Result<Self> {
        let field = NumberField::from_json(&j.field)?;
        let form = j.form.as_ref().map(|f| matrix_entries_from_json(&field, f)).transpose()?;
        let tests = j
            .tests
            .iter()
            .map(|t| {
                let result = match &t.test {
                    PrincipalTestJson::Consistent { trace_poly } => {
                        let g = nf_poly_from_json(&field, trace_poly)?;
                        let trace = if g.deg() == 1 { Some(-g.coeff(0)) } else { None };
                        PrincipalTest::Consistent { trace_poly: g, trace }
                    }
                    PrincipalTestJson::Refuted => PrincipalTest::Refuted,
                };
                Ok(WordTest { word: t.word.clone(), result })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ClosureCertificate {
            field,
            n: j.n,
            class: j.class,
            form_space_dim: j.form_space_dim,
            form,
            tests,
            imported_theorems: j.imported_theorems.clone(),
        })
    }
}
