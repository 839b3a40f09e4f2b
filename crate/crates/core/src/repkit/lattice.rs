use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::SurfaceRep;
use crate::error::{Error, Result};
use crate::exactmat::{hermite_normal_form, Matrix};
use crate::nfield::{NfElement, NumberField};
use crate::scalar::{lcm, Integrality};
use crate::NfMatrix;

fn identity_basis(n: usize) -> Vec<Vec<NfElement>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { NfElement::one() } else { NfElement::zero() }).collect()).collect()
}

/// Change of basis `P` with `P·ρ(g)·P⁻¹` integral for every generator, found
/// by saturating the standard lattice under the group. Each round replaces the
/// lattice by the Hermite normal form of the lattice plus its images.
pub fn integralize(rep: &SurfaceRep, denominator_bound: &BigInt) -> Result<(NfMatrix, SurfaceRep)> {
    let images = rep.letter_images()?;
    let n = rep.n;
    let mut basis = identity_basis(n);
    loop {
        let b = Matrix::from_cols(&basis);
        let binv = b.inverse()?;
        let mut stable = true;
        let mut spanning = basis.clone();
        for h in &images {
            for v in &basis {
                let hv = h.mul_vec(v);
                if stable && !binv.mul_vec(&hv).iter().all(|x| x.is_integral()) {
                    stable = false;
                }
                spanning.push(hv);
            }
        }
        if stable {
            let mut out = rep.conjugate(&binv)?;
            if !out.is_integral() {
                return Err(Error::IntegralityViolated("saturated lattice does not integralize".into()));
            }
            out.push_provenance(
                "integralize",
                serde_json::json!({ "denominator_bound": denominator_bound.to_string() }),
                rep.content_hash(),
            );
            return Ok((binv, out));
        }
        let den = spanning.iter().flatten().fold(BigInt::one(), |acc, x| lcm(&acc, &x.denominator()));
        if &den > denominator_bound {
            return Err(Error::NoInvariantLattice(format!("denominator {den} exceeds bound {denominator_bound}")));
        }
        let scale = NfElement::from_integer(den.clone());
        let scaled: Vec<Vec<NfElement>> = spanning
            .iter()
            .map(|v| v.iter().map(|x| (x.clone() * scale.clone()).in_field(&rep.field)).collect())
            .collect();
        let inv_scale = NfElement::from_rational(BigRational::new(BigInt::one(), den));
        basis = hermite_normal_form(&scaled)
            .into_iter()
            .map(|v| v.into_iter().map(|x| x * inv_scale.clone()).collect())
            .collect();
        if basis.len() != n {
            return Err(Error::Singular);
        }
    }
}

/// Incremental echelon basis of a rational vector space.
struct RationalSpan {
    rows: Vec<(usize, Vec<BigRational>)>,
}

impl RationalSpan {
    fn insert(&mut self, mut v: Vec<BigRational>) -> bool {
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let c = v[*p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= &c * r;
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else { return false };
        let c = v[p].clone();
        for x in v.iter_mut() {
            *x /= &c;
        }
        self.rows.push((p, v));
        true
    }
}

fn flatten(v: &[NfElement], d: usize) -> Vec<BigRational> {
    v.iter().flat_map(|x| x.coords(d)).collect()
}

/// For a representation over a number field that is defined over `ℚ` up to
/// conjugacy: the rational span of the orbit of a fixed vector of some
/// generator is an invariant `ℚ`-form. Returns `P` and the conjugated
/// representation over `ℚ`.
pub fn descend_to_rationals(rep: &SurfaceRep) -> Result<(NfMatrix, SurfaceRep)> {
    let q = NumberField::rationals();
    let n = rep.n;
    let to_rational = |r: &SurfaceRep| -> Result<SurfaceRep> {
        let gens = r.generators.iter().map(|g| g.map(|e| NfElement::from_rational(e.coeff(0)))).collect();
        let mut out = SurfaceRep::new(r.genus, q.clone(), gens)?;
        out.provenance = r.provenance.clone();
        Ok(out)
    };
    if rep.generators.iter().all(|g| g.entries().iter().all(NfElement::is_rational)) {
        let mut out = to_rational(rep)?;
        out.push_provenance("descend_to_rationals", serde_json::json!({}), rep.content_hash());
        return Ok((Matrix::identity(n), out));
    }
    let d = rep.field.degree();
    let images = rep.letter_images()?;
    for g in &rep.generators {
        let fixed = (g - &Matrix::identity(n)).nullspace();
        if fixed.len() != 1 {
            continue;
        }
        let mut span = RationalSpan { rows: Vec::new() };
        let mut basis: Vec<Vec<NfElement>> = Vec::new();
        let mut queue = VecDeque::from([fixed[0].clone()]);
        while let Some(v) = queue.pop_front() {
            if basis.len() > n {
                break;
            }
            if span.insert(flatten(&v, d)) {
                for h in &images {
                    queue.push_back(h.mul_vec(&v));
                }
                basis.push(v);
            }
        }
        if basis.len() != n {
            continue;
        }
        let b = Matrix::from_cols(&basis);
        let Ok(binv) = b.inverse() else { continue };
        let conj = rep.conjugate(&binv)?;
        if !conj.generators.iter().all(|g| g.entries().iter().all(NfElement::is_rational)) {
            continue;
        }
        let mut out = to_rational(&conj)?;
        out.push_provenance("descend_to_rationals", serde_json::json!({}), rep.content_hash());
        return Ok((binv, out));
    }
    Err(Error::NoInvariantLattice("no rational form found from fixed vectors of the generators".into()))
}
