use std::sync::Arc;

use num_traits::{One, Signed};

use super::certificate::{BendCertificate, Construction};
use super::power::integral_power;
use crate::error::{Error, Result};
use crate::exactmat::{block_assemble, primary_split, Matrix};
use crate::nfield::{NfElement, NumberField};
use crate::polyring::{factor_over_quadratic_field, is_real_rooted_distinct_positive, is_reciprocal, Poly};
use crate::scalar::{Integrality, Ring};
use crate::{NfMatrix, NfPoly};

fn field_of(m: &NfMatrix) -> Arc<NumberField> {
    m.entries().iter().find_map(|e| e.field().cloned()).unwrap_or_else(NumberField::rationals)
}

/// Monic irreducible factors of the characteristic polynomial over the field
/// of the entries, repeated by multiplicity.
pub fn charpoly_factors(k: &Arc<NumberField>, m: &NfMatrix) -> Result<Vec<NfPoly>> {
    let f = m.charpoly();
    let mut out = Vec::new();
    for (g, e) in factor_over_quadratic_field(k, &f)? {
        out.extend(std::iter::repeat_n(g, e));
    }
    Ok(out)
}

fn product(polys: &[&NfPoly]) -> NfPoly {
    polys.iter().fold(Poly::one(), |acc, p| &acc * *p)
}

/// `det` of the companion matrix of a monic polynomial.
fn companion_det(f: &NfPoly) -> NfElement {
    let c = f.coeff(0);
    if f.deg() % 2 == 0 {
        c
    } else {
        -c
    }
}

/// Ways of grouping the factors into two coprime nonempty products whose
/// companion matrices have determinant one, in subset-mask order.
pub fn det_one_splits(factors: &[NfPoly]) -> Vec<(NfPoly, NfPoly)> {
    let k = factors.len();
    let mut out = Vec::new();
    if k < 2 || k > 20 {
        return out;
    }
    for mask in 1u32..(1 << k) - 1 {
        let first: Vec<&NfPoly> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| &factors[i]).collect();
        let second: Vec<&NfPoly> = (0..k).filter(|i| mask >> i & 1 == 0).map(|i| &factors[i]).collect();
        let (f1, f2) = (product(&first), product(&second));
        if companion_det(&f1).is_one() && companion_det(&f2).is_one() && f1.gcd(&f2).deg() == 0 {
            out.push((f1, f2));
        }
    }
    out
}

fn finish(k: Arc<NumberField>, a: NfMatrix, curve: &NfMatrix, construction: Construction) -> Result<BendCertificate> {
    let cert = BendCertificate::new(k, a, curve, construction);
    if !cert.is_valid() {
        return Err(Error::Precondition(format!("constructed matrix fails its checks: {:?}", cert.checks)));
    }
    Ok(cert)
}

/// Bending matrix from a unit: scalar `u^{n₂}` on the `f₁`-part and
/// `u^{−n₁}` times the restriction of `ρ(γ)` on the `f₂`-part, powered up
/// to an integral matrix.
pub fn bend_matrix_unit_blocks(rho_gamma: &NfMatrix, u: &NfElement, split: (&NfPoly, &NfPoly)) -> Result<BendCertificate> {
    let k = field_of(rho_gamma);
    if k.is_rationals() {
        return Err(Error::Precondition("unit blocks need a field other than Q".into()));
    }
    let u = u.clone().in_field(&k);
    if !u.is_integral() || !u.norm().abs().is_one() || u.sign() <= 0 || u.is_one() {
        return Err(Error::Precondition("u must be a positive unit of infinite order".into()));
    }
    let (f1, f2) = split;
    if &(f1 * f2) != &rho_gamma.charpoly() || f1.deg() == 0 || f2.deg() == 0 {
        return Err(Error::Precondition("split does not factor the characteristic polynomial".into()));
    }
    let (n1, n2) = (f1.deg(), f2.deg());
    let (p, blocks) = primary_split(rho_gamma, &[f1.clone(), f2.clone()])?;
    let first = Matrix::scalar(n1, u.pow_u(n2 as u64));
    let second = blocks[1].scale(&u.inv()?.pow_u(n1 as u64));
    let a_prime = block_assemble(&p, &[first, second])?;
    let (j, a) = integral_power(&a_prime)?;
    let construction = Construction::UnitBlocks { unit: u.to_strings(k.degree()), power: j, split: (n1, n2) };
    let cert = BendCertificate::new(k, a, rho_gamma, construction);
    if !cert.checks.non_reciprocal_charpoly {
        return Err(Error::ReciprocalSpectrum);
    }
    if !cert.is_valid() {
        return Err(Error::Precondition(format!("constructed matrix fails its checks: {:?}", cert.checks)));
    }
    Ok(cert)
}

/// Identity on the `(t−1)·f₁`-part (or `f₁`-part for even size) and the
/// restriction of `ρ(γ)` on the `f₂`-part, powered up to an integral matrix.
pub fn bend_matrix_identity_blocks(rho_gamma: &NfMatrix, split: (&NfPoly, &NfPoly), odd: bool) -> Result<BendCertificate> {
    let k = field_of(rho_gamma);
    let (f1, f2) = split;
    let lin = Poly::new(vec![-NfElement::one(), NfElement::one()]);
    let first = if odd { &lin * f1 } else { f1.clone() };
    if f1.deg() == 0 || f2.deg() == 0 || &first * f2 != rho_gamma.charpoly() {
        return Err(Error::Precondition("split does not factor the characteristic polynomial".into()));
    }
    let (p, blocks) = primary_split(rho_gamma, &[first.clone(), f2.clone()])?;
    let a_prime = block_assemble(&p, &[Matrix::identity(first.deg()), blocks[1].clone()])?;
    let (j, a) = integral_power(&a_prime)?;
    let construction = Construction::IdentityBlocks { power: j, split: (f1.deg(), f2.deg()), fixed_line: odd };
    finish(k, a, rho_gamma, construction)
}

/// Search the order generated by an irreducible block of `ρ(γ)` for a unit
/// `p(C)` with non-reciprocal, distinct positive spectrum. Coefficient
/// vectors are tried by height, then lexicographically.
pub fn bend_matrix_irreducible(rho_gamma: &NfMatrix, height_bound: u32) -> Result<BendCertificate> {
    let k = field_of(rho_gamma);
    let factors = charpoly_factors(&k, rho_gamma)?;
    let lin = Poly::new(vec![-NfElement::one(), NfElement::one()]);
    let (p, block, fixed_line) = match factors.as_slice() {
        [g] => (Matrix::identity(rho_gamma.rows()), Matrix::companion(g), false),
        [a, g] | [g, a] if *a == lin && g.deg() > 1 => {
            let (p, blocks) = primary_split(rho_gamma, &[lin.clone(), g.clone()])?;
            (p, blocks[1].clone(), true)
        }
        _ => return Err(Error::Precondition("characteristic polynomial is not irreducible or (t-1) times irreducible".into())),
    };
    let d = block.rows();
    let powers: Vec<NfMatrix> = (0..d).map(|i| block.pow(i as u64)).collect();
    for h in 1..=height_bound as i64 {
        let mut coeffs = vec![-h; d];
        loop {
            if coeffs.iter().any(|c| c.abs() == h) {
                if let Some(b) = unit_candidate(&powers, &coeffs) {
                    let blocks = if fixed_line { vec![Matrix::identity(1), b] } else { vec![b] };
                    let a_prime = block_assemble(&p, &blocks)?;
                    let (j, a) = integral_power(&a_prime)?;
                    let construction =
                        Construction::IrreducibleUnit { power: j, height: h as u32, coefficients: coeffs.clone(), fixed_line };
                    let cert = BendCertificate::new(k.clone(), a, rho_gamma, construction);
                    if cert.is_valid() {
                        return Ok(cert);
                    }
                }
            }
            // Odometer over [-h, h]^d.
            let mut i = d;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if coeffs[i] < h {
                    coeffs[i] += 1;
                    for c in coeffs.iter_mut().skip(i + 1) {
                        *c = -h;
                    }
                    break;
                }
                if i == 0 {
                    coeffs.clear();
                }
            }
            if coeffs.is_empty() {
                break;
            }
        }
    }
    Err(Error::NotFoundWithinBound(format!("no unit of height ≤ {height_bound} in the block order")))
}

/// `Σ cᵢ Cⁱ` normalized to determinant one, if it is a unit with
/// non-reciprocal distinct positive spectrum.
fn unit_candidate(powers: &[NfMatrix], coeffs: &[i64]) -> Option<NfMatrix> {
    let d = powers[0].rows();
    let mut b = Matrix::zeros(d, d);
    for (c, m) in coeffs.iter().zip(powers) {
        if *c != 0 {
            b = &b + &m.scale(&NfElement::from_integer((*c).into()));
        }
    }
    let det = b.det();
    let b = if det.is_one() {
        b
    } else if (-det).is_one() {
        if d % 2 == 1 {
            -b
        } else {
            &b * &b
        }
    } else {
        return None;
    };
    let f = b.charpoly();
    if is_reciprocal(&f) || !is_real_rooted_distinct_positive(&f) {
        return None;
    }
    Some(b)
}
