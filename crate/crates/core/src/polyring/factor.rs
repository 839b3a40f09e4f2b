//! Factorization over ℤ (Zassenhaus) and over quadratic fields (Trager).

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::fp::{is_prime, FpPoly};
use super::Poly;
use crate::error::{Error, Result};
use crate::nfield::{NfElement, NumberField};
use crate::scalar::Field;

type ZPoly = Poly<BigInt>;
type QPoly = Poly<BigRational>;

/// Why a returned factor is irreducible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IrreducibilityWitness {
    Linear,
    /// Irreducible modulo this prime, with matching degree.
    ModP(u64),
    /// Every proper subset of the modular factors was tried and rejected.
    Recombination { prime: u64, modular_factors: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntFactorization {
    /// Signed content, so that all factors have positive leading coefficient.
    pub content: BigInt,
    pub factors: Vec<(ZPoly, usize)>,
    pub witnesses: Vec<IrreducibilityWitness>,
}

impl IntFactorization {
    pub fn expand(&self) -> ZPoly {
        let mut acc = ZPoly::constant(self.content.clone());
        for (f, m) in &self.factors {
            acc = &acc * &f.pow(*m as u32);
        }
        acc
    }

    pub fn is_irreducible(&self) -> bool {
        self.content.abs().is_one() && self.factors.len() == 1 && self.factors[0].1 == 1
    }
}

/// Yun's squarefree decomposition over a field: returns `(a_i, i)` with
/// `f = lc · Π a_i^i`, each `a_i` monic and squarefree.
pub fn squarefree_decomposition<T: Field>(f: &Poly<T>) -> Vec<(Poly<T>, usize)> {
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let f = f.make_monic();
    let fp = f.derivative();
    let a0 = f.gcd(&fp);
    let mut b = f.exact_div(&a0);
    let mut c = fp.exact_div(&a0);
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.deg() > 0 {
        let a = b.gcd(&d);
        b = b.exact_div(&a);
        c = d.exact_div(&a);
        d = &c - &b.derivative();
        if a.deg() > 0 {
            out.push((a.make_monic(), i));
        }
        i += 1;
    }
    out
}

fn sort_key(f: &ZPoly) -> (usize, Vec<BigInt>) {
    (f.deg(), f.coeffs().to_vec())
}

/// Complete factorization over ℤ.
pub fn factor_over_int(f: &ZPoly) -> IntFactorization {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let content = f.content();
    let g = f.primitive_part();
    let mut factors: Vec<(ZPoly, usize, IrreducibilityWitness)> = Vec::new();
    if g.deg() > 0 {
        for (a, m) in squarefree_decomposition(&g.to_rational()) {
            let a = ZPoly::from_rational_primitive(&a);
            for (h, w) in zassenhaus(&a) {
                factors.push((h, m, w));
            }
        }
    }
    factors.sort_by(|a, b| sort_key(&a.0).cmp(&sort_key(&b.0)));
    // Merge equal factors coming from different squarefree layers (cannot
    // happen for a correct decomposition, kept as a guard).
    let mut merged: Vec<(ZPoly, usize, IrreducibilityWitness)> = Vec::new();
    for (h, m, w) in factors {
        if let Some(last) = merged.last_mut() {
            if last.0 == h {
                last.1 += m;
                continue;
            }
        }
        merged.push((h, m, w));
    }
    IntFactorization {
        content,
        witnesses: merged.iter().map(|x| x.2.clone()).collect(),
        factors: merged.into_iter().map(|(h, m, _)| (h, m)).collect(),
    }
}

fn reduce_mod(f: &ZPoly, p: u64) -> FpPoly {
    let pb = BigInt::from(p);
    FpPoly::new(p, f.coeffs().iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect())
}

fn lift_fp(f: &FpPoly) -> ZPoly {
    ZPoly::new(f.coeffs().iter().map(|&c| BigInt::from(c)).collect())
}

fn mod_poly(f: &ZPoly, m: &BigInt) -> ZPoly {
    ZPoly::new(f.coeffs().iter().map(|c| c.mod_floor(m)).collect())
}

fn symmetric(f: &ZPoly, m: &BigInt) -> ZPoly {
    let half = m / 2;
    ZPoly::new(
        f.coeffs()
            .iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

/// Smallest prime `p >= 5` with `p ∤ lc` and the monic transform `f`
/// squarefree mod `p`.
fn good_prime(f: &ZPoly, lc: &BigInt) -> u64 {
    let mut p = 5;
    loop {
        if is_prime(p) {
            if !(lc.clone() % BigInt::from(p)).is_zero() {
                let fp = reduce_mod(f, p);
                if fp.deg() == f.deg() && fp.is_squarefree() {
                    return p;
                }
            }
        }
        p += 1;
    }
}

/// Lift `f ≡ u·w (mod p)` with monic `u`, `w` to a factorization modulo `p^k`.
fn hensel_two(f: &ZPoly, u: &FpPoly, w: &FpPoly, p: u64, k: u32) -> (ZPoly, ZPoly) {
    let (g, _, t) = u.ext_gcd(w);
    debug_assert_eq!(g.deg(), 0);
    let pb = BigInt::from(p);
    let mut uz = lift_fp(u);
    let mut wz = lift_fp(w);
    let mut pj = pb.clone();
    for _ in 1..k {
        let next = &pj * &pb;
        let err = mod_poly(&(f - &(&uz * &wz)), &next);
        let e = ZPoly::new(err.coeffs().iter().map(|c| c / &pj).collect());
        let ep = reduce_mod(&e, p);
        // s·u + t·w = 1, so e = (t·e mod u)·w + (e - (t·e mod u)·w)/u · u.
        let du = t.mul(&ep).rem(u);
        let dw = ep.sub(&du.mul(w)).div_rem(u).0;
        uz = mod_poly(&(&uz + &lift_fp(&du).scale(&pj)), &next);
        wz = mod_poly(&(&wz + &lift_fp(&dw).scale(&pj)), &next);
        pj = next;
    }
    (uz, wz)
}

/// Lift a full list of monic modular factors of monic `f` to modulus `p^k`.
fn hensel_multi(f: &ZPoly, fs: &[FpPoly], p: u64, k: u32) -> Vec<ZPoly> {
    if fs.len() == 1 {
        let m = BigInt::from(p).pow(k);
        return vec![mod_poly(f, &m)];
    }
    let mid = fs.len() / 2;
    let u = fs[..mid].iter().fold(FpPoly::one(p), |a, b| a.mul(b));
    let w = fs[mid..].iter().fold(FpPoly::one(p), |a, b| a.mul(b));
    let (uz, wz) = hensel_two(f, &u, &w, p, k);
    let mut out = hensel_multi(&uz, &fs[..mid], p, k);
    out.extend(hensel_multi(&wz, &fs[mid..], p, k));
    out
}

/// Factor a primitive squarefree polynomial with positive leading coefficient.
fn zassenhaus(a: &ZPoly) -> Vec<(ZPoly, IrreducibilityWitness)> {
    let n = a.deg();
    if n == 1 {
        return vec![(a.clone(), IrreducibilityWitness::Linear)];
    }
    let lc = a.lead();
    // Monic transform F(t) = lc^{n-1} a(t / lc).
    let big_f = ZPoly::new(
        a.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| if i == n { BigInt::one() } else { c * lc.pow((n - 1 - i) as u32) })
            .collect(),
    );
    let p = good_prime(&big_f, &lc);
    let modular = reduce_mod(&big_f, p).berlekamp();
    if modular.len() == 1 {
        return vec![(a.clone(), IrreducibilityWitness::ModP(p))];
    }
    // Mignotte: factor coefficients of monic F are at most 2^n ||F||_2.
    let norm = big_f.norm2_sq().sqrt() + BigInt::one();
    let bound = (BigInt::one() << n) * norm;
    let mut k = 1u32;
    let pb = BigInt::from(p);
    while pb.pow(k) <= &bound * 2 {
        k += 1;
    }
    let m = pb.pow(k);
    let mut lifted = hensel_multi(&big_f, &modular, p, k);
    let r = modular.len();

    let mut found = Vec::new();
    let mut rest = big_f.clone();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut hit = None;
        for subset in combinations(lifted.len(), size) {
            let g = subset.iter().fold(ZPoly::one(), |acc, &i| mod_poly(&(&acc * &lifted[i]), &m));
            let g = symmetric(&g, &m);
            if let Some(q) = rest.div_exact_int(&g) {
                hit = Some((subset, g, q));
                break;
            }
        }
        match hit {
            Some((subset, g, q)) => {
                found.push(g);
                rest = q;
                lifted = lifted.into_iter().enumerate().filter(|(i, _)| !subset.contains(i)).map(|x| x.1).collect();
            }
            None => size += 1,
        }
    }
    found.push(rest);
    let witness = |deg: usize| {
        if deg == 1 {
            IrreducibilityWitness::Linear
        } else {
            IrreducibilityWitness::Recombination { prime: p, modular_factors: r }
        }
    };
    // Undo the monic transform: factor G(t) of F gives pp(G(lc·t)) of a.
    found
        .into_iter()
        .map(|g| {
            let back = ZPoly::new(g.coeffs().iter().enumerate().map(|(i, c)| c * lc.pow(i as u32)).collect()).primitive_part();
            let d = back.deg();
            (back, witness(d))
        })
        .collect()
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub type NfPoly = Poly<NfElement>;

fn rational_part(f: &NfPoly) -> Option<QPoly> {
    let mut v = Vec::new();
    for c in f.coeffs() {
        v.push(c.as_rational()?);
    }
    Some(Poly::new(v))
}

fn conjugate_poly(f: &NfPoly) -> NfPoly {
    f.map(|c| c.conjugate())
}

/// Factor over a quadratic (or rational) field into monic irreducibles with
/// multiplicities, by Trager's norm method.
pub fn factor_over_quadratic_field(k: &Arc<NumberField>, f: &NfPoly) -> Result<Vec<(NfPoly, usize)>> {
    if k.degree() > 2 {
        return Err(Error::UnsupportedDegree(k.degree()));
    }
    if f.is_zero() {
        return Err(Error::Precondition("cannot factor the zero polynomial".into()));
    }
    let mut out = Vec::new();
    for (g, m) in squarefree_decomposition(f) {
        for h in factor_squarefree_k(k, &g)? {
            out.push((h, m));
        }
    }
    Ok(out)
}

fn factor_squarefree_k(k: &Arc<NumberField>, g: &NfPoly) -> Result<Vec<NfPoly>> {
    if g.deg() == 1 {
        return Ok(vec![g.make_monic()]);
    }
    let w = k.gen();
    let t = NfPoly::x();
    for shift in shift_sequence() {
        // g_s(t) = g(t - s·ω)
        let sw = w.clone() * NfElement::from_integer(shift.into());
        let gs = g.compose(&(&t - &NfPoly::constant(sw.clone())));
        let norm = if k.degree() == 1 { gs.clone() } else { &gs * &conjugate_poly(&gs) };
        let Some(nq) = rational_part(&norm) else {
            return Err(Error::Precondition("norm polynomial is not rational".into()));
        };
        if !nq.is_squarefree() {
            continue;
        }
        let nz = ZPoly::from_rational_primitive(&nq);
        let fac = factor_over_int(&nz);
        let mut out = Vec::new();
        let back = &t + &NfPoly::constant(sw.clone());
        for (h, _) in &fac.factors {
            let hk: NfPoly = h.map(|c| NfElement::from_integer(c.clone()).in_field(k));
            let piece = gs.gcd(&hk);
            if piece.deg() > 0 {
                out.push(piece.compose(&back).make_monic());
            }
        }
        out.sort_by(|a, b| a.deg().cmp(&b.deg()));
        return Ok(out);
    }
    unreachable!("some shift always gives a squarefree norm")
}

fn shift_sequence() -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..).flat_map(|i| [i, -i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(c: &[i64]) -> ZPoly {
        ZPoly::from_ints(c)
    }

    #[test]
    fn cyclotomic_split() {
        let f = factor_over_int(&zp(&[-1, 0, 0, 0, 1]));
        let fs: Vec<_> = f.factors.iter().map(|x| x.0.clone()).collect();
        assert_eq!(fs, vec![zp(&[-1, 1]), zp(&[1, 1]), zp(&[1, 0, 1])]);
        assert_eq!(f.expand(), zp(&[-1, 0, 0, 0, 1]));
    }

    #[test]
    fn irreducible_quadratic() {
        let f = factor_over_int(&zp(&[1, -3, 1]));
        assert!(f.is_irreducible());
    }

    #[test]
    fn product_of_quadratics() {
        let a = zp(&[1, -3, 1]);
        let b = zp(&[1, -7, 1]);
        let f = factor_over_int(&(&a * &b));
        let fs: Vec<_> = f.factors.iter().map(|x| x.0.clone()).collect();
        // Sorted by degree, then coefficient vectors from the constant term up.
        assert_eq!(fs, vec![b, a]);
    }

    #[test]
    fn swinnerton_dyer_style_recombination() {
        // x^4 - 10x^2 + 1 is irreducible over ℤ but splits modulo every prime.
        let f = factor_over_int(&zp(&[1, 0, -10, 0, 1]));
        assert!(f.is_irreducible());
        assert!(matches!(f.witnesses[0], IrreducibilityWitness::Recombination { .. }));
    }

    #[test]
    fn content_multiplicity_and_nonmonic() {
        let f = &(&zp(&[3, 2]) * &zp(&[3, 2])) * &zp(&[-6, 0, 4]);
        let fac = factor_over_int(&f);
        assert_eq!(fac.content, BigInt::from(2));
        assert_eq!(fac.expand(), f);
        assert!(fac.factors.contains(&(zp(&[3, 2]), 2)));
        assert!(fac.factors.contains(&(zp(&[-3, 0, 2]), 1)));
    }

    #[test]
    fn negative_leading_coefficient() {
        let f = zp(&[1, 0, -1]);
        let fac = factor_over_int(&f);
        assert_eq!(fac.content, BigInt::from(-1));
        assert_eq!(fac.expand(), f);
    }

    #[test]
    fn yun_multiplicities() {
        let f = (&zp(&[-1, 1]).pow(3) * &zp(&[2, 1])).to_rational();
        let sq = squarefree_decomposition(&f);
        assert_eq!(sq.len(), 2);
        assert_eq!(sq[0].1, 1);
        assert_eq!(sq[1].1, 3);
    }

    #[test]
    fn trager_over_sqrt2() {
        let k = NumberField::q_sqrt2();
        let e = |c: &[i64]| k.element(c);
        let f = NfPoly::new(vec![e(&[1]), e(&[0, -1]), e(&[1])]);
        let fs = factor_over_quadratic_field(&k, &f).unwrap();
        assert_eq!(fs.len(), 1);

        let r1 = e(&[1, 1]);
        let r2 = e(&[-1, 1]);
        let g = &NfPoly::linear_root(r1.clone()) * &NfPoly::linear_root(r2.clone());
        let fs = factor_over_quadratic_field(&k, &g).unwrap();
        assert_eq!(fs.len(), 2);
        let roots: Vec<_> = fs.iter().map(|(h, _)| -h.coeff(0)).collect();
        assert!(roots.contains(&r1) && roots.contains(&r2));

        let lin = NfPoly::new(vec![e(&[-1]), e(&[1])]);
        assert_eq!(factor_over_quadratic_field(&k, &lin).unwrap(), vec![(lin, 1)]);
    }

    #[test]
    fn trager_rational_polynomial_splitting_over_k() {
        // t^2 - 2 = (t - ω)(t + ω) over ℚ(√2).
        let k = NumberField::q_sqrt2();
        let f = NfPoly::from_ints(&[-2, 0, 1]);
        assert_eq!(factor_over_quadratic_field(&k, &f).unwrap().len(), 2);
    }
}
