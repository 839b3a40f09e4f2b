//! Reduction of integral representations modulo primes and searches in the
//! finite image groups.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nfield::NfElement;
use crate::polyring::{factor_over_int, fp_poly_json, int_poly_json, invmod, is_prime, mulmod, FpPoly, Poly, PolyJson};
use crate::repkit::SurfaceRep;
use crate::surfgrp::{surface_relator, Word};
use crate::{NfPoly, ZPoly};

/// Square matrix over `F_p`, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u64,
    n: usize,
    entries: Vec<u64>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[u64]> = self.entries.chunks(self.n.max(1)).collect();
        write!(f, "FpMatrix({rows:?} mod {})", self.p)
    }
}

impl FpMatrix {
    pub fn new(p: u64, n: usize, entries: Vec<u64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::SizeMismatch(format!("{} entries for a {n}×{n} matrix", entries.len())));
        }
        Ok(FpMatrix { p, n, entries: entries.into_iter().map(|x| x % p).collect() })
    }

    pub fn from_i64(p: u64, rows: &[&[i64]]) -> Result<Self> {
        let n = rows.len();
        let entries = rows.iter().flat_map(|r| r.iter().map(|&x| x.rem_euclid(p as i64) as u64)).collect();
        FpMatrix::new(p, n, entries)
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1 % p;
        }
        FpMatrix { p, n, entries }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    pub fn is_identity(&self) -> bool {
        *self == FpMatrix::identity(self.p, self.n)
    }

    pub fn mul(&self, o: &FpMatrix) -> FpMatrix {
        let (n, p) = (self.n, self.p);
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] = (out[i * n + j] + mulmod(a, o.entries[k * n + j], p)) % p;
                }
            }
        }
        FpMatrix { p, n, entries: out }
    }

    pub fn transpose(&self) -> FpMatrix {
        let n = self.n;
        let entries = (0..n * n).map(|k| self.entries[(k % n) * n + k / n]).collect();
        FpMatrix { p: self.p, n, entries }
    }

    pub fn inverse(&self) -> Result<FpMatrix> {
        let (n, p) = (self.n, self.p);
        let mut a: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let mut row = self.entries[i * n..(i + 1) * n].to_vec();
                row.extend((0..n).map(|j| u64::from(i == j)));
                row
            })
            .collect();
        for c in 0..n {
            let piv = (c..n).find(|&r| a[r][c] != 0).ok_or(Error::Singular)?;
            a.swap(c, piv);
            let inv = invmod(a[c][c], p).ok_or(Error::Singular)?;
            for x in a[c].iter_mut() {
                *x = mulmod(*x, inv, p);
            }
            for r in 0..n {
                if r != c && a[r][c] != 0 {
                    let f = a[r][c];
                    for j in 0..2 * n {
                        let s = mulmod(f, a[c][j], p);
                        a[r][j] = (a[r][j] + p - s) % p;
                    }
                }
            }
        }
        let entries = a.into_iter().flat_map(|r| r[n..].to_vec()).collect();
        Ok(FpMatrix { p, n, entries })
    }

    /// Characteristic polynomial `det(tI − M)` via reduction to Hessenberg form.
    pub fn charpoly(&self) -> FpPoly {
        let (n, p) = (self.n, self.p);
        let mut h: Vec<Vec<u64>> = (0..n).map(|i| self.entries[i * n..(i + 1) * n].to_vec()).collect();
        let sub = |a: u64, b: u64| (a + p - b % p) % p;
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| h[i][m - 1] != 0) else { continue };
            if i != m {
                h.swap(i, m);
                for row in h.iter_mut() {
                    row.swap(i, m);
                }
            }
            let inv = invmod(h[m][m - 1], p).expect("nonzero pivot");
            for i in m + 1..n {
                let f = mulmod(h[i][m - 1], inv, p);
                if f == 0 {
                    continue;
                }
                for j in 0..n {
                    let s = mulmod(f, h[m][j], p);
                    h[i][j] = sub(h[i][j], s);
                }
                for row in h.iter_mut() {
                    let s = mulmod(f, row[i], p);
                    row[m] = (row[m] + s) % p;
                }
            }
        }
        // Recurrence on leading principal submatrices of the Hessenberg form.
        let mut polys = vec![FpPoly::one(p)];
        for k in 0..n {
            let t_minus = FpPoly::new(p, vec![sub(0, h[k][k]), 1]);
            let mut next = t_minus.mul(&polys[k]);
            let mut prod = 1u64;
            for i in (0..k).rev() {
                prod = mulmod(prod, h[i + 1][i], p);
                let c = mulmod(prod, h[i][k], p);
                next = next.sub(&polys[i].scale(c));
            }
            polys.push(next);
        }
        polys.pop().unwrap()
    }

    pub fn det(&self) -> u64 {
        let c0 = self.charpoly().coeff(0);
        if self.n % 2 == 0 {
            c0
        } else {
            (self.p - c0) % self.p
        }
    }
}

/// Choice of residue field for a prime of `O_K`.
pub fn split_residues(k: &crate::nfield::NumberField, p: u64) -> Vec<u64> {
    let mp = k.min_poly();
    let f = FpPoly::new(p, mp.iter().map(|c| reduce_int(c, p)).collect());
    (0..p).filter(|&r| f.eval(r) == 0).collect()
}

fn reduce_int(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

fn reduce_element(x: &NfElement, d: usize, p: u64, residue: u64) -> Result<u64> {
    let mut acc = 0u64;
    let mut power = 1u64;
    for c in x.coords(d) {
        let den = reduce_int(c.denom(), p);
        let den_inv = invmod(den, p).ok_or_else(|| Error::BadPrime(p, format!("divides the denominator of {c}")))?;
        let v = mulmod(reduce_int(c.numer(), p), den_inv, p);
        acc = (acc + mulmod(v, power, p)) % p;
        power = mulmod(power, residue, p);
    }
    Ok(acc)
}

fn check_prime(k: &crate::nfield::NumberField, p: u64, residue: Option<u64>) -> Result<u64> {
    if p < 5 || !is_prime(p) {
        return Err(Error::BadPrime(p, "need a prime p ≥ 5".into()));
    }
    if k.degree() == 1 {
        return Ok(0);
    }
    if k.degree() != 2 {
        return Err(Error::UnsupportedDegree(k.degree()));
    }
    let mp = k.min_poly();
    let disc = &mp[1] * &mp[1] - BigInt::from(4) * &mp[0];
    if reduce_int(&disc, p) == 0 {
        return Err(Error::BadPrime(p, "divides the discriminant".into()));
    }
    let roots = split_residues(k, p);
    if roots.is_empty() {
        return Err(Error::BadPrime(p, "inert; only split primes are supported".into()));
    }
    match residue {
        Some(r) if roots.contains(&(r % p)) => Ok(r % p),
        Some(r) => Err(Error::InvalidResidue(r, p)),
        None => Ok(roots[0]),
    }
}

/// Reduce generator images modulo the prime `(p, θ − residue)`; re-checks
/// that the surface relator still reduces to the identity.
pub fn reduce_mod_p(rep: &SurfaceRep, p: u64, residue: Option<u64>) -> Result<Vec<FpMatrix>> {
    let r = check_prime(&rep.field, p, residue)?;
    let d = rep.field.degree();
    let gens = rep
        .generators
        .iter()
        .map(|g| {
            let entries = g.entries().iter().map(|x| reduce_element(x, d, p, r)).collect::<Result<Vec<_>>>()?;
            FpMatrix::new(p, rep.n, entries)
        })
        .collect::<Result<Vec<_>>>()?;
    let rel = eval_fp_word(&surface_relator(rep.genus), &fp_letter_images(&gens)?, p, rep.n);
    if !rel.is_identity() {
        return Err(Error::RelatorBroken(format!("relator is not the identity mod {p}")));
    }
    Ok(gens)
}

/// Reduce a polynomial over `O_K` modulo `(p, θ − residue)`.
pub fn reduce_poly_mod_p(f: &NfPoly, d: usize, p: u64, residue: u64) -> Result<FpPoly> {
    let coeffs = f.coeffs().iter().map(|c| reduce_element(c, d, p, residue)).collect::<Result<Vec<_>>>()?;
    Ok(FpPoly::new(p, coeffs))
}

fn fp_letter_images(gens: &[FpMatrix]) -> Result<Vec<FpMatrix>> {
    let mut out = Vec::with_capacity(2 * gens.len());
    for g in gens {
        out.push(g.clone());
        out.push(g.inverse()?);
    }
    Ok(out)
}

fn eval_fp_word(w: &Word, images: &[FpMatrix], p: u64, n: usize) -> FpMatrix {
    w.letters().iter().fold(FpMatrix::identity(p, n), |acc, l| acc.mul(&images[l.0]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// Irreducible characteristic polynomial.
    Full,
    /// `(t − 1)·f` with `f` irreducible and `f(1) ≠ 0`.
    OneSplit,
}

fn shape_matches(f: &FpPoly, mode: SearchMode) -> bool {
    match mode {
        SearchMode::Full => f.is_irreducible(),
        SearchMode::OneSplit => {
            let p = f.modulus();
            if f.deg() < 2 || f.eval(1) != 0 {
                return false;
            }
            let (q, _) = f.div_rem(&FpPoly::new(p, vec![p - 1, 1]));
            q.eval(1) != 0 && q.is_irreducible()
        }
    }
}

/// Breadth-first search over reduced words (by length, then letter code)
/// for the first element whose characteristic polynomial has the shape
/// required by `mode`. Elements already reached by an earlier word are not
/// expanded again.
pub fn search_irreducible_word(gens: &[FpMatrix], mode: SearchMode, word_bound: usize) -> Result<(Word, FpPoly)> {
    let Some(first) = gens.first() else {
        return Err(Error::Precondition("empty generator set".into()));
    };
    let (p, n) = (first.p, first.n);
    let images = fp_letter_images(gens)?;
    let mut seen: HashSet<FpMatrix> = HashSet::new();
    seen.insert(FpMatrix::identity(p, n));
    let mut frontier: VecDeque<(Vec<usize>, FpMatrix)> = VecDeque::from([(Vec::new(), FpMatrix::identity(p, n))]);
    while let Some((w, x)) = frontier.pop_front() {
        if w.len() >= word_bound {
            continue;
        }
        for (l, img) in images.iter().enumerate() {
            if w.last().is_some_and(|&last| last == l ^ 1) {
                continue;
            }
            let y = x.mul(img);
            if !seen.insert(y.clone()) {
                continue;
            }
            let mut w2 = w.clone();
            w2.push(l);
            let f = y.charpoly();
            if shape_matches(&f, mode) {
                return Ok((Word::from_codes(&w2), f));
            }
            frontier.push_back((w2, y));
        }
    }
    Err(Error::NotFoundWithinBound(format!("no {mode:?} word of length ≤ {word_bound} mod {p}")))
}

/// A word with prescribed characteristic-polynomial shape modulo a prime,
/// together with its integral characteristic polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct EtaCertificate {
    pub word: Word,
    pub mode: SearchMode,
    pub prime: u64,
    pub residue: u64,
    pub modp_charpoly: FpPoly,
    pub integral_charpoly: NfPoly,
    pub skipped_primes: Vec<(u64, String)>,
}

/// Search one prime for a word of the given shape.
pub fn search_eta_at_prime(
    rep: &SurfaceRep,
    mode: SearchMode,
    word_bound: usize,
    p: u64,
    residue: Option<u64>,
) -> Result<EtaCertificate> {
    let gens = reduce_mod_p(rep, p, residue)?;
    let residue = check_prime(&rep.field, p, residue)?;
    let (word, modp_charpoly) = search_irreducible_word(&gens, mode, word_bound)?;
    let integral_charpoly = rep.eval(&word)?.charpoly();
    Ok(EtaCertificate { word, mode, prime: p, residue, modp_charpoly, integral_charpoly, skipped_primes: Vec::new() })
}

/// Try primes `5, 7, 11, …` up to `prime_cap`, skipping bad ones, and search
/// each reduction for a word of the given shape.
pub fn search_eta(rep: &SurfaceRep, mode: SearchMode, word_bound: usize, prime_cap: u64) -> Result<EtaCertificate> {
    let mut skipped = Vec::new();
    for p in (5..=prime_cap).filter(|&p| is_prime(p)) {
        match search_eta_at_prime(rep, mode, word_bound, p, None) {
            Ok(mut cert) => {
                cert.skipped_primes = skipped;
                return Ok(cert);
            }
            Err(e @ Error::BadPrime(..)) | Err(e @ Error::NotFoundWithinBound(_)) => skipped.push((p, e.to_string())),
            Err(e) => return Err(e),
        }
    }
    Err(Error::NotFoundWithinBound(format!("no prime up to {prime_cap} produced a {mode:?} word")))
}

fn rational_int_poly(f: &NfPoly) -> Option<ZPoly> {
    let coeffs = f
        .coeffs()
        .iter()
        .map(|c| c.as_rational().filter(|q| q.is_integer()).map(|q| q.to_integer()))
        .collect::<Option<Vec<_>>>()?;
    Some(Poly::new(coeffs))
}

impl EtaCertificate {
    /// Over ℚ: the integral characteristic polynomial factored over ℤ.
    pub fn integer_shape_holds(&self) -> Option<bool> {
        let f = rational_int_poly(&self.integral_charpoly)?;
        let fac = factor_over_int(&f);
        Some(match self.mode {
            SearchMode::Full => fac.is_irreducible(),
            SearchMode::OneSplit => {
                let lin = ZPoly::new(vec![BigInt::from(-1), BigInt::from(1)]);
                fac.content == BigInt::from(1)
                    && fac.factors.len() == 2
                    && fac.factors.iter().all(|(_, m)| *m == 1)
                    && fac.factors.iter().any(|(g, _)| *g == lin)
            }
        })
    }

    /// Re-derive everything from the representation.
    pub fn verify(&self, rep: &SurfaceRep) -> Result<bool> {
        let m = rep.eval(&self.word)?;
        let f = m.charpoly();
        if f != self.integral_charpoly {
            return Ok(false);
        }
        let reduced = reduce_poly_mod_p(&f, rep.field.degree(), self.prime, self.residue)?;
        if reduced != self.modp_charpoly || !shape_matches(&reduced, self.mode) {
            return Ok(false);
        }
        Ok(self.integer_shape_holds().unwrap_or(true))
    }

    pub fn to_json(&self, k: &crate::nfield::NumberField) -> EtaCertificateJson {
        EtaCertificateJson {
            word: self.word.clone(),
            mode: self.mode,
            prime: self.prime,
            residue: self.residue,
            modp_charpoly: fp_poly_json(&self.modp_charpoly),
            integral_charpoly: match rational_int_poly(&self.integral_charpoly) {
                Some(z) => int_poly_json(&z),
                None => crate::polyring::nf_poly_json(k, &self.integral_charpoly),
            },
            skipped_primes: self.skipped_primes.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EtaCertificateJson {
    pub word: Word,
    pub mode: SearchMode,
    pub prime: u64,
    pub residue: u64,
    pub modp_charpoly: PolyJson,
    pub integral_charpoly: PolyJson,
    pub skipped_primes: Vec<(u64, String)>,
}

/// Largest group order enumerated by [`borel_fraction_check`].
pub const MAX_ENUMERATION: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BorelCount {
    pub reducible: u64,
    pub total: u64,
    pub bound_holds: bool,
}

/// `|Sp(2k, F_p)| = p^{k²} Π_{i=1..k} (p^{2i} − 1)`, if it fits in a u64.
pub fn symplectic_order(k: u32, p: u64) -> Option<u64> {
    let mut order = p.checked_pow(k * k)?;
    for i in 1..=k {
        order = order.checked_mul(p.checked_pow(2 * i)? - 1)?;
    }
    Some(order)
}

/// Symplectic transvections `x ↦ x + ω(x, v)·v` for `v` among the standard
/// basis vectors and their pairwise sums; form `ω` has Gram matrix `[[0, I], [−I, 0]]`.
fn symplectic_generators(k: usize, p: u64) -> Vec<FpMatrix> {
    let n = 2 * k;
    let mut vs: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect();
    for i in 0..n {
        for j in i + 1..n {
            vs.push((0..n).map(|t| u64::from(t == i || t == j)).collect());
        }
    }
    let omega_row = |v: &[u64]| -> Vec<u64> {
        // ω(x, v) = Σ_i x_i v_{i+k} − x_{i+k} v_i, as a row acting on x.
        let mut r = vec![0u64; n];
        for i in 0..k {
            r[i] = v[i + k] % p;
            r[i + k] = (p - v[i] % p) % p;
        }
        r
    };
    vs.iter()
        .map(|v| {
            let w = omega_row(v);
            let mut m = FpMatrix::identity(p, n);
            for a in 0..n {
                for b in 0..n {
                    let e = &mut m.entries[a * n + b];
                    *e = (*e + mulmod(v[a], w[b], p)) % p;
                }
            }
            m
        })
        .collect()
}

/// Count elements of `Sp(2k, F_p)` with reducible characteristic polynomial
/// by enumerating the group, and compare with `(1 − 1/(3k))·|Sp(2k, F_p)|`.
pub fn borel_fraction_check(k: u32, p: u64) -> Result<BorelCount> {
    if k == 0 || !is_prime(p) {
        return Err(Error::Precondition(format!("need k ≥ 1 and p prime, got k = {k}, p = {p}")));
    }
    let expected = symplectic_order(k, p).filter(|&o| o <= MAX_ENUMERATION);
    let Some(expected) = expected else {
        return Err(Error::TooLarge(format!("|Sp({}, F_{p})| exceeds {MAX_ENUMERATION}", 2 * k)));
    };
    let n = 2 * k as usize;
    let gens = symplectic_generators(k as usize, p);
    let mut seen: HashSet<FpMatrix> = HashSet::new();
    let id = FpMatrix::identity(p, n);
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    let mut reducible = 0u64;
    while let Some(x) = queue.pop_front() {
        if !x.charpoly().is_irreducible() {
            reducible += 1;
        }
        for g in &gens {
            let y = x.mul(g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    let total = seen.len() as u64;
    if total != expected {
        return Err(Error::Precondition(format!("generated {total} elements, expected {expected}")));
    }
    let bound_holds = reducible as u128 * 3 * k as u128 <= (3 * k as u128 - 1) * total as u128;
    Ok(BorelCount { reducible, total, bound_holds })
}
