//! Real number fields `K = ℚ(ω)` with monogenic ring of integers `ℤ[ω]`.
//!
//! An element stores its power-basis coordinates. Elements that are plain
//! rationals (at most one coordinate) need no field context, which is what
//! lets `Zero` and `One` be implemented without a field handle.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmat::Matrix;
use crate::polyring::{factor_over_int, sturm_count_rational, Bound, Poly};
use crate::scalar::{format_rational, parse_rational, Euclidean, Field, Integrality, RealField, Ring};

type QPoly = Poly<BigRational>;

/// A number field together with a pinned real embedding.
#[derive(Clone)]
pub struct NumberField {
    min_poly: Vec<BigInt>,
    lo: BigRational,
    hi: BigRational,
    // Narrower isolating interval used as the starting point for sign queries.
    work: (BigRational, BigRational),
}

impl PartialEq for NumberField {
    fn eq(&self, o: &Self) -> bool {
        self.min_poly == o.min_poly && self.lo == o.lo && self.hi == o.hi
    }
}
impl Eq for NumberField {}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField({:?} in ({}, {}])", self.min_poly, self.lo, self.hi)
    }
}

impl NumberField {
    /// Build and validate a field from a monic integer minimal polynomial
    /// (constant term first) and an interval `(lo, hi]` isolating the chosen
    /// real root.
    pub fn new(min_poly: Vec<BigInt>, lo: BigRational, hi: BigRational) -> Result<Self> {
        let f = Poly::new(min_poly.clone());
        if f.degree().unwrap_or(0) < 1 || !f.lead().is_one() || f.coeffs().len() != min_poly.len() {
            return Err(Error::Precondition("minimal polynomial must be monic of degree >= 1".into()));
        }
        if lo >= hi {
            return Err(Error::Precondition("empty isolating interval".into()));
        }
        let facs = factor_over_int(&f);
        if facs.factors.len() != 1 || facs.factors[0].1 != 1 {
            return Err(Error::Precondition("minimal polynomial is reducible".into()));
        }
        let fq = f.to_rational();
        let count = sturm_count_rational(&fq, &Bound::Finite(lo.clone()), &Bound::Finite(hi.clone()))?;
        if count != 1 {
            return Err(Error::Precondition(format!("interval isolates {count} roots, expected 1")));
        }
        let work = if f.deg() == 1 {
            // ω is the rational root itself.
            let r = -BigRational::from_integer(min_poly[0].clone());
            (r.clone(), r)
        } else {
            let mut iv = (lo.clone(), hi.clone());
            let eps = BigRational::new(BigInt::one(), BigInt::one() << 80);
            while &iv.1 - &iv.0 > eps {
                iv = bisect_toward_root(&fq, iv);
            }
            iv
        };
        Ok(NumberField { min_poly, lo, hi, work })
    }

    /// ℚ, encoded with `ω = 0` and minimal polynomial `t`.
    pub fn rationals() -> Arc<Self> {
        Arc::new(
            NumberField::new(
                vec![BigInt::zero(), BigInt::one()],
                BigRational::from_integer((-1).into()),
                BigRational::one(),
            )
            .expect("ℚ is valid"),
        )
    }

    /// ℚ(√2) with `ω = +√2`.
    pub fn q_sqrt2() -> Arc<Self> {
        Arc::new(
            NumberField::new(
                vec![BigInt::from(-2), BigInt::zero(), BigInt::one()],
                BigRational::one(),
                BigRational::from_integer(2.into()),
            )
            .expect("ℚ(√2) is valid"),
        )
    }

    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    pub fn min_poly_q(&self) -> QPoly {
        Poly::new(self.min_poly.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    pub fn interval(&self) -> (&BigRational, &BigRational) {
        (&self.lo, &self.hi)
    }

    /// Class number one is assumed for the supported fields (ℚ and ℚ(√2)).
    pub fn class_number_one(&self) -> bool {
        true
    }

    pub fn is_rationals(&self) -> bool {
        self.degree() == 1
    }

    /// The generator ω as a field element.
    pub fn gen(self: &Arc<Self>) -> NfElement {
        if self.degree() == 1 {
            return NfElement::from_rational_in(self, -BigRational::from_integer(self.min_poly[0].clone()));
        }
        NfElement::from_coords(self, vec![BigRational::zero(), BigRational::one()])
    }

    pub fn element(self: &Arc<Self>, coords: &[i64]) -> NfElement {
        NfElement::from_coords(self, coords.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn to_json(&self) -> FieldJson {
        FieldJson {
            min_poly: self.min_poly.iter().map(|c| c.to_string()).collect(),
            interval: (format_rational(&self.lo), format_rational(&self.hi)),
        }
    }

    pub fn from_json(j: &FieldJson) -> Result<Arc<Self>> {
        let mp = j
            .min_poly
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(|e| Error::Parse(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        let lo = parse_rational(&j.interval.0).ok_or_else(|| Error::Parse(j.interval.0.clone()))?;
        let hi = parse_rational(&j.interval.1).ok_or_else(|| Error::Parse(j.interval.1.clone()))?;
        Ok(Arc::new(NumberField::new(mp, lo, hi)?))
    }

    fn reduce(&self, mut v: Vec<BigRational>) -> Vec<BigRational> {
        let d = self.degree();
        // t^d = -(c_0 + ... + c_{d-1} t^{d-1})
        while v.len() > d {
            let top = v.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let k = v.len() - d;
            for i in 0..d {
                v[k + i] = &v[k + i] - &top * BigRational::from_integer(self.min_poly[i].clone());
            }
        }
        v
    }
}

fn bisect_toward_root(f: &QPoly, (lo, hi): (BigRational, BigRational)) -> (BigRational, BigRational) {
    let mid = (&lo + &hi) / BigRational::from_integer(2.into());
    let fm = f.eval(&mid);
    if fm.is_zero() {
        return (mid.clone(), mid);
    }
    // Exactly one simple root inside, so the sign flips across it.
    let flo = f.eval(&lo);
    if flo.is_zero() {
        // lo itself is excluded from (lo, hi]; the root lies strictly right of it.
        return if count_in(f, &lo, &mid) == 1 { (lo, mid) } else { (mid, hi) };
    }
    if flo.is_positive() != fm.is_positive() {
        (lo, mid)
    } else {
        (mid, hi)
    }
}

fn count_in(f: &QPoly, lo: &BigRational, hi: &BigRational) -> usize {
    sturm_count_rational(f, &Bound::Finite(lo.clone()), &Bound::Finite(hi.clone())).unwrap_or(0)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FieldJson {
    pub min_poly: Vec<String>,
    pub interval: (String, String),
}

/// Element of a number field, in power-basis coordinates.
#[derive(Clone)]
pub struct NfElement {
    field: Option<Arc<NumberField>>,
    coeffs: Vec<BigRational>,
}

impl NfElement {
    fn raw(field: Option<Arc<NumberField>>, mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        NfElement { field, coeffs }
    }

    pub fn from_coords(field: &Arc<NumberField>, coords: Vec<BigRational>) -> Self {
        let v = field.reduce(coords);
        NfElement::raw(Some(field.clone()), v)
    }

    pub fn from_rational(q: BigRational) -> Self {
        NfElement::raw(None, vec![q])
    }

    pub fn from_rational_in(field: &Arc<NumberField>, q: BigRational) -> Self {
        NfElement::raw(Some(field.clone()), vec![q])
    }

    pub fn from_integer(n: BigInt) -> Self {
        NfElement::from_rational(BigRational::from_integer(n))
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        self.field.as_ref()
    }

    /// Attach a field context (a no-op for elements that already carry one).
    pub fn in_field(mut self, k: &Arc<NumberField>) -> Self {
        if self.field.is_none() {
            self.field = Some(k.clone());
        }
        self
    }

    /// Coordinates padded to the field degree (or a single rational).
    pub fn coords(&self, d: usize) -> Vec<BigRational> {
        let mut v = self.coeffs.clone();
        v.resize(d.max(v.len()), BigRational::zero());
        v
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs.len() <= 1 {
            Some(self.coeff(0))
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.len() <= 1
    }

    fn join(&self, o: &Self) -> Option<Arc<NumberField>> {
        match (&self.field, &o.field) {
            (Some(a), Some(b)) => {
                debug_assert!(Arc::ptr_eq(a, b) || **a == **b, "mixing elements of different fields");
                Some(a.clone())
            }
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        }
    }

    fn as_qpoly(&self) -> QPoly {
        Poly::new(self.coeffs.clone())
    }

    /// Determinant of multiplication by `self` on the power basis.
    pub fn norm(&self) -> BigRational {
        let Some(k) = self.field.clone().filter(|k| k.degree() > 1) else {
            return self.coeff(0);
        };
        let d = k.degree();
        let mut m = Matrix::<BigRational>::zeros(d, d);
        let mut col = self.clone();
        let w = k.gen();
        for j in 0..d {
            for i in 0..d {
                m[(i, j)] = col.coeff(i);
            }
            col = col * w.clone();
        }
        m.det()
    }

    pub fn trace(&self) -> BigRational {
        let Some(k) = self.field.clone().filter(|k| k.degree() > 1) else {
            return self.coeff(0);
        };
        let d = k.degree();
        let w = k.gen();
        let mut col = self.clone();
        let mut t = BigRational::zero();
        for j in 0..d {
            t += col.coeff(j);
            col = col * w.clone();
        }
        t
    }

    /// Galois conjugate in a quadratic field (`ω ↦ -c₁ - ω`).
    pub fn conjugate(&self) -> Self {
        let Some(k) = self.field.clone().filter(|k| k.degree() == 2) else {
            return self.clone();
        };
        let c1 = BigRational::from_integer(k.min_poly[1].clone());
        let a = self.coeff(0);
        let b = self.coeff(1);
        NfElement::from_coords(&k, vec![a - &b * c1, -b])
    }

    /// Sign under the pinned real embedding.
    pub fn sign(&self) -> i8 {
        if self.coeffs.is_empty() {
            return 0;
        }
        if self.coeffs.len() == 1 {
            return rat_sign(&self.coeffs[0]);
        }
        let k = self.field.as_ref().expect("irrational element carries its field");
        let f = k.min_poly_q();
        let g = self.as_qpoly();
        let mut iv = k.work.clone();
        loop {
            let (a, b) = eval_interval(&g, &iv.0, &iv.1);
            if a.is_positive() {
                return 1;
            }
            if b.is_negative() {
                return -1;
            }
            iv = bisect_toward_root(&f, iv);
        }
    }

    /// A decimal approximation of the embedded value, for human-readable
    /// reports only.
    pub fn approx(&self) -> f64 {
        let x = match &self.field {
            Some(k) if self.coeffs.len() > 1 => (&k.work.0 + &k.work.1) / BigRational::from_integer(2.into()),
            _ => BigRational::zero(),
        };
        self.as_qpoly().eval(&x).to_f64().unwrap_or(f64::NAN)
    }

    pub fn to_strings(&self, d: usize) -> Vec<String> {
        self.coords(d).iter().map(format_rational).collect()
    }

    pub fn from_strings(field: &Arc<NumberField>, s: &[String]) -> Result<Self> {
        if s.len() != field.degree() {
            return Err(Error::Parse(format!("expected {} coordinates, got {}", field.degree(), s.len())));
        }
        let v = s
            .iter()
            .map(|x| parse_rational(x).ok_or_else(|| Error::Parse(x.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(NfElement::from_coords(field, v))
    }

    pub fn inv(&self) -> Result<Self> {
        self.try_inv().ok_or(Error::DivisionByZero)
    }
}

fn rat_sign(q: &BigRational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

/// Range of `g` over `[lo, hi]` by interval Horner evaluation.
fn eval_interval(g: &QPoly, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
    let mut a = BigRational::zero();
    let mut b = BigRational::zero();
    for c in g.coeffs().iter().rev() {
        let ps = [&a * lo, &a * hi, &b * lo, &b * hi];
        let mn = ps.iter().min().unwrap().clone();
        let mx = ps.iter().max().unwrap().clone();
        a = mn + c;
        b = mx + c;
    }
    (a, b)
}

impl PartialEq for NfElement {
    fn eq(&self, o: &Self) -> bool {
        self.coeffs == o.coeffs
    }
}
impl Eq for NfElement {}

impl Hash for NfElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for NfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for NfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match i {
                0 => format!("{c}"),
                1 => format!("{c}*w"),
                _ => format!("{c}*w^{i}"),
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for NfElement {
    type Output = NfElement;
    fn add(self, o: NfElement) -> NfElement {
        let field = self.join(&o);
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|i| self.coeff(i) + o.coeff(i)).collect();
        NfElement::raw(field, v)
    }
}

impl Sub for NfElement {
    type Output = NfElement;
    fn sub(self, o: NfElement) -> NfElement {
        let field = self.join(&o);
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|i| self.coeff(i) - o.coeff(i)).collect();
        NfElement::raw(field, v)
    }
}

impl Neg for NfElement {
    type Output = NfElement;
    fn neg(self) -> NfElement {
        NfElement { field: self.field, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl Mul for NfElement {
    type Output = NfElement;
    fn mul(self, o: NfElement) -> NfElement {
        let field = self.join(&o);
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return NfElement::raw(field, vec![]);
        }
        if self.coeffs.len() == 1 || o.coeffs.len() == 1 {
            let (s, v) = if self.coeffs.len() == 1 { (&self.coeffs[0], &o.coeffs) } else { (&o.coeffs[0], &self.coeffs) };
            return NfElement::raw(field, v.iter().map(|c| c * s).collect());
        }
        let mut v = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        let k = field.expect("irrational product carries its field");
        let v = k.reduce(v);
        NfElement::raw(Some(k), v)
    }
}

impl Div for NfElement {
    type Output = NfElement;
    fn div(self, o: NfElement) -> NfElement {
        let inv = o.try_inv().expect("division by zero in number field");
        self * inv
    }
}

impl Zero for NfElement {
    fn zero() -> Self {
        NfElement { field: None, coeffs: vec![] }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for NfElement {
    fn one() -> Self {
        NfElement::from_rational(BigRational::one())
    }
}

impl Ring for NfElement {
    fn from_int(n: i64) -> Self {
        NfElement::from_integer(n.into())
    }
}

impl Field for NfElement {
    fn try_inv(&self) -> Option<Self> {
        if self.coeffs.is_empty() {
            return None;
        }
        if self.coeffs.len() == 1 {
            return Some(NfElement::raw(self.field.clone(), vec![self.coeffs[0].recip()]));
        }
        let k = self.field.clone().unwrap();
        let (g, s, _) = self.as_qpoly().ext_gcd(&k.min_poly_q());
        debug_assert_eq!(g.deg(), 0);
        Some(NfElement::from_coords(&k, s.into_coeffs()))
    }
}

impl RealField for NfElement {
    fn sign(&self) -> i8 {
        NfElement::sign(self)
    }

    fn from_rational(q: &BigRational) -> Self {
        NfElement::from_rational(q.clone())
    }
}

impl Integrality for NfElement {
    fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    fn denominator(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

impl Euclidean for NfElement {
    /// Division with rounded coordinates. For norm-Euclidean quadratic rings
    /// such as ℤ[√2] the remainder has strictly smaller absolute norm.
    fn div_rem_euclid(&self, d: &Self) -> Option<(Self, Self)> {
        if d.is_zero() {
            return None;
        }
        // Sizes are only comparable once both sides carry the same field.
        let (a, d) = match self.join(d) {
            Some(k) => (self.clone().in_field(&k), d.clone().in_field(&k)),
            None => (self.clone(), d.clone()),
        };
        let exact = a.clone() * d.try_inv()?;
        let q = NfElement::raw(a.join(&d), exact.coeffs.iter().map(round_half_down).collect());
        let r = a - q.clone() * d.clone();
        if r.size() < d.size() {
            Some((q, r))
        } else {
            None
        }
    }

    fn size(&self) -> BigInt {
        self.norm().abs().to_integer()
    }

    fn normalize_unit(&self) -> (Self, Self) {
        if self.sign() < 0 {
            (-self.clone(), -NfElement::one())
        } else {
            (self.clone(), NfElement::one())
        }
    }
}

fn round_half_down(q: &BigRational) -> BigRational {
    let two = BigInt::from(2);
    let num = q.numer() * &two + q.denom();
    let den = q.denom() * &two;
    BigRational::from_integer(num.div_floor(&den))
}

/// Smallest-height unit `e > 1` of `ℤ[ω]`, by exhaustive search over
/// coordinate boxes of growing height. Ties inside a height class are broken
/// lexicographically on the coordinate vector.
pub fn fundamental_unit_search(k: &Arc<NumberField>, height_bound: u32) -> Result<NfElement> {
    let d = k.degree();
    if d < 2 {
        return Err(Error::Precondition("unit search needs a field of degree >= 2".into()));
    }
    let one = NfElement::one();
    for h in 1..=height_bound as i64 {
        let mut v = vec![-h; d];
        loop {
            if v.iter().any(|c| c.abs() == h) {
                let e = k.element(&v);
                let n = e.norm();
                if n.abs().is_one() && e.sign() > 0 && (e.clone() - one.clone()).sign() > 0 {
                    return Ok(e);
                }
            }
            // Odometer over [-h, h]^d, last coordinate fastest.
            match (0..d).rev().find(|&i| v[i] < h) {
                Some(i) => {
                    v[i] += 1;
                    for x in v.iter_mut().skip(i + 1) {
                        *x = -h;
                    }
                }
                None => break,
            }
        }
    }
    Err(Error::NotFoundWithinBound(format!("no unit of height <= {height_bound}")))
}
