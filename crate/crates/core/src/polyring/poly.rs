use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalar::{Field, Ring};

/// Dense univariate polynomial, constant term first. The zero polynomial has
/// no coefficients; otherwise the last coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// The polynomial `t`.
    pub fn x() -> Self {
        Poly::new(vec![T::zero(), T::one()])
    }

    /// `t - r`.
    pub fn linear_root(r: T) -> Self {
        Poly::new(vec![-r, T::one()])
    }

    pub fn monomial(c: T, k: usize) -> Self {
        let mut v = vec![T::zero(); k];
        v.push(c);
        Poly::new(v)
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Poly::new(cs.iter().map(|&c| T::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn lead(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Evaluate at a value of another ring through a coefficient embedding.
    pub fn eval_with<S: Ring>(&self, x: &S, embed: impl Fn(&T) -> S) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + embed(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::from_int(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, s: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&T) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// `f(-t)`.
    pub fn negate_variable(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    /// `t^deg · f(1/t)`.
    pub fn reversed(&self) -> Self {
        let mut v = self.coeffs.clone();
        v.reverse();
        Poly::new(v)
    }

    /// Composition `self(g)`.
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &Poly::constant(c.clone());
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Pseudo-remainder: `lc(d)^(deg a - deg d + 1) · a mod d`, computed without
    /// division.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        assert!(!d.is_zero(), "pseudo_rem by zero");
        let dd = d.deg();
        let lc = d.lead();
        let mut r = self.clone();
        while !r.is_zero() && r.deg() >= dd {
            let shift = r.deg() - dd;
            let rl = r.lead();
            r = &r.scale(&lc) - &Poly::monomial(rl, shift).mul_ref(d);
        }
        r
    }

    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
}

impl<T: Field> Poly<T> {
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.deg();
        let inv_lc = d.lead().try_inv().expect("nonzero leading coefficient");
        let mut q = vec![T::zero(); self.coeffs.len().saturating_sub(dd)];
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = r.last().unwrap().clone() * inv_lc.clone();
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[k + i] = r[k + i].clone() - c.clone() * dc.clone();
            }
            q[k] = c;
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn make_monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().try_inv().unwrap();
        self.scale(&inv)
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// Returns `(g, s, t)` with `s·a + t·b = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lead().try_inv().unwrap();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn is_squarefree(&self) -> bool {
        if self.deg() == 0 {
            return !self.is_zero();
        }
        self.gcd(&self.derivative()).deg() == 0
    }

    /// Squarefree part `f / gcd(f, f')`, monic.
    pub fn squarefree_part(&self) -> Self {
        if self.deg() == 0 {
            return Poly::one();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.make_monic()
    }

    /// Exact quotient; panics on a nonzero remainder in debug builds.
    pub fn exact_div(&self, d: &Self) -> Self {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }
}

impl Poly<BigInt> {
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        if self.lead().is_negative() {
            -g
        } else {
            g
        }
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        Poly::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    pub fn to_rational(&self) -> Poly<BigRational> {
        self.map(|c| BigRational::from_integer(c.clone()))
    }

    /// Clear denominators of a rational polynomial and take the primitive part.
    pub fn from_rational_primitive(f: &Poly<BigRational>) -> Self {
        let mut den = BigInt::one();
        for c in f.coeffs() {
            den = den.lcm(c.denom());
        }
        let p = Poly::new(
            f.coeffs()
                .iter()
                .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
                .collect(),
        );
        p.primitive_part()
    }

    /// Euclidean 2-norm squared.
    pub fn norm2_sq(&self) -> BigInt {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Exact division over ℤ; `None` if `d` does not divide.
    pub fn div_exact_int(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.to_rational().div_rem(&d.to_rational());
        if !r.is_zero() || q.coeffs().iter().any(|c| !c.is_integer()) {
            return None;
        }
        Some(q.map(|c| c.to_integer()))
    }
}

impl<T: Ring> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, o: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<T: Ring> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, o: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<T: Ring> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, o: &Poly<T>) -> Poly<T> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![T::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(v)
    }
}

impl<T: Ring> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Ring> Add for Poly<T> {
    type Output = Poly<T>;
    fn add(self, o: Poly<T>) -> Poly<T> {
        &self + &o
    }
}

impl<T: Ring> Sub for Poly<T> {
    type Output = Poly<T>;
    fn sub(self, o: Poly<T>) -> Poly<T> {
        &self - &o
    }
}

impl<T: Ring> Mul for Poly<T> {
    type Output = Poly<T>;
    fn mul(self, o: Poly<T>) -> Poly<T> {
        &self * &o
    }
}

impl<T: Ring> Neg for Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        -&self
    }
}

// Polynomials over a ring form a ring themselves; this lets the matrix code run
// Berkowitz over ℤ[s].
impl<T: Ring> Zero for Poly<T> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<T: Ring> One for Poly<T> {
    fn one() -> Self {
        Poly::one()
    }
}

impl<T: Ring> Ring for Poly<T> {
    fn from_int(n: i64) -> Self {
        Poly::constant(T::from_int(n))
    }
}

impl<T: Ring + fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{i}")?,
            }
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    type ZP = Poly<BigInt>;
    type QP = Poly<BigRational>;

    #[test]
    fn trims_and_degrees() {
        let p = ZP::from_ints(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(ZP::from_ints(&[0, 0]).degree(), None);
    }

    #[test]
    fn division_round_trip() {
        let a = QP::from_ints(&[-1, 0, 0, 1]);
        let b = QP::from_ints(&[-1, 1]);
        let (q, r) = a.div_rem(&b);
        assert!(r.is_zero());
        assert_eq!(q, QP::from_ints(&[1, 1, 1]));
    }

    #[test]
    fn gcd_and_bezout() {
        let a = QP::from_ints(&[-1, 0, 1]);
        let b = QP::from_ints(&[1, 2, 1]);
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(g, QP::from_ints(&[1, 1]));
        assert_eq!(&(&s * &a) + &(&t * &b), g);
    }

    #[test]
    fn squarefree_detects_repeated_root() {
        assert!(!QP::from_ints(&[1, -2, 1]).is_squarefree());
        assert!(QP::from_ints(&[1, -3, 1]).is_squarefree());
    }

    #[test]
    fn content_and_primitive_part() {
        let p = ZP::from_ints(&[4, -6, -2]);
        assert_eq!(p.content(), BigInt::from(-2));
        assert_eq!(p.primitive_part(), ZP::from_ints(&[-2, 3, 1]));
        let q = QP::new(vec![rat(1, 2), rat(1, 3)]);
        assert_eq!(ZP::from_rational_primitive(&q), ZP::from_ints(&[3, 2]));
    }

    #[test]
    fn compose_shift() {
        let f = ZP::from_ints(&[0, 0, 1]);
        let g = ZP::from_ints(&[1, 1]);
        assert_eq!(f.compose(&g), ZP::from_ints(&[1, 2, 1]));
    }
}
