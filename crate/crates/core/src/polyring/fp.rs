//! Polynomials over a prime field `F_p` with word-sized coefficients.

use std::fmt;

#[inline]
pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

pub fn invmod(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        None
    } else {
        Some(powmod(a, p - 2, p))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn next_prime(n: u64) -> u64 {
    let mut m = n + 1;
    while !is_prime(m) {
        m += 1;
    }
    m
}

/// Square root mod an odd prime by exhaustive search (small primes only).
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    (0..p).find(|&x| mulmod(x, x, p) == a)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpPoly({:?} mod {})", self.coeffs, self.p)
    }
}

impl FpPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut c: Vec<u64> = coeffs.into_iter().map(|x| x % p).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, coeffs: c }
    }

    pub fn from_i64(p: u64, coeffs: &[i64]) -> Self {
        FpPoly::new(p, coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect())
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: vec![] }
    }

    pub fn one(p: u64) -> Self {
        FpPoly::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        FpPoly::new(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| (mulmod(acc, x, self.p) + c) % self.p)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        FpPoly::new(self.p, (0..n).map(|i| (self.coeff(i) + o.coeff(i)) % self.p).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        FpPoly::new(self.p, (0..n).map(|i| (self.coeff(i) + self.p - o.coeff(i)) % self.p).collect())
    }

    pub fn scale(&self, s: u64) -> Self {
        FpPoly::new(self.p, self.coeffs.iter().map(|&c| mulmod(c, s, self.p)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return FpPoly::zero(self.p);
        }
        let mut v = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                v[i + j] = (v[i + j] + mulmod(a, b, self.p)) % self.p;
            }
        }
        FpPoly::new(self.p, v)
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        let inv = invmod(d.lead(), p).unwrap();
        let dd = d.deg();
        let mut r = self.coeffs.clone();
        let mut q = vec![0u64; r.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = mulmod(*r.last().unwrap(), inv, p);
            if c != 0 {
                for (i, &dc) in d.coeffs.iter().enumerate() {
                    r[k + i] = (r[k + i] + p - mulmod(c, dc, p)) % p;
                }
            }
            q[k] = c;
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        (FpPoly::new(p, q), FpPoly::new(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn make_monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(invmod(self.lead(), self.p).unwrap())
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// `(g, s, t)` with `s·self + t·o = g` monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (FpPoly::one(p), FpPoly::zero(p));
        let (mut t0, mut t1) = (FpPoly::zero(p), FpPoly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        let inv = invmod(r0.lead(), p).unwrap_or(1);
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn derivative(&self) -> Self {
        FpPoly::new(
            self.p,
            self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| mulmod(c, i as u64 % self.p, self.p)).collect(),
        )
    }

    pub fn mulmod_poly(&self, o: &Self, m: &Self) -> Self {
        self.mul(o).rem(m)
    }

    /// `self^e mod m`.
    pub fn powmod_poly(&self, mut e: u128, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = FpPoly::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod_poly(&base, m);
            }
            base = base.mulmod_poly(&base, m);
            e >>= 1;
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        if self.deg() == 0 {
            return !self.is_zero();
        }
        let d = self.derivative();
        if d.is_zero() {
            return false;
        }
        self.gcd(&d).deg() == 0
    }

    /// Ben-Or irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let f = self.make_monic();
        if !f.is_squarefree() {
            return false;
        }
        let x = FpPoly::x(self.p);
        let mut xp = x.clone();
        for _ in 1..=n / 2 {
            xp = xp.powmod_poly(self.p as u128, &f);
            if f.gcd(&xp.sub(&x)).deg() != 0 {
                return false;
            }
        }
        true
    }

    /// Berlekamp factorization of a squarefree polynomial into monic
    /// irreducibles, sorted by coefficient vector.
    pub fn berlekamp(&self) -> Vec<FpPoly> {
        let f = self.make_monic();
        let n = f.deg();
        let p = self.p;
        if n <= 1 {
            return vec![f];
        }
        // Rows of Q: x^{p·i} mod f.
        let xp = FpPoly::x(p).powmod_poly(p as u128, &f);
        let mut rows = Vec::with_capacity(n);
        let mut cur = FpPoly::one(p);
        for _ in 0..n {
            let mut r: Vec<u64> = (0..n).map(|j| cur.coeff(j)).collect();
            rows.push(std::mem::take(&mut r));
            cur = cur.mulmod_poly(&xp, &f);
        }
        // Kernel of (Q - I)^T acting on coefficient vectors: v with v·(Q - I) = 0.
        let mut m: Vec<Vec<u64>> = (0..n)
            .map(|j| (0..n).map(|i| (rows[i][j] + if i == j { p - 1 } else { 0 }) % p).collect())
            .collect();
        let basis = kernel_mod_p(&mut m, p);
        let r = basis.len();
        let mut factors = vec![f.clone()];
        if r == 1 {
            return factors;
        }
        for v in basis.iter() {
            if factors.len() == r {
                break;
            }
            let vp = FpPoly::new(p, v.clone());
            if vp.deg() == 0 {
                continue;
            }
            let mut next = Vec::new();
            for u in factors {
                if u.deg() <= 1 {
                    next.push(u);
                    continue;
                }
                let mut rest = u.clone();
                for s in 0..p {
                    if rest.deg() == 0 {
                        break;
                    }
                    let g = rest.gcd(&vp.sub(&FpPoly::new(p, vec![s])));
                    if g.deg() > 0 && g.deg() < rest.deg() {
                        rest = rest.div_rem(&g).0.make_monic();
                        next.push(g);
                    }
                }
                if rest.deg() > 0 {
                    next.push(rest);
                }
            }
            factors = next;
        }
        factors.sort_by(|a, b| (a.deg(), &a.coeffs).cmp(&(b.deg(), &b.coeffs)));
        factors
    }
}

/// Basis of the nullspace of `m` (as a column-vector map) over `F_p`.
fn kernel_mod_p(m: &mut [Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, pr);
        let inv = invmod(m[r][c], p).unwrap();
        for x in m[r].iter_mut() {
            *x = mulmod(*x, inv, p);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] + p - mulmod(f, m[r][j], p)) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - m[i][free]) % p;
        }
        basis.push(v);
    }
    basis
}

/// Irreducibility test for a monic polynomial over `F_p`.
pub fn is_irreducible_mod_p(f: &FpPoly) -> bool {
    f.is_irreducible()
}
