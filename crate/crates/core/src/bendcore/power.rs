use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::exactmat::{hermite_normal_form, Matrix};
use crate::nfield::{NfElement, NumberField};
use crate::scalar::{lcm, Integrality};
use crate::NfMatrix;

/// Largest order of the lattice form modulo the denominator that is
/// searched before giving up.
pub const MAX_POWER_ORDER: u64 = 50_000_000;

/// Arithmetic in `O_K / N` on power-basis coordinates.
struct ResidueRing {
    modulus: u64,
    degree: usize,
    /// Coefficients of the monic minimal polynomial below the leading term.
    min_poly: Vec<u64>,
}

impl ResidueRing {
    fn new(k: &NumberField, modulus: u64) -> Self {
        let n = BigInt::from(modulus);
        let mp = k.min_poly();
        let min_poly = mp[..mp.len() - 1].iter().map(|c| c.mod_floor(&n).to_u64().unwrap()).collect();
        ResidueRing { modulus, degree: k.degree(), min_poly }
    }

    fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let d = self.degree;
        let mut prod = vec![0u64; 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + self.mulmod(*x, *y)) % self.modulus;
            }
        }
        // Reduce t^k for k ≥ d using t^d = −Σ cᵢ tⁱ.
        for k in (d..prod.len()).rev() {
            let top = prod[k];
            if top == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, c) in self.min_poly.iter().enumerate() {
                let sub = self.mulmod(top, *c);
                let idx = k - d + i;
                prod[idx] = (prod[idx] + self.modulus - sub) % self.modulus;
            }
        }
        prod.truncate(d);
        prod
    }

    fn add(&self, a: &mut [u64], b: &[u64]) {
        for (x, y) in a.iter_mut().zip(b) {
            *x = (*x + y) % self.modulus;
        }
    }

    fn element(&self, e: &NfElement) -> Vec<u64> {
        let n = BigInt::from(self.modulus);
        e.coords(self.degree).iter().map(|c| c.to_integer().mod_floor(&n).to_u64().unwrap()).collect()
    }

    fn mat_mul(&self, a: &[Vec<Vec<u64>>], b: &[Vec<Vec<u64>>]) -> Vec<Vec<Vec<u64>>> {
        let n = a.len();
        let mut out = vec![vec![vec![0u64; self.degree]; n]; n];
        for i in 0..n {
            for k in 0..n {
                if a[i][k].iter().all(|&x| x == 0) {
                    continue;
                }
                for j in 0..n {
                    let p = self.mul(&a[i][k], &b[k][j]);
                    self.add(&mut out[i][j], &p);
                }
            }
        }
        out
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn field_of(m: &NfMatrix) -> std::sync::Arc<NumberField> {
    m.entries().iter().find_map(|e| e.field().cloned()).unwrap_or_else(NumberField::rationals)
}

/// Basis (as columns) of the lattice `Σ_{i<n} Mⁱ·O_K^n`, which `M` preserves
/// when its characteristic polynomial is integral.
fn invariant_lattice(m: &NfMatrix, k: &std::sync::Arc<NumberField>) -> Result<NfMatrix> {
    let n = m.rows();
    let mut gens: Vec<Vec<NfElement>> = Vec::new();
    let mut power = Matrix::identity(n);
    for _ in 0..n {
        gens.extend((0..n).map(|j| power.col(j)));
        power = &power * m;
    }
    let den = gens.iter().flatten().fold(BigInt::one(), |acc, x| lcm(&acc, &x.denominator()));
    let scale = NfElement::from_integer(den.clone());
    let scaled: Vec<Vec<NfElement>> =
        gens.iter().map(|v| v.iter().map(|x| (x.clone() * scale.clone()).in_field(k)).collect()).collect();
    let inv = NfElement::from_rational(BigRational::new(BigInt::one(), den));
    let rows = hermite_normal_form(&scaled);
    if rows.len() != n {
        return Err(Error::Singular);
    }
    let cols: Vec<Vec<NfElement>> = rows.into_iter().map(|r| r.into_iter().map(|x| x * inv.clone()).collect()).collect();
    Ok(Matrix::from_cols(&cols))
}

/// Smallest `j ≥ 1` with `M^j` integral, for `M` of determinant one whose
/// characteristic polynomial is integral. Writes `M = B·R·B⁻¹` with `B` a
/// basis of an `M`-stable lattice containing `O_K^n` (so `R` and `B⁻¹` are
/// integral), takes `N` clearing the denominators of `B`, and searches the
/// divisors of the order of `R` modulo `N`.
pub fn integral_power(m: &NfMatrix) -> Result<(u64, NfMatrix)> {
    if !m.is_square() {
        return Err(Error::SizeMismatch("integral_power needs a square matrix".into()));
    }
    if !m.charpoly().coeffs().iter().all(Integrality::is_integral) {
        return Err(Error::Precondition("characteristic polynomial is not integral".into()));
    }
    if !m.det().is_one() {
        return Err(Error::Precondition("determinant is not 1".into()));
    }
    if m.is_integral() {
        return Ok((1, m.clone()));
    }
    let k = field_of(m);
    let b = invariant_lattice(m, &k)?;
    let binv = b.inverse()?;
    let r = &binv * &(m * &b);
    if !r.is_integral() {
        return Err(Error::IntegralityViolated("lattice form is not integral".into()));
    }
    let modulus = b.denominator();
    let Some(modulus) = modulus.to_u64().filter(|&n| n < 1 << 62) else {
        return Err(Error::TooLarge(format!("denominator {modulus}")));
    };
    let ring = ResidueRing::new(&k, modulus);
    let n = m.rows();
    let r_mod: Vec<Vec<Vec<u64>>> = (0..n).map(|i| (0..n).map(|j| ring.element(&r[(i, j)])).collect()).collect();
    let id: Vec<Vec<Vec<u64>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut v = vec![0u64; ring.degree];
                    if i == j {
                        v[0] = 1 % modulus;
                    }
                    v
                })
                .collect()
        })
        .collect();
    let mut x = r_mod.clone();
    let mut order = 1u64;
    while x != id {
        if order >= MAX_POWER_ORDER {
            return Err(Error::NotFoundWithinBound(format!("order modulo {modulus} exceeds {MAX_POWER_ORDER}")));
        }
        x = ring.mat_mul(&x, &r_mod);
        order += 1;
    }
    for d in divisors(order) {
        let p = m.pow(d);
        if p.is_integral() {
            return Ok((d, p));
        }
    }
    unreachable!("M^order is integral")
}
