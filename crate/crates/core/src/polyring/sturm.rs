use num_rational::BigRational;

use super::Poly;
use crate::error::{Error, Result};
use crate::scalar::RealField;

/// Endpoint of a real interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    PosInf,
    Finite(BigRational),
}

/// Canonical Sturm sequence `f, f', -rem(f, f'), ...`.
pub fn sturm_sequence<T: RealField>(f: &Poly<T>) -> Vec<Poly<T>> {
    let mut seq = vec![f.clone(), f.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let r = seq[n - 2].rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(-r);
    }
    seq
}

fn sign_at<T: RealField>(p: &Poly<T>, x: &Bound) -> i8 {
    if p.is_zero() {
        return 0;
    }
    match x {
        Bound::Finite(q) => p.eval(&T::from_rational(q)).sign(),
        Bound::PosInf => p.lead().sign(),
        Bound::NegInf => {
            let s = p.lead().sign();
            if p.deg() % 2 == 1 {
                -s
            } else {
                s
            }
        }
    }
}

fn variations<T: RealField>(seq: &[Poly<T>], x: &Bound) -> usize {
    let mut last = 0i8;
    let mut v = 0;
    for p in seq {
        let s = sign_at(p, x);
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

/// Number of real roots of a squarefree `f` in `(lo, hi]`.
pub fn sturm_count<T: RealField>(f: &Poly<T>, lo: &Bound, hi: &Bound) -> Result<usize> {
    if f.is_zero() || !f.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    if f.deg() == 0 {
        return Ok(0);
    }
    let seq = sturm_sequence(f);
    let a = variations(&seq, lo);
    let b = variations(&seq, hi);
    Ok(a.saturating_sub(b))
}

pub fn sturm_count_rational(f: &Poly<BigRational>, lo: &Bound, hi: &Bound) -> Result<usize> {
    sturm_count(f, lo, hi)
}

/// Number of distinct real roots (no squarefree precondition).
pub fn count_real_roots<T: RealField>(f: &Poly<T>) -> usize {
    if f.deg() == 0 {
        return 0;
    }
    sturm_count(&f.squarefree_part(), &Bound::NegInf, &Bound::PosInf).unwrap_or(0)
}

/// Squarefree, all roots real and positive.
pub fn is_real_rooted_distinct_positive<T: RealField>(f: &Poly<T>) -> bool {
    if f.is_zero() || !f.is_squarefree() {
        return false;
    }
    let n = f.deg();
    let all = sturm_count(f, &Bound::NegInf, &Bound::PosInf).unwrap_or(usize::MAX);
    let pos = sturm_count(f, &Bound::Finite(BigRational::from_integer(0.into())), &Bound::PosInf).unwrap_or(usize::MAX);
    // (0, ∞) excludes 0 itself only if 0 is the lower endpoint, which it is.
    all == n && pos == n
}

/// All roots positive real, multiplicities allowed.
pub fn is_real_rooted_positive<T: RealField>(f: &Poly<T>) -> bool {
    if f.is_zero() {
        return false;
    }
    let s = f.squarefree_part();
    is_real_rooted_distinct_positive(&s)
}

/// Squarefree, real-rooted, and no pair of roots `λ, -λ`.
pub fn has_distinct_absolute_values<T: RealField>(f: &Poly<T>) -> Result<bool> {
    if f.coeff(0).is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    if !f.is_squarefree() {
        return Ok(false);
    }
    let n = f.deg();
    if sturm_count(f, &Bound::NegInf, &Bound::PosInf)? != n {
        return Ok(false);
    }
    let g = f.gcd(&f.negate_variable());
    Ok(g.deg() == 0)
}

/// Root multiset closed under `λ ↦ 1/λ`, i.e. `t^n f(1/t)` is a scalar
/// multiple of `f`.
pub fn is_reciprocal<T: RealField>(f: &Poly<T>) -> bool {
    let c0 = f.coeff(0);
    if f.is_zero() || c0.is_zero() {
        return false;
    }
    f.reversed().scale(&f.lead()) == f.scale(&c0)
}
