use super::Matrix;
use crate::error::{Error, Result};
use crate::polyring::Poly;
use crate::scalar::{Field, Integrality};

/// Result of a rational canonical form computation: `P·M·P⁻¹` equals the
/// block-diagonal matrix of companion blocks, whose polynomials divide
/// successively.
#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusForm<T> {
    pub p: Matrix<T>,
    pub p_inv: Matrix<T>,
    pub invariant_factors: Vec<Poly<T>>,
}

impl<T: Field> FrobeniusForm<T> {
    pub fn block_matrix(&self) -> Matrix<T> {
        let blocks: Vec<_> = self.invariant_factors.iter().map(Matrix::companion).collect();
        Matrix::block_diag(&blocks)
    }
}

/// Monic annihilator of `v` under `m`, with the Krylov vectors `v, Mv, ...`.
pub fn local_minpoly<T: Field>(m: &Matrix<T>, v: &[T]) -> (Poly<T>, Vec<Vec<T>>) {
    let n = m.rows();
    let mut krylov: Vec<Vec<T>> = Vec::new();
    let mut cur = v.to_vec();
    loop {
        // Express cur in terms of previous Krylov vectors, if possible.
        if !krylov.is_empty() {
            let k = Matrix::from_cols(&krylov);
            if let Some(c) = k.solve(&cur) {
                let mut coeffs: Vec<T> = c.into_iter().map(|x| -x).collect();
                coeffs.push(T::one());
                return (Poly::new(coeffs), krylov);
            }
        } else if cur.iter().all(|x| x.is_zero()) {
            return (Poly::one(), krylov);
        }
        krylov.push(cur.clone());
        cur = m.mul_vec(&cur);
        debug_assert!(krylov.len() <= n);
    }
}

fn poly_apply<T: Field>(m: &Matrix<T>, p: &Poly<T>, v: &[T]) -> Vec<T> {
    let mut acc = vec![T::zero(); v.len()];
    for c in p.coeffs().iter().rev() {
        acc = m.mul_vec(&acc);
        for (a, x) in acc.iter_mut().zip(v) {
            *a = a.clone() + c.clone() * x.clone();
        }
    }
    acc
}

/// Part of `x` supported on the irreducible factors of `y`, and the rest.
fn split_support<T: Field>(x: &Poly<T>, y: &Poly<T>) -> (Poly<T>, Poly<T>) {
    let mut rest = x.clone();
    let mut part = Poly::one();
    loop {
        let g = rest.gcd(y);
        if g.deg() == 0 {
            break;
        }
        part = &part * &g;
        rest = rest.exact_div(&g);
    }
    (part, rest)
}

/// Given `v` with annihilator `p` and `w` with annihilator `q`, a vector whose
/// annihilator is `lcm(p, q)`.
fn merge_vectors<T: Field>(m: &Matrix<T>, v: &[T], p: &Poly<T>, w: &[T], q: &Poly<T>) -> (Vec<T>, Poly<T>) {
    let g = p.gcd(q);
    let l = (p * q).exact_div(&g);
    let s = l.exact_div(q);
    // Factors where p carries the larger exponent are exactly those of s.
    let (p1, _) = split_support(p, &s);
    let (_, q1) = split_support(q, &s);
    let v1 = poly_apply(m, &p.exact_div(&p1), v);
    let w1 = poly_apply(m, &q.exact_div(&q1), w);
    let sum: Vec<T> = v1.iter().zip(&w1).map(|(a, b)| a.clone() + b.clone()).collect();
    (sum, l.make_monic())
}

/// A vector whose annihilator is the minimal polynomial of `m`.
pub fn maximal_vector<T: Field>(m: &Matrix<T>) -> (Vec<T>, Poly<T>) {
    let n = m.rows();
    let mut best: Option<(Vec<T>, Poly<T>)> = None;
    for i in 0..n {
        let mut e = vec![T::zero(); n];
        e[i] = T::one();
        let (q, _) = local_minpoly(m, &e);
        best = Some(match best {
            None => (e, q),
            Some((v, p)) => {
                if p.rem(&q).is_zero() {
                    (v, p)
                } else {
                    merge_vectors(m, &v, &p, &e, &q)
                }
            }
        });
    }
    best.unwrap_or_else(|| (vec![], Poly::one()))
}

pub fn minimal_polynomial<T: Field>(m: &Matrix<T>) -> Poly<T> {
    maximal_vector(m).1
}

/// Basis (as columns) of an invariant subspace in which `m` is a direct sum of
/// cyclic pieces, listed largest first, with their annihilators.
fn cyclic_decomposition<T: Field>(m: &Matrix<T>) -> (Vec<Vec<T>>, Vec<Poly<T>>) {
    let n = m.rows();
    if n == 0 {
        return (vec![], vec![]);
    }
    let (v, f) = maximal_vector(m);
    let d = f.deg();
    let mut krylov = Vec::with_capacity(d);
    let mut cur = v;
    for _ in 0..d {
        krylov.push(cur.clone());
        cur = m.mul_vec(&cur);
    }
    if d == n {
        return (krylov, vec![f]);
    }
    // Functional λ with λ(M^i v) = δ_{i, d-1}; its M-orbit cuts out a complement.
    let kt = Matrix::from_cols(&krylov).transpose();
    let mut target = vec![T::zero(); d];
    target[d - 1] = T::one();
    let lambda = kt.solve(&target).expect("Krylov vectors are independent");
    let mt = m.transpose();
    let mut rows = Vec::with_capacity(d);
    let mut cur = lambda;
    for _ in 0..d {
        rows.push(cur.clone());
        cur = mt.mul_vec(&cur);
    }
    let u_basis = Matrix::from_rows(rows).nullspace();
    let u = Matrix::from_cols(&u_basis);
    // Restriction of m to U in the basis u_basis.
    let mu = u.clone();
    let image = m * &mu;
    let mut restricted = Matrix::zeros(u_basis.len(), u_basis.len());
    for j in 0..u_basis.len() {
        let c = u.solve(&image.col(j)).expect("complement is invariant");
        for (i, x) in c.into_iter().enumerate() {
            restricted[(i, j)] = x;
        }
    }
    let (sub_basis, sub_polys) = cyclic_decomposition(&restricted);
    let mut basis = krylov;
    for b in sub_basis {
        basis.push(u.mul_vec(&b));
    }
    let mut polys = vec![f];
    polys.extend(sub_polys);
    (basis, polys)
}

/// Rational canonical form over the field.
pub fn frobenius_form_field<T: Field>(m: &Matrix<T>) -> Result<FrobeniusForm<T>> {
    if !m.is_square() {
        return Err(Error::SizeMismatch("frobenius form of a non-square matrix".into()));
    }
    let (basis, polys) = cyclic_decomposition(m);
    // Reorder so that invariant factors divide successively.
    let mut blocks: Vec<(Vec<Vec<T>>, Poly<T>)> = Vec::new();
    let mut off = 0;
    for f in polys {
        let d = f.deg();
        blocks.push((basis[off..off + d].to_vec(), f));
        off += d;
    }
    blocks.reverse();
    let mut cols = Vec::new();
    let mut factors = Vec::new();
    for (b, f) in blocks {
        cols.extend(b);
        factors.push(f);
    }
    let q = Matrix::from_cols(&cols);
    let p = q.inverse()?;
    Ok(FrobeniusForm { p, p_inv: q, invariant_factors: factors })
}

/// Rational canonical form; for integral input the invariant factors must come
/// out integral, and a failure is reported rather than ignored.
pub fn frobenius_form<T: Field + Integrality>(m: &Matrix<T>) -> Result<FrobeniusForm<T>> {
    let ff = frobenius_form_field(m)?;
    if m.is_integral() {
        for f in &ff.invariant_factors {
            if !f.coeffs().iter().all(|c| c.is_integral()) {
                return Err(Error::IntegralityViolated(format!(
                    "invariant factor with non-integral coefficients: {:?}",
                    f.coeffs()
                )));
            }
        }
    }
    Ok(ff)
}

/// Split along pairwise coprime factors of the characteristic polynomial:
/// returns `P` and the restricted blocks with `P·M·P⁻¹ = blockdiag(blocks)`.
/// Each block is the companion of its factor when the restriction is cyclic.
pub fn primary_split<T: Field>(m: &Matrix<T>, factors: &[Poly<T>]) -> Result<(Matrix<T>, Vec<Matrix<T>>)> {
    let n = m.rows();
    let total: usize = factors.iter().map(|f| f.deg()).sum();
    if total != n {
        return Err(Error::SizeMismatch(format!("factor degrees sum to {total}, expected {n}")));
    }
    let mut cols = Vec::new();
    let mut blocks = Vec::new();
    for f in factors {
        let kernel = m.eval_poly(f).nullspace();
        if kernel.len() != f.deg() {
            return Err(Error::Precondition("factors are not coprime parts of the characteristic polynomial".into()));
        }
        let k = Matrix::from_cols(&kernel);
        let image = m * &k;
        let d = kernel.len();
        let mut r = Matrix::zeros(d, d);
        for j in 0..d {
            let c = k.solve(&image.col(j)).expect("kernel is invariant");
            for (i, x) in c.into_iter().enumerate() {
                r[(i, j)] = x;
            }
        }
        let ff = frobenius_form_field(&r)?;
        // Columns of k·ff.p_inv give the block basis.
        let kb = &k * &ff.p_inv;
        for j in 0..d {
            cols.push(kb.col(j));
        }
        blocks.push(ff.block_matrix());
    }
    let q = Matrix::from_cols(&cols);
    let p = q.inverse()?;
    Ok((p, blocks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use num_rational::BigRational;

    type QM = Matrix<BigRational>;

    fn round_trip(m: &QM) -> FrobeniusForm<BigRational> {
        let ff = frobenius_form(m).unwrap();
        assert_eq!(&(&ff.p_inv * &ff.block_matrix()) * &ff.p, *m);
        for w in ff.invariant_factors.windows(2) {
            assert!(w[1].rem(&w[0]).is_zero());
        }
        ff
    }

    #[test]
    fn cyclic_rational_matrix() {
        let m = QM::from_rows(vec![vec![rat(0, 1), rat(-1, 2)], vec![rat(2, 1), rat(3, 1)]]);
        let ff = round_trip(&m);
        assert_eq!(ff.invariant_factors, vec![Poly::from_ints(&[1, -3, 1])]);
    }

    #[test]
    fn identity_has_repeated_linear_blocks() {
        let ff = round_trip(&QM::identity(2));
        assert_eq!(ff.invariant_factors, vec![Poly::from_ints(&[-1, 1]), Poly::from_ints(&[-1, 1])]);
    }

    #[test]
    fn diagonal_with_distinct_entries_is_cyclic() {
        let m = QM::diag(&[rat(1, 1), rat(2, 1), rat(1, 2)]);
        let ff = round_trip(&m);
        assert_eq!(ff.invariant_factors.len(), 1);
        assert_eq!(ff.invariant_factors[0], m.charpoly());
    }

    #[test]
    fn mixed_invariant_factors() {
        // diag(2, 2, 3): invariant factors (t-2), (t-2)(t-3).
        let m = QM::diag(&[rat(2, 1), rat(2, 1), rat(3, 1)]);
        let ff = round_trip(&m);
        assert_eq!(ff.invariant_factors, vec![Poly::from_ints(&[-2, 1]), Poly::from_ints(&[6, -5, 1])]);
        // Jordan block J_2(1) ⊕ (1): (t-1), (t-1)^2.
        let j = QM::from_ints(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
        let ff = round_trip(&j);
        assert_eq!(ff.invariant_factors, vec![Poly::from_ints(&[-1, 1]), Poly::from_ints(&[1, -2, 1])]);
    }

    #[test]
    fn minimal_polynomial_merges_local_annihilators() {
        // e1 sees (t-2), e3 sees (t-3)^2-ish parts; the lcm needs the merge.
        let m = QM::from_ints(&[&[2, 0, 0], &[0, 3, 1], &[0, 0, 3]]);
        assert_eq!(minimal_polynomial(&m), Poly::from_ints(&[-18, 21, -8, 1]));
    }

    #[test]
    fn primary_split_gives_companions() {
        let m = QM::from_ints(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let f = m.charpoly();
        let (p, blocks) = primary_split(&m, &[f.clone()]).unwrap();
        assert_eq!(blocks[0], QM::companion(&f));
        assert_eq!(&(&p * &m) * &p.inverse().unwrap(), blocks[0]);
    }
}
