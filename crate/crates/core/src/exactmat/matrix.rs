use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::polyring::Poly;
use crate::scalar::{Field, Integrality, Ring};

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.cols + c]
    }
}

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn scalar(n: usize, s: T) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = s.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| T::from_int(x)).collect()).collect())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<T>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |x| x.len());
        let mut m = Matrix::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn diag(entries: &[T]) -> Self {
        let mut m = Matrix::zeros(entries.len(), entries.len());
        for (i, x) in entries.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    /// Companion matrix acting on `v, Mv, ..., M^{d-1}v`: ones on the
    /// subdiagonal and `-c_i` in the last column. `f` must be monic.
    pub fn companion(f: &Poly<T>) -> Self {
        let d = f.deg();
        let mut m = Matrix::zeros(d, d);
        for i in 1..d {
            m[(i, i - 1)] = T::one();
        }
        for i in 0..d {
            m[(i, d - 1)] = -f.coeff(i);
        }
        m
    }

    pub fn block_diag(blocks: &[Matrix<T>]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = Matrix::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(off + i, off + j)] = b[(i, j)].clone();
                }
            }
            off += b.rows;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> Vec<T> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&T) -> S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut m = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        *self == Matrix::identity(self.rows)
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        (0..self.rows)
            .map(|i| (0..self.cols).fold(T::zero(), |acc, j| acc + self[(i, j)].clone() * v[j].clone()))
            .collect()
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        m
    }

    /// `p(M)` by Horner's rule.
    pub fn eval_poly(&self, p: &Poly<T>) -> Self {
        let mut acc = Matrix::zeros(self.rows, self.cols);
        let id = Matrix::identity(self.rows);
        for c in p.coeffs().iter().rev() {
            acc = &(&acc * self) + &id.scale(c);
        }
        acc
    }

    pub fn commutes_with(&self, o: &Self) -> bool {
        &(self * o) == &(o * self)
    }

    /// Characteristic polynomial `det(tI - M)` by Berkowitz's division-free
    /// algorithm; valid over any commutative ring.
    pub fn charpoly(&self) -> Poly<T> {
        assert!(self.is_square(), "charpoly of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Poly::one();
        }
        // Coefficients from the leading term down.
        let mut vect = vec![T::one(), -self[(0, 0)].clone()];
        for r in 1..n {
            // C: column r above the diagonal; R: row r left of the diagonal.
            let c: Vec<T> = (0..r).map(|i| self[(i, r)].clone()).collect();
            let row: Vec<T> = (0..r).map(|j| self[(r, j)].clone()).collect();
            let mut toeplitz = vec![T::one(), -self[(r, r)].clone()];
            let mut acc = c;
            for _ in 0..r {
                let val = row.iter().zip(&acc).fold(T::zero(), |s, (a, b)| s + a.clone() * b.clone());
                toeplitz.push(-val);
                // acc <- A_r · acc
                acc = (0..r)
                    .map(|i| (0..r).fold(T::zero(), |s, j| s + self[(i, j)].clone() * acc[j].clone()))
                    .collect();
            }
            let mut next = vec![T::zero(); r + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                let mut s = T::zero();
                for (j, v) in vect.iter().enumerate() {
                    if i >= j && i - j < toeplitz.len() {
                        s = s + toeplitz[i - j].clone() * v.clone();
                    }
                }
                *slot = s;
            }
            vect = next;
        }
        vect.reverse();
        Poly::new(vect)
    }

    /// Determinant through the characteristic polynomial; ring-generic.
    pub fn det_ring(&self) -> T {
        let n = self.rows;
        let c0 = self.charpoly().coeff(0);
        if n % 2 == 1 {
            -c0
        } else {
            c0
        }
    }
}

impl<T: Field> Matrix<T> {
    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return T::one();
        }
        let mut a = self.clone();
        let mut sign = false;
        let mut prev = T::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return T::zero();
                };
                a.swap_rows(k, p);
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[(i, j)].clone() * a[(k, k)].clone() - a[(i, k)].clone() * a[(k, j)].clone();
                    a[(i, j)] = v / prev.clone();
                }
                a[(i, k)] = T::zero();
            }
            prev = a[(k, k)].clone();
        }
        let d = a[(n - 1, n - 1)].clone();
        if sign {
            -d
        } else {
            d
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form and pivot columns. Pivoting picks the first
    /// nonzero entry in row order, so results are reproducible.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else { continue };
            a.swap_rows(r, p);
            let inv = a[(r, c)].try_inv().unwrap();
            for j in c..a.cols {
                a[(r, j)] = a[(r, j)].clone() * inv.clone();
            }
            for i in 0..a.rows {
                if i != r && !a[(i, c)].is_zero() {
                    let f = a[(i, c)].clone();
                    for j in c..a.cols {
                        let v = a[(i, j)].clone() - f.clone() * a[(r, j)].clone();
                        a[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : Mx = 0}`, one vector per free column in order.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let (a, pivots) = self.rref();
        let mut out = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![T::zero(); self.cols];
            v[free] = T::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[(i, free)].clone();
            }
            out.push(v);
        }
        out
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::SizeMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = T::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(r.submatrix(0, n, n, n))
    }

    /// Some solution of `M x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![T::zero(); self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    /// Row-reduced basis of the span of the given vectors.
    pub fn echelon_basis(vectors: &[Vec<T>]) -> Vec<Vec<T>> {
        if vectors.is_empty() {
            return vec![];
        }
        let m = Matrix::from_rows(vectors.to_vec());
        let (r, pivots) = m.rref();
        (0..pivots.len()).map(|i| r.row(i)).collect()
    }
}

impl<T: Ring + Integrality> Matrix<T> {
    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integral())
    }

    pub fn denominator(&self) -> num_bigint::BigInt {
        use num_integer::Integer;
        self.data.iter().fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(&x.denominator()))
    }
}

impl<T: Ring> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, o: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<T: Ring> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, o: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<T: Ring> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, o: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, o.rows, "matrix product shape mismatch");
        let mut m = Matrix::<T>::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = m[(i, j)].clone() + a.clone() * o[(k, j)].clone();
                    m[(i, j)] = v;
                }
            }
        }
        m
    }
}

impl<T: Ring> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.map(|x| -x.clone())
    }
}

impl<T: Ring> Mul for Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, o: Matrix<T>) -> Matrix<T> {
        &self * &o
    }
}

impl<T: Ring> Add for Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, o: Matrix<T>) -> Matrix<T> {
        &self + &o
    }
}

impl<T: Ring> Sub for Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, o: Matrix<T>) -> Matrix<T> {
        &self - &o
    }
}

impl<T: Ring> Neg for Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    type QM = Matrix<BigRational>;

    #[test]
    fn berkowitz_matches_small_cases() {
        let m = QM::diag(&[rat(2, 1), rat(1, 2)]);
        assert_eq!(m.charpoly(), Poly::new(vec![rat(1, 1), rat(-5, 2), rat(1, 1)]));
        let c = QM::from_ints(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        // det(tI - C) = t^3 - 9t^2 + 24t - 18
        assert_eq!(c.charpoly(), Poly::from_ints(&[-18, 24, -9, 1]));
        assert_eq!(c.det(), rat(18, 1));
        assert_eq!(c.det_ring(), rat(18, 1));
    }

    #[test]
    fn determinant_with_pivoting() {
        let m = QM::from_ints(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.det(), rat(-1, 1));
        assert_eq!(QM::identity(3).det(), rat(1, 1));
        assert_eq!(QM::from_ints(&[&[1, 2], &[2, 4]]).det(), rat(0, 1));
    }

    #[test]
    fn inverse_and_singular() {
        let m = QM::from_ints(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity());
        assert_eq!(QM::from_ints(&[&[1, 2], &[2, 4]]).inverse(), Err(Error::Singular));
    }

    #[test]
    fn nullspace_basis() {
        let m = QM::from_ints(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(m.mul_vec(&v).iter().all(|x| x == &rat(0, 1)));
        }
    }

    #[test]
    fn integer_charpoly_is_division_free() {
        let m = Matrix::<BigInt>::from_ints(&[&[0, -1], &[1, 1]]);
        assert_eq!(m.charpoly(), Poly::from_ints(&[1, -1, 1]));
        assert_eq!(m.pow(3), Matrix::<BigInt>::from_ints(&[&[-1, 0], &[0, -1]]));
    }

    #[test]
    fn companion_has_its_polynomial() {
        let f = Poly::<BigRational>::from_ints(&[1, -3, 1]);
        assert_eq!(QM::companion(&f).charpoly(), f);
        assert!(QM::companion(&f).eval_poly(&f).is_zero());
    }
}
