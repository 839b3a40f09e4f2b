use super::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Field;

/// Basis of `{X : XM = MX}`, as row-reduced coordinate vectors turned back into
/// matrices.
pub fn centralizer_space<T: Field>(m: &Matrix<T>) -> Vec<Matrix<T>> {
    let n = m.rows();
    let nn = n * n;
    // Unknown X[a][b] sits at index a*n + b; equation (XM - MX)[i][j] = 0.
    let mut sys = Matrix::<T>::zeros(nn, nn);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for k in 0..n {
                let v = sys[(row, i * n + k)].clone() + m[(k, j)].clone();
                sys[(row, i * n + k)] = v;
                let v = sys[(row, k * n + j)].clone() - m[(i, k)].clone();
                sys[(row, k * n + j)] = v;
            }
        }
    }
    let basis = Matrix::echelon_basis(&sys.nullspace());
    basis.into_iter().map(|v| vec_to_matrix(&v, n)).collect()
}

fn vec_to_matrix<T: Field>(v: &[T], n: usize) -> Matrix<T> {
    Matrix::from_rows((0..n).map(|i| v[i * n..(i + 1) * n].to_vec()).collect())
}

/// Solution space of `gᵀ J g = J` for all generators, split by symmetry type.
#[derive(Clone, Debug, PartialEq)]
pub struct FormSpace<T> {
    pub symmetric: Vec<Matrix<T>>,
    pub alternating: Vec<Matrix<T>>,
}

impl<T: Field> FormSpace<T> {
    pub fn dim(&self) -> usize {
        self.symmetric.len() + self.alternating.len()
    }

    pub fn basis(&self) -> Vec<Matrix<T>> {
        self.symmetric.iter().chain(&self.alternating).cloned().collect()
    }

    /// Recheck every basis element against the generators.
    pub fn verify(&self, gens: &[Matrix<T>]) -> bool {
        self.basis().iter().all(|j| gens.iter().all(|g| preserves_form(g, j)))
    }
}

pub fn preserves_form<T: Field>(g: &Matrix<T>, j: &Matrix<T>) -> bool {
    &(&g.transpose() * j) * g == *j
}

fn solve_forms<T: Field>(gens: &[Matrix<T>], n: usize, alternating: bool) -> Vec<Matrix<T>> {
    // One unknown per entry on or above (strictly above, for alternating) the diagonal.
    let mut slots = Vec::new();
    for i in 0..n {
        for j in i..n {
            if alternating && i == j {
                continue;
            }
            slots.push((i, j));
        }
    }
    let elementary: Vec<Matrix<T>> = slots
        .iter()
        .map(|&(i, j)| {
            let mut e = Matrix::zeros(n, n);
            e[(i, j)] = T::one();
            if i != j {
                e[(j, i)] = if alternating { -T::one() } else { T::one() };
            }
            e
        })
        .collect();
    let mut rows: Vec<Vec<T>> = Vec::new();
    let images: Vec<Vec<Matrix<T>>> = gens
        .iter()
        .map(|g| {
            let gt = g.transpose();
            elementary.iter().map(|e| &(&(&gt * e) * g) - e).collect()
        })
        .collect();
    for img in &images {
        for a in 0..n {
            for b in 0..n {
                rows.push(img.iter().map(|m| m[(a, b)].clone()).collect());
            }
        }
    }
    let sol = if rows.is_empty() {
        (0..slots.len())
            .map(|k| (0..slots.len()).map(|l| if k == l { T::one() } else { T::zero() }).collect())
            .collect()
    } else {
        Matrix::echelon_basis(&Matrix::from_rows(rows).nullspace())
    };
    sol.into_iter()
        .map(|v| {
            elementary
                .iter()
                .zip(&v)
                .fold(Matrix::zeros(n, n), |acc, (e, c)| &acc + &e.scale(c))
        })
        .collect()
}

/// All bilinear forms preserved by every generator.
pub fn invariant_form_space<T: Field>(gens: &[Matrix<T>]) -> Result<FormSpace<T>> {
    let n = gens.first().map_or(0, |g| g.rows());
    if gens.iter().any(|g| !g.is_square() || g.rows() != n) {
        return Err(Error::SizeMismatch("generators of different sizes".into()));
    }
    if gens.iter().any(|g| g.det().is_zero()) {
        return Err(Error::Singular);
    }
    let fs = FormSpace { symmetric: solve_forms(gens, n, false), alternating: solve_forms(gens, n, true) };
    debug_assert!(fs.verify(gens));
    Ok(fs)
}

/// `P⁻¹ · blockdiag(blocks) · P`.
pub fn block_assemble<T: Field>(p: &Matrix<T>, blocks: &[Matrix<T>]) -> Result<Matrix<T>> {
    let n: usize = blocks.iter().map(|b| b.rows()).sum();
    if n != p.rows() || blocks.iter().any(|b| !b.is_square()) {
        return Err(Error::SizeMismatch(format!("blocks sum to {n}, matrix has size {}", p.rows())));
    }
    let pi = p.inverse()?;
    Ok(&(&pi * &Matrix::block_diag(blocks)) * p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::Poly;
    use crate::scalar::rat;
    use num_rational::BigRational;

    type QM = Matrix<BigRational>;

    #[test]
    fn centralizer_dimensions() {
        let c = QM::companion(&Poly::from_ints(&[1, -3, 1]));
        assert_eq!(centralizer_space(&c).len(), 2);
        assert_eq!(centralizer_space(&QM::identity(3)).len(), 9);
        let m = QM::from_ints(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let cent = centralizer_space(&m);
        assert_eq!(cent.len(), 3);
        for x in &cent {
            assert!(x.commutes_with(&m));
        }
    }

    #[test]
    fn trivial_group_preserves_everything() {
        let fs = invariant_form_space(&[QM::identity(3)]).unwrap();
        assert_eq!(fs.dim(), 9);
        assert_eq!(fs.symmetric.len(), 6);
    }

    #[test]
    fn sl2_preserves_the_determinant_form() {
        let a = QM::from_ints(&[&[1, 1], &[0, 1]]);
        let b = QM::from_ints(&[&[1, 0], &[1, 1]]);
        let fs = invariant_form_space(&[a, b]).unwrap();
        assert_eq!(fs.symmetric.len(), 0);
        assert_eq!(fs.alternating.len(), 1);
        assert_eq!(fs.alternating[0], QM::from_ints(&[&[0, 1], &[-1, 0]]));
    }

    #[test]
    fn assemble_blocks() {
        let p = QM::from_ints(&[&[1, 1], &[0, 1]]);
        let blocks = vec![QM::from_rows(vec![vec![rat(2, 1)]]), QM::from_rows(vec![vec![rat(3, 1)]])];
        let a = block_assemble(&p, &blocks).unwrap();
        assert_eq!(a.det(), rat(6, 1));
        assert!(block_assemble(&QM::identity(3), &blocks).is_err());
        let id = block_assemble(&QM::identity(2), &blocks).unwrap();
        assert_eq!(id, QM::diag(&[rat(2, 1), rat(3, 1)]));
    }
}
