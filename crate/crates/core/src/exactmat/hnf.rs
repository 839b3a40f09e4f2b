use crate::scalar::Euclidean;

/// Row Hermite normal form over a Euclidean domain: nonzero rows in echelon
/// form, pivots normalized, entries above each pivot reduced modulo it.
/// Deterministic in the input order.
pub fn hermite_normal_form<T: Euclidean>(rows: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut m: Vec<Vec<T>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if pivot_row >= m.len() {
            break;
        }
        loop {
            // Smallest nonzero entry in this column moves to the pivot row.
            let best = (pivot_row..m.len()).filter(|&r| !m[r][c].is_zero()).min_by_key(|&r| m[r][c].size());
            let Some(best) = best else { break };
            m.swap(pivot_row, best);
            let mut done = true;
            for r in pivot_row + 1..m.len() {
                if m[r][c].is_zero() {
                    continue;
                }
                let (q, rem) = m[r][c].div_rem_euclid(&m[pivot_row][c]).expect("euclidean step");
                let pr = m[pivot_row].clone();
                for (x, p) in m[r].iter_mut().zip(&pr) {
                    *x = x.clone() - q.clone() * p.clone();
                }
                if !rem.is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[pivot_row][c].is_zero() {
            continue;
        }
        let (_, unit) = m[pivot_row][c].normalize_unit();
        for x in m[pivot_row].iter_mut() {
            *x = x.clone() * unit.clone();
        }
        for r in 0..pivot_row {
            if m[r][c].is_zero() {
                continue;
            }
            let (q, _) = m[r][c].div_rem_euclid(&m[pivot_row][c]).expect("euclidean step");
            let pr = m[pivot_row].clone();
            for (x, p) in m[r].iter_mut().zip(&pr) {
                *x = x.clone() - q.clone() * p.clone();
            }
        }
        pivots.push(c);
        pivot_row += 1;
    }
    m.truncate(pivot_row);
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn z(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn integer_hnf() {
        let h = hermite_normal_form(&z(&[&[2, 4], &[3, 5], &[0, 0]]));
        assert_eq!(h, z(&[&[1, 1], &[0, 2]]));
        let h = hermite_normal_form(&z(&[&[4, 0], &[0, 6], &[2, 3]]));
        assert_eq!(h, z(&[&[2, 3], &[0, 6]]));
    }
}
