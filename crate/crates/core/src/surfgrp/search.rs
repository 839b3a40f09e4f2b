//! Searches for a torsion-free index-12 subgroup of Δ(3,4,4) and for a
//! genus-2 generating tuple inside it.

use std::collections::{HashMap, HashSet};

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::coset::{cycle_type, todd_coxeter, CosetTable};
use super::{Presentation, Word};
use crate::error::{Error, Result};
use crate::exactmat::Matrix;
use crate::NfMatrix;

/// `x ↦ q[p[x]]`: apply `p` first, then `q`.
pub fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    p.iter().map(|&x| q[x]).collect()
}

pub fn invert(p: &[usize]) -> Vec<usize> {
    let mut r = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        r[x] = i;
    }
    r
}

fn transitive(gens: &[&[usize]], n: usize) -> bool {
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g[x];
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == n
}

/// Ordered selections of `k` items from `items`, in lexicographic position order.
fn arrangements(items: &[usize], k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn rec(items: &[usize], used: &mut Vec<bool>, cur: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in 0..items.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            cur.push(items[i]);
            let stop = rec(items, used, cur, k, f);
            cur.pop();
            used[i] = false;
            if stop {
                return true;
            }
        }
        false
    }
    rec(items, &mut vec![false; items.len()], &mut Vec::new(), k, f)
}

/// Products of disjoint `m`-cycles covering `rem`, each cycle led by its
/// smallest point. Calls `f` on each; stops when `f` returns true.
fn cycle_products(rem: &[usize], m: usize, perm: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    let Some((&a, rest)) = rem.split_first() else {
        return f(perm);
    };
    arrangements(rest, m - 1, &mut |tail| {
        let remaining: Vec<usize> = rest.iter().copied().filter(|x| !tail.contains(x)).collect();
        let cyc: Vec<usize> = std::iter::once(a).chain(tail.iter().copied()).collect();
        for i in 0..m {
            perm[cyc[i]] = cyc[(i + 1) % m];
        }
        cycle_products(&remaining, m, perm, f)
    })
}

/// First transitive homomorphism `Δ(l,m,n) → S_degree` (right action) in
/// which every generator acts freely. The image of `a` is fixed as the
/// product of consecutive `l`-cycles; images of `b` are enumerated as
/// canonical products of `m`-cycles.
pub fn find_triangle_permutations(l: usize, m: usize, n: usize, degree: usize) -> Result<[Vec<usize>; 3]> {
    if l == 0 || m == 0 || n == 0 || degree % l != 0 || degree % m != 0 || degree % n != 0 {
        return Err(Error::Precondition(format!("degree {degree} must be divisible by {l}, {m} and {n}")));
    }
    let alpha: Vec<usize> = (0..degree).map(|x| x - x % l + (x % l + 1) % l).collect();
    let points: Vec<usize> = (0..degree).collect();
    let mut found = None;
    let mut perm = vec![0; degree];
    cycle_products(&points, m, &mut perm, &mut |beta| {
        let gamma = invert(&compose(&alpha, beta));
        if cycle_type(&gamma).iter().all(|&c| c == n) && transitive(&[&alpha, beta], degree) {
            found = Some([alpha.clone(), beta.to_vec(), gamma]);
            true
        } else {
            false
        }
    });
    found.ok_or_else(|| Error::NotFoundWithinBound(format!("no free action of Δ({l},{m},{n}) on {degree} points")))
}

/// Genus-2 generating words `(a1, b1, a2, b2)` in the triangle generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceTuple {
    pub a1: Word,
    pub b1: Word,
    pub a2: Word,
    pub b2: Word,
}

impl SurfaceTuple {
    pub fn words(&self) -> [Word; 4] {
        [self.a1.clone(), self.b1.clone(), self.a2.clone(), self.b2.clone()]
    }

    pub fn total_length(&self) -> usize {
        self.words().iter().map(Word::len).sum()
    }
}

/// Images of generators together with their inverses, indexed by letter code.
pub fn letter_images(rep: &[NfMatrix]) -> Result<Vec<NfMatrix>> {
    let mut out = Vec::with_capacity(2 * rep.len());
    for m in rep {
        out.push(m.clone());
        out.push(m.inverse()?);
    }
    Ok(out)
}

pub fn eval_word(w: &Word, images: &[NfMatrix]) -> NfMatrix {
    let n = images.first().map_or(0, |m| m.rows());
    w.letters().iter().fold(Matrix::identity(n), |acc, l| &acc * &images[l.0])
}

fn field_degree(images: &[NfMatrix]) -> usize {
    images
        .iter()
        .flat_map(|m| m.entries().iter())
        .find_map(|e| e.field().map(|k| k.degree()))
        .unwrap_or(1)
}

/// Coordinates of a matrix up to overall sign.
fn projective_key(m: &NfMatrix, d: usize) -> Vec<BigRational> {
    let mut flat: Vec<BigRational> = m.entries().iter().flat_map(|e| e.coords(d)).collect();
    if flat.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
        for c in flat.iter_mut() {
            *c = -c.clone();
        }
    }
    flat
}

fn is_plus_minus_identity(m: &NfMatrix) -> bool {
    m.is_identity() || (-m).is_identity()
}

/// Search for four subgroup words of length at most `length_bound` that
/// satisfy the genus-2 relator projectively and generate the subgroup of
/// `table`. Candidates are tried by total length, then lexicographically.
pub fn find_surface_tuple(p: &Presentation, table: &CosetTable, rep: &[NfMatrix], length_bound: usize) -> Result<SurfaceTuple> {
    if rep.len() != p.num_generators() {
        return Err(Error::SizeMismatch(format!("{} generator images for {} generators", rep.len(), p.num_generators())));
    }
    let images = letter_images(rep)?;
    let d = field_degree(&images);
    let n = rep[0].rows();
    let id_key = projective_key(&Matrix::identity(n), d);

    // Breadth-first enumeration of group elements up to sign; keep those in the subgroup.
    let mut seen: HashSet<Vec<BigRational>> = HashSet::new();
    seen.insert(id_key.clone());
    let mut frontier: Vec<(Vec<usize>, NfMatrix, usize)> = vec![(Vec::new(), Matrix::identity(n), 0)];
    let mut members: Vec<(Vec<usize>, NfMatrix)> = Vec::new();
    for _ in 0..length_bound {
        let mut next = Vec::new();
        for (w, x, pt) in &frontier {
            for l in 0..images.len() {
                if w.last().is_some_and(|&last| last == l ^ 1) {
                    continue;
                }
                let y = x * &images[l];
                let k = projective_key(&y, d);
                if seen.contains(&k) {
                    continue;
                }
                seen.insert(k);
                let mut w2 = w.clone();
                w2.push(l);
                let p2 = table.rows[*pt][l];
                if p2 == 0 {
                    members.push((w2.clone(), y.clone()));
                }
                next.push((w2, y, p2));
            }
        }
        frontier = next;
    }

    // [x,y] = [u,v]⁻¹ = [v,u] up to sign gives a relator solution.
    let inverses: Vec<NfMatrix> = members.iter().map(|(_, m)| m.inverse()).collect::<Result<_>>()?;
    let mut by_key: HashMap<Vec<BigRational>, Vec<(usize, usize)>> = HashMap::new();
    let mut key_order: Vec<Vec<BigRational>> = Vec::new();
    for i in 0..members.len() {
        for j in 0..members.len() {
            if i == j {
                continue;
            }
            let c = &(&(&members[i].1 * &members[j].1) * &inverses[i]) * &inverses[j];
            let k = projective_key(&c, d);
            if k == id_key {
                continue;
            }
            by_key
                .entry(k.clone())
                .or_insert_with(|| {
                    key_order.push(k);
                    Vec::new()
                })
                .push((i, j));
        }
    }
    let mut candidates: Vec<(usize, [Vec<usize>; 4])> = Vec::new();
    for k in &key_order {
        let pairs = &by_key[k];
        if pairs.len() < 2 {
            continue;
        }
        for &(i, j) in pairs {
            for &(kk, ll) in pairs {
                let t = [members[i].0.clone(), members[j].0.clone(), members[ll].0.clone(), members[kk].0.clone()];
                let total = t.iter().map(Vec::len).sum();
                candidates.push((total, t));
            }
        }
    }
    candidates.sort();
    candidates.dedup();

    for (_, t) in candidates {
        let words: Vec<Word> = t.iter().map(|c| Word::from_codes(c)).collect();
        let tuple = SurfaceTuple { a1: words[0].clone(), b1: words[1].clone(), a2: words[2].clone(), b2: words[3].clone() };
        match todd_coxeter(p, &words, 2000) {
            Ok(sub) if sub.index() == table.index() => {
                if verify_surface_tuple(table, &images, &tuple) {
                    return Ok(tuple);
                }
            }
            Ok(_) | Err(Error::Overflow(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Err(Error::NotFoundWithinBound(format!("no surface tuple with words of length ≤ {length_bound}")))
}

/// Membership of every word and the projective relator identity.
pub fn verify_surface_tuple(table: &CosetTable, images: &[NfMatrix], t: &SurfaceTuple) -> bool {
    if !t.words().iter().all(|w| table.contains(w)) {
        return false;
    }
    let rel = Word::commutator(&t.a1, &t.b1).mul(&Word::commutator(&t.a2, &t.b2));
    is_plus_minus_identity(&eval_word(&rel, images))
}

/// Exact relator check: the product of commutators is `+I`.
pub fn relator_is_identity(images: &[NfMatrix], t: &SurfaceTuple) -> bool {
    let rel = Word::commutator(&t.a1, &t.b1).mul(&Word::commutator(&t.a2, &t.b2));
    eval_word(&rel, images).is_identity()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfgrp::coset::torsion_free_check;

    #[test]
    fn delta344_permutations() {
        let [a, b, c] = find_triangle_permutations(3, 4, 4, 12).unwrap();
        assert_eq!(a, vec![1, 2, 0, 4, 5, 3, 7, 8, 6, 10, 11, 9]);
        assert_eq!(b, vec![1, 3, 5, 6, 10, 9, 0, 2, 4, 7, 11, 8]);
        assert_eq!(c, vec![8, 2, 6, 0, 7, 1, 5, 11, 10, 4, 3, 9]);
        let t = CosetTable::from_permutations(&[a, b, c]);
        assert!(torsion_free_check(&t, &[3, 4, 4]));
        let p = Presentation::triangle(3, 4, 4);
        assert!(p.relators.iter().all(|r| (0..12).all(|x| t.act_word(x, r) == x)));
    }

    #[test]
    fn bad_degree() {
        assert!(matches!(find_triangle_permutations(3, 4, 4, 10), Err(Error::Precondition(_))));
    }
}
