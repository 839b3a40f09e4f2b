//! Coset enumeration (HLT strategy with a coincidence queue) and
//! Reidemeister–Schreier rewriting.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{Letter, Presentation, Word};
use crate::error::{Error, Result};

/// Complete coset table: `rows[c][letter]` is the coset `c·letter` under the
/// right action. Coset 0 is the subgroup itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetTable {
    pub num_generators: usize,
    pub rows: Vec<Vec<usize>>,
}

impl CosetTable {
    /// Table of the point stabilizer of 0 from permutations acting on the right.
    pub fn from_permutations(perms: &[Vec<usize>]) -> Self {
        let n = perms.first().map_or(1, |p| p.len());
        let mut rows = vec![vec![0; 2 * perms.len()]; n];
        for (g, p) in perms.iter().enumerate() {
            for (x, &y) in p.iter().enumerate() {
                rows[x][2 * g] = y;
                rows[y][2 * g + 1] = x;
            }
        }
        CosetTable { num_generators: perms.len(), rows }
    }

    pub fn index(&self) -> usize {
        self.rows.len()
    }

    pub fn act(&self, c: usize, l: Letter) -> usize {
        self.rows[c][l.0]
    }

    pub fn act_word(&self, c: usize, w: &Word) -> usize {
        w.letters().iter().fold(c, |acc, &l| self.act(acc, l))
    }

    /// Coset-table membership: `w` fixes the subgroup coset.
    pub fn contains(&self, w: &Word) -> bool {
        self.act_word(0, w) == 0
    }

    pub fn permutation(&self, g: usize) -> Vec<usize> {
        self.rows.iter().map(|r| r[2 * g]).collect()
    }

    /// Cycle lengths of the permutation induced by generator `g`.
    pub fn cycle_type(&self, g: usize) -> Vec<usize> {
        cycle_type(&self.permutation(g))
    }

    /// Breadth-first Schreier transversal: `reps[c]` maps coset 0 to `c`.
    pub fn transversal(&self) -> Vec<Word> {
        let n = self.index();
        let mut reps: Vec<Option<Word>> = vec![None; n];
        reps[0] = Some(Word::identity());
        let mut queue = VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            for l in 0..2 * self.num_generators {
                let d = self.rows[c][l];
                if reps[d].is_none() {
                    reps[d] = Some(reps[c].as_ref().unwrap().mul(&Word::from_codes(&[l])));
                    queue.push_back(d);
                }
            }
        }
        reps.into_iter().map(|r| r.expect("table is transitive")).collect()
    }
}

pub fn cycle_type(p: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for i in 0..p.len() {
        if seen[i] {
            continue;
        }
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = p[j];
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable();
    out
}

struct Enumerator {
    cols: usize,
    table: Vec<Vec<Option<usize>>>,
    parent: Vec<usize>,
    max_cosets: usize,
}

impl Enumerator {
    fn rep(&self, mut c: usize) -> usize {
        while self.parent[c] != c {
            c = self.parent[c];
        }
        c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<()> {
        if self.table.len() >= self.max_cosets {
            return Err(Error::Overflow(self.max_cosets));
        }
        let d = self.table.len();
        self.table.push(vec![None; self.cols]);
        self.parent.push(d);
        self.table[c][x] = Some(d);
        self.table[d][x ^ 1] = Some(c);
        Ok(())
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut VecDeque<usize>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.parent[hi] = lo;
            queue.push_back(hi);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = VecDeque::new();
        self.merge(a, b, &mut queue);
        while let Some(e) = queue.pop_front() {
            for x in 0..self.cols {
                let Some(f) = self.table[e][x] else { continue };
                self.table[f][x ^ 1] = None;
                let (e1, f1) = (self.rep(e), self.rep(f));
                if let Some(g) = self.table[e1][x] {
                    self.merge(f1, g, &mut queue);
                } else if let Some(g) = self.table[f1][x ^ 1] {
                    self.merge(e1, g, &mut queue);
                } else {
                    self.table[e1][x] = Some(f1);
                    self.table[f1][x ^ 1] = Some(e1);
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<()> {
        if w.is_empty() {
            return Ok(());
        }
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = w.len() as isize - 1;
        loop {
            while (i as isize) <= j {
                match self.table[f][w[i]] {
                    Some(n) => {
                        f = n;
                        i += 1;
                    }
                    None => break,
                }
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize {
                match self.table[b][w[j as usize] ^ 1] {
                    Some(n) => {
                        b = n;
                        j -= 1;
                    }
                    None => break,
                }
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            } else if j == i as isize {
                self.table[f][w[i]] = Some(b);
                self.table[b][w[i] ^ 1] = Some(f);
                return Ok(());
            } else {
                self.define(f, w[i])?;
            }
        }
    }
}

/// Enumerate the cosets of the subgroup generated by `subgroup_gens`.
pub fn todd_coxeter(p: &Presentation, subgroup_gens: &[Word], max_cosets: usize) -> Result<CosetTable> {
    if max_cosets == 0 {
        return Err(Error::Precondition("max_cosets must be at least 1".into()));
    }
    let cols = 2 * p.num_generators();
    let mut en = Enumerator { cols, table: vec![vec![None; cols]], parent: vec![0], max_cosets };
    let rels: Vec<Vec<usize>> = p.relators.iter().map(|r| r.codes()).collect();
    for w in subgroup_gens {
        en.scan_and_fill(0, &w.codes())?;
    }
    let mut c = 0;
    while c < en.table.len() {
        if en.parent[c] == c {
            for r in &rels {
                if en.parent[c] != c {
                    break;
                }
                en.scan_and_fill(c, r)?;
            }
            if en.parent[c] == c {
                for x in 0..cols {
                    if en.table[c][x].is_none() {
                        en.define(c, x)?;
                    }
                }
            }
        }
        c += 1;
    }
    // Compact the live cosets in order of definition.
    let live: Vec<usize> = (0..en.table.len()).filter(|&c| en.parent[c] == c).collect();
    let mut index_of = vec![usize::MAX; en.table.len()];
    for (i, &c) in live.iter().enumerate() {
        index_of[c] = i;
    }
    let rows = live
        .iter()
        .map(|&c| {
            (0..cols)
                .map(|x| {
                    let d = en.table[c][x].expect("complete table");
                    index_of[en.rep(d)]
                })
                .collect()
        })
        .collect();
    Ok(CosetTable { num_generators: p.num_generators(), rows })
}

/// Every elliptic generator acts with all cycles of full length `orders[g]`,
/// so no conjugate of a torsion element fixes a coset.
pub fn torsion_free_check(table: &CosetTable, orders: &[usize]) -> bool {
    orders.iter().enumerate().all(|(g, &o)| table.cycle_type(g).iter().all(|&len| len == o))
}

/// Nontrivial Schreier generators `t_c · x · t_{c·x}⁻¹`, ordered by coset then
/// generator. Their number is `index·(k − 1) + 1` for `k` generators.
pub fn schreier_generators(table: &CosetTable) -> Vec<Word> {
    schreier_symbols(table).into_iter().map(|s| s.word).collect()
}

struct SchreierSymbol {
    coset: usize,
    gen: usize,
    word: Word,
}

fn schreier_symbols(table: &CosetTable) -> Vec<SchreierSymbol> {
    let reps = table.transversal();
    let mut out = Vec::new();
    for c in 0..table.index() {
        for g in 0..table.num_generators {
            let d = table.rows[c][2 * g];
            let w = reps[c].mul(&Word::gen(g)).mul(&reps[d].inverse());
            if !w.is_empty() {
                out.push(SchreierSymbol { coset: c, gen: g, word: w });
            }
        }
    }
    out
}

/// Presentation of the subgroup on Schreier generators after Tietze
/// elimination. Relators use signed 1-based indices into `generators`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupPresentation {
    pub generators: Vec<Word>,
    pub relators: Vec<Vec<i64>>,
    pub raw_generator_count: usize,
}

fn reduce_signed(v: &[i64]) -> Vec<i64> {
    let mut out: Vec<i64> = Vec::new();
    for &x in v {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    while out.len() >= 2 && out[0] == -out[out.len() - 1] {
        out.pop();
        out.remove(0);
    }
    out
}

/// Reidemeister–Schreier rewriting followed by greedy Tietze elimination of
/// generators that are trivial or occur exactly once in some relator.
pub fn reidemeister_schreier(table: &CosetTable, p: &Presentation) -> SubgroupPresentation {
    let symbols = schreier_symbols(table);
    let raw = symbols.len();
    let sym_of = |c: usize, g: usize| symbols.iter().position(|s| s.coset == c && s.gen == g);
    let mut relators: Vec<Vec<i64>> = Vec::new();
    for r in &p.relators {
        for c0 in 0..table.index() {
            let mut c = c0;
            let mut out = Vec::new();
            for &l in r.letters() {
                if l.is_inverse() {
                    let d = table.act(c, l);
                    if let Some(s) = sym_of(d, l.gen()) {
                        out.push(-(s as i64 + 1));
                    }
                    c = d;
                } else {
                    if let Some(s) = sym_of(c, l.gen()) {
                        out.push(s as i64 + 1);
                    }
                    c = table.act(c, l);
                }
            }
            relators.push(out);
        }
    }
    let mut alive = vec![true; raw];
    loop {
        relators = relators.iter().map(|r| reduce_signed(r)).filter(|r| !r.is_empty()).collect();
        relators.sort_by_key(|r| (r.len(), r.clone()));
        relators.dedup();
        // A relator of length one kills its generator.
        if let Some(pos) = relators.iter().position(|r| r.len() == 1) {
            let s = relators[pos][0].abs();
            alive[(s - 1) as usize] = false;
            for r in relators.iter_mut() {
                r.retain(|&x| x.abs() != s);
            }
            continue;
        }
        // Shortest relator containing a generator exactly once.
        let mut chosen = None;
        'outer: for (ri, r) in relators.iter().enumerate() {
            for &x in r {
                if r.iter().filter(|&&y| y.abs() == x.abs()).count() == 1 {
                    chosen = Some((ri, x));
                    break 'outer;
                }
            }
        }
        let Some((ri, x)) = chosen else { break };
        let r = relators.remove(ri);
        let k = r.iter().position(|&y| y == x).unwrap();
        // Rotate so that x comes first: x·w = 1, hence x = w⁻¹.
        let w: Vec<i64> = r[k + 1..].iter().chain(&r[..k]).copied().collect();
        let w_inv: Vec<i64> = w.iter().rev().map(|&y| -y).collect();
        let (pos_sub, neg_sub) = if x > 0 { (w_inv, w) } else { (w, w_inv) };
        let s = x.abs();
        alive[(s - 1) as usize] = false;
        for rel in relators.iter_mut() {
            let mut out = Vec::new();
            for &y in rel.iter() {
                if y == s {
                    out.extend(&pos_sub);
                } else if y == -s {
                    out.extend(&neg_sub);
                } else {
                    out.push(y);
                }
            }
            *rel = out;
        }
    }
    // Renumber surviving generators.
    let mut new_index = vec![0i64; raw];
    let mut generators = Vec::new();
    for (i, s) in symbols.iter().enumerate() {
        if alive[i] {
            generators.push(s.word.clone());
            new_index[i] = generators.len() as i64;
        }
    }
    let relators = relators
        .into_iter()
        .map(|r| r.into_iter().map(|x| x.signum() * new_index[(x.abs() - 1) as usize]).collect())
        .collect();
    SubgroupPresentation { generators, relators, raw_generator_count: raw }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic3() -> Presentation {
        Presentation::new(vec!["a".into()], vec![Word::gen(0).pow(3)])
    }

    #[test]
    fn cyclic_group_cosets() {
        let t = todd_coxeter(&cyclic3(), &[], 100).unwrap();
        assert_eq!(t.index(), 3);
        assert!(torsion_free_check(&t, &[3]));
        assert_eq!(t.act_word(0, &Word::gen(0).pow(3)), 0);
    }

    #[test]
    fn overflow_and_trivial_index() {
        let d = Presentation::triangle(3, 4, 4);
        assert_eq!(todd_coxeter(&d, &[], 1), Err(Error::Overflow(1)));
        let whole = todd_coxeter(&d, &[Word::gen(0), Word::gen(1)], 10).unwrap();
        assert_eq!(whole.index(), 1);
        assert!(!torsion_free_check(&whole, &[3, 4, 4]));
    }

    #[test]
    fn symmetric_group_index() {
        // S3 = ⟨a, b | a^2, b^3, (ab)^2⟩, subgroup ⟨a⟩ has index 3.
        let a = Word::gen(0);
        let b = Word::gen(1);
        let p = Presentation::new(vec!["a".into(), "b".into()], vec![a.pow(2), b.pow(3), a.mul(&b).pow(2)]);
        assert_eq!(todd_coxeter(&p, &[a.clone()], 100).unwrap().index(), 3);
        assert_eq!(todd_coxeter(&p, &[], 100).unwrap().index(), 6);
    }

    #[test]
    fn schreier_examples() {
        let t = todd_coxeter(&cyclic3(), &[], 100).unwrap();
        assert_eq!(schreier_generators(&t).len(), 1);
        let sp = reidemeister_schreier(&t, &cyclic3());
        assert!(sp.generators.is_empty());

        let one = todd_coxeter(&cyclic3(), &[Word::gen(0)], 10).unwrap();
        assert_eq!(schreier_generators(&one), vec![Word::gen(0)]);
        let surf = Presentation::surface(2);
        let one = todd_coxeter(&surf, &(0..4).map(Word::gen).collect::<Vec<_>>(), 10).unwrap();
        let sp = reidemeister_schreier(&one, &surf);
        assert_eq!(sp.generators, (0..4).map(Word::gen).collect::<Vec<_>>());
    }

    #[test]
    fn from_permutations_matches_action() {
        let t = CosetTable::from_permutations(&[vec![1, 2, 0]]);
        assert_eq!(t.act(0, Letter(0)), 1);
        assert_eq!(t.act(0, Letter(1)), 2);
        assert_eq!(cycle_type(&t.permutation(0)), vec![3]);
    }
}
