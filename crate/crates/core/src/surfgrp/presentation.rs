use serde::{Deserialize, Serialize};

use super::Word;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Self {
        let relators = relators.into_iter().map(|r| r.cyclic_reduce()).collect();
        Presentation { generators, relators }
    }

    /// Closed orientable surface of genus `g`: generators `a1, b1, ..., ag, bg`
    /// with the single relator `[a1,b1]···[ag,bg]`.
    pub fn surface(g: usize) -> Self {
        let mut names = Vec::new();
        for i in 1..=g {
            names.push(format!("a{i}"));
            names.push(format!("b{i}"));
        }
        Presentation::new(names, vec![surface_relator(g)])
    }

    /// Triangle group `⟨a, b, c | a^l, b^m, c^n, abc⟩`.
    pub fn triangle(l: usize, m: usize, n: usize) -> Self {
        let a = Word::gen(0);
        let b = Word::gen(1);
        let c = Word::gen(2);
        let abc = a.mul(&b).mul(&c);
        Presentation::new(vec!["a".into(), "b".into(), "c".into()], vec![a.pow(l), b.pow(m), c.pow(n), abc])
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }
}

/// `[a1,b1]···[ag,bg]` with `a_i = 2(i-1)`, `b_i = 2(i-1)+1`.
pub fn surface_relator(g: usize) -> Word {
    (0..g).fold(Word::identity(), |acc, i| {
        acc.mul(&Word::commutator(&Word::gen(2 * i), &Word::gen(2 * i + 1)))
    })
}

/// Orbifold Euler characteristic of the sphere with cone points of orders
/// `l, m, n`, as an exact fraction `(numerator, denominator)`.
pub fn triangle_orbifold_euler(l: i64, m: i64, n: i64) -> num_rational::Ratio<i64> {
    use num_rational::Ratio;
    Ratio::from_integer(2) - (Ratio::new(l - 1, l) + Ratio::new(m - 1, m) + Ratio::new(n - 1, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    #[test]
    fn euler_bookkeeping() {
        let chi = triangle_orbifold_euler(3, 4, 4);
        assert_eq!(chi, Ratio::new(-1, 6));
        assert_eq!(chi * 12, Ratio::from_integer(2 - 2 * 2));
    }

    #[test]
    fn surface_presentation() {
        let p = Presentation::surface(2);
        assert_eq!(p.generators, vec!["a1", "b1", "a2", "b2"]);
        assert_eq!(p.relators[0].len(), 8);
    }
}
