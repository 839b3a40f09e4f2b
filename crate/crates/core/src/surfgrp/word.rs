use std::fmt;

use serde::{Deserialize, Serialize};

/// A generator or its inverse, encoded as `2·gen + (inverse as usize)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(pub usize);

impl Letter {
    pub fn new(gen: usize, exp: i8) -> Self {
        debug_assert!(exp == 1 || exp == -1);
        Letter(2 * gen + usize::from(exp < 0))
    }

    pub fn gen(self) -> usize {
        self.0 / 2
    }

    pub fn exp(self) -> i8 {
        if self.0 % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_inverse(self) -> bool {
        self.0 % 2 == 1
    }

    pub fn inv(self) -> Letter {
        Letter(self.0 ^ 1)
    }
}

/// Freely reduced word in the generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// Build from letters, freely reducing.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn from_codes(codes: &[usize]) -> Self {
        Word::new(codes.iter().map(|&c| Letter(c)))
    }

    pub fn from_pairs(pairs: &[(usize, i8)]) -> Self {
        Word::new(pairs.iter().map(|&(g, e)| Letter::new(g, e)))
    }

    pub fn gen(g: usize) -> Self {
        Word(vec![Letter::new(g, 1)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn codes(&self) -> Vec<usize> {
        self.0.iter().map(|l| l.0).collect()
    }

    pub fn pairs(&self) -> Vec<(usize, i8)> {
        self.0.iter().map(|l| (l.gen(), l.exp())).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn mul(&self, o: &Word) -> Self {
        Word::new(self.0.iter().chain(o.0.iter()).copied())
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Word::identity(), |acc, _| acc.mul(self))
    }

    /// `x y x⁻¹ y⁻¹`.
    pub fn commutator(x: &Word, y: &Word) -> Self {
        x.mul(y).mul(&x.inverse()).mul(&y.inverse())
    }

    /// Cyclically reduced form (strips matching ends).
    pub fn cyclic_reduce(&self) -> Self {
        let mut v = self.0.clone();
        while v.len() >= 2 && v[0] == v[v.len() - 1].inv() {
            v.pop();
            v.remove(0);
        }
        Word(v)
    }

    /// True if `self` equals a cyclic rotation of `other` (both cyclically reduced).
    pub fn is_rotation_of(&self, other: &Word) -> bool {
        let a = self.cyclic_reduce();
        let b = other.cyclic_reduce();
        if a.len() != b.len() {
            return false;
        }
        if a.is_empty() {
            return true;
        }
        (0..b.len()).any(|k| a.0.iter().zip(b.0[k..].iter().chain(&b.0[..k])).all(|(x, y)| x == y))
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|l| if l.is_inverse() { format!("{}^-1", names[l.gen()]) } else { names[l.gen()].clone() })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|l| format!("{}{}", l.gen(), if l.is_inverse() { "'" } else { "" })).collect();
        write!(f, "[{}]", s.join(" "))
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.pairs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs: Vec<(usize, i8)> = Vec::deserialize(d)?;
        if pairs.iter().any(|&(_, e)| e != 1 && e != -1) {
            return Err(serde::de::Error::custom("exponents must be ±1"));
        }
        Ok(Word::from_pairs(&pairs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_reduction() {
        let w = Word::from_codes(&[0, 2, 3, 1, 4]);
        assert_eq!(w, Word::from_codes(&[4]));
        assert!(w.mul(&w.inverse()).is_empty());
    }

    #[test]
    fn commutator_and_rotation() {
        let a = Word::gen(0);
        let b = Word::gen(1);
        let c = Word::commutator(&a, &b);
        assert_eq!(c.codes(), vec![0, 2, 1, 3]);
        let rot = Word::from_codes(&[2, 1, 3, 0]);
        assert!(rot.is_rotation_of(&c));
        assert!(!c.inverse().is_rotation_of(&c));
    }

    #[test]
    fn serde_pairs() {
        let w = Word::from_pairs(&[(0, 1), (1, -1)]);
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, "[[0,1],[1,-1]]");
        assert_eq!(serde_json::from_str::<Word>(&s).unwrap(), w);
    }
}
