//! Cutting a closed surface group along the curve `a1`.

use serde::{Deserialize, Serialize};

use super::{surface_relator, Word};
use crate::error::{Error, Result};

/// The surface group as an HNN extension of the cut surface group, with
/// stable letter `b1` conjugating `a1` onto `[a2,b2]···[ag,bg]·a1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HnnSplitting {
    pub genus: usize,
    pub curve: Word,
    pub stable_letter: Word,
    pub boundary_plus: Word,
    pub boundary_minus: Word,
    pub cut_generators: Vec<Word>,
}

impl HnnSplitting {
    pub fn new(genus: usize) -> Result<Self> {
        if genus < 2 {
            return Err(Error::Precondition(format!("genus {genus} < 2")));
        }
        let a1 = Word::gen(0);
        let tail = (1..genus).fold(Word::identity(), |acc, i| {
            acc.mul(&Word::commutator(&Word::gen(2 * i), &Word::gen(2 * i + 1)))
        });
        let mut cut = vec![a1.clone()];
        cut.extend((2..2 * genus).map(Word::gen));
        let s = HnnSplitting {
            genus,
            curve: a1.clone(),
            stable_letter: Word::gen(1),
            boundary_plus: tail.mul(&a1),
            boundary_minus: a1,
            cut_generators: cut,
        };
        s.verify()?;
        Ok(s)
    }

    /// `t·γ₂·t⁻¹·γ₁⁻¹` must be a cyclic rotation of the surface relator or
    /// its inverse.
    pub fn verify(&self) -> Result<()> {
        let w = self
            .stable_letter
            .mul(&self.boundary_minus)
            .mul(&self.stable_letter.inverse())
            .mul(&self.boundary_plus.inverse());
        let r = surface_relator(self.genus);
        if w.is_rotation_of(&r) || w.is_rotation_of(&r.inverse()) {
            Ok(())
        } else {
            Err(Error::RelatorBroken(format!("HNN relation {w} is not a consequence of the relator")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnn_relation_holds() {
        for g in 2..5 {
            let s = HnnSplitting::new(g).unwrap();
            assert_eq!(s.cut_generators.len(), 2 * g - 1);
        }
        assert!(HnnSplitting::new(1).is_err());
        let mut bad = HnnSplitting::new(2).unwrap();
        bad.boundary_plus = Word::gen(0);
        assert!(bad.verify().is_err());
    }
}
