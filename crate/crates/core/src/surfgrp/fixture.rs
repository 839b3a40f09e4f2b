//! Shipped torsion-free index-12 subgroup of Δ(3,4,4) with a genus-2 tuple.

use serde::{Deserialize, Serialize};

use super::coset::{todd_coxeter, torsion_free_check, CosetTable};
use super::search::{letter_images, relator_is_identity, verify_surface_tuple, SurfaceTuple};
use super::Presentation;
use crate::error::{Error, Result};
use crate::NfMatrix;

const DELTA344_INDEX12: &str = include_str!("../../fixtures/delta344_index12.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceSubgroupFixture {
    pub presentation: Presentation,
    pub permutations: Vec<Vec<usize>>,
    pub tuple: SurfaceTuple,
}

impl SurfaceSubgroupFixture {
    pub fn delta344() -> Result<Self> {
        Ok(serde_json::from_str(DELTA344_INDEX12)?)
    }

    pub fn table(&self) -> CosetTable {
        CosetTable::from_permutations(&self.permutations)
    }

    /// Re-check everything against generator images of the triangle group:
    /// the permutations satisfy the relators and act freely, the tuple lies
    /// in the subgroup, generates it, and satisfies the surface relator
    /// exactly.
    pub fn verify(&self, rep: &[NfMatrix]) -> Result<()> {
        let table = self.table();
        let n = table.index();
        for r in &self.presentation.relators {
            if (0..n).any(|x| table.act_word(x, r) != x) {
                return Err(Error::RelatorBroken(format!("permutations violate relator {r}")));
            }
        }
        let orders: Vec<usize> = self
            .presentation
            .relators
            .iter()
            .filter_map(|r| {
                let g = r.letters().first()?.gen();
                r.letters().iter().all(|l| l.gen() == g && !l.is_inverse()).then_some((g, r.len()))
            })
            .fold(vec![1; self.presentation.num_generators()], |mut acc, (g, o)| {
                acc[g] = o;
                acc
            });
        if !torsion_free_check(&table, &orders) {
            return Err(Error::Precondition("subgroup is not torsion-free".into()));
        }
        let sub = todd_coxeter(&self.presentation, &self.tuple.words(), 2000)?;
        if sub.index() != n {
            return Err(Error::Precondition(format!("tuple generates a subgroup of index {}", sub.index())));
        }
        let images = letter_images(rep)?;
        if !verify_surface_tuple(&table, &images, &self.tuple) || !relator_is_identity(&images, &self.tuple) {
            return Err(Error::RelatorBroken("surface relator fails on the tuple".into()));
        }
        Ok(())
    }
}
