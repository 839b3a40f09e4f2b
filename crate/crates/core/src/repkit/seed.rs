use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::SurfaceRep;
use crate::error::{Error, Result};
use crate::exactmat::Matrix;
use crate::nfield::{NfElement, NumberField};
use crate::polyring::{count_real_roots, has_distinct_absolute_values};
use crate::surfgrp::{eval_word, letter_images, SurfaceSubgroupFixture, Word};
use crate::scalar::Ring;
use crate::NfMatrix;

/// The hyperbolic (3,4,4) triangle matrices over `ℚ(√2)`, in the order
/// `(α, β, γ)`.
pub fn triangle_seed() -> [NfMatrix; 3] {
    let k = NumberField::q_sqrt2();
    let e = |a: i64, b: i64| k.element(&[a, b]);
    let alpha = Matrix::from_rows(vec![vec![e(0, 0), e(-1, 0)], vec![e(1, 0), e(1, 0)]]);
    let beta = Matrix::from_rows(vec![vec![e(0, 0), e(-1, -1)], vec![e(-1, 1), e(0, 1)]]);
    let gamma = Matrix::from_rows(vec![vec![e(1, -1), e(0, -1)], vec![e(-1, 1), e(-1, 0)]]);
    [alpha, beta, gamma]
}

/// Images of the triangle-group generators `a, b, c` with `abc = 1`.
/// The seed satisfies `ρ(α)ρ(β) = ρ(γ)`, so `c` goes to `ρ(γ)⁻¹`.
pub fn triangle_images() -> Result<[NfMatrix; 3]> {
    let [a, b, c] = triangle_seed();
    Ok([a, b, c.inverse()?])
}

/// Exact checks on the seed matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRelations {
    pub alpha_cubed_minus_identity: bool,
    pub beta_fourth_minus_identity: bool,
    pub gamma_fourth_minus_identity: bool,
    pub determinants_one: bool,
    /// `ρ(α)ρ(β)ρ(γ) = ±I`, taken literally.
    pub triple_product_pm_identity: bool,
    /// `ρ(α)ρ(β)ρ(γ)⁻¹ = I`.
    pub triple_product_with_inverse_identity: bool,
}

impl SeedRelations {
    pub fn literal_holds(&self) -> bool {
        self.alpha_cubed_minus_identity
            && self.beta_fourth_minus_identity
            && self.gamma_fourth_minus_identity
            && self.triple_product_pm_identity
    }
}

pub fn seed_relations() -> Result<SeedRelations> {
    let [a, b, c] = triangle_seed();
    let minus_id = |m: &NfMatrix| (-m).is_identity();
    let abc = &(&a * &b) * &c;
    let abc_inv = &(&a * &b) * &c.inverse()?;
    Ok(SeedRelations {
        alpha_cubed_minus_identity: minus_id(&a.pow(3)),
        beta_fourth_minus_identity: minus_id(&b.pow(4)),
        gamma_fourth_minus_identity: minus_id(&c.pow(4)),
        determinants_one: [&a, &b, &c].iter().all(|m| m.det().is_one()),
        triple_product_pm_identity: abc.is_identity() || minus_id(&abc),
        triple_product_with_inverse_identity: abc_inv.is_identity(),
    })
}

/// Genus-2 surface representation obtained by restricting the triangle
/// representation to the shipped index-12 subgroup.
pub fn genus2_seed() -> Result<SurfaceRep> {
    let fixture = SurfaceSubgroupFixture::delta344()?;
    let images = triangle_images()?;
    fixture.verify(&images)?;
    let letters = letter_images(&images)?;
    let gens = fixture.tuple.words().iter().map(|w| eval_word(w, &letters)).collect();
    let mut rep = SurfaceRep::new(2, NumberField::q_sqrt2(), gens)?;
    rep.push_provenance(
        "genus2_seed",
        serde_json::to_value(&fixture.tuple)?,
        String::new(),
    );
    Ok(rep)
}

fn binomial_row(k: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for i in 0..k {
        let next = &row[i] * BigInt::from(k - i) / BigInt::from(i + 1);
        row.push(next);
    }
    row
}

/// Coefficients of `(p x + q y)^k` on `x^{k-m} y^m`.
fn linear_power(p: &NfElement, q: &NfElement, k: usize) -> Vec<NfElement> {
    let binom = binomial_row(k);
    (0..=k)
        .map(|m| NfElement::from_integer(binom[m].clone()) * p.pow_u((k - m) as u64) * q.pow_u(m as u64))
        .collect()
}

fn convolve(a: &[NfElement], b: &[NfElement]) -> Vec<NfElement> {
    let mut out = vec![NfElement::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

/// Action of a 2×2 matrix on binary forms of degree `n − 1`, basis
/// `x^{n−1−i} y^i`. Row `i` holds the image of the `i`-th monomial under
/// `x ↦ ax + by`, `y ↦ cx + dy`.
pub fn tau_n(m: &NfMatrix, n: usize) -> Result<NfMatrix> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::SizeMismatch("tau_n expects a 2×2 matrix".into()));
    }
    if n == 0 {
        return Err(Error::Precondition("dimension must be positive".into()));
    }
    if !m.det().is_one() {
        return Err(Error::Precondition("tau_n expects determinant 1".into()));
    }
    let (a, b, c, d) = (m[(0, 0)].clone(), m[(0, 1)].clone(), m[(1, 0)].clone(), m[(1, 1)].clone());
    let rows = (0..n)
        .map(|i| convolve(&linear_power(&a, &b, n - 1 - i), &linear_power(&c, &d, i)))
        .collect();
    Ok(Matrix::from_rows(rows))
}

/// `τₙ ∘ ρ` for a 2-dimensional surface representation.
pub fn tau_n_rep(rep: &SurfaceRep, n: usize) -> Result<SurfaceRep> {
    let gens = rep.generators.iter().map(|g| tau_n(g, n)).collect::<Result<Vec<_>>>()?;
    let mut out = SurfaceRep::new(rep.genus, rep.field.clone(), gens)?;
    out.provenance = rep.provenance.clone();
    out.push_provenance("tau_n", serde_json::json!({ "n": n }), rep.content_hash());
    Ok(out)
}

/// Multiply each generator image by a sign.
pub fn twist_by_character(rep: &SurfaceRep, signs: &[i8]) -> Result<SurfaceRep> {
    if signs.len() != rep.generators.len() || signs.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::SizeMismatch(format!("expected {} signs in {{±1}}", rep.generators.len())));
    }
    if rep.n % 2 == 1 && signs.contains(&-1) {
        return Err(Error::OddDimensionSignFlip);
    }
    let gens = rep
        .generators
        .iter()
        .zip(signs)
        .map(|(g, &s)| if s < 0 { -g } else { g.clone() })
        .collect();
    let mut out = SurfaceRep::new(rep.genus, rep.field.clone(), gens)?;
    out.provenance = rep.provenance.clone();
    out.push_provenance("twist_by_character", serde_json::json!({ "signs": signs }), rep.content_hash());
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum LoxodromyReport {
    Pass { words_checked: usize },
    Violation { word: Word },
}

/// Freely reduced nonempty words up to `bound`, ordered by length then
/// letter code.
pub fn reduced_words(num_generators: usize, bound: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..bound {
        let mut next = Vec::new();
        for w in &layer {
            for l in 0..2 * num_generators {
                if w.last().is_some_and(|&x| x == l ^ 1) {
                    continue;
                }
                let mut w2 = w.clone();
                w2.push(l);
                next.push(w2);
            }
        }
        out.extend(next.iter().map(|w| Word::from_codes(w)));
        layer = next;
    }
    out
}

/// Spot check that every reduced word up to the bound has real spectrum with
/// distinct absolute values.
pub fn loxodromy_check_images(gens: &[NfMatrix], word_length_bound: usize) -> Result<LoxodromyReport> {
    let letters = letter_images(gens)?;
    let words = reduced_words(gens.len(), word_length_bound);
    for w in &words {
        let f = eval_word(w, &letters).charpoly();
        let ok = count_real_roots(&f) == f.deg() && has_distinct_absolute_values(&f).unwrap_or(false);
        if !ok {
            return Ok(LoxodromyReport::Violation { word: w.clone() });
        }
    }
    Ok(LoxodromyReport::Pass { words_checked: words.len() })
}

pub fn loxodromy_check(rep: &SurfaceRep, word_length_bound: usize) -> Result<LoxodromyReport> {
    loxodromy_check_images(&rep.generators, word_length_bound)
}
