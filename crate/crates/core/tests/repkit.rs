use num_bigint::BigInt;
use num_traits::One;
use zdense_core::exactmat::Matrix;
use zdense_core::nfield::{NfElement, NumberField};
use zdense_core::repkit::*;
use zdense_core::surfgrp::*;
use zdense_core::{Error, NfMatrix};

fn q(rows: &[&[i64]]) -> NfMatrix {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| NfElement::from_integer(x.into())).collect()).collect())
}

#[test]
fn seed_matrices() {
    let [a, b, _] = triangle_seed();
    assert_eq!(a, q(&[&[0, -1], &[1, 1]]));
    assert!(b.det().is_one());
    assert!((-a.pow(3)).is_identity());
    let rel = seed_relations().unwrap();
    assert!(rel.alpha_cubed_minus_identity && rel.beta_fourth_minus_identity && rel.gamma_fourth_minus_identity);
    assert!(rel.determinants_one);
    assert!(rel.triple_product_with_inverse_identity);
}

#[test]
fn fixture_verifies_and_seed_relator_exact() {
    let fx = SurfaceSubgroupFixture::delta344().unwrap();
    fx.verify(&triangle_images().unwrap()).unwrap();
    let rep = genus2_seed().unwrap();
    assert!(rep.relator_holds().unwrap());
    assert_eq!(rep.n, 2);
}

#[test]
fn tau_examples() {
    let u = q(&[&[1, 1], &[0, 1]]);
    assert_eq!(tau_n(&u, 3).unwrap(), q(&[&[1, 2, 1], &[0, 1, 1], &[0, 0, 1]]));
    assert_eq!(tau_n(&u, 2).unwrap(), u);
    let k = NumberField::q_sqrt2();
    let lam = k.element(&[1, 1]);
    let d = Matrix::diag(&[lam.clone(), lam.inv().unwrap()]);
    let t = tau_n(&d, 4).unwrap();
    let expect: Vec<NfElement> = [3i64, 1, -1, -3]
        .iter()
        .map(|&e| if e >= 0 { lam.pow_u(e as u64) } else { lam.inv().unwrap().pow_u((-e) as u64) })
        .collect();
    assert_eq!(t, Matrix::diag(&expect));
}

use zdense_core::scalar::Ring;

#[test]
fn twist_examples() {
    let rep = tau_n_rep(&genus2_seed().unwrap(), 4).unwrap();
    assert_eq!(twist_by_character(&rep, &[1, 1, 1, 1]).unwrap().generators, rep.generators);
    let t = twist_by_character(&rep, &[-1, 1, 1, 1]).unwrap();
    assert!(t.relator_holds().unwrap());
    let r3 = tau_n_rep(&genus2_seed().unwrap(), 3).unwrap();
    assert_eq!(twist_by_character(&r3, &[1, -1, 1, 1]), Err(Error::OddDimensionSignFlip));
}

#[test]
fn integralize_examples() {
    let bound = BigInt::from(1_000_000);
    let seed = genus2_seed().unwrap();
    let (p, r) = integralize(&seed, &bound).unwrap();
    assert!(p.is_identity());
    assert_eq!(r.generators, seed.generators);

    let k = NumberField::q_sqrt2();
    let half = NfElement::from_rational(zdense_core::scalar::rat(1, 2)).in_field(&k);
    let c = Matrix::diag(&[NfElement::one(), half.clone(), half.clone() * half]);
    let r3 = tau_n_rep(&seed, 3).unwrap().conjugate(&c).unwrap();
    assert!(!r3.is_integral());
    let (_, back) = integralize(&r3, &bound).unwrap();
    assert!(back.is_integral() && back.relator_holds().unwrap());
}

#[test]
fn odd_taus_descend_and_integralize_over_z() {
    let seed = genus2_seed().unwrap();
    for n in [3, 5] {
        let rep = tau_n_rep(&seed, n).unwrap();
        let (_, rat) = descend_to_rationals(&rep).unwrap();
        assert!(rat.field.is_rationals());
        let (_, z) = integralize(&rat, &BigInt::from(10u64.pow(12))).unwrap();
        assert!(z.is_integral() && z.relator_holds().unwrap());
    }
    for n in [4, 6] {
        let rep = tau_n_rep(&seed, n).unwrap();
        let (_, z) = integralize(&rep, &BigInt::from(10u64.pow(12))).unwrap();
        assert!(z.is_integral() && z.relator_holds().unwrap());
    }
}

#[test]
fn loxodromy_examples() {
    let rep = tau_n_rep(&genus2_seed().unwrap(), 3).unwrap();
    assert!(matches!(loxodromy_check(&rep, 2).unwrap(), LoxodromyReport::Pass { words_checked: 64 }));
    assert_eq!(loxodromy_check(&rep, 0).unwrap(), LoxodromyReport::Pass { words_checked: 0 });
    let tri = triangle_images().unwrap();
    assert_eq!(loxodromy_check_images(&tri, 1).unwrap(), LoxodromyReport::Violation { word: Word::gen(0) });
}

#[test]
fn rep_json_round_trip() {
    let rep = tau_n_rep(&genus2_seed().unwrap(), 4).unwrap();
    let j = serde_json::to_string(&rep.to_json()).unwrap();
    let back = SurfaceRep::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
    assert_eq!(back.generators, rep.generators);
    assert_eq!(back.content_hash(), rep.content_hash());
}
