use num_bigint::BigInt;
use num_traits::One;
use zdense_core::bendcore::*;
use zdense_core::exactmat::Matrix;
use zdense_core::nfield::{fundamental_unit_search, NfElement, NumberField};
use zdense_core::polyring::{is_reciprocal, Poly};
use zdense_core::repkit::*;
use zdense_core::scalar::rat;
use zdense_core::{Error, NfMatrix};

fn q(rows: &[&[(i64, i64)]]) -> NfMatrix {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&(a, b)| NfElement::from_rational(rat(a, b))).collect()).collect())
}

fn zi(rows: &[&[i64]]) -> NfMatrix {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| NfElement::from_integer(x.into())).collect()).collect())
}

#[test]
fn integral_power_examples() {
    let m = q(&[&[(0, 1), (-1, 2)], &[(2, 1), (3, 1)]]);
    let (j, p) = integral_power(&m).unwrap();
    assert_eq!(j, 3);
    assert_eq!(p, zi(&[&[-3, -4], &[16, 21]]));
    let (j, _) = integral_power(&zi(&[&[2, 1], &[1, 1]])).unwrap();
    assert_eq!(j, 1);
    let d = q(&[&[(2, 1), (0, 1)], &[(0, 1), (1, 2)]]);
    assert!(matches!(integral_power(&d), Err(Error::Precondition(_))));
}

fn flagship() -> (SurfaceRep, NfMatrix) {
    let rep = tau_n_rep(&genus2_seed().unwrap(), 4).unwrap();
    let (_, rep) = integralize(&rep, &BigInt::from(10u64.pow(12))).unwrap();
    let a1 = rep.generators[0].clone();
    (rep, a1)
}

#[test]
fn unit_blocks_flagship() {
    let (rep, a1) = flagship();
    let k = NumberField::q_sqrt2();
    let u = fundamental_unit_search(&k, 3).unwrap();
    let factors = charpoly_factors(&k, &a1).unwrap();
    let splits = det_one_splits(&factors);
    assert!(!splits.is_empty());
    let (f1, f2) = &splits[0];
    let cert = bend_matrix_unit_blocks(&a1, &u, (f1, f2)).unwrap();
    assert!(cert.is_valid());
    assert!(cert.checks.non_reciprocal_charpoly && cert.checks.centralizes);
    for j in 1..=5 {
        assert_eq!(is_reciprocal(&cert.a.charpoly()), is_reciprocal(&cert.a.pow(j).charpoly()));
    }
    let bent = apply_bend(&rep, &cert).unwrap();
    assert!(bent.relator_holds().unwrap());
    let bent2 = apply_bend(&rep, &cert.power(2, &a1)).unwrap();
    assert_ne!(bent.generators[1], bent2.generators[1]);
    assert!(matches!(bend_matrix_unit_blocks(&a1, &NfElement::one(), (f1, f2)), Err(Error::Precondition(_))));
}

#[test]
fn identity_blocks_on_tau5() {
    let rep = tau_n_rep(&genus2_seed().unwrap(), 5).unwrap();
    let (_, rep) = descend_to_rationals(&rep).unwrap();
    let (_, rep) = integralize(&rep, &BigInt::from(10u64.pow(12))).unwrap();
    let a1 = rep.generators[0].clone();
    let k = NumberField::rationals();
    let factors = charpoly_factors(&k, &a1).unwrap();
    let lin = Poly::new(vec![-NfElement::one(), NfElement::one()]);
    let rest: Vec<_> = factors.iter().filter(|f| **f != lin).cloned().collect();
    assert_eq!(rest.len(), 2);
    let cert = bend_matrix_identity_blocks(&a1, (&rest[0], &rest[1]), true).unwrap();
    assert!(cert.checks.eigenvalue_one_multiplicity > 1);
    let bent = apply_bend(&rep, &cert).unwrap();
    assert!(bent.relator_holds().unwrap());
}

#[test]
fn apply_identity_is_noop() {
    let (rep, a1) = flagship();
    let cert = BendCertificate::new(
        rep.field.clone(),
        Matrix::identity(4),
        &a1,
        Construction::IdentityBlocks { power: 1, split: (4, 0), fixed_line: false },
    );
    let same = apply_bend(&rep, &cert).unwrap();
    assert_eq!(same.generators, rep.generators);
}

#[test]
fn irreducible_search() {
    let f = Poly::new([-1i64, 6, -5, 1].iter().map(|&c| NfElement::from_integer(c.into())).collect());
    let c = Matrix::companion(&f);
    let cert = bend_matrix_irreducible(&c, 2).unwrap();
    assert!(cert.is_valid() && cert.checks.distinct_spectrum);
    assert!(matches!(bend_matrix_irreducible(&c, 0), Err(Error::NotFoundWithinBound(_))));
    let quad = Poly::new([1i64, -3, 1].iter().map(|&c| NfElement::from_integer(c.into())).collect());
    let m = Matrix::block_diag(&[Matrix::identity(1), Matrix::companion(&quad)]);
    assert!(matches!(bend_matrix_irreducible(&m, 2), Err(Error::NotFoundWithinBound(_))));
}

#[test]
fn certificate_json_round_trip() {
    let f = Poly::new([-1i64, 6, -5, 1].iter().map(|&c| NfElement::from_integer(c.into())).collect());
    let c = Matrix::companion(&f);
    let cert = bend_matrix_irreducible(&c, 2).unwrap();
    let j = serde_json::to_string(&cert.to_json()).unwrap();
    let back = BendCertificate::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
    assert_eq!(back.a, cert.a);
    assert_eq!(back.checks, cert.checks);
}
