use num_bigint::BigInt;
use num_traits::Zero;
use zdense_core::bendcore::*;
use zdense_core::density::*;
use zdense_core::exactmat::Matrix;
use zdense_core::nfield::{fundamental_unit_search, NfElement, NumberField};
use zdense_core::repkit::*;
use zdense_core::scalar::rat;
use zdense_core::{Error, NfMatrix};

fn diag(entries: &[(i64, i64)]) -> NfMatrix {
    let n = entries.len();
    let mut m = Matrix::zeros(n, n);
    for (i, &(a, b)) in entries.iter().enumerate() {
        m[(i, i)] = NfElement::from_rational(rat(a, b));
    }
    m
}

#[test]
fn principal_spectra() {
    match principal_sl2_test(&diag(&[(8, 1), (2, 1), (1, 2), (1, 8)])).unwrap() {
        PrincipalTest::Consistent { trace, .. } => assert_eq!(trace, Some(NfElement::from_rational(rat(5, 2)))),
        PrincipalTest::Refuted => panic!("geometric spectrum refuted"),
    }
    assert!(principal_sl2_test(&diag(&[(4, 1), (2, 1), (1, 2), (1, 4)])).unwrap().is_refuted());
    assert!(principal_sl2_test(&diag(&[(1, 1), (1, 1), (3, 1), (1, 3)])).unwrap().is_refuted());
    let rot = Matrix::from_rows(vec![
        vec![NfElement::from_integer(0.into()), NfElement::from_integer((-1).into())],
        vec![NfElement::from_integer(1.into()), NfElement::from_integer(0.into())],
    ]);
    assert!(matches!(principal_sl2_test(&rot), Err(Error::Precondition(_))));
}

#[test]
fn principal_conjugated_tau() {
    let n = Matrix::from_rows(vec![
        vec![NfElement::from_integer(2.into()), NfElement::from_integer(1.into())],
        vec![NfElement::from_integer(1.into()), NfElement::from_integer(1.into())],
    ]);
    for k in 2..=6 {
        match principal_sl2_test(&tau_n(&n, k).unwrap()).unwrap() {
            PrincipalTest::Consistent { trace_poly, .. } => {
                assert!(trace_poly.eval(&NfElement::from_integer(3.into())).is_zero());
            }
            PrincipalTest::Refuted => panic!("τ{k} image refuted"),
        }
    }
}

fn cert(class: ClosureClass) -> ClosureCertificate {
    ClosureCertificate {
        field: NumberField::rationals(),
        n: 4,
        class,
        form_space_dim: 0,
        form: None,
        tests: vec![],
        imported_theorems: vec![],
    }
}

#[test]
fn closure_order() {
    use ClosureClass::*;
    assert!(closure_strictly_increased(&cert(PrincipalSL2), &cert(FullSL)).unwrap());
    assert!(!closure_strictly_increased(&cert(Symplectic), &cert(Symplectic)).unwrap());
    assert!(!closure_strictly_increased(&cert(FullSL), &cert(Symplectic)).unwrap());
    assert!(closure_strictly_increased(&cert(PrincipalSL2), &cert(Symplectic)).unwrap());
    assert!(matches!(
        closure_strictly_increased(&cert(Symplectic), &cert(SplitOrthogonal)),
        Err(Error::IncomparableClasses(_, _))
    ));
}

#[test]
fn seeds_and_flagship() {
    let seed = genus2_seed().unwrap();
    let rep3 = tau_n_rep(&seed, 3).unwrap();
    let c3 = certify_closure(&rep3, 2).unwrap();
    assert!(matches!(c3.class, ClosureClass::PrincipalSL2 | ClosureClass::SplitOrthogonal));
    assert!(c3.verify(&rep3).unwrap());

    let rep4 = tau_n_rep(&seed, 4).unwrap();
    let (_, rep4) = integralize(&rep4, &BigInt::from(10u64.pow(12))).unwrap();
    let c4 = certify_closure(&rep4, 2).unwrap();
    assert_eq!(c4.form_space_dim, 1);
    let j = c4.form.clone().unwrap();
    assert_eq!(j.transpose(), -&j);
    assert!(matches!(c4.class, ClosureClass::PrincipalSL2 | ClosureClass::Symplectic));

    let k = NumberField::q_sqrt2();
    let a1 = rep4.generators[0].clone();
    let u = fundamental_unit_search(&k, 3).unwrap();
    let factors = charpoly_factors(&k, &a1).unwrap();
    let splits = det_one_splits(&factors);
    let bc = bend_matrix_unit_blocks(&a1, &u, (&splits[0].0, &splits[0].1)).unwrap();
    assert!(&(&bc.a.transpose() * &j) * &bc.a != j);
    let bent = apply_bend(&rep4, &bc).unwrap();
    let after = certify_closure(&bent, 2).unwrap();
    assert_eq!(after.class, ClosureClass::FullSL);
    assert_eq!(after.form_space_dim, 0);
    assert!(after.refutation().is_some());
    assert!(after.verify(&bent).unwrap());
    assert!(closure_strictly_increased(&c4, &after).unwrap());

    let json = serde_json::to_string(&after.to_json()).unwrap();
    let back = ClosureCertificate::from_json(&serde_json::from_str(&json).unwrap()).unwrap();
    assert_eq!(back, after);
}

#[test]
fn unsupported_dimensions() {
    let seed = genus2_seed().unwrap();
    assert!(matches!(certify_closure(&tau_n_rep(&seed, 7).unwrap(), 1), Err(Error::G2Unsupported)));
    assert_eq!(certify_closure(&seed, 1).unwrap().class, ClosureClass::FullSL);
}
