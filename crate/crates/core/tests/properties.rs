use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use zdense_core::density::{certify_closure, ClosureClass};
use zdense_core::exactmat::{preserves_form, Matrix};
use zdense_core::nfield::{NfElement, NumberField};
use zdense_core::polyring::{factor_over_int, is_reciprocal, Poly};
use zdense_core::repkit::{genus2_seed, tau_n, tau_n_rep};
use zdense_core::scalar::rat;
use zdense_core::{NfMatrix, ZPoly};

fn k() -> Arc<NumberField> {
    NumberField::q_sqrt2()
}

/// Elementary matrix `[[1, x], [0, 1]]` or `[[1, 0], [x, 1]]` with `x = a + b√2`.
fn elementary(upper: bool, a: i64, b: i64) -> NfMatrix {
    let x = k().element(&[a, b]);
    let (one, zero) = (NfElement::one().in_field(&k()), NfElement::zero().in_field(&k()));
    if upper {
        Matrix::from_rows(vec![vec![one.clone(), x], vec![zero, one]])
    } else {
        Matrix::from_rows(vec![vec![one.clone(), zero], vec![x, one]])
    }
}

fn sl2_element() -> impl Strategy<Value = NfMatrix> {
    prop::collection::vec((any::<bool>(), -3i64..=3, -2i64..=2), 1..4)
        .prop_map(|ops| ops.into_iter().fold(Matrix::identity(2), |acc, (u, a, b)| &acc * &elementary(u, a, b)))
}

fn int_poly() -> impl Strategy<Value = ZPoly> {
    (1usize..=3)
        .prop_flat_map(|d| (prop::collection::vec(-5i64..=5, d), 1i64..=3))
        .prop_map(|(low, lead)| {
            let mut c: Vec<BigInt> = low.into_iter().map(BigInt::from).collect();
            c.push(BigInt::from(lead));
            Poly::new(c)
        })
}

fn spectrum_poly(spec: &[BigRational]) -> Poly<NfElement> {
    spec.iter().fold(Poly::one(), |acc, l| &acc * &Poly::new(vec![NfElement::from_rational(-l.clone()), NfElement::one()]))
}

fn is_closed_under_inverse(spec: &[BigRational]) -> bool {
    let mut a: Vec<BigRational> = spec.to_vec();
    let mut b: Vec<BigRational> = spec.iter().map(|x| x.recip()).collect();
    a.sort();
    b.sort();
    a == b
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn tau_is_a_homomorphism(a in sl2_element(), b in sl2_element(), n in 2usize..=6) {
        let lhs = tau_n(&(&a * &b), n).unwrap();
        let rhs = &tau_n(&a, n).unwrap() * &tau_n(&b, n).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn factor_round_trip(fs in prop::collection::vec(int_poly(), 1..=3)) {
        let f = fs.iter().fold(ZPoly::one(), |acc, g| &acc * g);
        prop_assume!(!f.coeffs().iter().all(|c| c.is_zero()));
        let fac = factor_over_int(&f);
        prop_assert_eq!(fac.expand(), f);
        for (g, _) in &fac.factors {
            prop_assert!(factor_over_int(g).is_irreducible());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reciprocal_iff_inverse_pairing(
        base in prop::collection::vec((1i64..=9, 1i64..=9), 1..=3),
        paired in prop::collection::vec(any::<bool>(), 3),
        ones in 0usize..=2,
    ) {
        let mut spec: Vec<BigRational> = vec![BigRational::one(); ones];
        for (i, &(p, q)) in base.iter().enumerate() {
            let l = rat(p, q);
            spec.push(l.clone());
            if paired[i] {
                spec.push(l.recip());
            }
        }
        let f = spectrum_poly(&spec);
        prop_assert_eq!(is_reciprocal(&f), is_closed_under_inverse(&spec));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn emitted_forms_are_preserved(ops in prop::collection::vec((any::<bool>(), -2i64..=2), 1..3), n in 3usize..=4) {
        // Conjugate τₙ of the seed by a rational unipotent change of basis.
        let rep = tau_n_rep(&genus2_seed().unwrap(), n).unwrap();
        let p = ops.iter().enumerate().fold(Matrix::identity(n), |acc: NfMatrix, (i, &(upper, x))| {
            let mut e = Matrix::identity(n);
            let (r, c) = if upper { (i % (n - 1), i % (n - 1) + 1) } else { (i % (n - 1) + 1, i % (n - 1)) };
            e[(r, c)] = NfElement::from_integer(x.into());
            &acc * &e
        });
        let rep = rep.conjugate(&p).unwrap();
        let cert = certify_closure(&rep, 1).unwrap();
        prop_assert_ne!(cert.class, ClosureClass::FullSL);
        let j = cert.form.clone().unwrap();
        prop_assert!(!j.det().is_zero());
        prop_assert!(rep.generators.iter().all(|g| preserves_form(g, &j)));
        if n % 2 == 0 {
            prop_assert_eq!(j.transpose(), -&j);
        } else {
            prop_assert_eq!(j.transpose(), j);
        }
        prop_assert!(cert.verify(&rep).unwrap());
    }
}
