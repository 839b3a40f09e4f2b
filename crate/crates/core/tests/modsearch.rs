use std::time::Instant;

use num_bigint::BigInt;
use zdense_core::modsearch::*;
use zdense_core::polyring::FpPoly;
use zdense_core::repkit::*;
use zdense_core::Error;

#[test]
fn sl2_f5_search() {
    let gens = [
        FpMatrix::from_i64(5, &[&[1, 1], &[0, 1]]).unwrap(),
        FpMatrix::from_i64(5, &[&[1, 0], &[1, 1]]).unwrap(),
    ];
    let (w, f) = search_irreducible_word(&gens, SearchMode::Full, 4).unwrap();
    // x·y has trace 3; x·y⁻¹ has trace 1, the first irreducible class.
    assert_eq!(w.codes(), vec![0, 3]);
    assert_eq!(f, FpPoly::from_i64(5, &[1, -1, 1]));
    assert!(matches!(search_irreducible_word(&gens, SearchMode::Full, 0), Err(Error::NotFoundWithinBound(_))));
    assert!(matches!(search_irreducible_word(&[], SearchMode::Full, 3), Err(Error::Precondition(_))));
}

#[test]
fn reductions() {
    let seed = genus2_seed().unwrap();
    let rep = tau_n_rep(&seed, 4).unwrap();
    let (_, rep) = integralize(&rep, &BigInt::from(10u64.pow(12))).unwrap();
    let gens = reduce_mod_p(&rep, 7, Some(3)).unwrap();
    assert_eq!(gens.len(), 4);
    assert!(gens.iter().all(|g| g.det() == 1));
    assert!(matches!(reduce_mod_p(&rep, 7, Some(2)), Err(Error::InvalidResidue(2, 7))));
    assert!(matches!(reduce_mod_p(&rep, 2, None), Err(Error::BadPrime(2, _))));
    assert!(matches!(reduce_mod_p(&rep, 5, None), Err(Error::BadPrime(5, _))));
    let other = reduce_mod_p(&rep, 7, Some(4)).unwrap();
    assert_ne!(gens, other);

    let a = &gens[0];
    let b = &gens[1];
    let ab = rep.generators[0].clone() * rep.generators[1].clone();
    let red = zdense_core::modsearch::reduce_poly_mod_p(&ab.charpoly(), 2, 7, 3).unwrap();
    assert_eq!(red, a.mul(b).charpoly());
}

#[test]
fn borel_counts() {
    let start = Instant::now();
    assert_eq!(borel_fraction_check(1, 5).unwrap(), BorelCount { reducible: 80, total: 120, bound_holds: true });
    for p in [7, 11, 13] {
        let c = borel_fraction_check(1, p).unwrap();
        assert!(c.bound_holds, "p = {p}: {c:?}");
        assert_eq!(c.total, p * (p * p - 1));
    }
    let c = borel_fraction_check(2, 3).unwrap();
    assert_eq!(c.total, 51840);
    assert!(c.bound_holds);
    assert!(matches!(borel_fraction_check(2, 11), Err(Error::TooLarge(_))));
    eprintln!("borel checks took {:?}", start.elapsed());
}
