//! Product certificates for specific representations of the pants.

use torsion_cert::charvar::{lift, Character};
use torsion_cert::freegroup::{Alphabet, Word};
use torsion_cert::representation::{Representation, SymPowerRep};
use torsion_cert::scalar::Scalar;
use torsion_cert::suturedcert::{certify, pants_example};

fn schottky() -> Representation {
    Representation::parse(include_str!("../data/schottky.rep")).unwrap()
}

#[test]
fn schottky_is_not_a_product_but_its_sign_twist_is() {
    let pants = pants_example();
    let cert = certify(&pants, &schottky(), true).unwrap();
    assert!(!cert.is_product);
    assert_eq!(cert.oracle_h1, Some(1));

    // same PSL(2) representation, character (-4, 4, -5)
    let twisted = schottky().sign_twisted(&[-1, 1]).unwrap();
    let a = Alphabet::parse("x y").unwrap();
    let tr = |s: &str| twisted.trace_of(&Word::parse(s, &a).unwrap()).unwrap();
    assert_eq!(
        (tr("x"), tr("y"), tr("xy")),
        (Scalar::int(-4), Scalar::int(4), Scalar::int(-5))
    );
    let cert = certify(&pants, &twisted, true).unwrap();
    assert!(cert.is_product);
    assert_eq!(cert.oracle_h1, Some(0));
}

#[test]
fn schottky_and_its_lift_agree() {
    let pants = pants_example();
    let lifted = lift(&Character::from_ints(4, 4, 5)).unwrap();
    assert!(!lifted.reducible);
    assert!(!certify(&pants, &lifted.rep, false).unwrap().is_product);
}

#[test]
fn symmetric_powers_of_the_origin_are_products() {
    // (0, 0, 0) is off every reference locus
    let pants = pants_example();
    let rep = lift(&Character::from_ints(0, 0, 0)).unwrap().rep;
    for n in 2..=6 {
        let cert = certify(&pants, &SymPowerRep::new(rep.clone(), n).unwrap(), true).unwrap();
        assert!(cert.is_product, "N = {n}");
        assert_eq!(cert.oracle_h1, Some(0));
    }
}
