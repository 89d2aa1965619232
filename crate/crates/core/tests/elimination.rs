//! Symbolic elimination against pointwise determinants.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use torsion_cert::charvar::{eliminate_l2, eliminate_l2_report, locus_det, random_rational, Character};
use torsion_cert::polynomial::MultiPoly;
use torsion_cert::scalar::{Rational, Scalar};
use torsion_cert::suturedcert::{pants_example, SuturedHandlebodyData};

fn eval(p: &MultiPoly, c: &Character) -> Scalar {
    p.eval(&[c.xbar().clone(), c.ybar().clone(), c.zbar().clone(), Scalar::int(1)])
        .unwrap()
}

#[test]
fn pants_report() {
    let report = eliminate_l2_report(&pants_example()).unwrap();
    let plane: MultiPoly = "x + y - z - 3".parse().unwrap();
    assert!(report.locus == plane || report.locus == plane.neg());
    // u and 1/u give conjugate lifts, so the resultant over both roots is a square
    assert_eq!(report.multiplicity, 2);
    let square = plane.pow(2);
    assert!(
        report.resultant == square || report.resultant == square.neg(),
        "{}",
        report.resultant
    );
}

#[test]
fn conjugated_image_matches_sampling() {
    let data = SuturedHandlebodyData::from_words("conj", "x y", &["x", "yxY"]).unwrap();
    let p = eliminate_l2(&data).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut on = 0;
    for i in 0..100 {
        let (mut x, y, z) = (
            random_rational(&mut rng, 4, 3),
            random_rational(&mut rng, 4, 3),
            random_rational(&mut rng, 4, 3),
        );
        if i % 4 == 0 {
            x = Rational::from_integer(2.into());
        }
        let c = Character::from_rationals(x, y, z);
        let det = locus_det(&c, &data, 2).unwrap();
        let vanishes = eval(&p, &c).is_exactly_zero();
        assert_eq!(det.is_exactly_zero(), vanishes, "{c}: det {det}, locus {p}");
        on += vanishes as usize;
    }
    assert!(on >= 25, "only {on} sampled characters on the locus");
}
