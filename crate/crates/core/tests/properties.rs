//! Cross-module invariants as property tests.

use proptest::prelude::*;

use torsion_cert::charvar::{commutator_trace, lift, lift_with, Character, RootChoice};
use torsion_cert::freegroup::{fox_gradient, Alphabet, GroupRingElem, Word};
use torsion_cert::linalg::Matrix;
use torsion_cert::representation::{MatrixRep, Representation, SymPowerRep};
use torsion_cert::scalar::{rat, Rational, Scalar};
use torsion_cert::suturedcert::{
    certify, oracle_presentation, oracle_representation, pants_example, SuturedHandlebodyData,
};
use torsion_cert::twisted::{build_complex, homology_dims, wada_torsion, Presentation};

fn xy() -> Alphabet {
    Alphabet::parse("x y").unwrap()
}

fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn word(alphabet: &'static str, max: usize) -> impl Strategy<Value = String> {
    let letters: Vec<char> = alphabet.chars().flat_map(|c| [c, c.to_ascii_uppercase()]).collect();
    proptest::collection::vec(proptest::sample::select(letters), 0..max).prop_map(|v| {
        if v.is_empty() {
            "1".to_string()
        } else {
            v.into_iter().collect()
        }
    })
}

fn elementary(k: Rational, upper: bool) -> Matrix {
    let (one, zero, k) = (Scalar::int(1), Scalar::int(0), Scalar::Rational(k));
    let rows = if upper {
        vec![vec![one.clone(), k], vec![zero, one]]
    } else {
        vec![vec![one.clone(), zero], vec![k, one]]
    };
    Matrix::from_rows(rows).unwrap()
}

/// Exact SL(2, Q) matrices as short products of elementary matrices.
fn sl2() -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(rational(), 1..4).prop_map(|ks| {
        ks.into_iter()
            .enumerate()
            .fold(Matrix::int(&[&[1, 0], &[0, 1]]), |m, (i, k)| {
                m.try_mul(&elementary(k, i % 2 == 0)).unwrap()
            })
    })
}

fn character() -> impl Strategy<Value = Character> {
    (rational(), rational(), rational()).prop_map(|(x, y, z)| Character::from_rationals(x, y, z))
}

fn det_vanishes(data: &SuturedHandlebodyData, rep: &impl MatrixRep) -> bool {
    !certify(data, rep, false).unwrap().is_product
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Fundamental formula: Σ_j ∂_j w · (x_j − 1) = w − 1.
    #[test]
    fn fox_fundamental_formula(s in word("xyz", 12)) {
        let a = Alphabet::parse("x y z").unwrap();
        let w = Word::parse(&s, &a).unwrap();
        let one = GroupRingElem::<i64>::one(&a);
        let mut total = GroupRingElem::<i64>::zero(&a);
        for (j, d) in fox_gradient(&w).iter().enumerate() {
            let g = GroupRingElem::from_word(&Word::generator(&a, j).unwrap()).sub(&one).unwrap();
            total = total.add(&d.mul(&g).unwrap()).unwrap();
        }
        prop_assert_eq!(total, GroupRingElem::from_word(&w).sub(&one).unwrap());
    }

    /// The lift realizes the requested traces for either root of `u² − z̄u + 1`.
    #[test]
    fn lift_realizes_character(c in character(), inverse in any::<bool>()) {
        let choice = if inverse { RootChoice::Inverse } else { RootChoice::Principal };
        let l = lift_with(&c, choice).unwrap();
        let w = |s: &str| Word::parse(s, &xy()).unwrap();
        let (tx, ty, tz) = (l.rep.trace_of(&w("x")).unwrap(), l.rep.trace_of(&w("y")).unwrap(), l.rep.trace_of(&w("xy")).unwrap());
        prop_assert_eq!(&tx, &c.xbar().promote(tx.kind()).unwrap());
        prop_assert_eq!(&ty, &c.ybar().promote(ty.kind()).unwrap());
        prop_assert_eq!(&tz, &c.zbar().promote(tz.kind()).unwrap());
        let kappa = l.rep.trace_of(&w("xyXY")).unwrap();
        prop_assert_eq!(kappa, commutator_trace(&c).promote(tz.kind()).unwrap());
    }

    /// The verdict does not depend on which root `u` the lift uses.
    #[test]
    fn verdict_independent_of_root(c in character(), n in 2usize..4) {
        let pants = pants_example();
        let a = lift_with(&c, RootChoice::Principal).unwrap().rep;
        let b = lift_with(&c, RootChoice::Inverse).unwrap().rep;
        prop_assert_eq!(
            det_vanishes(&pants, &SymPowerRep::new(a, n).unwrap()),
            det_vanishes(&pants, &SymPowerRep::new(b, n).unwrap())
        );
    }

    /// On the pants the determinant vanishes exactly on `x̄ + ȳ − z̄ = 3`.
    #[test]
    fn pants_locus_is_the_plane(x in rational(), y in rational(), offset in prop_oneof![Just(0i64), -3i64..=3]) {
        let z = &x + &y - Rational::from_integer(3.into()) + Rational::from_integer(offset.into());
        let l = lift(&Character::from_rationals(x, y, z)).unwrap();
        prop_assert_eq!(det_vanishes(&pants_example(), &l.rep), offset == 0);
    }

    /// Conjugating the representation changes neither the certificate verdict
    /// nor the determinant.
    #[test]
    fn certificate_is_conjugation_invariant(a in sl2(), b in sl2(), p in sl2(), images in (word("xy", 6), word("xy", 6))) {
        let data = SuturedHandlebodyData::from_words("random", "x y", &[&images.0, &images.1]);
        prop_assume!(data.is_ok());
        let data = data.unwrap();
        let rep = Representation::new(&xy(), vec![a, b], true).unwrap();
        let conj = rep.conjugated(&p).unwrap();
        let (c1, c2) = (certify(&data, &rep, false).unwrap(), certify(&data, &conj, false).unwrap());
        prop_assert_eq!(c1.determinant, c2.determinant);
    }

    /// `h0 − h1 + h2 = n·χ` for the oracle complex of any balanced image set.
    #[test]
    fn euler_identity(a in sl2(), b in sl2(), images in (word("xy", 6), word("xy", 6))) {
        let data = SuturedHandlebodyData::from_words("random", "x y", &[&images.0, &images.1]);
        prop_assume!(data.is_ok());
        let data = data.unwrap();
        let rep = Representation::new(&xy(), vec![a, b], true).unwrap();
        let (pres, _) = oracle_presentation(&data).unwrap();
        let ext = oracle_representation(&data, &pres, &rep).unwrap();
        let (h0, h1, h2) = homology_dims(&build_complex(&pres, &ext).unwrap()).unwrap();
        prop_assert_eq!(h0 as i64 - h1 as i64 + h2 as i64, 2 * pres.euler_characteristic());
    }

    /// The torsion of a knot group is a conjugacy invariant of the
    /// representation, up to a unit monomial.
    #[test]
    fn torsion_is_conjugation_invariant(p in sl2()) {
        let pres = Presentation::from_words("trefoil", "a b", &["abaBAB"]).unwrap();
        let ab = pres.alphabet().clone();
        let rep = Representation::new(&ab, vec![Matrix::int(&[&[1, 1], &[0, 1]]), Matrix::int(&[&[1, 0], &[-1, 1]])], true).unwrap();
        let (t1, t2) = (wada_torsion(&pres, &rep).unwrap(), wada_torsion(&pres, &rep.conjugated(&p).unwrap()).unwrap());
        prop_assert!(t1.numerator.equals_up_to_monomial(&t2.numerator));
        prop_assert!(t1.denominator.equals_up_to_monomial(&t2.denominator));
        prop_assert_eq!(t1.degree, t2.degree);
    }
}
