//! Reduced words in free groups, integral/rational group ring elements and
//! Fox free differential calculus.
//!
//! Text I/O writes a generator as its lowercase letter and its inverse as the
//! uppercase letter, so `yxyXY` is `y x y x^-1 y^-1`. The identity is `1`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Num, Signed};

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Rational};

/// Ordered list of single-letter generator names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet(Arc<[char]>);

impl Alphabet {
    pub fn new(names: &[char]) -> Result<Alphabet> {
        for (i, c) in names.iter().enumerate() {
            if !c.is_ascii_lowercase() {
                return Err(Error::parse(format!("generator name `{c}` is not a letter a-z")));
            }
            if names[..i].contains(c) {
                return Err(Error::parse(format!("duplicate generator `{c}`")));
            }
        }
        Ok(Alphabet(names.into()))
    }

    /// Parses a whitespace separated list such as `x y`.
    pub fn parse(s: &str) -> Result<Alphabet> {
        let names: Vec<char> = s
            .split_whitespace()
            .map(|t| {
                let mut cs = t.chars();
                match (cs.next(), cs.next()) {
                    (Some(c), None) => Ok(c),
                    _ => Err(Error::parse(format!("generator `{t}` must be a single letter"))),
                }
            })
            .collect::<Result<_>>()?;
        Alphabet::new(&names)
    }

    /// The alphabet of all letters (lowercased, sorted) used in `words`.
    pub fn infer<'a>(words: impl IntoIterator<Item = &'a str>) -> Result<Alphabet> {
        let mut names: Vec<char> = words
            .into_iter()
            .flat_map(|w| w.chars())
            .filter(|c| c.is_ascii_alphabetic())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        names.sort_unstable();
        names.dedup();
        Alphabet::new(&names)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[char] {
        &self.0
    }

    pub fn name(&self, index: usize) -> char {
        self.0[index]
    }

    pub fn index_of(&self, name: char) -> Option<usize> {
        self.0.iter().position(|&c| c == name)
    }

    pub fn generator(&self, name: char) -> Result<Generator> {
        let index = self.index_of(name).ok_or(Error::AlphabetMismatch)?;
        Ok(Generator { index, name })
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        self.0
            .iter()
            .enumerate()
            .map(|(index, &name)| Generator { index, name })
    }

    /// Appends fresh letters not already present, taken in order from `a`.
    pub fn extended(&self, count: usize) -> Result<(Alphabet, Vec<usize>)> {
        let mut names = self.0.to_vec();
        let fresh: Vec<char> = ('a'..='z').filter(|c| !names.contains(c)).take(count).collect();
        if fresh.len() < count {
            return Err(Error::InvalidArgument("ran out of generator letters".into()));
        }
        let start = names.len();
        names.extend(fresh);
        Ok((Alphabet::new(&names)?, (start..start + count).collect()))
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", names.join(" "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Generator {
    pub index: usize,
    pub name: char,
}

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Letter {
        Letter { gen, inverse }
    }

    pub fn inv(self) -> Letter {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    pub fn exponent(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

fn reduce_into(out: &mut Vec<Letter>, letters: impl IntoIterator<Item = Letter>) {
    for l in letters {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
}

/// Shortlex order: shorter words first, then lexicographic on letters.
fn shortlex(a: &[Letter], b: &[Letter]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    alphabet: Alphabet,
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity(alphabet: &Alphabet) -> Word {
        Word {
            alphabet: alphabet.clone(),
            letters: Vec::new(),
        }
    }

    pub fn generator(alphabet: &Alphabet, gen: usize) -> Result<Word> {
        Word::from_letters(alphabet, [Letter::new(gen, false)])
    }

    /// Builds and freely reduces a word.
    pub fn from_letters(alphabet: &Alphabet, letters: impl IntoIterator<Item = Letter>) -> Result<Word> {
        let mut out = Vec::new();
        for l in letters {
            if l.gen >= alphabet.len() {
                return Err(Error::AlphabetMismatch);
            }
            reduce_into(&mut out, [l]);
        }
        Ok(Word {
            alphabet: alphabet.clone(),
            letters: out,
        })
    }

    pub fn parse(s: &str, alphabet: &Alphabet) -> Result<Word> {
        let s: String = s.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
        if s == "1" {
            return Ok(Word::identity(alphabet));
        }
        if s.is_empty() {
            return Err(Error::parse("empty word"));
        }
        let letters = s
            .chars()
            .map(|c| {
                if !c.is_ascii_alphabetic() {
                    return Err(Error::parse(format!("invalid letter `{c}` in word `{s}`")));
                }
                let gen = alphabet
                    .index_of(c.to_ascii_lowercase())
                    .ok_or_else(|| Error::parse(format!("letter `{c}` not in alphabet {{{alphabet}}}")))?;
                Ok(Letter::new(gen, c.is_ascii_uppercase()))
            })
            .collect::<Result<Vec<_>>>()?;
        Word::from_letters(alphabet, letters)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word {
            alphabet: self.alphabet.clone(),
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    /// Freely reduced product `self * other`.
    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let mut out = self.letters.clone();
        reduce_into(&mut out, other.letters.iter().copied());
        Ok(Word {
            alphabet: self.alphabet.clone(),
            letters: out,
        })
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(a), Some(b)) if self.letters.len() > 1 => *a != b.inv(),
            _ => true,
        }
    }

    pub fn cyclically_reduced(&self) -> Word {
        let mut l = &self.letters[..];
        while l.len() > 1 && l[0] == l[l.len() - 1].inv() {
            l = &l[1..l.len() - 1];
        }
        Word {
            alphabet: self.alphabet.clone(),
            letters: l.to_vec(),
        }
    }

    pub fn exponent_sum(&self, gen: usize) -> i64 {
        self.letters.iter().filter(|l| l.gen == gen).map(|l| l.exponent()).sum()
    }

    /// Number of letters equal to `gen` or its inverse.
    pub fn occurrences(&self, gen: usize) -> usize {
        self.letters.iter().filter(|l| l.gen == gen).count()
    }

    /// Same letters, reinterpreted over a larger alphabet that starts with
    /// this word's alphabet.
    pub fn lifted(&self, alphabet: &Alphabet) -> Result<Word> {
        if alphabet.names().get(..self.alphabet.len()) != Some(self.alphabet.names()) {
            return Err(Error::AlphabetMismatch);
        }
        Ok(Word {
            alphabet: alphabet.clone(),
            letters: self.letters.clone(),
        })
    }

    fn letter_char(&self, l: Letter) -> char {
        let c = self.alphabet.name(l.gen);
        if l.inverse {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }

    /// `y*x*Y` style rendering used inside group ring elements.
    pub fn to_starred(&self) -> String {
        if self.is_identity() {
            return "1".into();
        }
        let cs: Vec<String> = self.letters.iter().map(|&l| self.letter_char(l).to_string()).collect();
        cs.join("*")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        for &l in &self.letters {
            write!(f, "{}", self.letter_char(l))?;
        }
        Ok(())
    }
}

pub trait ToRational {
    fn to_rational(&self) -> Rational;
}

impl ToRational for i64 {
    fn to_rational(&self) -> Rational {
        Rational::from_integer(BigInt::from(*self))
    }
}

impl ToRational for Rational {
    fn to_rational(&self) -> Rational {
        self.clone()
    }
}

/// Coefficient ring of a group ring: integers or rationals.
pub trait Coefficient: Num + Signed + Clone + fmt::Debug + fmt::Display + ToRational {}

impl<T: Num + Signed + Clone + fmt::Debug + fmt::Display + ToRational> Coefficient for T {}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Key(Vec<Letter>);

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        shortlex(&self.0, &other.0)
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Finite formal combination `sum c_w w` of reduced words.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupRingElem<C = i64> {
    alphabet: Alphabet,
    terms: BTreeMap<Key, C>,
}

impl<C: Coefficient> GroupRingElem<C> {
    pub fn zero(alphabet: &Alphabet) -> Self {
        GroupRingElem {
            alphabet: alphabet.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(alphabet: &Alphabet) -> Self {
        Self::from_word(&Word::identity(alphabet))
    }

    pub fn from_word(w: &Word) -> Self {
        Self::monomial(C::one(), w)
    }

    pub fn monomial(c: C, w: &Word) -> Self {
        let mut e = Self::zero(&w.alphabet);
        e.add_term(c, w.letters.clone());
        e
    }

    pub fn from_terms<'a>(alphabet: &Alphabet, terms: impl IntoIterator<Item = (C, &'a Word)>) -> Result<Self> {
        let mut e = Self::zero(alphabet);
        for (c, w) in terms {
            if &w.alphabet != alphabet {
                return Err(Error::AlphabetMismatch);
            }
            e.add_term(c, w.letters.clone());
        }
        Ok(e)
    }

    fn add_term(&mut self, c: C, letters: Vec<Letter>) {
        let key = Key(letters);
        let sum = match self.terms.remove(&key) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in shortlex order of their words.
    pub fn terms(&self) -> impl Iterator<Item = (Word, &C)> + '_ {
        self.terms.iter().map(|(k, c)| {
            (
                Word {
                    alphabet: self.alphabet.clone(),
                    letters: k.0.clone(),
                },
                c,
            )
        })
    }

    pub fn coefficient(&self, w: &Word) -> C {
        self.terms.get(&Key(w.letters.clone())).cloned().unwrap_or_else(C::zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(c.clone(), k.0.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-C::one())
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(&self.alphabet);
        for (k, v) in &self.terms {
            out.add_term(v.clone() * c.clone(), k.0.clone());
        }
        out
    }

    /// Convolution product with free reduction of the concatenated words.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(&self.alphabet);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let mut letters = k1.0.clone();
                reduce_into(&mut letters, k2.0.iter().copied());
                out.add_term(c1.clone() * c2.clone(), letters);
            }
        }
        Ok(out)
    }

    /// Left multiplication by a single word.
    pub fn left_mul_word(&self, w: &Word) -> Result<Self> {
        Self::from_word(w).mul(self)
    }

    /// Augmentation: the sum of the coefficients.
    pub fn augmentation(&self) -> C {
        self.terms.values().cloned().fold(C::zero(), |a, b| a + b)
    }

    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> GroupRingElem<D> {
        let mut out = GroupRingElem::<D>::zero(&self.alphabet);
        for (k, c) in &self.terms {
            out.add_term(f(c), k.0.clone());
        }
        out
    }

    /// Parses `1 + x*y - 2*x*y*X` (the `*` separators are optional).
    pub fn parse(s: &str, alphabet: &Alphabet) -> Result<Self>
    where
        C: From<i64>,
    {
        Self::parse_with(s, alphabet, |n| {
            if n.contains('/') {
                return Err(Error::parse(format!(
                    "fractional coefficient `{n}` needs a rational group ring"
                )));
            }
            n.parse::<i64>()
                .map(C::from)
                .map_err(|_| Error::parse(format!("bad coefficient `{n}`")))
        })
    }

    fn parse_with(s: &str, alphabet: &Alphabet, coefficient: impl Fn(&str) -> Result<C>) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::parse("empty group ring element"));
        }
        let mut out = Self::zero(alphabet);
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (negative, body) = match rest.as_bytes()[0] {
                b'+' => (false, &rest[1..]),
                b'-' => (true, &rest[1..]),
                _ => (false, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            let split = term
                .find(|c: char| !(c.is_ascii_digit() || c == '/'))
                .unwrap_or(term.len());
            let (num, word) = (&term[..split], term[split..].trim_start_matches('*'));
            if num.is_empty() && word.is_empty() {
                return Err(Error::parse(format!("empty term in `{s}`")));
            }
            let coeff = if num.is_empty() { C::one() } else { coefficient(num)? };
            let coeff = if negative { -coeff } else { coeff };
            let w = if word.is_empty() {
                Word::identity(alphabet)
            } else {
                Word::parse(word, alphabet)?
            };
            out.add_term(coeff, w.letters);
        }
        Ok(out)
    }
}

impl GroupRingElem<Rational> {
    /// Like [`GroupRingElem::parse`] but accepting `p/q` coefficients.
    pub fn parse_rational(s: &str, alphabet: &Alphabet) -> Result<Self> {
        Self::parse_with(s, alphabet, parse_rational)
    }
}

impl<C: Coefficient> fmt::Display for GroupRingElem<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if w.is_identity() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", w.to_starred())?;
            } else {
                write!(f, "{mag}*{}", w.to_starred())?;
            }
        }
        Ok(())
    }
}

/// Fox derivative `d w / d g`, computed letter by letter with
/// `d(uv) = d(u) + u d(v)`, `d(g) = 1`, `d(g^-1) = -g^-1`.
pub fn fox_derivative(w: &Word, gen: usize) -> Result<GroupRingElem<i64>> {
    if gen >= w.alphabet.len() {
        return Err(Error::AlphabetMismatch);
    }
    let mut out = GroupRingElem::zero(&w.alphabet);
    for (k, &l) in w.letters.iter().enumerate() {
        if l.gen != gen {
            continue;
        }
        if l.inverse {
            // prefix * g^-1, i.e. the prefix including this letter
            out.add_term(-1, w.letters[..=k].to_vec());
        } else {
            out.add_term(1, w.letters[..k].to_vec());
        }
    }
    Ok(out)
}

/// All Fox derivatives of `w`, one per generator.
pub fn fox_gradient(w: &Word) -> Vec<GroupRingElem<i64>> {
    (0..w.alphabet.len())
        .map(|g| fox_derivative(w, g).expect("generator index in range"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn xy() -> Alphabet {
        Alphabet::parse("x y").unwrap()
    }

    fn w(s: &str) -> Word {
        Word::parse(s, &xy()).unwrap()
    }

    fn e(s: &str) -> GroupRingElem<i64> {
        GroupRingElem::parse(s, &xy()).unwrap()
    }

    #[test]
    fn concat_reduces() {
        assert_eq!(w("xy").concat(&w("Yx")).unwrap(), w("xx"));
        assert!(w("x").concat(&w("X")).unwrap().is_identity());
        assert_eq!(w("yxyXY").to_string(), "yxyXY");
        assert_eq!(w("xyYX").to_string(), "1");
        let other = Word::parse("a", &Alphabet::parse("a").unwrap()).unwrap();
        assert_eq!(w("x").concat(&other), Err(Error::AlphabetMismatch));
    }

    #[test]
    fn fox_examples() {
        let x = 0;
        let y = 1;
        assert_eq!(fox_derivative(&w("x"), x).unwrap(), e("1"));
        assert_eq!(fox_derivative(&w("xyX"), x).unwrap(), e("1 - x*y*X"));
        assert_eq!(fox_derivative(&w("yxyXY"), y).unwrap(), e("1 + y*x - y*x*y*X*Y"));
        assert_eq!(fox_derivative(&w("yxyXY"), x).unwrap(), e("y - y*x*y*X"));
        assert_eq!(
            fox_derivative(&w("yxyXY"), y).unwrap().to_string(),
            "1 + y*x - y*x*y*X*Y"
        );
        assert_eq!(fox_derivative(&w("x"), 2), Err(Error::AlphabetMismatch));
    }

    #[test]
    fn ring_examples() {
        assert_eq!(e("1 + x").mul(&e("1 - x")).unwrap(), e("1 - xx"));
        assert!(e("x").sub(&e("x")).unwrap().is_zero());
        assert_eq!(e("x - x").to_string(), "0");
        // y (1 + x d_x(yXY)) is the chain step d_x(yxyXY) = y + yx d_x(yXY)
        let inner = fox_derivative(&w("yXY"), 0).unwrap();
        let step = e("y").add(&e("y*x").mul(&inner).unwrap()).unwrap();
        assert_eq!(step, fox_derivative(&w("yxyXY"), 0).unwrap());
    }

    #[test]
    fn augmentations() {
        assert_eq!(e("1 + y*x - y*x*y*X*Y").augmentation(), 1);
        assert_eq!(GroupRingElem::<i64>::zero(&xy()).augmentation(), 0);
        assert_eq!(e("3x - 2y").augmentation(), 1);
    }

    #[test]
    fn parse_and_print() {
        let a = xy();
        assert_eq!(e("1 + x*y - x*y*X").to_string(), "1 + x*y - x*y*X");
        assert_eq!(e("-2xy + 3").to_string(), "3 - 2*x*y");
        assert!(GroupRingElem::<i64>::parse("1 + q", &a).is_err());
        assert!(Word::parse("x1", &a).is_err());
        let r = GroupRingElem::parse_rational("1/2*x - 3/4", &a).unwrap();
        assert_eq!(r.to_string(), "-3/4 + 1/2*x");
    }

    #[test]
    fn cyclic_reduction() {
        assert!(!w("xyX").is_cyclically_reduced());
        assert_eq!(w("xyX").cyclically_reduced(), w("y"));
        assert!(w("xyXY").is_cyclically_reduced());
    }

    fn word_strategy(max: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec((0usize..2, any::<bool>()), 0..max)
            .prop_map(|ls| Word::from_letters(&xy(), ls.into_iter().map(|(g, i)| Letter::new(g, i))).unwrap())
    }

    proptest! {
        #[test]
        fn reduction_idempotent(a in word_strategy(40)) {
            let again = Word::from_letters(&xy(), a.letters().iter().copied()).unwrap();
            prop_assert_eq!(again, a);
        }

        #[test]
        fn inverse_cancels(a in word_strategy(40)) {
            prop_assert!(a.concat(&a.inverse()).unwrap().is_identity());
        }

        #[test]
        fn fundamental_formula(a in word_strategy(40)) {
            let mut total = GroupRingElem::<i64>::zero(&xy());
            for g in 0..2 {
                let gm1 = GroupRingElem::from_word(&Word::generator(&xy(), g).unwrap())
                    .sub(&GroupRingElem::one(&xy())).unwrap();
                total = total.add(&fox_derivative(&a, g).unwrap().mul(&gm1).unwrap()).unwrap();
            }
            let expected = GroupRingElem::from_word(&a).sub(&GroupRingElem::one(&xy())).unwrap();
            prop_assert_eq!(total, expected);
        }

        #[test]
        fn product_rule(a in word_strategy(20), b in word_strategy(20)) {
            for g in 0..2 {
                let lhs = fox_derivative(&a.concat(&b).unwrap(), g).unwrap();
                let rhs = fox_derivative(&a, g).unwrap()
                    .add(&fox_derivative(&b, g).unwrap().left_mul_word(&a).unwrap()).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn augmentation_is_exponent_sum(a in word_strategy(40), n in 0usize..10) {
            for g in 0..2 {
                prop_assert_eq!(fox_derivative(&a, g).unwrap().augmentation(), a.exponent_sum(g));
            }
            let xn = Word::from_letters(&xy(), std::iter::repeat(Letter::new(0, false)).take(n)).unwrap();
            prop_assert_eq!(fox_derivative(&xn, 0).unwrap().augmentation(), n as i64);
        }
    }
}
