use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::laurent::{split_terms, strip_parens};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Ring};
use crate::scalar::{fmt_rational, parse_rational, Rational, Scalar};

/// Variable names in exponent-vector order.
pub const VARIABLES: [char; 4] = ['x', 'y', 'z', 'u'];
pub const X: usize = 0;
pub const Y: usize = 1;
pub const Z: usize = 2;
pub const U: usize = 3;

pub type Exponent = [u32; 4];

/// Polynomial over the rationals in `x, y, z, u`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Exponent, Rational>,
}

fn var_index(c: char) -> Result<usize> {
    VARIABLES
        .iter()
        .position(|&v| v == c)
        .ok_or_else(|| Error::parse(format!("unknown variable `{c}`")))
}

/// Graded lexicographic comparison: total degree first, then lexicographic.
fn grlex(a: &Exponent, b: &Exponent) -> Ordering {
    let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn one() -> Self {
        MultiPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        MultiPoly::monomial(c, [0; 4])
    }

    pub fn int(c: i64) -> Self {
        MultiPoly::constant(Rational::from_integer(c.into()))
    }

    pub fn monomial(c: Rational, exp: Exponent) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        MultiPoly { terms }
    }

    pub fn var(index: usize) -> Self {
        let mut e = [0; 4];
        e[index] = 1;
        MultiPoly::monomial(Rational::one(), e)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exponent, Rational)>) -> Self {
        let mut p = MultiPoly::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: Rational) {
        let v = self.terms.remove(&e).unwrap_or_else(Rational::zero) + c;
        if !v.is_zero() {
            self.terms.insert(e, v);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| *e == [0; 4])
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&[0; 4]).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn is_free_of(&self, v: usize) -> bool {
        self.degree_in(v) == 0
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let mut out = MultiPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(MultiPoly::one(), |acc, _| {
            acc.try_mul(self).expect("polynomial product")
        })
    }

    /// Evaluates at `(x, y, z, u)`.
    pub fn eval(&self, point: &[Scalar; 4]) -> Result<Scalar> {
        let kind = point
            .iter()
            .try_fold(crate::scalar::ScalarKind::Rational, |k, s| k.unify(s.kind()))?;
        let mut acc = Scalar::zero(kind);
        for (e, c) in &self.terms {
            let mut t = Scalar::Rational(c.clone()).promote(kind)?;
            for (v, &p) in e.iter().enumerate() {
                if p > 0 {
                    t = t.try_mul(&point[v].pow(p)?)?;
                }
            }
            acc = acc.try_add(&t)?;
        }
        Ok(acc)
    }

    /// Substitutes a rational value for one variable.
    pub fn substitute(&self, v: usize, value: &Rational) -> Self {
        let mut out = MultiPoly::zero();
        for (e, c) in &self.terms {
            let mut e2 = *e;
            e2[v] = 0;
            out.add_term(e2, c * num_traits::pow(value.clone(), e[v] as usize));
        }
        out
    }

    /// Coefficients as polynomials in `v`: entry `k` multiplies `v^k`.
    pub fn coeffs_in(&self, v: usize) -> Vec<MultiPoly> {
        let mut out = vec![MultiPoly::zero(); self.degree_in(v) as usize + 1];
        for (e, c) in &self.terms {
            let mut e2 = *e;
            e2[v] = 0;
            out[e[v] as usize].add_term(e2, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(v: usize, coeffs: &[MultiPoly]) -> Self {
        let mut out = MultiPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            for (e, r) in &c.terms {
                let mut e2 = *e;
                e2[v] += k as u32;
                out.add_term(e2, r.clone());
            }
        }
        out
    }

    pub fn lead_coeff_in(&self, v: usize) -> MultiPoly {
        self.coeffs_in(v).pop().unwrap_or_default()
    }

    pub fn derivative(&self, v: usize) -> Self {
        let mut out = MultiPoly::zero();
        for (e, c) in &self.terms {
            if e[v] > 0 {
                let mut e2 = *e;
                e2[v] -= 1;
                out.add_term(e2, c * Rational::from_integer(e[v].into()));
            }
        }
        out
    }

    fn leading(&self) -> Option<(&Exponent, &Rational)> {
        self.terms.iter().max_by(|a, b| grlex(a.0, b.0))
    }

    /// Exact division; fails unless `divisor` divides `self`.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let (de, dc) = divisor.leading().ok_or(Error::DivisionByZero)?;
        let (de, dc) = (*de, dc.clone());
        let mut rem = self.clone();
        let mut quotient = MultiPoly::zero();
        while let Some((re, rc)) = rem.leading() {
            if (0..4).any(|i| re[i] < de[i]) {
                return Err(Error::InexactDivision(format!("({self}) / ({divisor})")));
            }
            let qe = [re[0] - de[0], re[1] - de[1], re[2] - de[2], re[3] - de[3]];
            let q = MultiPoly::monomial(rc / &dc, qe);
            rem = rem.try_sub(&q.try_mul(divisor)?)?;
            quotient.add_term(qe, q.terms[&qe].clone());
        }
        Ok(quotient)
    }

    /// Pseudo-remainder of `self` by `b` with respect to `v`, i.e. the
    /// remainder of `lc(b)^(deg self - deg b + 1) * self`.
    pub fn prem(&self, b: &Self, v: usize) -> Result<Self> {
        let db = b.degree_in(v);
        let lb = b.lead_coeff_in(v);
        let mut r = self.clone();
        let mut steps = (self.degree_in(v) + 1).saturating_sub(db);
        while !r.is_zero() && r.degree_in(v) >= db {
            steps -= 1;
            let dr = r.degree_in(v);
            let lr = r.lead_coeff_in(v);
            let mut shift = [0; 4];
            shift[v] = dr - db;
            let term = lr.try_mul(&MultiPoly::monomial(Rational::one(), shift))?.try_mul(b)?;
            r = lb.try_mul(&r)?.try_sub(&term)?;
        }
        lb.pow(steps).try_mul(&r)
    }

    /// Content with respect to `v`: gcd of the coefficients in `v`.
    fn content_in(&self, v: usize) -> Result<Self> {
        let mut coeffs: Vec<MultiPoly> = self.coeffs_in(v).into_iter().filter(|c| !c.is_zero()).collect();
        coeffs.sort_by_key(|c| (c.total_degree(), c.num_terms()));
        let mut g = MultiPoly::zero();
        for c in coeffs {
            g = MultiPoly::gcd(&g, &c)?;
            if g.is_constant() {
                break;
            }
        }
        Ok(g)
    }

    fn primitive_in(&self, v: usize) -> Result<Self> {
        if self.is_zero() {
            return Ok(MultiPoly::zero());
        }
        self.div_exact(&self.content_in(v)?)
    }

    /// Greatest common divisor, normalized (see [`MultiPoly::normalized`]).
    pub fn gcd(a: &Self, b: &Self) -> Result<Self> {
        if a.is_zero() {
            return Ok(b.normalized());
        }
        if b.is_zero() {
            return Ok(a.normalized());
        }
        if a.is_constant() || b.is_constant() {
            return Ok(MultiPoly::one());
        }
        let Some(v) = (0..4).rev().find(|&v| !a.is_free_of(v) || !b.is_free_of(v)) else {
            return Ok(MultiPoly::one());
        };
        if a.is_free_of(v) {
            return MultiPoly::gcd(a, &b.content_in(v)?);
        }
        if b.is_free_of(v) {
            return MultiPoly::gcd(&a.content_in(v)?, b);
        }
        let content = MultiPoly::gcd(&a.content_in(v)?, &b.content_in(v)?)?;
        let (mut p, mut q) = (a.primitive_in(v)?, b.primitive_in(v)?);
        if p.degree_in(v) < q.degree_in(v) {
            std::mem::swap(&mut p, &mut q);
        }
        // Subresultant remainder sequence: the divisions by `g * h^delta`
        // are exact and keep coefficient growth polynomial.
        let mut g = MultiPoly::one();
        let mut h = MultiPoly::one();
        let last = loop {
            let delta = p.degree_in(v) - q.degree_in(v);
            let r = p.prem(&q, v)?;
            if r.is_zero() {
                break q;
            }
            if r.is_free_of(v) {
                break MultiPoly::one();
            }
            p = q;
            q = r.div_exact(&g.try_mul(&h.pow(delta))?)?;
            g = p.lead_coeff_in(v);
            h = match delta {
                0 => h,
                1 => g.clone(),
                _ => g.pow(delta).div_exact(&h.pow(delta - 1))?,
            };
        };
        let g = last.primitive_in(v)?;
        Ok(content.try_mul(&g)?.normalized())
    }

    /// Product of the distinct irreducible factors, normalized.
    pub fn squarefree_part(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(MultiPoly::zero());
        }
        let mut g = self.clone();
        for v in 0..4 {
            if !self.is_free_of(v) {
                g = MultiPoly::gcd(&g, &self.derivative(v))?;
            }
        }
        Ok(self.div_exact(&g)?.normalized())
    }

    /// Number of times `factor` divides `self`.
    pub fn multiplicity(&self, factor: &Self) -> Result<u32> {
        if factor.is_constant() || self.is_zero() {
            return Err(Error::InvalidArgument(
                "multiplicity needs a nonzero dividend and a nonconstant factor".into(),
            ));
        }
        let mut count = 0;
        let mut rest = self.clone();
        while let Ok(q) = rest.div_exact(factor) {
            rest = q;
            count += 1;
        }
        Ok(count)
    }

    /// Integer coefficients with gcd 1 and a positive leading coefficient.
    pub fn normalized(&self) -> Self {
        if self.is_zero() {
            return MultiPoly::zero();
        }
        let lcm = self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let gcd = self
            .terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(&(c.numer() * (&lcm / c.denom()))));
        let mut factor = Rational::new(lcm, gcd);
        if self.leading().is_some_and(|(_, c)| c.is_negative()) {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// True when `self = ±other` after normalization.
    pub fn equals_up_to_scalar(&self, other: &Self) -> bool {
        self.normalized() == other.normalized()
    }

    /// Resultant with respect to `v`, via the Sylvester matrix.
    pub fn resultant(&self, other: &Self, v: usize) -> Result<Self> {
        let (m, n) = (self.degree_in(v) as usize, other.degree_in(v) as usize);
        if m == 0 || n == 0 {
            return Err(Error::DegenerateInput(format!(
                "resultant in `{}` needs positive degree (got {m} and {n})",
                VARIABLES[v]
            )));
        }
        let size = m + n;
        let (a, b) = (self.coeffs_in(v), other.coeffs_in(v));
        let mut sylvester = Matrix::filled(size, size, &MultiPoly::zero());
        for i in 0..n {
            for (k, c) in a.iter().rev().enumerate() {
                sylvester.set(i, i + k, c.clone());
            }
        }
        for i in 0..m {
            for (k, c) in b.iter().rev().enumerate() {
                sylvester.set(n + i, i + k, c.clone());
            }
        }
        sylvester.det_bareiss()
    }

    /// Resultant with respect to the auxiliary variable `u`.
    pub fn resultant_in_u(&self, other: &Self) -> Result<Self> {
        self.resultant(other, U)
    }

    fn format_term(f: &mut fmt::Formatter<'_>, e: &Exponent, mag: &Rational) -> fmt::Result {
        let vars: Vec<String> = e
            .iter()
            .zip(VARIABLES)
            .filter(|(p, _)| **p > 0)
            .map(|(&p, v)| if p == 1 { v.to_string() } else { format!("{v}^{p}") })
            .collect();
        match (vars.is_empty(), mag.is_one()) {
            (true, _) => write!(f, "{}", fmt_rational(mag)),
            (false, true) => write!(f, "{}", vars.join("*")),
            (false, false) => write!(f, "{}*{}", fmt_rational(mag), vars.join("*")),
        }
    }
}

impl Ring for MultiPoly {
    fn zero_like(&self) -> Self {
        MultiPoly::zero()
    }
    fn one_like(&self) -> Self {
        MultiPoly::one()
    }
    fn is_zero(&self) -> bool {
        MultiPoly::is_zero(self)
    }
    fn try_add(&self, other: &Self) -> Result<Self> {
        MultiPoly::try_add(self, other)
    }
    fn try_sub(&self, other: &Self) -> Result<Self> {
        MultiPoly::try_sub(self, other)
    }
    fn try_mul(&self, other: &Self) -> Result<Self> {
        MultiPoly::try_mul(self, other)
    }
    fn neg(&self) -> Self {
        MultiPoly::neg(self)
    }
    fn div_exact(&self, other: &Self) -> Result<Self> {
        MultiPoly::div_exact(self, other)
    }
}

impl fmt::Display for MultiPoly {
    /// Terms in descending graded lexicographic order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| grlex(b.0, a.0));
        for (i, (e, c)) in terms.into_iter().enumerate() {
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            MultiPoly::format_term(f, e, &c.abs())?;
        }
        Ok(())
    }
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for MultiPoly {
    type Err = Error;

    /// Grammar: `2*x*y*z - x^2 - y^2 - 3*z^2 + 3`; factors joined by `*`.
    fn from_str(s: &str) -> Result<Self> {
        let mut out = MultiPoly::zero();
        for (negative, term) in split_terms(s)? {
            let mut coef = Rational::one();
            let mut exp = [0u32; 4];
            for factor in term.split('*') {
                let factor = strip_parens(factor);
                let mut chars = factor.chars();
                match chars.next() {
                    Some(c) if c.is_ascii_alphabetic() => {
                        let v = var_index(c)?;
                        let rest = chars.as_str();
                        let p = match rest.strip_prefix('^') {
                            Some(p) => p
                                .parse::<u32>()
                                .map_err(|_| Error::parse(format!("bad exponent in `{term}`")))?,
                            None if rest.is_empty() => 1,
                            None => return Err(Error::parse(format!("bad factor `{factor}`"))),
                        };
                        exp[v] += p;
                    }
                    Some(_) => coef *= parse_rational(factor)?,
                    None => return Err(Error::parse(format!("empty factor in `{term}`"))),
                }
            }
            out.add_term(exp, if negative { -coef } else { coef });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn mp(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    fn pt(x: i64, y: i64, z: i64, u: i64) -> [Scalar; 4] {
        [Scalar::int(x), Scalar::int(y), Scalar::int(z), Scalar::int(u)]
    }

    #[test]
    fn evaluation_examples() {
        let l3 = mp("2*x*y*z - x^2 - y^2 - 3*z^2 + 3");
        assert_eq!(l3.eval(&pt(2, 2, 1, 0)).unwrap(), Scalar::int(0));
        let plane = mp("x + y - z - 3");
        assert_eq!(plane.eval(&pt(4, 4, 5, 0)).unwrap(), Scalar::int(0));
        assert_eq!(plane.eval(&pt(0, 0, 0, 0)).unwrap(), Scalar::int(-3));
    }

    #[test]
    fn text_format() {
        let p = mp("2*x*y*z - x^2 - y^2 - 3*z^2 + 3");
        assert_eq!(p.to_string(), "2*x*y*z - x^2 - y^2 - 3*z^2 + 3");
        assert_eq!(mp("1/2*u^2 - z*u + 1").to_string(), "-z*u + 1/2*u^2 + 1");
        assert!("2*w".parse::<MultiPoly>().is_err());
        assert!("x^".parse::<MultiPoly>().is_err());
        assert!("x**y".parse::<MultiPoly>().is_err());
    }

    #[test]
    fn resultant_examples() {
        let q = mp("u^2 - z*u + 1");
        assert_eq!(q.resultant_in_u(&mp("u - 2")).unwrap(), mp("5 - 2*z"));
        assert_eq!(mp("u - 3").resultant_in_u(&mp("u - 7")).unwrap(), MultiPoly::int(-4));
        assert!(matches!(q.resultant_in_u(&mp("x + 1")), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn gcd_and_squarefree() {
        let f = mp("x + y - z - 3");
        let g = mp("x*y - 1");
        let p = f.pow(3).try_mul(&g).unwrap().scale(&rat(-6, 5));
        assert_eq!(p.squarefree_part().unwrap(), f.try_mul(&g).unwrap().normalized());
        assert_eq!(p.multiplicity(&f).unwrap(), 3);
        assert_eq!(
            MultiPoly::gcd(&p, &f.pow(2).try_mul(&mp("z + 1")).unwrap()).unwrap(),
            f.pow(2)
        );
        assert_eq!(MultiPoly::gcd(&mp("x^2 - 1"), &mp("y")).unwrap(), MultiPoly::one());
        assert_eq!(mp("-3*x + 3").normalized(), mp("x - 1"));
        assert_eq!(mp("1/2*x + 1/3").normalized(), mp("3*x + 2"));
    }

    #[test]
    fn exact_division() {
        let f = mp("x + y - z - 3");
        let g = mp("x*y - u^2");
        assert_eq!(f.try_mul(&g).unwrap().div_exact(&g).unwrap(), f);
        assert!(matches!(
            mp("x^2 + 1").div_exact(&mp("x + 1")),
            Err(Error::InexactDivision(_))
        ));
    }

    fn small_poly() -> impl Strategy<Value = MultiPoly> {
        proptest::collection::vec(((0u32..3, 0u32..3, 0u32..2, 0u32..3), -4i64..5), 1..5).prop_map(|terms| {
            MultiPoly::from_terms(terms.into_iter().map(|((a, b, c, d), k)| ([a, b, c, d], rat(k, 1))))
        })
    }

    fn point() -> impl Strategy<Value = [Scalar; 4]> {
        proptest::array::uniform4(-5i64..6).prop_map(|[a, b, c, d]| pt(a, b, c, d))
    }

    proptest! {
        #[test]
        fn eval_is_homomorphism(p in small_poly(), q in small_poly(), at in point()) {
            let lhs = p.try_mul(&q).unwrap().eval(&at).unwrap();
            let rhs = p.eval(&at).unwrap().try_mul(&q.eval(&at).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn resultant_specializes(p in small_poly(), q in small_poly(), x in -3i64..4, y in -3i64..4, z in -3i64..4) {
            prop_assume!(p.degree_in(U) > 0 && q.degree_in(U) > 0);
            let specialize = |f: &MultiPoly| f.substitute(X, &rat(x, 1)).substitute(Y, &rat(y, 1)).substitute(Z, &rat(z, 1));
            let (ps, qs) = (specialize(&p), specialize(&q));
            prop_assume!(ps.degree_in(U) == p.degree_in(U) && qs.degree_in(U) == q.degree_in(U));
            let general = specialize(&p.resultant_in_u(&q).unwrap());
            prop_assert_eq!(general, ps.resultant_in_u(&qs).unwrap());
        }

        #[test]
        fn gcd_divides_both(p in small_poly(), q in small_poly(), r in small_poly()) {
            let a = p.try_mul(&r).unwrap();
            let b = q.try_mul(&r).unwrap();
            prop_assume!(!a.is_zero() && !b.is_zero());
            let g = MultiPoly::gcd(&a, &b).unwrap();
            prop_assert!(a.div_exact(&g).is_ok());
            prop_assert!(b.div_exact(&g).is_ok());
            prop_assert!(g.div_exact(&r.normalized()).is_ok());
        }

        #[test]
        fn text_round_trip(p in small_poly()) {
            prop_assert_eq!(p.to_string().parse::<MultiPoly>().unwrap(), p);
        }
    }
}
