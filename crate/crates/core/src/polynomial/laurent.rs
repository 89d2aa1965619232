use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::Ring;
use crate::scalar::{default_tolerance, Scalar, ScalarKind};

/// Laurent polynomial in `t` with scalar coefficients of a single kind.
///
/// Exact kinds never store a zero coefficient. Floating kinds additionally
/// drop a coefficient whenever an addition or multiplication cancels it below
/// the default tolerance relative to the magnitudes that produced it.
#[derive(Clone, Debug)]
pub struct LaurentPoly {
    kind: ScalarKind,
    terms: BTreeMap<i64, Scalar>,
}

impl LaurentPoly {
    pub fn zero(kind: ScalarKind) -> Self {
        LaurentPoly {
            kind,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(kind: ScalarKind) -> Self {
        LaurentPoly::constant(Scalar::one(kind))
    }

    pub fn constant(c: Scalar) -> Self {
        LaurentPoly::monomial(c, 0)
    }

    pub fn monomial(c: Scalar, exp: i64) -> Self {
        let mut p = LaurentPoly::zero(c.kind());
        if !c.is_exactly_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    /// The variable `t` itself.
    pub fn t(kind: ScalarKind) -> Self {
        LaurentPoly::monomial(Scalar::one(kind), 1)
    }

    /// Builds a polynomial of the given kind; repeated exponents accumulate.
    pub fn from_terms(kind: ScalarKind, terms: impl IntoIterator<Item = (i64, Scalar)>) -> Result<Self> {
        let mut p = LaurentPoly::zero(kind);
        for (e, c) in terms {
            p = p.try_add(&LaurentPoly::monomial(c.promote(kind)?, e))?;
        }
        Ok(p)
    }

    /// Integer coefficients listed from exponent `low` upwards.
    pub fn from_ints(low: i64, coeffs: &[i64]) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (low + i as i64, Scalar::int(c)));
        LaurentPoly::from_terms(ScalarKind::Rational, terms).expect("rational coefficients")
    }

    pub fn kind(&self) -> ScalarKind {
        self.kind
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exp: i64) -> Scalar {
        self.terms.get(&exp).cloned().unwrap_or_else(|| Scalar::zero(self.kind))
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Highest minus lowest exponent; `None` for the zero polynomial.
    pub fn degree_span(&self) -> Option<i64> {
        Some(self.max_exponent()? - self.min_exponent()?)
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(Scalar::abs).fold(0.0, f64::max)
    }

    pub fn promote(&self, kind: ScalarKind) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|(&e, c)| Ok((e, c.promote(kind)?)))
            .collect::<Result<_>>()?;
        Ok(LaurentPoly { kind, terms })
    }

    fn unify(&self, other: &Self) -> Result<(Self, Self)> {
        let k = self.kind.unify(other.kind)?;
        Ok((self.promote(k)?, other.promote(k)?))
    }

    /// Inserts `c` at `exp`, dropping it if it vanishes relative to `scale`.
    fn put(&mut self, exp: i64, c: Scalar, scale: f64) {
        let drop = match c {
            Scalar::Complex(_) => c.zero_test(default_tolerance(), scale),
            _ => c.is_exactly_zero(),
        };
        if drop {
            self.terms.remove(&exp);
        } else {
            self.terms.insert(exp, c);
        }
    }

    fn combine(&self, other: &Self, subtract: bool) -> Result<Self> {
        let (a, b) = self.unify(other)?;
        let mut out = a.clone();
        for (&e, c) in &b.terms {
            match a.terms.get(&e) {
                Some(x) => {
                    let v = if subtract { x.try_sub(c)? } else { x.try_add(c)? };
                    out.put(e, v, x.abs().max(c.abs()));
                }
                None => {
                    out.terms.insert(e, if subtract { c.neg() } else { c.clone() });
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.combine(other, false)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, true)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.unify(other)?;
        let mut acc: BTreeMap<i64, (Scalar, f64)> = BTreeMap::new();
        for (&ea, ca) in &a.terms {
            for (&eb, cb) in &b.terms {
                let p = ca.try_mul(cb)?;
                let mag = p.abs();
                match acc.get_mut(&(ea + eb)) {
                    Some((s, m)) => {
                        *s = s.try_add(&p)?;
                        *m = m.max(mag);
                    }
                    None => {
                        acc.insert(ea + eb, (p, mag));
                    }
                }
            }
        }
        let mut out = LaurentPoly::zero(a.kind);
        for (e, (c, m)) in acc {
            out.put(e, c, m);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            kind: self.kind,
            terms: self.terms.iter().map(|(&e, c)| (e, c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Result<Self> {
        self.try_mul(&LaurentPoly::constant(c.clone()))
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            kind: self.kind,
            terms: self.terms.iter().map(|(&e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut out = LaurentPoly::one(self.kind);
        for _ in 0..e {
            out = out.try_mul(self)?;
        }
        Ok(out)
    }

    pub fn eval(&self, t: &Scalar) -> Result<Scalar> {
        let inv = if self.min_exponent().is_some_and(|e| e < 0) {
            Some(t.try_inv()?)
        } else {
            None
        };
        let mut acc = Scalar::zero(self.kind.unify(t.kind())?);
        for (&e, c) in &self.terms {
            let base = if e < 0 {
                inv.clone().expect("inverse computed for negative exponents")
            } else {
                t.clone()
            };
            acc = acc.try_add(&c.try_mul(&base.pow(e.unsigned_abs() as u32)?)?)?;
        }
        Ok(acc)
    }

    /// Drops coefficients with magnitude at most `tol` times the largest one.
    /// Exact polynomials are returned unchanged.
    pub fn trimmed(&self, tol: f64) -> Self {
        if self.kind.is_exact() {
            return self.clone();
        }
        let cutoff = tol * self.max_abs();
        let terms = self
            .terms
            .iter()
            .filter(|(_, c)| c.abs() > cutoff)
            .map(|(&e, c)| (e, c.clone()))
            .collect();
        LaurentPoly { kind: self.kind, terms }
    }

    /// Shifts so the lowest exponent is zero.
    pub fn normalized_shift(&self) -> Self {
        self.shift(-self.min_exponent().unwrap_or(0))
    }

    /// True when `self = c * t^k * other` for some nonzero scalar `c`.
    pub fn equals_up_to_monomial(&self, other: &Self) -> bool {
        self.unit_ratio(other).is_some()
    }

    /// True when `self = ±t^k * other`.
    pub fn equals_up_to_sign_shift(&self, other: &Self) -> bool {
        self.unit_ratio(other).is_some_and(|c| c.is_one() || c.neg().is_one())
    }

    /// The scalar `c` with `self = c * t^k * other`, if any.
    fn unit_ratio(&self, other: &Self) -> Option<Scalar> {
        if self.is_zero() || other.is_zero() {
            return (self.is_zero() && other.is_zero()).then(|| Scalar::one(self.kind));
        }
        if self.num_terms() != other.num_terms() {
            return None;
        }
        let k = self.min_exponent()? - other.min_exponent()?;
        let (e0, c0) = self.terms.iter().next()?;
        let ratio = c0.try_div(&other.coefficient(e0 - k)).ok()?;
        let scale = self.max_abs().max(1.0);
        let ok = self.terms.iter().all(|(&e, c)| {
            other.terms.get(&(e - k)).is_some_and(|d| {
                ratio
                    .try_mul(d)
                    .and_then(|p| p.try_sub(c))
                    .is_ok_and(|diff| diff.zero_test(default_tolerance(), scale))
            })
        });
        ok.then_some(ratio)
    }

    /// Exact division. Floating inputs accept a remainder below `1e-6`
    /// relative to the dividend.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let (mut rem, d) = self.unify(divisor)?;
        let (Some(d_max), Some(d_span)) = (d.max_exponent(), d.degree_span()) else {
            return Err(Error::DivisionByZero);
        };
        let d_lead = d.terms[&d_max].clone();
        let mut quotient = LaurentPoly::zero(rem.kind);
        while let (Some(r_max), Some(r_span)) = (rem.max_exponent(), rem.degree_span()) {
            if r_span < d_span {
                break;
            }
            let c = rem.terms[&r_max].try_div(&d_lead)?;
            let q = LaurentPoly::monomial(c, r_max - d_max);
            rem = rem.try_sub(&q.try_mul(&d)?)?;
            rem.terms.remove(&r_max);
            quotient = quotient.try_add(&q)?;
        }
        let exact = if rem.kind.is_exact() {
            rem.is_zero()
        } else {
            rem.max_abs() <= 1e-6 * self.max_abs()
        };
        if exact {
            Ok(quotient)
        } else {
            Err(Error::InexactDivision(format!("({self}) / ({divisor})")))
        }
    }
}

/// `span(num) - span(den)`; `None` encodes a zero numerator (degree -inf).
pub fn rational_degree(num: &LaurentPoly, den: &LaurentPoly) -> Result<Option<i64>> {
    let den_span = den.degree_span().ok_or(Error::ZeroDenominator)?;
    Ok(num.degree_span().map(|s| s - den_span))
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(&other.terms)
                .all(|((ea, ca), (eb, cb))| ea == eb && ca == cb)
    }
}

impl Ring for LaurentPoly {
    fn zero_like(&self) -> Self {
        LaurentPoly::zero(self.kind)
    }
    fn one_like(&self) -> Self {
        LaurentPoly::one(self.kind)
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn try_add(&self, other: &Self) -> Result<Self> {
        LaurentPoly::try_add(self, other)
    }
    fn try_sub(&self, other: &Self) -> Result<Self> {
        LaurentPoly::try_sub(self, other)
    }
    fn try_mul(&self, other: &Self) -> Result<Self> {
        LaurentPoly::try_mul(self, other)
    }
    fn neg(&self) -> Self {
        LaurentPoly::neg(self)
    }
    fn div_exact(&self, other: &Self) -> Result<Self> {
        LaurentPoly::div_exact(self, other)
    }
}

fn needs_parens(c: &Scalar) -> bool {
    !matches!(c, Scalar::Rational(_))
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&e, c)) in self.terms.iter().enumerate() {
            let (negative, mag) = match c {
                Scalar::Rational(r) if r < &num_traits::Zero::zero() => (true, c.neg()),
                _ => (false, c.clone()),
            };
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let var = match e {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{e}"),
            };
            if var.is_empty() {
                if needs_parens(&mag) {
                    write!(f, "({mag})")?
                } else {
                    write!(f, "{mag}")?
                }
            } else if mag.is_one() && !needs_parens(&mag) {
                write!(f, "{var}")?;
            } else if needs_parens(&mag) {
                write!(f, "({mag})*{var}")?;
            } else {
                write!(f, "{mag}*{var}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Splits a sum into signed terms at top-level `+`/`-` signs.
pub(crate) fn split_terms(s: &str) -> Result<Vec<(bool, String)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    let mut negative = false;
    let mut prev: Option<char> = None;
    for ch in s.chars().filter(|c| !c.is_whitespace()) {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return Err(Error::parse(format!("unbalanced parentheses in `{s}`")));
        }
        let unary_context = matches!(prev, Some('^' | '*' | '/' | '(' | 'e' | 'E'));
        if depth == 0 && (ch == '+' || ch == '-') && !unary_context {
            if !current.is_empty() {
                out.push((negative, std::mem::take(&mut current)));
            } else if prev.is_some() {
                return Err(Error::parse(format!("dangling sign in `{s}`")));
            }
            negative = ch == '-';
        } else {
            current.push(ch);
        }
        prev = Some(ch);
    }
    if depth != 0 {
        return Err(Error::parse(format!("unbalanced parentheses in `{s}`")));
    }
    if current.is_empty() {
        return Err(Error::parse(format!("empty term in `{s}`")));
    }
    out.push((negative, current));
    Ok(out)
}

pub(crate) fn strip_parens(s: &str) -> &str {
    s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(s)
}

impl FromStr for LaurentPoly {
    type Err = Error;

    /// Grammar: `3*t^-2 + 1 - t^4`; non-rational coefficients go in parentheses.
    fn from_str(s: &str) -> Result<Self> {
        let mut parsed = Vec::new();
        for (negative, term) in split_terms(s)? {
            let (coef, exp) = match term.rfind('t') {
                Some(pos) if !term[pos..].contains(')') => {
                    let head = term[..pos].strip_suffix('*').unwrap_or(&term[..pos]);
                    let tail = &term[pos + 1..];
                    let exp = match tail.strip_prefix('^') {
                        Some(e) => strip_parens(e)
                            .parse::<i64>()
                            .map_err(|_| Error::parse(format!("bad exponent in `{term}`")))?,
                        None if tail.is_empty() => 1,
                        None => return Err(Error::parse(format!("unexpected `{tail}` in `{term}`"))),
                    };
                    if !term[..pos].is_empty() && !term[..pos].ends_with('*') {
                        return Err(Error::parse(format!("missing `*` in `{term}`")));
                    }
                    (head, exp)
                }
                _ => (term.as_str(), 0),
            };
            let c = if coef.is_empty() {
                Scalar::int(1)
            } else {
                strip_parens(coef).parse::<Scalar>()?
            };
            parsed.push((exp, if negative { c.neg() } else { c }));
        }
        let kind = parsed
            .iter()
            .try_fold(ScalarKind::Rational, |k, (_, c)| k.unify(c.kind()))?;
        LaurentPoly::from_terms(kind, parsed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lp(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn ring_examples() {
        let p = lp("t + t^-1");
        assert_eq!(p.try_mul(&p).unwrap(), lp("t^2 + 2 + t^-2"));
        assert!(p.try_mul(&LaurentPoly::zero(ScalarKind::Rational)).unwrap().is_zero());
        assert_eq!(lp("t - 1").try_mul(&lp("t^2 + t + 1")).unwrap(), lp("t^3 - 1"));
    }

    #[test]
    fn spans() {
        assert_eq!(lp("t^3 + t^-1").degree_span(), Some(4));
        assert_eq!(lp("7").degree_span(), Some(0));
        assert_eq!(lp("0").degree_span(), None);
        assert_eq!(rational_degree(&lp("t^4 + 1"), &lp("t^2 - 1")).unwrap(), Some(2));
        assert_eq!(rational_degree(&lp("t^2 - 1"), &lp("t - 1")).unwrap(), Some(1));
        assert_eq!(rational_degree(&lp("t"), &lp("0")), Err(Error::ZeroDenominator));
    }

    #[test]
    fn text_format() {
        let p = lp("3*t^-2 + 1 - t^4");
        assert_eq!(p.coefficient(-2), Scalar::int(3));
        assert_eq!(p.to_string(), "3*t^-2 + 1 - t^4");
        assert_eq!(lp("-t + 1/2").to_string(), "1/2 - t");
        let q = lp("(1 + 1*sqrt(-3))*t - 2");
        assert_eq!(q.kind(), ScalarKind::Quad(-3));
        assert_eq!(lp(&q.to_string()), q);
        assert!("3t".parse::<LaurentPoly>().is_err());
        assert!("t^".parse::<LaurentPoly>().is_err());
        assert!("1 +".parse::<LaurentPoly>().is_err());
    }

    #[test]
    fn exact_division() {
        let num = lp("t^3 - 1");
        assert_eq!(num.div_exact(&lp("t - 1")).unwrap(), lp("t^2 + t + 1"));
        assert_eq!(lp("t^-1 - t").div_exact(&lp("1 - t")).unwrap(), lp("t^-1 + 1"));
        assert!(matches!(
            lp("t^2 + 1").div_exact(&lp("t - 1")),
            Err(Error::InexactDivision(_))
        ));
        let f = lp("t^3 - 1").promote(ScalarKind::Complex).unwrap();
        let g = f.div_exact(&lp("t - 1").promote(ScalarKind::Complex).unwrap()).unwrap();
        assert!(g.equals_up_to_sign_shift(&lp("t^2 + t + 1")));
    }

    #[test]
    fn float_cancellation_and_trim() {
        let a = LaurentPoly::from_terms(ScalarKind::Complex, [(0, Scalar::complex(0.1 + 0.2, 0.0))]).unwrap();
        let b = LaurentPoly::from_terms(ScalarKind::Complex, [(0, Scalar::complex(0.3, 0.0))]).unwrap();
        assert!(a.try_sub(&b).unwrap().is_zero());
        let noisy = LaurentPoly::from_terms(
            ScalarKind::Complex,
            [
                (0, Scalar::complex(1.0, 0.0)),
                (1, Scalar::complex(1e-14, 0.0)),
                (2, Scalar::complex(3.0, 0.0)),
            ],
        )
        .unwrap();
        assert_eq!(noisy.trimmed(1e-9).degree_span(), Some(2));
        assert_eq!(noisy.trimmed(1e-9).num_terms(), 2);
    }

    #[test]
    fn units() {
        assert!(lp("t^2 - t + 1").equals_up_to_sign_shift(&lp("-t^-1 + 1 - t")));
        assert!(!lp("t^2 - t + 1").equals_up_to_sign_shift(&lp("2*t^2 - 2*t + 2")));
        assert!(lp("t^2 - t + 1").equals_up_to_monomial(&lp("2*t^2 - 2*t + 2")));
        assert!(!lp("t^2 - t + 1").equals_up_to_monomial(&lp("t^2 + t + 1")));
    }

    fn poly() -> impl Strategy<Value = LaurentPoly> {
        (-3i64..3, proptest::collection::vec(-5i64..6, 0..5)).prop_map(|(lo, c)| LaurentPoly::from_ints(lo, &c))
    }

    proptest! {
        #[test]
        fn span_additive(p in poly(), q in poly()) {
            prop_assume!(!p.is_zero() && !q.is_zero());
            let pq = p.try_mul(&q).unwrap();
            prop_assert_eq!(pq.degree_span().unwrap(), p.degree_span().unwrap() + q.degree_span().unwrap());
        }

        #[test]
        fn ring_axioms(p in poly(), q in poly(), r in poly()) {
            let lhs = p.try_mul(&q.try_add(&r).unwrap()).unwrap();
            let rhs = p.try_mul(&q).unwrap().try_add(&p.try_mul(&r).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(p.try_mul(&q).unwrap(), q.try_mul(&p).unwrap());
        }

        #[test]
        fn division_inverts_multiplication(p in poly(), q in poly()) {
            prop_assume!(!q.is_zero());
            let pq = p.try_mul(&q).unwrap();
            prop_assert_eq!(pq.div_exact(&q).unwrap(), p);
        }

        #[test]
        fn eval_is_homomorphism(p in poly(), q in poly(), t in 1i64..5) {
            let t = Scalar::int(t);
            let lhs = p.try_mul(&q).unwrap().eval(&t).unwrap();
            let rhs = p.eval(&t).unwrap().try_mul(&q.eval(&t).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn text_round_trip(p in poly()) {
            prop_assert_eq!(p.to_string().parse::<LaurentPoly>().unwrap(), p);
        }
    }
}
