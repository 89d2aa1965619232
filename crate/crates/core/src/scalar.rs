//! Field arithmetic: exact rationals, quadratic extensions `Q(sqrt d)` and
//! tolerance-aware double precision complex numbers.
//!
//! Every scalar carries its kind. Rationals embed into any other kind on
//! demand; two different extensions, or an extension and a float, never mix.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type ComplexF = Complex64;

/// Relative zero tolerance used when a computation does not pass its own.
pub const BUILTIN_TOLERANCE: f64 = 1e-9;

static DEFAULT_TOLERANCE: OnceLock<f64> = OnceLock::new();

/// The module-wide default zero tolerance for floating scalars.
pub fn default_tolerance() -> f64 {
    *DEFAULT_TOLERANCE.get_or_init(|| BUILTIN_TOLERANCE)
}

/// Sets the default tolerance. Only succeeds once, before the first read.
pub fn init_default_tolerance(tol: f64) -> Result<()> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    DEFAULT_TOLERANCE
        .set(tol)
        .map_err(|_| Error::InvalidArgument("default tolerance already initialised".into()))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub(crate) fn is_squarefree(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    let mut m = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= m {
        if m % (p * p) == 0 {
            return false;
        }
        if m % p == 0 {
            m /= p;
        }
        p += 1;
    }
    true
}

/// Element `a + b*sqrt(d)` of the quadratic field `Q(sqrt d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: Rational,
    b: Rational,
    d: i64,
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational, d: i64) -> Result<Self> {
        if d == 1 || !is_squarefree(d) {
            return Err(Error::BadDiscriminant(d));
        }
        Ok(QuadExt { a, b, d })
    }

    /// `sqrt(d)` itself.
    pub fn sqrt_of(d: i64) -> Result<Self> {
        QuadExt::new(Rational::zero(), Rational::one(), d)
    }

    pub fn from_rational(a: Rational, d: i64) -> Result<Self> {
        QuadExt::new(a, Rational::zero(), d)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.d != other.d {
            return Err(Error::MixedExtension(self.d, other.d));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(QuadExt {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            d: self.d,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(QuadExt {
            a: &self.a - &other.a,
            b: &self.b - &other.b,
            d: self.d,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let d = rat_int(self.d);
        Ok(QuadExt {
            a: &self.a * &other.a + &self.b * &other.b * d,
            b: &self.a * &other.b + &self.b * &other.a,
            d: self.d,
        })
    }

    pub fn neg(&self) -> Self {
        QuadExt {
            a: -&self.a,
            b: -&self.b,
            d: self.d,
        }
    }

    pub fn conjugate(&self) -> Self {
        QuadExt {
            a: self.a.clone(),
            b: -&self.b,
            d: self.d,
        }
    }

    /// Field norm `a^2 - d b^2`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * rat_int(self.d)
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(QuadExt {
            a: &self.a / &n,
            b: -&self.b / &n,
            d: self.d,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn to_complex(&self) -> ComplexF {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let root = if self.d < 0 {
            ComplexF::new(0.0, (-self.d as f64).sqrt())
        } else {
            ComplexF::new((self.d as f64).sqrt(), 0.0)
        };
        ComplexF::new(a, 0.0) + root * b
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScalarKind {
    Rational,
    Quad(i64),
    Complex,
}

impl ScalarKind {
    pub fn is_exact(self) -> bool {
        !matches!(self, ScalarKind::Complex)
    }

    /// Smallest kind both arguments embed into.
    pub fn unify(self, other: ScalarKind) -> Result<ScalarKind> {
        use ScalarKind::*;
        match (self, other) {
            (Rational, k) | (k, Rational) => Ok(k),
            (Quad(d), Quad(e)) if d == e => Ok(Quad(d)),
            (Quad(d), Quad(e)) => Err(Error::MixedExtension(d, e)),
            (Complex, Complex) => Ok(Complex),
            (a, b) => Err(Error::MixedScalarKind(a.to_string(), b.to_string())),
        }
    }
}

impl fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarKind::Rational => write!(f, "rational"),
            ScalarKind::Quad(d) => write!(f, "quad({d})"),
            ScalarKind::Complex => write!(f, "complex"),
        }
    }
}

impl FromStr for ScalarKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "rational" => Ok(ScalarKind::Rational),
            "complex" => Ok(ScalarKind::Complex),
            _ => {
                let d = s
                    .strip_prefix("quad(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|r| r.trim().parse::<i64>().ok())
                    .ok_or_else(|| Error::parse(format!("unknown scalar kind `{s}`")))?;
                if d == 1 || !is_squarefree(d) {
                    return Err(Error::BadDiscriminant(d));
                }
                Ok(ScalarKind::Quad(d))
            }
        }
    }
}

/// A field element of one of the supported kinds.
#[derive(Clone, Debug)]
pub enum Scalar {
    Rational(Rational),
    Quad(QuadExt),
    Complex(ComplexF),
}

fn finite(z: ComplexF) -> Result<Scalar> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(Scalar::Complex(z))
    } else {
        Err(Error::NonFinite)
    }
}

impl Scalar {
    pub fn zero(kind: ScalarKind) -> Scalar {
        Scalar::from_i64(0, kind)
    }

    pub fn one(kind: ScalarKind) -> Scalar {
        Scalar::from_i64(1, kind)
    }

    pub fn from_i64(n: i64, kind: ScalarKind) -> Scalar {
        Scalar::from_rational(rat_int(n), kind)
    }

    pub fn from_rational(r: Rational, kind: ScalarKind) -> Scalar {
        match kind {
            ScalarKind::Rational => Scalar::Rational(r),
            ScalarKind::Quad(d) => Scalar::Quad(QuadExt {
                a: r,
                b: Rational::zero(),
                d,
            }),
            ScalarKind::Complex => Scalar::Complex(ComplexF::new(r.to_f64().unwrap_or(f64::NAN), 0.0)),
        }
    }

    pub fn int(n: i64) -> Scalar {
        Scalar::Rational(rat_int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Scalar {
        Scalar::Rational(rat(n, d))
    }

    pub fn complex(re: f64, im: f64) -> Scalar {
        Scalar::Complex(ComplexF::new(re, im))
    }

    pub fn kind(&self) -> ScalarKind {
        match self {
            Scalar::Rational(_) => ScalarKind::Rational,
            Scalar::Quad(q) => ScalarKind::Quad(q.d),
            Scalar::Complex(_) => ScalarKind::Complex,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.kind().is_exact()
    }

    /// Re-expresses `self` in `kind`. Rationals embed everywhere; a quadratic
    /// element only embeds into its own field.
    pub fn promote(&self, kind: ScalarKind) -> Result<Scalar> {
        match (self, kind) {
            (Scalar::Rational(r), k) => Ok(Scalar::from_rational(r.clone(), k)),
            (s, k) if s.kind() == k => Ok(s.clone()),
            (s, k) => Err(Error::ScalarEmbedding {
                from: s.kind().to_string(),
                into: k.to_string(),
            }),
        }
    }

    /// Lossy conversion to a double precision complex number. The square root
    /// of a negative discriminant is taken on the positive imaginary axis.
    pub fn to_complex(&self) -> ComplexF {
        match self {
            Scalar::Rational(r) => ComplexF::new(r.to_f64().unwrap_or(f64::NAN), 0.0),
            Scalar::Quad(q) => q.to_complex(),
            Scalar::Complex(z) => *z,
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rational(r) => Some(r),
            _ => None,
        }
    }

    /// Magnitude as a double.
    pub fn abs(&self) -> f64 {
        self.to_complex().norm()
    }

    fn pair(&self, other: &Scalar) -> Result<(Scalar, Scalar)> {
        let k = self.kind().unify(other.kind())?;
        Ok((self.promote(k)?, other.promote(k)?))
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        match self.pair(other)? {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a + b)),
            (Scalar::Quad(a), Scalar::Quad(b)) => Ok(Scalar::Quad(a.add(&b)?)),
            (Scalar::Complex(a), Scalar::Complex(b)) => finite(a + b),
            _ => unreachable!("pair() returns equal kinds"),
        }
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        match self.pair(other)? {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a - b)),
            (Scalar::Quad(a), Scalar::Quad(b)) => Ok(Scalar::Quad(a.sub(&b)?)),
            (Scalar::Complex(a), Scalar::Complex(b)) => finite(a - b),
            _ => unreachable!("pair() returns equal kinds"),
        }
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        match self.pair(other)? {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a * b)),
            (Scalar::Quad(a), Scalar::Quad(b)) => Ok(Scalar::Quad(a.mul(&b)?)),
            (Scalar::Complex(a), Scalar::Complex(b)) => finite(a * b),
            _ => unreachable!("pair() returns equal kinds"),
        }
    }

    /// Division. Floating divisors are rejected when they pass the default
    /// zero test.
    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        let (a, b) = self.pair(other)?;
        a.try_mul(&b.try_inv()?)
    }

    pub fn try_inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            Scalar::Rational(r) => Ok(Scalar::Rational(r.recip())),
            Scalar::Quad(q) => Ok(Scalar::Quad(q.inv()?)),
            Scalar::Complex(z) => finite(z.inv()),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Quad(q) => Scalar::Quad(q.neg()),
            Scalar::Complex(z) => Scalar::Complex(-z),
        }
    }

    pub fn pow(&self, e: u32) -> Result<Scalar> {
        let mut acc = Scalar::one(self.kind());
        for _ in 0..e {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    /// `a - b sqrt(d)` for extensions, complex conjugation for floats and the
    /// identity on rationals.
    pub fn conjugate(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(r.clone()),
            Scalar::Quad(q) => Scalar::Quad(q.conjugate()),
            Scalar::Complex(z) => Scalar::Complex(z.conj()),
        }
    }

    /// Zero test with the default tolerance and unit scale.
    pub fn is_zero(&self) -> bool {
        self.zero_test(default_tolerance(), 1.0)
    }

    /// Exact kinds: exactly zero. Floats: `|x| <= tol * scale`.
    pub fn zero_test(&self, tol: f64, scale: f64) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Quad(q) => q.is_zero(),
            Scalar::Complex(z) => z.norm() <= tol * scale,
        }
    }

    /// Exact equality to zero, regardless of kind.
    pub fn is_exactly_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Quad(q) => q.is_zero(),
            Scalar::Complex(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self.try_sub(&Scalar::one(self.kind())) {
            Ok(d) => d.is_zero(),
            Err(_) => false,
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        match self.pair(other) {
            Ok((Scalar::Rational(a), Scalar::Rational(b))) => a == b,
            Ok((Scalar::Quad(a), Scalar::Quad(b))) => a == b,
            Ok((Scalar::Complex(a), Scalar::Complex(b))) => a == b,
            _ => false,
        }
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Rational(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<QuadExt> for Scalar {
    fn from(q: QuadExt) -> Self {
        Scalar::Quad(q)
    }
}

impl From<ComplexF> for Scalar {
    fn from(z: ComplexF) -> Self {
        Scalar::Complex(z)
    }
}

pub(crate) fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = fmt_rational(&self.a);
        if self.b.is_negative() {
            write!(f, "{a} - {}*sqrt({})", fmt_rational(&-&self.b), self.d)
        } else {
            write!(f, "{a} + {}*sqrt({})", fmt_rational(&self.b), self.d)
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{}", fmt_rational(r)),
            Scalar::Quad(q) => write!(f, "{q}"),
            Scalar::Complex(z) => {
                let sign = if z.im.is_sign_negative() { '-' } else { '+' };
                write!(f, "{:.16e}{}{:.16e}i", z.re, sign, z.im.abs())
            }
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::parse(format!("invalid rational `{s}`"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::parse(format!("zero denominator in `{s}`")));
    }
    Ok(Rational::new(n, d))
}

/// Splits `lhs (+|-) rhs` at the last sign that is a binary operator, i.e.
/// not at the start and not part of an exponent or a sign after an operator.
fn split_binary_sign(s: &str) -> Option<(&str, &str)> {
    let bytes = s.as_bytes();
    (1..bytes.len()).rev().find_map(|i| {
        let c = bytes[i];
        let prev = bytes[i - 1];
        let binary = (c == b'+' || c == b'-') && !matches!(prev, b'e' | b'E' | b'+' | b'-' | b'*' | b'/');
        binary.then(|| (&s[..i], &s[i..]))
    })
}

fn parse_signed_coefficient(s: &str) -> Result<Rational> {
    let s = s.strip_prefix('+').unwrap_or(s);
    match s {
        "" => Ok(Rational::one()),
        "-" => Ok(-Rational::one()),
        _ => match s.strip_prefix('-') {
            Some(rest) if rest.starts_with('-') => parse_rational(&rest[1..]),
            _ => parse_rational(s),
        },
    }
}

fn parse_float(s: &str) -> Result<f64> {
    let s = s.strip_prefix('+').unwrap_or(s);
    let v = match s {
        "" => 1.0,
        "-" => -1.0,
        _ => s
            .parse::<f64>()
            .map_err(|_| Error::parse(format!("invalid float `{s}`")))?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite)
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Scalar> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::parse("empty scalar"));
        }
        if let Some(pos) = compact.find("sqrt(") {
            let tail = &compact[pos + 5..];
            let close = tail
                .find(')')
                .ok_or_else(|| Error::parse(format!("unclosed sqrt in `{s}`")))?;
            if close + 1 != tail.len() {
                return Err(Error::parse(format!("trailing input after sqrt in `{s}`")));
            }
            let d: i64 = tail[..close]
                .parse()
                .map_err(|_| Error::parse(format!("invalid discriminant in `{s}`")))?;
            let head = compact[..pos].strip_suffix('*').unwrap_or(&compact[..pos]);
            let (a, b) = match split_binary_sign(head) {
                Some((a, b)) => (parse_rational(a)?, parse_signed_coefficient(b)?),
                None => (Rational::zero(), parse_signed_coefficient(head)?),
            };
            return Ok(Scalar::Quad(QuadExt::new(a, b, d)?));
        }
        if let Some(body) = compact.strip_suffix('i') {
            let (re, im) = match split_binary_sign(body) {
                Some((re, im)) => (parse_float(re)?, parse_float(im)?),
                None => (0.0, parse_float(body)?),
            };
            return Ok(Scalar::Complex(ComplexF::new(re, im)));
        }
        if compact.contains(['.', 'e', 'E']) {
            return Ok(Scalar::Complex(ComplexF::new(parse_float(&compact)?, 0.0)));
        }
        Ok(Scalar::Rational(parse_rational(&compact)?))
    }
}

/// Exact square root of a rational: a rational when it is a perfect square,
/// otherwise an element of `Q(sqrt d)` with `d` square-free.
pub fn sqrt_rational(r: &Rational) -> Result<Scalar> {
    if r.is_zero() {
        return Ok(Scalar::Rational(Rational::zero()));
    }
    // sqrt(p/q) = sqrt(p q) / q
    let n = r.numer() * r.denom();
    let (f, d) = split_square(&n)?;
    let coeff = Rational::new(f, r.denom().clone());
    if d.is_one() {
        return Ok(Scalar::Rational(coeff));
    }
    let d = d
        .to_i64()
        .ok_or_else(|| Error::InvalidArgument("discriminant too large".into()))?;
    Ok(Scalar::Quad(QuadExt::new(Rational::zero(), coeff, d)?))
}

/// Writes `n = f^2 d` with `d` square-free (sign carried by `d`).
fn split_square(n: &BigInt) -> Result<(BigInt, BigInt)> {
    let mut m = n.abs();
    let mut f = BigInt::one();
    let mut d = BigInt::one();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(1u64 << 40);
    while &p * &p <= m {
        if p > limit {
            return Err(Error::InvalidArgument(format!(
                "cannot factor {n} for an exact square root"
            )));
        }
        let mut e = 0u32;
        while m.is_multiple_of(&p) {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            f *= p.pow(e / 2);
            if e % 2 == 1 {
                d *= &p;
            }
        }
        p += 1;
    }
    d *= m;
    if n.is_negative() {
        d = -d;
    }
    Ok((f, d))
}

/// Orders complex numbers by real part, then imaginary part.
pub fn cmp_complex(a: &ComplexF, b: &ComplexF) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: (i64, i64), b: (i64, i64), d: i64) -> Scalar {
        Scalar::Quad(QuadExt::new(rat(a.0, a.1), rat(b.0, b.1), d).unwrap())
    }

    #[test]
    fn quad_inverse_by_conjugate() {
        let x = q((1, 1), (1, 1), -3);
        assert_eq!(x.try_inv().unwrap(), q((1, 4), (-1, 4), -3));
    }

    #[test]
    fn sqrt_squared() {
        let s = q((0, 1), (1, 1), -3);
        let sq = s.try_mul(&s).unwrap();
        assert_eq!(sq, Scalar::int(-3));
        assert_eq!(sq.kind(), ScalarKind::Quad(-3));
    }

    #[test]
    fn rational_inverse() {
        assert_eq!(Scalar::ratio(3, 4).try_inv().unwrap(), Scalar::ratio(4, 3));
    }

    #[test]
    fn zero_tests() {
        assert!(Scalar::ratio(0, 1).is_zero());
        assert!(Scalar::complex(1e-15, 0.0).zero_test(1e-9, 1.0));
        let s = q((0, 1), (1, 1), -3);
        let x = Scalar::int(2).try_sub(&s.try_mul(&Scalar::int(0)).unwrap()).unwrap();
        assert!(!x.is_zero());
    }

    #[test]
    fn conjugates() {
        assert_eq!(q((2, 1), (3, 1), -3).conjugate(), q((2, 1), (-3, 1), -3));
        assert_eq!(Scalar::ratio(5, 7).conjugate(), Scalar::ratio(5, 7));
        assert_eq!(Scalar::complex(1.0, -2.0).conjugate(), Scalar::complex(1.0, 2.0));
    }

    #[test]
    fn mixing_rules() {
        let a = q((1, 1), (1, 1), -3);
        let b = q((1, 1), (1, 1), 5);
        assert_eq!(a.try_add(&b), Err(Error::MixedExtension(-3, 5)));
        assert!(matches!(
            a.try_add(&Scalar::complex(1.0, 0.0)),
            Err(Error::MixedScalarKind(..))
        ));
        assert_eq!(a.try_add(&Scalar::int(1)).unwrap(), q((2, 1), (1, 1), -3));
        assert_eq!(Scalar::int(1).try_div(&Scalar::int(0)), Err(Error::DivisionByZero));
        assert_eq!(
            Scalar::complex(f64::MAX, 0.0).try_mul(&Scalar::complex(10.0, 0.0)),
            Err(Error::NonFinite)
        );
        assert_eq!(
            QuadExt::new(rat_int(1), rat_int(1), 12),
            Err(Error::BadDiscriminant(12))
        );
    }

    #[test]
    fn text_round_trip() {
        for s in [
            "3/4",
            "-7",
            "1/2 - 1/4*sqrt(-3)",
            "0 + 1*sqrt(5)",
            "-1.5000000000000000e0+2.0000000000000000e-3i",
        ] {
            let x: Scalar = s.parse().unwrap();
            assert_eq!(x.to_string(), s);
            assert_eq!(x.to_string().parse::<Scalar>().unwrap(), x);
        }
        let z: Scalar = "1e-3-2e+4i".parse().unwrap();
        assert_eq!(z, Scalar::complex(1e-3, -2e4));
        let w: Scalar = "sqrt(-3)".parse().unwrap();
        assert_eq!(w, q((0, 1), (1, 1), -3));
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(sqrt_rational(&rat(9, 4)).unwrap(), Scalar::ratio(3, 2));
        // sqrt(21) = sqrt(21), z = 5 gives z^2 - 4 = 21
        assert_eq!(sqrt_rational(&rat(21, 1)).unwrap(), q((0, 1), (1, 1), 21));
        // sqrt(-3/4) = (1/2) sqrt(-3)
        assert_eq!(sqrt_rational(&rat(-3, 4)).unwrap(), q((0, 1), (1, 2), -3));
        // sqrt(8/3) = sqrt(24)/3 = 2 sqrt(6)/3
        assert_eq!(sqrt_rational(&rat(8, 3)).unwrap(), q((0, 1), (2, 3), 6));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn exact() -> impl Strategy<Value = Scalar> {
            prop_oneof![
                (-50i64..50, 1i64..20).prop_map(|(n, d)| Scalar::ratio(n, d)),
                (-50i64..50, 1i64..20, -50i64..50, 1i64..20).prop_map(|(a, b, c, d)| q((a, b), (c, d), -3)),
            ]
        }

        proptest! {
            #[test]
            fn inverse_is_exact(x in exact()) {
                prop_assume!(!x.is_zero());
                prop_assert!(x.try_mul(&x.try_inv().unwrap()).unwrap().is_one());
                prop_assert_eq!(x.try_mul(&x.try_inv().unwrap()).unwrap(), Scalar::int(1));
            }

            #[test]
            fn norm_is_rational(x in exact()) {
                match x.try_mul(&x.conjugate()).unwrap() {
                    Scalar::Quad(n) => prop_assert!(n.b().is_zero()),
                    Scalar::Rational(_) => {}
                    Scalar::Complex(_) => prop_assert!(false),
                }
            }

            #[test]
            fn self_difference_is_zero(x in exact()) {
                prop_assert!(x.try_sub(&x).unwrap().is_zero());
            }
        }
    }
}
