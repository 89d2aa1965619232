//! Trace coordinates on the SL(2, C) character variety of the rank-two free
//! group, explicit lifts, and the loci where the pants fails to be an
//! `ι_N ∘ α` homology product.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::freegroup::{fox_derivative, Alphabet, Word};
use crate::linalg::Matrix;
use crate::polynomial::{poly_roots, MultiPoly, U, X, Y, Z};
use crate::precise::{self, Fixed};
use crate::representation::{Representation, SymPowerRep};
use crate::scalar::{default_tolerance, sqrt_rational, Rational, Scalar, ScalarKind};
use crate::suturedcert::{fox_matrix, pants_example, SuturedHandlebodyData};

/// Traces `(tr x, tr y, tr xy)` of a representation of `⟨x, y⟩`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Character {
    xbar: Scalar,
    ybar: Scalar,
    zbar: Scalar,
}

impl Character {
    /// Promotes the three coordinates to a common kind.
    pub fn new(xbar: Scalar, ybar: Scalar, zbar: Scalar) -> Result<Self> {
        let kind = xbar.kind().unify(ybar.kind())?.unify(zbar.kind())?;
        Ok(Character {
            xbar: xbar.promote(kind)?,
            ybar: ybar.promote(kind)?,
            zbar: zbar.promote(kind)?,
        })
    }

    pub fn from_ints(x: i64, y: i64, z: i64) -> Self {
        Character {
            xbar: Scalar::int(x),
            ybar: Scalar::int(y),
            zbar: Scalar::int(z),
        }
    }

    pub fn from_rationals(x: Rational, y: Rational, z: Rational) -> Self {
        Character {
            xbar: Scalar::Rational(x),
            ybar: Scalar::Rational(y),
            zbar: Scalar::Rational(z),
        }
    }

    pub fn from_complex(x: Complex64, y: Complex64, z: Complex64) -> Self {
        Character {
            xbar: Scalar::Complex(x),
            ybar: Scalar::Complex(y),
            zbar: Scalar::Complex(z),
        }
    }

    pub fn xbar(&self) -> &Scalar {
        &self.xbar
    }

    pub fn ybar(&self) -> &Scalar {
        &self.ybar
    }

    pub fn zbar(&self) -> &Scalar {
        &self.zbar
    }

    pub fn kind(&self) -> ScalarKind {
        self.xbar.kind()
    }

    pub fn to_complex(&self) -> Character {
        Character::from_complex(self.xbar.to_complex(), self.ybar.to_complex(), self.zbar.to_complex())
    }

    fn max_abs(&self) -> f64 {
        self.xbar.abs().max(self.ybar.abs()).max(self.zbar.abs())
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.xbar, self.ybar, self.zbar)
    }
}

impl FromStr for Character {
    type Err = Error;
    /// `(4, 4, 5)`; parentheses optional.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim();
        let inner = inner
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .unwrap_or(inner);
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::parse(format!("character `{s}` needs three coordinates")));
        }
        Character::new(parts[0].parse()?, parts[1].parse()?, parts[2].parse()?)
    }
}

/// `x̄² + ȳ² + z̄² − x̄ȳz̄ − 2`, the trace of `xyx⁻¹y⁻¹`.
pub fn commutator_trace(c: &Character) -> Scalar {
    let (x, y, z) = (&c.xbar, &c.ybar, &c.zbar);
    let eval = || -> Result<Scalar> {
        let sq = x.try_mul(x)?.try_add(&y.try_mul(y)?)?.try_add(&z.try_mul(z)?)?;
        let xyz = x.try_mul(y)?.try_mul(z)?;
        sq.try_sub(&xyz)?.try_sub(&Scalar::from_i64(2, c.kind()))
    };
    eval().expect("coordinates share one scalar kind")
}

/// Which root of `u² − z̄u + 1` the lift uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootChoice {
    /// `(z̄ + √(z̄² − 4)) / 2`.
    Principal,
    /// `(z̄ − √(z̄² − 4)) / 2 = u⁻¹`.
    Inverse,
}

/// A lifted representation with the root used and a reducibility flag.
#[derive(Clone, Debug)]
pub struct Lift {
    pub rep: Representation,
    pub u: Scalar,
    /// The character is reducible (commutator trace 2); the lift is still
    /// valid but not the unique one up to conjugacy.
    pub reducible: bool,
}

/// Alphabet `x y` used by every lift.
pub fn rank_two_alphabet() -> Alphabet {
    Alphabet::parse("x y").expect("static alphabet")
}

pub fn lift(c: &Character) -> Result<Lift> {
    lift_with(c, RootChoice::Principal)
}

/// `α(x) = [[0, 1], [−1, x̄]]`, `α(y) = [[ȳ, −u], [u⁻¹, 0]]` with `u + u⁻¹ = z̄`.
pub fn lift_with(c: &Character, choice: RootChoice) -> Result<Lift> {
    let (x, y, z) = (&c.xbar, &c.ybar, &c.zbar);
    let root = match c.kind() {
        ScalarKind::Rational => {
            let zr = z.as_rational().expect("rational kind");
            sqrt_rational(&(zr * zr - Rational::from_integer(4.into())))?
        }
        ScalarKind::Complex => {
            let zc = z.to_complex();
            Scalar::Complex((zc * zc - 4.0).sqrt())
        }
        ScalarKind::Quad(_) => {
            return Err(Error::InvalidArgument(
                "exact lifts need rational traces; use complex coordinates instead".into(),
            ))
        }
    };
    let kind = root.kind().unify(c.kind())?;
    let (x, y, z) = (x.promote(kind)?, y.promote(kind)?, z.promote(kind)?);
    let root = match choice {
        RootChoice::Principal => root.promote(kind)?,
        RootChoice::Inverse => root.promote(kind)?.neg(),
    };
    let u = z.try_add(&root)?.try_div(&Scalar::from_i64(2, kind))?;
    let rep = lift_from_root(&x, &y, &u)?;
    let kappa = commutator_trace(c).try_sub(&Scalar::from_i64(2, c.kind()))?;
    let reducible = if kappa.is_exact() {
        kappa.is_exactly_zero()
    } else {
        kappa.zero_test(default_tolerance(), (1.0 + c.max_abs()).powi(3))
    };
    Ok(Lift { rep, u, reducible })
}

/// The lift with a given `u`; its character is `(x̄, ȳ, u + u⁻¹)`.
pub fn lift_from_root(x: &Scalar, y: &Scalar, u: &Scalar) -> Result<Representation> {
    let kind = x.kind().unify(y.kind())?.unify(u.kind())?;
    let u_inv = u.try_inv()?.promote(kind)?;
    let zero = Scalar::zero(kind);
    let one = Scalar::one(kind);
    let ax = Matrix::from_rows(vec![vec![zero.clone(), one.clone()], vec![one.neg(), x.promote(kind)?]])?;
    let ay = Matrix::from_rows(vec![vec![y.promote(kind)?, u.neg().promote(kind)?], vec![u_inv, zero]])?;
    Representation::new(&rank_two_alphabet(), vec![ax, ay], true)
}

/// Determinant of the block Fox matrix under `ι_N ∘ lift(c)` together with
/// a magnitude scale for relative zero tests.
#[derive(Clone, Debug, Serialize)]
pub struct LocusValue {
    pub det: Scalar,
    pub scale: f64,
}

impl LocusValue {
    pub fn relative(&self) -> f64 {
        self.det.abs() / self.scale
    }

    /// Exact zero in exact mode, otherwise `relative() ≤ tol`.
    pub fn vanishes(&self, tol: f64) -> bool {
        if self.det.is_exact() {
            self.det.is_exactly_zero()
        } else {
            self.relative() <= tol
        }
    }
}

pub fn locus_eval(c: &Character, data: &SuturedHandlebodyData, n: usize) -> Result<LocusValue> {
    locus_eval_with(c, data, n, RootChoice::Principal)
}

/// As [`locus_eval`] with an explicit root choice.
pub fn locus_eval_with(
    c: &Character,
    data: &SuturedHandlebodyData,
    n: usize,
    choice: RootChoice,
) -> Result<LocusValue> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "symmetric power dimension must be at least 2, got {n}"
        )));
    }
    if data.ambient_rank() != 2 {
        return Err(Error::InvalidArgument("locus computations need rank-two data".into()));
    }
    let lifted = lift_with(c, choice)?;
    locus_value(lifted.rep, c.max_abs(), data, n)
}

fn locus_value(rep: Representation, size: f64, data: &SuturedHandlebodyData, n: usize) -> Result<LocusValue> {
    let m = if n == 2 {
        fox_matrix(data, &rep)?
    } else {
        fox_matrix(data, &SymPowerRep::new(rep, n)?)?
    };
    let det = m.det()?;
    // the block matrix has 2n rows; ι_N entries grow like |entry|^(N-1)
    let scale = (1.0 + size).powi(2 * n as i32 - 2).max(1.0);
    Ok(LocusValue { det, scale })
}

fn exact_f64(v: f64) -> Result<Rational> {
    Rational::from_float(v).ok_or(Error::NonFinite)
}

/// [`locus_eval`] at a numerically located point, free of floating-point
/// cancellation: `z̄` is polished as a root of `z_coeffs` (ascending) when
/// given, `u` as a root of `u² − z̄u + 1`, and the determinant is evaluated
/// in fixed point with hundreds of fractional bits.
pub fn locus_eval_refined(
    x: f64,
    y: f64,
    z: Complex64,
    z_coeffs: Option<&[Rational]>,
    data: &SuturedHandlebodyData,
    n: usize,
) -> Result<LocusValue> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "symmetric power dimension must be at least 2, got {n}"
        )));
    }
    if data.ambient_rank() != 2 {
        return Err(Error::InvalidArgument("locus computations need rank-two data".into()));
    }
    let (xf, yf) = (Fixed::rational(&exact_f64(x)?), Fixed::rational(&exact_f64(y)?));
    let zf = match z_coeffs {
        Some(c) => {
            let c: Vec<Fixed> = c.iter().map(Fixed::rational).collect();
            precise::newton(|t| precise::horner(&c, t), z)?
        }
        None => Fixed::complex(z)?,
    };
    let zc = zf.to_complex();
    let one = Fixed::int(1);
    let u = precise::newton(
        |t| (t.mul(t).sub(&zf.mul(t)).add(&one), t.add(t).sub(&zf)),
        (zc + (zc * zc - 4.0).sqrt()) / 2.0,
    )?;
    let det = Scalar::Complex(precise::fox_det(&xf, &yf, &u, data, n)?.to_complex());
    let size = x.abs().max(y.abs()).max(zc.norm());
    Ok(LocusValue {
        det,
        scale: (1.0 + size).powi(2 * n as i32 - 2),
    })
}

/// `det` of the block Fox matrix built with `ι_N ∘ lift(c)`.
pub fn locus_det(c: &Character, data: &SuturedHandlebodyData, n: usize) -> Result<Scalar> {
    Ok(locus_eval(c, data, n)?.det)
}

/// Image of a letter as `u^{-shift} · P` with `P` polynomial in `x̄, ȳ, u`.
fn letter_matrix(gen: usize, inverse: bool) -> (Matrix<MultiPoly>, u32) {
    let v = MultiPoly::var;
    let i = MultiPoly::int;
    let rows = match (gen, inverse) {
        (0, false) => vec![vec![i(0), i(1)], vec![i(-1), v(X)]],
        (0, true) => vec![vec![v(X), i(-1)], vec![i(1), i(0)]],
        (_, false) => vec![vec![v(Y).try_mul(&v(U)).unwrap(), v(U).pow(2).neg()], vec![i(1), i(0)]],
        (_, true) => vec![vec![i(0), v(U).pow(2)], vec![i(-1), v(Y).try_mul(&v(U)).unwrap()]],
    };
    (Matrix::from_rows(rows).expect("2x2"), if gen == 0 { 0 } else { 1 })
}

fn word_matrix(w: &Word) -> Result<(Matrix<MultiPoly>, u32)> {
    let mut acc = Matrix::identity(2, &MultiPoly::one());
    let mut shift = 0;
    for l in w.letters() {
        let (m, s) = letter_matrix(l.gen, l.inverse);
        acc = acc.try_mul(&m)?;
        shift += s;
    }
    Ok((acc, shift))
}

/// Result of eliminating `u` from the symbolic pants determinant.
#[derive(Clone, Debug, Serialize)]
pub struct Elimination {
    /// Squarefree, content-normalized polynomial in `x̄, ȳ, z̄`.
    pub locus: MultiPoly,
    /// Power of `locus` dividing the raw resultant.
    pub multiplicity: u32,
    /// The resultant before squarefree reduction.
    pub resultant: MultiPoly,
}

/// Symbolic `L₂` as a polynomial in `x̄, ȳ, z̄`.
pub fn eliminate_l2(data: &SuturedHandlebodyData) -> Result<MultiPoly> {
    Ok(eliminate_l2_report(data)?.locus)
}

pub fn eliminate_l2_report(data: &SuturedHandlebodyData) -> Result<Elimination> {
    if data.ambient_rank() != 2 {
        return Err(Error::InvalidArgument(
            "symbolic elimination needs rank-two data".into(),
        ));
    }
    let zero = MultiPoly::zero();
    let u = MultiPoly::var(U);
    let mut rows = Vec::new();
    for image in data.images() {
        // each block is u^{-shift} times a polynomial matrix; clear the
        // largest shift across the row so every entry is polynomial
        let mut blocks = Vec::new();
        for j in 0..2 {
            let d = fox_derivative(image, j)?;
            let terms: Vec<(Matrix<MultiPoly>, u32, Rational)> = d
                .terms()
                .map(|(w, c)| word_matrix(&w).map(|(m, s)| (m, s, Rational::from_integer((*c).into()))))
                .collect::<Result<_>>()?;
            blocks.push(terms);
        }
        let row_shift = blocks.iter().flatten().map(|(_, s, _)| *s).max().unwrap_or(0);
        let mut row = Vec::new();
        for terms in blocks {
            let mut acc = Matrix::filled(2, 2, &zero);
            for (m, s, c) in terms {
                let factor = u.pow(row_shift - s).scale(&c);
                acc = acc.try_add(&m.try_map(|e| e.try_mul(&factor))?)?;
            }
            row.push(acc);
        }
        rows.push(row);
    }
    let m = Matrix::block_assemble(&rows)?;
    let mut det = m.det_bareiss()?;
    if det.is_zero() {
        return Err(Error::EliminationDegenerate(
            "the symbolic determinant vanishes identically".into(),
        ));
    }
    // u is a unit on the variety
    while det.terms().all(|(e, _)| e[U] > 0) {
        det = det.div_exact(&u)?;
    }
    let resultant = if det.is_free_of(U) {
        det.clone()
    } else {
        let q = MultiPoly::from_str("u^2 - z*u + 1")?;
        det.resultant(&q, U)?
    };
    if resultant.is_zero() {
        return Err(Error::EliminationDegenerate("resultant vanishes identically".into()));
    }
    let locus = resultant.squarefree_part()?.normalized();
    let multiplicity = if locus.is_constant() {
        0
    } else {
        resultant.multiplicity(&locus)?
    };
    Ok(Elimination {
        locus,
        multiplicity,
        resultant,
    })
}

/// The plane `x̄ + ȳ − z̄ − 3`.
pub const L2_POLYNOMIAL: &str = "x + y - z - 3";

pub const L3_POLYNOMIAL: &str = "2*x*y*z - x^2 - y^2 - 3*z^2 + 3";

pub const L4_POLYNOMIAL: &str = "3*x^2*y^2*z - 3*x^2*y*z^2 - 3*x*y^2*z^2 + x^4 - 2*x^3*y - 2*x*y^3 + y^4 \
    + 2*x^3*z + 3*x^2*y*z + 3*x*y^2*z + 2*y^3*z - 3*x*y*z^2 + 2*x*z^3 + 2*y*z^3 + z^4 - 3*x^3 - 3*y^3 \
    + 3*z^3 - 3*x^2 + 6*x*y - 3*y^2 - 6*x*z - 6*y*z - 3*z^2 + 6*x + 6*y - 6*z + 9";

/// The reference polynomial cutting out `L_N`, for `N ∈ {2, 3, 4}`.
pub fn locus_polynomial(n: usize) -> Result<MultiPoly> {
    let text = match n {
        2 => L2_POLYNOMIAL,
        3 => L3_POLYNOMIAL,
        4 => L4_POLYNOMIAL,
        _ => {
            return Err(Error::InvalidArgument(format!(
                "no reference polynomial for N = {n}; use a pointwise scan"
            )))
        }
    };
    text.parse()
}

/// Thresholds for [`locus_verify`].
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LocusTolerances {
    /// On-locus points must satisfy `relative ≤ on`.
    pub on: f64,
    /// Perturbed points must satisfy `relative > off`.
    pub off: f64,
    /// Size of the perturbation in `z̄`.
    pub perturbation: f64,
}

impl Default for LocusTolerances {
    fn default() -> Self {
        LocusTolerances {
            on: 1e-6,
            off: 1e-3,
            perturbation: 0.5,
        }
    }
}

/// One `(x̄, ȳ)` sample and the worst values over the roots in `z̄`.
#[derive(Clone, Debug, Serialize)]
pub struct LocusSample {
    pub index: u64,
    pub xbar: f64,
    pub ybar: f64,
    pub roots: usize,
    pub worst_on: f64,
    pub best_off: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocusReport {
    pub n: usize,
    pub seed: u64,
    pub polynomial: String,
    pub corrupted: bool,
    pub tolerances: LocusTolerances,
    pub on_checked: usize,
    pub on_failures: usize,
    pub off_checked: usize,
    pub off_failures: usize,
    pub samples: Vec<LocusSample>,
}

impl LocusReport {
    pub fn passed(&self) -> bool {
        self.on_checked > 0 && self.on_failures == 0 && self.off_failures == 0
    }
}

/// The sample point for `index`: `x̄, ȳ` uniform on `[−3, 3]` from a ChaCha8
/// stream keyed by `(seed, index)`.
pub fn sample_point(seed: u64, index: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    (rng.random_range(-3.0..=3.0), rng.random_range(-3.0..=3.0))
}

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `Σ |a_α| |c^α|`: the size of the terms of `p` at `c`, the natural
/// denominator for a relative residual.
pub fn term_magnitude(p: &MultiPoly, c: [f64; 3]) -> f64 {
    p.terms()
        .map(|(e, a)| {
            to_f64(a).abs() * c[0].abs().powi(e[X] as i32) * c[1].abs().powi(e[Y] as i32) * c[2].abs().powi(e[Z] as i32)
        })
        .sum::<f64>()
        .max(f64::MIN_POSITIVE)
}

/// Exact coefficients in `z̄` of `p(x̄, ȳ, z̄)` at fixed `x̄, ȳ`, ascending.
fn z_coefficients(p: &MultiPoly, x: &Rational, y: &Rational) -> Vec<Rational> {
    p.coeffs_in(Z)
        .iter()
        .map(|c| c.substitute(X, x).substitute(Y, y).constant_term())
        .collect()
}

/// Samples `(x̄, ȳ)`, solves the reference polynomial for every `z̄`, and
/// checks that the determinant vanishes there and not at perturbed points.
/// With `corrupt`, the polynomial's constant term is shifted by one.
pub fn locus_verify(n: usize, samples: u64, seed: u64, corrupt: bool, tol: &LocusTolerances) -> Result<LocusReport> {
    let mut poly = locus_polynomial(n)?;
    if corrupt {
        poly = poly.try_add(&MultiPoly::one())?;
    }
    let data = pants_example();
    let mut report = LocusReport {
        n,
        seed,
        polynomial: poly.to_string(),
        corrupted: corrupt,
        tolerances: *tol,
        on_checked: 0,
        on_failures: 0,
        off_checked: 0,
        off_failures: 0,
        samples: Vec::new(),
    };
    let directions = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ];
    for index in 0..samples {
        let (x, y) = sample_point(seed, index);
        let coeffs = z_coefficients(&poly, &exact_f64(x)?, &exact_f64(y)?);
        let float_coeffs: Vec<Complex64> = coeffs.iter().map(|c| Complex64::new(to_f64(c), 0.0)).collect();
        let roots = poly_roots(&float_coeffs)?;
        let (mut worst_on, mut best_off) = (0.0f64, f64::INFINITY);
        let mut passed = true;
        for &z in &roots {
            let on = locus_eval_refined(x, y, z, Some(&coeffs), &data, n)?.det.abs()
                / term_magnitude(&poly, [x, y, z.norm()]);
            report.on_checked += 1;
            if on > tol.on || !on.is_finite() {
                report.on_failures += 1;
                passed = false;
            }
            worst_on = worst_on.max(on);
            // step away from every root of the reference polynomial
            let off_z = directions
                .iter()
                .map(|d| z + d * tol.perturbation)
                .max_by(|a, b| {
                    let da = roots.iter().map(|r| (a - r).norm()).fold(f64::INFINITY, f64::min);
                    let db = roots.iter().map(|r| (b - r).norm()).fold(f64::INFINITY, f64::min);
                    da.total_cmp(&db)
                })
                .expect("four directions");
            let off = locus_eval_refined(x, y, off_z, None, &data, n)?.det.abs()
                / term_magnitude(&poly, [x, y, off_z.norm()]);
            report.off_checked += 1;
            if off <= tol.off || !off.is_finite() {
                report.off_failures += 1;
                passed = false;
            }
            best_off = best_off.min(off);
        }
        report.samples.push(LocusSample {
            index,
            xbar: x,
            ybar: y,
            roots: roots.len(),
            worst_on,
            best_off,
            passed,
        });
    }
    Ok(report)
}

/// A random rational in `[-bound, bound]` with denominator at most `den`.
pub fn random_rational(rng: &mut impl Rng, bound: i64, den: i64) -> Rational {
    let d = rng.random_range(1..=den);
    let n = rng.random_range(-bound * d..=bound * d);
    Rational::new(n.into(), d.into())
}

/// Random rational character with `x̄ + ȳ − z̄ = target` when `on_plane`,
/// otherwise off that plane.
pub fn random_pants_character(rng: &mut impl Rng, target: i64, on_plane: bool) -> Character {
    let x = random_rational(rng, 5, 4);
    let y = random_rational(rng, 5, 4);
    let mut z = &x + &y - Rational::from_integer(target.into());
    if !on_plane {
        let mut shift = random_rational(rng, 3, 4);
        if shift.is_zero() {
            shift = Rational::one();
        }
        z += shift;
    }
    Character::from_rationals(x, y, z)
}
