//! Matrix representations of free groups, symmetric powers and parabolic
//! representations of two-generator one-relator groups.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::freegroup::{Alphabet, Coefficient, GroupRingElem, Letter, Word};
use crate::linalg::Matrix;
use crate::scalar::{cmp_complex, default_tolerance, Scalar, ScalarKind};
use crate::twisted::{abelianization, Presentation};

/// Anything that assigns matrices to words of a free group.
pub trait MatrixRep {
    fn alphabet(&self) -> &Alphabet;
    fn dim(&self) -> usize;
    fn kind(&self) -> ScalarKind;
    fn eval_word(&self, w: &Word) -> Result<Matrix>;

    /// Extends linearly to the group ring.
    fn eval_ring_elem<C: Coefficient>(&self, e: &GroupRingElem<C>) -> Result<Matrix>
    where
        Self: Sized,
    {
        if e.alphabet() != self.alphabet() {
            return Err(Error::AlphabetMismatch);
        }
        let kind = self.kind();
        let mut acc = Matrix::zeros(self.dim(), self.dim(), kind);
        for (w, c) in e.terms() {
            let c = Scalar::from_rational(c.to_rational(), kind);
            acc = acc.try_add(&self.eval_word(&w)?.scale(&c)?)?;
        }
        Ok(acc)
    }
}

/// Generators mapped to invertible square matrices of one scalar kind.
#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    alphabet: Alphabet,
    images: Vec<Matrix>,
    inverses: Vec<Matrix>,
    dim: usize,
    sl: bool,
    kind: ScalarKind,
}

impl Representation {
    /// Validates shapes, kinds and invertibility; with `sl`, also `det = 1`.
    pub fn new(alphabet: &Alphabet, images: Vec<Matrix>, sl: bool) -> Result<Self> {
        if images.len() != alphabet.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} images for {} generators",
                images.len(),
                alphabet.len()
            )));
        }
        let dim = images.first().map_or(0, Matrix::rows);
        if dim == 0 {
            return Err(Error::InvalidArgument(
                "a representation needs at least one generator".into(),
            ));
        }
        let mut kind = ScalarKind::Rational;
        for m in &images {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "expected {dim}x{dim} images, got {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
            kind = kind.unify(m.kind()?)?;
        }
        let images: Vec<Matrix> = images
            .iter()
            .map(|m| m.try_map(|e| e.promote(kind)))
            .collect::<Result<_>>()?;
        let inverses = images.iter().map(Matrix::inverse).collect::<Result<Vec<_>>>()?;
        if sl {
            for (i, m) in images.iter().enumerate() {
                let det = m.det()?;
                let off = det.try_sub(&Scalar::one(kind))?;
                if !off.zero_test(default_tolerance(), m.hadamard_bound().max(1.0)) {
                    return Err(Error::NotSL2(format!(
                        "det of image of `{}` is {det}",
                        alphabet.name(i)
                    )));
                }
            }
        }
        Ok(Representation {
            alphabet: alphabet.clone(),
            images,
            inverses,
            dim,
            sl,
            kind,
        })
    }

    /// The one-dimensional trivial representation.
    pub fn trivial(alphabet: &Alphabet, dim: usize) -> Self {
        let images = vec![Matrix::eye(dim, ScalarKind::Rational); alphabet.len()];
        Representation::new(alphabet, images, true).expect("identity matrices are valid images")
    }

    pub fn is_sl(&self) -> bool {
        self.sl
    }

    pub fn image(&self, gen: usize) -> &Matrix {
        &self.images[gen]
    }

    pub fn images(&self) -> &[Matrix] {
        &self.images
    }

    fn letter_image(&self, l: Letter) -> &Matrix {
        if l.inverse {
            &self.inverses[l.gen]
        } else {
            &self.images[l.gen]
        }
    }

    /// Trace of the image of `w`.
    pub fn trace_of(&self, w: &Word) -> Result<Scalar> {
        self.eval_word(w)?.trace()
    }

    /// Largest entry of `α(r) - I`.
    pub fn relator_defect(&self, r: &Word) -> Result<f64> {
        self.eval_word(r)?.max_deviation(&Matrix::eye(self.dim, self.kind))
    }

    /// `g ↦ P α(g) P⁻¹`.
    pub fn conjugated(&self, p: &Matrix) -> Result<Self> {
        let p_inv = p.inverse()?;
        let images = self
            .images
            .iter()
            .map(|m| p.try_mul(m)?.try_mul(&p_inv))
            .collect::<Result<_>>()?;
        Representation::new(&self.alphabet, images, self.sl)
    }

    /// Multiplies the image of generator `i` by `signs[i]` (each ±1).
    pub fn sign_twisted(&self, signs: &[i8]) -> Result<Self> {
        if signs.len() != self.images.len() || signs.iter().any(|s| s.abs() != 1) {
            return Err(Error::InvalidArgument(
                "one sign (+1 or -1) per generator is required".into(),
            ));
        }
        let images = self
            .images
            .iter()
            .zip(signs)
            .map(|(m, &s)| if s < 0 { m.neg() } else { m.clone() })
            .collect();
        // (-1)^n det: only even dimensions keep det = 1 under a sign change
        let sl = self.sl && (self.dim % 2 == 0 || signs.iter().all(|&s| s > 0));
        Representation::new(&self.alphabet, images, sl)
    }

    /// The same images over a larger alphabet extended by `extra` images.
    pub fn extended(&self, alphabet: &Alphabet, extra: Vec<Matrix>) -> Result<Self> {
        if alphabet.names()[..self.alphabet.len()] != *self.alphabet.names() {
            return Err(Error::AlphabetMismatch);
        }
        let mut images = self.images.clone();
        images.extend(extra);
        Representation::new(alphabet, images, self.sl)
    }

    /// Symmetric power `ι_N ∘ α` as an explicit representation.
    pub fn sym_power(&self, n: usize) -> Result<Representation> {
        SymPowerRep::new(self.clone(), n)?.to_representation()
    }

    /// Parses the representation file format (see [`fmt::Display`]).
    pub fn parse(text: &str) -> Result<Self> {
        let mut alphabet = None;
        let mut kind = None;
        let mut sl = None;
        let mut matrices: Vec<(char, Matrix)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(format!("line {}: expected `key: value`", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "alphabet" => alphabet = Some(Alphabet::parse(value)?),
                "kind" => kind = Some(value.parse::<ScalarKind>()?),
                "sl" => {
                    sl = Some(match value {
                        "true" => true,
                        "false" => false,
                        _ => return Err(Error::parse(format!("line {}: `sl` must be true or false", lineno + 1))),
                    })
                }
                _ => {
                    let mut cs = key.chars();
                    match (cs.next(), cs.next()) {
                        (Some(c), None) if c.is_ascii_lowercase() => matrices.push((c, value.parse()?)),
                        _ => return Err(Error::parse(format!("line {}: unknown key `{key}`", lineno + 1))),
                    }
                }
            }
        }
        let alphabet = alphabet.ok_or_else(|| Error::parse("missing `alphabet:` line"))?;
        let kind = kind.ok_or_else(|| Error::parse("missing `kind:` line"))?;
        let mut images = Vec::with_capacity(alphabet.len());
        for &name in alphabet.names() {
            let found: Vec<&Matrix> = matrices.iter().filter(|(c, _)| *c == name).map(|(_, m)| m).collect();
            match found.as_slice() {
                [m] => images.push(m.try_map(|e| e.promote(kind))?),
                [] => return Err(Error::parse(format!("no image for generator `{name}`"))),
                _ => return Err(Error::parse(format!("several images for generator `{name}`"))),
            }
        }
        if let Some((c, _)) = matrices.iter().find(|(c, _)| alphabet.index_of(*c).is_none()) {
            return Err(Error::parse(format!("image for unknown generator `{c}`")));
        }
        Representation::new(&alphabet, images, sl.unwrap_or(false))
    }
}

impl MatrixRep for Representation {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn kind(&self) -> ScalarKind {
        self.kind
    }
    fn eval_word(&self, w: &Word) -> Result<Matrix> {
        if w.alphabet() != &self.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let mut acc = Matrix::eye(self.dim, self.kind);
        for &l in w.letters() {
            acc = acc.try_mul(self.letter_image(l))?;
        }
        Ok(acc)
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alphabet: {}", self.alphabet)?;
        writeln!(f, "kind: {}", self.kind)?;
        writeln!(f, "sl: {}", self.sl)?;
        for (i, m) in self.images.iter().enumerate() {
            writeln!(f, "{}: {m}", self.alphabet.name(i))?;
        }
        Ok(())
    }
}

impl FromStr for Representation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Representation::parse(s)
    }
}

/// `ι_N ∘ α` for a two-dimensional `α`, evaluated as `ι_N(α(w))`.
#[derive(Clone, Debug)]
pub struct SymPowerRep {
    base: Representation,
    n: usize,
}

impl SymPowerRep {
    pub fn new(base: Representation, n: usize) -> Result<Self> {
        if base.dim != 2 {
            return Err(Error::NotTwoByTwo);
        }
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "symmetric power dimension must be at least 2, got {n}"
            )));
        }
        Ok(SymPowerRep { base, n })
    }

    pub fn base(&self) -> &Representation {
        &self.base
    }

    pub fn power(&self) -> usize {
        self.n
    }

    pub fn to_representation(&self) -> Result<Representation> {
        let images = self
            .base
            .images
            .iter()
            .map(|m| sym_power(m, self.n))
            .collect::<Result<_>>()?;
        Representation::new(&self.base.alphabet, images, self.base.sl)
    }
}

impl MatrixRep for SymPowerRep {
    fn alphabet(&self) -> &Alphabet {
        &self.base.alphabet
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn kind(&self) -> ScalarKind {
        self.base.kind
    }
    fn eval_word(&self, w: &Word) -> Result<Matrix> {
        sym_power(&self.base.eval_word(w)?, self.n)
    }
}

/// Action of a 2×2 matrix on binary forms of degree `n - 1` in the basis
/// `e1^(n-1-k) e2^k`, where `e1 ↦ m11 e1 + m21 e2` and `e2 ↦ m12 e1 + m22 e2`.
pub fn sym_power(m: &Matrix, n: usize) -> Result<Matrix> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::NotTwoByTwo);
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "symmetric power dimension must be at least 2, got {n}"
        )));
    }
    let kind = m.kind()?;
    let (a, b, c, d) = (m.get(0, 0), m.get(1, 0), m.get(0, 1), m.get(1, 1));
    // coefficient lists in powers of e2
    let times = |p: &[Scalar], lo: &Scalar, hi: &Scalar| -> Result<Vec<Scalar>> {
        let mut out = vec![Scalar::zero(kind); p.len() + 1];
        for (i, v) in p.iter().enumerate() {
            out[i] = out[i].try_add(&v.try_mul(lo)?)?;
            out[i + 1] = out[i + 1].try_add(&v.try_mul(hi)?)?;
        }
        Ok(out)
    };
    let mut out = Matrix::zeros(n, n, kind);
    for k in 0..n {
        let mut col = vec![Scalar::one(kind)];
        for _ in 0..n - 1 - k {
            col = times(&col, a, b)?;
        }
        for _ in 0..k {
            col = times(&col, c, d)?;
        }
        for (j, v) in col.into_iter().enumerate() {
            out.set(j, k, v);
        }
    }
    Ok(out)
}

/// `(dim coker(m - I), dim ker(m - I))`.
pub fn circle_homology(m: &Matrix) -> Result<(usize, usize)> {
    if !m.is_square() {
        return Err(Error::NotSquare(m.rows(), m.cols()));
    }
    let n = m.rows();
    let rank = m.try_sub(&Matrix::eye(n, m.kind()?))?.rank()?;
    Ok((n - rank, n - rank))
}

/// Largest entry of `J α(g) J⁻¹ - (α(g)⁻¹)ᵀ` over generators, with
/// `J = [[0, 1], [-1, 0]]`. Vanishes exactly for SL(2) images.
pub fn check_self_dual(rep: &Representation) -> Result<f64> {
    if rep.dim != 2 {
        return Err(Error::NotSL2(format!(
            "self-duality check needs 2x2 images, got {0}x{0}",
            rep.dim
        )));
    }
    let j = Matrix::int(&[&[0, 1], &[-1, 0]]);
    let j_inv = Matrix::int(&[&[0, -1], &[1, 0]]);
    let mut worst = 0.0f64;
    for (m, inv) in rep.images.iter().zip(&rep.inverses) {
        let lhs = j.try_mul(m)?.try_mul(&j_inv)?;
        let diff = lhs.try_sub(&inv.transpose())?;
        let defect = if diff.is_exact() && diff.is_exactly_zero() {
            0.0
        } else {
            diff.max_abs()
        };
        worst = worst.max(defect);
    }
    Ok(worst)
}

/// Search window and acceptance thresholds for [`solve_parabolic`].
#[derive(Clone, Debug, Serialize)]
pub struct ParabolicGrid {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub step: f64,
    pub max_iterations: usize,
    pub defect_tolerance: f64,
    pub dedupe_radius: f64,
}

impl Default for ParabolicGrid {
    fn default() -> Self {
        ParabolicGrid {
            re_min: -4.0,
            re_max: 4.0,
            im_min: -4.0,
            im_max: 4.0,
            step: 0.25,
            max_iterations: 60,
            defect_tolerance: 1e-10,
            dedupe_radius: 1e-6,
        }
    }
}

/// One irreducible parabolic representation found by the grid search.
#[derive(Clone, Debug)]
pub struct ParabolicSolution {
    /// Lower-left entry of the second generator's image.
    pub y: Complex64,
    /// Largest entry of `α(r) - I`.
    pub defect: f64,
    pub rep: Representation,
}

type C2 = [[Complex64; 2]; 2];

fn mul2(a: &C2, b: &C2) -> C2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn add2(a: &C2, b: &C2) -> C2 {
    let mut out = *a;
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] += b[i][j];
        }
    }
    out
}

/// `α(r) - I` and its derivative in `y`, for `α(g0) = [[1,1],[0,1]]` and
/// `α(g1) = [[1,0],[y,1]]`.
fn relator_residual(letters: &[Letter], y: Complex64) -> (C2, C2) {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut m: C2 = [[one, zero], [zero, one]];
    let mut dm: C2 = [[zero; 2]; 2];
    for l in letters {
        let (g, dg): (C2, C2) = match (l.gen, l.inverse) {
            (0, false) => ([[one, one], [zero, one]], [[zero; 2]; 2]),
            (0, true) => ([[one, -one], [zero, one]], [[zero; 2]; 2]),
            (_, false) => ([[one, zero], [y, one]], [[zero, zero], [one, zero]]),
            (_, true) => ([[one, zero], [-y, one]], [[zero, zero], [-one, zero]]),
        };
        dm = add2(&mul2(&dm, &g), &mul2(&m, &dg));
        m = mul2(&m, &g);
    }
    m[0][0] -= one;
    m[1][1] -= one;
    (m, dm)
}

fn residual_norm(r: &C2) -> f64 {
    r.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
}

fn gauss_newton(letters: &[Letter], mut y: Complex64, iterations: usize) -> Option<(Complex64, f64)> {
    for _ in 0..iterations {
        let (r, dr) = relator_residual(letters, y);
        if residual_norm(&r) < 1e-14 {
            break;
        }
        let num: Complex64 = r
            .iter()
            .flatten()
            .zip(dr.iter().flatten())
            .map(|(f, j)| j.conj() * f)
            .sum();
        let den: f64 = dr.iter().flatten().map(|j| j.norm_sqr()).sum();
        if den == 0.0 {
            return None;
        }
        let step = num / den;
        y -= step;
        if !y.re.is_finite() || !y.im.is_finite() || y.norm() > 1e6 {
            return None;
        }
        if step.norm() < 1e-15 * y.norm().max(1.0) {
            break;
        }
    }
    Some((y, residual_norm(&relator_residual(letters, y).0)))
}

/// Irreducible representations of a two-generator one-relator group that
/// send both generators to parabolics `[[1,1],[0,1]]` and `[[1,0],[y,1]]`.
///
/// Every grid point seeds a Gauss–Newton iteration on `α(r) = I`; converged
/// roots are deduplicated and sorted by `(Re y, Im y)`. The root `y = 0`
/// (abelian image) is discarded.
pub fn solve_parabolic(pres: &Presentation, grid: &ParabolicGrid) -> Result<Vec<ParabolicSolution>> {
    let alphabet = pres.alphabet();
    if alphabet.len() < 2 {
        return Err(Error::ReducibleOnly);
    }
    if alphabet.len() != 2 || pres.relators().len() != 1 {
        return Err(Error::NotDeficiencyOne {
            generators: alphabet.len(),
            relators: pres.relators().len(),
        });
    }
    let phi = abelianization(pres)?;
    if phi.exponents().iter().any(|e| e.abs() != 1) {
        return Err(Error::InvalidArgument(
            "both generators must be meridians (abelianization exponent ±1)".into(),
        ));
    }
    if !(grid.step > 0.0) || grid.re_max < grid.re_min || grid.im_max < grid.im_min {
        return Err(Error::InvalidArgument("empty or malformed search grid".into()));
    }
    let letters = pres.relators()[0].letters().to_vec();
    let steps = |lo: f64, hi: f64| ((hi - lo) / grid.step + 1e-9).floor() as usize + 1;
    let mut roots: Vec<(Complex64, f64)> = Vec::new();
    let mut saw_abelian = false;
    for i in 0..steps(grid.re_min, grid.re_max) {
        for j in 0..steps(grid.im_min, grid.im_max) {
            let start = Complex64::new(grid.re_min + i as f64 * grid.step, grid.im_min + j as f64 * grid.step);
            let Some((y, defect)) = gauss_newton(&letters, start, grid.max_iterations) else {
                continue;
            };
            if defect >= grid.defect_tolerance {
                continue;
            }
            if y.norm() <= grid.dedupe_radius {
                saw_abelian = true;
                continue;
            }
            match roots.iter_mut().find(|(z, _)| (z - y).norm() <= grid.dedupe_radius) {
                Some(existing) if defect < existing.1 => *existing = (y, defect),
                Some(_) => {}
                None => roots.push((y, defect)),
            }
        }
    }
    if roots.is_empty() {
        return Err(if saw_abelian {
            Error::ReducibleOnly
        } else {
            Error::NoRootFound
        });
    }
    roots.sort_by(|a, b| cmp_complex(&a.0, &b.0));
    roots
        .into_iter()
        .map(|(y, defect)| {
            let a = Matrix::from_rows(vec![
                vec![Scalar::complex(1.0, 0.0), Scalar::complex(1.0, 0.0)],
                vec![Scalar::complex(0.0, 0.0), Scalar::complex(1.0, 0.0)],
            ])?;
            let b = Matrix::from_rows(vec![
                vec![Scalar::complex(1.0, 0.0), Scalar::complex(0.0, 0.0)],
                vec![Scalar::Complex(y), Scalar::complex(1.0, 0.0)],
            ])?;
            Ok(ParabolicSolution {
                y,
                defect,
                rep: Representation::new(alphabet, vec![a, b], true)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::fox_derivative;
    use proptest::prelude::*;

    fn xy() -> Alphabet {
        Alphabet::parse("x y").unwrap()
    }

    fn schottky() -> Representation {
        Representation::new(
            &xy(),
            vec![Matrix::int(&[&[1, 1], &[2, 3]]), Matrix::int(&[&[1, -2], &[-1, 3]])],
            true,
        )
        .unwrap()
    }

    fn word(s: &str) -> Word {
        Word::parse(s, &xy()).unwrap()
    }

    #[test]
    fn schottky_traces() {
        let rep = schottky();
        assert_eq!(rep.trace_of(&word("x")).unwrap(), Scalar::int(4));
        assert_eq!(rep.trace_of(&word("y")).unwrap(), Scalar::int(4));
        assert_eq!(rep.trace_of(&word("xy")).unwrap(), Scalar::int(5));
        assert_eq!(rep.trace_of(&word("xyXY")).unwrap(), Scalar::int(-25));
        assert_eq!(
            rep.eval_word(&word("xX")).unwrap(),
            Matrix::eye(2, ScalarKind::Rational)
        );
    }

    #[test]
    fn ring_element_evaluation() {
        let rep = schottky();
        let w = GroupRingElem::<i64>::parse("1 + x*y - x*y*X", &xy()).unwrap();
        assert_eq!(rep.eval_ring_elem(&w).unwrap().det().unwrap(), Scalar::int(0));
        let zero = GroupRingElem::<i64>::zero(&xy());
        assert_eq!(
            rep.eval_ring_elem(&zero).unwrap(),
            Matrix::zeros(2, 2, ScalarKind::Rational)
        );
        let g_minus_1 = GroupRingElem::<i64>::parse("x - 1", &xy()).unwrap();
        let m = rep.eval_ring_elem(&g_minus_1).unwrap();
        assert_eq!(m.det().unwrap(), Scalar::int(2 - 4));
    }

    #[test]
    fn construction_errors() {
        let a = xy();
        let sing = Matrix::int(&[&[1, 2], &[2, 4]]);
        assert_eq!(
            Representation::new(&a, vec![sing, Matrix::eye(2, ScalarKind::Rational)], false),
            Err(Error::Singular)
        );
        let det2 = Matrix::int(&[&[2, 0], &[0, 1]]);
        assert!(matches!(
            Representation::new(&a, vec![det2.clone(), det2.clone()], true),
            Err(Error::NotSL2(_))
        ));
        assert!(Representation::new(&a, vec![det2.clone(), det2], false).is_ok());
        assert!(matches!(
            Representation::new(&a, vec![Matrix::eye(2, ScalarKind::Rational)], false),
            Err(Error::DimensionMismatch(_))
        ));
        let other = Word::parse("a", &Alphabet::parse("a b").unwrap()).unwrap();
        assert_eq!(schottky().eval_word(&other), Err(Error::AlphabetMismatch));
    }

    #[test]
    fn sym_power_examples() {
        let i3 = sym_power(&Matrix::eye(2, ScalarKind::Rational), 3).unwrap();
        assert_eq!(i3, Matrix::eye(3, ScalarKind::Rational));
        let l = Scalar::ratio(3, 2);
        let li = l.try_inv().unwrap();
        let d = Matrix::from_rows(vec![vec![l.clone(), Scalar::int(0)], vec![Scalar::int(0), li.clone()]]).unwrap();
        let s = sym_power(&d, 3).unwrap();
        let expect = Matrix::from_rows(vec![
            vec![l.pow(2).unwrap(), Scalar::int(0), Scalar::int(0)],
            vec![Scalar::int(0), Scalar::int(1), Scalar::int(0)],
            vec![Scalar::int(0), Scalar::int(0), li.pow(2).unwrap()],
        ])
        .unwrap();
        assert_eq!(s, expect);
        let a = Matrix::int(&[&[1, 1], &[2, 3]]);
        assert_eq!(sym_power(&a, 2).unwrap(), a);
        assert_eq!(
            sym_power(&Matrix::eye(3, ScalarKind::Rational), 2),
            Err(Error::NotTwoByTwo)
        );
    }

    #[test]
    fn circle_homology_examples() {
        assert_eq!(circle_homology(&Matrix::int(&[&[-1, 1], &[0, -1]])).unwrap(), (0, 0));
        assert_eq!(circle_homology(&Matrix::eye(2, ScalarKind::Rational)).unwrap(), (2, 2));
        assert_eq!(circle_homology(&Matrix::int(&[&[1, 1], &[0, 1]])).unwrap(), (1, 1));
    }

    #[test]
    fn self_duality() {
        assert_eq!(check_self_dual(&schottky()).unwrap(), 0.0);
        let det2 = Matrix::int(&[&[2, 0], &[0, 1]]);
        let gl = Representation::new(&xy(), vec![det2.clone(), det2], false).unwrap();
        assert!(check_self_dual(&gl).unwrap() > 0.1);
        let big = Representation::trivial(&xy(), 3);
        assert!(matches!(check_self_dual(&big), Err(Error::NotSL2(_))));
    }

    #[test]
    fn file_round_trip() {
        let rep = schottky();
        let text = rep.to_string();
        assert_eq!(Representation::parse(&text).unwrap(), rep);
        assert!(Representation::parse("alphabet: x y\nkind: rational\nx: 1,0;0,1\n").is_err());
        assert!(Representation::parse("alphabet: x\nkind: quad(-3)\nsl: true\nx: 1, 1; 0, 1\n").is_ok());
    }

    #[test]
    fn sign_twist() {
        let rep = schottky().sign_twisted(&[-1, 1]).unwrap();
        assert_eq!(rep.trace_of(&word("x")).unwrap(), Scalar::int(-4));
        assert_eq!(rep.trace_of(&word("xy")).unwrap(), Scalar::int(-5));
    }

    fn sl2() -> impl Strategy<Value = Matrix> {
        // [[a, b], [c, d]] with a d - b c = 1 built from elementary matrices
        proptest::collection::vec((-3i64..4, any::<bool>()), 1..5).prop_map(|ops| {
            ops.into_iter()
                .fold(Matrix::eye(2, ScalarKind::Rational), |m, (k, upper)| {
                    let e = if upper {
                        Matrix::int(&[&[1, k], &[0, 1]])
                    } else {
                        Matrix::int(&[&[1, 0], &[k, 1]])
                    };
                    m.try_mul(&e).unwrap()
                })
        })
    }

    fn word_strategy() -> impl Strategy<Value = Word> {
        proptest::collection::vec((0usize..2, any::<bool>()), 0..8)
            .prop_map(|ls| Word::from_letters(&xy(), ls.into_iter().map(|(g, i)| Letter::new(g, i))).unwrap())
    }

    proptest! {
        #[test]
        fn eval_is_homomorphism(a in sl2(), b in sl2(), u in word_strategy(), v in word_strategy()) {
            let rep = Representation::new(&xy(), vec![a, b], true).unwrap();
            let lhs = rep.eval_word(&u.concat(&v).unwrap()).unwrap();
            let rhs = rep.eval_word(&u).unwrap().try_mul(&rep.eval_word(&v).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn ring_eval_is_multiplicative(a in sl2(), b in sl2(), u in word_strategy(), v in word_strategy(), w in word_strategy()) {
            let rep = Representation::new(&xy(), vec![a, b], true).unwrap();
            let e1 = GroupRingElem::<i64>::from_word(&u).add(&GroupRingElem::monomial(-2, &v)).unwrap();
            let e2 = GroupRingElem::<i64>::from_word(&w).add(&GroupRingElem::one(&xy())).unwrap();
            let lhs = rep.eval_ring_elem(&e1.mul(&e2).unwrap()).unwrap();
            let rhs = rep.eval_ring_elem(&e1).unwrap().try_mul(&rep.eval_ring_elem(&e2).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn fundamental_formula_through_rep(a in sl2(), b in sl2(), w in word_strategy()) {
            let rep = Representation::new(&xy(), vec![a, b], true).unwrap();
            let mut sum = Matrix::zeros(2, 2, ScalarKind::Rational);
            for g in 0..2 {
                let d = rep.eval_ring_elem(&fox_derivative(&w, g).unwrap()).unwrap();
                let gm1 = rep.image(g).try_sub(&Matrix::eye(2, ScalarKind::Rational)).unwrap();
                sum = sum.try_add(&d.try_mul(&gm1).unwrap()).unwrap();
            }
            let expect = rep.eval_word(&w).unwrap().try_sub(&Matrix::eye(2, ScalarKind::Rational)).unwrap();
            prop_assert_eq!(sum, expect);
        }

        #[test]
        fn sym_power_is_homomorphism(a in sl2(), b in sl2(), n in 2usize..6) {
            let lhs = sym_power(&a.try_mul(&b).unwrap(), n).unwrap();
            let rhs = sym_power(&a, n).unwrap().try_mul(&sym_power(&b, n).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(sym_power(&a, n).unwrap().det().unwrap(), Scalar::int(1));
        }

        #[test]
        fn sym3_trace(a in sl2()) {
            let t = a.trace().unwrap();
            let expect = t.try_mul(&t).unwrap().try_sub(&Scalar::int(1)).unwrap();
            prop_assert_eq!(sym_power(&a, 3).unwrap().trace().unwrap(), expect);
        }

        #[test]
        fn circle_euler_characteristic(a in sl2()) {
            let (h0, h1) = circle_homology(&a).unwrap();
            prop_assert_eq!(h0, h1);
            let tr_is_two = a.trace().unwrap() == Scalar::int(2);
            prop_assert_eq!(h0 == 0, !tr_is_two);
        }

        #[test]
        fn exact_self_duality(a in sl2(), b in sl2()) {
            let rep = Representation::new(&xy(), vec![a, b], true).unwrap();
            prop_assert_eq!(check_self_dual(&rep).unwrap(), 0.0);
        }
    }
}
