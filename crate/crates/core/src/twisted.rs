//! Presentation complexes, twisted chain complexes and Wada torsion.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::freegroup::{fox_derivative, Alphabet, Coefficient, GroupRingElem, Word};
use crate::linalg::Matrix;
use crate::polynomial::{rational_degree, LaurentPoly};
use crate::representation::MatrixRep;
use crate::scalar::{default_tolerance, Rational, Scalar, ScalarKind};

/// A finite group presentation with optional knot metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    name: String,
    alphabet: Alphabet,
    relators: Vec<Word>,
    meridian: Option<Word>,
    longitude: Option<Word>,
    genus_hint: Option<u32>,
    alexander: Option<LaurentPoly>,
    seifert: Option<Matrix>,
}

impl Presentation {
    /// Relators must be cyclically reduced and over `alphabet`.
    pub fn new(name: &str, alphabet: &Alphabet, relators: Vec<Word>) -> Result<Self> {
        for r in &relators {
            if r.alphabet() != alphabet {
                return Err(Error::AlphabetMismatch);
            }
            if !r.is_cyclically_reduced() {
                return Err(Error::Validation(format!("relator `{r}` is not cyclically reduced")));
            }
            if r.is_identity() {
                return Err(Error::Validation("empty relator".into()));
            }
        }
        Ok(Presentation {
            name: name.to_string(),
            alphabet: alphabet.clone(),
            relators,
            meridian: None,
            longitude: None,
            genus_hint: None,
            alexander: None,
            seifert: None,
        })
    }

    /// Convenience constructor from word strings.
    pub fn from_words(name: &str, generators: &str, relators: &[&str]) -> Result<Self> {
        let alphabet = Alphabet::parse(generators)?;
        let relators = relators
            .iter()
            .map(|r| Word::parse(r, &alphabet))
            .collect::<Result<_>>()?;
        Presentation::new(name, &alphabet, relators)
    }

    pub fn with_meridian(mut self, w: &str) -> Result<Self> {
        self.meridian = Some(Word::parse(w, &self.alphabet)?);
        Ok(self)
    }

    pub fn with_longitude(mut self, w: &str) -> Result<Self> {
        self.longitude = Some(Word::parse(w, &self.alphabet)?);
        Ok(self)
    }

    pub fn with_genus(mut self, g: u32) -> Self {
        self.genus_hint = Some(g);
        self
    }

    pub fn with_alexander(mut self, p: LaurentPoly) -> Self {
        self.alexander = Some(p);
        self
    }

    pub fn with_seifert(mut self, v: Matrix) -> Result<Self> {
        if !v.is_square() {
            return Err(Error::NotSquare(v.rows(), v.cols()));
        }
        self.seifert = Some(v);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn meridian(&self) -> Option<&Word> {
        self.meridian.as_ref()
    }

    pub fn longitude(&self) -> Option<&Word> {
        self.longitude.as_ref()
    }

    pub fn genus_hint(&self) -> Option<u32> {
        self.genus_hint
    }

    pub fn alexander(&self) -> Option<&LaurentPoly> {
        self.alexander.as_ref()
    }

    pub fn seifert(&self) -> Option<&Matrix> {
        self.seifert.as_ref()
    }

    /// Generators minus relators.
    pub fn deficiency(&self) -> i64 {
        self.alphabet.len() as i64 - self.relators.len() as i64
    }

    /// Euler characteristic of the presentation 2-complex.
    pub fn euler_characteristic(&self) -> i64 {
        1 - self.alphabet.len() as i64 + self.relators.len() as i64
    }

    /// Parses the text format written by [`fmt::Display`].
    pub fn parse(text: &str) -> Result<Self> {
        let mut name = None;
        let mut generators = None;
        let mut relator_text: Option<Vec<String>> = None;
        let mut fields: Vec<(String, String)> = Vec::new();
        let mut in_relators = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once(':') else {
                if in_relators {
                    relator_text.get_or_insert_with(Vec::new).push(line.to_string());
                    continue;
                }
                return Err(Error::parse(format!("line {}: expected `key: value`", lineno + 1)));
            };
            in_relators = false;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "name" => name = Some(value.to_string()),
                "generators" => generators = Some(Alphabet::parse(value)?),
                "relators" => {
                    in_relators = true;
                    let list = relator_text.get_or_insert_with(Vec::new);
                    list.extend(value.split_whitespace().map(str::to_string));
                }
                "meridian" | "longitude" | "genus" | "alexander" | "seifert" => {
                    if fields.iter().any(|(k, _)| k == key) {
                        return Err(Error::parse(format!("line {}: duplicate `{key}`", lineno + 1)));
                    }
                    fields.push((key.to_string(), value.to_string()));
                }
                _ => return Err(Error::parse(format!("line {}: unknown key `{key}`", lineno + 1))),
            }
        }
        let alphabet = generators.ok_or_else(|| Error::parse("missing `generators:` line"))?;
        let relators = relator_text
            .ok_or_else(|| Error::parse("missing `relators:` section"))?
            .iter()
            .map(|r| Word::parse(r, &alphabet))
            .collect::<Result<_>>()?;
        let mut pres = Presentation::new(&name.unwrap_or_default(), &alphabet, relators)?;
        for (key, value) in fields {
            pres = match key.as_str() {
                "meridian" => pres.with_meridian(&value)?,
                "longitude" => pres.with_longitude(&value)?,
                "genus" => pres.with_genus(
                    value
                        .parse()
                        .map_err(|_| Error::parse(format!("invalid genus `{value}`")))?,
                ),
                "alexander" => pres.with_alexander(value.parse()?),
                _ => pres.with_seifert(value.parse()?)?,
            };
        }
        Ok(pres)
    }

    /// Internal consistency: the recorded Alexander polynomial must match
    /// both the Seifert-matrix formula and the Fox-calculus torsion.
    pub fn validate(&self) -> Result<()> {
        let Some(alex) = &self.alexander else { return Ok(()) };
        if let Some(v) = &self.seifert {
            let from_seifert = seifert_alexander(v)?;
            if !from_seifert.equals_up_to_sign_shift(alex) {
                return Err(Error::Validation(format!(
                    "alexander `{alex}` disagrees with the Seifert matrix, which gives `{from_seifert}`"
                )));
            }
        }
        if self.deficiency() == 1 {
            let rep = crate::representation::Representation::trivial(&self.alphabet, 1);
            let tau = wada_torsion(self, &rep)?;
            let lhs = tau.numerator.try_mul(&LaurentPoly::from_ints(0, &[-1, 1]))?;
            let rhs = alex.try_mul(&tau.denominator)?;
            if !lhs.equals_up_to_sign_shift(&rhs) {
                return Err(Error::Validation(format!(
                    "alexander `{alex}` disagrees with the Fox matrix torsion `{}` / `{}`",
                    tau.numerator, tau.denominator
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "name: {}", self.name)?;
        writeln!(f, "generators: {}", self.alphabet)?;
        writeln!(f, "relators:")?;
        for r in &self.relators {
            writeln!(f, "  {r}")?;
        }
        if let Some(m) = &self.meridian {
            writeln!(f, "meridian: {m}")?;
        }
        if let Some(l) = &self.longitude {
            writeln!(f, "longitude: {l}")?;
        }
        if let Some(g) = self.genus_hint {
            writeln!(f, "genus: {g}")?;
        }
        if let Some(a) = &self.alexander {
            writeln!(f, "alexander: {a}")?;
        }
        if let Some(v) = &self.seifert {
            writeln!(f, "seifert: {v}")?;
        }
        Ok(())
    }
}

impl FromStr for Presentation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Presentation::parse(s)
    }
}

/// `det(V - t Vᵀ)` for a Seifert matrix `V`.
pub fn seifert_alexander(v: &Matrix) -> Result<LaurentPoly> {
    if !v.is_square() || v.rows() == 0 {
        return Err(Error::NotSquare(v.rows(), v.cols()));
    }
    let kind = v.kind()?;
    let vt = v.transpose();
    let mut m = Matrix::filled(v.rows(), v.cols(), &LaurentPoly::zero(kind));
    for i in 0..v.rows() {
        for j in 0..v.cols() {
            let e =
                LaurentPoly::constant(v.get(i, j).clone()).try_sub(&LaurentPoly::monomial(vt.get(i, j).clone(), 1))?;
            m.set(i, j, e);
        }
    }
    m.det_bareiss()
}

/// A homomorphism onto `Z = <t>`, one exponent per generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianizationMap {
    exponents: Vec<i64>,
}

impl AbelianizationMap {
    pub fn new(exponents: Vec<i64>) -> Self {
        AbelianizationMap { exponents }
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    /// Image of a word.
    pub fn apply(&self, w: &Word) -> i64 {
        w.letters().iter().map(|l| l.exponent() * self.exponents[l.gen]).sum()
    }
}

fn int_det(rows: &[Vec<i64>]) -> BigInt {
    if rows.is_empty() {
        return BigInt::from(1);
    }
    let m = Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&v| Scalar::int(v)).collect())
            .collect(),
    )
    .expect("rectangular rows");
    let det = m.det().expect("square integer matrix");
    det.as_rational().expect("rational determinant").to_integer()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// The map to `H_1 = Z`. Requires the exponent-sum matrix to have rank
/// `generators - 1` with maximal minors of gcd 1 (no torsion in `H_1`).
pub fn abelianization(pres: &Presentation) -> Result<AbelianizationMap> {
    let g = pres.alphabet.len();
    let e: Vec<Vec<i64>> = pres
        .relators
        .iter()
        .map(|r| (0..g).map(|j| r.exponent_sum(j)).collect())
        .collect();
    let mat = if e.is_empty() {
        Matrix::zeros(0, g, ScalarKind::Rational)
    } else {
        Matrix::from_rows(e.iter().map(|r| r.iter().map(|&v| Scalar::int(v)).collect()).collect())?
    };
    let rank = mat.rank()?;
    if g == 0 || rank != g - 1 {
        return Err(Error::NotInfiniteCyclic(format!(
            "exponent-sum matrix has rank {rank}, need {}",
            g.saturating_sub(1)
        )));
    }
    let mut minors_gcd = BigInt::zero();
    for rows in subsets(e.len(), g - 1) {
        for cols in subsets(g, g - 1) {
            let sub: Vec<Vec<i64>> = rows.iter().map(|&i| cols.iter().map(|&j| e[i][j]).collect()).collect();
            minors_gcd = minors_gcd.gcd(&int_det(&sub));
        }
    }
    if minors_gcd != BigInt::from(1) {
        return Err(Error::NotInfiniteCyclic(format!(
            "first homology has torsion of order {minors_gcd}"
        )));
    }
    // kernel over Q via reduced row echelon form; exactly one free column
    let mut rows: Vec<Vec<Rational>> = e
        .iter()
        .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..g {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let lead = rows[r][c].clone();
        for v in rows[r].iter_mut() {
            *v = &*v / &lead;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..g {
                    let delta = &f * &rows[r][j];
                    rows[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free = (0..g)
        .find(|c| !pivots.contains(c))
        .expect("rank g-1 leaves one free column");
    let mut kernel = vec![Rational::zero(); g];
    kernel[free] = Rational::from_integer(1.into());
    for (i, &c) in pivots.iter().enumerate() {
        kernel[c] = -rows[i][free].clone();
    }
    let lcm = kernel.iter().fold(BigInt::from(1), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = kernel
        .iter()
        .map(|v| (v * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    let sign = if ints.iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative()) {
        -1
    } else {
        1
    };
    let exponents = ints
        .iter()
        .map(|v| {
            let x: BigInt = v / &content * sign;
            i64::try_from(x).map_err(|_| Error::NotInfiniteCyclic("abelianization exponent overflow".into()))
        })
        .collect::<Result<_>>()?;
    Ok(AbelianizationMap { exponents })
}

/// Cellular chain complex of the presentation 2-complex with local
/// coefficients. Row-vector convention: `d2` has one block row per relator
/// (Fox derivatives), `d1` one block row per generator (`g - 1`).
#[derive(Clone, Debug)]
pub struct TwistedComplex<R> {
    pub d2: Matrix<R>,
    pub d1: Matrix<R>,
    pub dim: usize,
    pub generators: usize,
    pub relators: usize,
}

fn check_rep(pres: &Presentation, rep: &impl MatrixRep) -> Result<()> {
    if rep.alphabet() != pres.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    Ok(())
}

/// Untwisted complex: entries are `α` applied to the Fox blocks.
pub fn build_complex(pres: &Presentation, rep: &impl MatrixRep) -> Result<TwistedComplex<Scalar>> {
    check_rep(pres, rep)?;
    let n = rep.dim();
    let g = pres.alphabet.len();
    let r = pres.relators.len();
    let kind = rep.kind();
    let mut d2 = Matrix::zeros(n * r, n * g, kind);
    for (i, rel) in pres.relators.iter().enumerate() {
        for j in 0..g {
            let block = rep.eval_ring_elem(&fox_derivative(rel, j)?)?;
            place(&mut d2, &block, i * n, j * n);
        }
    }
    let mut d1 = Matrix::zeros(n * g, n, kind);
    for j in 0..g {
        let block = rep
            .eval_word(&Word::generator(&pres.alphabet, j)?)?
            .try_sub(&Matrix::eye(n, kind))?;
        place(&mut d1, &block, j * n, 0);
    }
    Ok(TwistedComplex {
        d2,
        d1,
        dim: n,
        generators: g,
        relators: r,
    })
}

fn place<R: Clone + crate::linalg::Ring>(target: &mut Matrix<R>, block: &Matrix<R>, row: usize, col: usize) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            target.set(row + i, col + j, block.get(i, j).clone());
        }
    }
}

/// `Σ c_w t^{φ(w)} α(w)` as a matrix of Laurent polynomials.
pub fn twisted_eval<C: Coefficient>(
    rep: &impl MatrixRep,
    phi: &AbelianizationMap,
    e: &GroupRingElem<C>,
) -> Result<Matrix<LaurentPoly>> {
    let n = rep.dim();
    let kind = rep.kind();
    let mut out = Matrix::filled(n, n, &LaurentPoly::zero(kind));
    for (w, c) in e.terms() {
        let m = rep
            .eval_word(&w)?
            .scale(&Scalar::from_rational(c.to_rational(), kind))?;
        let shift = phi.apply(&w);
        for i in 0..n {
            for j in 0..n {
                let v = out
                    .get(i, j)
                    .try_add(&LaurentPoly::monomial(m.get(i, j).clone(), shift))?;
                out.set(i, j, v);
            }
        }
    }
    Ok(out)
}

/// Complex twisted by `t^φ`: entries are Laurent polynomials.
pub fn build_twisted_complex(
    pres: &Presentation,
    rep: &impl MatrixRep,
    phi: &AbelianizationMap,
) -> Result<TwistedComplex<LaurentPoly>> {
    check_rep(pres, rep)?;
    let n = rep.dim();
    let g = pres.alphabet.len();
    let r = pres.relators.len();
    let kind = rep.kind();
    let zero = LaurentPoly::zero(kind);
    let mut d2 = Matrix::filled(n * r, n * g, &zero);
    for (i, rel) in pres.relators.iter().enumerate() {
        for j in 0..g {
            place(
                &mut d2,
                &twisted_eval(rep, phi, &fox_derivative(rel, j)?)?,
                i * n,
                j * n,
            );
        }
    }
    let mut d1 = Matrix::filled(n * g, n, &zero);
    for j in 0..g {
        let gen = GroupRingElem::<i64>::from_word(&Word::generator(&pres.alphabet, j)?);
        let block = twisted_eval(rep, phi, &gen.sub(&GroupRingElem::one(&pres.alphabet))?)?;
        place(&mut d1, &block, j * n, 0);
    }
    Ok(TwistedComplex {
        d2,
        d1,
        dim: n,
        generators: g,
        relators: r,
    })
}

impl TwistedComplex<Scalar> {
    /// Largest entry of `d2 · d1`, relative to the entry magnitudes.
    pub fn chain_defect(&self) -> Result<f64> {
        if self.relators == 0 {
            return Ok(0.0);
        }
        let prod = self.d2.try_mul(&self.d1)?;
        if prod.is_exact() {
            return Ok(if prod.is_exactly_zero() { 0.0 } else { prod.max_abs() });
        }
        Ok(prod.max_abs() / (self.d2.max_abs() * self.d1.max_abs()).max(1.0))
    }
}

impl TwistedComplex<LaurentPoly> {
    /// `d2 · d1 = 0` entrywise.
    pub fn is_chain(&self) -> Result<bool> {
        if self.relators == 0 {
            return Ok(true);
        }
        let prod = self.d2.try_mul(&self.d1)?;
        let scale = self
            .d2
            .entries()
            .iter()
            .chain(self.d1.entries())
            .map(LaurentPoly::max_abs)
            .fold(1.0, f64::max);
        Ok(prod.entries().iter().all(|p| p.max_abs() <= 1e-6 * scale * scale))
    }
}

/// Homology dimensions `(h0, h1, h2)` of an untwisted complex.
pub fn homology_dims(cx: &TwistedComplex<Scalar>) -> Result<(usize, usize, usize)> {
    let n = cx.dim;
    let r1 = cx.d1.rank()?;
    let r2 = if cx.relators == 0 { 0 } else { cx.d2.rank()? };
    Ok((n - r1, n * cx.generators - r1 - r2, n * cx.relators - r2))
}

/// Homology of the pair `(W, B)` where `B` is the vertex together with the
/// edges listed in `sub_generators`.
pub fn relative_dims(cx: &TwistedComplex<Scalar>, sub_generators: &[usize]) -> Result<(usize, usize, usize)> {
    let n = cx.dim;
    let kept: Vec<usize> = (0..cx.generators).filter(|g| !sub_generators.contains(g)).collect();
    let cols: Vec<usize> = kept.iter().flat_map(|&g| (g * n)..(g * n + n)).collect();
    let r2 = if cx.relators == 0 || cols.is_empty() {
        0
    } else {
        cx.d2.select_columns(&cols).rank()?
    };
    Ok((0, n * kept.len() - r2, n * cx.relators - r2))
}

/// Wada torsion and the Thurston-norm and genus bounds it implies.
#[derive(Clone, Debug, Serialize)]
pub struct TorsionResult {
    pub numerator: LaurentPoly,
    pub denominator: LaurentPoly,
    /// Index of the generator whose block column was deleted.
    pub column_deleted: usize,
    /// A second valid column used to confirm independence, if any.
    pub column_checked: Option<usize>,
    /// `span(num) - span(den)`; `None` when the numerator vanishes.
    pub degree: Option<i64>,
    pub dim: usize,
    #[serde(serialize_with = "ser_opt_rational")]
    pub norm_bound: Option<Rational>,
    #[serde(serialize_with = "ser_opt_rational")]
    pub genus_bound: Option<Rational>,
}

fn ser_opt_rational<S: serde::Serializer>(v: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_some(&crate::scalar::fmt_rational(r)),
        None => s.serialize_none(),
    }
}

impl TorsionResult {
    /// Genus bound rounded up to an integer.
    pub fn genus_bound_ceil(&self) -> Option<BigInt> {
        self.genus_bound.as_ref().map(|g| g.ceil().to_integer())
    }
}

fn block_det(m: &Matrix<LaurentPoly>) -> Result<LaurentPoly> {
    if m.rows() == 0 {
        return Ok(LaurentPoly::one(ScalarKind::Rational));
    }
    let det = m.det_bareiss()?;
    Ok(det.trimmed(default_tolerance()))
}

fn relator_check(pres: &Presentation, rep: &impl MatrixRep) -> Result<()> {
    for r in &pres.relators {
        let m = rep.eval_word(r)?;
        let id = Matrix::eye(rep.dim(), rep.kind());
        let diff = m.try_sub(&id)?;
        let defect = diff.max_abs();
        let ok = if diff.is_exact() {
            diff.is_exactly_zero()
        } else {
            defect <= default_tolerance() * m.max_abs().max(1.0)
        };
        if !ok {
            return Err(Error::RelatorNotSatisfied {
                relator: r.to_string(),
                defect,
            });
        }
    }
    Ok(())
}

/// Wada torsion `det(Fox matrix without column j) / det(t^φ(g_j) α(g_j) - I)`
/// for the smallest `j` with nonzero denominator.
pub fn wada_torsion(pres: &Presentation, rep: &impl MatrixRep) -> Result<TorsionResult> {
    let g = pres.alphabet.len();
    let r = pres.relators.len();
    if pres.deficiency() != 1 {
        return Err(Error::NotDeficiencyOne {
            generators: g,
            relators: r,
        });
    }
    check_rep(pres, rep)?;
    let phi = abelianization(pres)?;
    relator_check(pres, rep)?;
    let cx = build_twisted_complex(pres, rep, &phi)?;
    let n = rep.dim();
    let mut valid = Vec::new();
    for j in 0..g {
        let block = cx.d1.select_rows(&((j * n)..(j * n + n)).collect::<Vec<_>>());
        let den = block_det(&block)?;
        if !den.is_zero() {
            valid.push((j, den));
            if valid.len() == 2 {
                break;
            }
        }
    }
    let numerator_for = |j: usize| -> Result<LaurentPoly> {
        let cols: Vec<usize> = (0..g).filter(|&k| k != j).flat_map(|k| (k * n)..(k * n + n)).collect();
        block_det(&cx.d2.select_columns(&cols))
    };
    let mut valid = valid.into_iter();
    let (j, denominator) = valid.next().ok_or(Error::AllColumnsDegenerate)?;
    let numerator = numerator_for(j)?;
    let mut column_checked = None;
    if let Some((k, den_k)) = valid.next() {
        let num_k = numerator_for(k)?;
        let lhs = numerator.try_mul(&den_k)?.trimmed(default_tolerance());
        let rhs = num_k.try_mul(&denominator)?.trimmed(default_tolerance());
        let agree = if lhs.is_zero() || rhs.is_zero() {
            lhs.is_zero() && rhs.is_zero()
        } else {
            lhs.equals_up_to_monomial(&rhs)
        };
        if !agree {
            return Err(Error::ColumnMismatch(j, k));
        }
        column_checked = Some(k);
    }
    let degree = rational_degree(&numerator, &denominator)?;
    let norm_bound = degree.map(|d| Rational::new(d.into(), (n as i64).into()));
    let genus_bound = norm_bound
        .as_ref()
        .map(|b| (b + Rational::from_integer(1.into())) / Rational::from_integer(2.into()));
    Ok(TorsionResult {
        numerator,
        denominator,
        column_deleted: j,
        column_checked,
        degree,
        dim: n,
        norm_bound,
        genus_bound,
    })
}

/// Outcome of comparing the torsion degree with `4g - 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// `deg = 4g - 2`.
    Equality,
    /// `deg < 4g - 2`: consistent with the bound, equality fails.
    BelowConjecture,
    /// `deg > 4g - 2`: impossible for correct data.
    ExceedsBound,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Equality => "equality",
            Verdict::BelowConjecture => "below-conjecture",
            Verdict::ExceedsBound => "exceeds-bound",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    pub torsion: TorsionResult,
    pub genus: u32,
    pub expected_degree: i64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub longitude_trace: Option<String>,
}

/// Compares `deg τ` with `4g - 2` for an SL(2) lift with parabolic
/// meridian and longitude trace `-2`.
pub fn conjecture_check(pres: &Presentation, rep: &impl MatrixRep) -> Result<ConjectureReport> {
    let genus = pres.genus_hint.ok_or(Error::MissingGenusHint)?;
    if rep.dim() != 2 {
        return Err(Error::NotSL2(format!(
            "genus check needs a 2-dimensional representation, got {}",
            rep.dim()
        )));
    }
    check_rep(pres, rep)?;
    let tol = 1e-6;
    if let Some(m) = &pres.meridian {
        let img = rep.eval_word(m)?;
        let tr = img.trace()?;
        let tr2 = tr.to_complex();
        let near_two = (tr2.re.abs() - 2.0).abs() <= tol && tr2.im.abs() <= tol;
        let sign = if tr2.re > 0.0 { 1 } else { -1 };
        let scalar = img.max_deviation(&Matrix::eye(2, rep.kind()).scale(&Scalar::int(sign))?)?;
        if !near_two || scalar <= tol {
            return Err(Error::NonParabolicMeridian(tr.to_string()));
        }
    }
    let mut longitude_trace = None;
    if let Some(l) = &pres.longitude {
        let tr = rep.eval_word(l)?.trace()?;
        if (tr.to_complex() - num_complex::Complex64::new(-2.0, 0.0)).norm() > tol {
            return Err(Error::LongitudeTraceViolation(tr.to_string()));
        }
        longitude_trace = Some(tr.to_string());
    }
    let torsion = wada_torsion(pres, rep)?;
    let expected_degree = 4 * genus as i64 - 2;
    let degree = torsion
        .degree
        .ok_or_else(|| Error::Validation("torsion vanishes; degree undefined".into()))?;
    let verdict = match degree.cmp(&expected_degree) {
        std::cmp::Ordering::Equal => Verdict::Equality,
        std::cmp::Ordering::Less => Verdict::BelowConjecture,
        std::cmp::Ordering::Greater => Verdict::ExceedsBound,
    };
    Ok(ConjectureReport {
        torsion,
        genus,
        expected_degree,
        verdict,
        longitude_trace,
    })
}
