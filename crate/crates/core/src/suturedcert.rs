//! Homology-product certificates for sutured handlebodies given by the
//! inclusion-induced map on free generators.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::freegroup::{fox_derivative, Alphabet, Word};
use crate::linalg::Matrix;
use crate::representation::{MatrixRep, Representation};
use crate::scalar::{default_tolerance, Scalar};
use crate::twisted::{build_complex, homology_dims, relative_dims, Presentation};

/// `i_*: π₁(R₊) → π₁(M)` on free generators, one image word per surface
/// generator.
#[derive(Clone, Debug, PartialEq)]
pub struct SuturedHandlebodyData {
    name: String,
    ambient: Alphabet,
    images: Vec<Word>,
}

impl SuturedHandlebodyData {
    pub fn new(name: &str, ambient: &Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != ambient.len() {
            return Err(Error::Unbalanced(format!(
                "{} surface generators for an ambient group of rank {}",
                images.len(),
                ambient.len()
            )));
        }
        if ambient.is_empty() {
            return Err(Error::Unbalanced("ambient group has rank 0".into()));
        }
        if images.iter().any(|w| w.alphabet() != ambient) {
            return Err(Error::AlphabetMismatch);
        }
        Ok(SuturedHandlebodyData {
            name: name.to_string(),
            ambient: ambient.clone(),
            images,
        })
    }

    pub fn from_words(name: &str, ambient: &str, images: &[&str]) -> Result<Self> {
        let alphabet = Alphabet::parse(ambient)?;
        let images = images
            .iter()
            .map(|w| Word::parse(w, &alphabet))
            .collect::<Result<_>>()?;
        SuturedHandlebodyData::new(name, &alphabet, images)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient(&self) -> &Alphabet {
        &self.ambient
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient.len()
    }

    pub fn surface_rank(&self) -> usize {
        self.images.len()
    }

    /// Ranks above two go beyond the rank-two setting and are labeled.
    pub fn is_extended(&self) -> bool {
        self.ambient_rank() > 2
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut name = String::new();
        let mut ambient = None;
        let mut images: Option<Vec<String>> = None;
        let mut in_images = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once(':') else {
                if in_images {
                    images.get_or_insert_with(Vec::new).push(line.to_string());
                    continue;
                }
                return Err(Error::parse(format!("line {}: expected `key: value`", lineno + 1)));
            };
            in_images = false;
            let value = value.trim();
            match key.trim() {
                "name" => name = value.to_string(),
                "ambient" => ambient = Some(Alphabet::parse(value)?),
                "images" => {
                    in_images = true;
                    images
                        .get_or_insert_with(Vec::new)
                        .extend(value.split_whitespace().map(str::to_string));
                }
                other => return Err(Error::parse(format!("line {}: unknown key `{other}`", lineno + 1))),
            }
        }
        let ambient = ambient.ok_or_else(|| Error::parse("missing `ambient:` line"))?;
        let images = images
            .ok_or_else(|| Error::parse("missing `images:` section"))?
            .iter()
            .map(|w| Word::parse(w, &ambient))
            .collect::<Result<_>>()?;
        SuturedHandlebodyData::new(&name, &ambient, images)
    }
}

impl fmt::Display for SuturedHandlebodyData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "name: {}", self.name)?;
        writeln!(f, "ambient: {}", self.ambient)?;
        writeln!(f, "images:")?;
        for w in &self.images {
            writeln!(f, "  {w}")?;
        }
        Ok(())
    }
}

impl FromStr for SuturedHandlebodyData {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SuturedHandlebodyData::parse(s)
    }
}

/// The pair of pants: `π₁(R₊) = ⟨x, yxyx⁻¹y⁻¹⟩` inside `⟨x, y⟩`.
pub fn pants_example() -> SuturedHandlebodyData {
    SuturedHandlebodyData::from_words("pants", "x y", &["x", "yxyXY"]).expect("well-formed pants data")
}

/// Block matrix `(α(∂_j i_*(a_i)))_{i,j}`.
pub fn fox_matrix(data: &SuturedHandlebodyData, rep: &impl MatrixRep) -> Result<Matrix> {
    if rep.alphabet() != data.ambient() {
        return Err(Error::AlphabetMismatch);
    }
    let n = rep.dim();
    let k = data.ambient_rank();
    let mut rows = Vec::with_capacity(k);
    for image in &data.images {
        let mut blocks = Vec::with_capacity(k);
        for j in 0..k {
            blocks.push(rep.eval_ring_elem(&fox_derivative(image, j)?)?);
        }
        rows.push(blocks);
    }
    let m = Matrix::block_assemble(&rows)?;
    debug_assert_eq!(m.rows(), n * k);
    Ok(m)
}

/// Verdict of the determinant test, optionally cross-checked by homology.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub determinant: Scalar,
    pub is_product: bool,
    /// `dim H¹(W, B)` from the rank computation, when requested.
    pub oracle_h1: Option<usize>,
    /// Absolute `(h0, h1, h2)` of the oracle complex, when requested.
    pub oracle_homology: Option<(usize, usize, usize)>,
    pub rep_description: String,
    /// Rank above two.
    pub extended: bool,
}

/// Zero test for a determinant relative to the Hadamard bound of `m`.
pub fn det_is_zero(det: &Scalar, m: &Matrix) -> bool {
    if det.is_exact() {
        det.is_exactly_zero()
    } else {
        det.zero_test(default_tolerance(), m.hadamard_bound().max(1.0))
    }
}

/// The presentation complex `W`: ambient generators plus one fresh letter
/// `a_j` per surface generator, with relators `i_*(a_j) a_j⁻¹`. Returns the
/// presentation and the indices of the fresh letters.
pub fn oracle_presentation(data: &SuturedHandlebodyData) -> Result<(Presentation, Vec<usize>)> {
    let (alphabet, fresh) = data.ambient.extended(data.surface_rank())?;
    let mut relators = Vec::with_capacity(fresh.len());
    for (image, &a) in data.images.iter().zip(&fresh) {
        let lifted = image.lifted(&alphabet)?;
        relators.push(lifted.concat(&Word::generator(&alphabet, a)?.inverse())?);
    }
    Ok((
        Presentation::new(&format!("{}-complex", data.name), &alphabet, relators)?,
        fresh,
    ))
}

/// Extends `rep` to the oracle alphabet by `α(a_j) = α(i_*(a_j))`.
pub fn oracle_representation(
    data: &SuturedHandlebodyData,
    pres: &Presentation,
    rep: &impl MatrixRep,
) -> Result<Representation> {
    let mut images = Vec::with_capacity(pres.alphabet().len());
    for j in 0..data.ambient_rank() {
        images.push(rep.eval_word(&Word::generator(data.ambient(), j)?)?);
    }
    for image in &data.images {
        images.push(rep.eval_word(image)?);
    }
    Representation::new(pres.alphabet(), images, false)
}

/// Determinant certificate; with `with_oracle`, also computes `H¹(W, B)` by
/// rank and fails loudly if the two verdicts disagree.
pub fn certify(data: &SuturedHandlebodyData, rep: &impl MatrixRep, with_oracle: bool) -> Result<Certificate> {
    let m = fox_matrix(data, rep)?;
    let determinant = m.det()?;
    let is_product = !det_is_zero(&determinant, &m);
    let (mut oracle_h1, mut oracle_homology) = (None, None);
    if with_oracle {
        let (pres, fresh) = oracle_presentation(data)?;
        let ext = oracle_representation(data, &pres, rep)?;
        let cx = build_complex(&pres, &ext)?;
        let (_, h1, _) = relative_dims(&cx, &fresh)?;
        if is_product != (h1 == 0) {
            return Err(Error::OracleMismatch {
                det_zero: !is_product,
                h1,
            });
        }
        oracle_h1 = Some(h1);
        oracle_homology = Some(homology_dims(&cx)?);
    }
    Ok(Certificate {
        determinant,
        is_product,
        oracle_h1,
        oracle_homology,
        rep_description: format!("{}-dimensional {} representation", rep.dim(), rep.kind()),
        extended: data.is_extended(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::GroupRingElem;
    use crate::scalar::ScalarKind;

    fn schottky() -> Representation {
        let a = Alphabet::parse("x y").unwrap();
        Representation::new(
            &a,
            vec![Matrix::int(&[&[1, 1], &[2, 3]]), Matrix::int(&[&[1, -2], &[-1, 3]])],
            true,
        )
        .unwrap()
    }

    #[test]
    fn pants_round_trip() {
        let p = pants_example();
        assert_eq!(p.images()[0].to_string(), "x");
        assert_eq!(p.images()[1].to_string(), "yxyXY");
        assert_eq!(SuturedHandlebodyData::parse(&p.to_string()).unwrap(), p);
        assert!(!p.is_extended());
    }

    #[test]
    fn pants_fox_blocks() {
        let rep = schottky();
        let m = fox_matrix(&pants_example(), &rep).unwrap();
        let a = rep.alphabet().clone();
        let elem = |terms: &[(i64, &str)]| {
            let words: Vec<Word> = terms.iter().map(|(_, w)| Word::parse(w, &a).unwrap()).collect();
            GroupRingElem::from_terms(&a, terms.iter().map(|(c, _)| *c).zip(words.iter())).unwrap()
        };
        let expect = Matrix::block_assemble(&[
            vec![
                Matrix::eye(2, ScalarKind::Rational),
                Matrix::zeros(2, 2, ScalarKind::Rational),
            ],
            vec![
                rep.eval_ring_elem(&elem(&[(1, "y"), (-1, "yxyX")])).unwrap(),
                rep.eval_ring_elem(&elem(&[(1, "1"), (1, "yx"), (-1, "yxyXY")]))
                    .unwrap(),
            ],
        ])
        .unwrap();
        assert_eq!(m, expect);
    }

    #[test]
    fn identity_and_swap_images() {
        let rep = schottky();
        let id = SuturedHandlebodyData::from_words("id", "x y", &["x", "y"]).unwrap();
        assert_eq!(fox_matrix(&id, &rep).unwrap(), Matrix::eye(4, ScalarKind::Rational));
        let swap = SuturedHandlebodyData::from_words("swap", "x y", &["y", "x"]).unwrap();
        let m = fox_matrix(&swap, &rep).unwrap();
        let p = Matrix::int(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0], &[0, 1, 0, 0]]);
        assert_eq!(m, p);
        assert!(certify(&id, &rep, true).unwrap().is_product);
    }

    #[test]
    fn schottky_is_not_product() {
        let c = certify(&pants_example(), &schottky(), true).unwrap();
        assert!(c.determinant.is_exactly_zero());
        assert!(!c.is_product);
        assert_eq!(c.oracle_h1, Some(1));
        let (h0, h1, h2) = c.oracle_homology.unwrap();
        assert_eq!(h0 as i64 - h1 as i64 + h2 as i64, 2 * (1 - 4 + 2));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            SuturedHandlebodyData::from_words("u", "x y", &["x"]),
            Err(Error::Unbalanced(_))
        ));
        let rep = Representation::trivial(&Alphabet::parse("a b").unwrap(), 2);
        assert_eq!(fox_matrix(&pants_example(), &rep).unwrap_err(), Error::AlphabetMismatch);
        assert!(SuturedHandlebodyData::parse("ambient: x y\n").is_err());
        assert!(SuturedHandlebodyData::parse("ambient: x y\nimages:\n  x\n  yz\n").is_err());
    }

    #[test]
    fn rank_three_is_extended() {
        let d = SuturedHandlebodyData::from_words("r3", "x y z", &["x", "yxY", "zyZ"]).unwrap();
        assert!(d.is_extended());
        let rep = Representation::trivial(d.ambient(), 2);
        let c = certify(&d, &rep, true).unwrap();
        assert!(c.extended);
    }
}
