use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// All complex roots of `c[0] + c[1] z + ... + c[d] z^d`, with multiplicity.
///
/// Eigenvalues of the companion matrix (complex Schur form), each polished
/// by a few Newton steps on the original polynomial. Leading coefficients
/// below `1e-14` relative to the largest are treated as zero.
pub fn poly_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::InvalidArgument(
            "the zero polynomial has no finite root set".into(),
        ));
    }
    let degree = coeffs.iter().rposition(|c| c.norm() > 1e-14 * scale).unwrap_or(0);
    if degree == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[degree];
    let mut companion = DMatrix::<Complex64>::zeros(degree, degree);
    for i in 1..degree {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..degree {
        companion[(i, degree - 1)] = -coeffs[i] / lead;
    }
    let (_, t) = companion.schur().unpack();
    let poly = &coeffs[..=degree];
    Ok((0..degree).map(|i| polish(poly, t[(i, i)])).collect())
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn polish(c: &[Complex64], mut z: Complex64) -> Complex64 {
    for _ in 0..8 {
        let (p, dp) = horner(c, z);
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        let next = z - step;
        if !next.re.is_finite() || !next.im.is_finite() || horner(c, next).0.norm() > p.norm() {
            break;
        }
        z = next;
        if step.norm() <= 1e-15 * z.norm().max(1.0) {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(crate::scalar::cmp_complex);
        v
    }

    #[test]
    fn quadratic_and_cubic() {
        let r = sorted(poly_roots(&[c(2.0), c(-3.0), c(1.0)]).unwrap());
        assert!((r[0] - c(1.0)).norm() < 1e-12 && (r[1] - c(2.0)).norm() < 1e-12);
        let r = poly_roots(&[c(1.0), c(0.0), c(1.0)]).unwrap();
        assert!(r.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12 && z.re.abs() < 1e-12));
        assert_eq!(poly_roots(&[c(1.0 - 1.0 + 1.0), c(0.0)]).unwrap(), vec![]);
        assert_eq!(poly_roots(&[c(-1.0), c(1.0), c(0.0), c(0.0)]).unwrap().len(), 1);
    }

    proptest! {
        #[test]
        fn roots_reproduce_polynomial(roots in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..5)) {
            let mut coeffs = vec![c(1.0)];
            for &(re, im) in &roots {
                let r = Complex64::new(re, im);
                let mut next = vec![c(0.0); coeffs.len() + 1];
                for (i, &a) in coeffs.iter().enumerate() {
                    next[i + 1] += a;
                    next[i] -= a * r;
                }
                coeffs = next;
            }
            let found = poly_roots(&coeffs).unwrap();
            prop_assert_eq!(found.len(), roots.len());
            for z in found {
                let (p, _) = horner(&coeffs, z);
                prop_assert!(p.norm() < 1e-6);
            }
        }
    }
}
