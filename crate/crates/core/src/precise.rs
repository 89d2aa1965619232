//! Fixed-point complex numbers with a large binary scale, for determinants
//! whose entries are huge but whose value is small. Rounding is absolute
//! (`2^-FRACTION_BITS`), so massive cancellation costs nothing.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::freegroup::fox_derivative;
use crate::scalar::Rational;
use crate::suturedcert::SuturedHandlebodyData;

pub(crate) const FRACTION_BITS: usize = 384;

/// `(re + i·im) / 2^FRACTION_BITS`.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Fixed {
    re: BigInt,
    im: BigInt,
}

fn scaled(r: &Rational) -> BigInt {
    (r.numer() << FRACTION_BITS) / r.denom()
}

impl Fixed {
    pub(crate) fn zero() -> Fixed {
        Fixed {
            re: BigInt::zero(),
            im: BigInt::zero(),
        }
    }

    pub(crate) fn int(n: i64) -> Fixed {
        Fixed {
            re: BigInt::from(n) << FRACTION_BITS,
            im: BigInt::zero(),
        }
    }

    pub(crate) fn rational(r: &Rational) -> Fixed {
        Fixed {
            re: scaled(r),
            im: BigInt::zero(),
        }
    }

    pub(crate) fn complex(c: Complex64) -> Result<Fixed> {
        let f = |v: f64| Rational::from_float(v).map(|r| scaled(&r)).ok_or(Error::NonFinite);
        Ok(Fixed {
            re: f(c.re)?,
            im: f(c.im)?,
        })
    }

    pub(crate) fn to_complex(&self) -> Complex64 {
        let unscale = |v: &BigInt| {
            Rational::new(v.clone(), BigInt::from(1) << FRACTION_BITS)
                .to_f64()
                .unwrap_or(f64::NAN)
        };
        Complex64::new(unscale(&self.re), unscale(&self.im))
    }

    pub(crate) fn add(&self, o: &Fixed) -> Fixed {
        Fixed {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    pub(crate) fn sub(&self, o: &Fixed) -> Fixed {
        Fixed {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    pub(crate) fn neg(&self) -> Fixed {
        Fixed {
            re: -&self.re,
            im: -&self.im,
        }
    }

    pub(crate) fn scale(&self, k: i64) -> Fixed {
        Fixed {
            re: &self.re * k,
            im: &self.im * k,
        }
    }

    pub(crate) fn mul(&self, o: &Fixed) -> Fixed {
        let re = (&self.re * &o.re - &self.im * &o.im) >> FRACTION_BITS;
        let im = (&self.re * &o.im + &self.im * &o.re) >> FRACTION_BITS;
        Fixed { re, im }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub(crate) fn div(&self, o: &Fixed) -> Result<Fixed> {
        let n = &o.re * &o.re + &o.im * &o.im;
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let re = ((&self.re * &o.re + &self.im * &o.im) << FRACTION_BITS) / &n;
        let im = ((&self.im * &o.re - &self.re * &o.im) << FRACTION_BITS) / &n;
        Ok(Fixed { re, im })
    }

    /// `max(|re|, |im|)` in raw units, for pivot selection.
    fn magnitude(&self) -> BigInt {
        self.re.abs().max(self.im.abs())
    }
}

type Mat = Vec<Vec<Fixed>>;

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let (n, m, p) = (a.len(), b.len(), b[0].len());
    (0..n)
        .map(|i| {
            (0..p)
                .map(|j| (0..m).fold(Fixed::zero(), |acc, k| acc.add(&a[i][k].mul(&b[k][j]))))
                .collect()
        })
        .collect()
}

fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Fixed::int(1) } else { Fixed::zero() })
                .collect()
        })
        .collect()
}

/// Same basis as [`crate::representation::sym_power`].
fn sym_power(m: &Mat, n: usize) -> Mat {
    let (a, b, c, d) = (&m[0][0], &m[1][0], &m[0][1], &m[1][1]);
    let times = |p: &[Fixed], lo: &Fixed, hi: &Fixed| {
        let mut out = vec![Fixed::zero(); p.len() + 1];
        for (i, v) in p.iter().enumerate() {
            out[i] = out[i].add(&v.mul(lo));
            out[i + 1] = out[i + 1].add(&v.mul(hi));
        }
        out
    };
    let mut out = vec![vec![Fixed::zero(); n]; n];
    for k in 0..n {
        let mut col = vec![Fixed::int(1)];
        for _ in 0..n - 1 - k {
            col = times(&col, a, b);
        }
        for _ in 0..k {
            col = times(&col, c, d);
        }
        for (j, v) in col.into_iter().enumerate() {
            out[j][k] = v;
        }
    }
    out
}

/// Determinant by Gaussian elimination with partial pivoting.
pub(crate) fn det(mut m: Mat) -> Result<Fixed> {
    let n = m.len();
    let mut det = Fixed::int(1);
    for k in 0..n {
        let p = (k..n).max_by_key(|&i| m[i][k].magnitude()).expect("nonempty range");
        if m[p][k].is_zero() {
            return Ok(Fixed::zero());
        }
        if p != k {
            m.swap(p, k);
            det = det.neg();
        }
        let pivot = m[k][k].clone();
        det = det.mul(&pivot);
        for i in k + 1..n {
            let f = m[i][k].div(&pivot)?;
            if f.is_zero() {
                continue;
            }
            for j in k + 1..n {
                let delta = f.mul(&m[k][j]);
                m[i][j] = m[i][j].sub(&delta);
            }
        }
    }
    Ok(det)
}

/// Newton's method from a floating-point start.
pub(crate) fn newton(f: impl Fn(&Fixed) -> (Fixed, Fixed), start: Complex64) -> Result<Fixed> {
    let mut z = Fixed::complex(start)?;
    let tiny = BigInt::from(1) << 16;
    for _ in 0..200 {
        let (v, dv) = f(&z);
        if v.is_zero() || dv.is_zero() {
            break;
        }
        let step = v.div(&dv)?;
        z = z.sub(&step);
        if step.magnitude() <= tiny {
            break;
        }
    }
    Ok(z)
}

/// Value and derivative of `Σ c_k z^k`.
pub(crate) fn horner(coeffs: &[Fixed], z: &Fixed) -> (Fixed, Fixed) {
    let mut p = Fixed::zero();
    let mut dp = Fixed::zero();
    for c in coeffs.iter().rev() {
        dp = dp.mul(z).add(&p);
        p = p.mul(z).add(c);
    }
    (p, dp)
}

/// Determinant of the block Fox matrix of rank-two `data` under `ι_N` of
/// `α(x) = [[0, 1], [−1, x̄]]`, `α(y) = [[ȳ, −u], [u⁻¹, 0]]`.
pub(crate) fn fox_det(x: &Fixed, y: &Fixed, u: &Fixed, data: &SuturedHandlebodyData, n: usize) -> Result<Fixed> {
    let u_inv = Fixed::int(1).div(u)?;
    let (zero, one) = (Fixed::zero(), Fixed::int(1));
    let letters: [[Mat; 2]; 2] = [
        [
            vec![vec![zero.clone(), one.clone()], vec![one.neg(), x.clone()]],
            vec![vec![x.clone(), one.neg()], vec![one.clone(), zero.clone()]],
        ],
        [
            vec![vec![y.clone(), u.neg()], vec![u_inv.clone(), zero.clone()]],
            vec![vec![zero.clone(), u.clone()], vec![u_inv.neg(), y.clone()]],
        ],
    ];
    let k = data.ambient_rank();
    let mut big = vec![vec![Fixed::zero(); n * k]; n * k];
    for (i, image) in data.images().iter().enumerate() {
        for j in 0..k {
            let d = fox_derivative(image, j)?;
            let mut block = vec![vec![Fixed::zero(); n]; n];
            for (w, c) in d.terms() {
                let mut m = identity(2);
                for l in w.letters() {
                    m = mat_mul(&m, &letters[l.gen][usize::from(l.inverse)]);
                }
                let s = sym_power(&m, n);
                for (r, row) in s.iter().enumerate() {
                    for (col, v) in row.iter().enumerate() {
                        block[r][col] = block[r][col].add(&v.scale(*c));
                    }
                }
            }
            for r in 0..n {
                for col in 0..n {
                    big[i * n + r][j * n + col] = block[r][col].clone();
                }
            }
        }
    }
    det(big)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charvar::lift_from_root;
    use crate::representation::SymPowerRep;
    use crate::scalar::{rat, QuadExt, Scalar};
    use crate::suturedcert::{fox_matrix, pants_example};

    #[test]
    fn arithmetic() {
        let a = Fixed::complex(Complex64::new(1.5, -2.0)).unwrap();
        let b = Fixed::complex(Complex64::new(-0.25, 3.0)).unwrap();
        let close =
            |f: Fixed, c: Complex64| assert!((f.to_complex() - c).norm() < 1e-14, "{:?} vs {c}", f.to_complex());
        close(a.mul(&b), Complex64::new(1.5, -2.0) * Complex64::new(-0.25, 3.0));
        close(
            a.div(&b).unwrap(),
            Complex64::new(1.5, -2.0) / Complex64::new(-0.25, 3.0),
        );
        close(Fixed::rational(&rat(1, 3)), Complex64::new(1.0 / 3.0, 0.0));
        assert_eq!(Fixed::int(1).div(&Fixed::zero()).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn determinant_matches_exact_gaussian_rationals() {
        // x̄, ȳ rational and u in Q(i): the exact determinant is the oracle
        let (x, y) = (rat(7, 3), rat(-5, 4));
        let u = QuadExt::new(rat(-9, 2), rat(3, 5), -1).unwrap();
        for n in 2..=5 {
            let rep = lift_from_root(
                &Scalar::Rational(x.clone()),
                &Scalar::Rational(y.clone()),
                &Scalar::Quad(u.clone()),
            )
            .unwrap();
            let exact = fox_matrix(&pants_example(), &SymPowerRep::new(rep, n).unwrap())
                .unwrap()
                .det()
                .unwrap()
                .to_complex();
            let uf = Fixed {
                re: scaled(u.a()),
                im: scaled(u.b()),
            };
            let approx = fox_det(&Fixed::rational(&x), &Fixed::rational(&y), &uf, &pants_example(), n)
                .unwrap()
                .to_complex();
            assert!(
                (approx - exact).norm() <= 1e-20 * exact.norm().max(1.0),
                "N = {n}: {approx} vs {exact}"
            );
        }
    }

    #[test]
    fn newton_finds_square_root() {
        let two = Fixed::int(2);
        let r = newton(|z| (z.mul(z).sub(&two), z.add(z)), Complex64::new(1.0, 0.0)).unwrap();
        assert!((r.to_complex().re - 2f64.sqrt()).abs() < 1e-15);
        let err = r.mul(&r).sub(&two);
        assert!(err.magnitude() < (BigInt::from(1) << 32));
    }
}
