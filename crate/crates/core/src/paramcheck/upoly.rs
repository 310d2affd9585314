//! Univariate polynomials over ℚ and Sturm root counting.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::symcore::{ParamScalar, Poly, Var};

/// Coefficients from the constant term upward, with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UPoly {
    coeffs: Vec<BigRational>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        UPoly::new(
            c.iter()
                .map(|&k| BigRational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn constant(c: BigRational) -> Self {
        UPoly::new(vec![c])
    }

    /// `x - r`
    pub fn linear_root(r: &BigRational) -> Self {
        UPoly::new(vec![-r.clone(), BigRational::one()])
    }

    /// Reads `p` as a polynomial in `v`. Fails if another variable is left.
    pub fn from_poly(p: &Poly, v: Var) -> Result<Self> {
        let coeffs = p
            .coeffs_in(v)
            .iter()
            .map(|c| {
                c.constant_value().ok_or_else(|| {
                    Error::InvalidParameters(format!("{p} is not univariate in {}", v.name()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(UPoly::new(coeffs))
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    fn lead(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn neg(&self) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::default();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dl = d.lead().expect("nonzero divisor").clone();
        let dd = d.coeffs.len();
        let mut r = self.coeffs.clone();
        if r.len() < dd {
            return (UPoly::default(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd + 1];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd - 1] / &dl;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd - 1);
        (UPoly::new(q), UPoly::new(r))
    }

    fn monic(&self) -> UPoly {
        match self.lead() {
            Some(l) => UPoly::new(self.coeffs.iter().map(|c| c / l).collect()),
            None => UPoly::default(),
        }
    }

    pub fn gcd(a: &UPoly, b: &UPoly) -> UPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p / gcd(p, p')`
    pub fn square_free(&self) -> UPoly {
        if self.degree() < 1 {
            return self.clone();
        }
        let g = UPoly::gcd(self, &self.derivative());
        self.div_rem(&g).0
    }

    /// Divides out every factor `(x - r)`, returning the multiplicity.
    pub fn deflate(&self, r: &BigRational) -> (UPoly, usize) {
        let mut p = self.clone();
        let mut k = 0;
        let lin = UPoly::linear_root(r);
        while !p.is_zero() && p.eval(r).is_zero() {
            p = p.div_rem(&lin).0;
            k += 1;
        }
        (p, k)
    }

    /// Sturm chain `p, p', -rem(p, p'), …` of the square-free part.
    pub fn sturm_chain(&self) -> Vec<UPoly> {
        let p0 = self.square_free();
        let mut chain = vec![p0.clone()];
        let mut prev = p0;
        let mut cur = prev.derivative();
        while !cur.is_zero() {
            chain.push(cur.clone());
            let r = prev.div_rem(&cur).1.neg();
            prev = cur;
            cur = r;
        }
        chain
    }

    /// Distinct real roots in the open interval `(a, b)`.
    pub fn count_roots(&self, a: &BigRational, b: &BigRational) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::DegenerateCertificate("zero polynomial".into()));
        }
        let (p, _) = self.deflate(a);
        let (p, _) = p.deflate(b);
        let chain = p.sturm_chain();
        let va = sign_variations(&chain, a);
        let vb = sign_variations(&chain, b);
        Ok(va.saturating_sub(vb))
    }
}

/// Sign changes of the chain evaluated at `x`, zeros skipped.
pub fn sign_variations(chain: &[UPoly], x: &BigRational) -> usize {
    let signs: Vec<bool> = chain
        .iter()
        .map(|p| p.eval(x))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_c = k == 0 || !mag.is_one();
            if show_c {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 if show_c => write!(f, "*x")?,
                1 => write!(f, "x")?,
                _ if show_c => write!(f, "*x^{k}")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

/// Numerator and denominator of `s` with `n` fixed, as polynomials in `v`.
pub fn specialize_fraction(s: &ParamScalar, n: i64, v: Var) -> Result<(UPoly, UPoly)> {
    let s = s.specialize(Var::N, &BigRational::from_integer(n.into()))?;
    Ok((
        UPoly::from_poly(s.numer(), v)?,
        UPoly::from_poly(s.denom(), v)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::param::rational;

    #[test]
    fn division_round_trip() {
        let a = UPoly::from_ints(&[1, -3, 0, 2]);
        let d = UPoly::from_ints(&[-1, 1]);
        let (q, r) = a.div_rem(&d);
        assert_eq!(q.mul(&d).coeffs().len(), 4);
        let back = UPoly::new(
            q.mul(&d)
                .coeffs()
                .iter()
                .zip(
                    r.coeffs()
                        .iter()
                        .chain(std::iter::repeat(&BigRational::zero())),
                )
                .map(|(x, y)| x + y)
                .collect(),
        );
        assert_eq!(back, a);
    }

    #[test]
    fn counts_roots_of_cubic() {
        // (x-1)(x-2)(x-3)
        let p = UPoly::from_ints(&[-6, 11, -6, 1]);
        assert_eq!(p.count_roots(&rational(0, 1), &rational(4, 1)).unwrap(), 3);
        assert_eq!(p.count_roots(&rational(3, 2), &rational(5, 2)).unwrap(), 1);
        assert_eq!(p.count_roots(&rational(1, 1), &rational(3, 1)).unwrap(), 1);
    }

    #[test]
    fn repeated_roots_counted_once() {
        // (x-1)^2 (x+1)
        let p = UPoly::from_ints(&[1, -1, -1, 1]);
        assert_eq!(p.count_roots(&rational(-2, 1), &rational(2, 1)).unwrap(), 2);
    }

    #[test]
    fn display() {
        assert_eq!(
            UPoly::from_ints(&[3, 0, -1, 2]).to_string(),
            "2*x^3 - x^2 + 3"
        );
    }
}
