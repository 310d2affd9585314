//! Exact rational functions in the formal parameters.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::poly::{Poly, Var, NVARS};
use crate::error::{Error, Result};

/// Reduced quotient of two polynomials. The denominator is an
/// integer-primitive polynomial with positive leading coefficient, so equal
/// values have identical representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamScalar {
    num: Poly,
    den: Poly,
}

impl Default for ParamScalar {
    fn default() -> Self {
        ParamScalar::zero()
    }
}

impl ParamScalar {
    pub fn zero() -> Self {
        ParamScalar {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        ParamScalar::int(1)
    }

    pub fn int(k: i64) -> Self {
        ParamScalar {
            num: Poly::from_int(k),
            den: Poly::one(),
        }
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        ParamScalar::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        ParamScalar {
            num: Poly::constant(q),
            den: Poly::one(),
        }
    }

    pub fn var(v: Var) -> Self {
        ParamScalar {
            num: Poly::var(v),
            den: Poly::one(),
        }
    }

    pub fn n() -> Self {
        ParamScalar::var(Var::N)
    }

    pub fn alpha() -> Self {
        ParamScalar::var(Var::Alpha)
    }

    pub fn from_poly(p: Poly) -> Self {
        ParamScalar {
            num: p,
            den: Poly::one(),
        }
    }

    /// Normalizes `num / den`.
    pub fn from_parts(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::MalformedCoefficient(format!(
                "zero denominator under {num}"
            )));
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: Poly, den: Poly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return ParamScalar::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = Poly::gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (
                    num.exact_div(&g).expect("gcd divides numerator"),
                    den.exact_div(&g).expect("gcd divides denominator"),
                )
            }
        };
        Self::unit_scaled(num, den)
    }

    fn unit_scaled(num: Poly, den: Poly) -> Self {
        let c = den.unit_normal_factor();
        if c.is_one() {
            return ParamScalar { num, den };
        }
        let inv = c.recip();
        ParamScalar {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        let n = self.num.constant_value()?;
        let d = self.den.constant_value()?;
        Some(n / d)
    }

    pub fn contains(&self, v: Var) -> bool {
        self.num.contains(v) || self.den.contains(v)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::MalformedCoefficient("reciprocal of zero".into()));
        }
        Ok(Self::unit_scaled(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &ParamScalar) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    pub fn powi(&self, k: i32) -> Result<Self> {
        let base = if k < 0 { self.recip()? } else { self.clone() };
        let mut acc = ParamScalar::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Replaces `v` by another parameter expression.
    pub fn substitute(&self, v: Var, by: &ParamScalar) -> Result<Self> {
        if !self.contains(v) {
            return Ok(self.clone());
        }
        let num = horner(&self.num, v, by);
        let den = horner(&self.den, v, by);
        num.checked_div(&den).map_err(|_| {
            Error::MalformedCoefficient(format!("denominator of {self} vanishes at {v:?} = {by}"))
        })
    }

    pub fn specialize(&self, v: Var, value: &BigRational) -> Result<Self> {
        self.substitute(v, &ParamScalar::from_rational(value.clone()))
    }

    pub fn eval(&self, point: &[BigRational; NVARS]) -> Result<BigRational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(Error::Pole(format!("{self} at {point:?}")));
        }
        Ok(self.num.eval(point) / d)
    }

    pub fn eval_f64(&self, point: &[f64; NVARS]) -> Result<f64> {
        let d = self.den.eval_f64(point);
        if d == 0.0 {
            return Err(Error::Pole(format!("{self} at {point:?}")));
        }
        Ok(self.num.eval_f64(point) / d)
    }

    /// Sign of a constant value; `None` when the scalar still depends on
    /// parameters.
    pub fn constant_sign(&self) -> Option<i8> {
        let c = self.constant_value()?;
        Some(if c.is_zero() {
            0
        } else if c.is_positive() {
            1
        } else {
            -1
        })
    }
}

fn horner(p: &Poly, v: Var, by: &ParamScalar) -> ParamScalar {
    let mut acc = ParamScalar::zero();
    for c in p.coeffs_in(v).iter().rev() {
        acc = &(&acc * by) + &ParamScalar::from_poly(c.clone());
    }
    acc
}

impl From<i64> for ParamScalar {
    fn from(k: i64) -> Self {
        ParamScalar::int(k)
    }
}

impl Add for &ParamScalar {
    type Output = ParamScalar;
    fn add(self, rhs: &ParamScalar) -> ParamScalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            if self.den.is_one() {
                return ParamScalar {
                    num,
                    den: Poly::one(),
                };
            }
            return ParamScalar::normalize(num, self.den.clone());
        }
        let g = Poly::gcd(&self.den, &rhs.den);
        let d1 = self.den.exact_div(&g).expect("gcd divides");
        let d2 = rhs.den.exact_div(&g).expect("gcd divides");
        let num = &(&self.num * &d2) + &(&rhs.num * &d1);
        let den = &self.den * &d2;
        ParamScalar::normalize(num, den)
    }
}

impl Sub for &ParamScalar {
    type Output = ParamScalar;
    fn sub(self, rhs: &ParamScalar) -> ParamScalar {
        self + &(-rhs)
    }
}

impl Mul for &ParamScalar {
    type Output = ParamScalar;
    fn mul(self, rhs: &ParamScalar) -> ParamScalar {
        if self.is_zero() || rhs.is_zero() {
            return ParamScalar::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return ParamScalar {
                num: &self.num * &rhs.num,
                den: Poly::one(),
            };
        }
        let g1 = Poly::gcd(&self.num, &rhs.den);
        let g2 = Poly::gcd(&rhs.num, &self.den);
        let n1 = self.num.exact_div(&g1).expect("gcd divides");
        let d2 = rhs.den.exact_div(&g1).expect("gcd divides");
        let n2 = rhs.num.exact_div(&g2).expect("gcd divides");
        let d1 = self.den.exact_div(&g2).expect("gcd divides");
        ParamScalar::unit_scaled(&n1 * &n2, &d1 * &d2)
    }
}

impl Neg for &ParamScalar {
    type Output = ParamScalar;
    fn neg(self) -> ParamScalar {
        ParamScalar {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ParamScalar {
            type Output = ParamScalar;
            fn $m(self, rhs: ParamScalar) -> ParamScalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&ParamScalar> for ParamScalar {
            type Output = ParamScalar;
            fn $m(self, rhs: &ParamScalar) -> ParamScalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for ParamScalar {
    type Output = ParamScalar;
    fn neg(self) -> ParamScalar {
        -&self
    }
}

impl fmt::Display for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Serialize for ParamScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Parses a rational-function description such as
/// `(n^2 + 2*n + 4)*alpha/((n - 1)*(n + 4)) + (n + 2)/(n - 1)` into its
/// normalized form. Recognized symbols: `n`, `alpha` (or `α`), `a`, `b`.
pub fn normalize_param(src: &str) -> Result<ParamScalar> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, pos: 0 };
    let v = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!("trailing input in {src:?}")));
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(Var),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Num(s.parse().expect("digits")));
        } else if c.is_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_alphanumeric() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let v = match s.as_str() {
                "n" => Var::N,
                "alpha" | "α" => Var::Alpha,
                "a" => Var::A,
                "b" => Var::B,
                other => return Err(Error::Parse(format!("unknown symbol {other:?}"))),
            };
            out.push(Tok::Var(v));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<ParamScalar> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<ParamScalar> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == '*' {
                &acc * &rhs
            } else {
                acc.checked_div(&rhs).map_err(|_| {
                    Error::MalformedCoefficient("division by the zero polynomial".into())
                })?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<ParamScalar> {
        if self.peek_op() == Some('-') {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        if self.peek_op() == Some('+') {
            self.pos += 1;
        }
        self.power()
    }

    fn power(&mut self) -> Result<ParamScalar> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            let neg = if self.peek_op() == Some('-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let k = match self.tokens.get(self.pos) {
                Some(Tok::Num(k)) => i32::try_from(k.clone())
                    .map_err(|_| Error::Parse("exponent too large".into()))?,
                _ => return Err(Error::Parse("expected integer exponent".into())),
            };
            self.pos += 1;
            return base.powi(if neg { -k } else { k }).map_err(|_| {
                Error::MalformedCoefficient("negative power of the zero polynomial".into())
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ParamScalar> {
        match self.tokens.get(self.pos).cloned() {
            Some(Tok::Num(k)) => {
                self.pos += 1;
                Ok(ParamScalar::from_rational(BigRational::from_integer(k)))
            }
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Ok(ParamScalar::var(v))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                self.pos += 1;
                Ok(v)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Shorthand used throughout the crate for literal coefficients.
pub fn ps(src: &str) -> ParamScalar {
    normalize_param(src).unwrap_or_else(|e| panic!("bad coefficient literal {src:?}: {e}"))
}

pub fn rational(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::poly::rat;

    #[test]
    fn gcd_reduction() {
        assert_eq!(
            normalize_param("(2*alpha)/(2)").unwrap(),
            ParamScalar::alpha()
        );
    }

    #[test]
    fn polynomial_cancellation() {
        assert_eq!(normalize_param("(n^2-16)/(n-4)").unwrap(), ps("n+4"));
    }

    #[test]
    fn c2_at_n5_alpha2() {
        let c2 = normalize_param("(n^2+2*n+4)*alpha/((n-1)*(n+4)) + (n+2)/(n-1)").unwrap();
        let v = c2
            .specialize(Var::N, &rat(5))
            .unwrap()
            .specialize(Var::Alpha, &rat(2))
            .unwrap();
        assert_eq!(v.constant_value().unwrap(), rational(47, 12));
    }

    #[test]
    fn zero_denominator_is_rejected() {
        assert!(matches!(
            normalize_param("alpha/(n-n)"),
            Err(Error::MalformedCoefficient(_))
        ));
        assert!(ParamScalar::from_parts(Poly::one(), Poly::zero()).is_err());
    }

    #[test]
    fn normalization_is_idempotent_and_canonical() {
        let x = normalize_param("(3*n+6)/(4*n-4)").unwrap();
        let y = normalize_param("3*(n+2)/(4*(n-1))").unwrap();
        assert_eq!(x, y);
        let again = ParamScalar::from_parts(x.numer().clone(), x.denom().clone()).unwrap();
        assert_eq!(again, x);
        assert_eq!(x.to_string(), "(3/4*n + 3/2)/(n - 1)");
    }

    #[test]
    fn negative_denominators_flip_sign() {
        assert_eq!(ps("1/(4-n)"), ps("-1/(n-4)"));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(normalize_param("n +"), Err(Error::Parse(_))));
        assert!(matches!(normalize_param("q"), Err(Error::Parse(_))));
        assert!(matches!(normalize_param("(n"), Err(Error::Parse(_))));
    }
}
