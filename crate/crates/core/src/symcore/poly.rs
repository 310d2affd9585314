//! Sparse multivariate polynomials over the rationals in the four formal
//! parameters `n`, `alpha`, `a`, `b`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub const NVARS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    N,
    Alpha,
    A,
    B,
}

impl Var {
    pub const ALL: [Var; NVARS] = [Var::N, Var::Alpha, Var::A, Var::B];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::N => "n",
            Var::Alpha => "alpha",
            Var::A => "a",
            Var::B => "b",
        }
    }
}

/// Exponent vector. Ordered lexicographically with `b > a > alpha > n`, so
/// the last entry of a `BTreeMap` keyed by `Exponents` is the leading term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Exponents(pub [u16; NVARS]);

impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> Ordering {
        for i in (0..NVARS).rev() {
            match self.0[i].cmp(&other.0[i]) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Exponents {
    fn add(&self, other: &Self) -> Self {
        let mut e = self.0;
        for (x, y) in e.iter_mut().zip(other.0.iter()) {
            *x += *y;
        }
        Exponents(e)
    }

    fn checked_sub(&self, other: &Self) -> Option<Self> {
        let mut e = self.0;
        for (x, y) in e.iter_mut().zip(other.0.iter()) {
            *x = x.checked_sub(*y)?;
        }
        Some(Exponents(e))
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Exponents, BigRational>,
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Exponents::default(), c);
        }
        Poly { terms }
    }

    pub fn from_int(c: i64) -> Self {
        Poly::constant(rat(c))
    }

    pub fn var(v: Var) -> Self {
        let mut e = Exponents::default();
        e.0[v.index()] = 1;
        Poly::monomial(e, BigRational::one())
    }

    pub fn monomial(e: Exponents, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// The value of a constant polynomial (zero included), `None` otherwise.
    pub fn constant_value(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.is_zero().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<(&Exponents, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self, v: Var) -> u16 {
        self.terms.keys().map(|e| e.0[v.index()]).max().unwrap_or(0)
    }

    pub fn contains(&self, v: Var) -> bool {
        self.terms.keys().any(|e| e.0[v.index()] > 0)
    }

    /// Highest-ranked variable occurring in the polynomial.
    fn main_var(&self) -> Option<Var> {
        Var::ALL.iter().rev().copied().find(|&v| self.contains(v))
    }

    fn add_term(&mut self, e: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    fn mul_monomial(&self, e: &Exponents, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(f, x)| (f.add(e), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (le, lc) = d.leading().map(|(e, c)| (*e, c.clone()))?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((re, rc)) = rem.leading().map(|(e, c)| (*e, c.clone())) {
            let qe = re.checked_sub(&le)?;
            let qc = rc / &lc;
            rem = &rem - &d.mul_monomial(&qe, &qc);
            quot.add_term(qe, qc);
        }
        Some(quot)
    }

    /// Coefficients with respect to `v`, indexed by degree.
    pub fn coeffs_in(&self, v: Var) -> Vec<Poly> {
        let deg = self.degree(v) as usize;
        let mut out = vec![Poly::zero(); deg + 1];
        for (e, c) in &self.terms {
            let mut f = *e;
            let k = f.0[v.index()] as usize;
            f.0[v.index()] = 0;
            out[k].add_term(f, c.clone());
        }
        out
    }

    pub fn from_coeffs(v: Var, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            for (e, x) in &c.terms {
                let mut f = *e;
                f.0[v.index()] += k as u16;
                out.add_term(f, x.clone());
            }
        }
        out
    }

    pub fn eval(&self, point: &[BigRational; NVARS]) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    t *= num_traits::pow(point[i].clone(), k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64; NVARS]) -> f64 {
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut t = c.to_f64().unwrap_or(f64::NAN);
            for (i, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    t *= point[i].powi(k as i32);
                }
            }
            acc += t;
        }
        acc
    }

    /// Replaces `v` by the polynomial `by` (Horner in `v`).
    pub fn substitute(&self, v: Var, by: &Poly) -> Poly {
        let coeffs = self.coeffs_in(v);
        let mut acc = Poly::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * by) + c;
        }
        acc
    }

    /// Positive rational `c` such that `self / c` has coprime integer
    /// coefficients and a positive leading coefficient, times the sign of the
    /// leading coefficient.
    pub fn unit_normal_factor(&self) -> BigRational {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        if num_gcd.is_zero() {
            return BigRational::one();
        }
        let content = BigRational::new(num_gcd, den_lcm);
        match self.leading() {
            Some((_, lc)) if lc.is_negative() => -content,
            _ => content,
        }
    }

    /// Integer-primitive associate with positive leading coefficient.
    pub fn unit_normal(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.unit_normal_factor().recip())
    }

    /// Greatest common divisor, normalized by [`Poly::unit_normal`].
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return b.unit_normal();
        }
        if b.is_zero() {
            return a.unit_normal();
        }
        if a.is_constant() || b.is_constant() {
            return Poly::one();
        }
        if a == b {
            return a.unit_normal();
        }
        let v = match (a.main_var(), b.main_var()) {
            (Some(x), Some(y)) => x.max(y),
            _ => return Poly::one(),
        };
        if !a.contains(v) {
            return Poly::gcd(a, &b.content_in(v));
        }
        if !b.contains(v) {
            return Poly::gcd(&a.content_in(v), b);
        }
        let ca = a.content_in(v);
        let cb = b.content_in(v);
        let c = Poly::gcd(&ca, &cb);
        let mut p = a.exact_div(&ca).expect("content divides").coeffs_in(v);
        let mut q = b.exact_div(&cb).expect("content divides").coeffs_in(v);
        if p.len() < q.len() {
            std::mem::swap(&mut p, &mut q);
        }
        loop {
            let r = pseudo_remainder(&p, &q);
            if r.is_empty() {
                break;
            }
            if r.len() == 1 {
                q = vec![Poly::one()];
                break;
            }
            let r = Poly::from_coeffs(v, &r);
            let rc = r.content_in(v);
            let r = r.exact_div(&rc).expect("content divides").coeffs_in(v);
            p = std::mem::replace(&mut q, r);
        }
        let g = Poly::from_coeffs(v, &q);
        let g = g.exact_div(&g.content_in(v)).expect("content divides");
        (&c * &g).unit_normal()
    }

    /// Gcd of the coefficients with respect to `v`.
    pub fn content_in(&self, v: Var) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs_in(v) {
            if c.is_zero() {
                continue;
            }
            acc = Poly::gcd(&acc, &c);
            if acc.is_one() {
                break;
            }
        }
        acc
    }

    fn fmt_monomial(e: &Exponents) -> String {
        let mut parts = Vec::new();
        for v in Var::ALL {
            match e.0[v.index()] {
                0 => {}
                1 => parts.push(v.name().to_string()),
                k => parts.push(format!("{}^{}", v.name(), k)),
            }
        }
        parts.join("*")
    }
}

fn trim(v: &mut Vec<Poly>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Pseudo-remainder of dense coefficient vectors, without the trailing
/// power of the leading coefficient (only used up to content).
fn pseudo_remainder(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lcb = &b[db];
    while r.len() > db {
        let dr = r.len() - 1;
        let lcr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * lcb;
        }
        for (j, bj) in b.iter().enumerate() {
            r[j + shift] = &r[j + shift] - &(&lcr * bj);
        }
        trim(&mut r);
    }
    r
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1.add(e2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mono = Poly::fmt_monomial(e);
            if mono.is_empty() {
                write!(f, "{}", abs)?;
            } else if abs.is_one() {
                write!(f, "{}", mono)?;
            } else {
                write!(f, "{}*{}", abs, mono)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n() -> Poly {
        Poly::var(Var::N)
    }
    fn al() -> Poly {
        Poly::var(Var::Alpha)
    }

    #[test]
    fn gcd_of_difference_of_squares() {
        let a = &(&n() * &n()) - &Poly::from_int(16);
        let b = &n() - &Poly::from_int(4);
        assert_eq!(Poly::gcd(&a, &b), b);
        assert_eq!(a.exact_div(&b).unwrap(), &n() + &Poly::from_int(4));
    }

    #[test]
    fn gcd_multivariate_common_factor() {
        // (n + alpha)(n - 1) and (n + alpha)(alpha + 3)
        let f = &n() + &al();
        let a = &f * &(&n() - &Poly::from_int(1));
        let b = &f * &(&al() + &Poly::from_int(3));
        assert_eq!(Poly::gcd(&a, &b), f);
    }

    #[test]
    fn exact_div_rejects_non_divisor() {
        let a = &n() + &Poly::from_int(1);
        let b = &n() - &Poly::from_int(1);
        assert!(a.exact_div(&b).is_none());
    }

    #[test]
    fn unit_normal_clears_denominators() {
        let p = Poly::constant(BigRational::new(BigInt::from(-3), BigInt::from(4)));
        let q = &n().scale(&BigRational::new(BigInt::from(-3), BigInt::from(2))) + &p;
        assert_eq!(q.unit_normal().to_string(), "2*n + 1");
    }

    #[test]
    fn substitute_and_eval_agree() {
        let p = &(&n() * &al()) + &Poly::from_int(2);
        let q = p.substitute(Var::Alpha, &(&n() + &Poly::from_int(1)));
        let pt = [rat(3), rat(0), rat(0), rat(0)];
        assert_eq!(q.eval(&pt), rat(14));
    }
}
