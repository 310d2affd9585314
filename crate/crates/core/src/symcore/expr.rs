use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use super::monomial::{Factor, FactorKind, Slot, TensorMonomial};
use super::param::ParamScalar;
use super::poly::Var;
use crate::error::{Error, Result};

/// A finite sum of canonical monomials with nonzero coefficients, all of
/// the same valence (0 scalar, 1 vector, 2 two-tensor).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Expr {
    valence: u8,
    terms: BTreeMap<TensorMonomial, ParamScalar>,
}

pub type ScalarExpr = Expr;
pub type VectorExpr = Expr;

impl Expr {
    pub fn zero(valence: u8) -> Self {
        Expr {
            valence,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: ParamScalar) -> Self {
        let mut e = Expr::zero(0);
        if !c.is_zero() {
            e.terms.insert(TensorMonomial::one(), c);
        }
        e
    }

    /// `c · m`, with `m` reduced first. `m` need not be canonical.
    pub fn term(m: &TensorMonomial, c: ParamScalar) -> Result<Self> {
        let mut e = Expr::zero(m.validate()?);
        e.add_raw(m, c)?;
        Ok(e)
    }

    /// Builds from raw monomials of a common valence.
    pub fn from_terms<'a>(
        valence: u8,
        terms: impl IntoIterator<Item = (&'a TensorMonomial, ParamScalar)>,
    ) -> Result<Self> {
        let mut e = Expr::zero(valence);
        for (m, c) in terms {
            e.add_raw(m, c)?;
        }
        Ok(e)
    }

    pub(crate) fn add_raw(&mut self, m: &TensorMonomial, c: ParamScalar) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        let v = m.validate()?;
        if v != self.valence {
            return Err(Error::ValenceMismatch {
                left: self.valence,
                right: v,
            });
        }
        for r in m.reduce()? {
            let mut coef = c.clone();
            for _ in 0..r.metric_traces {
                coef = &coef * &ParamScalar::n();
            }
            self.add_canonical(r.mono, coef);
        }
        Ok(())
    }

    fn add_canonical(&mut self, m: TensorMonomial, c: ParamScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn valence(&self) -> u8 {
        self.valence
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TensorMonomial, &ParamScalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &TensorMonomial) -> ParamScalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn contains(&self, kind: FactorKind) -> bool {
        self.terms.keys().any(|m| m.contains(kind))
    }

    /// `c1·e1 + c2·e2`.
    pub fn combine(e1: &Expr, c1: &ParamScalar, e2: &Expr, c2: &ParamScalar) -> Result<Expr> {
        if e1.valence != e2.valence {
            return Err(Error::ValenceMismatch {
                left: e1.valence,
                right: e2.valence,
            });
        }
        let mut out = e1.scale(c1);
        for (m, c) in &e2.terms {
            out.add_canonical(m.clone(), c * c2);
        }
        Ok(out)
    }

    pub fn add(&self, other: &Expr) -> Result<Expr> {
        Expr::combine(self, &ParamScalar::one(), other, &ParamScalar::one())
    }

    pub fn sub(&self, other: &Expr) -> Result<Expr> {
        Expr::combine(self, &ParamScalar::one(), other, &ParamScalar::int(-1))
    }

    pub fn scale(&self, c: &ParamScalar) -> Expr {
        if c.is_zero() {
            return Expr::zero(self.valence);
        }
        Expr {
            valence: self.valence,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn neg(&self) -> Expr {
        self.scale(&ParamScalar::int(-1))
    }

    /// Multiplies every term by `u^k`.
    pub fn mul_u_pow(&self, k: i32) -> Expr {
        Expr {
            valence: self.valence,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone().with_u_pow(k), c.clone()))
                .collect(),
        }
    }

    /// Tensor product; free slots of `other` follow those of `self`.
    pub fn mul(&self, other: &Expr) -> Result<Expr> {
        self.contract(other, &[])
    }

    /// Product with the listed free slots of `self` and `other` paired.
    /// Unpaired free slots of `self` come first, then those of `other`.
    pub fn contract(&self, other: &Expr, pairs: &[(u8, u8)]) -> Result<Expr> {
        for &(p, q) in pairs {
            if p >= self.valence || q >= other.valence {
                return Err(Error::ValenceMismatch {
                    left: self.valence,
                    right: other.valence,
                });
            }
        }
        let valence = self.valence + other.valence - 2 * pairs.len() as u8;
        let mut out = Expr::zero(valence);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let joined = join(m1, m2, pairs);
                out.add_raw(&joined, c1 * c2)?;
            }
        }
        Ok(out)
    }

    /// Full contraction of two expressions of equal valence.
    pub fn dot(&self, other: &Expr) -> Result<Expr> {
        if self.valence != other.valence {
            return Err(Error::ValenceMismatch {
                left: self.valence,
                right: other.valence,
            });
        }
        let pairs: Vec<(u8, u8)> = (0..self.valence).map(|k| (k, k)).collect();
        self.contract(other, &pairs)
    }

    /// Metric trace of a two-tensor.
    pub fn trace(&self) -> Result<Expr> {
        if self.valence != 2 {
            return Err(Error::ValenceMismatch {
                left: self.valence,
                right: 2,
            });
        }
        let mut out = Expr::zero(0);
        for (m, c) in &self.terms {
            let d = m.max_dummy().map_or(0, |d| d + 1);
            let (u_pow, mut factors) = m.clone().into_parts();
            for f in factors.iter_mut() {
                for s in f.slots.iter_mut() {
                    if matches!(s, Slot::Free(_)) {
                        *s = Slot::Dummy(d);
                    }
                }
            }
            out.add_raw(&TensorMonomial::new(u_pow, factors), c.clone())?;
        }
        Ok(out)
    }

    /// Replaces every factor of `kind` by `by`, whose free slot `k` is glued
    /// to the factor's slot `k`.
    pub fn splice(&self, kind: FactorKind, by: &Expr) -> Result<Expr> {
        if by.valence as usize != kind.arity() {
            return Err(Error::ValenceMismatch {
                left: kind.arity() as u8,
                right: by.valence,
            });
        }
        let mut out = Expr::zero(self.valence);
        for (m, c) in &self.terms {
            for (mm, cc) in splice_monomial(m, kind, by) {
                out.add_raw(&mm, c * &cc)?;
            }
        }
        Ok(out)
    }

    /// Applies `f` to every monomial and sums the results with the
    /// original coefficients.
    pub fn flat_map(
        &self,
        valence: u8,
        mut f: impl FnMut(&TensorMonomial) -> Result<Expr>,
    ) -> Result<Expr> {
        let mut out = Expr::zero(valence);
        for (m, c) in &self.terms {
            let image = f(m)?;
            if image.valence != valence {
                return Err(Error::ValenceMismatch {
                    left: valence,
                    right: image.valence,
                });
            }
            for (mm, cc) in image.terms {
                out.add_canonical(mm, c * &cc);
            }
        }
        Ok(out)
    }

    pub fn map_coefficients(
        &self,
        mut f: impl FnMut(&ParamScalar) -> Result<ParamScalar>,
    ) -> Result<Expr> {
        let mut out = Expr::zero(self.valence);
        for (m, c) in &self.terms {
            out.add_canonical(m.clone(), f(c)?);
        }
        Ok(out)
    }

    pub fn substitute_param(&self, v: Var, by: &ParamScalar) -> Result<Expr> {
        self.map_coefficients(|c| c.substitute(v, by))
    }

    /// The set of distinct `u`-homogeneity weights among the terms.
    pub fn homogeneities(&self) -> Vec<i32> {
        let mut h: Vec<i32> = self.terms.keys().map(|m| m.homogeneity()).collect();
        h.sort_unstable();
        h.dedup();
        h
    }

    /// Serialized monomials, one per term.
    pub fn term_strings(&self) -> Vec<String> {
        self.terms
            .iter()
            .map(|(m, c)| format!("({c}) {m}"))
            .collect()
    }
}

fn shift_dummies(f: &mut Factor, by: u16) {
    for s in f.slots.iter_mut() {
        if let Slot::Dummy(d) = s {
            *d += by;
        }
    }
}

fn join(m1: &TensorMonomial, m2: &TensorMonomial, pairs: &[(u8, u8)]) -> TensorMonomial {
    let off = m1.max_dummy().map_or(0, |d| d + 1);
    let base = off + m2.max_dummy().map_or(0, |d| d + 1);
    let v1 = m1.valence();
    let mut free1: Vec<u8> = (0..v1)
        .filter(|k| !pairs.iter().any(|p| p.0 == *k))
        .collect();
    free1.sort_unstable();
    let free2: Vec<u8> = (0..m2.valence())
        .filter(|k| !pairs.iter().any(|p| p.1 == *k))
        .collect();
    let map1 = |s: Slot| match s {
        Slot::Free(k) => match pairs.iter().position(|p| p.0 == k) {
            Some(i) => Slot::Dummy(base + i as u16),
            None => Slot::Free(free1.iter().position(|&x| x == k).unwrap() as u8),
        },
        d => d,
    };
    let map2 = |s: Slot| match s {
        Slot::Free(k) => match pairs.iter().position(|p| p.1 == k) {
            Some(i) => Slot::Dummy(base + i as u16),
            None => Slot::Free((free1.len() + free2.iter().position(|&x| x == k).unwrap()) as u8),
        },
        Slot::Dummy(d) => Slot::Dummy(d + off),
    };
    let mut factors = Vec::with_capacity(m1.factors().len() + m2.factors().len());
    for f in m1.factors() {
        let mut g = f.clone();
        for s in g.slots.iter_mut() {
            *s = map1(*s);
        }
        factors.push(g);
    }
    for f in m2.factors() {
        let mut g = f.clone();
        for s in g.slots.iter_mut() {
            *s = map2(*s);
        }
        factors.push(g);
    }
    TensorMonomial::new(m1.u_pow() + m2.u_pow(), factors)
}

/// Raw (unreduced) image of `m` with every `kind` factor replaced.
fn splice_monomial(
    m: &TensorMonomial,
    kind: FactorKind,
    by: &Expr,
) -> Vec<(TensorMonomial, ParamScalar)> {
    let Some(pos) = m.factors().iter().position(|f| f.kind == kind) else {
        return vec![(m.clone(), ParamScalar::one())];
    };
    let target = m.factors()[pos].clone();
    let mut rest: Vec<Factor> = m.factors().to_vec();
    rest.remove(pos);
    let off = m.max_dummy().map_or(0, |d| d + 1);
    let mut out = Vec::new();
    for (rm, rc) in by.terms() {
        let mut factors = rest.clone();
        for f in rm.factors() {
            let mut g = f.clone();
            shift_dummies(&mut g, off);
            for s in g.slots.iter_mut() {
                if let Slot::Free(k) = *s {
                    *s = target.slots[k as usize];
                }
            }
            factors.push(g);
        }
        let next = TensorMonomial::new(m.u_pow() + rm.u_pow(), factors);
        for (mm, cc) in splice_monomial(&next, kind, by) {
            out.push((mm, rc * &cc));
        }
    }
    out
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", self.term_strings().join(" + "))
    }
}

impl Serialize for Expr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.term_strings())
    }
}

#[cfg(test)]
mod tests {
    use super::super::builders::*;
    use super::*;
    use crate::symcore::param::ps;

    #[test]
    fn combine_cancels() {
        let e = grad_sq();
        assert!(Expr::combine(&e, &ps("1"), &e, &ps("-1"))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn valence_mismatch() {
        assert!(matches!(
            Expr::combine(&grad_sq(), &ps("1"), &du(), &ps("1")),
            Err(Error::ValenceMismatch { .. })
        ));
    }

    #[test]
    fn metric_trace_is_n() {
        assert_eq!(metric().trace().unwrap(), Expr::constant(ps("n")));
    }

    #[test]
    fn hessian_trace_is_laplacian() {
        assert_eq!(hess().trace().unwrap(), lap());
    }

    #[test]
    fn contraction_orders_free_slots() {
        // u_ij u^j vs u^j u_ji
        let a = hess().contract(&du(), &[(1, 0)]).unwrap();
        let b = du().contract(&hess(), &[(0, 0)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.valence(), 1);
    }

    #[test]
    fn splice_preserves_contractions() {
        // |∇²u|² with u_ij -> u_i u_j gives |∇u|⁴
        let outer = du().mul(&du()).unwrap();
        let hh = hess().dot(&hess()).unwrap();
        let got = hh.splice(FactorKind::Hess, &outer).unwrap();
        assert_eq!(got, grad_sq().mul(&grad_sq()).unwrap());
    }
}
