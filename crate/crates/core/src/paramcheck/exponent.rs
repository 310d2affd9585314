//! Exact arithmetic behind the gradient-estimate coefficient and the final
//! exponent count.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::matrix::FormulaCheck;
use crate::error::{Error, Result};
use crate::symcore::{ps, ParamScalar, Var};

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `a/n·(1+2a)·[2-(n-4)a]`, the `|∇u|⁴/u⁴` coefficient of the lower
/// bound for `u^{2a-2}div(u^{2-2a}∇Z_a)`.
pub fn est_coefficient(n: i64, a: &BigRational) -> BigRational {
    a / q(n) * (BigRational::one() + q(2) * a) * (q(2) - q(n - 4) * a)
}

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientCheck {
    pub n: i64,
    pub a: String,
    pub value: String,
    pub positive: bool,
}

/// Positivity of the coefficient for `a` in `(0, 2/(n-4))`.
pub fn aux_coefficient_check(n: i64, a: &BigRational) -> Result<CoefficientCheck> {
    let top = BigRational::new(2.into(), (n - 4).into());
    if n < 5 || !a.is_positive() || a >= &top {
        return Err(Error::InvalidParameters(format!(
            "a = {a} outside (0, {top}) at n = {n}"
        )));
    }
    let v = est_coefficient(n, a);
    Ok(CoefficientCheck {
        n,
        a: a.to_string(),
        value: v.to_string(),
        positive: v.is_positive(),
    })
}

/// `points` equally spaced values of `a` strictly inside `(0, 2/(n-4))`.
pub fn coefficient_grid(n: i64, points: usize) -> Result<Vec<CoefficientCheck>> {
    let top = BigRational::new(2.into(), (n - 4).into());
    let g = points as i64 + 1;
    (1..g)
        .map(|j| aux_coefficient_check(n, &(&top * BigRational::new(j.into(), g.into()))))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ExponentCheck {
    pub n: i64,
    pub alpha: String,
    pub gamma: String,
    pub gamma_at_least_6: bool,
    /// `((n²-2n-16)α - (n+2)(n+4)) / ((n+4)(α-1))`
    pub final_exponent: String,
    /// `-8/((n-4)(α-1))`
    pub bound: String,
    pub final_below_bound: bool,
    pub bound_negative: bool,
    pub final_negative: bool,
}

impl ExponentCheck {
    /// The displayed chain `final < bound < 0` and `γ ≥ 6`.
    pub fn chain_holds(&self) -> bool {
        self.gamma_at_least_6 && self.final_below_bound && self.bound_negative
    }
}

/// `γ = max{6, ((6n+16)α/(n+4) - 2)/(α-1)}`
pub fn gamma(n: i64, alpha: &BigRational) -> BigRational {
    let one = BigRational::one();
    let g = (q(6 * n + 16) * alpha / q(n + 4) - q(2)) / (alpha - &one);
    g.max(q(6))
}

pub fn exponent_check(n: i64, alpha: &BigRational) -> Result<ExponentCheck> {
    let one = BigRational::one();
    let top = BigRational::new((n + 4).into(), (n - 4).into());
    if n < 5 || alpha <= &one || alpha >= &top {
        return Err(Error::InvalidParameters(format!(
            "alpha = {alpha} outside (1, {top}) at n = {n}"
        )));
    }
    let g = gamma(n, alpha);
    let am1 = alpha - &one;
    let fin = (q(n * n - 2 * n - 16) * alpha - q((n + 2) * (n + 4))) / (q(n + 4) * &am1);
    let bound = -q(8) / (q(n - 4) * &am1);
    Ok(ExponentCheck {
        n,
        alpha: alpha.to_string(),
        gamma_at_least_6: g >= q(6),
        gamma: g.to_string(),
        final_below_bound: fin < bound,
        bound_negative: bound.is_negative(),
        final_negative: fin.is_negative(),
        final_exponent: fin.to_string(),
        bound: bound.to_string(),
    })
}

/// `per_n` values of `α` equally spaced strictly inside `(1, (n+4)/(n-4))`.
pub fn alpha_grid(n: i64, per_n: usize) -> Vec<BigRational> {
    let one = BigRational::one();
    let top = BigRational::new((n + 4).into(), (n - 4).into());
    let g = per_n as i64 + 1;
    (1..g)
        .map(|j| &one + (&top - &one) * BigRational::new(j.into(), g.into()))
        .collect()
}

pub fn exponent_grid(n_min: i64, n_max: i64, per_n: usize) -> Result<Vec<ExponentCheck>> {
    (n_min..=n_max)
        .flat_map(|n| alpha_grid(n, per_n).into_iter().map(move |a| (n, a)))
        .map(|(n, a)| exponent_check(n, &a))
        .collect()
}

/// `n - ((6n+16)α/(n+4) + 2)/(α-1)` equals the displayed final exponent.
pub fn exponent_identity() -> FormulaCheck {
    let lhs = ps("n - ((6*n+16)*alpha/(n+4) + 2)/(alpha - 1)");
    let rhs = ps("((n^2 - 2*n - 16)*alpha - (n+2)*(n+4))/((n+4)*(alpha - 1))");
    let r = &lhs - &rhs;
    FormulaCheck {
        name: "final exponent after volume growth".into(),
        holds: r.is_zero(),
        residual: r.to_string(),
    }
}

/// The middle inequality with denominators cleared:
/// `L(α) = (n²-2n-16)α - (n+2)(n+4) + 8(n+4)/(n-4) < 0`, linear in `α`,
/// certified by its values at both ends of `(1, (n+4)/(n-4))`.
#[derive(Clone, Debug, Serialize)]
pub struct LinearCertificate {
    pub expression: String,
    pub linear_in_alpha: bool,
    pub at_alpha_one: String,
    pub at_alpha_max: String,
}

pub fn middle_inequality() -> Result<LinearCertificate> {
    let l = middle_expression();
    let linear = l.denom().degree(Var::Alpha) == 0 && l.numer().degree(Var::Alpha) <= 1;
    Ok(LinearCertificate {
        expression: l.to_string(),
        linear_in_alpha: linear,
        at_alpha_one: l.substitute(Var::Alpha, &ParamScalar::one())?.to_string(),
        at_alpha_max: l.substitute(Var::Alpha, &ps("(n+4)/(n-4)"))?.to_string(),
    })
}

fn middle_expression() -> ParamScalar {
    ps("(n^2 - 2*n - 16)*alpha - (n+2)*(n+4) + 8*(n+4)/(n-4)")
}

/// Whether `L < 0` on the whole open range at integer `n`: a linear
/// function is negative there iff both end values are `≤ 0` and not both
/// zero.
pub fn middle_inequality_at(n: i64) -> Result<bool> {
    let l = middle_expression().specialize(Var::N, &q(n))?;
    let v1 = l
        .specialize(Var::Alpha, &BigRational::one())?
        .constant_value();
    let v2 = l
        .specialize(
            Var::Alpha,
            &BigRational::new((n + 4).into(), (n - 4).into()),
        )?
        .constant_value();
    let (v1, v2) = v1
        .zip(v2)
        .ok_or_else(|| Error::InvalidParameters(format!("n = {n}")))?;
    Ok(!v1.is_positive() && !v2.is_positive() && !(v1.is_zero() && v2.is_zero()))
}
