//! Named expressions: invariant tensors, their contractions and the
//! parameter coefficients.

use serde::Serialize;

use super::coeffs;
use crate::calculus::{b_formal, b_special, e_def, f_def, g_def, z_a};
use crate::error::{Error, Result};
use crate::symcore::builders::*;
use crate::symcore::{Expr, ParamScalar};

/// `E_i = E_ij u^j / u`
pub fn e_i() -> Expr {
    e_tensor()
        .contract(&du(), &[(1, 0)])
        .expect("valence")
        .mul_u_pow(-1)
}

/// `E = E_i u^i / u`
pub fn e_sc() -> Expr {
    e_i().dot(&du()).expect("vectors").mul_u_pow(-1)
}

/// `F = F_i u^i / u`
pub fn f_sc() -> Expr {
    f_vec().dot(&du()).expect("vectors").mul_u_pow(-1)
}

/// `E_ij E^ij`
pub fn ee() -> Expr {
    e_tensor().dot(&e_tensor()).expect("tensors")
}

/// `R_ij u^i u^j`
pub fn ric_uu() -> Expr {
    ric()
        .contract(&du(), &[(1, 0)])
        .and_then(|v| v.dot(&du()))
        .expect("valence")
}

/// `|∇u|^{2k}`
pub fn grad_pow(k: usize) -> Expr {
    let parts: Vec<Expr> = (0..k).map(|_| grad_sq()).collect();
    let refs: Vec<&Expr> = parts.iter().collect();
    prod(&refs)
}

/// `u_ij u^i u^j`
pub fn hess_uu() -> Expr {
    hess()
        .contract(&du(), &[(1, 0)])
        .and_then(|v| v.dot(&du()))
        .expect("valence")
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Body {
    Expr { valence: u8, terms: Expr },
    Coefficient { value: ParamScalar },
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedExpression {
    pub name: String,
    pub body: Body,
    pub anchor: String,
}

impl NamedExpression {
    pub fn expr(&self) -> Option<&Expr> {
        match &self.body {
            Body::Expr { terms, .. } => Some(terms),
            Body::Coefficient { .. } => None,
        }
    }

    pub fn coefficient(&self) -> Option<&ParamScalar> {
        match &self.body {
            Body::Coefficient { value } => Some(value),
            Body::Expr { .. } => None,
        }
    }
}

pub const NAMES: &[&str] = &[
    "Z_a", "E_ij", "E_j", "F_j", "E", "F", "G", "c1", "c2", "A11", "A12", "A13", "A23", "A33",
];

/// Builds a catalog entry in jet symbols. With `specialized`, `b` is
/// replaced by `-(1 + nα/(n+4))/2`; otherwise it stays formal.
pub fn build_named(name: &str, specialized: bool) -> Result<NamedExpression> {
    let b = if specialized { b_special() } else { b_formal() };
    let expr = |e: Expr, anchor: &str| NamedExpression {
        name: name.to_string(),
        body: Body::Expr {
            valence: e.valence(),
            terms: e,
        },
        anchor: anchor.to_string(),
    };
    let coef = |c: ParamScalar, anchor: &str| NamedExpression {
        name: name.to_string(),
        body: Body::Coefficient { value: c },
        anchor: anchor.to_string(),
    };
    let backward =
        |e: Expr| crate::calculus::substitute_defs(&e, crate::calculus::Direction::Backward, &b);
    Ok(match name {
        "Z_a" => expr(
            z_a(&ParamScalar::var(crate::symcore::Var::A)),
            "Z_a = Δu/u + a|∇u|²/u²",
        ),
        "E_ij" => expr(e_def(&b), "trace-free tensor E_ij"),
        "E_j" => expr(backward(e_i())?, "E_j = E_ij u^i / u"),
        "F_j" => expr(f_def(&b), "vector F_j"),
        "E" => expr(backward(e_sc())?, "E = E_i u^i / u"),
        "F" => expr(backward(f_sc())?, "F = F_i u^i / u"),
        "G" => expr(g_def(&b), "scalar G"),
        "c1" => coef(coeffs::c1(), "master identity coefficient c1"),
        "c2" => coef(coeffs::c2(), "master identity coefficient c2"),
        "A11" => coef(coeffs::a11_display(), "matrix entry A11, quartic display"),
        "A12" => coef(coeffs::a12(), "matrix entry A12"),
        "A13" => coef(coeffs::a13(), "matrix entry A13"),
        "A23" => coef(coeffs::a23(), "matrix entry A23"),
        "A33" => coef(coeffs::a33(), "matrix entry A33"),
        other => return Err(Error::UnknownName(other.to_string())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::ps;

    #[test]
    fn e_ij_is_trace_free() {
        let e = build_named("E_ij", false).unwrap();
        assert!(e.expr().unwrap().trace().unwrap().is_zero());
    }

    #[test]
    fn specialized_f_matches_display() {
        let got = build_named("F_j", true).unwrap();
        let want = sum(
            1,
            &[
                (ps("1"), dlap()),
                (
                    ps("-(n+2)/(2*n)*(1+n*alpha/(n+4))"),
                    prod(&[&lap(), &du()]).mul_u_pow(-1),
                ),
                (
                    ps("1/4*(1+n*alpha/(n+4))*((n+2)/n - (n-2)/(n+4)*alpha)"),
                    prod(&[&grad_sq(), &du()]).mul_u_pow(-2),
                ),
            ],
        );
        assert_eq!(got.expr().unwrap(), &want);
    }

    #[test]
    fn specialized_g_matches_display() {
        let got = build_named("G", true).unwrap();
        let want = sum(
            0,
            &[
                (ps("1"), bilap()),
                (
                    ps("-(n+2)/(2*n)*(1+n*alpha/(n+4))"),
                    prod(&[&lap(), &lap()]).mul_u_pow(-1),
                ),
                (
                    ps("(n+2)/(2*n)*(1+n*alpha/(n+4))*(1-n*alpha/(n+4))"),
                    prod(&[&lap(), &grad_sq()]).mul_u_pow(-2),
                ),
                (
                    ps("-1/8*(1+n*alpha/(n+4))*(1-3*n*alpha/(n+4))*((n+2)/n-(n-2)/(n+4)*alpha)"),
                    grad_pow(2).mul_u_pow(-3),
                ),
            ],
        );
        assert_eq!(got.expr().unwrap(), &want);
    }

    #[test]
    fn c1_display() {
        let c1 = build_named("c1", false).unwrap();
        assert_eq!(
            c1.coefficient().unwrap(),
            &ps("-n^2*(3*n-10)*alpha^2/(4*(n-1)*(n+4)^2) + 2*(n+2)*alpha/((n-1)*(n+4)) + 3*(n+2)/(4*(n-1))")
        );
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(
            build_named("H_ij", false),
            Err(Error::UnknownName(_))
        ));
    }
}
