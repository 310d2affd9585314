//! Parameter coefficients as printed, built from text so each formula can
//! be read against its display.

use crate::symcore::{ps, ParamScalar};

/// `β = 1 + nα/(n+4)`
pub fn beta() -> ParamScalar {
    ps("1 + n*alpha/(n+4)")
}

/// `P = (n-2)α/(n+4)`
pub fn p_coef() -> ParamScalar {
    ps("(n-2)*alpha/(n+4)")
}

/// `Q = (n+2)/n`
pub fn q_coef() -> ParamScalar {
    ps("(n+2)/n")
}

/// `1 - (n-4)α/(n+4)`, vanishing at the critical exponent.
pub fn critical_factor() -> ParamScalar {
    ps("1 - (n-4)*alpha/(n+4)")
}

/// Weight `-2α/(n+4)` of the divergence-form identities.
pub fn weight() -> ParamScalar {
    ps("-2*alpha/(n+4)")
}

pub fn c1() -> ParamScalar {
    ps("-n^2*(3*n-10)/(4*(n-1)*(n+4)^2)*alpha^2 + 2*(n+2)/((n-1)*(n+4))*alpha + 3*(n+2)/(4*(n-1))")
}

pub fn c2() -> ParamScalar {
    ps("(n^2+2*n+4)/((n-1)*(n+4))*alpha + (n+2)/(n-1)")
}

pub fn a12() -> ParamScalar {
    ps("(n^2-8)/(2*(n-1)*(n+4))*alpha - (n+2)/(2*(n-1))")
}

pub fn a13() -> ParamScalar {
    ps("alpha/(n+4)*(n^2*alpha/(n+4) + n + 1)*(1 - (n-4)/(n+4)*alpha)")
}

pub fn a23() -> ParamScalar {
    ps("-alpha/4*(1 - (n-4)/(n+4)*alpha)")
}

pub fn a33() -> ParamScalar {
    ps("n*(n-2)/(2*(n+4)^2)*alpha^2*(1 + n*alpha/(n+4))*(1 - (n-4)/(n+4)*alpha)")
}

/// The quartic display for `A11`.
pub fn a11_display() -> ParamScalar {
    ps("-n^2*(3*n-2)*(3*n-10)/(4*(n-1)^2*(n+4)^2)*alpha^2 + 4*(2*n^3-3*n^2-8*n+8)/((n-1)^2*(n-4)*(n+4))*alpha + (n+2)*(9*n^2-34*n+24)/(4*(n-1)^2*(n-4))")
}

/// `A11 = n/(n-1)·(c1 + 2c2/(n-4)) + 2c1`.
pub fn a11_from_c() -> ParamScalar {
    let c1 = c1();
    let c2 = c2();
    let inner = &c1 + &(ps("2/(n-4)") * &c2);
    ps("n/(n-1)") * inner + ps("2") * c1
}

/// Coefficient of `|∇u|⁴∇u/u³` in the master bracket.
pub fn master_k() -> ParamScalar {
    ps("n*alpha/(2*(n+4))*(1 + n*alpha/(n+4))*(1 - (n-4)/(n+4)*alpha)")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::{param::rational, Var};

    #[test]
    fn a11_routes_agree() {
        assert_eq!(a11_from_c(), a11_display());
    }

    #[test]
    fn a12_at_sample_point() {
        let v = a12()
            .specialize(Var::N, &rational(5, 1))
            .unwrap()
            .specialize(Var::Alpha, &rational(2, 1))
            .unwrap();
        assert_eq!(v, ParamScalar::ratio(-29, 72));
    }

    #[test]
    fn a33_vanishes_at_critical_exponent() {
        let v = a33().substitute(Var::Alpha, &ps("(n+4)/(n-4)")).unwrap();
        assert!(v.is_zero());
    }
}
