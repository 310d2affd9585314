//! The 3×3 coefficient matrix of the master identity, the auxiliary
//! polynomials `f1`, `f2`, `f3` and the exact factorization checks.

use num_rational::BigRational;
use serde::Serialize;

use super::upoly::UPoly;
use crate::error::{Error, Result};
use crate::registry::coeffs;
use crate::symcore::{ps, ParamScalar, Var};

/// Polynomial in an auxiliary variable `x` with coefficients in `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct XPoly {
    pub name: String,
    /// Constant term first.
    pub coeffs: Vec<ParamScalar>,
}

impl XPoly {
    fn new(name: &str, coeffs: &[&str]) -> Self {
        XPoly {
            name: name.to_string(),
            coeffs: coeffs.iter().map(|c| ps(c)).collect(),
        }
    }

    /// `f(x)` for a parameter expression `x`.
    pub fn compose(&self, x: &ParamScalar) -> ParamScalar {
        self.coeffs
            .iter()
            .rev()
            .fold(ParamScalar::zero(), |acc, c| &(&acc * x) + c)
    }

    /// `f` with `n` fixed, as an exact univariate polynomial in `x`.
    pub fn at_n(&self, n: i64) -> Result<UPoly> {
        let nv = BigRational::from_integer(n.into());
        let c = self
            .coeffs
            .iter()
            .map(|c| {
                c.specialize(Var::N, &nv)?
                    .constant_value()
                    .ok_or_else(|| Error::InvalidParameters(format!("{} at n = {n}", self.name)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(UPoly::new(c))
    }

    /// Copy with coefficient `k` shifted by `delta`.
    pub fn perturbed(&self, k: usize, delta: &ParamScalar) -> XPoly {
        let mut out = self.clone();
        out.coeffs[k] = &out.coeffs[k] + delta;
        out
    }
}

pub fn f1() -> XPoly {
    XPoly::new(
        "f1",
        &[
            "4*(n+2)*(n-4)",
            "n^3 + 16*n^2 - 8*n - 64",
            "-(5*n^4 - 18*n^3 + 2*n^2 + 32)",
        ],
    )
}

pub fn f2() -> XPoly {
    XPoly::new(
        "f2",
        &[
            "(n-2)^2*(n-4)*(7*n+32)",
            "(n-2)*(9*n^4 + 118*n^3 - 288*n^2 + 96*n + 512)",
            "-n*(7*n^5 - 224*n^4 + 972*n^3 - 1936*n^2 + 1088*n + 256)",
            "-n*(n-4)*(9*n^5 - 48*n^4 + 148*n^3 - 112*n^2 + 448*n - 256)",
        ],
    )
}

pub fn f3() -> XPoly {
    XPoly::new(
        "f3",
        &[
            "(n-2)*(n-4)*(7*n+32)",
            "9*n^4 + 118*n^3 - 288*n^2 + 96*n + 512",
            "-16*n^2*(n-12)*(n^2 - 3*n + 4)",
        ],
    )
}

/// Symmetric matrix with `A22 = 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatrixA {
    pub entries: [[ParamScalar; 3]; 3],
}

/// Builds `A` with formal `n` (or `n` fixed). `A11` is taken from its
/// quartic display after checking it against `n/(n-1)(c1 + 2c2/(n-4)) + 2c1`.
pub fn build_matrix_a(n: Option<i64>) -> Result<MatrixA> {
    let a11 = coeffs::a11_display();
    if a11 != coeffs::a11_from_c() {
        return Err(Error::EngineInconsistency(
            "A11 display disagrees with its construction from c1, c2".into(),
        ));
    }
    let (a12, a13, a23, a33) = (coeffs::a12(), coeffs::a13(), coeffs::a23(), coeffs::a33());
    let one = ParamScalar::one();
    let mut m = MatrixA {
        entries: [
            [a11, a12.clone(), a13.clone()],
            [a12, one, a23.clone()],
            [a13, a23, a33],
        ],
    };
    if let Some(n) = n {
        let nv = BigRational::from_integer(n.into());
        for row in m.entries.iter_mut() {
            for e in row.iter_mut() {
                *e = e.specialize(Var::N, &nv)?;
            }
        }
    }
    Ok(m)
}

impl MatrixA {
    pub fn get(&self, i: usize, j: usize) -> &ParamScalar {
        &self.entries[i][j]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..3).all(|i| (0..3).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    /// Leading 2×2 minor.
    pub fn minor2(&self) -> ParamScalar {
        let e = &self.entries;
        &(&e[0][0] * &e[1][1]) - &(&e[0][1] * &e[1][0])
    }

    pub fn det(&self) -> ParamScalar {
        let e = &self.entries;
        let cof = |i: usize, j: usize, k: usize, l: usize| {
            &(&e[i][k] * &e[j][l]) - &(&e[i][l] * &e[j][k])
        };
        let t0 = &e[0][0] * &cof(1, 2, 1, 2);
        let t1 = &e[0][1] * &cof(1, 2, 0, 2);
        let t2 = &e[0][2] * &cof(1, 2, 0, 1);
        &(&t0 - &t1) + &t2
    }

    /// All seven principal minors: the three diagonal entries, the three
    /// 2×2 minors, then the determinant.
    pub fn principal_minors(&self) -> Vec<ParamScalar> {
        let e = &self.entries;
        let m2 = |i: usize, j: usize| &(&e[i][i] * &e[j][j]) - &(&e[i][j] * &e[j][i]);
        vec![
            e[0][0].clone(),
            e[1][1].clone(),
            e[2][2].clone(),
            m2(0, 1),
            m2(0, 2),
            m2(1, 2),
            self.det(),
        ]
    }

    /// Entries at a numeric point (`n` and `α`).
    pub fn eval_f64(&self, n: f64, alpha: f64) -> Result<[[f64; 3]; 3]> {
        let mut out = [[0.0; 3]; 3];
        for (row, src) in out.iter_mut().zip(&self.entries) {
            for (x, e) in row.iter_mut().zip(src) {
                *x = e.eval_f64(&[n, alpha, 0.0, 0.0])?;
            }
        }
        Ok(out)
    }
}

/// One exact polynomial identity with its residual.
#[derive(Clone, Debug, Serialize)]
pub struct FormulaCheck {
    pub name: String,
    pub holds: bool,
    pub residual: String,
}

fn formula(name: &str, lhs: &ParamScalar, rhs: &ParamScalar) -> FormulaCheck {
    let r = lhs - rhs;
    FormulaCheck {
        name: name.to_string(),
        holds: r.is_zero(),
        residual: r.to_string(),
    }
}

/// `A11A22 - A12² = (n-2)²/(2(n-1)²(n-4)²)·f1((n-4)α/((n-2)(n+4)))`
pub fn minor_identity(m: &MatrixA, f1: &XPoly) -> FormulaCheck {
    let x = ps("(n-4)*alpha/((n-2)*(n+4))");
    let rhs = ps("(n-2)^2/(2*(n-1)^2*(n-4)^2)") * f1.compose(&x);
    formula("leading 2x2 minor via f1", &m.minor2(), &rhs)
}

/// `det A = nα²/(64(n-1)²(n+4)²)·(1/(n-4) - α/(n+4))·f2(α/(n+4))`
pub fn det_identity(m: &MatrixA, f2: &XPoly) -> FormulaCheck {
    let rhs = ps("n*alpha^2/(64*(n-1)^2*(n+4)^2)*(1/(n-4) - alpha/(n+4))")
        * f2.compose(&ps("alpha/(n+4)"));
    formula("determinant via f2", &m.det(), &rhs)
}

/// `f2 - (n-2)f3 = c3·(x³ - x²/(n-4))` with `c3` the cubic coefficient of
/// `f2`, so `x³ < x²/(n-4)` and `c3 < 0` give `f2 > (n-2)f3`.
pub fn reduction_identity(f2: &XPoly, f3: &XPoly) -> FormulaCheck {
    // `x` borrows the otherwise unused symbol `a`.
    let x = ParamScalar::var(Var::A);
    let lhs = &f2.compose(&x) - &(ps("n-2") * f3.compose(&x));
    let c3 = f2.coeffs.get(3).cloned().unwrap_or_else(ParamScalar::zero);
    let rhs = c3 * (x.powi(3).expect("power") - ps("1/(n-4)") * x.powi(2).expect("power"));
    formula("f2 - (n-2) f3 through x^3 < x^2/(n-4)", &lhs, &rhs)
}

/// Both factorizations and the cubic-to-quadratic reduction, with the
/// printed `f1`, `f2`, `f3`.
pub fn check_minor_formulas() -> Result<Vec<FormulaCheck>> {
    let m = build_matrix_a(None)?;
    Ok(vec![
        minor_identity(&m, &f1()),
        det_identity(&m, &f2()),
        reduction_identity(&f2(), &f3()),
    ])
}

/// Endpoint values stated next to the minimum arguments for `f1`, `f3`.
pub fn check_endpoint_values() -> Vec<FormulaCheck> {
    vec![
        formula(
            "f1(0)",
            &f1().compose(&ParamScalar::zero()),
            &ps("4*(n+2)*(n-4)"),
        ),
        formula(
            "f1(1/(n-2))",
            &f1().compose(&ps("1/(n-2)")),
            &ps("(8*n^3 - 26*n^2 + 48*n - 32)/(n-2)^2"),
        ),
        formula(
            "f3(0)",
            &f3().compose(&ParamScalar::zero()),
            &ps("(n-2)*(n-4)*(7*n+32)"),
        ),
        formula(
            "f3(1/(n-4))",
            &f3().compose(&ps("1/(n-4)")),
            &ps("64*(n-2)^2*(4*n^3 - 13*n^2 + 24*n - 16)/(n-4)^2"),
        ),
    ]
}

/// Value of `f3(1/(n-4))` produced by expansion.
pub fn f3_right_endpoint() -> ParamScalar {
    f3().compose(&ps("1/(n-4)"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::param::rational;

    #[test]
    fn a22_is_one_and_symmetric() {
        let m = build_matrix_a(None).unwrap();
        assert!(m.get(1, 1).is_one());
        assert!(m.is_symmetric());
    }

    #[test]
    fn a12_sample() {
        let m = build_matrix_a(Some(5)).unwrap();
        let v = m.get(0, 1).specialize(Var::Alpha, &rational(2, 1)).unwrap();
        assert_eq!(v, ParamScalar::ratio(-29, 72));
    }

    #[test]
    fn factorizations_hold() {
        for c in check_minor_formulas().unwrap() {
            assert!(c.holds, "{}: {}", c.name, c.residual);
        }
    }

    #[test]
    fn perturbed_f1_breaks_minor_identity() {
        let m = build_matrix_a(None).unwrap();
        let bad = f1().perturbed(1, &ps("1"));
        assert!(!minor_identity(&m, &bad).holds);
    }

    #[test]
    fn det_identity_at_rational_point() {
        let m = build_matrix_a(Some(7)).unwrap();
        let one = rational(1, 1);
        let lhs = m.det().specialize(Var::Alpha, &one).unwrap();
        let rhs = ps("n*alpha^2/(64*(n-1)^2*(n+4)^2)*(1/(n-4) - alpha/(n+4))")
            * f2().compose(&ps("alpha/(n+4)"));
        let rhs = rhs
            .specialize(Var::N, &rational(7, 1))
            .unwrap()
            .specialize(Var::Alpha, &one)
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn f3_right_endpoint_has_single_factor() {
        assert_eq!(
            f3_right_endpoint(),
            ps("64*(n-2)*(4*n^3 - 13*n^2 + 24*n - 16)/(n-4)^2")
        );
        let checks = check_endpoint_values();
        assert!(checks[..3].iter().all(|c| c.holds));
        assert!(!checks[3].holds);
    }
}
