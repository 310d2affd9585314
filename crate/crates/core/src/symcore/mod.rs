//! Exact coefficients and canonical tensor monomials.

pub mod expr;
pub mod monomial;
pub mod param;
pub mod poly;

pub use expr::{Expr, ScalarExpr, VectorExpr};
pub use monomial::{Factor, FactorKind, Slot, TensorMonomial};
pub use param::{normalize_param, ps, ParamScalar};
pub use poly::{Poly, Var};

/// Atomic expressions. Vector and tensor atoms carry free slots `0`, `1`.
pub mod builders {
    use super::*;

    fn atom(kind: FactorKind) -> Expr {
        let slots: Vec<Slot> = (0..kind.arity() as u8).map(Slot::Free).collect();
        Expr::term(
            &TensorMonomial::new(0, vec![Factor::new(kind, &slots)]),
            ParamScalar::one(),
        )
        .expect("atoms are well formed")
    }

    /// `u^k`
    pub fn u_pow(k: i32) -> Expr {
        Expr::term(&TensorMonomial::u_power(k), ParamScalar::one()).expect("scalar")
    }

    pub fn du() -> Expr {
        atom(FactorKind::Du)
    }

    pub fn hess() -> Expr {
        atom(FactorKind::Hess)
    }

    pub fn lap() -> Expr {
        atom(FactorKind::Lap)
    }

    pub fn dlap() -> Expr {
        atom(FactorKind::DLap)
    }

    pub fn bilap() -> Expr {
        atom(FactorKind::BiLap)
    }

    pub fn ric() -> Expr {
        atom(FactorKind::Ric)
    }

    pub fn metric() -> Expr {
        atom(FactorKind::Metric)
    }

    pub fn e_tensor() -> Expr {
        atom(FactorKind::E)
    }

    pub fn f_vec() -> Expr {
        atom(FactorKind::F)
    }

    pub fn g_scalar() -> Expr {
        atom(FactorKind::G)
    }

    /// `|∇u|²`
    pub fn grad_sq() -> Expr {
        du().dot(&du()).expect("vectors")
    }

    /// `c · u^k · e`
    pub fn scaled(c: &ParamScalar, k: i32, e: &Expr) -> Expr {
        e.mul_u_pow(k).scale(c)
    }

    /// Sum of `(coefficient, expression)` pairs of one valence.
    pub fn sum(valence: u8, parts: &[(ParamScalar, Expr)]) -> Expr {
        let mut out = Expr::zero(valence);
        for (c, e) in parts {
            out = Expr::combine(&out, &ParamScalar::one(), e, c).expect("uniform valence");
        }
        out
    }

    /// Product of several expressions (outer product).
    pub fn prod(parts: &[&Expr]) -> Expr {
        let mut out = Expr::constant(ParamScalar::one());
        for p in parts {
            out = out.mul(p).expect("valence at most two");
        }
        out
    }
}
