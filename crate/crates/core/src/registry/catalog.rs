//! The fifteen identities, each stored as displayed.

use super::coeffs::*;
use super::named::*;
use super::{Identity, Lhs, RhsTerm};
use crate::calculus::{b_special, z_a, SubstitutionMode, WeightedVectorField};
use crate::symcore::builders::*;
use crate::symcore::{ps, Expr, ParamScalar, Var};

use SubstitutionMode::{Free, OnShell};

fn t(coef: ParamScalar, label: &str, term: Expr) -> RhsTerm {
    RhsTerm {
        coef,
        label: label.to_string(),
        term,
    }
}

fn one() -> ParamScalar {
    ParamScalar::one()
}

fn weighted(w: ParamScalar, field: Expr) -> Lhs {
    Lhs::Divergence(WeightedVectorField::new(w, field).expect("vector field"))
}

/// `β(Q - P)`, recurring in the relations for `F` and `G`.
fn bqp() -> ParamScalar {
    beta() * (q_coef() - p_coef())
}

fn gu(k: usize, u: i32) -> Expr {
    grad_pow(k).mul_u_pow(u)
}

fn times(a: &Expr, b: &Expr) -> Expr {
    a.mul(b).expect("scalar factor")
}

fn z_potential() -> Expr {
    z_a(&ParamScalar::var(Var::A))
}

fn i1() -> Identity {
    let a = ParamScalar::var(Var::A);
    Identity {
        id: "I1".into(),
        anchor: "weighted divergence of ∇Z_a, expanded form".into(),
        mode: Free,
        b: None,
        lhs: Lhs::DivergenceOfGradient {
            weight: &ps("2") - &(ps("2") * &a),
            potential: z_potential(),
        },
        rhs: vec![
            t(one(), "Δ²u/u", bilap().mul_u_pow(-1)),
            t(ps("-1"), "(Δu)²/u²", times(&lap(), &lap()).mul_u_pow(-2)),
            t(ps("2*a*(1+2*a)"), "|∇u|⁴/u⁴", gu(2, -4)),
            t(ps("2*a"), "Ric(∇u,∇u)/u²", ric_uu().mul_u_pow(-2)),
            t(ps("-4*a*(1+a)"), "⟨∇²u,∇u⊗∇u⟩/u³", hess_uu().mul_u_pow(-3)),
            t(
                ps("2*a"),
                "|∇²u|²/u²",
                hess().dot(&hess()).expect("tensors").mul_u_pow(-2),
            ),
        ],
    }
}

fn i2() -> Identity {
    let a = ParamScalar::var(Var::A);
    let one_a = &one() + &a;
    let inner = sum(0, &[(one(), lap().mul_u_pow(-1)), (-&one_a, gu(1, -2))]);
    let tt = sum(
        2,
        &[
            (one(), hess().mul_u_pow(-1)),
            (-&one_a, prod(&[&du(), &du()]).mul_u_pow(-2)),
            (ps("-1/n"), prod(&[&inner, &metric()])),
        ],
    );
    let mut id = i1();
    id.id = "I2".into();
    id.anchor = "weighted divergence of ∇Z_a, completed-square form".into();
    id.rhs = vec![
        t(ps("2*a"), "|T_a|²", tt.dot(&tt).expect("tensors")),
        t(one(), "Δ²u/u", bilap().mul_u_pow(-1)),
        t(ps("2*a"), "Ric(∇u,∇u)/u²", ric_uu().mul_u_pow(-2)),
        t(
            ps("2/n*a - 1"),
            "(Δu)²/u²",
            times(&lap(), &lap()).mul_u_pow(-2),
        ),
        t(
            ps("-4/n*a*(1+a)"),
            "Δu|∇u|²/u³",
            times(&lap(), &gu(1, 0)).mul_u_pow(-3),
        ),
        t(ps("2/n*a*((1+a)^2 - n*a^2)"), "|∇u|⁴/u⁴", gu(2, -4)),
    ];
    id
}

fn i3() -> Identity {
    Identity {
        id: "I3".into(),
        anchor: "divergence of E_i".into(),
        mode: Free,
        b: Some(b_special()),
        lhs: weighted(ParamScalar::zero(), e_i()),
        rhs: vec![
            t(one(), "E_ijE^ij/u", ee().mul_u_pow(-1)),
            t(one(), "R_ij u^i u^j/u", ric_uu().mul_u_pow(-1)),
            t(ps("-((n-1)/n - alpha/(n+4))"), "E", e_sc()),
            t(ps("(n-1)/n"), "F", f_sc()),
        ],
    }
}

fn i4() -> Identity {
    Identity {
        id: "I4".into(),
        anchor: "divergence of F_i".into(),
        mode: Free,
        b: Some(b_special()),
        lhs: weighted(ParamScalar::zero(), f_vec()),
        rhs: vec![
            t(ps("1/2") * bqp(), "E", e_sc()),
            t(ps("-(n+2)/(2*n)") * beta(), "F", f_sc()),
            t(one(), "G", g_scalar()),
        ],
    }
}

fn i5() -> Identity {
    let lin = ps("1 - n*alpha/(n+4)");
    let crit = critical_factor();
    Identity {
        id: "I5".into(),
        anchor: "gradient of G".into(),
        mode: OnShell,
        b: Some(b_special()),
        lhs: Lhs::Gradient(g_scalar()),
        rhs: vec![
            t(
                beta() * ps("-1/2*(1 - 3*n*alpha/(n+4))") * (q_coef() - p_coef()),
                "|∇u|²E^i/u²",
                times(&gu(1, -2), &e_i()),
            ),
            t(
                beta() * q_coef() * lin.clone(),
                "ΔuE^i/u",
                times(&lap(), &e_i()).mul_u_pow(-1),
            ),
            t(
                ps("(n+2)/(2*n)") * beta() * lin,
                "|∇u|²F^i/u²",
                times(&gu(1, -2), &f_vec()),
            ),
            t(
                ps("-(n+2)/n") * beta(),
                "ΔuF^i/u",
                times(&lap(), &f_vec()).mul_u_pow(-1),
            ),
            t(
                ps("alpha"),
                "Gu^i/u",
                times(&g_scalar(), &du()).mul_u_pow(-1),
            ),
            t(
                ps("-alpha/(2*(n+4))") * beta() * crit.clone() * ps("n+2 - n*(n-2)/(n+4)*alpha"),
                "|∇u|⁴u^i/u⁴",
                times(&gu(2, -4), &du()),
            ),
            t(
                ps("alpha/2") * beta() * crit,
                "Δu|∇u|²u^i/u³",
                prod(&[&lap(), &gu(1, -3), &du()]),
            ),
        ],
    }
}

fn aux(id: &str, anchor: &str, mode: SubstitutionMode, field: Expr, rhs: Vec<RhsTerm>) -> Identity {
    Identity {
        id: id.into(),
        anchor: anchor.into(),
        mode,
        b: Some(b_special()),
        lhs: weighted(weight(), field),
        rhs,
    }
}

/// Left brackets of the six auxiliary identities, in order.
pub fn auxiliary_fields() -> Vec<Expr> {
    vec![
        times(&gu(1, -1), &e_i()),
        times(&lap(), &e_i()),
        times(&gu(1, -1), &f_vec()),
        times(&lap(), &f_vec()),
        times(&g_scalar(), &du()),
        times(&gu(2, -3), &du()),
    ]
}

fn lap_e() -> Expr {
    times(&lap(), &e_sc())
}
fn lap_f() -> Expr {
    times(&lap(), &f_sc())
}
fn g1e() -> Expr {
    times(&gu(1, -1), &e_sc())
}
fn g1f() -> Expr {
    times(&gu(1, -1), &f_sc())
}
fn eiei() -> Expr {
    e_i().dot(&e_i()).expect("vectors")
}
fn eifi() -> Expr {
    e_i().dot(&f_vec()).expect("vectors")
}
fn fifi() -> Expr {
    f_vec().dot(&f_vec()).expect("vectors")
}

fn i6() -> Identity {
    let f = auxiliary_fields().remove(0);
    aux(
        "I6",
        "auxiliary identity for |∇u|²E_i/u",
        Free,
        f,
        vec![
            t(one(), "|∇u|²E_ijE^ij/u²", times(&gu(1, -2), &ee())),
            t(one(), "|∇u|²R_ij u^i u^j/u²", times(&gu(1, -2), &ric_uu())),
            t(ps("2"), "E_iE^i", eiei()),
            t(p_coef() - one(), "|∇u|²E/u", g1e()),
            t(ps("2/n"), "ΔuE", lap_e()),
            t(ps("(n-1)/n"), "|∇u|²F/u", g1f()),
        ],
    )
}

fn i7() -> Identity {
    let f = auxiliary_fields().remove(1);
    aux(
        "I7",
        "auxiliary identity for ΔuE_i",
        Free,
        f,
        vec![
            t(one(), "ΔuE_ijE^ij/u", times(&lap(), &ee()).mul_u_pow(-1)),
            t(
                one(),
                "ΔuR_ij u^i u^j/u",
                times(&lap(), &ric_uu()).mul_u_pow(-1),
            ),
            t(one(), "E_iF^i", eifi()),
            t(ps("n*alpha/(2*(n+4)) - (n-4)/(2*n)"), "ΔuE", lap_e()),
            t(ps("-1/4") * bqp(), "|∇u|²E/u", g1e()),
            t(ps("(n-1)/n"), "ΔuF", lap_f()),
        ],
    )
}

fn i8() -> Identity {
    let f = auxiliary_fields().remove(2);
    aux(
        "I8",
        "auxiliary identity for |∇u|²F_i/u",
        Free,
        f,
        vec![
            t(ps("2"), "E_iF^i", eifi()),
            t(ps("1/2") * bqp(), "|∇u|²E/u", g1e()),
            t(ps("(n-8)/(2*(n+4))*alpha - (n+4)/(2*n)"), "|∇u|²F/u", g1f()),
            t(ps("2/n"), "ΔuF", lap_f()),
            t(one(), "|∇u|²G/u", times(&gu(1, -1), &g_scalar())),
        ],
    )
}

fn i9() -> Identity {
    let f = auxiliary_fields().remove(3);
    aux(
        "I9",
        "auxiliary identity for ΔuF_i",
        Free,
        f,
        vec![
            t(one(), "F_iF^i", fifi()),
            t(weight(), "ΔuF", lap_f()),
            t(one(), "ΔuG", times(&lap(), &g_scalar())),
            t(ps("1/2") * bqp(), "ΔuE", lap_e()),
            t(ps("-1/4") * bqp(), "|∇u|²F/u", g1f()),
        ],
    )
}

fn i10() -> Identity {
    let f = auxiliary_fields().remove(4);
    let lin = ps("1 - n*alpha/(n+4)");
    let k = ps("alpha/2") * beta() * critical_factor();
    aux(
        "I10",
        "auxiliary identity for Gu_i",
        OnShell,
        f,
        vec![
            t(
                beta() * ps("-1/2*(1 - 3*n*alpha/(n+4))") * (q_coef() - p_coef()),
                "|∇u|²E/u",
                g1e(),
            ),
            t(beta() * q_coef() * lin.clone(), "ΔuE", lap_e()),
            t(ps("(n+2)/(2*n)") * beta() * lin, "|∇u|²F/u", g1f()),
            t(ps("-(n+2)/n") * beta(), "ΔuF", lap_f()),
            t(
                ps("(n+2)/(n+4)*alpha"),
                "|∇u|²G/u",
                times(&gu(1, -1), &g_scalar()),
            ),
            t(one(), "ΔuG", times(&lap(), &g_scalar())),
            t(
                k.clone() * ps("n*(n-2)/(n+4)^2*alpha - (n+2)/(n+4)"),
                "|∇u|⁶/u⁴",
                gu(3, -4),
            ),
            t(k, "Δu|∇u|⁴/u³", times(&lap(), &gu(2, -3))),
        ],
    )
}

fn i11() -> Identity {
    let f = auxiliary_fields().remove(5);
    aux(
        "I11",
        "auxiliary identity for |∇u|⁴u_i/u³",
        Free,
        f,
        vec![
            t(ps("4"), "|∇u|²E/u", g1e()),
            t(ps("2*(n-2)/(n+4)*alpha - (n+2)/n"), "|∇u|⁶/u⁴", gu(3, -4)),
            t(ps("(n+4)/n"), "Δu|∇u|⁴/u³", times(&lap(), &gu(2, -3))),
        ],
    )
}

/// The bracket of the master identity with the printed `c1`, `c2`.
pub fn master_field() -> Expr {
    let f = auxiliary_fields();
    let w = master_weights_printed();
    let parts: Vec<(ParamScalar, Expr)> = w.into_iter().zip(f).collect();
    sum(1, &parts)
}

/// Weights of the auxiliary brackets in the master bracket, as printed.
pub fn master_weights_printed() -> Vec<ParamScalar> {
    vec![
        c1(),
        -c2(),
        ps("(n+2)/(n+4)*alpha"),
        one(),
        ps("-1"),
        master_k(),
    ]
}

fn i12() -> Identity {
    aux(
        "I12",
        "master identity",
        OnShell,
        master_field(),
        master_rhs(),
    )
}

/// Right side of the master identity.
pub fn master_rhs() -> Vec<RhsTerm> {
    vec![
        t(c1(), "|∇u|²E_ijE^ij/u²", times(&gu(1, -2), &ee())),
        t(c1(), "|∇u|²R_ij u^i u^j/u²", times(&gu(1, -2), &ric_uu())),
        t(-c2(), "ΔuE_ijE^ij/u", times(&lap(), &ee()).mul_u_pow(-1)),
        t(
            -c2(),
            "ΔuR_ij u^i u^j/u",
            times(&lap(), &ric_uu()).mul_u_pow(-1),
        ),
        t(ps("2") * c1(), "E_iE^i", eiei()),
        t(one(), "F_iF^i", fifi()),
        t(ps("2") * a12(), "E_iF^i", eifi()),
        t(ps("2") * a13(), "|∇u|²E/u", g1e()),
        t(ps("2") * a23(), "|∇u|²F/u", g1f()),
        t(a33(), "|∇u|⁶/u⁴", gu(3, -4)),
    ]
}

fn i13() -> Identity {
    aux(
        "I13",
        "divergence of Δu|∇u|²u_i/u²",
        Free,
        prod(&[&lap(), &gu(1, -2), &du()]),
        vec![
            t(
                q_coef(),
                "(Δu)²|∇u|²/u²",
                prod(&[&lap(), &lap(), &gu(1, -2)]),
            ),
            t(
                ps("1/2*((3*n-4)/(n+4)*alpha - 1)"),
                "Δu|∇u|⁴/u³",
                times(&lap(), &gu(2, -3)),
            ),
            t(
                ps("1/4") * beta() * (p_coef() - q_coef()),
                "|∇u|⁶/u⁴",
                gu(3, -4),
            ),
            t(ps("2"), "ΔuE", lap_e()),
            t(one(), "|∇u|²F/u", g1f()),
        ],
    )
}

fn uf() -> Expr {
    f_sc().mul_u_pow(1)
}

fn i14_rhs() -> Vec<RhsTerm> {
    vec![
        t(one(), "uG", g_scalar().mul_u_pow(1)),
        t(ps("1/2") * bqp(), "uE", e_sc().mul_u_pow(1)),
        t(ps("-(n+2)/(2*n)") * beta(), "uF", uf()),
    ]
}

fn i14() -> Identity {
    aux(
        "I14",
        "divergence of uF_i",
        Free,
        f_vec().mul_u_pow(1),
        i14_rhs(),
    )
}

fn i15() -> Identity {
    aux(
        "I15",
        "divergence of Δu u_i",
        Free,
        times(&lap(), &du()),
        vec![
            t(one(), "(Δu)²", times(&lap(), &lap())),
            t(one(), "uF", uf()),
            t(
                ps("1/2") * (p_coef() + q_coef()),
                "|∇u|²Δu/u",
                times(&gu(1, -1), &lap()),
            ),
            t(
                ps("1/6") * beta() * (p_coef() + q_coef()),
                "|∇u|⁴/u²",
                gu(2, -2),
            ),
        ],
    )
}

/// I1 through I15 in order.
pub fn printed_identities() -> Vec<Identity> {
    vec![
        i1(),
        i2(),
        i3(),
        i4(),
        i5(),
        i6(),
        i7(),
        i8(),
        i9(),
        i10(),
        i11(),
        i12(),
        i13(),
        i14(),
        i15(),
    ]
}

/// I14 and I15 with the right sides the expansion actually produces.
pub fn corrected_identities() -> Vec<Identity> {
    let mut a = i14();
    a.id = "I14c".into();
    a.anchor = "divergence of uF_i, with the (1 + w)uF term".into();
    a.rhs
        .push(t(one() + weight(), "uF (weight and Leibniz)", uf()));

    let mut b = i15();
    b.id = "I15c".into();
    b.anchor = "divergence of Δu u_i, exact |∇u|⁴/u² coefficient".into();
    b.rhs[3] = t(ps("-1/4") * bqp(), "|∇u|⁴/u²", gu(2, -2));
    vec![a, b]
}
