//! Covariant derivatives of expressions, with the contracted Ricci
//! commutation, and the change of variables between the raw jet symbols
//! and the invariant tensors `E`, `F`, `G`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symcore::builders::*;
use crate::symcore::{Expr, Factor, FactorKind, ParamScalar, Slot, TensorMonomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubstitutionMode {
    /// No equation assumed; `∇Δ²u` is out of range.
    Free,
    /// `∇Δ²u = α Δ²u ∇u / u`, from differentiating `Δ²u = u^α`.
    OnShell,
}

impl SubstitutionMode {
    pub fn name(self) -> &'static str {
        match self {
            SubstitutionMode::Free => "free",
            SubstitutionMode::OnShell => "onshell",
        }
    }
}

/// `u^w V` with `w` a parameter expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedVectorField {
    pub weight: ParamScalar,
    pub field: Expr,
}

impl WeightedVectorField {
    pub fn new(weight: ParamScalar, field: Expr) -> Result<Self> {
        if field.valence() != 1 {
            return Err(Error::ValenceMismatch {
                left: 1,
                right: field.valence(),
            });
        }
        Ok(WeightedVectorField { weight, field })
    }
}

type Piece = (ParamScalar, i32, Vec<Factor>);

/// Derivative of one factor in direction `dir`, as replacement pieces
/// (coefficient, shift of the `u` power, factors).
fn diff_factor(
    f: &Factor,
    dir: Slot,
    mode: SubstitutionMode,
    ctx: &TensorMonomial,
) -> Result<Vec<Piece>> {
    use FactorKind::*;
    let one = ParamScalar::one;
    Ok(match f.kind {
        Du => vec![(one(), 0, vec![Factor::new(Hess, &[f.slots[0], dir])])],
        Hess => vec![(
            one(),
            0,
            vec![Factor::new(D3u, &[dir, f.slots[0], f.slots[1]])],
        )],
        Lap => vec![(one(), 0, vec![Factor::new(DLap, &[dir])])],
        DLap if f.slots[0] == dir && matches!(dir, Slot::Dummy(_)) => {
            vec![(one(), 0, vec![Factor::new(BiLap, &[])])]
        }
        DLap | D3u => return Err(Error::OrderOverflow(ctx.to_string())),
        BiLap => match mode {
            SubstitutionMode::OnShell => vec![(
                ParamScalar::alpha(),
                -1,
                vec![Factor::new(BiLap, &[]), Factor::new(Du, &[dir])],
            )],
            SubstitutionMode::Free => return Err(Error::OrderOverflow(ctx.to_string())),
        },
        Metric => Vec::new(),
        Ric => return Err(Error::UnsupportedCurvature(ctx.to_string())),
        E | F | G => return Err(Error::UnexpandedNamed(ctx.to_string())),
    })
}

/// Leibniz expansion of `∇_dir m`; `m` already carries `dir` where the
/// derivative is contracted.
fn diff_monomial(
    m: &TensorMonomial,
    dir: Slot,
    mode: SubstitutionMode,
    out: &mut Expr,
) -> Result<()> {
    let u_pow = m.u_pow();
    let factors = m.factors();
    if u_pow != 0 {
        let mut fs = factors.to_vec();
        fs.push(Factor::new(FactorKind::Du, &[dir]));
        out.add_raw(
            &TensorMonomial::new(u_pow - 1, fs),
            ParamScalar::int(u_pow as i64),
        )?;
    }
    for (i, f) in factors.iter().enumerate() {
        for (c, shift, repl) in diff_factor(f, dir, mode, m)? {
            let mut fs: Vec<Factor> = factors[..i].to_vec();
            fs.extend(repl);
            fs.extend_from_slice(&factors[i + 1..]);
            out.add_raw(&TensorMonomial::new(u_pow + shift, fs), c)?;
        }
    }
    Ok(())
}

/// Covariant gradient; the new index is the last free slot.
pub fn grad(e: &Expr, mode: SubstitutionMode) -> Result<Expr> {
    let v = e.valence();
    let mut out = Expr::zero(v + 1);
    for (m, c) in e.terms() {
        let mut part = Expr::zero(v + 1);
        diff_monomial(m, Slot::Free(v), mode, &mut part)?;
        out = Expr::combine(&out, &ParamScalar::one(), &part, c)?;
    }
    Ok(out)
}

/// Divergence on the first free slot. Contracted third derivatives are
/// commuted with a Ricci correction.
pub fn div(e: &Expr, mode: SubstitutionMode) -> Result<Expr> {
    let v = e.valence();
    if v == 0 {
        return Err(Error::ValenceMismatch { left: 1, right: 0 });
    }
    let mut out = Expr::zero(v - 1);
    for (m, c) in e.terms() {
        let x = Slot::Dummy(m.max_dummy().map_or(0, |d| d + 1));
        let factors: Vec<Factor> = m
            .factors()
            .iter()
            .map(|f| {
                let mut g = f.clone();
                for s in g.slots.iter_mut() {
                    *s = match *s {
                        Slot::Free(0) => x,
                        Slot::Free(k) => Slot::Free(k - 1),
                        d => d,
                    };
                }
                g
            })
            .collect();
        let prepared = TensorMonomial::new(m.u_pow(), factors);
        let mut part = Expr::zero(v - 1);
        diff_monomial(&prepared, x, mode, &mut part).map_err(|err| attach(err, m))?;
        out = Expr::combine(&out, &ParamScalar::one(), &part, c)?;
    }
    Ok(out)
}

fn attach(err: Error, m: &TensorMonomial) -> Error {
    let s = m.to_string();
    match err {
        Error::OrderOverflow(_) => Error::OrderOverflow(s),
        Error::UnsupportedCurvature(_) => Error::UnsupportedCurvature(s),
        Error::UnexpandedNamed(_) => Error::UnexpandedNamed(s),
        other => other,
    }
}

/// `u^{-w} div(u^w V) = div V + w ⟨∇u, V⟩ / u`.
pub fn divergence(f: &WeightedVectorField, mode: SubstitutionMode) -> Result<Expr> {
    let plain = div(&f.field, mode)?;
    if f.weight.is_zero() {
        return Ok(plain);
    }
    let weight_term = f.field.dot(&du())?.mul_u_pow(-1);
    Expr::combine(&plain, &ParamScalar::one(), &weight_term, &f.weight)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `u_ij, (Δu)_i, Δ²u` into `E, F, G`.
    Forward,
    /// `E, F, G` back into jet symbols.
    Backward,
}

/// `b = -(1 + nα/(n+4))/2`, which removes `(Δu)²∇u/u²` from `∇G`.
pub fn b_special() -> ParamScalar {
    let n = ParamScalar::n();
    let a = ParamScalar::alpha();
    let q = (&n * &a)
        .checked_div(&(&n + &ParamScalar::int(4)))
        .expect("n+4");
    (ParamScalar::one() + q) * ParamScalar::ratio(-1, 2)
}

/// The formal symbol `b`.
pub fn b_formal() -> ParamScalar {
    ParamScalar::var(crate::symcore::Var::B)
}

fn inv_n() -> ParamScalar {
    ParamScalar::n().recip().expect("n is nonzero")
}

/// `(n+2)/n · b`
fn fb(b: &ParamScalar) -> ParamScalar {
    (ParamScalar::n() + ParamScalar::int(2)) * inv_n() * b
}

/// `b(1 + (n-2)b/n)`
fn fc(b: &ParamScalar) -> ParamScalar {
    let t = (ParamScalar::n() - ParamScalar::int(2)) * inv_n() * b;
    b * &(ParamScalar::one() + t)
}

/// Trace part `Δu + b|∇u|²/u` shared by `E` and its inverse.
fn trace_part(b: &ParamScalar) -> Expr {
    sum(
        0,
        &[
            (ParamScalar::one(), lap()),
            (b.clone(), grad_sq().mul_u_pow(-1)),
        ],
    )
}

/// `E_ij` in jet symbols.
pub fn e_def(b: &ParamScalar) -> Expr {
    sum(
        2,
        &[
            (ParamScalar::one(), hess()),
            (b.clone(), prod(&[&du(), &du()]).mul_u_pow(-1)),
            (-inv_n(), prod(&[&trace_part(b), &metric()])),
        ],
    )
}

/// `u_ij` in terms of `E_ij`.
pub fn hess_from_e(b: &ParamScalar) -> Expr {
    sum(
        2,
        &[
            (ParamScalar::one(), e_tensor()),
            (-b, prod(&[&du(), &du()]).mul_u_pow(-1)),
            (inv_n(), prod(&[&trace_part(b), &metric()])),
        ],
    )
}

/// `F_j` in jet symbols.
pub fn f_def(b: &ParamScalar) -> Expr {
    sum(
        1,
        &[
            (ParamScalar::one(), dlap()),
            (fb(b), prod(&[&lap(), &du()]).mul_u_pow(-1)),
            (-fc(b), prod(&[&grad_sq(), &du()]).mul_u_pow(-2)),
        ],
    )
}

/// `(Δu)_,j` in terms of `F_j`.
pub fn dlap_from_f(b: &ParamScalar) -> Expr {
    sum(
        1,
        &[
            (ParamScalar::one(), f_vec()),
            (-fb(b), prod(&[&lap(), &du()]).mul_u_pow(-1)),
            (fc(b), prod(&[&grad_sq(), &du()]).mul_u_pow(-2)),
        ],
    )
}

fn g_rest(b: &ParamScalar) -> Expr {
    let n = ParamScalar::n();
    let two_fb1 = ParamScalar::int(-2) * fb(b) * (ParamScalar::one() + b);
    let q = b
        * &(ParamScalar::int(3) * b + ParamScalar::int(2))
        * (ParamScalar::one() + (&n - &ParamScalar::int(2)) * inv_n() * b);
    sum(
        0,
        &[
            (fb(b), prod(&[&lap(), &lap()]).mul_u_pow(-1)),
            (two_fb1, prod(&[&lap(), &grad_sq()]).mul_u_pow(-2)),
            (q, prod(&[&grad_sq(), &grad_sq()]).mul_u_pow(-3)),
        ],
    )
}

/// `G` in jet symbols.
pub fn g_def(b: &ParamScalar) -> Expr {
    bilap().add(&g_rest(b)).expect("scalars")
}

/// `Δ²u` in terms of `G`.
pub fn bilap_from_g(b: &ParamScalar) -> Expr {
    g_scalar().sub(&g_rest(b)).expect("scalars")
}

/// Rewrites between jet symbols and the invariant tensors.
pub fn substitute_defs(e: &Expr, direction: Direction, b: &ParamScalar) -> Result<Expr> {
    match direction {
        Direction::Forward => e
            .splice(FactorKind::Hess, &hess_from_e(b))?
            .splice(FactorKind::DLap, &dlap_from_f(b))?
            .splice(FactorKind::BiLap, &bilap_from_g(b)),
        Direction::Backward => e
            .splice(FactorKind::E, &e_def(b))?
            .splice(FactorKind::F, &f_def(b))?
            .splice(FactorKind::G, &g_def(b)),
    }
}

/// Weighted divergence of a field written with `E`, `F`, `G`, returned in
/// the same variables.
pub fn divergence_named(
    f: &WeightedVectorField,
    mode: SubstitutionMode,
    b: &ParamScalar,
) -> Result<Expr> {
    let raw = WeightedVectorField {
        weight: f.weight.clone(),
        field: substitute_defs(&f.field, Direction::Backward, b)?,
    };
    substitute_defs(&divergence(&raw, mode)?, Direction::Forward, b)
}

/// Gradient of a scalar written with `E`, `F`, `G`, in the same variables.
pub fn grad_named(e: &Expr, mode: SubstitutionMode, b: &ParamScalar) -> Result<Expr> {
    let raw = substitute_defs(e, Direction::Backward, b)?;
    substitute_defs(&grad(&raw, mode)?, Direction::Forward, b)
}

/// `Z_a = Δu/u + a|∇u|²/u²`
pub fn z_a(a: &ParamScalar) -> Expr {
    sum(
        0,
        &[
            (ParamScalar::one(), lap().mul_u_pow(-1)),
            (a.clone(), grad_sq().mul_u_pow(-2)),
        ],
    )
}

/// One printed form of the subharmonicity estimate with the distinct
/// `u`-scaling weights of its terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogeneityCheck {
    pub form: String,
    pub weights: Vec<i32>,
    pub homogeneous: bool,
}

/// `Δu + c|∇u|²/u ≤ 0` as derived for the Z-monitor, against the
/// `−Δu ≥ c|∇u|²/u²` form used later for the same step. The second mixes
/// weights 1 and 0, so it cannot hold under `u → λu` for every λ.
pub fn subharmonic_estimate_forms() -> Vec<HomogeneityCheck> {
    let c = crate::symcore::ps("2/(n-4)");
    [
        ("lap u + 2/(n-4) |du|^2/u <= 0", -1),
        ("-lap u >= 2/(n-4) |du|^2/u^2", -2),
    ]
    .into_iter()
    .map(|(form, k)| {
        let weights = sum(
            0,
            &[
                (ParamScalar::one(), lap()),
                (c.clone(), grad_sq().mul_u_pow(k)),
            ],
        )
        .homogeneities();
        HomogeneityCheck {
            form: form.to_string(),
            homogeneous: weights.len() == 1,
            weights,
        }
    })
    .collect()
}

#[cfg(test)]
mod tests;
