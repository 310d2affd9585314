//! Exact linear algebra over parameter coefficients.

use std::collections::BTreeSet;

use serde::Serialize;

use super::catalog::{auxiliary_fields, master_field, master_rhs, master_weights_printed};
use super::coeffs;
use super::named::*;
use super::Registry;
use crate::error::{Error, Result};
use crate::symcore::builders::*;
use crate::symcore::{Expr, ParamScalar, TensorMonomial};

/// Solves `M w = r` by Gaussian elimination. Rows are labeled for error
/// reporting.
#[allow(clippy::needless_range_loop)]
pub fn solve_linear(
    mut m: Vec<Vec<ParamScalar>>,
    mut r: Vec<ParamScalar>,
    labels: &[String],
) -> Result<Vec<ParamScalar>> {
    let rows = m.len();
    let cols = m.first().map_or(0, |row| row.len());
    let mut order: Vec<usize> = (0..rows).collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::with_capacity(cols);
    for col in 0..cols {
        let Some(p) = (pivot_row..rows).find(|&i| !m[i][col].is_zero()) else {
            return Err(Error::SingularSystem(format!(
                "column {col} is dependent on the preceding ones"
            )));
        };
        m.swap(pivot_row, p);
        r.swap(pivot_row, p);
        order.swap(pivot_row, p);
        let inv = m[pivot_row][col].recip()?;
        for k in col..cols {
            m[pivot_row][k] = &m[pivot_row][k] * &inv;
        }
        r[pivot_row] = &r[pivot_row] * &inv;
        for i in 0..rows {
            if i == pivot_row || m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].clone();
            for k in col..cols {
                let v = &m[pivot_row][k] * &f;
                m[i][k] = &m[i][k] - &v;
            }
            let v = &r[pivot_row] * &f;
            r[i] = &r[i] - &v;
        }
        pivots.push(pivot_row);
        pivot_row += 1;
    }
    if let Some(i) = (pivot_row..rows).find(|&i| !r[i].is_zero()) {
        return Err(Error::NoCombination(format!(
            "unmatched {}",
            labels.get(order[i]).cloned().unwrap_or_default()
        )));
    }
    Ok(pivots.into_iter().map(|p| r[p].clone()).collect())
}

/// Weights `w` with `Σ w_j basis_j = target`, matched monomial by monomial.
pub fn solve_combination(target: &Expr, basis: &[Expr]) -> Result<Vec<ParamScalar>> {
    for b in basis {
        if b.valence() != target.valence() {
            return Err(Error::ValenceMismatch {
                left: target.valence(),
                right: b.valence(),
            });
        }
    }
    let monos: BTreeSet<&TensorMonomial> = basis
        .iter()
        .chain(std::iter::once(target))
        .flat_map(|e| e.terms().map(|(m, _)| m))
        .collect();
    let labels: Vec<String> = monos.iter().map(|m| m.to_string()).collect();
    let m: Vec<Vec<ParamScalar>> = monos
        .iter()
        .map(|mono| basis.iter().map(|b| b.coefficient(mono)).collect())
        .collect();
    let r: Vec<ParamScalar> = monos.iter().map(|mono| target.coefficient(mono)).collect();
    if basis.is_empty() {
        return match labels.first() {
            None => Ok(Vec::new()),
            Some(l) => Err(Error::NoCombination(format!("unmatched {l}"))),
        };
    }
    solve_linear(m, r, &labels)
}

/// Outcome of deriving the master combination from the shape of its right
/// side alone.
#[derive(Clone, Debug, Serialize)]
pub struct MasterDerivation {
    pub weights: Vec<ParamScalar>,
    pub c1: ParamScalar,
    pub c2: ParamScalar,
    pub c1_matches: bool,
    pub c2_matches: bool,
    /// Weights recovered from the printed bracket by monomial matching.
    pub bracket_weights: Vec<ParamScalar>,
    pub bracket_matches: bool,
    /// `Σ w_j RHS_j` minus the printed master right side.
    pub rhs_residual: Vec<String>,
}

impl MasterDerivation {
    pub fn passed(&self) -> bool {
        self.c1_matches && self.c2_matches && self.bracket_matches && self.rhs_residual.is_empty()
    }
}

fn key(e: Expr) -> TensorMonomial {
    let mut it = e.terms();
    let (m, _) = it.next().expect("single term");
    debug_assert!(it.next().is_none());
    m.clone()
}

/// Chooses weights for the six auxiliary identities (`I6`..`I11`) so the
/// combined right side has no `ΔuE`, `ΔuF`, `ΔuG`, `|∇u|²G/u`,
/// `Δu|∇u|⁴/u³` terms and a unit `F_iF^i` coefficient, then compares with
/// the printed master identity.
pub fn derive_master_weights(reg: &Registry) -> Result<MasterDerivation> {
    let ids = ["I6", "I7", "I8", "I9", "I10", "I11"];
    let rhs: Vec<Expr> = ids
        .iter()
        .map(|id| reg.get(id).and_then(|i| i.expand_rhs()))
        .collect::<Result<_>>()?;
    let lap_g = lap().mul(&g_scalar())?;
    let conditions: Vec<(TensorMonomial, ParamScalar)> = vec![
        (key(lap().mul(&e_sc())?), ParamScalar::zero()),
        (key(lap().mul(&f_sc())?), ParamScalar::zero()),
        (key(lap_g), ParamScalar::zero()),
        (
            key(grad_sq().mul(&g_scalar())?.mul_u_pow(-1)),
            ParamScalar::zero(),
        ),
        (
            key(lap().mul(&grad_pow(2))?.mul_u_pow(-3)),
            ParamScalar::zero(),
        ),
        (key(f_vec().dot(&f_vec())?), ParamScalar::one()),
    ];
    let labels: Vec<String> = conditions.iter().map(|(m, _)| m.to_string()).collect();
    let m: Vec<Vec<ParamScalar>> = conditions
        .iter()
        .map(|(mono, _)| rhs.iter().map(|e| e.coefficient(mono)).collect())
        .collect();
    let r: Vec<ParamScalar> = conditions.iter().map(|(_, v)| v.clone()).collect();
    let weights = solve_linear(m, r, &labels)?;

    let c1 = weights[0].clone();
    let c2 = -&weights[1];
    let mut combined = Expr::zero(0);
    for (w, e) in weights.iter().zip(&rhs) {
        combined = Expr::combine(&combined, &ParamScalar::one(), e, w)?;
    }
    let master = super::Identity {
        id: "master".into(),
        anchor: String::new(),
        mode: crate::calculus::SubstitutionMode::OnShell,
        b: Some(crate::calculus::b_special()),
        lhs: super::Lhs::Divergence(crate::calculus::WeightedVectorField::new(
            coeffs::weight(),
            master_field(),
        )?),
        rhs: master_rhs(),
    };
    let printed = master.expand_rhs()?;
    let rhs_residual = combined.sub(&printed)?.term_strings();

    let bracket_weights = solve_combination(&master_field(), &auxiliary_fields())?;
    let bracket_matches = bracket_weights == master_weights_printed() && bracket_weights == weights;
    Ok(MasterDerivation {
        c1_matches: c1 == coeffs::c1(),
        c2_matches: c2 == coeffs::c2(),
        weights,
        c1,
        c2,
        bracket_weights,
        bracket_matches,
        rhs_residual,
    })
}
