//! Catalog of identities, their symbolic verification, and recovery of
//! combination weights.

pub mod catalog;
pub mod coeffs;
pub mod named;
pub mod solve;

use std::time::Instant;

use serde::Serialize;

use crate::calculus::{
    divergence, grad, substitute_defs, Direction, SubstitutionMode, WeightedVectorField,
};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::symcore::{Expr, ParamScalar};

pub use named::{build_named, NamedExpression};
pub use solve::{derive_master_weights, solve_combination, MasterDerivation};

/// What the left side differentiates.
#[derive(Clone, Debug)]
pub enum Lhs {
    /// `u^{-w} div(u^w V)`
    Divergence(WeightedVectorField),
    /// `u^{-w} div(u^w ∇Z)`
    DivergenceOfGradient {
        weight: ParamScalar,
        potential: Expr,
    },
    /// `∇Z`
    Gradient(Expr),
}

#[derive(Clone, Debug)]
pub struct RhsTerm {
    pub coef: ParamScalar,
    pub label: String,
    pub term: Expr,
}

#[derive(Clone, Debug)]
pub struct Identity {
    pub id: String,
    pub anchor: String,
    pub mode: SubstitutionMode,
    /// `Some(b)` when the sides are written with `E`, `F`, `G`.
    pub b: Option<ParamScalar>,
    pub lhs: Lhs,
    pub rhs: Vec<RhsTerm>,
}

impl Identity {
    pub fn valence(&self) -> u8 {
        match self.lhs {
            Lhs::Gradient(_) => 1,
            _ => 0,
        }
    }

    /// Left side expanded in the same variables as the right side.
    pub fn expand_lhs(&self, mode: SubstitutionMode) -> Result<Expr> {
        let to_raw = |e: &Expr| match &self.b {
            Some(b) => substitute_defs(e, Direction::Backward, b),
            None => Ok(e.clone()),
        };
        let raw = match &self.lhs {
            Lhs::Divergence(f) => divergence(
                &WeightedVectorField {
                    weight: f.weight.clone(),
                    field: to_raw(&f.field)?,
                },
                mode,
            )?,
            Lhs::DivergenceOfGradient { weight, potential } => {
                let g = grad(&to_raw(potential)?, mode)?;
                divergence(&WeightedVectorField::new(weight.clone(), g)?, mode)?
            }
            Lhs::Gradient(z) => grad(&to_raw(z)?, mode)?,
        };
        self.to_named(&raw)
    }

    fn to_named(&self, e: &Expr) -> Result<Expr> {
        match &self.b {
            Some(b) => substitute_defs(e, Direction::Forward, b),
            None => Ok(e.clone()),
        }
    }

    pub fn expand_rhs(&self) -> Result<Expr> {
        let mut out = Expr::zero(self.valence());
        for t in &self.rhs {
            out = Expr::combine(&out, &ParamScalar::one(), &self.to_named(&t.term)?, &t.coef)?;
        }
        Ok(out)
    }

    /// `LHS - RHS` in canonical form.
    pub fn residual(&self, mode: SubstitutionMode) -> Result<Expr> {
        self.expand_lhs(mode)?.sub(&self.expand_rhs()?)
    }

    /// Copy with the coefficient of right-side term `k` shifted by `delta`.
    pub fn perturbed(&self, k: usize, delta: &ParamScalar) -> Identity {
        let mut out = self.clone();
        if let Some(t) = out.rhs.get_mut(k) {
            t.coef = &t.coef + delta;
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    VerifiedZero,
    Residual,
    Error,
}

/// Per-identity record of the report schema.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub anchor: String,
    pub mode: SubstitutionMode,
    pub status: Status,
    pub residual_count: usize,
    pub residual_terms: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub millis: u64,
    pub engine_version: String,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::VerifiedZero
    }
}

/// Expands both sides in `mode` and reports the canonical difference.
pub fn verify_identity_in(id: &Identity, mode: SubstitutionMode) -> VerificationReport {
    let start = Instant::now();
    let outcome = id.residual(mode);
    let millis = start.elapsed().as_millis() as u64;
    let (status, terms, error) = match outcome {
        Ok(r) if r.is_zero() => (Status::VerifiedZero, Vec::new(), None),
        Ok(r) => (Status::Residual, r.term_strings(), None),
        Err(e) => (Status::Error, Vec::new(), Some(e.to_string())),
    };
    VerificationReport {
        id: id.id.clone(),
        anchor: id.anchor.clone(),
        mode,
        status,
        residual_count: terms.len(),
        residual_terms: terms,
        error,
        millis,
        engine_version: crate::ENGINE_VERSION.to_string(),
    }
}

pub fn verify_identity(id: &Identity) -> VerificationReport {
    verify_identity_in(id, id.mode)
}

#[derive(Clone, Debug)]
pub struct Registry {
    identities: Vec<Identity>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub id: String,
    pub anchor: String,
    pub mode: SubstitutionMode,
    pub rhs_terms: usize,
}

impl Registry {
    /// I1 through I15 as displayed.
    pub fn printed() -> Self {
        Registry {
            identities: catalog::printed_identities(),
        }
    }

    /// The displayed identities followed by the corrected variants.
    pub fn with_corrections() -> Self {
        let mut r = Registry::printed();
        r.identities.extend(catalog::corrected_identities());
        r
    }

    pub fn from_identities(identities: Vec<Identity>) -> Self {
        Registry { identities }
    }

    pub fn identities(&self) -> &[Identity] {
        &self.identities
    }

    pub fn get(&self, id: &str) -> Result<&Identity> {
        self.identities
            .iter()
            .find(|i| i.id == id)
            .ok_or_else(|| Error::UnknownName(id.to_string()))
    }

    /// Replaces the identity with the same id.
    pub fn replace(&mut self, identity: Identity) -> Result<()> {
        let slot = self
            .identities
            .iter_mut()
            .find(|i| i.id == identity.id)
            .ok_or_else(|| Error::UnknownName(identity.id.clone()))?;
        *slot = identity;
        Ok(())
    }

    pub fn list(&self) -> Vec<CatalogEntry> {
        self.identities
            .iter()
            .map(|i| CatalogEntry {
                id: i.id.clone(),
                anchor: i.anchor.clone(),
                mode: i.mode,
                rhs_terms: i.rhs.len(),
            })
            .collect()
    }

    /// Verifies the selected identities (all when `ids` is empty), each in
    /// its own mode or in `mode_override`. Order follows the catalog.
    pub fn verify(
        &self,
        ids: &[String],
        mode_override: Option<SubstitutionMode>,
        exec: Exec,
    ) -> Result<Vec<VerificationReport>> {
        for id in ids {
            self.get(id)?;
        }
        let chosen: Vec<&Identity> = self
            .identities
            .iter()
            .filter(|i| ids.is_empty() || ids.contains(&i.id))
            .collect();
        Ok(exec.map(&chosen, |i| {
            verify_identity_in(i, mode_override.unwrap_or(i.mode))
        }))
    }

    /// Re-checks every free-mode identity with the equation imposed.
    pub fn verify_onshell_pass(&self, exec: Exec) -> Vec<VerificationReport> {
        let chosen: Vec<&Identity> = self
            .identities
            .iter()
            .filter(|i| i.mode == SubstitutionMode::Free)
            .collect();
        exec.map(&chosen, |i| {
            verify_identity_in(i, SubstitutionMode::OnShell)
        })
    }
}

/// Stable catalog listing of the displayed identities.
pub fn list_registry() -> Vec<CatalogEntry> {
    Registry::printed().list()
}

#[cfg(test)]
mod tests;
