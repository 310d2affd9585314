//! Flat-space numeric oracle. Every identity is evaluated at random jets
//! with `Ric = 0`; derivatives on the left side come from second-order
//! Taylor numbers along each coordinate direction.

pub mod eval;
pub mod jet;
pub mod scalar;
pub mod sharp;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::calculus::SubstitutionMode;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::registry::{Identity, Lhs};
use crate::symcore::{Expr, ParamScalar};

pub use eval::{eval_expr, fields_along, fields_at, Compiled, Fields, Params};
pub use jet::{sample_jet, sample_seed, JetSample};
pub use scalar::{Num, Taylor};
pub use sharp::{sharp_constant_search, SharpConstantResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub seed: u64,
    pub samples: usize,
    pub dims: Vec<usize>,
    pub tol: f64,
    /// `(α, a)` pairs.
    pub points: Vec<(f64, f64)>,
    /// Directory for failing-jet replay files.
    pub replay_dir: Option<PathBuf>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            seed: 1,
            samples: 1000,
            dims: vec![5, 6, 8],
            tol: 1e-9,
            points: vec![(2.0, 1.0), (3.5, 0.2)],
            replay_dir: None,
        }
    }
}

/// Everything needed to re-run one evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailingJet {
    pub id: String,
    pub alpha: f64,
    pub a: f64,
    pub jet: JetSample,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub id: String,
    pub anchor: String,
    pub mode: SubstitutionMode,
    pub dims: Vec<usize>,
    pub points: Vec<(f64, f64)>,
    pub samples_per_dim: usize,
    pub evaluations: usize,
    pub max_residual: f64,
    pub tol: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_jet: Option<FailingJet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replay_file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// `|L - R| / (1 + |L| + |R|)`; NaN counts as infinite.
pub fn relative_residual(l: f64, r: f64) -> f64 {
    let v = (l - r).abs() / (1.0 + l.abs() + r.abs());
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Numeric parameters of an identity at `(n, α, a)`. `b` follows the
/// identity's own choice; `Var::B` itself is never left free.
pub fn identity_params(id: &Identity, n: usize, alpha: f64, a: f64) -> Result<Params> {
    let mut p = Params {
        n: n as f64,
        alpha,
        a,
        b: 0.0,
    };
    if let Some(b) = &id.b {
        p.b = p.eval(b)?;
    }
    Ok(p)
}

/// An identity with every coefficient fixed at one parameter point.
pub struct CompiledIdentity {
    lhs: CompiledLhs,
    rhs: Compiled,
    pub params: Params,
}

enum CompiledLhs {
    Divergence(f64, Compiled),
    DivergenceOfGradient(f64, Compiled),
    Gradient(Compiled),
}

impl CompiledIdentity {
    pub fn new(id: &Identity, p: Params) -> Result<Self> {
        let lhs = match &id.lhs {
            Lhs::Divergence(f) => {
                CompiledLhs::Divergence(p.eval(&f.weight)?, Compiled::new(&f.field, &p)?)
            }
            Lhs::DivergenceOfGradient { weight, potential } => {
                CompiledLhs::DivergenceOfGradient(p.eval(weight)?, Compiled::new(potential, &p)?)
            }
            Lhs::Gradient(z) => CompiledLhs::Gradient(Compiled::new(z, &p)?),
        };
        let mut rhs = Expr::zero(id.valence());
        for t in &id.rhs {
            rhs = Expr::combine(&rhs, &ParamScalar::one(), &t.term, &t.coef)?;
        }
        Ok(CompiledIdentity {
            lhs,
            rhs: Compiled::new(&rhs, &p)?,
            params: p,
        })
    }

    /// Left side components at a jet.
    pub fn lhs(&self, jet: &JetSample) -> Result<Vec<f64>> {
        let p = &self.params;
        let n = jet.n;
        let along = |k: usize| fields_along(jet, k, p.b, p.alpha);
        match &self.lhs {
            CompiledLhs::Divergence(w, v) => {
                let mut s = 0.0;
                for k in 0..n {
                    let vk = v.eval(&along(k), &[k])?;
                    s += vk.d1 + w * jet.g1[k] * vk.v / jet.u;
                }
                Ok(vec![s])
            }
            CompiledLhs::DivergenceOfGradient(w, z) => {
                let mut s = 0.0;
                for k in 0..n {
                    let zk = z.eval(&along(k), &[])?;
                    s += zk.d2 + w * jet.g1[k] * zk.d1 / jet.u;
                }
                Ok(vec![s])
            }
            CompiledLhs::Gradient(z) => (0..n).map(|i| Ok(z.eval(&along(i), &[])?.d1)).collect(),
        }
    }

    pub fn rhs(&self, jet: &JetSample) -> Result<Vec<f64>> {
        self.rhs.components(&fields_at(jet, self.params.b))
    }

    /// Worst relative residual over components, with both sides.
    pub fn residual(&self, jet: &JetSample) -> Result<(f64, Vec<f64>, Vec<f64>)> {
        let l = self.lhs(jet)?;
        let r = self.rhs(jet)?;
        let worst = l
            .iter()
            .zip(&r)
            .map(|(a, b)| relative_residual(*a, *b))
            .fold(0.0, f64::max);
        Ok((worst, l, r))
    }
}

struct Task {
    n: usize,
    point: usize,
    alpha: f64,
    a: f64,
    seed: u64,
}

type Outcome = Result<(f64, Vec<f64>, Vec<f64>)>;

/// Evaluates `id` at `config.samples` jets per dimension and parameter
/// point. The identity's own mode decides whether `Δ²u = u^α` holds at the
/// jet.
pub fn numeric_check_identity(id: &Identity, config: &OracleConfig, exec: Exec) -> OracleReport {
    numeric_check_all(&[id], config, exec).remove(0)
}

/// Checks several identities against one shared set of jets per mode.
/// Reports follow the input order.
pub fn numeric_check_all(
    ids: &[&Identity],
    config: &OracleConfig,
    exec: Exec,
) -> Vec<OracleReport> {
    let mut tasks = Vec::new();
    for &n in &config.dims {
        for (point, &(alpha, a)) in config.points.iter().enumerate() {
            for index in 0..config.samples {
                let seed = sample_seed(config.seed, n, point * config.samples + index);
                tasks.push(Task {
                    n,
                    point,
                    alpha,
                    a,
                    seed,
                });
            }
        }
    }
    let compiled: Vec<Result<Vec<CompiledIdentity>>> = ids
        .iter()
        .map(|id| {
            let mut out = Vec::new();
            for &n in &config.dims {
                for &(alpha, a) in &config.points {
                    out.push(CompiledIdentity::new(
                        id,
                        identity_params(id, n, alpha, a)?,
                    )?);
                }
            }
            Ok(out)
        })
        .collect();
    let slot = |t: &Task| {
        let d = config.dims.iter().position(|&n| n == t.n).unwrap_or(0);
        d * config.points.len() + t.point
    };
    // outcomes[i][task] for identity i
    let mut outcomes: Vec<Vec<Outcome>> = ids.iter().map(|_| Vec::new()).collect();
    for mode in [SubstitutionMode::Free, SubstitutionMode::OnShell] {
        let members: Vec<usize> = (0..ids.len())
            .filter(|&i| ids[i].mode == mode && compiled[i].is_ok())
            .collect();
        if members.is_empty() {
            continue;
        }
        let per_task: Vec<Vec<Outcome>> =
            exec.map(&tasks, |t| match sample_jet(t.seed, t.n, mode, t.alpha) {
                Ok(jet) => members
                    .iter()
                    .map(|&i| match &compiled[i] {
                        Ok(c) => c[slot(t)].residual(&jet),
                        Err(e) => Err(e.clone()),
                    })
                    .collect(),
                Err(e) => members.iter().map(|_| Err(e.clone())).collect(),
            });
        for row in per_task {
            for (m, o) in members.iter().zip(row) {
                outcomes[*m].push(o);
            }
        }
    }
    ids.iter()
        .enumerate()
        .map(|(i, id)| {
            let mut report = OracleReport {
                id: id.id.clone(),
                anchor: id.anchor.clone(),
                mode: id.mode,
                dims: config.dims.clone(),
                points: config.points.clone(),
                samples_per_dim: config.samples,
                evaluations: 0,
                max_residual: 0.0,
                tol: config.tol,
                passed: false,
                failing_jet: None,
                replay_file: None,
                error: None,
            };
            if let Err(e) = &compiled[i] {
                report.error = Some(e.to_string());
                return report;
            }
            // First maximum in task order, so the report does not depend on threads.
            let mut worst: Option<(usize, f64, Vec<f64>, Vec<f64>)> = None;
            for (k, o) in outcomes[i].drain(..).enumerate() {
                match o {
                    Ok((r, l, rh)) => {
                        report.evaluations += 1;
                        if worst.as_ref().is_none_or(|w| r > w.1) {
                            worst = Some((k, r, l, rh));
                        }
                    }
                    Err(e) => {
                        report.error = Some(e.to_string());
                        return report;
                    }
                }
            }
            let Some((k, residual, lhs, rhs)) = worst else {
                report.passed = true;
                return report;
            };
            report.max_residual = residual;
            report.passed = residual <= config.tol;
            if !report.passed {
                let t = &tasks[k];
                let failing = sample_jet(t.seed, t.n, id.mode, t.alpha).map(|jet| FailingJet {
                    id: id.id.clone(),
                    alpha: t.alpha,
                    a: t.a,
                    jet,
                    lhs,
                    rhs,
                    residual,
                });
                match failing {
                    Ok(w) => {
                        if let Some(dir) = &config.replay_dir {
                            match write_replay(dir, &w) {
                                Ok(p) => report.replay_file = Some(p.display().to_string()),
                                Err(e) => report.error = Some(e.to_string()),
                            }
                        }
                        report.failing_jet = Some(w);
                    }
                    Err(e) => report.error = Some(e.to_string()),
                }
            }
            report
        })
        .collect()
}

fn write_replay(dir: &Path, w: &FailingJet) -> Result<PathBuf> {
    let io = |e: std::io::Error| Error::InvalidParameters(format!("replay file: {e}"));
    std::fs::create_dir_all(dir).map_err(io)?;
    let path = dir.join(format!("{}-n{}-seed{}.json", w.id, w.jet.n, w.jet.seed));
    let body =
        serde_json::to_string_pretty(w).map_err(|e| Error::InvalidParameters(e.to_string()))?;
    std::fs::write(&path, body).map_err(io)?;
    Ok(path)
}

/// Re-evaluates a stored failing jet against `id`.
pub fn replay(id: &Identity, record: &FailingJet) -> Result<f64> {
    let p = identity_params(id, record.jet.n, record.alpha, record.a)?;
    Ok(CompiledIdentity::new(id, p)?.residual(&record.jet)?.0)
}

pub fn read_replay(path: &Path) -> Result<FailingJet> {
    let body = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidParameters(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&body).map_err(|e| Error::Parse(e.to_string()))
}
