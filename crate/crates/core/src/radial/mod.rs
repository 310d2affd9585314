//! Radial shooting for `Δ²u = u^α` on `ℝⁿ`. With `p = u'`, `v = Δu`,
//! `q = v'` the equation is the first-order system
//! `u' = p, p' = v - (n-1)p/r, v' = q, q' = u^α - (n-1)q/r`.

pub mod dopri;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use dopri::{next_h, step, State};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    PositivityViolated,
    SubharmonicityViolated,
    BlowUp,
    ReachedMaxRadius,
}

impl Verdict {
    pub fn survived(self) -> bool {
        self == Verdict::ReachedMaxRadius
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    /// Radius of the series start.
    pub r0: f64,
    pub blowup: f64,
    /// Permits `v₀ > 0`; such runs are marked out of hypothesis.
    pub allow_positive_v0: bool,
    pub max_steps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rtol: 1e-10,
            atol: 1e-10,
            r0: 1e-6,
            blowup: 1e12,
            allow_positive_v0: false,
            max_steps: 2_000_000,
        }
    }
}

/// One accepted point of a trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialState {
    pub r: f64,
    pub u: f64,
    pub p: f64,
    pub v: f64,
    pub q: f64,
}

impl RadialState {
    fn from(r: f64, y: &State) -> Self {
        RadialState {
            r,
            u: y[0],
            p: y[1],
            v: y[2],
            q: y[3],
        }
    }

    /// `u'' = v - (n-1)p/r`
    pub fn u_rr(&self, n: usize) -> f64 {
        self.v - (n as f64 - 1.0) * self.p / self.r
    }

    /// `Z_a = v/u + a p²/u²`
    pub fn z(&self, a: f64) -> f64 {
        self.v / self.u + a * self.p * self.p / (self.u * self.u)
    }

    /// `u > 0` and `Δu ≤ 0`
    pub fn in_window(&self) -> bool {
        self.u > 0.0 && self.v <= 0.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShootingResult {
    pub n: usize,
    pub alpha: f64,
    pub u0: f64,
    pub v0: f64,
    pub rmax: f64,
    pub r_end: f64,
    pub verdict: Verdict,
    pub out_of_hypothesis: bool,
    pub steps: usize,
    pub rejected: usize,
    /// Largest `Z_{2/(n-4)}` over checkpoints with `u > 0`, `v ≤ 0`.
    pub z_max: Option<f64>,
    /// Size of the competing threshold quantity at termination; small
    /// values mark a cell near a verdict boundary.
    pub margin: f64,
    pub checkpoints: Vec<RadialState>,
}

/// `2/(n-4)`, the gradient weight of the `Z` estimate.
pub fn critical_a(n: usize) -> f64 {
    2.0 / (n as f64 - 4.0)
}

/// Series start at `r0`:
/// `u ≈ u₀ + v₀r²/(2n)`, `v ≈ v₀ + u₀^α r²/(2n)`.
pub fn series_start(n: usize, alpha: f64, u0: f64, v0: f64, r0: f64) -> State {
    let nf = n as f64;
    let s = u0.powf(alpha);
    [
        u0 + v0 * r0 * r0 / (2.0 * nf),
        v0 * r0 / nf,
        v0 + s * r0 * r0 / (2.0 * nf),
        s * r0 / nf,
    ]
}

fn crossing(y: &State, tol: &Tolerances) -> Option<Verdict> {
    if y[0] <= 0.0 {
        Some(Verdict::PositivityViolated)
    } else if y[2] > 0.0 {
        Some(Verdict::SubharmonicityViolated)
    } else if y[0].abs() > tol.blowup {
        Some(Verdict::BlowUp)
    } else {
        None
    }
}

fn margin(verdict: Verdict, y: &State) -> f64 {
    match verdict {
        Verdict::PositivityViolated => y[2].abs(),
        Verdict::SubharmonicityViolated => y[0].abs(),
        _ => y[0].abs().min(y[2].abs()),
    }
}

/// Integrates from the series start until the first threshold crossing or
/// `rmax`. Crossings are located by step halving to `1e-12·(1+r)`.
pub fn shoot(
    n: usize,
    alpha: f64,
    u0: f64,
    v0: f64,
    rmax: f64,
    tol: &Tolerances,
) -> Result<ShootingResult> {
    if n < 5 {
        return Err(Error::InvalidParameters(format!("n = {n} < 5")));
    }
    if alpha.is_nan() || alpha <= 1.0 {
        return Err(Error::InvalidParameters(format!(
            "alpha = {alpha} must exceed 1"
        )));
    }
    if u0.is_nan() || u0 <= 0.0 {
        return Err(Error::InvalidParameters(format!(
            "u0 = {u0} must be positive"
        )));
    }
    if v0 > 0.0 && !tol.allow_positive_v0 {
        return Err(Error::InvalidParameters(format!(
            "v0 = {v0} > 0 needs the override"
        )));
    }
    if rmax.is_nan() || rmax <= tol.r0 {
        return Err(Error::InvalidParameters(format!(
            "rmax = {rmax} must exceed r0 = {}",
            tol.r0
        )));
    }
    let m = n as f64 - 1.0;
    let rhs = |r: f64, y: &State| -> State {
        [
            y[1],
            y[2] - m * y[1] / r,
            y[3],
            y[0].max(0.0).powf(alpha) - m * y[3] / r,
        ]
    };
    let mut r = tol.r0;
    let mut y = series_start(n, alpha, u0, v0, r);
    let mut checkpoints = vec![RadialState::from(r, &y)];
    let mut out = ShootingResult {
        n,
        alpha,
        u0,
        v0,
        rmax,
        r_end: r,
        verdict: Verdict::ReachedMaxRadius,
        out_of_hypothesis: v0 > 0.0,
        steps: 0,
        rejected: 0,
        z_max: None,
        margin: 0.0,
        checkpoints: Vec::new(),
    };
    let finish = |mut out: ShootingResult, cps: Vec<RadialState>| {
        let a = critical_a(n);
        out.z_max = cps
            .iter()
            .filter(|s| s.in_window())
            .map(|s| s.z(a))
            .fold(None, |m: Option<f64>, z| Some(m.map_or(z, |m| m.max(z))));
        out.checkpoints = cps;
        out
    };
    if let Some(v) = crossing(&y, tol) {
        out.verdict = v;
        out.margin = margin(v, &y);
        return Ok(finish(out, checkpoints));
    }
    let mut h = tol.r0;
    let mut cap = f64::INFINITY;
    loop {
        if out.steps + out.rejected >= tol.max_steps {
            return Err(Error::EngineInconsistency(format!(
                "step budget exhausted at r = {r} for (u0, v0) = ({u0}, {v0})"
            )));
        }
        let last = rmax - r <= h;
        let hh = h.min(rmax - r);
        let s = step(&rhs, r, &y, hh, tol.rtol, tol.atol);
        if s.err > 1.0 {
            out.rejected += 1;
            h = next_h(hh, s.err);
            if h < 1e-14 * (1.0 + r) {
                out.verdict = Verdict::BlowUp;
                out.margin = margin(Verdict::BlowUp, &y);
                break;
            }
            continue;
        }
        if let Some(v) = crossing(&s.y, tol) {
            if hh > 1e-12 * (1.0 + r) {
                out.rejected += 1;
                cap = hh / 2.0;
                h = cap;
                continue;
            }
            r += hh;
            y = s.y;
            out.steps += 1;
            checkpoints.push(RadialState::from(r, &y));
            out.verdict = v;
            out.margin = margin(v, &y);
            break;
        }
        r += hh;
        y = s.y;
        out.steps += 1;
        checkpoints.push(RadialState::from(r, &y));
        if last {
            r = rmax;
            break;
        }
        h = next_h(hh, s.err).min(cap);
    }
    out.r_end = r;
    Ok(finish(out, checkpoints))
}

/// `k` log-spaced points on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    match k {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..k)
            .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (k - 1) as f64).exp())
            .collect(),
    }
}

/// `k` evenly spaced points on `[lo, hi]`.
pub fn lin_grid(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    match k {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..k)
            .map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64)
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanCell {
    pub u0: f64,
    pub v0: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    pub r_end: f64,
    pub z_max: Option<f64>,
    /// Within `1e-6` of a verdict boundary.
    pub boundary: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub n: usize,
    pub alpha: f64,
    pub rmax: f64,
    pub cells: Vec<ScanCell>,
    pub total: usize,
    pub survived: usize,
    pub failed: usize,
    pub survival_fraction: f64,
    pub positivity_violated: usize,
    pub subharmonicity_violated: usize,
    pub blow_up: usize,
}

impl ScanSummary {
    pub fn all_terminated(&self) -> bool {
        self.survived == 0 && self.failed == 0
    }
}

/// Runs `shoot` at every `(u₀, v₀)` cell, `u₀` major. A failing cell is
/// recorded and the scan goes on.
pub fn scan_shooting(
    n: usize,
    alpha: f64,
    u0s: &[f64],
    v0s: &[f64],
    rmax: f64,
    tol: &Tolerances,
    exec: Exec,
) -> ScanSummary {
    let grid: Vec<(f64, f64)> = u0s
        .iter()
        .flat_map(|&u| v0s.iter().map(move |&v| (u, v)))
        .collect();
    let cells = exec.map(&grid, |&(u0, v0)| {
        match shoot(n, alpha, u0, v0, rmax, tol) {
            Ok(r) => ScanCell {
                u0,
                v0,
                verdict: Some(r.verdict),
                r_end: r.r_end,
                z_max: r.z_max,
                boundary: r.margin < 1e-6,
                error: None,
            },
            Err(e) => ScanCell {
                u0,
                v0,
                verdict: None,
                r_end: f64::NAN,
                z_max: None,
                boundary: false,
                error: Some(e.to_string()),
            },
        }
    });
    let count = |v: Verdict| cells.iter().filter(|c| c.verdict == Some(v)).count();
    let survived = count(Verdict::ReachedMaxRadius);
    let total = cells.len();
    ScanSummary {
        n,
        alpha,
        rmax,
        total,
        survived,
        failed: cells.iter().filter(|c| c.error.is_some()).count(),
        survival_fraction: if total == 0 {
            0.0
        } else {
            survived as f64 / total as f64
        },
        positivity_violated: count(Verdict::PositivityViolated),
        subharmonicity_violated: count(Verdict::SubharmonicityViolated),
        blow_up: count(Verdict::BlowUp),
        cells,
    }
}

/// The `Z` monitor over the window `u > 0`, `v ≤ 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZReport {
    pub a: f64,
    pub max_z: f64,
    pub at_r: f64,
    pub window_points: usize,
    pub window_end: f64,
    /// First window radius with `Z_a > 0`.
    pub first_positive_r: Option<f64>,
    /// A positive maximum; the estimate's hypotheses are global, so this
    /// is logged as out of hypothesis rather than a counterexample.
    pub positive: bool,
}

/// Largest `Z_a = v/u + a p²/u²` along the trajectory's validity window;
/// `a` defaults to `2/(n-4)`.
pub fn check_z_estimate(result: &ShootingResult, a: Option<f64>) -> Result<ZReport> {
    let a = a.unwrap_or_else(|| critical_a(result.n));
    let window: Vec<&RadialState> = result
        .checkpoints
        .iter()
        .filter(|s| s.in_window())
        .collect();
    let best = window
        .iter()
        .map(|s| (s.z(a), s.r))
        .fold(None, |m: Option<(f64, f64)>, x| match m {
            Some(m) if m.0 >= x.0 => Some(m),
            _ => Some(x),
        })
        .ok_or(Error::EmptyWindow)?;
    Ok(ZReport {
        a,
        max_z: best.0,
        at_r: best.1,
        window_points: window.len(),
        window_end: window.last().map_or(0.0, |s| s.r),
        first_positive_r: window.iter().find(|s| s.z(a) > 0.0).map(|s| s.r),
        positive: best.0 > 0.0,
    })
}

#[derive(Serialize)]
struct CsvRow {
    r: f64,
    u: f64,
    p: f64,
    v: f64,
    q: f64,
    #[serde(rename = "Z")]
    z: f64,
}

/// Checkpoints as CSV with columns `r, u, p, v, q, Z`.
pub fn write_trajectory_csv(result: &ShootingResult, path: &Path) -> Result<()> {
    let io = |e: csv::Error| Error::InvalidParameters(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    let a = critical_a(result.n);
    for s in &result.checkpoints {
        w.serialize(CsvRow {
            r: s.r,
            u: s.u,
            p: s.p,
            v: s.v,
            q: s.q,
            z: s.z(a),
        })
        .map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::InvalidParameters(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests;
