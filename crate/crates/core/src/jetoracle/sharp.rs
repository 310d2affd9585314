//! Brute-force search for the sharp constant `c` in `|E|²|v|² ≥ c|Ev|²`
//! over trace-free symmetric `E`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct SharpConstantResult {
    pub n: usize,
    pub minimum: f64,
    /// Sorted eigenvalues of the best `E`, scaled so the largest in
    /// absolute value is `1`.
    pub extremizer_spectrum: Vec<f64>,
    /// `n/(n-1)`, attained at `diag(1, -1/(n-1), …)` with `v = e₁`.
    pub candidate: f64,
    pub gap_to_candidate: f64,
    pub below_four_thirds: bool,
    pub starts: usize,
    pub iterations: usize,
}

type Mat = Vec<f64>;

fn norm2(e: &Mat) -> f64 {
    e.iter().map(|x| x * x).sum()
}

fn apply(e: &Mat, n: usize, v: &[f64]) -> Vec<f64> {
    (0..n)
        .map(|i| (0..n).map(|j| e[i * n + j] * v[j]).sum())
        .collect()
}

fn normalize(v: &mut [f64]) -> f64 {
    let s = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if s > 0.0 {
        v.iter_mut().for_each(|x| *x /= s);
    }
    s
}

fn project_trace_free(e: &mut Mat, n: usize) {
    for i in 0..n {
        for j in 0..i {
            let m = 0.5 * (e[i * n + j] + e[j * n + i]);
            e[i * n + j] = m;
            e[j * n + i] = m;
        }
    }
    let tr = (0..n).map(|i| e[i * n + i]).sum::<f64>() / n as f64;
    for i in 0..n {
        e[i * n + i] -= tr;
    }
}

/// Unit `v` maximizing `|Ev|`, by power iteration on `E²`.
fn top_direction(e: &Mat, n: usize, start: &[f64]) -> Vec<f64> {
    let mut v = start.to_vec();
    normalize(&mut v);
    for _ in 0..200 {
        let mut w = apply(e, n, &apply(e, n, &v));
        if normalize(&mut w) == 0.0 {
            break;
        }
        let diff: f64 = w.iter().zip(&v).map(|(a, b)| (a - b).abs()).sum();
        v = w;
        if diff < 1e-14 {
            break;
        }
    }
    v
}

fn ratio(e: &Mat, n: usize, v: &[f64]) -> Option<f64> {
    let ev = apply(e, n, v);
    let d: f64 = ev.iter().map(|x| x * x).sum();
    (d > 1e-300).then(|| norm2(e) / d)
}

/// Jacobi eigenvalues of a small symmetric matrix.
fn eigenvalues(e: &Mat, n: usize) -> Vec<f64> {
    let mut a = e.clone();
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].powi(2))
            .sum();
        if off < 1e-24 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    ev
}

/// Random starts refined by projected gradient descent on
/// `|E|²/|Ev|²` with `v` re-optimized each step.
pub fn sharp_constant_search(
    n: usize,
    iterations: usize,
    seed: u64,
) -> Result<SharpConstantResult> {
    if n < 2 {
        return Err(Error::InvalidParameters(format!(
            "sharp constant needs n >= 2, got {n}"
        )));
    }
    let starts = 32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    let mut best_e: Mat = Vec::new();
    for _ in 0..starts {
        let mut e: Mat = (0..n * n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        project_trace_free(&mut e, n);
        let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        v = top_direction(&e, n, &v);
        let Some(mut f) = ratio(&e, n, &v) else {
            continue;
        };
        let mut step = 0.1;
        for _ in 0..iterations {
            // gradient of |E|²/|Ev|² in E for fixed v
            let ev = apply(&e, n, &v);
            let d: f64 = ev.iter().map(|x| x * x).sum();
            let mut g: Mat = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..n {
                    let dd = ev[i] * v[j] + v[i] * ev[j];
                    g[i * n + j] = 2.0 * e[i * n + j] / d - f * dd / d;
                }
            }
            project_trace_free(&mut g, n);
            let mut accepted = false;
            while step > 1e-16 {
                let mut trial: Mat = e.iter().zip(&g).map(|(a, b)| a - step * b).collect();
                let s = norm2(&trial).sqrt();
                trial.iter_mut().for_each(|x| *x /= s);
                let tv = top_direction(&trial, n, &v);
                match ratio(&trial, n, &tv) {
                    Some(t) if t < f => {
                        e = trial;
                        v = tv;
                        f = t;
                        step *= 1.5;
                        accepted = true;
                        break;
                    }
                    _ => step *= 0.5,
                }
            }
            if !accepted {
                break;
            }
        }
        if f < best {
            best = f;
            best_e = e;
        }
    }
    let mut spectrum = eigenvalues(&best_e, n);
    let scale = spectrum.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    // Orient so the dominant eigenvalue is positive.
    let sign = if spectrum
        .iter()
        .any(|x| (x.abs() - scale).abs() < 1e-9 && *x > 0.0)
    {
        1.0
    } else {
        -1.0
    };
    spectrum.iter_mut().for_each(|x| *x *= sign / scale);
    spectrum.sort_by(|x, y| y.total_cmp(x));
    let candidate = n as f64 / (n as f64 - 1.0);
    Ok(SharpConstantResult {
        n,
        minimum: best,
        extremizer_spectrum: spectrum,
        candidate,
        gap_to_candidate: best - candidate,
        below_four_thirds: best < 4.0 / 3.0,
        starts,
        iterations,
    })
}
