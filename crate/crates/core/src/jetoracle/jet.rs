//! Random flat-space jets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::calculus::SubstitutionMode;
use crate::error::{Error, Result};

/// Derivatives of `u` at a point of flat `ℝⁿ`, arrays flattened row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JetSample {
    pub n: usize,
    pub seed: u64,
    pub mode: SubstitutionMode,
    pub u: f64,
    pub g1: Vec<f64>,
    pub g2: Vec<f64>,
    pub g3: Vec<f64>,
    /// Totally symmetric, with `Σ g4_iikk = w4`.
    pub g4: Vec<f64>,
    /// `Δ²u`; equal to `u^α` on shell.
    pub w4: f64,
}

impl JetSample {
    pub fn g2(&self, i: usize, j: usize) -> f64 {
        self.g2[i * self.n + j]
    }

    pub fn g3(&self, i: usize, j: usize, k: usize) -> f64 {
        self.g3[(i * self.n + j) * self.n + k]
    }

    pub fn g4(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.g4[((i * self.n + j) * self.n + k) * self.n + l]
    }

    /// `Σ_{i,k} g4_iikk`
    pub fn double_trace(&self) -> f64 {
        let n = self.n;
        (0..n)
            .flat_map(|i| (0..n).map(move |k| (i, k)))
            .map(|(i, k)| self.g4(i, i, k, k))
            .sum()
    }

    /// The jet of `λu`.
    pub fn scaled(&self, lambda: f64) -> JetSample {
        let s = |v: &[f64]| v.iter().map(|x| x * lambda).collect();
        JetSample {
            u: self.u * lambda,
            g1: s(&self.g1),
            g2: s(&self.g2),
            g3: s(&self.g3),
            g4: s(&self.g4),
            w4: self.w4 * lambda,
            ..self.clone()
        }
    }

    /// Same jet with zero gradient.
    pub fn with_flat_gradient(&self) -> JetSample {
        JetSample {
            g1: vec![0.0; self.n],
            ..self.clone()
        }
    }
}

/// Mixes the run seed with the dimension and sample index so each sample
/// is reproducible on its own.
pub fn sample_seed(seed: u64, n: usize, index: usize) -> u64 {
    let mut z = seed ^ ((n as u64) << 48) ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Totally symmetric array of the given rank, one draw per index multiset.
fn symmetric<R: Rng>(rng: &mut R, n: usize, rank: usize) -> Vec<f64> {
    let total = n.pow(rank as u32);
    // Draw slot of each entry's sorted index, keyed by its flat position.
    let mut draws: Vec<Option<f64>> = vec![None; total];
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; rank];
    for flat in 0..total {
        for (r, x) in idx.iter_mut().enumerate() {
            *x = (flat / n.pow((rank - 1 - r) as u32)) % n;
        }
        idx.sort_unstable();
        let key = idx.iter().fold(0, |k, &x| k * n + x);
        let v = *draws[key].get_or_insert_with(|| rng.random_range(-1.0..=1.0));
        out.push(v);
    }
    out
}

/// Deterministic jet. On shell `α` fixes `w4 = u^α`; otherwise `w4` is
/// drawn. The double trace of `g4` is then shifted onto `w4` by adding a
/// multiple of the symmetrized `δ⊗δ`.
pub fn sample_jet(seed: u64, n: usize, mode: SubstitutionMode, alpha: f64) -> Result<JetSample> {
    if n < 2 {
        return Err(Error::InvalidParameters(format!("jet dimension {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u: f64 = 1.0 + 0.5 * rng.random_range(-1.0..=1.0);
    let g1: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let g2 = symmetric(&mut rng, n, 2);
    let g3 = symmetric(&mut rng, n, 3);
    let g4 = symmetric(&mut rng, n, 4);
    let w4 = match mode {
        SubstitutionMode::OnShell => u.powf(alpha),
        SubstitutionMode::Free => rng.random_range(-1.0..=1.0),
    };
    let mut jet = JetSample {
        n,
        seed,
        mode,
        u,
        g1,
        g2,
        g3,
        g4,
        w4,
    };
    let c = (w4 - jet.double_trace()) / (n * n + 2 * n) as f64;
    let d = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    jet.g4[((i * n + j) * n + k) * n + l] +=
                        c * (d(i, j) * d(k, l) + d(i, k) * d(j, l) + d(i, l) * d(j, k));
                }
            }
        }
    }
    Ok(jet)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a = sample_jet(7, 5, SubstitutionMode::Free, 2.0).unwrap();
        let b = sample_jet(7, 5, SubstitutionMode::Free, 2.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn symmetric_by_construction() {
        let j = sample_jet(3, 5, SubstitutionMode::Free, 2.0).unwrap();
        for i in 0..5 {
            for k in 0..5 {
                assert_eq!(j.g2(i, k) - j.g2(k, i), 0.0);
                assert_eq!(j.g3(i, k, 1), j.g3(k, 1, i));
                assert_eq!(j.g4(i, k, 2, 0), j.g4(0, 2, k, i));
            }
        }
    }

    #[test]
    fn on_shell_fourth_order() {
        let j = sample_jet(11, 6, SubstitutionMode::OnShell, 2.5).unwrap();
        assert_eq!(j.w4, j.u.powf(2.5));
        assert!((j.double_trace() - j.w4).abs() < 1e-12);
        assert!(j.u >= 1e-3);
    }
}
