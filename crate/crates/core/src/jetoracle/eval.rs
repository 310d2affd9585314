//! Numeric evaluation of expressions at a jet by dense pairwise
//! contraction. Curvature vanishes; `E`, `F`, `G` are rebuilt from their
//! defining formulas with a numeric `b`.

use std::collections::BTreeMap;

use super::jet::JetSample;
use super::scalar::{Num, Taylor};
use crate::calculus::SubstitutionMode;
use crate::error::{Error, Result};
use crate::symcore::{Expr, FactorKind, ParamScalar, Slot, TensorMonomial};

/// Numeric parameter values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Params {
    pub n: f64,
    pub alpha: f64,
    pub a: f64,
    pub b: f64,
}

impl Params {
    pub fn point(&self) -> [f64; 4] {
        [self.n, self.alpha, self.a, self.b]
    }

    pub fn eval(&self, c: &ParamScalar) -> Result<f64> {
        c.eval_f64(&self.point())
    }
}

/// Every factor kind as a dense array over `n`, in one scalar type.
#[derive(Clone, Debug)]
pub struct Fields<T> {
    pub n: usize,
    pub u: T,
    pub g1: Vec<T>,
    pub g2: Vec<T>,
    pub g3: Vec<T>,
    pub lap: T,
    pub dlap: Vec<T>,
    pub bilap: T,
    pub e: Vec<T>,
    pub f: Vec<T>,
    pub g: T,
}

impl<T: Num> Fields<T> {
    /// Completes the derived fields from `u`, `g1`, `g2`, `g3`, `Δ²u`.
    fn complete(n: usize, u: T, g1: Vec<T>, g2: Vec<T>, g3: Vec<T>, bilap: T, b: f64) -> Self {
        let nf = n as f64;
        let lap = (0..n).fold(T::zero(), |s, i| s + g2[i * n + i]);
        let dlap: Vec<T> = (0..n)
            .map(|i| (0..n).fold(T::zero(), |s, j| s + g3[(i * n + j) * n + j]))
            .collect();
        let grad2 = g1.iter().fold(T::zero(), |s, &x| s + x * x);
        // E_ij = u_ij + b u_i u_j/u - (Δu + b|∇u|²/u) δ_ij / n
        let tr = (lap + grad2.scale(b) / u).scale(1.0 / nf);
        let mut e = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut v = g2[i * n + j] + (g1[i] * g1[j]).scale(b) / u;
                if i == j {
                    v = v - tr;
                }
                e.push(v);
            }
        }
        // F_j = (Δu)_j + (n+2)/n b Δu u_j/u - b(1 + (n-2)b/n)|∇u|² u_j/u²
        let fb = (nf + 2.0) / nf * b;
        let fc = b * (1.0 + (nf - 2.0) / nf * b);
        let f = (0..n)
            .map(|j| dlap[j] + (lap * g1[j]).scale(fb) / u - (grad2 * g1[j]).scale(fc) / (u * u))
            .collect();
        // G = Δ²u + (n+2)/n b (Δu)²/u - 2(n+2)/n b(1+b) Δu|∇u|²/u²
        //     + b(3b+2)(1 + (n-2)b/n)|∇u|⁴/u³
        let g = bilap + (lap * lap).scale(fb) / u
            - (lap * grad2).scale(2.0 * fb * (1.0 + b)) / (u * u)
            + (grad2 * grad2).scale(b * (3.0 * b + 2.0) * (1.0 + (nf - 2.0) / nf * b))
                / (u * u * u);
        Fields {
            n,
            u,
            g1,
            g2,
            g3,
            lap,
            dlap,
            bilap,
            e,
            f,
            g,
        }
    }
}

/// Fields at the jet point itself.
pub fn fields_at(jet: &JetSample, b: f64) -> Fields<f64> {
    Fields::complete(
        jet.n,
        jet.u,
        jet.g1.clone(),
        jet.g2.clone(),
        jet.g3.clone(),
        jet.w4,
        b,
    )
}

/// Fields along `x + t e_k` to second order in `t`. Data beyond the jet
/// (fifth derivatives, derivatives of `Δ²u` off shell) is poisoned with
/// NaN so any use of it shows up in the result.
pub fn fields_along(jet: &JetSample, k: usize, b: f64, alpha: f64) -> Fields<Taylor> {
    let n = jet.n;
    let u = Taylor::new(jet.u, jet.g1[k], jet.g2(k, k));
    let g1 = (0..n)
        .map(|i| Taylor::new(jet.g1[i], jet.g2(i, k), jet.g3(i, k, k)))
        .collect();
    let mut g2 = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            g2.push(Taylor::new(
                jet.g2(i, j),
                jet.g3(i, j, k),
                jet.g4(i, j, k, k),
            ));
        }
    }
    let mut g3 = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                g3.push(Taylor::new(jet.g3(i, j, l), jet.g4(i, j, l, k), f64::NAN));
            }
        }
    }
    let bilap = match jet.mode {
        SubstitutionMode::OnShell => u.powf(alpha),
        SubstitutionMode::Free => Taylor::new(jet.w4, f64::NAN, f64::NAN),
    };
    Fields::complete(n, u, g1, g2, g3, bilap, b)
}

/// Dense tensor over labeled dummy indices.
struct Labeled<T> {
    labels: Vec<u16>,
    data: Vec<T>,
}

impl<T: Num> Labeled<T> {
    fn scalar(v: T) -> Self {
        Labeled {
            labels: Vec::new(),
            data: vec![v],
        }
    }

    /// Builds the tensor of `factor` with free slots fixed by `free`.
    fn from_factor(
        f: &Fields<T>,
        kind: FactorKind,
        slots: &[Slot],
        free: &[usize],
    ) -> Result<Option<Self>> {
        let n = f.n;
        let mut labels: Vec<u16> = Vec::new();
        // Per slot: the fixed index, or the position of its label.
        let mut map: Vec<std::result::Result<usize, usize>> = Vec::with_capacity(slots.len());
        for s in slots {
            match s {
                Slot::Free(i) => {
                    let v = *free.get(*i as usize).ok_or(Error::ValenceMismatch {
                        left: free.len() as u8,
                        right: *i + 1,
                    })?;
                    map.push(Ok(v));
                }
                Slot::Dummy(d) => {
                    let r = match labels.iter().position(|l| l == d) {
                        Some(r) => r,
                        None => {
                            labels.push(*d);
                            labels.len() - 1
                        }
                    };
                    map.push(Err(r));
                }
            }
        }
        let get = |idx: &[usize]| -> T {
            match kind {
                FactorKind::Du => f.g1[idx[0]],
                FactorKind::Hess => f.g2[idx[0] * n + idx[1]],
                FactorKind::D3u => f.g3[(idx[0] * n + idx[1]) * n + idx[2]],
                FactorKind::Lap => f.lap,
                FactorKind::DLap => f.dlap[idx[0]],
                FactorKind::BiLap => f.bilap,
                FactorKind::Metric => T::cst(if idx[0] == idx[1] { 1.0 } else { 0.0 }),
                FactorKind::E => f.e[idx[0] * n + idx[1]],
                FactorKind::F => f.f[idx[0]],
                FactorKind::G => f.g,
                FactorKind::Ric => T::zero(),
            }
        };
        if kind == FactorKind::Ric {
            return Ok(None);
        }
        let total = n.pow(labels.len() as u32);
        let mut data = Vec::with_capacity(total);
        let mut digits = vec![0usize; labels.len()];
        let mut idx = vec![0usize; slots.len()];
        for _ in 0..total {
            for (p, m) in map.iter().enumerate() {
                idx[p] = match m {
                    Ok(v) => *v,
                    Err(r) => digits[*r],
                };
            }
            data.push(get(&idx));
            odometer(&mut digits, n);
        }
        Ok(Some(Labeled { labels, data }))
    }

    /// Sums over shared labels; the rest are kept.
    fn contract(&self, o: &Labeled<T>, n: usize) -> Labeled<T> {
        let shared: Vec<u16> = self
            .labels
            .iter()
            .copied()
            .filter(|l| o.labels.contains(l))
            .collect();
        let keep: Vec<u16> = self
            .labels
            .iter()
            .chain(&o.labels)
            .copied()
            .filter(|l| !shared.contains(l))
            .collect();
        let stride = |ls: &[u16], l: u16| -> usize {
            ls.iter()
                .position(|x| *x == l)
                .map_or(0, |r| n.pow((ls.len() - 1 - r) as u32))
        };
        let ka: Vec<usize> = keep.iter().map(|l| stride(&self.labels, *l)).collect();
        let ko: Vec<usize> = keep.iter().map(|l| stride(&o.labels, *l)).collect();
        let sa: Vec<usize> = shared.iter().map(|l| stride(&self.labels, *l)).collect();
        let so: Vec<usize> = shared.iter().map(|l| stride(&o.labels, *l)).collect();
        let nk = n.pow(keep.len() as u32);
        let ns = n.pow(shared.len() as u32);
        let mut out = Vec::with_capacity(nk);
        let mut kd = vec![0usize; keep.len()];
        let mut sd = vec![0usize; shared.len()];
        for _ in 0..nk {
            let ba: usize = kd.iter().zip(&ka).map(|(d, s)| d * s).sum();
            let bo: usize = kd.iter().zip(&ko).map(|(d, s)| d * s).sum();
            let mut acc = T::zero();
            sd.iter_mut().for_each(|d| *d = 0);
            for _ in 0..ns {
                let ia = ba + sd.iter().zip(&sa).map(|(d, s)| d * s).sum::<usize>();
                let io = bo + sd.iter().zip(&so).map(|(d, s)| d * s).sum::<usize>();
                acc = acc + self.data[ia] * o.data[io];
                odometer(&mut sd, n);
            }
            out.push(acc);
            odometer(&mut kd, n);
        }
        Labeled {
            labels: keep,
            data: out,
        }
    }
}

/// Row-major increment of a multi-index, last digit fastest.
fn odometer(d: &mut [usize], n: usize) {
    for x in d.iter_mut().rev() {
        *x += 1;
        if *x < n {
            return;
        }
        *x = 0;
    }
}

/// Value of a monomial with free indices fixed by `free`.
pub fn eval_monomial<T: Num>(m: &TensorMonomial, f: &Fields<T>, free: &[usize]) -> Result<T> {
    let mut parts: Vec<Labeled<T>> = Vec::new();
    for fac in m.factors() {
        match Labeled::from_factor(f, fac.kind, &fac.slots, free)? {
            Some(t) => parts.push(t),
            None => return Ok(T::zero()),
        }
    }
    // Greedy: contract the pair with the smallest result first.
    while parts.len() > 1 {
        let mut best = (0, 1, usize::MAX);
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                let shared = parts[i]
                    .labels
                    .iter()
                    .filter(|l| parts[j].labels.contains(l))
                    .count();
                let rank = parts[i].labels.len() + parts[j].labels.len() - 2 * shared;
                let cost = rank * 8 + (parts[i].labels.len() + parts[j].labels.len() - shared);
                if cost < best.2 {
                    best = (i, j, cost);
                }
            }
        }
        let b = parts.remove(best.1);
        let a = parts.remove(best.0);
        parts.push(a.contract(&b, f.n));
    }
    let t = parts.pop().unwrap_or_else(|| Labeled::scalar(T::cst(1.0)));
    if !t.labels.is_empty() {
        return Err(Error::MalformedMonomial(format!("{m} leaves open dummies")));
    }
    Ok(t.data[0] * f.u.powf(m.u_pow() as f64))
}

/// An expression with coefficients evaluated at fixed parameters.
#[derive(Clone, Debug)]
pub struct Compiled {
    pub valence: u8,
    pub terms: Vec<(f64, TensorMonomial)>,
}

impl Compiled {
    pub fn new(e: &Expr, p: &Params) -> Result<Self> {
        let terms = e
            .terms()
            .map(|(m, c)| Ok((p.eval(c)?, m.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Compiled {
            valence: e.valence(),
            terms,
        })
    }

    pub fn eval<T: Num>(&self, f: &Fields<T>, free: &[usize]) -> Result<T> {
        let mut acc = T::zero();
        for (c, m) in &self.terms {
            acc = acc + eval_monomial(m, f, free)?.scale(*c);
        }
        Ok(acc)
    }

    /// All components, free indices in row-major order.
    pub fn components<T: Num>(&self, f: &Fields<T>) -> Result<Vec<T>> {
        let n = f.n;
        match self.valence {
            0 => Ok(vec![self.eval(f, &[])?]),
            1 => (0..n).map(|i| self.eval(f, &[i])).collect(),
            2 => (0..n * n).map(|k| self.eval(f, &[k / n, k % n])).collect(),
            v => Err(Error::ValenceMismatch { left: 2, right: v }),
        }
    }
}

/// Value of a scalar expression at a jet.
pub fn eval_expr(e: &Expr, jet: &JetSample, p: &Params) -> Result<f64> {
    if e.valence() != 0 {
        return Err(Error::ValenceMismatch {
            left: 0,
            right: e.valence(),
        });
    }
    Compiled::new(e, p)?.eval(&fields_at(jet, p.b), &[])
}

/// Per-monomial values, handy for locating a disagreement.
pub fn term_values(e: &Expr, jet: &JetSample, p: &Params) -> Result<BTreeMap<String, f64>> {
    let f = fields_at(jet, p.b);
    e.terms()
        .map(|(m, c)| Ok((m.to_string(), p.eval(c)? * eval_monomial(m, &f, &[])?)))
        .collect()
}
