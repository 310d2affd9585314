//! Floating-point minimal eigenvalue scan, cross-checked against exact
//! Sylvester minors at every grid point.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::matrix::{build_matrix_a, MatrixA};
use super::upoly::{specialize_fraction, UPoly};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::symcore::{ParamScalar, Var};

/// `scale · Σ c_k x^k` with integer `c_k`, evaluated without gcd work.
#[derive(Clone, Debug)]
struct IntPoly {
    coeffs: Vec<BigInt>,
    scale: BigRational,
}

impl IntPoly {
    fn new(p: &UPoly) -> Self {
        let l = p
            .coeffs()
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        IntPoly {
            coeffs: p.coeffs().iter().map(|c| (c * &l).to_integer()).collect(),
            scale: BigRational::new(BigInt::one(), l),
        }
    }

    fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// `Σ c_k p^k q^{d-k}` from precomputed powers.
    fn homog(&self, pp: &[BigInt], qp: &[BigInt]) -> BigInt {
        let d = self.degree();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * &pp[k] * &qp[d - k])
            .sum()
    }
}

/// A ratio of polynomials in `α` at fixed `n`.
#[derive(Clone, Debug)]
struct RatFn {
    num: IntPoly,
    den: IntPoly,
    scale_sign: Sign,
    scale_f64: f64,
}

/// Exact sign and floating value at one rational point.
struct Value {
    sign: Sign,
    approx: f64,
}

impl RatFn {
    fn new(s: &ParamScalar, n: i64) -> Result<Self> {
        let (num, den) = specialize_fraction(s, n, Var::Alpha)?;
        let (num, den) = (IntPoly::new(&num), IntPoly::new(&den));
        let scale = &num.scale / &den.scale;
        Ok(RatFn {
            scale_sign: scale.numer().sign(),
            scale_f64: scale.to_f64().unwrap_or(f64::NAN),
            num,
            den,
        })
    }

    fn max_degree(&self) -> usize {
        self.num.degree().max(self.den.degree())
    }

    fn at(&self, pp: &[BigInt], qp: &[BigInt]) -> Result<Value> {
        let sn = self.num.homog(pp, qp);
        let sd = self.den.homog(pp, qp);
        if sd.is_zero() {
            return Err(Error::Pole("denominator vanishes on the grid".into()));
        }
        let sign = sn.sign() * sd.sign() * self.scale_sign;
        // value = scale · sn/q^dn · q^dd/sd
        let (dn, dd) = (self.num.degree(), self.den.degree());
        let q_shift = if dd >= dn {
            qp[dd - dn].to_f64().unwrap_or(f64::NAN)
        } else {
            1.0 / qp[dn - dd].to_f64().unwrap_or(f64::NAN)
        };
        let approx = ratio_f64(&sn, &sd) * q_shift * self.scale_f64;
        Ok(Value { sign, approx })
    }
}

fn ratio_f64(a: &BigInt, b: &BigInt) -> f64 {
    a.to_f64().unwrap_or(f64::NAN) / b.to_f64().unwrap_or(f64::NAN)
}

/// `A` at fixed `n`: floating entries for the eigenvalue start and exact
/// rational functions for the invariants and leading minors.
#[derive(Clone, Debug)]
pub struct MatrixAtN {
    pub n: i64,
    entries: [[(Vec<f64>, Vec<f64>); 3]; 3],
    trace: RatFn,
    csum: RatFn,
    a11: RatFn,
    minor2: RatFn,
    det: RatFn,
    degree: usize,
}

/// Formal scalars needed per `n`.
#[derive(Clone, Debug)]
pub struct FormalInvariants {
    matrix: MatrixA,
    trace: ParamScalar,
    csum: ParamScalar,
    minor2: ParamScalar,
    det: ParamScalar,
}

impl FormalInvariants {
    pub fn new() -> Result<Self> {
        let m = build_matrix_a(None)?;
        let pm = m.principal_minors();
        Ok(FormalInvariants {
            trace: &(&pm[0] + &pm[1]) + &pm[2],
            csum: &(&pm[3] + &pm[4]) + &pm[5],
            minor2: pm[3].clone(),
            det: pm[6].clone(),
            matrix: m,
        })
    }
}

fn f64_coeffs(p: &UPoly) -> Vec<f64> {
    p.coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::NAN))
        .collect()
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, k| acc * x + k)
}

impl MatrixAtN {
    pub fn new(f: &FormalInvariants, n: i64) -> Result<Self> {
        let e = |i: usize, j: usize| -> Result<(Vec<f64>, Vec<f64>)> {
            let (num, den) = specialize_fraction(f.matrix.get(i, j), n, Var::Alpha)?;
            Ok((f64_coeffs(&num), f64_coeffs(&den)))
        };
        let parts = [
            RatFn::new(&f.trace, n)?,
            RatFn::new(&f.csum, n)?,
            RatFn::new(f.matrix.get(0, 0), n)?,
            RatFn::new(&f.minor2, n)?,
            RatFn::new(&f.det, n)?,
        ];
        let degree = parts.iter().map(RatFn::max_degree).max().unwrap_or(0);
        let [trace, csum, a11, minor2, det] = parts;
        Ok(MatrixAtN {
            n,
            entries: [
                [e(0, 0)?, e(0, 1)?, e(0, 2)?],
                [e(1, 0)?, e(1, 1)?, e(1, 2)?],
                [e(2, 0)?, e(2, 1)?, e(2, 2)?],
            ],
            trace,
            csum,
            a11,
            minor2,
            det,
            degree,
        })
    }

    fn entries_f64(&self, alpha: f64) -> [[f64; 3]; 3] {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let (num, den) = &self.entries[i][j];
                horner(num, alpha) / horner(den, alpha)
            })
        })
    }

    fn point(&self, alpha: &BigRational) -> Result<PdPoint> {
        let (p, q) = (alpha.numer(), alpha.denom());
        let mut pp = vec![BigInt::one()];
        let mut qp = vec![BigInt::one()];
        for k in 1..=self.degree {
            pp.push(&pp[k - 1] * p);
            qp.push(&qp[k - 1] * q);
        }
        let t = self.trace.at(&pp, &qp)?;
        let c = self.csum.at(&pp, &qp)?;
        let d = self.det.at(&pp, &qp)?;
        let a11 = self.a11.at(&pp, &qp)?;
        let m2 = self.minor2.at(&pp, &qp)?;
        let af = alpha.to_f64().unwrap_or(f64::NAN);
        Ok(PdPoint {
            alpha: af,
            lambda_min: lambda_min(&self.entries_f64(af), t.approx, c.approx, d.approx),
            sylvester_positive: [a11.sign, m2.sign, d.sign].iter().all(|s| *s == Sign::Plus),
        })
    }
}

/// Smallest eigenvalue of a symmetric 3×3 matrix: trigonometric start,
/// then Newton on the characteristic polynomial `λ³ - tλ² + cλ - d`.
pub fn lambda_min(a: &[[f64; 3]; 3], t: f64, c: f64, d: f64) -> f64 {
    let p1 = a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2);
    let q = t / 3.0;
    let guess = if p1 == 0.0 {
        a[0][0].min(a[1][1]).min(a[2][2])
    } else {
        let p2 = (a[0][0] - q).powi(2) + (a[1][1] - q).powi(2) + (a[2][2] - q).powi(2) + 2.0 * p1;
        let p = (p2 / 6.0).sqrt();
        let mut b = *a;
        for (i, row) in b.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = (*x - if i == j { q } else { 0.0 }) / p;
            }
        }
        let det_b = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
            - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
            + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
        let phi = (det_b / 2.0).clamp(-1.0, 1.0).acos() / 3.0;
        q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos()
    };
    let mut l = guess;
    for _ in 0..4 {
        let f = ((l - t) * l + c) * l - d;
        let df = (3.0 * l - 2.0 * t) * l + c;
        if df == 0.0 {
            break;
        }
        let step = f / df;
        l -= step;
        if step.abs() <= f64::EPSILON * l.abs() {
            break;
        }
    }
    l
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Definiteness {
    PositiveDefinite,
    PositiveSemidefinite,
    Indefinite,
}

/// Exact classification from the principal minors at `(n, α)`.
pub fn classify(n: i64, alpha: &BigRational) -> Result<Definiteness> {
    let m = build_matrix_a(Some(n))?;
    let point = [
        BigRational::from_integer(n.into()),
        alpha.clone(),
        BigRational::zero(),
        BigRational::zero(),
    ];
    let minors = m
        .principal_minors()
        .iter()
        .map(|s| s.eval(&point))
        .collect::<Result<Vec<_>>>()?;
    let leading = [&minors[0], &minors[3], &minors[6]];
    Ok(if leading.iter().all(|v| v.is_positive()) {
        Definiteness::PositiveDefinite
    } else if minors.iter().all(|v| !v.is_negative()) {
        Definiteness::PositiveSemidefinite
    } else {
        Definiteness::Indefinite
    })
}

/// Numeric `λ_min` and exact Sylvester verdict at one point.
#[derive(Clone, Debug, Serialize)]
pub struct PdPoint {
    pub alpha: f64,
    pub lambda_min: f64,
    pub sylvester_positive: bool,
}

/// `λ_min(A)` at `(n, α)`.
pub fn lambda_min_at(n: i64, alpha: &BigRational) -> Result<f64> {
    let m = MatrixAtN::new(&FormalInvariants::new()?, n)?;
    Ok(m.point(alpha)?.lambda_min)
}

#[derive(Clone, Debug, Serialize)]
pub struct PdRow {
    pub n: i64,
    pub points: usize,
    pub min_lambda: f64,
    pub min_alpha: f64,
    /// `λ_min` at the grid point nearest the upper end of the range.
    pub lambda_near_endpoint: f64,
    pub agree: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PdReport {
    pub n_min: i64,
    pub n_max: i64,
    pub grid: usize,
    pub rows: Vec<PdRow>,
    pub total_points: usize,
    pub agreement_fraction: f64,
    pub min_lambda: f64,
    pub all_positive: bool,
}

/// Grid `α_j = α_max·j/(grid+1)`, `j = 1..=grid`, strictly inside
/// `(0, (n+4)/(n-4))`.
pub fn alpha_grid(n: i64, grid: usize) -> Vec<BigRational> {
    let top = BigRational::new((n + 4).into(), (n - 4).into());
    let g = grid as i64 + 1;
    (1..g)
        .map(|j| &top * BigRational::new(j.into(), g.into()))
        .collect()
}

fn scan_n(f: &FormalInvariants, n: i64, grid: usize) -> Result<PdRow> {
    let mn = MatrixAtN::new(f, n)?;
    let pts = alpha_grid(n, grid)
        .iter()
        .map(|a| mn.point(a))
        .collect::<Result<Vec<_>>>()?;
    let mut agree = 0;
    for p in &pts {
        let numeric_positive = p.lambda_min > 0.0;
        if numeric_positive == p.sylvester_positive {
            agree += 1;
        } else {
            return Err(Error::EngineInconsistency(format!(
                "n = {n}, alpha = {}: lambda_min = {:e} but Sylvester says {}",
                p.alpha,
                p.lambda_min,
                if p.sylvester_positive {
                    "positive"
                } else {
                    "not positive"
                }
            )));
        }
    }
    let (min_alpha, min_lambda) =
        pts.iter()
            .map(|p| (p.alpha, p.lambda_min))
            .fold(
                (f64::NAN, f64::INFINITY),
                |acc, x| if x.1 < acc.1 { x } else { acc },
            );
    Ok(PdRow {
        n,
        points: pts.len(),
        min_lambda,
        min_alpha,
        lambda_near_endpoint: pts.last().map_or(f64::NAN, |p| p.lambda_min),
        agree,
    })
}

/// Scans `n_min..=n_max` with `grid` interior points per `n`. A sign
/// disagreement between `λ_min` and the exact minors is fatal.
pub fn numeric_pd_scan(n_min: i64, n_max: i64, grid: usize, exec: Exec) -> Result<PdReport> {
    if n_min < 5 || n_max < n_min || grid == 0 {
        return Err(Error::InvalidParameters(format!(
            "scan n = {n_min}..{n_max}, grid = {grid}"
        )));
    }
    let f = FormalInvariants::new()?;
    let ns: Vec<i64> = (n_min..=n_max).collect();
    let rows = exec
        .map(&ns, |&n| scan_n(&f, n, grid))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let total: usize = rows.iter().map(|r| r.points).sum();
    let agree: usize = rows.iter().map(|r| r.agree).sum();
    let min_lambda = rows
        .iter()
        .map(|r| r.min_lambda)
        .fold(f64::INFINITY, f64::min);
    Ok(PdReport {
        n_min,
        n_max,
        grid,
        total_points: total,
        agreement_fraction: agree as f64 / total as f64,
        min_lambda,
        all_positive: min_lambda > 0.0,
        rows,
    })
}
