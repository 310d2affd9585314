//! Sturm-based sign certificates on open intervals.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::matrix::{build_matrix_a, f1, f3, MatrixA};
use super::upoly::{specialize_fraction, UPoly};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::symcore::{ParamScalar, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PolyId {
    F1,
    F3,
    DetA,
    Minor2,
    A11,
}

impl PolyId {
    pub fn name(self) -> &'static str {
        match self {
            PolyId::F1 => "f1",
            PolyId::F3 => "f3",
            PolyId::DetA => "detA",
            PolyId::Minor2 => "minor2",
            PolyId::A11 => "A11",
        }
    }

    /// Variable of the certified polynomial.
    pub fn variable(self) -> &'static str {
        match self {
            PolyId::F1 | PolyId::F3 => "x",
            _ => "alpha",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Positive,
    Negative,
    NotOneSigned,
}

#[derive(Clone, Debug, Serialize)]
pub struct SignCertificate {
    pub poly: String,
    pub n: i64,
    pub variable: String,
    pub interval: [String; 2],
    pub polynomial: String,
    pub sturm_root_count: usize,
    pub chain_length: usize,
    pub endpoint_values: [String; 2],
    /// Multiplicity of each endpoint as a root, divided out before counting.
    pub endpoint_root_multiplicity: [usize; 2],
    pub sample: String,
    pub sample_value: String,
    pub verdict: Verdict,
}

impl SignCertificate {
    pub fn positive(&self) -> bool {
        self.verdict == Verdict::Positive
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// The domain on which the sign of each polynomial is claimed.
pub fn default_interval(id: PolyId, n: i64) -> (BigRational, BigRational) {
    match id {
        PolyId::F1 => (BigRational::zero(), q(1, n - 2)),
        PolyId::F3 => (BigRational::zero(), q(1, n - 4)),
        _ => (BigRational::zero(), q(n + 4, n - 4)),
    }
}

/// Certifies the sign of `p` on the open interval `(a, b)`.
pub fn certify_sign(
    label: &str,
    variable: &str,
    n: i64,
    p: &UPoly,
    a: &BigRational,
    b: &BigRational,
) -> Result<SignCertificate> {
    if p.is_zero() {
        return Err(Error::DegenerateCertificate(format!(
            "{label} vanishes identically at n = {n}"
        )));
    }
    if a >= b {
        return Err(Error::InvalidParameters(format!(
            "empty interval ({a}, {b})"
        )));
    }
    let roots = p.count_roots(a, b)?;
    let chain = p.square_free().sturm_chain();
    let sample = (a + b) / BigRational::from_integer(2.into());
    let sv = p.eval(&sample);
    let verdict = if roots > 0 || sv.is_zero() {
        Verdict::NotOneSigned
    } else if sv.is_positive() {
        Verdict::Positive
    } else {
        Verdict::Negative
    };
    Ok(SignCertificate {
        poly: label.to_string(),
        n,
        variable: variable.to_string(),
        interval: [a.to_string(), b.to_string()],
        polynomial: p.to_string(),
        sturm_root_count: roots,
        chain_length: chain.len(),
        endpoint_values: [p.eval(a).to_string(), p.eval(b).to_string()],
        endpoint_root_multiplicity: [p.deflate(a).1, p.deflate(b).1],
        sample: sample.to_string(),
        sample_value: sv.to_string(),
        verdict,
    })
}

/// Sign polynomial of a matrix-derived scalar in `α`: numerator times
/// denominator, after checking the denominator has no zero on `[a, b]`.
fn alpha_sign_poly(s: &ParamScalar, n: i64, a: &BigRational, b: &BigRational) -> Result<UPoly> {
    let (num, den) = specialize_fraction(s, n, Var::Alpha)?;
    if den.eval(a).is_zero() || den.eval(b).is_zero() || den.count_roots(a, b)? > 0 {
        return Err(Error::Pole(format!(
            "denominator {den} vanishes on [{a}, {b}]"
        )));
    }
    Ok(num.mul(&den))
}

/// Leading principal minors of `A` with formal `n`, computed once.
#[derive(Clone, Debug)]
pub struct SylvesterMinors {
    pub a11: ParamScalar,
    pub minor2: ParamScalar,
    pub det: ParamScalar,
}

impl SylvesterMinors {
    pub fn new(m: &MatrixA) -> Self {
        SylvesterMinors {
            a11: m.get(0, 0).clone(),
            minor2: m.minor2(),
            det: m.det(),
        }
    }

    pub fn formal() -> Result<Self> {
        Ok(SylvesterMinors::new(&build_matrix_a(None)?))
    }

    fn get(&self, id: PolyId) -> &ParamScalar {
        match id {
            PolyId::A11 => &self.a11,
            PolyId::Minor2 => &self.minor2,
            _ => &self.det,
        }
    }
}

fn certify_with(
    m: &SylvesterMinors,
    id: PolyId,
    n: i64,
    a: &BigRational,
    b: &BigRational,
) -> Result<SignCertificate> {
    let p = match id {
        PolyId::F1 => f1().at_n(n)?,
        PolyId::F3 => f3().at_n(n)?,
        _ => alpha_sign_poly(m.get(id), n, a, b)?,
    };
    certify_sign(id.name(), id.variable(), n, &p, a, b)
}

/// Sign certificate for one of the named polynomials at integer `n`, on
/// `interval` or on the default domain.
pub fn positivity_certificate(
    id: PolyId,
    n: i64,
    interval: Option<(BigRational, BigRational)>,
) -> Result<SignCertificate> {
    if n < 5 {
        return Err(Error::InvalidParameters(format!("n = {n} < 5")));
    }
    let (a, b) = interval.unwrap_or_else(|| default_interval(id, n));
    certify_with(&SylvesterMinors::formal()?, id, n, &a, &b)
}

/// Certificates for one `n`: `f1`, `f3` and the Sylvester triple.
#[derive(Clone, Debug, Serialize)]
pub struct NCertificates {
    pub n: i64,
    pub f1: SignCertificate,
    pub f3: SignCertificate,
    pub a11: SignCertificate,
    pub minor2: SignCertificate,
    pub det: SignCertificate,
}

impl NCertificates {
    pub fn sylvester_positive(&self) -> bool {
        self.a11.positive() && self.minor2.positive() && self.det.positive()
    }

    pub fn all_positive(&self) -> bool {
        self.f1.positive() && self.f3.positive() && self.sylvester_positive()
    }
}

pub fn certificates_for(m: &SylvesterMinors, n: i64) -> Result<NCertificates> {
    let c = |id: PolyId| {
        let (a, b) = default_interval(id, n);
        certify_with(m, id, n, &a, &b)
    };
    Ok(NCertificates {
        n,
        f1: c(PolyId::F1)?,
        f3: c(PolyId::F3)?,
        a11: c(PolyId::A11)?,
        minor2: c(PolyId::Minor2)?,
        det: c(PolyId::DetA)?,
    })
}

/// Certificates for every integer `n` in `[n_min, n_max]`, in order.
pub fn certify_range(n_min: i64, n_max: i64, exec: Exec) -> Result<Vec<NCertificates>> {
    if n_min < 5 || n_max < n_min {
        return Err(Error::InvalidParameters(format!(
            "n range {n_min}..{n_max}"
        )));
    }
    let m = SylvesterMinors::formal()?;
    let ns: Vec<i64> = (n_min..=n_max).collect();
    exec.map(&ns, |&n| certificates_for(&m, n))
        .into_iter()
        .collect()
}
