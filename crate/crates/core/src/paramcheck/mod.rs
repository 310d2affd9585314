//! Exact analysis of the coefficient matrix and of every parameter-range
//! claim: factorizations, Sturm certificates, definiteness and exponent
//! arithmetic.

pub mod cert;
pub mod exponent;
pub mod matrix;
pub mod pd;
pub mod upoly;

pub use cert::{
    certify_range, certify_sign, positivity_certificate, NCertificates, PolyId, SignCertificate,
    Verdict,
};
pub use exponent::{aux_coefficient_check, exponent_check, CoefficientCheck, ExponentCheck};
pub use matrix::{
    build_matrix_a, check_endpoint_values, check_minor_formulas, FormulaCheck, MatrixA,
};
pub use pd::{numeric_pd_scan, Definiteness, PdReport};
pub use upoly::UPoly;
