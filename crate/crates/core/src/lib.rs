//! Verification engine for the invariant-tensor identities behind a
//! Liouville theorem for `Δ²u = u^α` on manifolds with `Ric ≥ 0`.

pub mod calculus;
pub mod error;
pub mod exec;
pub mod jetoracle;
pub mod paramcheck;
pub mod radial;
pub mod registry;
pub mod symcore;

pub use error::{Error, Result};

/// Reported in every verification record.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
