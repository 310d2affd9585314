use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed coefficient: {0}")]
    MalformedCoefficient(String),
    #[error("malformed monomial: {0}")]
    MalformedMonomial(String),
    #[error("valence mismatch: {left} vs {right}")]
    ValenceMismatch { left: u8, right: u8 },
    #[error("derivative order overflow at {0}")]
    OrderOverflow(String),
    #[error("unsupported curvature at {0}")]
    UnsupportedCurvature(String),
    #[error("named factor must be expanded first: {0}")]
    UnexpandedNamed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("no combination: {0}")]
    NoCombination(String),
    #[error("singular system: {0}")]
    SingularSystem(String),
    #[error("degenerate certificate: {0}")]
    DegenerateCertificate(String),
    #[error("engine inconsistency: {0}")]
    EngineInconsistency(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("empty validity window")]
    EmptyWindow,
}

pub type Result<T> = std::result::Result<T, Error>;
