//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed rational literal `{0}` (expected `p/q` or `p` with q > 0)")]
    BadRational(String),

    #[error("malformed cyclotomic literal: {0}")]
    BadCyclotomic(String),

    #[error("requested precision of {digits} digits is unreachable: {reason}")]
    PrecisionUnreachable { digits: u32, reason: String },

    #[error("exterior power vanishes: k = {k} exceeds dimension {dim}")]
    ExteriorPowerVanishes { k: usize, dim: usize },

    #[error("matrix is singular where an invertible one is required")]
    SingularMatrix,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("not a quartic: exponents {0:?} do not sum to 4")]
    NotQuartic([u32; 3]),

    #[error("malformed monomial key `{0}` (expected `i,j,k`)")]
    BadMonomialKey(String),

    #[error("asymmetric input where a symmetric form is required")]
    AsymmetricForm,

    #[error("form has nonzero R-component; not the image of a quartic")]
    NonzeroRComponent,

    #[error("group too large or not finite: closure exceeded cap {0}")]
    GroupTooLarge(usize),

    #[error("inconsistent group action: character average {0} is not a rational integer")]
    InconsistentGroupAction(String),

    #[error("invalid period matrix: {0}")]
    InvalidPeriodMatrix(String),

    #[error("increase precision or lower t: sample at t = {0} fell below the precision floor")]
    PrecisionFloor(f64),

    #[error("invalid theta characteristic literal `{0}` (expected `m1,m2,m3;n1,n2,n3` of bits)")]
    BadCharacteristic(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
