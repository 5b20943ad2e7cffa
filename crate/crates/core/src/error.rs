use num_complex::Complex64;
use thiserror::Error;

/// Failures raised by the exact engine and the numeric oracle.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("the zero polynomial has no well-defined root set")]
    ZeroPolynomial,

    #[error("root finding did not converge for a polynomial of degree {degree}")]
    RootFinding { degree: usize },

    #[error("symbol vanishes on circle (zero or pole at {at})")]
    VanishesOnCircle { at: Complex64 },

    #[error("unbounded symbol: pole on the unit circle at {at}")]
    PoleOnCircle { at: Complex64 },

    #[error("degenerate symbol: {0} is identically zero")]
    ZeroSymbol(&'static str),

    #[error("circle zero at {at}: no invertible outer part (extract the circle factor first)")]
    CircleZero { at: Complex64 },

    #[error("not WH-factorable: zero or pole on the unit circle at {at}")]
    NotFactorable { at: Complex64 },

    #[error("Blaschke zero outside open disk: {zero}")]
    BlaschkeZeroOutsideDisk { zero: Complex64 },

    #[error("unimodular constant has modulus {modulus}, expected 1")]
    NotUnimodular { modulus: f64 },

    #[error(
        "both-sided circle zeros after cancellation: exact engine unsupported, use numeric oracle"
    )]
    BothSidedCircleZeros,

    #[error("function is not a member of the kernel space")]
    NotMember,

    #[error("ambient mismatch: cannot compare an H2+ space with an H2- space")]
    AmbientMismatch,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("pole inside the region where {0} must be analytic")]
    PoleInRegion(&'static str),

    #[error("point {t} is not on the unit circle")]
    NotOnCircle { t: Complex64 },

    #[error("assembled symbol is unbounded near {t} (growth ratio {ratio:.3e})")]
    UnboundedAssembly { t: Complex64, ratio: f64 },

    #[error("finite-rank data not admissible: {0}")]
    Inadmissible(String),

    #[error("S-triviality not established: {0}")]
    TrivialityInconclusive(String),

    #[error("multiplier pole too close to the unit circle for truncation order {order}")]
    PoleTooClose { order: usize },

    #[error("truncation order must be at least 1")]
    BadOrder,
}

pub type Result<T> = std::result::Result<T, Error>;
