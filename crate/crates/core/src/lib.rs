//! Kernels of Toeplitz operators, paired operators `aP⁺ + bP⁻` and
//! asymmetric truncated Toeplitz operators on the unit circle, for rational
//! symbols and finite Blaschke products.
//!
//! The exact engine ([`kernel`], [`atto`]) works structurally, by root
//! bookkeeping on rational functions in double precision. The [`oracle`]
//! module discretizes the same operators on truncated Fourier grids and
//! extracts null spaces by SVD; it shares no code with the exact engine
//! beyond evaluating rational functions.

pub mod atto;
pub mod error;
pub mod factorization;
pub mod kernel;
pub mod oracle;
pub mod poly;
pub mod rational;

pub use atto::{AttoSymbol, FiniteRankData, TaylorPoint, Triviality};
pub use error::{Error, Result};
pub use factorization::{BlaschkeProduct, WienerHopfFactors};
pub use kernel::{Ambient, Inclusion, KernelSpace};
pub use poly::Polynomial;
pub use rational::{CircleTol, Location, RationalFunction, SymbolPair};
