//! Brute-force discretization of the same operators on truncated Fourier
//! grids, used to cross-check the exact engine.
//!
//! Nothing here consults the exact kernel algorithms: symbols are sampled on
//! the circle, their Fourier coefficients assembled into rectangular
//! matrices, and null spaces read off from singular value decompositions.

mod eval;
mod laurent;
mod model;
mod nullspace;

pub use eval::{
    compare_with_oracle, decay_radius, evaluate_kernelspace, laurent_coefficients,
    numeric_hankel_kernel, numeric_paired_kernel_minus, numeric_paired_kernel_plus,
    numeric_toeplitz_kernel, order_for_decay, Comparison, OracleKernel, MAX_ORDER, TAIL_TOL,
};
pub use laurent::{
    hankel_matrix, paired_matrix, sampled_coefficients, symbol_to_matrix, toeplitz_matrix,
    FourierSeries, LaurentMatrix, LaurentVector,
};
pub use model::{
    atto_matrix, compare_atto, kernel_coordinates, quadrature_nodes, AttoComparison,
    ModelSpaceBasis,
};
pub use nullspace::{
    numeric_kernel, numeric_kernel_scaled, orthonormalize, subspace_angle, Angle, NumericKernel,
    DEFAULT_CUTOFF, MIN_GAP,
};
