//! Model spaces `K_θ` of finite Blaschke products sampled on the circle, and
//! the matrix of a truncated Toeplitz operator between two of them.

use std::f64::consts::PI;

use nalgebra::{Cholesky, DMatrix, DVector};
use num_complex::Complex64;

use super::nullspace::{numeric_kernel, orthonormalize, subspace_angle, Angle};
use crate::error::{Error, Result};
use crate::factorization::BlaschkeProduct;
use crate::kernel::KernelSpace;
use crate::rational::{CircleTol, RationalFunction};

/// Minimum number of quadrature nodes.
const MIN_NODES: usize = 1024;
/// Nodes per unit of Blaschke degree.
const NODES_PER_DEGREE: usize = 64;

pub fn quadrature_nodes(degree: usize) -> usize {
    (NODES_PER_DEGREE * degree).max(MIN_NODES)
}

/// Orthonormal basis of `K_θ` obtained from `zʲ / Π(1 − conj(λᵢ) z)` by a
/// Gram–Cholesky step, stored as its values at `n` equispaced nodes.
#[derive(Clone, Debug)]
pub struct ModelSpaceBasis {
    nodes: Vec<Complex64>,
    /// `values[(i, j)] = e_j(node_i)`.
    values: DMatrix<Complex64>,
}

impl ModelSpaceBasis {
    pub fn new(theta: &BlaschkeProduct, n: usize) -> Result<Self> {
        let nodes: Vec<Complex64> = (0..n)
            .map(|i| Complex64::from_polar(1.0, 2.0 * PI * i as f64 / n as f64))
            .collect();
        let d = theta.degree();
        let raw = DMatrix::from_fn(n, d, |i, j| {
            let z = nodes[i];
            let den: Complex64 = theta
                .zeros()
                .iter()
                .map(|l| Complex64::new(1.0, 0.0) - l.conj() * z)
                .product();
            z.powi(j as i32) / den
        });
        if d == 0 {
            return Ok(Self { nodes, values: raw });
        }
        let gram = (raw.adjoint() * &raw).unscale(n as f64);
        let chol = Cholesky::new(gram).ok_or_else(|| {
            Error::Precondition("model-space Gram matrix not positive definite".into())
        })?;
        // E = F L^{-H}, i.e. Eᴴ = L^{-1} Fᴴ.
        let e_adj = chol
            .l()
            .solve_lower_triangular(&raw.adjoint())
            .ok_or_else(|| Error::Precondition("singular Cholesky factor".into()))?;
        Ok(Self {
            nodes,
            values: e_adj.adjoint(),
        })
    }

    pub fn dim(&self) -> usize {
        self.values.ncols()
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    pub fn values(&self) -> &DMatrix<Complex64> {
        &self.values
    }

    /// `⟨f, e_j⟩` by the trapezoid rule.
    pub fn coordinates(&self, f: impl Fn(Complex64) -> Complex64) -> DVector<Complex64> {
        let samples = DVector::from_iterator(self.nodes.len(), self.nodes.iter().map(|z| f(*z)));
        (self.values.adjoint() * samples).unscale(self.nodes.len() as f64)
    }

    /// `‖f − P_θ f‖ / ‖f‖`, measuring how far `f` is from `K_θ`.
    pub fn relative_residual(&self, f: impl Fn(Complex64) -> Complex64) -> f64 {
        let samples = DVector::from_iterator(self.nodes.len(), self.nodes.iter().map(|z| f(*z)));
        let projected = &self.values * self.coordinates(f);
        (&samples - projected).norm() / samples.norm().max(f64::MIN_POSITIVE)
    }
}

/// `A^{θ,α}_φ = P_α φ|_{K_θ}` in orthonormal bases: a `deg α × deg θ` matrix.
pub fn atto_matrix(
    theta: &BlaschkeProduct,
    alpha: &BlaschkeProduct,
    phi: &RationalFunction,
    tol: CircleTol,
) -> Result<(DMatrix<Complex64>, ModelSpaceBasis)> {
    phi.check_bounded(tol)?;
    let n = quadrature_nodes(theta.degree().max(alpha.degree()));
    let kt = ModelSpaceBasis::new(theta, n)?;
    let ka = ModelSpaceBasis::new(alpha, n)?;
    let weights = DVector::from_iterator(n, kt.nodes.iter().map(|z| phi.eval(*z)));
    let weighted = DMatrix::from_fn(n, kt.dim(), |i, j| weights[i] * kt.values[(i, j)]);
    let a = (ka.values.adjoint() * weighted).unscale(n as f64);
    Ok((a, kt))
}

/// Orthonormal coordinates of `K` in the basis of `K_θ`, and the largest
/// relative residual of a basis function of `K` outside `K_θ`.
pub fn kernel_coordinates(kt: &ModelSpaceBasis, k: &KernelSpace) -> (DMatrix<Complex64>, f64) {
    let basis = k.basis();
    let mut worst: f64 = 0.0;
    let mut coords = DMatrix::zeros(kt.dim(), basis.len());
    for (j, f) in basis.iter().enumerate() {
        worst = worst.max(kt.relative_residual(|z| f.eval(z)));
        coords.set_column(j, &kt.coordinates(|z| f.eval(z)));
    }
    (orthonormalize(&coords, 1e-12), worst)
}

/// Exact ATTO kernel against the numeric null space of [`atto_matrix`].
#[derive(Clone, Debug)]
pub struct AttoComparison {
    pub angle: Angle,
    pub exact_dim: usize,
    pub numeric_dim: usize,
    pub gap: f64,
    /// Distance of the exact kernel from `K_θ`.
    pub residual: f64,
}

pub fn compare_atto(
    theta: &BlaschkeProduct,
    alpha: &BlaschkeProduct,
    phi: &RationalFunction,
    exact: &KernelSpace,
    cutoff: f64,
    tol: CircleTol,
) -> Result<AttoComparison> {
    let (a, kt) = atto_matrix(theta, alpha, phi, tol)?;
    let nk = numeric_kernel(&a, cutoff);
    let (coords, residual) = kernel_coordinates(&kt, exact);
    Ok(AttoComparison {
        angle: subspace_angle(&coords, &nk.basis),
        exact_dim: exact.dim(),
        numeric_dim: nk.dim(),
        gap: nk.gap,
        residual,
    })
}
