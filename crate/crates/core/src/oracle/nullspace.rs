//! Numeric null spaces and principal angles.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, SVD};
use num_complex::Complex64;

/// Relative singular-value cutoff separating null directions.
pub const DEFAULT_CUTOFF: f64 = 1e-8;
/// Spectral gaps below this are flagged as ill-separated.
pub const MIN_GAP: f64 = 1e2;

#[derive(Clone, Debug)]
pub struct NumericKernel {
    /// Orthonormal columns spanning the numeric null space.
    pub basis: DMatrix<Complex64>,
    /// Smallest retained singular value over the largest discarded one, or
    /// over the cutoff when nothing is discarded.
    pub gap: f64,
    pub sigma_max: f64,
    pub ill_separated: bool,
}

impl NumericKernel {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }
}

/// Right singular vectors with `σ < cutoff · σ_max`. Tall matrices are
/// reduced by a QR step first; wide matrices are padded with zero rows.
pub fn numeric_kernel(a: &DMatrix<Complex64>, cutoff: f64) -> NumericKernel {
    numeric_kernel_scaled(a, cutoff, 0.0)
}

/// As [`numeric_kernel`], with the cutoff taken relative to
/// `max(σ_max, scale)`. Compressions of a larger operator pass that
/// operator's norm, so a block holding only roundoff is not given rank.
pub fn numeric_kernel_scaled(a: &DMatrix<Complex64>, cutoff: f64, scale: f64) -> NumericKernel {
    let (nr, nc) = a.shape();
    if nc == 0 {
        return NumericKernel {
            basis: DMatrix::zeros(0, 0),
            gap: f64::INFINITY,
            sigma_max: 0.0,
            ill_separated: false,
        };
    }
    let square = if nr > nc {
        a.clone().qr().unpack_r()
    } else if nr < nc {
        let mut padded = DMatrix::zeros(nc, nc);
        padded.rows_mut(0, nr).copy_from(a);
        padded
    } else {
        a.clone()
    };
    let svd = SVD::new(square, false, true);
    let sv = &svd.singular_values;
    let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
    let sigma_max = sv[0];
    let threshold = cutoff * sigma_max.max(scale);
    let rank = sv
        .iter()
        .take_while(|s| **s >= threshold && **s > 0.0)
        .count();
    let null: Vec<usize> = (rank..nc).collect();
    let basis = DMatrix::from_fn(nc, null.len(), |i, j| v_t[(null[j], i)].conj());
    let gap = match (rank, null.len()) {
        (0, _) if sigma_max < threshold => sigma_max.max(f64::MIN_POSITIVE).recip() * threshold,
        (0, _) => f64::INFINITY,
        // Nothing discarded: measure the smallest retained value against
        // the cutoff, which exposes truncation leakage just above it.
        (_, 0) => sv[rank - 1] / threshold,
        _ => sv[rank - 1] / sv[rank].max(f64::EPSILON * sigma_max),
    };
    NumericKernel {
        basis,
        gap,
        sigma_max,
        ill_separated: gap < MIN_GAP,
    }
}

/// Orthonormal basis of the column span, dropping directions below
/// `rel · σ_max`.
pub fn orthonormalize(v: &DMatrix<Complex64>, rel: f64) -> DMatrix<Complex64> {
    if v.ncols() == 0 {
        return v.clone();
    }
    let svd = SVD::new(v.clone(), true, false);
    let u = svd.u.as_ref().expect("left singular vectors requested");
    let smax = svd.singular_values[0];
    let r = svd
        .singular_values
        .iter()
        .take_while(|s| **s > rel * smax && **s > 0.0)
        .count();
    u.columns(0, r).into_owned()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Angle {
    pub radians: f64,
    /// The two subspaces have different dimensions.
    pub dim_mismatch: bool,
}

/// Largest principal angle between the spans of two orthonormal bases with
/// the same number of rows.
pub fn subspace_angle(u: &DMatrix<Complex64>, v: &DMatrix<Complex64>) -> Angle {
    if u.ncols() != v.ncols() {
        return Angle {
            radians: FRAC_PI_2,
            dim_mismatch: true,
        };
    }
    if u.ncols() == 0 {
        return Angle {
            radians: 0.0,
            dim_mismatch: false,
        };
    }
    assert_eq!(u.nrows(), v.nrows(), "ambient dimensions differ");
    // sin θ_max = ‖(I − UUᴴ)V‖₂, accurate for small angles where the
    // arccos of the cosines loses all digits.
    let residual = v - u * (u.adjoint() * v);
    let s = SVD::new(residual, false, false).singular_values[0];
    Angle {
        radians: s.min(1.0).asin(),
        dim_mismatch: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn unit(n: usize, k: usize) -> DMatrix<Complex64> {
        DMatrix::from_fn(n, 1, |i, _| if i == k { c(1.0) } else { c(0.0) })
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let k = numeric_kernel(&DMatrix::identity(5, 5), DEFAULT_CUTOFF);
        assert_eq!(k.dim(), 0);
        assert!(!k.ill_separated);
    }

    #[test]
    fn rank_deficient_kernel() {
        // Columns 0 and 2 are multiples of each other.
        let a = DMatrix::from_row_slice(
            3,
            3,
            &[
                c(1.0),
                c(0.0),
                c(2.0),
                c(0.0),
                c(1.0),
                c(0.0),
                c(1.0),
                c(0.0),
                c(2.0),
            ],
        );
        let k = numeric_kernel(&a, DEFAULT_CUTOFF);
        assert_eq!(k.dim(), 1);
        assert!((&a * &k.basis).norm() < 1e-12);
        let wide = a.rows(0, 2).into_owned();
        assert_eq!(numeric_kernel(&wide, DEFAULT_CUTOFF).dim(), 1);
    }

    #[test]
    fn angles() {
        let e0 = unit(4, 0);
        let e1 = unit(4, 1);
        assert!(subspace_angle(&e0, &e0).radians < 1e-15);
        assert!((subspace_angle(&e0, &e1).radians - FRAC_PI_2).abs() < 1e-15);
        let both = DMatrix::from_columns(&[e0.column(0), e1.column(0)]);
        let mixed = orthonormalize(
            &DMatrix::from_columns(&[(&e0 + &e1).column(0), (&e0 - &e1).column(0)]),
            1e-12,
        );
        assert!(subspace_angle(&both, &mixed).radians < 1e-14);
        assert!(subspace_angle(&both, &e0).dim_mismatch);
    }
}
