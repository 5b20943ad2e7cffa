//! Bridges between exact kernel spaces and truncated coefficient vectors,
//! plus adaptive numeric kernels of Toeplitz and paired operators.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::laurent::{
    hankel_matrix, paired_matrix, sampled_coefficients, toeplitz_matrix, FourierSeries,
    LaurentMatrix,
};
use super::nullspace::{
    numeric_kernel, numeric_kernel_scaled, orthonormalize, subspace_angle, Angle, NumericKernel,
};
use crate::error::{Error, Result};
use crate::kernel::KernelSpace;
use crate::rational::{CircleTol, Location, RationalFunction, SymbolPair};

/// Hard cap on the truncation order.
pub const MAX_ORDER: usize = 1024;
/// Relative coefficient energy allowed outside the truncation window.
pub const TAIL_TOL: f64 = 1e-9;
/// Target for the geometric leakage bound `ρ^M · M` used to pick orders.
const LEAKAGE_TARGET: f64 = 1e-10;

/// Coefficients of `f` on the modes `−M..=M` as a column, together with the
/// relative energy of the modes outside the window.
pub fn laurent_coefficients(f: &RationalFunction, order: usize) -> (Vec<Complex64>, f64) {
    let n = (8 * order).next_power_of_two();
    let raw = sampled_coefficients(|z| f.eval(z), n);
    let m = order as i64;
    let at = |k: i64| raw[k.rem_euclid(n as i64) as usize];
    let inside: Vec<Complex64> = (-m..=m).map(at).collect();
    let total: f64 = raw.iter().map(|c| c.norm_sqr()).sum();
    let kept: f64 = inside.iter().map(|c| c.norm_sqr()).sum();
    let tail = ((total - kept).max(0.0) / total.max(f64::MIN_POSITIVE)).sqrt();
    (inside, tail)
}

/// Orthonormal coefficient basis (modes `−M..=M`) of `K`, raising `M` by
/// doubling until every basis function's tail is below [`TAIL_TOL`].
/// Returns the basis and the order actually used.
pub fn evaluate_kernelspace(
    k: &KernelSpace,
    order: usize,
    tol: CircleTol,
) -> Result<(DMatrix<Complex64>, usize)> {
    if order == 0 {
        return Err(Error::BadOrder);
    }
    k.multiplier().check_bounded(tol)?;
    let mut m = order;
    loop {
        let columns: Vec<(Vec<Complex64>, f64)> = k
            .basis()
            .iter()
            .map(|f| laurent_coefficients(f, m))
            .collect();
        let worst = columns.iter().map(|c| c.1).fold(0.0, f64::max);
        if worst < TAIL_TOL {
            let raw = DMatrix::from_fn(2 * m + 1, columns.len(), |i, j| columns[j].0[i]);
            return Ok((orthonormalize(&raw, 1e-13), m));
        }
        if 2 * m > MAX_ORDER {
            return Err(Error::PoleTooClose { order: m });
        }
        m *= 2;
    }
}

/// Decay radius of Fourier coefficients of functions built from these
/// symbols: the largest `min(|r|, 1/|r|)` over their off-circle zeros and
/// poles other than 0.
pub fn decay_radius(symbols: &[&RationalFunction], tol: CircleTol) -> f64 {
    symbols
        .iter()
        .flat_map(|f| f.zeros().iter().chain(f.poles()))
        .filter(|r| tol.locate(**r) != Location::OnCircle && r.norm() > 0.0)
        .map(|r| r.norm().min(1.0 / r.norm()))
        .fold(0.0, f64::max)
}

/// Smallest order of the form `requested · 2^j` whose geometric leakage
/// `ρ^M · M` is below target, capped at [`MAX_ORDER`].
pub fn order_for_decay(requested: usize, rho: f64) -> usize {
    let mut m = requested.max(1);
    while m < MAX_ORDER && rho > 0.0 && rho.powi(m as i32) * m as f64 > LEAKAGE_TARGET {
        m *= 2;
    }
    m.min(MAX_ORDER)
}

/// A numeric null space laid out on the modes `−M..=M`.
#[derive(Clone, Debug)]
pub struct OracleKernel {
    pub basis: DMatrix<Complex64>,
    pub order: usize,
    pub gap: f64,
    pub ill_separated: bool,
}

impl OracleKernel {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }
}

fn adaptive(
    order: usize,
    mut attempt: impl FnMut(usize) -> Result<OracleKernel>,
) -> Result<OracleKernel> {
    if order == 0 {
        return Err(Error::BadOrder);
    }
    let mut m = order;
    loop {
        let k = attempt(m)?;
        if !k.ill_separated || 2 * m > MAX_ORDER {
            return Ok(k);
        }
        m *= 2;
    }
}

/// Embeds rows indexed by the modes `lo..` into the window `−M..=M`.
fn embed(v: &DMatrix<Complex64>, lo: i64, order: usize) -> DMatrix<Complex64> {
    let m = order as i64;
    DMatrix::from_fn(2 * order + 1, v.ncols(), |i, j| {
        let k = i as i64 - m;
        let r = k - lo;
        if r >= 0 && (r as usize) < v.nrows() {
            v[(r as usize, j)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

fn wrap(nk: NumericKernel, basis: DMatrix<Complex64>, order: usize) -> OracleKernel {
    OracleKernel {
        basis,
        order,
        gap: nk.gap,
        ill_separated: nk.ill_separated,
    }
}

/// Numeric `ker T_g`, starting at `order` and doubling while the spectral
/// gap is ill-separated.
pub fn numeric_toeplitz_kernel(
    g: &RationalFunction,
    order: usize,
    cutoff: f64,
    tol: CircleTol,
) -> Result<OracleKernel> {
    adaptive(order, |m| {
        let a = toeplitz_matrix(g, m, tol)?;
        let nk = numeric_kernel(&a.matrix, cutoff);
        let basis = embed(&nk.basis, 0, m);
        Ok(wrap(nk, basis, m))
    })
}

fn numeric_paired(
    pair: &SymbolPair,
    order: usize,
    cutoff: f64,
    tol: CircleTol,
    plus: bool,
) -> Result<OracleKernel> {
    adaptive(order, |m| {
        let a = paired_matrix(pair, m, tol)?;
        let nk = numeric_kernel(&a.matrix, cutoff);
        let mi = m as i64;
        let mut full = embed(&nk.basis, -mi, m);
        for i in 0..full.nrows() {
            let k = i as i64 - mi;
            if (k >= 0) != plus {
                full.row_mut(i).fill(Complex64::new(0.0, 0.0));
            }
        }
        // The projection is injective on the kernel, so the rank survives.
        let basis = orthonormalize(&full, 1e-12);
        let basis = basis.columns(0, basis.ncols().min(nk.dim())).into_owned();
        Ok(wrap(nk, basis, m))
    })
}

/// Numeric `ker⁺ S_{a,b}`: analytic parts of the null vectors of `S_{a,b}`.
pub fn numeric_paired_kernel_plus(
    pair: &SymbolPair,
    order: usize,
    cutoff: f64,
    tol: CircleTol,
) -> Result<OracleKernel> {
    numeric_paired(pair, order, cutoff, tol, true)
}

/// Numeric `ker⁻ S_{a,b}`: anti-analytic parts of the null vectors.
pub fn numeric_paired_kernel_minus(
    pair: &SymbolPair,
    order: usize,
    cutoff: f64,
    tol: CircleTol,
) -> Result<OracleKernel> {
    numeric_paired(pair, order, cutoff, tol, false)
}

/// Numeric kernel of the Hankel matrix of `f` on the modes `0..=M`, with the
/// cutoff taken relative to the norm bound `Σ|f̂_k|` of multiplication by
/// `f`. Rows are the negative modes; columns are the modes `0..=M`.
pub fn numeric_hankel_kernel(
    f: &RationalFunction,
    order: usize,
    cutoff: f64,
    tol: CircleTol,
) -> Result<(NumericKernel, LaurentMatrix)> {
    let h = hankel_matrix(f, order, tol)?;
    let series = FourierSeries::of(f, 2 * order, tol)?;
    let b = series.bandwidth() as i64;
    let scale: f64 = (-b..=b).map(|k| series.coeff(k).norm()).sum();
    Ok((numeric_kernel_scaled(&h.matrix, cutoff, scale), h))
}

/// Outcome of comparing an exact kernel with a numeric one.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub angle: Angle,
    pub exact_dim: usize,
    pub numeric_dim: usize,
    pub order: usize,
    pub gap: f64,
    pub ill_separated: bool,
}

impl Comparison {
    pub fn agrees(&self, max_angle: f64) -> bool {
        self.exact_dim == self.numeric_dim && self.angle.radians < max_angle
    }
}

/// Principal angle between `exact` and the kernel produced by `numeric` at a
/// common truncation order. The order starts at `requested`, is raised for
/// the decay radius `rho`, and is raised again whenever either side needs
/// more modes.
pub fn compare_with_oracle(
    exact: &KernelSpace,
    requested: usize,
    rho: f64,
    tol: CircleTol,
    mut numeric: impl FnMut(usize) -> Result<OracleKernel>,
) -> Result<Comparison> {
    let mut m = order_for_decay(requested, rho);
    loop {
        let nk = numeric(m)?;
        let (basis, used) = evaluate_kernelspace(exact, nk.order, tol)?;
        if used > nk.order {
            m = used;
            continue;
        }
        return Ok(Comparison {
            angle: subspace_angle(&basis, &nk.basis),
            exact_dim: exact.dim(),
            numeric_dim: nk.dim(),
            order: nk.order,
            gap: nk.gap,
            ill_separated: nk.ill_separated,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Ambient;
    use crate::oracle::nullspace::DEFAULT_CUTOFF;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn polynomial_space_evaluates_to_unit_vectors() {
        let (b, m) =
            evaluate_kernelspace(&KernelSpace::polynomials(3), 8, CircleTol::default()).unwrap();
        assert_eq!(m, 8);
        let e = DMatrix::from_fn(17, 3, |i, j| if i == 8 + j { c(1.0) } else { c(0.0) });
        assert!(subspace_angle(&b, &e).radians < 1e-14);

        let (z, _) =
            evaluate_kernelspace(&KernelSpace::zero(Ambient::Plus), 8, CircleTol::default())
                .unwrap();
        assert_eq!(z.ncols(), 0);
    }

    #[test]
    fn rational_multiplier_tail() {
        let u = RationalFunction::from_factors(c(1.0), vec![], vec![c(2.0)]);
        let k = KernelSpace::new(u, 2, Ambient::Plus);
        let (b, m) = evaluate_kernelspace(&k, 64, CircleTol::default()).unwrap();
        assert_eq!((b.ncols(), m), (2, 64));
    }

    #[test]
    fn pole_too_close() {
        let u = RationalFunction::from_factors(c(1.0), vec![], vec![c(1.0 + 1e-4)]);
        let k = KernelSpace::new(u, 1, Ambient::Plus);
        assert!(matches!(
            evaluate_kernelspace(&k, 64, CircleTol::default()),
            Err(Error::PoleTooClose { .. })
        ));
    }

    #[test]
    fn paired_shift_kernel() {
        let tol = CircleTol::default();
        let pair =
            SymbolPair::new(RationalFunction::z_pow(-3), RationalFunction::one(), tol).unwrap();
        let k = numeric_paired_kernel_plus(&pair, 32, DEFAULT_CUTOFF, tol).unwrap();
        assert_eq!(k.dim(), 3);
        let (exact, _) = evaluate_kernelspace(&KernelSpace::polynomials(3), 32, tol).unwrap();
        assert!(subspace_angle(&exact, &k.basis).radians < 1e-10);
    }

    #[test]
    fn order_selection() {
        assert_eq!(order_for_decay(64, 0.0), 64);
        assert_eq!(order_for_decay(64, 0.5), 64);
        assert!(order_for_decay(64, 0.8) >= 128);
    }
}
