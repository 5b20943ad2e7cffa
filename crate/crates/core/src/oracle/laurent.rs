//! Fourier-coefficient representations of functions and operators on the
//! circle, truncated to finitely many modes.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::rational::{CircleTol, RationalFunction, SymbolPair};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Relative size below which a Fourier coefficient is treated as zero.
const COEFF_FLOOR: f64 = 1e-16;
const MIN_SAMPLES: usize = 64;
const MAX_SAMPLES: usize = 1 << 18;

/// `Σ c_k z^k` for `−M ≤ k ≤ M`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentVector {
    order: usize,
    coeffs: DVector<Complex64>,
}

impl LaurentVector {
    pub fn zeros(order: usize) -> Self {
        Self {
            order,
            coeffs: DVector::zeros(2 * order + 1),
        }
    }

    /// Coefficients supplied by `f(k)` for each `k ∈ −M..=M`.
    pub fn from_fn(order: usize, mut f: impl FnMut(i64) -> Complex64) -> Self {
        let m = order as i64;
        Self {
            order,
            coeffs: DVector::from_iterator(2 * order + 1, (-m..=m).map(&mut f)),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, k: i64) -> Complex64 {
        let m = self.order as i64;
        if k.abs() > m {
            ZERO
        } else {
            self.coeffs[(k + m) as usize]
        }
    }

    pub fn set(&mut self, k: i64, value: Complex64) {
        let m = self.order as i64;
        self.coeffs[(k + m) as usize] = value;
    }

    pub fn coeffs(&self) -> &DVector<Complex64> {
        &self.coeffs
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }

    /// Analytic projection: negative modes zeroed.
    pub fn p_plus(&self) -> Self {
        Self::from_fn(self.order, |k| if k >= 0 { self.get(k) } else { ZERO })
    }

    /// Anti-analytic projection: nonnegative modes zeroed.
    pub fn p_minus(&self) -> Self {
        Self::from_fn(self.order, |k| if k < 0 { self.get(k) } else { ZERO })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order, "orders differ");
        Self {
            order: self.order,
            coeffs: &self.coeffs + &other.coeffs,
        }
    }
}

/// Fourier coefficients of a bounded rational function, computed from
/// equispaced circle samples.
#[derive(Clone, Debug)]
pub struct FourierSeries {
    /// `coeffs[k + bandwidth]` is the coefficient of `z^k`.
    coeffs: Vec<Complex64>,
    bandwidth: usize,
    /// Largest relative coefficient in the upper half of the sampled band;
    /// bounds the aliasing and truncation error.
    tail: f64,
}

impl FourierSeries {
    /// Coefficients of `f`, keeping `|k| ≤ max_band`.
    pub fn of(f: &RationalFunction, max_band: usize, tol: CircleTol) -> Result<Self> {
        f.check_bounded(tol)?;
        let mut n = (4 * max_band).next_power_of_two().max(MIN_SAMPLES);
        loop {
            let raw = sampled_coefficients(|z| f.eval(z), n);
            let scale = raw.iter().map(|c| c.norm()).fold(0.0, f64::max);
            let quarter = n / 4;
            let tail = (quarter..=n / 2)
                .flat_map(|k| [raw[k], raw[(n - k) % n]])
                .map(|c| c.norm())
                .fold(0.0, f64::max)
                / scale.max(f64::MIN_POSITIVE);
            if tail < 1e-15 || n >= MAX_SAMPLES {
                return Ok(Self::truncate(&raw, scale, max_band.min(quarter), tail));
            }
            n *= 2;
        }
    }

    fn truncate(raw: &[Complex64], scale: f64, cap: usize, tail: f64) -> Self {
        let n = raw.len();
        let at = |k: i64| raw[k.rem_euclid(n as i64) as usize];
        let bandwidth = (0..=cap as i64)
            .rev()
            .find(|&k| at(k).norm() > COEFF_FLOOR * scale || at(-k).norm() > COEFF_FLOOR * scale)
            .unwrap_or(0) as usize;
        let b = bandwidth as i64;
        Self {
            coeffs: (-b..=b).map(at).collect(),
            bandwidth,
            tail,
        }
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        let b = self.bandwidth as i64;
        if k.abs() > b {
            ZERO
        } else {
            self.coeffs[(k + b) as usize]
        }
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn tail(&self) -> f64 {
        self.tail
    }
}

/// `ĉ_k = (1/n) Σ f(ωʲ) ω^{−jk}`, returned in FFT order (index `k mod n`).
pub fn sampled_coefficients(f: impl Fn(Complex64) -> Complex64, n: usize) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = (0..n)
        .map(|j| f(Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64)))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let inv = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= inv);
    buf
}

/// Dense matrix between two ranges of Fourier modes.
#[derive(Clone, Debug)]
pub struct LaurentMatrix {
    pub matrix: DMatrix<Complex64>,
    pub rows: RangeInclusive<i64>,
    pub cols: RangeInclusive<i64>,
    pub provenance: String,
}

impl LaurentMatrix {
    fn build(
        rows: RangeInclusive<i64>,
        cols: RangeInclusive<i64>,
        provenance: String,
        entry: impl Fn(i64, i64) -> Complex64,
    ) -> Self {
        let (r0, c0) = (*rows.start(), *cols.start());
        let nr = (rows.end() - r0 + 1) as usize;
        let nc = (cols.end() - c0 + 1) as usize;
        let matrix = DMatrix::from_fn(nr, nc, |i, j| entry(r0 + i as i64, c0 + j as i64));
        Self {
            matrix,
            rows,
            cols,
            provenance,
        }
    }

    /// Column index of mode `k`.
    pub fn col_of(&self, k: i64) -> usize {
        (k - self.cols.start()) as usize
    }

    pub fn row_of(&self, k: i64) -> usize {
        (k - self.rows.start()) as usize
    }
}

/// Multiplication by `f` on the modes `−M..=M`: entry `(j, k) = f̂_{j−k}`.
pub fn symbol_to_matrix(
    f: &RationalFunction,
    order: usize,
    tol: CircleTol,
) -> Result<LaurentMatrix> {
    if order == 0 {
        return Err(Error::BadOrder);
    }
    let s = FourierSeries::of(f, 2 * order, tol)?;
    let m = order as i64;
    Ok(LaurentMatrix::build(
        -m..=m,
        -m..=m,
        format!("multiplication by {f}, M={order}"),
        |j, k| s.coeff(j - k),
    ))
}

/// `T_g` from the modes `0..=M` into every analytic mode reachable by the
/// truncated symbol, so no product coefficient is discarded.
pub fn toeplitz_matrix(
    g: &RationalFunction,
    order: usize,
    tol: CircleTol,
) -> Result<LaurentMatrix> {
    if order == 0 {
        return Err(Error::BadOrder);
    }
    let s = FourierSeries::of(g, 2 * order, tol)?;
    let m = order as i64;
    let w = s.bandwidth() as i64;
    Ok(LaurentMatrix::build(
        0..=m + w,
        0..=m,
        format!("Toeplitz T_g, g={g}, M={order}"),
        |j, k| s.coeff(j - k),
    ))
}

/// `aP⁺ + bP⁻` from the modes `−M..=M` into all reachable modes.
pub fn paired_matrix(pair: &SymbolPair, order: usize, tol: CircleTol) -> Result<LaurentMatrix> {
    if order == 0 {
        return Err(Error::BadOrder);
    }
    let sa = FourierSeries::of(&pair.a, 2 * order, tol)?;
    let sb = FourierSeries::of(&pair.b, 2 * order, tol)?;
    let m = order as i64;
    let w = sa.bandwidth().max(sb.bandwidth()) as i64;
    Ok(LaurentMatrix::build(
        -m - w..=m + w,
        -m..=m,
        format!("paired S_ab, a={}, b={}, M={order}", pair.a, pair.b),
        |j, k| {
            if k >= 0 {
                sa.coeff(j - k)
            } else {
                sb.coeff(j - k)
            }
        },
    ))
}

/// Hankel operator `p ↦ P⁻(f p)` from the modes `0..=M` into the negative
/// modes reachable by the truncated symbol.
pub fn hankel_matrix(f: &RationalFunction, order: usize, tol: CircleTol) -> Result<LaurentMatrix> {
    if order == 0 {
        return Err(Error::BadOrder);
    }
    let s = FourierSeries::of(f, 2 * order, tol)?;
    let w = (s.bandwidth() as i64).max(1);
    let m = order as i64;
    Ok(LaurentMatrix::build(
        -w..=-1,
        0..=m,
        format!("Hankel H_f, f={f}, M={order}"),
        |j, k| s.coeff(j - k),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn shift_and_identity() {
        let tol = CircleTol::default();
        let s = symbol_to_matrix(&RationalFunction::z(), 2, tol).unwrap();
        let expect = DMatrix::from_fn(5, 5, |j, k| if j == k + 1 { c(1.0) } else { c(0.0) });
        assert!((&s.matrix - expect).norm() < 1e-14);

        let id = symbol_to_matrix(&RationalFunction::one(), 3, tol).unwrap();
        assert!((&id.matrix - DMatrix::identity(7, 7)).norm() < 1e-14);
    }

    #[test]
    fn geometric_symbol_has_geometric_diagonals() {
        let tol = CircleTol::default();
        let f = RationalFunction::from_factors(c(-2.0), vec![], vec![c(2.0)]); // 1/(1 − z/2)
        let a = symbol_to_matrix(&f, 8, tol).unwrap();
        for j in 0..17 {
            for k in 0..17 {
                let expect = if j >= k {
                    0.5f64.powi((j - k) as i32)
                } else {
                    0.0
                };
                assert!((a.matrix[(j, k)] - c(expect)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn projections_are_complementary() {
        let v = LaurentVector::from_fn(4, |k| Complex64::new(k as f64, 1.0));
        assert_eq!(v.p_plus().add(&v.p_minus()), v);
        assert_eq!(v.p_plus().p_plus(), v.p_plus());
        assert_eq!(v.p_minus().p_minus(), v.p_minus());
        assert_eq!(v.p_plus().p_minus(), LaurentVector::zeros(4));
    }
}
