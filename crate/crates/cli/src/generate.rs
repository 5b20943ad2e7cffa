//! Random instances for the verification suites.
//!
//! Blaschke zeros are uniform in the disk `|z| ≤ 0.8`. Zeros and poles of
//! rational symbols are uniform (by area) in one of the annuli
//! `0 ≤ |z| ≤ 0.8` or `1.25 ≤ |z| ≤ 3`, which keeps every off-circle root at
//! distance at least 0.2 from the circle. Circle zeros are uniform on the
//! circle.

use std::f64::consts::PI;

use num_complex::Complex64;
use pairker::atto::{build_finite_rank_symbol, AttoSymbol, TaylorPoint};
use pairker::{BlaschkeProduct, CircleTol, RationalFunction, SymbolPair};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::expr::{blaschke_to_expr, rational_to_expr};

pub const INNER_RADIUS: f64 = 0.8;
pub const OUTER_ANNULUS: (f64, f64) = (1.25, 3.0);

/// Uniform by area in `lo ≤ |z| ≤ hi`.
pub fn annulus_point(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Complex64 {
    let r = rng.gen_range(lo * lo..=hi * hi).sqrt();
    Complex64::from_polar(r, rng.gen_range(0.0..2.0 * PI))
}

pub fn inside(rng: &mut ChaCha8Rng) -> Complex64 {
    annulus_point(rng, 0.0, INNER_RADIUS)
}

pub fn outside(rng: &mut ChaCha8Rng) -> Complex64 {
    annulus_point(rng, OUTER_ANNULUS.0, OUTER_ANNULUS.1)
}

/// Either annulus with equal probability.
pub fn off_circle(rng: &mut ChaCha8Rng) -> Complex64 {
    if rng.gen_bool(0.5) {
        inside(rng)
    } else {
        outside(rng)
    }
}

pub fn unimodular(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI))
}

pub fn gain(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..2.0 * PI))
}

pub fn points(
    rng: &mut ChaCha8Rng,
    n: usize,
    f: fn(&mut ChaCha8Rng) -> Complex64,
) -> Vec<Complex64> {
    (0..n).map(|_| f(rng)).collect()
}

pub fn blaschke(rng: &mut ChaCha8Rng, degree: usize, tol: CircleTol) -> BlaschkeProduct {
    BlaschkeProduct::from_zeros(points(rng, degree, inside), tol)
        .expect("zeros are drawn inside the disk")
}

/// No zeros or poles on the circle; `zeros_in` zeros and `poles_in` poles
/// inside, up to two of each outside. Winding number `zeros_in − poles_in`.
pub fn off_circle_rational(
    rng: &mut ChaCha8Rng,
    zeros_in: usize,
    poles_in: usize,
) -> RationalFunction {
    let mut zeros = points(rng, zeros_in, inside);
    let mut poles = points(rng, poles_in, inside);
    let (nz, np) = (rng.gen_range(0..3), rng.gen_range(0..3));
    zeros.extend(points(rng, nz, outside));
    poles.extend(points(rng, np, outside));
    RationalFunction::from_factors(gain(rng), zeros, poles)
}

/// A symbol nonvanishing on the circle with a power of `z` mixed in.
pub fn toeplitz_symbol(rng: &mut ChaCha8Rng) -> RationalFunction {
    let (a, b) = (rng.gen_range(0..4), rng.gen_range(0..4));
    let f = off_circle_rational(rng, a, b);
    let shift = rng.gen_range(-3..3);
    &f * &RationalFunction::z_pow(shift)
}

/// A pair with at most one side vanishing on the circle.
pub fn oracle_pair(rng: &mut ChaCha8Rng, tol: CircleTol) -> SymbolPair {
    let mut a = toeplitz_symbol(rng);
    let mut b = toeplitz_symbol(rng);
    match rng.gen_range(0..3) {
        0 => a = &a * &RationalFunction::linear(unimodular(rng)),
        1 => b = &b * &RationalFunction::linear(unimodular(rng)),
        _ => {}
    }
    SymbolPair::new(a, b, tol).expect("nonzero symbols")
}

/// A pair whose kernel dimension `d` is fixed by construction through the
/// index count: `a` carries `ca` circle zeros and a power of `z` chosen so
/// that the winding of the off-circle part of `a/b` is `−d`. An optional
/// common factor is multiplied onto both sides.
pub fn pair_with_dim(rng: &mut ChaCha8Rng, d: usize, tol: CircleTol) -> SymbolPair {
    let (za, pa) = (rng.gen_range(0..3), rng.gen_range(0..3));
    let (zb, pb) = (rng.gen_range(0..3), rng.gen_range(0..3));
    let ca = rng.gen_range(0..2);
    let a_off = off_circle_rational(rng, za, pa);
    let b = off_circle_rational(rng, zb, pb);
    let circle_zeros = points(rng, ca, unimodular);
    let circle = RationalFunction::from_factors(Complex64::new(1.0, 0.0), circle_zeros, Vec::new());
    let shift = za as i32 - pa as i32 + ca as i32 - (zb as i32 - pb as i32) + d as i32;
    let a = &(&a_off * &circle) * &RationalFunction::z_pow(-shift);
    let (a, b) = if rng.gen_bool(0.5) {
        let n = rng.gen_range(1..3);
        let h = RationalFunction::from_factors(gain(rng), points(rng, n, off_circle), Vec::new());
        (&a * &h, &b * &h)
    } else {
        (a, b)
    };
    SymbolPair::new(a, b, tol).expect("nonzero symbols")
}

/// Finite-rank ATTO data with `N₀ + N₁ + N₂ ≤ 3` and `1 ≤ deg θ ≤ 6`.
#[derive(Clone, Debug)]
pub struct FiniteRankInstance {
    pub theta: BlaschkeProduct,
    pub r_plus: RationalFunction,
    pub r_minus: RationalFunction,
    pub points: Vec<TaylorPoint>,
    pub bound: usize,
}

impl FiniteRankInstance {
    pub fn build(&self, alpha: &BlaschkeProduct, tol: CircleTol) -> pairker::Result<AttoSymbol> {
        build_finite_rank_symbol(
            &self.theta,
            alpha,
            &self.r_plus,
            &self.r_minus,
            &self.points,
            tol,
        )
    }

    pub fn record(&self) -> Vec<(String, String)> {
        let pts: Vec<String> = self
            .points
            .iter()
            .map(|p| format!("(t = {}, n = {})", p.t, p.n))
            .collect();
        vec![
            ("theta".into(), blaschke_to_expr(&self.theta)),
            ("r_plus".into(), rational_to_expr(&self.r_plus)),
            ("r_minus".into(), rational_to_expr(&self.r_minus)),
            ("points".into(), pts.join(", ")),
        ]
    }
}

fn simple_fraction(rng: &mut ChaCha8Rng, pole: Complex64) -> RationalFunction {
    RationalFunction::from_factors(gain(rng), Vec::new(), vec![pole])
}

pub fn finite_rank_instance(rng: &mut ChaCha8Rng, tol: CircleTol) -> FiniteRankInstance {
    let deg_theta = rng.gen_range(1..=6);
    let theta = blaschke(rng, deg_theta, tol);
    let points = if rng.gen_bool(0.5) {
        vec![TaylorPoint {
            t: unimodular(rng),
            n: rng.gen_range(1..=2),
        }]
    } else {
        // Two simple points at least one radian apart.
        let t = unimodular(rng);
        let s = -t * Complex64::from_polar(1.0, rng.gen_range(-1.0..1.0));
        vec![TaylorPoint { t, n: 1 }, TaylorPoint { t: s, n: 1 }]
    };
    let n0: usize = points.iter().map(|p| p.n).sum();
    let (n1, n2) = match (n0, rng.gen_range(0..3)) {
        (1, 0) => (1, 1),
        (_, 1) => (1, 0),
        (_, 2) => (0, 1),
        _ => (0, 0),
    };
    let r_plus = if n1 == 1 {
        let p = outside(rng);
        simple_fraction(rng, p)
    } else {
        RationalFunction::zero()
    };
    let r_minus = if n2 == 1 {
        // Keep D₂₋ off the origin so that it is not confused with the
        // normalizing powers of z.
        let p = annulus_point(rng, 0.05, INNER_RADIUS);
        simple_fraction(rng, p)
    } else {
        RationalFunction::zero()
    };
    FiniteRankInstance {
        theta,
        r_plus,
        r_minus,
        points,
        bound: n0 + n1 + n2,
    }
}

/// `f = A/B` with `A, B` polynomials without common zeros in the closed disk.
#[derive(Clone, Debug)]
pub struct CoronaPair {
    pub a: RationalFunction,
    pub b: RationalFunction,
    /// Degree of the inner part of `B`.
    pub inner_degree: usize,
}

pub fn corona_pair(rng: &mut ChaCha8Rng) -> CoronaPair {
    let k_in = rng.gen_range(0..=3);
    let k_out = rng.gen_range(0..=2);
    let mut b_roots = points(rng, k_in, inside);
    b_roots.extend(points(rng, k_out, outside));
    let b = RationalFunction::from_factors(gain(rng), b_roots, Vec::new());
    let n_a = rng.gen_range(0..=3);
    let a = RationalFunction::from_factors(gain(rng), points(rng, n_a, off_circle), Vec::new());
    CoronaPair {
        a,
        b,
        inner_degree: k_in,
    }
}
