#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use pairker::{BlaschkeProduct, CircleTol, RationalFunction};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn r(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn tol() -> CircleTol {
    CircleTol::default()
}

pub fn circle(n: usize) -> impl Iterator<Item = Complex64> {
    (0..n).map(move |k| Complex64::from_polar(1.0, 2.0 * PI * (k as f64 + 0.25) / n as f64))
}

/// Winding number from the accumulated argument increments along `n` circle
/// samples.
pub fn sampled_winding(f: impl Fn(Complex64) -> Complex64, n: usize) -> i64 {
    let values: Vec<Complex64> = circle(n).map(f).collect();
    let total: f64 = (0..n)
        .map(|k| (values[(k + 1) % n] / values[k]).arg())
        .sum();
    (total / (2.0 * PI)).round() as i64
}

pub fn max_diff(
    f: impl Fn(Complex64) -> Complex64,
    g: impl Fn(Complex64) -> Complex64,
    n: usize,
) -> f64 {
    circle(n).map(|z| (f(z) - g(z)).norm()).fold(0.0, f64::max)
}

pub fn inside(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(rng.gen_range(0.05..0.8), rng.gen_range(0.0..2.0 * PI))
}

pub fn outside(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(rng.gen_range(1.25..3.0), rng.gen_range(0.0..2.0 * PI))
}

pub fn unimodular(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI))
}

pub fn anywhere(rng: &mut ChaCha8Rng) -> Complex64 {
    if rng.gen_bool(0.5) {
        inside(rng)
    } else {
        outside(rng)
    }
}

pub fn points(
    rng: &mut ChaCha8Rng,
    n: usize,
    f: fn(&mut ChaCha8Rng) -> Complex64,
) -> Vec<Complex64> {
    (0..n).map(|_| f(rng)).collect()
}

pub fn gain(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..2.0 * PI))
}

pub fn blaschke(rng: &mut ChaCha8Rng, degree: usize) -> BlaschkeProduct {
    BlaschkeProduct::from_zeros(points(rng, degree, inside), tol()).unwrap()
}

/// A rational symbol without zeros or poles on the circle, with
/// `zeros_in` zeros and `poles_in` poles inside the disk and a few more
/// outside. Its winding number is `zeros_in − poles_in`.
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

pub fn polynomial_with_roots(rng: &mut ChaCha8Rng, n: usize) -> RationalFunction {
    RationalFunction::from_factors(gain(rng), points(rng, n, anywhere), Vec::new())
}
