//! The exact engine against the Fourier-truncation oracle on random
//! instances, plus structural checks of the discretization itself.

mod common;

use common::*;
use num_complex::Complex64;
use pairker::kernel::{paired_kernel_plus, toeplitz_kernel};
use pairker::oracle::{
    compare_with_oracle, decay_radius, numeric_paired_kernel_plus, numeric_toeplitz_kernel,
    order_for_decay, symbol_to_matrix, LaurentVector, DEFAULT_CUTOFF,
};
use pairker::{RationalFunction, SymbolPair};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ANGLE: f64 = 1e-6;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_symbol(g: &mut ChaCha8Rng) -> RationalFunction {
    let (a, b) = (g.gen_range(0..4), g.gen_range(0..4));
    let f = off_circle_rational(g, a, b);
    let shift = g.gen_range(-3..3);
    &f * &RationalFunction::z_pow(shift)
}

fn random_pair(g: &mut ChaCha8Rng) -> SymbolPair {
    let mut a = random_symbol(g);
    let mut b = random_symbol(g);
    // A circle zero on at most one side.
    match g.gen_range(0..3) {
        0 => a = &a * &RationalFunction::linear(unimodular(g)),
        1 => b = &b * &RationalFunction::linear(unimodular(g)),
        _ => {}
    }
    SymbolPair::new(a, b, tol()).unwrap()
}

#[test]
fn toeplitz_kernels_match_oracle() {
    let mut g = rng(11);
    for trial in 0..25 {
        let f = random_symbol(&mut g);
        let exact = toeplitz_kernel(&f, tol()).unwrap();
        let rho = decay_radius(&[&f, exact.multiplier()], tol());
        let cmp = compare_with_oracle(&exact, 64, rho, tol(), |m| {
            numeric_toeplitz_kernel(&f, m, DEFAULT_CUTOFF, tol())
        })
        .unwrap();
        assert!(cmp.agrees(ANGLE), "trial {trial}, g = {f}: {cmp:?}");
    }
}

#[test]
fn paired_kernels_match_oracle() {
    let mut g = rng(12);
    for trial in 0..25 {
        let pair = random_pair(&mut g);
        let exact = paired_kernel_plus(&pair, tol()).unwrap();
        let rho = decay_radius(&[&pair.a, &pair.b, exact.multiplier()], tol());
        let cmp = compare_with_oracle(&exact, 64, rho, tol(), |m| {
            numeric_paired_kernel_plus(&pair, m, DEFAULT_CUTOFF, tol())
        })
        .unwrap();
        assert!(
            cmp.agrees(ANGLE),
            "trial {trial}, a = {}, b = {}: {cmp:?}",
            pair.a,
            pair.b
        );
    }
}

#[test]
fn numeric_dimension_is_stable_under_doubling() {
    let mut g = rng(13);
    for _ in 0..6 {
        let pair = random_pair(&mut g);
        // Start from the order the decay radius calls for, as every oracle
        // comparison does; below it leakage sits at the cutoff.
        let m = order_for_decay(64, decay_radius(&[&pair.a, &pair.b], tol()));
        let coarse = numeric_paired_kernel_plus(&pair, m, DEFAULT_CUTOFF, tol()).unwrap();
        let fine = numeric_paired_kernel_plus(&pair, 2 * m, DEFAULT_CUTOFF, tol()).unwrap();
        assert_eq!(coarse.dim(), fine.dim(), "a = {}, b = {}", pair.a, pair.b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn projections_are_idempotent_and_orthogonal(
        order in 1usize..20,
        seed in any::<u64>(),
    ) {
        let mut g = rng(seed);
        let v = LaurentVector::from_fn(order, |_| c(g.gen_range(-1.0..1.0), g.gen_range(-1.0..1.0)));
        prop_assert_eq!(v.p_plus().p_plus(), v.p_plus());
        prop_assert_eq!(v.p_minus().p_minus(), v.p_minus());
        prop_assert_eq!(v.p_plus().p_minus(), LaurentVector::zeros(order));
        prop_assert_eq!(v.p_minus().p_plus(), LaurentVector::zeros(order));
        prop_assert_eq!(v.p_plus().add(&v.p_minus()), v);
    }

    #[test]
    fn multiplication_matrices_are_toeplitz(seed in any::<u64>(), order in 2usize..24) {
        let mut g = rng(seed);
        let f = random_symbol(&mut g);
        let a = symbol_to_matrix(&f, order, tol()).unwrap().matrix;
        let scale = a.iter().map(|x| x.norm()).fold(0.0, f64::max);
        for i in 1..a.nrows() {
            for j in 1..a.ncols() {
                prop_assert!((a[(i, j)] - a[(i - 1, j - 1)]).norm() <= 1e-15 * scale);
            }
        }
        // Diagonals carry the Fourier coefficients computed by direct quadrature.
        let n = 4096;
        let coeff = |k: i64| {
            circle(n)
                .map(|z| f.eval(z) * z.powi(-k as i32))
                .sum::<Complex64>()
                / n as f64
        };
        for k in -2i64..=2 {
            let (i, j) = if k >= 0 { (k as usize, 0) } else { (0, (-k) as usize) };
            prop_assert!((a[(i, j)] - coeff(k)).norm() < 1e-10 * scale.max(1.0));
        }
    }
}
