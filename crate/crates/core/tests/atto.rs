//! Randomized checks of the ATTO closed form and the Hankel kernels of
//! corona pairs.

mod common;

use common::*;
use nalgebra::DVector;
use num_complex::Complex64;
use pairker::atto::{
    atto_kernel_closed_form, build_finite_rank_symbol, corona_check, AttoSymbol, Side, TaylorPoint,
};
use pairker::factorization::inner_part;
use pairker::kernel::toeplitz_kernel;
use pairker::oracle::{compare_atto, numeric_hankel_kernel, DEFAULT_CUTOFF};
use pairker::{BlaschkeProduct, KernelSpace, Polynomial, RationalFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Instance {
    theta: BlaschkeProduct,
    r_plus: RationalFunction,
    r_minus: RationalFunction,
    points: Vec<TaylorPoint>,
    bound: usize,
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn simple_fraction(g: &mut ChaCha8Rng, pole: Complex64) -> RationalFunction {
    RationalFunction::from_factors(gain(g), Vec::new(), vec![pole])
}

/// Finite-rank data with `N₀ + N₁ + N₂ ≤ 3`.
fn instance(g: &mut ChaCha8Rng) -> Instance {
    let deg_theta = g.gen_range(1..=6);
    let theta = blaschke(g, deg_theta);
    let points = if g.gen_bool(0.5) {
        vec![TaylorPoint {
            t: unimodular(g),
            n: g.gen_range(1..=2),
        }]
    } else {
        let t = unimodular(g);
        vec![
            TaylorPoint { t, n: 1 },
            TaylorPoint {
                t: -t * Complex64::from_polar(1.0, g.gen_range(-1.0..1.0)),
                n: 1,
            },
        ]
    };
    let n0: usize = points.iter().map(|p| p.n).sum();
    let (n1, n2) = match (n0, g.gen_range(0..3)) {
        (1, 0) => (1, 1),
        (_, 1) => (1, 0),
        (_, 2) => (0, 1),
        _ => (0, 0),
    };
    let r_plus = if n1 == 1 {
        let p = outside(g);
        simple_fraction(g, p)
    } else {
        RationalFunction::zero()
    };
    let r_minus = if n2 == 1 {
        let p = inside(g);
        simple_fraction(g, p)
    } else {
        RationalFunction::zero()
    };
    Instance {
        theta,
        r_plus,
        r_minus,
        points,
        bound: n0 + n1 + n2,
    }
}

fn build(inst: &Instance, alpha: &BlaschkeProduct) -> AttoSymbol {
    build_finite_rank_symbol(
        &inst.theta,
        alpha,
        &inst.r_plus,
        &inst.r_minus,
        &inst.points,
        tol(),
    )
    .unwrap()
}

/// `𝓔 D₂₋ D₁₊ · ker T_{θ̄ z^{N₀+N₁+N₂}}`.
fn expected(sym: &AttoSymbol) -> KernelSpace {
    let d = sym.finite_rank.as_ref().unwrap();
    let g =
        &sym.theta.to_rational().conj_reflect() * &RationalFunction::z_pow(d.alpha_bound() as i32);
    let factor = &(&d.e * &d.d2m) * &d.d1p;
    toeplitz_kernel(&g, tol())
        .unwrap()
        .times(&RationalFunction::from_poly(&factor).unwrap())
}

#[test]
fn closed_form_is_alpha_independent_and_matches_oracle() {
    let mut g = rng(21);
    for trial in 0..12 {
        let inst = instance(&mut g);
        let mut kernels = Vec::new();
        for m in inst.bound..=inst.bound + 3 {
            let alpha = blaschke(&mut g, m);
            let sym = build(&inst, &alpha);
            let k = atto_kernel_closed_form(&sym, tol()).unwrap();
            assert_eq!(k, expected(&sym), "trial {trial}, deg alpha {m}");
            if m <= 6 {
                let cmp = compare_atto(
                    &sym.theta,
                    &alpha,
                    &sym.phi().unwrap(),
                    &k,
                    DEFAULT_CUTOFF,
                    tol(),
                )
                .unwrap();
                assert_eq!(cmp.numeric_dim, k.dim(), "trial {trial}: {cmp:?}");
                assert!(cmp.angle.radians < 1e-6, "trial {trial}: {cmp:?}");
                assert!(cmp.residual < 1e-9, "trial {trial}: {cmp:?}");
            }
            kernels.push(k);
        }
        assert!(kernels.windows(2).all(|w| w[0] == w[1]));
    }
}

#[test]
fn kernel_ignores_numerators() {
    let mut g = rng(22);
    for _ in 0..4 {
        let inst = instance(&mut g);
        let alpha = BlaschkeProduct::z_pow(inst.bound);
        let reference = atto_kernel_closed_form(&build(&inst, &alpha), tol()).unwrap();
        for _ in 0..10 {
            // Fresh residues keep the poles, hence D₁₊ and D₂₋, fixed.
            let mut varied = Instance {
                theta: inst.theta.clone(),
                r_plus: inst.r_plus.clone(),
                r_minus: inst.r_minus.clone(),
                points: inst.points.clone(),
                bound: inst.bound,
            };
            if !inst.r_plus.is_zero() {
                varied.r_plus = simple_fraction(&mut g, inst.r_plus.poles()[0]);
            }
            if !inst.r_minus.is_zero() {
                varied.r_minus = simple_fraction(&mut g, inst.r_minus.poles()[0]);
            }
            let k = atto_kernel_closed_form(&build(&varied, &alpha), tol()).unwrap();
            assert_eq!(k, reference);
        }
    }
}

#[test]
fn hankel_kernel_of_corona_pair() {
    let mut g = rng(23);
    let m = 64;
    for trial in 0..20 {
        let k_in = g.gen_range(0..=3);
        let k_out = g.gen_range(0..=2);
        let mut b_roots = points(&mut g, k_in, inside);
        b_roots.extend(points(&mut g, k_out, outside));
        let b = Polynomial::from_roots(gain(&mut g), &b_roots);
        let n_a = g.gen_range(0..=3);
        let a = Polynomial::from_roots(gain(&mut g), &points(&mut g, n_a, anywhere));
        let (ra, rb) = (
            RationalFunction::from_poly(&a).unwrap(),
            RationalFunction::from_poly(&b).unwrap(),
        );
        assert!(corona_check(&ra, &rb, Side::Analytic, tol()).unwrap());
        let f = &ra / &rb;
        let (nk, h) = numeric_hankel_kernel(&f, m, DEFAULT_CUTOFF, tol()).unwrap();
        let h = h.matrix;
        let norm = h.norm().max(1.0);
        let deg_b = b_roots.len();
        for j in 0..=m - deg_b {
            let shifted = &b * &Polynomial::monomial(j);
            let v = DVector::from_fn(m + 1, |i, _| {
                shifted.coeffs().get(i).copied().unwrap_or_default()
            });
            let residual = (&h * &v).norm() / (norm * v.norm());
            assert!(residual < 1e-7, "trial {trial}, j = {j}: {residual:e}");
        }
        assert_eq!(
            nk.dim(),
            m + 1 - inner_part(&rb, tol()).degree(),
            "trial {trial}"
        );
    }
}
