//! Randomized verification suites.
//!
//! Trial `i` of a run with seed `s` draws its instance from a ChaCha8
//! stream keyed by `(s, i)`, so trials are independent of each other and of
//! the thread that runs them. Reports are assembled in trial order and hold
//! no timing data, so the same seed reproduces the same report.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DVector;
use num_complex::Complex64;
use pairker::atto::{atto_kernel_closed_form, corona_check, AttoSymbol, Side};
use pairker::factorization::inner_part;
use pairker::kernel::{kernel_include, paired_kernel_plus, toeplitz_kernel};
use pairker::oracle::{
    compare_atto, compare_with_oracle, decay_radius, numeric_hankel_kernel,
    numeric_paired_kernel_plus, numeric_toeplitz_kernel,
};
use pairker::{BlaschkeProduct, Inclusion, KernelSpace, Polynomial, RationalFunction, SymbolPair};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Settings;
use crate::expr::{blaschke_to_expr, rational_to_expr};
use crate::generate;

/// Largest principal angle accepted between exact and numeric kernels.
pub const MAX_ANGLE: f64 = 1e-6;
/// Largest relative residual of the Hankel annihilation check.
pub const MAX_HANKEL_RESIDUAL: f64 = 1e-7;
/// Largest distance of an exact ATTO kernel from the model space.
pub const MAX_MODEL_RESIDUAL: f64 = 1e-9;
/// Circle samples for the argument-principle winding count.
const WINDING_SAMPLES: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Inclusions,
    Dims,
    Coburn,
    NearInvariance,
    AttoAlpha,
    HankelCorona,
    Oracle,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Inclusions => "inclusions",
            Suite::Dims => "dims",
            Suite::Coburn => "coburn",
            Suite::NearInvariance => "near-invariance",
            Suite::AttoAlpha => "atto-alpha",
            Suite::HankelCorona => "hankel-corona",
            Suite::Oracle => "oracle",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyCount {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub trial: usize,
    pub property: String,
    /// Instance data as expressions the CLI parses back.
    pub instance: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub properties: Vec<PropertyCount>,
    pub worst_residual: Option<f64>,
    pub worst_angle: Option<f64>,
    pub failures: Vec<Failure>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.properties.iter().all(|p| p.failed == 0)
    }

    pub fn property(&self, name: &str) -> Option<&PropertyCount> {
        self.properties.iter().find(|p| p.name == name)
    }

    /// Trials in which every property held.
    pub fn passing_trials(&self) -> usize {
        let mut failed: Vec<usize> = self.failures.iter().map(|f| f.trial).collect();
        failed.sort_unstable();
        failed.dedup();
        self.trials - failed.len()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "suite {} (seed {}): {}/{} trials passed",
            self.suite,
            self.seed,
            self.passing_trials(),
            self.trials
        )?;
        for p in &self.properties {
            writeln!(
                f,
                "  {:<20} {:>5} pass {:>5} fail",
                p.name, p.passed, p.failed
            )?;
        }
        if let Some(r) = self.worst_residual {
            writeln!(f, "  worst residual {r:.3e}")?;
        }
        if let Some(a) = self.worst_angle {
            writeln!(f, "  worst angle    {a:.3e}")?;
        }
        for fail in &self.failures {
            writeln!(f, "  FAIL trial {} [{}]", fail.trial, fail.property)?;
            for (k, v) in &fail.instance {
                writeln!(f, "    {k} = {v}")?;
            }
        }
        Ok(())
    }
}

/// What one trial observed.
#[derive(Clone, Debug, Default)]
pub struct TrialOutcome {
    pub instance: Vec<(String, String)>,
    pub checks: Vec<(&'static str, bool)>,
    pub residual: Option<f64>,
    pub angle: Option<f64>,
}

impl TrialOutcome {
    fn note(&mut self, key: &str, value: impl ToString) {
        self.instance.push((key.to_string(), value.to_string()));
    }

    fn check(&mut self, name: &'static str, pass: bool) {
        self.checks.push((name, pass));
    }

    fn residual(&mut self, r: f64) {
        self.residual = Some(self.residual.map_or(r, |w| w.max(r)));
    }

    fn angle(&mut self, a: f64) {
        self.angle = Some(self.angle.map_or(a, |w| w.max(a)));
    }

    fn near_invariant(&mut self, kernels: &[&KernelSpace]) {
        self.check(
            "near_invariant",
            kernels.iter().all(|k| k.is_nearly_invariant()),
        );
    }
}

pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Runs one trial; engine errors are recorded as a failed `completed` check.
pub fn run_trial(suite: Suite, seed: u64, trial: usize, s: &Settings) -> TrialOutcome {
    let mut rng = trial_rng(seed, trial);
    let mut out = TrialOutcome::default();
    let result = match suite {
        Suite::Dims => dims_trial(&mut rng, s, &mut out),
        Suite::Coburn => coburn_trial(&mut rng, s, &mut out),
        Suite::Inclusions => inclusions_trial(&mut rng, s, &mut out),
        Suite::Oracle => oracle_trial(&mut rng, trial, s, &mut out),
        Suite::AttoAlpha => atto_trial(&mut rng, s, &mut out),
        Suite::HankelCorona => hankel_trial(&mut rng, s, &mut out),
        Suite::NearInvariance => {
            let source = [Suite::Dims, Suite::Coburn, Suite::Inclusions, Suite::Oracle][trial % 4];
            out.note("source", source);
            let r = match source {
                Suite::Dims => dims_trial(&mut rng, s, &mut out),
                Suite::Coburn => coburn_trial(&mut rng, s, &mut out),
                Suite::Inclusions => inclusions_trial(&mut rng, s, &mut out),
                _ => oracle_trial(&mut rng, trial / 4, s, &mut out),
            };
            out.checks.retain(|(name, _)| *name == "near_invariant");
            out.residual = None;
            out.angle = None;
            r
        }
    };
    if let Err(e) = result {
        out.note("error", e);
        out.check("completed", false);
    }
    out
}

pub fn run_suite(suite: Suite, trials: usize, seed: u64, s: &Settings) -> VerificationReport {
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(suite, seed, t, s))
        .collect();
    assemble(suite, seed, outcomes)
}

pub fn assemble(suite: Suite, seed: u64, outcomes: Vec<TrialOutcome>) -> VerificationReport {
    let mut report = VerificationReport {
        suite: suite.to_string(),
        seed,
        trials: outcomes.len(),
        properties: Vec::new(),
        worst_residual: None,
        worst_angle: None,
        failures: Vec::new(),
    };
    for (trial, out) in outcomes.into_iter().enumerate() {
        for (name, pass) in &out.checks {
            let idx = match report.properties.iter().position(|p| p.name == *name) {
                Some(i) => i,
                None => {
                    report.properties.push(PropertyCount {
                        name: name.to_string(),
                        passed: 0,
                        failed: 0,
                    });
                    report.properties.len() - 1
                }
            };
            if *pass {
                report.properties[idx].passed += 1;
            } else {
                report.properties[idx].failed += 1;
                report.failures.push(Failure {
                    trial,
                    property: name.to_string(),
                    instance: out.instance.clone(),
                });
            }
        }
        let max = |a: Option<f64>, b: Option<f64>| match (a, b) {
            (Some(x), Some(y)) => Some(x.max(y)),
            (x, y) => x.or(y),
        };
        report.worst_residual = max(report.worst_residual, out.residual);
        report.worst_angle = max(report.worst_angle, out.angle);
    }
    report
}

/// Winding number of `f` around 0 from argument increments along the circle.
pub fn sampled_winding(f: &RationalFunction, n: usize) -> i64 {
    let values: Vec<Complex64> = (0..n)
        .map(|k| {
            f.eval(Complex64::from_polar(
                1.0,
                2.0 * PI * (k as f64 + 0.25) / n as f64,
            ))
        })
        .collect();
    let total: f64 = (0..n)
        .map(|k| (values[(k + 1) % n] / values[k]).arg())
        .sum();
    (total / (2.0 * PI)).round() as i64
}

fn note_pair(out: &mut TrialOutcome, pair: &SymbolPair) {
    out.note("a", rational_to_expr(&pair.a));
    out.note("b", rational_to_expr(&pair.b));
}

fn times(pair: &SymbolPair, f: &RationalFunction, s: &Settings) -> pairker::Result<SymbolPair> {
    pair.with_a(&pair.a * f, s.tol())
}

fn dims_trial(rng: &mut ChaCha8Rng, s: &Settings, out: &mut TrialOutcome) -> pairker::Result<()> {
    let d = rng.gen_range(0..=8);
    let k = rng.gen_range(0..=8);
    let pair = generate::pair_with_dim(rng, d, s.tol());
    let b = generate::blaschke(rng, k, s.tol());
    note_pair(out, &pair);
    out.note("B", blaschke_to_expr(&b));
    out.note("d", d);
    let base = paired_kernel_plus(&pair, s.tol())?;
    let shifted = paired_kernel_plus(&times(&pair, &b.to_rational(), s)?, s.tol())?;
    out.check("base_dim", base.dim() == d);
    out.check("dim_formula", shifted.dim() == d.saturating_sub(k));
    out.near_invariant(&[&base, &shifted]);
    Ok(())
}

fn coburn_trial(rng: &mut ChaCha8Rng, s: &Settings, out: &mut TrialOutcome) -> pairker::Result<()> {
    let g = generate::toeplitz_symbol(rng);
    out.note("g", rational_to_expr(&g));
    let kappa = sampled_winding(&g, WINDING_SAMPLES);
    let k = toeplitz_kernel(&g, s.tol())?;
    let k_bar = toeplitz_kernel(&g.conj_reflect(), s.tol())?;
    out.check("product_zero", k.dim() * k_bar.dim() == 0);
    out.check("dim_ker_g", k.dim() as i64 == (-kappa).max(0));
    out.check("dim_ker_g_bar", k_bar.dim() as i64 == kappa.max(0));
    out.near_invariant(&[&k, &k_bar]);
    Ok(())
}

/// Links of the chain with a nonzero right-hand side must be strict.
fn strict_links(chain: &[KernelSpace]) -> pairker::Result<bool> {
    for link in chain.windows(2) {
        if link[1].is_zero() {
            continue;
        }
        if kernel_include(&link[0], &link[1])? != Inclusion::SubsetStrict {
            return Ok(false);
        }
    }
    Ok(true)
}

fn inclusions_trial(
    rng: &mut ChaCha8Rng,
    s: &Settings,
    out: &mut TrialOutcome,
) -> pairker::Result<()> {
    let d = rng.gen_range(3..=8);
    let deg = rng.gen_range(2..=4);
    let pair = generate::pair_with_dim(rng, d, s.tol());
    let theta = generate::blaschke(rng, deg, s.tol());
    let theta1 = theta.peel(rng.gen_range(1..deg));
    note_pair(out, &pair);
    out.note("theta", blaschke_to_expr(&theta));
    out.note("theta1", blaschke_to_expr(&theta1));
    let (t, t1) = (theta.to_rational(), theta1.to_rational());
    let kernel = |f: &RationalFunction| paired_kernel_plus(&times(&pair, f, s)?, s.tol());
    let chain = [
        kernel(&t)?,
        kernel(&t1)?,
        kernel(&RationalFunction::one())?,
        kernel(&t1.conj_reflect())?,
        kernel(&t.conj_reflect())?,
    ];
    let (n, n1) = (theta.degree(), theta1.degree());
    let expected = [d.saturating_sub(n), d.saturating_sub(n1), d, d + n1, d + n];
    out.check(
        "chain_dims",
        chain.iter().zip(expected).all(|(k, e)| k.dim() == e),
    );
    let shifted = [chain[0].times(&t), chain[1].times(&t1), chain[2].clone()];
    out.check(
        "strict_links",
        strict_links(&chain)? && strict_links(&shifted)?,
    );
    out.near_invariant(&chain.iter().collect::<Vec<_>>());
    Ok(())
}

fn oracle_trial(
    rng: &mut ChaCha8Rng,
    trial: usize,
    s: &Settings,
    out: &mut TrialOutcome,
) -> pairker::Result<()> {
    let tol = s.tol();
    let (exact, cmp) = if trial.is_multiple_of(2) {
        let g = generate::toeplitz_symbol(rng);
        out.note("kind", "toeplitz");
        out.note("g", rational_to_expr(&g));
        let exact = toeplitz_kernel(&g, tol)?;
        let rho = decay_radius(&[&g, exact.multiplier()], tol);
        let cmp = compare_with_oracle(&exact, s.order, rho, tol, |m| {
            numeric_toeplitz_kernel(&g, m, s.cutoff, tol)
        })?;
        (exact, cmp)
    } else {
        let pair = generate::oracle_pair(rng, tol);
        out.note("kind", "paired");
        note_pair(out, &pair);
        let exact = paired_kernel_plus(&pair, tol)?;
        let rho = decay_radius(&[&pair.a, &pair.b, exact.multiplier()], tol);
        let cmp = compare_with_oracle(&exact, s.order, rho, tol, |m| {
            numeric_paired_kernel_plus(&pair, m, s.cutoff, tol)
        })?;
        (exact, cmp)
    };
    out.note("order", cmp.order);
    out.check("dims_agree", cmp.exact_dim == cmp.numeric_dim);
    out.check("angle", cmp.agrees(MAX_ANGLE));
    if !cmp.angle.dim_mismatch {
        out.angle(cmp.angle.radians);
    }
    out.near_invariant(&[&exact]);
    Ok(())
}

/// `𝓔 D₂₋ D₁₊ · ker T_{θ̄ z^{N₀+N₁+N₂}}`.
pub fn finite_rank_formula(sym: &AttoSymbol, s: &Settings) -> pairker::Result<KernelSpace> {
    let d = sym
        .finite_rank
        .as_ref()
        .ok_or_else(|| pairker::Error::Precondition("finite-rank data required".into()))?;
    let g =
        &sym.theta.to_rational().conj_reflect() * &RationalFunction::z_pow(d.alpha_bound() as i32);
    let factor = RationalFunction::from_poly(&(&(&d.e * &d.d2m) * &d.d1p))?;
    Ok(toeplitz_kernel(&g, s.tol())?.times(&factor))
}

fn atto_trial(rng: &mut ChaCha8Rng, s: &Settings, out: &mut TrialOutcome) -> pairker::Result<()> {
    let tol = s.tol();
    let inst = generate::finite_rank_instance(rng, tol);
    out.instance.extend(inst.record());
    let mut kernels = Vec::new();
    let (mut formula_ok, mut oracle_ok) = (true, true);
    for m in inst.bound..=inst.bound + 3 {
        let alpha = generate::blaschke(rng, m, tol);
        out.note(&format!("alpha_{m}"), blaschke_to_expr(&alpha));
        let sym = inst.build(&alpha, tol)?;
        let k = atto_kernel_closed_form(&sym, tol)?;
        formula_ok &= k == finite_rank_formula(&sym, s)?;
        let cmp = compare_atto(&sym.theta, &alpha, &sym.phi()?, &k, s.cutoff, tol)?;
        oracle_ok &= cmp.numeric_dim == k.dim()
            && cmp.angle.radians < MAX_ANGLE
            && cmp.residual < MAX_MODEL_RESIDUAL;
        if !cmp.angle.dim_mismatch {
            out.angle(cmp.angle.radians);
        }
        out.residual(cmp.residual);
        kernels.push(k);
    }
    out.check(
        "alpha_independent",
        kernels.windows(2).all(|w| w[0] == w[1]),
    );
    out.check("matches_formula", formula_ok);
    out.check("oracle_agrees", oracle_ok);
    Ok(())
}

fn hankel_trial(rng: &mut ChaCha8Rng, s: &Settings, out: &mut TrialOutcome) -> pairker::Result<()> {
    let tol = s.tol();
    let pair = generate::corona_pair(rng);
    out.note("A", rational_to_expr(&pair.a));
    out.note("B", rational_to_expr(&pair.b));
    out.check(
        "corona",
        corona_check(&pair.a, &pair.b, Side::Analytic, tol)?,
    );
    out.check(
        "inner_degree",
        inner_part(&pair.b, tol).degree() == pair.inner_degree,
    );
    let m = s.order;
    let f = pair.a.checked_div(&pair.b)?;
    let (nk, h) = numeric_hankel_kernel(&f, m, s.cutoff, tol)?;
    let h = h.matrix;
    let norm = h.norm().max(1.0);
    let b: &Polynomial = pair.b.num();
    let deg_b = b.degree().unwrap_or(0);
    let mut worst: f64 = 0.0;
    for j in 0..=m.saturating_sub(deg_b) {
        let shifted = b * &Polynomial::monomial(j);
        let v = DVector::from_fn(m + 1, |i, _| {
            shifted.coeffs().get(i).copied().unwrap_or_default()
        });
        worst = worst.max((&h * &v).norm() / (norm * v.norm()));
    }
    out.residual(worst);
    out.check("annihilates_shifts", worst < MAX_HANKEL_RESIDUAL);
    out.check("kernel_dim", nk.dim() == m + 1 - pair.inner_degree);
    Ok(())
}

/// `θ = z⁵` with `𝓔 = z − 1`, `D₁₊ = z − 2`, `D₂₋ = z − 0.5`.
pub fn worked_instance(alpha: &BlaschkeProduct, s: &Settings) -> pairker::Result<AttoSymbol> {
    let one = Complex64::new(1.0, 0.0);
    let r_plus = RationalFunction::from_factors(0.7 * one, vec![], vec![2.0 * one]);
    let r_minus = RationalFunction::from_factors(-1.3 * one, vec![], vec![0.5 * one]);
    let points = [pairker::TaylorPoint { t: one, n: 1 }];
    pairker::atto::build_finite_rank_symbol(
        &BlaschkeProduct::z_pow(5),
        alpha,
        &r_plus,
        &r_minus,
        &points,
        s.tol(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_are_reproducible() {
        let s = Settings::default();
        let a = run_suite(Suite::Dims, 8, 3, &s);
        let b = run_suite(Suite::Dims, 8, 3, &s);
        assert_eq!(a, b);
        assert!(a.all_passed(), "{a}");
        assert_eq!(a.property("dim_formula").unwrap().passed, 8);
    }

    #[test]
    fn trials_do_not_depend_on_the_trial_count() {
        let s = Settings::default();
        let short = run_suite(Suite::Coburn, 3, 9, &s);
        let long = run_suite(Suite::Coburn, 6, 9, &s);
        let inst = |r: &VerificationReport| r.failures.len();
        assert_eq!(inst(&short), 0);
        assert_eq!(inst(&long), 0);
        let g0 = run_trial(Suite::Coburn, 9, 2, &s).instance;
        assert_eq!(g0, run_trial(Suite::Coburn, 9, 2, &s).instance);
    }

    #[test]
    fn winding_by_sampling() {
        let f = RationalFunction::from_factors(
            Complex64::new(2.0, 0.0),
            vec![Complex64::new(0.3, 0.1), Complex64::new(2.0, 0.0)],
            vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(0.5, 0.0),
                Complex64::new(0.1, 0.0),
            ],
        );
        assert_eq!(sampled_winding(&f, 1024), -2);
    }
}
