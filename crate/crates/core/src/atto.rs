//! Asymmetric truncated Toeplitz operators `A^{θ,α}_φ = P_α φ|_{K_θ}` with
//! symbols `φ = θ̄ A₁₋/B₁₋ − α A₂₊/B₂₊`.
//!
//! When the space `𝒮` attached to the symbol is trivial, the kernel is
//! `B₂₊ · ker⁺ S_{θ̄B₂₊, −B₁₋}` and in particular does not depend on `α`.
//! Triviality is only certified through sufficient conditions; the closed
//! form refuses to answer otherwise.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::factorization::{inner_part, BlaschkeProduct};
use crate::kernel::{paired_kernel_plus, toeplitz_kernel, KernelSpace};
use crate::poly::{match_roots, Polynomial, ROOT_TOL};
use crate::rational::{CircleTol, Location, RationalFunction, SymbolPair};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Circle samples used by the boundedness check.
const SUP_SAMPLES: usize = 1024;
/// Angular offsets probed next to each circle point of `𝓔`.
const PROBE_OFFSETS: [f64; 5] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
/// Growth factor near a circle point that signals a surviving pole.
const GROWTH_LIMIT: f64 = 100.0;

/// Polynomial data of a finite-rank symbol
/// `φ = θ̄ Q₁/(𝓔 D₁₊) − α Q₂/(𝓔 D₂₋)`.
#[derive(Clone, Debug)]
pub struct FiniteRankData {
    /// Zeros on the circle.
    pub e: Polynomial,
    /// Zeros outside the closed disk.
    pub d1p: Polynomial,
    /// Zeros inside the open disk.
    pub d2m: Polynomial,
    pub q1: Polynomial,
    pub q2: Polynomial,
}

impl FiniteRankData {
    fn deg(p: &Polynomial) -> usize {
        p.degree().unwrap_or(0)
    }

    pub fn n0(&self) -> usize {
        Self::deg(&self.e)
    }

    pub fn n1(&self) -> usize {
        Self::deg(&self.d1p)
    }

    pub fn n2(&self) -> usize {
        Self::deg(&self.d2m)
    }

    /// `N₀ + N₁ + N₂`: `𝒮 = {0}` as soon as `deg α` reaches it.
    pub fn alpha_bound(&self) -> usize {
        self.n0() + self.n1() + self.n2()
    }

    /// Zero locations, degree bounds and coprimality.
    pub fn validate(&self, tol: CircleTol) -> Result<()> {
        let bad = |what: &str| Err(Error::Inadmissible(what.to_string()));
        let located = |p: &Polynomial, loc: Location| -> Result<bool> {
            Ok(p.roots()?.iter().all(|r| tol.locate(*r) == loc))
        };
        if self.e.is_zero() || self.d1p.is_zero() || self.d2m.is_zero() {
            return bad("E, D1+ and D2- must be nonzero");
        }
        if !located(&self.e, Location::OnCircle)? {
            return bad("E must have all its zeros on the circle");
        }
        if !located(&self.d1p, Location::Outside)? {
            return bad("D1+ must have all its zeros outside the closed disk");
        }
        if !located(&self.d2m, Location::Inside)? {
            return bad("D2- must have all its zeros in the open disk");
        }
        if Self::deg(&self.q1) >= self.n0() + self.n1() && !self.q1.is_zero() {
            return bad("deg Q1 must be below N0 + N1");
        }
        if Self::deg(&self.q2) >= self.n0() + self.n2() && !self.q2.is_zero() {
            return bad("deg Q2 must be below N0 + N2");
        }
        let shares = |q: &Polynomial, a: &Polynomial, b: &Polynomial| -> Result<bool> {
            if q.is_zero() {
                return Ok(false);
            }
            let mut den = a.roots()?;
            den.extend(b.roots()?);
            let (common, _, _) = match_roots(&q.roots()?, &den, ROOT_TOL);
            Ok(!common.is_empty())
        };
        if shares(&self.q1, &self.e, &self.d1p)? {
            return bad("Q1 shares a zero with E D1+");
        }
        if shares(&self.q2, &self.e, &self.d2m)? {
            return bad("Q2 shares a zero with E D2-");
        }
        Ok(())
    }
}

/// Symbol data of `A^{θ,α}_φ` with `φ = θ̄ A₁₋/B₁₋ − α A₂₊/B₂₊`. The
/// anti-analytic pair is stored as rational functions analytic outside the
/// open disk, whose boundary values are the intended ones.
#[derive(Clone, Debug)]
pub struct AttoSymbol {
    pub theta: BlaschkeProduct,
    pub alpha: BlaschkeProduct,
    pub a1m: RationalFunction,
    pub b1m: RationalFunction,
    pub a2p: RationalFunction,
    pub b2p: RationalFunction,
    pub finite_rank: Option<FiniteRankData>,
}

impl AttoSymbol {
    pub fn new(
        theta: BlaschkeProduct,
        alpha: BlaschkeProduct,
        [a1m, b1m, a2p, b2p]: [RationalFunction; 4],
        tol: CircleTol,
    ) -> Result<Self> {
        if b1m.is_zero() {
            return Err(Error::ZeroSymbol("B1-"));
        }
        if b2p.is_zero() {
            return Err(Error::ZeroSymbol("B2+"));
        }
        for f in [&a1m, &b1m] {
            if !f.poles_at(tol, Location::Outside).is_empty()
                || !f.poles_at(tol, Location::OnCircle).is_empty()
                || f.zeros().len() > f.poles().len()
            {
                return Err(Error::PoleInRegion("the anti-analytic factors A1-, B1-"));
            }
        }
        for f in [&a2p, &b2p] {
            if !f.poles_at(tol, Location::Inside).is_empty()
                || !f.poles_at(tol, Location::OnCircle).is_empty()
            {
                return Err(Error::PoleInRegion("the analytic factors A2+, B2+"));
            }
        }
        Ok(Self {
            theta,
            alpha,
            a1m,
            b1m,
            a2p,
            b2p,
            finite_rank: None,
        })
    }

    /// `A₁₋ = Q₁/z^{N₀+N₁}`, `B₁₋ = 𝓔D₁₊/z^{N₀+N₁}`, `A₂₊ = Q₂`, `B₂₊ = 𝓔D₂₋`.
    pub fn from_finite_rank(
        theta: BlaschkeProduct,
        alpha: BlaschkeProduct,
        data: FiniteRankData,
        tol: CircleTol,
    ) -> Result<Self> {
        data.validate(tol)?;
        check_bounded(&theta, &alpha, &data, tol)?;
        let shift = RationalFunction::z_pow(-((data.n0() + data.n1()) as i32));
        let rf = |p: &Polynomial| RationalFunction::from_poly(p);
        let e = rf(&data.e)?;
        let a1m = &rf(&data.q1)? * &shift;
        let b1m = &(&e * &rf(&data.d1p)?) * &shift;
        let a2p = rf(&data.q2)?;
        let b2p = &e * &rf(&data.d2m)?;
        let mut sym = Self::new(theta, alpha, [a1m, b1m, a2p, b2p], tol)?;
        sym.finite_rank = Some(data);
        Ok(sym)
    }

    /// Same data with a different `α`.
    pub fn with_alpha(&self, alpha: BlaschkeProduct) -> Self {
        Self {
            alpha,
            ..self.clone()
        }
    }

    /// `φ` assembled as a single rational function.
    pub fn phi(&self) -> Result<RationalFunction> {
        let theta_bar = self.theta.to_rational().conj_reflect();
        let left = &theta_bar * &self.a1m.checked_div(&self.b1m)?;
        let right = &self.alpha.to_rational() * &self.a2p.checked_div(&self.b2p)?;
        Ok(&left - &right)
    }

    /// `I₁`: inner part of `conj(B₁₋)`.
    pub fn i1(&self, tol: CircleTol) -> BlaschkeProduct {
        inner_part(&self.b1m.conj_reflect(), tol)
    }

    /// `I₂`: inner part of `B₂₊`.
    pub fn i2(&self, tol: CircleTol) -> BlaschkeProduct {
        inner_part(&self.b2p, tol)
    }
}

/// Which sufficient condition certified `𝒮 = {0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrivialityReason {
    /// `ker⁺ S_{αB₁₋, B₂₊} = {0}`.
    PairedKernel,
    /// `deg α ≥ deg I₁ + deg I₂` with `O₂` invertible.
    Degree,
    /// `ker T_{α conj(I₁I₂)} = {0}` with `O₂` invertible.
    ToeplitzKernel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Triviality {
    ProvedTrivial(TrivialityReason),
    Inconclusive,
}

pub fn s_trivial_check(sym: &AttoSymbol, tol: CircleTol) -> Result<Triviality> {
    let pair = SymbolPair::new(&sym.alpha.to_rational() * &sym.b1m, sym.b2p.clone(), tol)?;
    match paired_kernel_plus(&pair, tol) {
        Ok(k) if k.is_zero() => {
            return Ok(Triviality::ProvedTrivial(TrivialityReason::PairedKernel))
        }
        Ok(_) | Err(Error::BothSidedCircleZeros) => {}
        Err(e) => return Err(e),
    }
    // The remaining criteria need the outer part of B₂₊ to be invertible,
    // which for a rational function means no zeros on the circle.
    if !sym.b2p.zeros_at(tol, Location::OnCircle).is_empty() {
        return Ok(Triviality::Inconclusive);
    }
    let (i1, i2) = (sym.i1(tol), sym.i2(tol));
    if sym.alpha.degree() >= i1.degree() + i2.degree() {
        return Ok(Triviality::ProvedTrivial(TrivialityReason::Degree));
    }
    let i_bar = i1.mul(&i2).to_rational().conj_reflect();
    if toeplitz_kernel(&(&sym.alpha.to_rational() * &i_bar), tol)?.is_zero() {
        return Ok(Triviality::ProvedTrivial(TrivialityReason::ToeplitzKernel));
    }
    Ok(Triviality::Inconclusive)
}

/// `ker A^{θ,α}_φ = B₂₊ · ker⁺ S_{θ̄B₂₊, −B₁₋}`, provided `𝒮 = {0}` is certified.
pub fn atto_kernel_closed_form(sym: &AttoSymbol, tol: CircleTol) -> Result<KernelSpace> {
    if s_trivial_check(sym, tol)? == Triviality::Inconclusive {
        return Err(Error::TrivialityInconclusive(format!(
            "none of the sufficient conditions holds for deg alpha = {}, deg I1 = {}, deg I2 = {}",
            sym.alpha.degree(),
            sym.i1(tol).degree(),
            sym.i2(tol).degree()
        )));
    }
    let theta_bar = sym.theta.to_rational().conj_reflect();
    let pair = SymbolPair::new(&theta_bar * &sym.b2p, -&sym.b1m, tol)?;
    Ok(paired_kernel_plus(&pair, tol)?.times(&sym.b2p))
}

/// Either circle-regular corona side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Functions analytic on the closed disk.
    Analytic,
    /// Conjugates of such functions, analytic outside the open disk.
    Conjugate,
}

/// Whether `f₁, f₂` satisfy the corona condition: no common zero on the
/// closed disk (after conjugate reflection on the anti-analytic side).
pub fn corona_check(
    f1: &RationalFunction,
    f2: &RationalFunction,
    side: Side,
    tol: CircleTol,
) -> Result<bool> {
    let (g1, g2) = match side {
        Side::Analytic => (f1.clone(), f2.clone()),
        Side::Conjugate => (f1.conj_reflect(), f2.conj_reflect()),
    };
    for g in [&g1, &g2] {
        if g.poles()
            .iter()
            .any(|p| tol.locate(*p) != Location::Outside)
        {
            return Err(Error::PoleInRegion("the closed disk"));
        }
    }
    let closed_disk = |g: &RationalFunction| -> Vec<Complex64> {
        g.zeros()
            .iter()
            .copied()
            .filter(|r| tol.locate(*r) != Location::Outside)
            .collect()
    };
    match (g1.is_zero(), g2.is_zero()) {
        (true, true) => Ok(false),
        (true, false) => Ok(closed_disk(&g2).is_empty()),
        (false, true) => Ok(closed_disk(&g1).is_empty()),
        (false, false) => {
            let (common, _, _) = match_roots(&closed_disk(&g1), &closed_disk(&g2), ROOT_TOL);
            Ok(common.is_empty())
        }
    }
}

/// A point `t ∈ 𝕋` with pole order `n` in the finite-rank symbol.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TaylorPoint {
    pub t: Complex64,
    pub n: usize,
}

/// Builds `φ = θ̄R₊ − αR₋ + Σ_j (θ̄ P^α_j − α P^{θ̄}_j)/(z − t_j)^{n_j}` with
/// `P^f_j` the Taylor polynomial of `f` at `t_j` with `n_j` terms, and
/// returns it in the form `θ̄ Q₁/(𝓔D₁₊) − α Q₂/(𝓔D₂₋)`.
pub fn build_finite_rank_symbol(
    theta: &BlaschkeProduct,
    alpha: &BlaschkeProduct,
    r_plus: &RationalFunction,
    r_minus: &RationalFunction,
    points: &[TaylorPoint],
    tol: CircleTol,
) -> Result<AttoSymbol> {
    let terms: Vec<usize> = points.iter().map(|p| p.n).collect();
    build_with_taylor_terms(theta, alpha, r_plus, r_minus, points, &terms, &terms, tol)
}

/// As [`build_finite_rank_symbol`], with explicit numbers of Taylor terms
/// for `α` and `θ̄` at each point. Fewer than `n_j` terms leave a pole of
/// `φ` on the circle, which the boundedness check reports.
#[allow(clippy::too_many_arguments)]
pub fn build_with_taylor_terms(
    theta: &BlaschkeProduct,
    alpha: &BlaschkeProduct,
    r_plus: &RationalFunction,
    r_minus: &RationalFunction,
    points: &[TaylorPoint],
    alpha_terms: &[usize],
    theta_terms: &[usize],
    tol: CircleTol,
) -> Result<AttoSymbol> {
    if let Some(p) = points
        .iter()
        .find(|p| tol.locate(p.t) != Location::OnCircle)
    {
        return Err(Error::NotOnCircle { t: p.t });
    }
    if points.iter().any(|p| p.n == 0) {
        return Err(Error::Inadmissible("pole orders must be positive".into()));
    }
    let (d1p, s1) = split_vanishing_at_infinity(r_plus, Location::Outside, "R+")?;
    let (d2m, s2) = split_vanishing_at_infinity(r_minus, Location::Inside, "R-")?;
    let e_roots: Vec<Complex64> = points
        .iter()
        .flat_map(|p| std::iter::repeat_n(p.t, p.n))
        .collect();
    let e = Polynomial::from_roots(ONE, &e_roots);
    // 𝓔 with the factor of point j removed.
    let cofactor = |j: usize| {
        let roots: Vec<Complex64> = points
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != j)
            .flat_map(|(_, p)| std::iter::repeat_n(p.t, p.n))
            .collect();
        Polynomial::from_roots(ONE, &roots)
    };
    let alpha_r = alpha.to_rational();
    let theta_bar = theta.to_rational().conj_reflect();
    let mut sum1 = Polynomial::zero();
    let mut sum2 = Polynomial::zero();
    for (j, p) in points.iter().enumerate() {
        let c = cofactor(j);
        sum1 = &sum1 + &(&taylor_polynomial(&alpha_r, p.t, alpha_terms[j]) * &c);
        sum2 = &sum2 + &(&taylor_polynomial(&theta_bar, p.t, theta_terms[j]) * &c);
    }
    let q1 = &(&s1 * &e) + &(&d1p * &sum1);
    let q2 = &(&s2 * &e) + &(&d2m * &sum2);
    let data = FiniteRankData {
        e,
        d1p,
        d2m,
        q1: q1.chop(1e-14),
        q2: q2.chop(1e-14),
    };
    check_bounded(theta, alpha, &data, tol)?;
    AttoSymbol::from_finite_rank(theta.clone(), alpha.clone(), data, tol)
}

/// `R = S/D` with `D` monic, `deg S < deg D`, and all zeros of `D` in `loc`.
fn split_vanishing_at_infinity(
    r: &RationalFunction,
    loc: Location,
    name: &'static str,
) -> Result<(Polynomial, Polynomial)> {
    if r.is_zero() {
        return Ok((Polynomial::one(), Polynomial::zero()));
    }
    if r.zeros().len() >= r.poles().len() {
        return Err(Error::Inadmissible(format!(
            "{name} must vanish at infinity"
        )));
    }
    if r.poles()
        .iter()
        .any(|p| CircleTol::default().locate(*p) != loc)
    {
        return Err(Error::PoleInRegion(name));
    }
    Ok((r.den().clone(), r.num().clone()))
}

/// `Σ_{k<terms} f^{(k)}(t)/k! (z − t)^k` as a polynomial in `z`.
fn taylor_polynomial(f: &RationalFunction, t: Complex64, terms: usize) -> Polynomial {
    let coeffs = f.taylor(t, terms);
    let shift = Polynomial::new(vec![-t, ONE]);
    let mut out = Polynomial::zero();
    let mut power = Polynomial::one();
    for c in coeffs {
        out = &out + &power.scale(c);
        power = &power * &shift;
    }
    out
}

/// Direct evaluation of the finite-rank formula, without any cancellation.
fn eval_formula(
    theta: &BlaschkeProduct,
    alpha: &BlaschkeProduct,
    d: &FiniteRankData,
    z: Complex64,
) -> Complex64 {
    let e = d.e.eval(z);
    let left = d.q1.eval(z) / (e * d.d1p.eval(z)) / theta.eval(z);
    let right = alpha.eval(z) * d.q2.eval(z) / (e * d.d2m.eval(z));
    left - right
}

/// Numeric `L∞` check of the assembled symbol: the sup over equispaced
/// samples is compared with values approaching each circle zero of `𝓔`.
fn check_bounded(
    theta: &BlaschkeProduct,
    alpha: &BlaschkeProduct,
    d: &FiniteRankData,
    tol: CircleTol,
) -> Result<()> {
    let phi = |z| eval_formula(theta, alpha, d, z);
    let points = d.e.roots()?;
    let regular = (0..SUP_SAMPLES)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * (k as f64 + 0.5) / SUP_SAMPLES as f64))
        .filter(|z| points.iter().all(|t| (z - t).norm() > 1e-3))
        .map(|z| phi(z).norm())
        .fold(0.0, f64::max);
    for t in points {
        if tol.locate(t) != Location::OnCircle {
            continue;
        }
        let t = t / t.norm();
        let probe = |eps: f64| {
            [eps, -eps]
                .iter()
                .map(|s| phi(t * Complex64::from_polar(1.0, *s)).norm())
                .fold(0.0, f64::max)
        };
        let reference = regular.max(probe(PROBE_OFFSETS[0])).max(f64::MIN_POSITIVE);
        let nearest = PROBE_OFFSETS
            .iter()
            .map(|eps| probe(*eps))
            .fold(0.0, f64::max);
        let ratio = nearest / reference;
        if !ratio.is_finite() || ratio > GROWTH_LIMIT {
            return Err(Error::UnboundedAssembly { t, ratio });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Ambient;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn tol() -> CircleTol {
        CircleTol::default()
    }

    fn lin(r: f64) -> RationalFunction {
        RationalFunction::linear(c(r))
    }

    fn simple(alpha: usize, b1m: RationalFunction, b2p: RationalFunction) -> AttoSymbol {
        AttoSymbol::new(
            BlaschkeProduct::z_pow(5),
            BlaschkeProduct::z_pow(alpha),
            [RationalFunction::one(), b1m, RationalFunction::one(), b2p],
            tol(),
        )
        .unwrap()
    }

    #[test]
    fn corona_examples() {
        assert!(corona_check(&lin(0.5), &lin(-0.5), Side::Analytic, tol()).unwrap());
        let both = &lin(0.5) * &lin(-2.0);
        assert!(!corona_check(&lin(0.5), &both, Side::Analytic, tol()).unwrap());
        assert!(corona_check(&lin(1.0), &lin(-1.0), Side::Analytic, tol()).unwrap());
        assert!(!corona_check(&lin(1.0), &lin(1.0), Side::Analytic, tol()).unwrap());
        let pole = RationalFunction::from_factors(ONE, vec![], vec![c(0.5)]);
        assert!(corona_check(&pole, &lin(2.0), Side::Analytic, tol()).is_err());
        // conj side: z̄ − 0.5 and z̄ + 0.5 reflect to (1 ∓ 0.5z)/z, zero-free... but with a pole at 0.
        let a = RationalFunction::from_factors(ONE, vec![c(2.0)], vec![]);
        let b = RationalFunction::from_factors(ONE, vec![c(-2.0)], vec![]);
        assert!(
            corona_check(&a.conj_reflect(), &b.conj_reflect(), Side::Conjugate, tol()).unwrap()
        );
    }

    #[test]
    fn triviality_examples() {
        let zbar = RationalFunction::z_pow(-1);
        let z2 = RationalFunction::z_pow(2);
        let s = simple(3, zbar.clone(), z2.clone());
        assert_eq!(s.i1(tol()).degree(), 1);
        assert_eq!(s.i2(tol()).degree(), 2);
        assert!(matches!(
            s_trivial_check(&s, tol()).unwrap(),
            Triviality::ProvedTrivial(_)
        ));

        let s = simple(2, zbar, z2);
        assert_eq!(
            s_trivial_check(&s, tol()).unwrap(),
            Triviality::Inconclusive
        );
        assert!(matches!(
            atto_kernel_closed_form(&s, tol()),
            Err(Error::TrivialityInconclusive(_))
        ));

        let one = RationalFunction::one();
        for m in 0..3 {
            let s = simple(m, one.clone(), one.clone());
            assert!(matches!(
                s_trivial_check(&s, tol()).unwrap(),
                Triviality::ProvedTrivial(_)
            ));
        }
    }

    #[test]
    fn model_space_when_data_is_trivial() {
        let one = RationalFunction::one();
        let s = AttoSymbol::new(
            BlaschkeProduct::z_pow(3),
            BlaschkeProduct::z_pow(2),
            [one.clone(), one.clone(), one.clone(), one],
            tol(),
        )
        .unwrap();
        assert_eq!(
            atto_kernel_closed_form(&s, tol()).unwrap(),
            KernelSpace::polynomials(3)
        );
    }

    #[test]
    fn closed_form_matches_inner_factor_formula() {
        // O₁, O₂ invertible: B₂₊ = (z − 0.5)(z − 3), conj(B₁₋) = (z + 0.4)(z − 2).
        let b2p = &lin(0.5) * &lin(3.0);
        let b1m = (&lin(-0.4) * &lin(2.0)).conj_reflect();
        let s = simple(4, b1m, b2p.clone());
        let k = atto_kernel_closed_form(&s, tol()).unwrap();
        let (i1, i2) = (s.i1(tol()), s.i2(tol()));
        let g = &s.theta.to_rational().conj_reflect() * &i1.mul(&i2).to_rational();
        let expect = toeplitz_kernel(&g, tol()).unwrap().times(&i2.to_rational());
        assert_eq!(k, expect);
        assert_eq!(k.dim(), 3);
        assert_eq!(k.ambient(), Ambient::Plus);
    }

    fn worked_data() -> FiniteRankData {
        FiniteRankData {
            e: Polynomial::from_real(&[-1.0, 1.0]),
            d1p: Polynomial::from_real(&[-2.0, 1.0]),
            d2m: Polynomial::from_real(&[-0.5, 1.0]),
            q1: Polynomial::from_real(&[1.0]),
            q2: Polynomial::from_real(&[1.0]),
        }
    }

    #[test]
    fn worked_instance_exact() {
        let d = worked_data();
        assert_eq!(d.alpha_bound(), 3);
        let s = AttoSymbol::new(
            BlaschkeProduct::z_pow(5),
            BlaschkeProduct::z_pow(7),
            [
                &RationalFunction::from_poly(&d.q1).unwrap() * &RationalFunction::z_pow(-2),
                &(&lin(1.0) * &lin(2.0)) * &RationalFunction::z_pow(-2),
                RationalFunction::from_poly(&d.q2).unwrap(),
                &lin(1.0) * &lin(0.5),
            ],
            tol(),
        )
        .unwrap();
        let k = atto_kernel_closed_form(&s, tol()).unwrap();
        let u = &(&lin(1.0) * &lin(0.5)) * &lin(2.0);
        assert_eq!(k, KernelSpace::new(u, 2, Ambient::Plus));
    }

    #[test]
    fn finite_rank_assembly_is_bounded() {
        let theta = BlaschkeProduct::z_pow(2);
        let alpha = BlaschkeProduct::z_pow(3);
        let zero = RationalFunction::zero();
        let pts = [TaylorPoint { t: ONE, n: 1 }];
        let s = build_finite_rank_symbol(&theta, &alpha, &zero, &zero, &pts, tol()).unwrap();
        let phi = s.phi().unwrap();
        assert!(phi.in_l_infinity(tol()));
        let sup = (0..512)
            .map(|k| {
                phi.eval(Complex64::from_polar(
                    1.0,
                    2.0 * PI * (k as f64 + 0.5) / 512.0,
                ))
                .norm()
            })
            .fold(0.0, f64::max);
        assert!(sup.is_finite() && sup < 1e3);

        let off = [TaylorPoint { t: c(0.5), n: 1 }];
        assert!(matches!(
            build_finite_rank_symbol(&theta, &alpha, &zero, &zero, &off, tol()),
            Err(Error::NotOnCircle { .. })
        ));

        let bad = build_with_taylor_terms(&theta, &alpha, &zero, &zero, &pts, &[0], &[1], tol());
        assert!(matches!(bad, Err(Error::UnboundedAssembly { .. })));
    }

    #[test]
    fn finite_rank_double_point() {
        let theta = BlaschkeProduct::z_pow(5);
        let alpha = BlaschkeProduct::z_pow(6);
        let t = Complex64::from_polar(1.0, 0.7);
        let r_plus = RationalFunction::from_factors(c(0.3), vec![], vec![c(2.0)]);
        let r_minus = RationalFunction::from_factors(c(-0.2), vec![], vec![c(0.4)]);
        let pts = [TaylorPoint { t, n: 2 }];
        let s = build_finite_rank_symbol(&theta, &alpha, &r_plus, &r_minus, &pts, tol()).unwrap();
        let d = s.finite_rank.as_ref().unwrap();
        assert_eq!((d.n0(), d.n1(), d.n2()), (2, 1, 1));
        assert!(s.phi().unwrap().in_l_infinity(tol()));
        let k = atto_kernel_closed_form(&s, tol()).unwrap();
        assert_eq!(k.dim(), 1);
    }
}
