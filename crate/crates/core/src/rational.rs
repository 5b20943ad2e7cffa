//! Rational functions on and around the unit circle.
//!
//! A [`RationalFunction`] is kept in factored form: a gain, a multiset of
//! zeros and a multiset of poles, with common zeros and poles cancelled. The
//! numerator and (monic) denominator polynomials are rebuilt from the roots
//! at construction, so products, quotients and reflections never call the
//! root finder; only sums do.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::{match_roots, same_roots, Polynomial, ROOT_TOL};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Roots closer than this to the origin are snapped onto it.
const ORIGIN_SNAP: f64 = 1e-14;

/// Width of the band around the unit circle treated as "on the circle".
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircleTol(pub f64);

impl Default for CircleTol {
    fn default() -> Self {
        CircleTol(1e-9)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Inside,
    OnCircle,
    Outside,
}

impl CircleTol {
    pub fn locate(self, r: Complex64) -> Location {
        let m = r.norm();
        if m < 1.0 - self.0 {
            Location::Inside
        } else if m > 1.0 + self.0 {
            Location::Outside
        } else {
            Location::OnCircle
        }
    }
}

#[derive(Clone, Debug)]
pub struct RationalFunction {
    gain: Complex64,
    zeros: Vec<Complex64>,
    poles: Vec<Complex64>,
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    /// `gain · Π(z − zeros) / Π(z − poles)`, with common factors cancelled.
    pub fn from_factors(gain: Complex64, zeros: Vec<Complex64>, poles: Vec<Complex64>) -> Self {
        if gain == ZERO {
            return Self::zero();
        }
        let snap = |r: Complex64| if r.norm() <= ORIGIN_SNAP { ZERO } else { r };
        let zeros: Vec<_> = zeros.into_iter().map(snap).collect();
        let poles: Vec<_> = poles.into_iter().map(snap).collect();
        let (_, zeros, poles) = match_roots(&zeros, &poles, ROOT_TOL);
        let num = Polynomial::from_roots(gain, &zeros);
        let den = Polynomial::from_roots(ONE, &poles);
        Self {
            gain,
            zeros,
            poles,
            num,
            den,
        }
    }

    pub fn from_polys(num: &Polynomial, den: &Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        Ok(Self::from_factors(
            num.leading() / den.leading(),
            num.roots()?,
            den.roots()?,
        ))
    }

    pub fn from_poly(p: &Polynomial) -> Result<Self> {
        Self::from_polys(p, &Polynomial::one())
    }

    pub fn zero() -> Self {
        Self {
            gain: ZERO,
            zeros: Vec::new(),
            poles: Vec::new(),
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_factors(c, Vec::new(), Vec::new())
    }

    /// The identity function `z`.
    pub fn z() -> Self {
        Self::z_pow(1)
    }

    /// `z^k` for any integer `k`.
    pub fn z_pow(k: i32) -> Self {
        let origin = vec![ZERO; k.unsigned_abs() as usize];
        if k >= 0 {
            Self::from_factors(ONE, origin, Vec::new())
        } else {
            Self::from_factors(ONE, Vec::new(), origin)
        }
    }

    /// `z − r`.
    pub fn linear(r: Complex64) -> Self {
        Self::from_factors(ONE, vec![r], Vec::new())
    }

    pub fn gain(&self) -> Complex64 {
        self.gain
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn poles(&self) -> &[Complex64] {
        &self.poles
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    /// Monic denominator.
    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.gain == ZERO
    }

    pub fn is_polynomial(&self) -> bool {
        self.poles.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.zeros.is_empty() && self.poles.is_empty()
    }

    /// Same function with gain 1 (monic numerator and denominator).
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::one();
        }
        Self::from_factors(ONE, self.zeros.clone(), self.poles.clone())
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let n: Complex64 = self.zeros.iter().map(|r| z - r).product();
        let d: Complex64 = self.poles.iter().map(|p| z - p).product();
        self.gain * n / d
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_factors(self.gain * s, self.zeros.clone(), self.poles.clone())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroSymbol("divisor"));
        }
        Ok(Self::from_factors(
            ONE / self.gain,
            self.poles.clone(),
            self.zeros.clone(),
        ))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    pub fn powi(&self, k: i32) -> Result<Self> {
        let base = if k < 0 { self.recip()? } else { self.clone() };
        let n = k.unsigned_abs() as usize;
        let mut zeros = Vec::with_capacity(base.zeros.len() * n);
        let mut poles = Vec::with_capacity(base.poles.len() * n);
        for _ in 0..n {
            zeros.extend_from_slice(&base.zeros);
            poles.extend_from_slice(&base.poles);
        }
        Ok(Self::from_factors(base.gain.powi(n as i32), zeros, poles))
    }

    /// The rational function agreeing with `conj(f)` on the unit circle,
    /// `z ↦ conj(f(1 / conj(z)))`.
    pub fn conj_reflect(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut gain = self.gain.conj();
        let mut zeros = Vec::new();
        let mut poles = Vec::new();
        for &r in &self.zeros {
            if r != ZERO {
                gain *= -r.conj();
                zeros.push(ONE / r.conj());
            }
        }
        for &p in &self.poles {
            if p != ZERO {
                gain /= -p.conj();
                poles.push(ONE / p.conj());
            }
        }
        let shift = self.poles.len() as i64 - self.zeros.len() as i64;
        let origin = std::iter::repeat_n(ZERO, shift.unsigned_abs() as usize);
        if shift > 0 {
            zeros.extend(origin);
        } else {
            poles.extend(origin);
        }
        Self::from_factors(gain, zeros, poles)
    }

    pub fn zeros_at(&self, tol: CircleTol, loc: Location) -> Vec<Complex64> {
        self.zeros
            .iter()
            .copied()
            .filter(|r| tol.locate(*r) == loc)
            .collect()
    }

    pub fn poles_at(&self, tol: CircleTol, loc: Location) -> Vec<Complex64> {
        self.poles
            .iter()
            .copied()
            .filter(|r| tol.locate(*r) == loc)
            .collect()
    }

    /// Bounded on the circle: no poles in the circle band.
    pub fn in_l_infinity(&self, tol: CircleTol) -> bool {
        self.poles_at(tol, Location::OnCircle).is_empty()
    }

    pub fn check_bounded(&self, tol: CircleTol) -> Result<()> {
        match self.poles_at(tol, Location::OnCircle).first() {
            Some(&at) => Err(Error::PoleOnCircle { at }),
            None => Ok(()),
        }
    }

    /// (#zeros in 𝔻) − (#poles in 𝔻), i.e. the index of `f` along the circle.
    pub fn winding_number(&self, tol: CircleTol) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::ZeroSymbol("winding argument"));
        }
        if let Some(&at) = self
            .zeros
            .iter()
            .chain(&self.poles)
            .find(|r| tol.locate(**r) == Location::OnCircle)
        {
            return Err(Error::VanishesOnCircle { at });
        }
        let inside_zeros = self.zeros_at(tol, Location::Inside).len() as i64;
        let inside_poles = self.poles_at(tol, Location::Inside).len() as i64;
        Ok(inside_zeros - inside_poles)
    }

    /// Taylor coefficients of `f` at `c` up to order `n − 1`, in powers of `(z − c)`.
    pub fn taylor(&self, c: Complex64, n: usize) -> Vec<Complex64> {
        let pad = |mut v: Vec<Complex64>| {
            v.resize(n.max(v.len()), ZERO);
            v
        };
        let num = pad(self.num.taylor_at(c));
        let den = pad(self.den.taylor_at(c));
        let mut out = vec![ZERO; n];
        for k in 0..n {
            let mut acc = num[k];
            for j in 1..=k {
                acc -= den[j] * out[k - j];
            }
            out[k] = acc / den[0];
        }
        out
    }

    /// Same gain and matching root multisets.
    pub fn approx_eq(&self, other: &Self, rel: f64) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        let scale = self.gain.norm().max(other.gain.norm());
        (self.gain - other.gain).norm() <= rel * scale && self.same_up_to_constant(other)
    }

    /// Equal after dropping constant factors.
    pub fn same_up_to_constant(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        same_roots(&self.zeros, &other.zeros, ROOT_TOL)
            && same_roots(&self.poles, &other.poles, ROOT_TOL)
    }

    fn sum(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (common, only_l, only_r) = match_roots(&self.poles, &rhs.poles, ROOT_TOL);
        let lhs_num = &self.num * &Polynomial::from_roots(ONE, &only_r);
        let rhs_num = &rhs.num * &Polynomial::from_roots(ONE, &only_l);
        let num = (&lhs_num + &rhs_num).chop(1e-14);
        if num.is_zero() {
            return Self::zero();
        }
        let mut poles = common;
        poles.extend(only_l);
        poles.extend(only_r);
        // Roots of a nonzero polynomial always exist; the companion eigen
        // solver only fails on non-finite input.
        let zeros = num
            .roots()
            .expect("finite nonzero polynomial has a root set");
        Self::from_factors(num.leading(), zeros, poles)
    }
}

/// Removes common factors of numerator and denominator; equivalent to a
/// round trip through [`RationalFunction::from_factors`].
pub fn rational_cancel(f: &RationalFunction) -> RationalFunction {
    RationalFunction::from_factors(f.gain, f.zeros.clone(), f.poles.clone())
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, 1e-9)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}] / [{}]", self.num, self.den)
        }
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        let mut zeros = self.zeros.clone();
        zeros.extend_from_slice(&rhs.zeros);
        let mut poles = self.poles.clone();
        poles.extend_from_slice(&rhs.poles);
        RationalFunction::from_factors(self.gain * rhs.gain, zeros, poles)
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    /// Panics when dividing by the zero function; see [`RationalFunction::checked_div`].
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_div(rhs)
            .expect("division by the zero function")
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        self.sum(rhs)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self.sum(&-rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        self.scale(-ONE)
    }
}

/// A symbol pair `(a, b)` for the paired operator `a P⁺ + b P⁻`.
#[derive(Clone, Debug)]
pub struct SymbolPair {
    pub a: RationalFunction,
    pub b: RationalFunction,
    degenerate: bool,
}

impl SymbolPair {
    /// Validates the standing assumptions: both symbols bounded on the circle
    /// and not identically zero.
    pub fn new(a: RationalFunction, b: RationalFunction, tol: CircleTol) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::ZeroSymbol("a"));
        }
        if b.is_zero() {
            return Err(Error::ZeroSymbol("b"));
        }
        a.check_bounded(tol)?;
        b.check_bounded(tol)?;
        let degenerate = a.approx_eq(&b, 1e-9);
        Ok(Self { a, b, degenerate })
    }

    /// `a ≡ b`.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// `(conj b, conj a)`, the pair whose projected kernel reflects onto
    /// the anti-analytic kernel of `self`.
    pub fn reflected(&self) -> Self {
        Self {
            a: self.b.conj_reflect(),
            b: self.a.conj_reflect(),
            degenerate: self.degenerate,
        }
    }

    pub fn with_a(&self, a: RationalFunction, tol: CircleTol) -> Result<Self> {
        Self::new(a, self.b.clone(), tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn circle(n: usize) -> impl Iterator<Item = Complex64> {
        (0..n).map(move |k| Complex64::from_polar(1.0, 2.0 * PI * (k as f64 + 0.37) / n as f64))
    }

    fn blaschke(l: f64) -> RationalFunction {
        &RationalFunction::linear(c(l))
            / &RationalFunction::from_factors(c(-l), vec![c(1.0 / l)], vec![])
    }

    #[test]
    fn cancel_examples() {
        let f = RationalFunction::from_polys(
            &Polynomial::from_real(&[-1.0, 0.0, 1.0]),
            &Polynomial::from_real(&[-1.0, 1.0]),
        )
        .unwrap();
        assert!(f.approx_eq(
            &RationalFunction::from_factors(ONE, vec![c(-1.0)], vec![]),
            1e-12
        ));

        let g = RationalFunction::from_polys(
            &Polynomial::from_real(&[-0.5, 1.0]),
            &Polynomial::from_real(&[-1.0, 2.0]),
        )
        .unwrap();
        assert!(g.is_constant());
        assert!((g.gain() - c(0.5)).norm() < 1e-14);

        let h = RationalFunction::from_factors(ONE, vec![c(0.5), c(2.0)], vec![c(2.0)]);
        assert!(h.approx_eq(&RationalFunction::linear(c(0.5)), 1e-14));
        assert_eq!(rational_cancel(&h).poles().len(), 0);
    }

    #[test]
    fn conj_reflect_examples() {
        let z = RationalFunction::z();
        assert!(z
            .conj_reflect()
            .approx_eq(&RationalFunction::z_pow(-1), 1e-14));

        // z − 0.5 ↦ (1 − 0.5 z)/z
        let f = RationalFunction::linear(c(0.5)).conj_reflect();
        let expect = RationalFunction::from_factors(c(-0.5), vec![c(2.0)], vec![ZERO]);
        assert!(f.approx_eq(&expect, 1e-14));

        let b = blaschke(0.5);
        assert!(b.conj_reflect().approx_eq(&b.recip().unwrap(), 1e-12));
    }

    #[test]
    fn conj_reflect_matches_conjugate_on_circle() {
        let f = RationalFunction::from_factors(
            Complex64::new(0.3, -1.2),
            vec![c(0.5), Complex64::new(0.0, 2.0), ZERO],
            vec![c(-3.0), Complex64::new(0.2, 0.1)],
        );
        let g = f.conj_reflect();
        for z in circle(100) {
            assert!((g.eval(z) - f.eval(z).conj()).norm() < 1e-10);
        }
        assert!(g.conj_reflect().approx_eq(&f, 1e-12));
    }

    #[test]
    fn winding_examples() {
        let tol = CircleTol::default();
        assert_eq!(RationalFunction::z().winding_number(tol), Ok(1));
        assert_eq!(RationalFunction::linear(c(2.0)).winding_number(tol), Ok(0));
        let f = &RationalFunction::linear(c(2.0)) * &RationalFunction::z_pow(-2);
        assert_eq!(f.winding_number(tol), Ok(-2));
        assert!(matches!(
            RationalFunction::linear(c(1.0)).winding_number(tol),
            Err(Error::VanishesOnCircle { .. })
        ));
    }

    #[test]
    fn winding_agrees_with_argument_increment() {
        // Trapezoid integration of d arg f along 512 circle samples.
        let f = &RationalFunction::linear(c(2.0)) * &RationalFunction::z_pow(-2);
        let n = 512;
        let pts: Vec<_> = (0..=n)
            .map(|k| f.eval(Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)))
            .collect();
        let total: f64 = pts.windows(2).map(|w| (w[1] / w[0]).arg()).sum();
        assert_eq!((total / (2.0 * PI)).round() as i64, -2);
    }

    #[test]
    fn sum_cancels_to_lower_degree() {
        let f = &RationalFunction::from_factors(ONE, vec![c(1.0), c(-1.0)], vec![])
            - &RationalFunction::z_pow(2);
        assert!(f.approx_eq(&RationalFunction::constant(c(-1.0)), 1e-12));
        let g = &RationalFunction::from_factors(ONE, vec![], vec![c(0.5)])
            + &RationalFunction::from_factors(ONE, vec![], vec![c(0.5)]);
        assert!(g.approx_eq(
            &RationalFunction::from_factors(c(2.0), vec![], vec![c(0.5)]),
            1e-12
        ));
    }

    #[test]
    fn taylor_of_geometric_series() {
        let f = RationalFunction::from_factors(c(-2.0), vec![], vec![c(2.0)]); // 1/(1 − z/2)
        let t = f.taylor(ZERO, 5);
        for (k, v) in t.iter().enumerate() {
            assert!((v - c(0.5f64.powi(k as i32))).norm() < 1e-14);
        }
    }

    #[test]
    fn symbol_pair_validation() {
        let tol = CircleTol::default();
        let unbounded = RationalFunction::from_factors(ONE, vec![], vec![c(1.0)]);
        assert!(matches!(
            SymbolPair::new(unbounded, RationalFunction::one(), tol),
            Err(Error::PoleOnCircle { .. })
        ));
        assert_eq!(
            SymbolPair::new(RationalFunction::zero(), RationalFunction::one(), tol).unwrap_err(),
            Error::ZeroSymbol("a")
        );
        let p = SymbolPair::new(RationalFunction::one(), RationalFunction::one(), tol).unwrap();
        assert!(p.is_degenerate());
    }
}
