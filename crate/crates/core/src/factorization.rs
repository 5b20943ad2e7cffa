//! Zero classification relative to the unit circle, finite Blaschke
//! products, inner–outer factorization of polynomials and Wiener–Hopf
//! factorization of rational symbols.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::{match_roots, Polynomial, ROOT_TOL};
use crate::rational::{CircleTol, Location, RationalFunction};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `c · Π (z − λᵢ)/(1 − conj(λᵢ) z)` with every `λᵢ` in the open disk and
/// `|c| = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlaschkeProduct {
    zeros: Vec<Complex64>,
    constant: Complex64,
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<Complex64>, constant: Complex64, tol: CircleTol) -> Result<Self> {
        if let Some(&zero) = zeros.iter().find(|l| tol.locate(**l) != Location::Inside) {
            return Err(Error::BlaschkeZeroOutsideDisk { zero });
        }
        let modulus = constant.norm();
        if (modulus - 1.0).abs() > 1e-9 {
            return Err(Error::NotUnimodular { modulus });
        }
        Ok(Self { zeros, constant })
    }

    pub fn from_zeros(zeros: Vec<Complex64>, tol: CircleTol) -> Result<Self> {
        Self::new(zeros, ONE, tol)
    }

    /// The constant function 1.
    pub fn one() -> Self {
        Self {
            zeros: Vec::new(),
            constant: ONE,
        }
    }

    /// `zⁿ`.
    pub fn z_pow(n: usize) -> Self {
        Self {
            zeros: vec![ZERO; n],
            constant: ONE,
        }
    }

    /// Recognizes a rational inner function: zeros inside the disk, poles at
    /// their reflections, unimodular gain.
    pub fn from_rational(f: &RationalFunction, tol: CircleTol) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::ZeroSymbol("inner function"));
        }
        let zeros = f.zeros().to_vec();
        if let Some(&zero) = zeros.iter().find(|l| tol.locate(**l) != Location::Inside) {
            return Err(Error::BlaschkeZeroOutsideDisk { zero });
        }
        let reflected: Vec<_> = zeros
            .iter()
            .filter(|l| **l != ZERO)
            .map(|l| ONE / l.conj())
            .collect();
        let (_, extra_poles, missing) = match_roots(f.poles(), &reflected, ROOT_TOL);
        if !extra_poles.is_empty() || !missing.is_empty() {
            return Err(Error::Precondition(format!(
                "{f} is not a finite Blaschke product"
            )));
        }
        let bare = Self {
            zeros,
            constant: ONE,
        };
        let constant = f.eval(ONE) / bare.eval(ONE);
        Self::new(bare.zeros, constant, tol)
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn constant(&self) -> Complex64 {
        self.constant
    }

    /// Number of zeros, which is also the dimension of the model space.
    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.zeros
            .iter()
            .map(|l| (z - l) / (ONE - l.conj() * z))
            .product::<Complex64>()
            * self.constant
    }

    pub fn to_rational(&self) -> RationalFunction {
        let mut gain = self.constant;
        let mut poles = Vec::new();
        for l in &self.zeros {
            if *l != ZERO {
                gain *= -ONE / l.conj();
                poles.push(ONE / l.conj());
            }
        }
        RationalFunction::from_factors(gain, self.zeros.clone(), poles)
    }

    /// Same zeros with the first `k` removed.
    pub fn peel(&self, k: usize) -> Self {
        Self {
            zeros: self.zeros[k.min(self.zeros.len())..].to_vec(),
            constant: self.constant,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut zeros = self.zeros.clone();
        zeros.extend_from_slice(&other.zeros);
        Self {
            zeros,
            constant: self.constant * other.constant,
        }
    }
}

impl fmt::Display for BlaschkeProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B[")?;
        for (i, l) in self.zeros.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "]")?;
        if self.constant != ONE {
            write!(f, " * ({})", self.constant)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ZeroClasses {
    pub inside: Vec<Complex64>,
    pub on_circle: Vec<Complex64>,
    pub outside: Vec<Complex64>,
}

pub fn classify_roots(roots: &[Complex64], tol: CircleTol) -> ZeroClasses {
    let mut out = ZeroClasses::default();
    for &r in roots {
        match tol.locate(r) {
            Location::Inside => out.inside.push(r),
            Location::OnCircle => out.on_circle.push(r),
            Location::Outside => out.outside.push(r),
        }
    }
    out
}

pub fn classify_zeros(p: &Polynomial, tol: CircleTol) -> Result<ZeroClasses> {
    Ok(classify_roots(&p.roots()?, tol))
}

/// `p = inner · outer` with `inner` the Blaschke product over the zeros of
/// `p` in the disk.
pub fn inner_outer(p: &Polynomial, tol: CircleTol) -> Result<(BlaschkeProduct, RationalFunction)> {
    let f = RationalFunction::from_poly(p)?;
    inner_outer_rational(&f, tol)
}

/// Inner–outer split of a rational function analytic on the closed disk.
pub fn inner_outer_rational(
    f: &RationalFunction,
    tol: CircleTol,
) -> Result<(BlaschkeProduct, RationalFunction)> {
    if f.is_zero() {
        return Err(Error::ZeroSymbol("inner-outer argument"));
    }
    if !f.poles_at(tol, Location::Inside).is_empty() || !f.in_l_infinity(tol) {
        return Err(Error::PoleInRegion("the closed disk"));
    }
    if let Some(&at) = f.zeros_at(tol, Location::OnCircle).first() {
        return Err(Error::CircleZero { at });
    }
    let inner = BlaschkeProduct::from_zeros(f.zeros_at(tol, Location::Inside), tol)?;
    let outer = f.checked_div(&inner.to_rational())?;
    Ok((inner, outer))
}

/// Blaschke product over the zeros of `f` strictly inside the disk; zeros
/// on the circle and poles are ignored.
pub fn inner_part(f: &RationalFunction, tol: CircleTol) -> BlaschkeProduct {
    BlaschkeProduct {
        zeros: f.zeros_at(tol, Location::Inside),
        constant: ONE,
    }
}

/// `g = g₋ · z^κ · g₊` with `g₊^{±1}` analytic on the closed disk and
/// `g₋^{±1}` analytic outside the open disk including ∞, normalized by
/// `g₋(∞) = 1`.
#[derive(Clone, Debug)]
pub struct WienerHopfFactors {
    pub g_minus: RationalFunction,
    pub kappa: i64,
    pub g_plus: RationalFunction,
}

impl WienerHopfFactors {
    pub fn reconstruct(&self) -> RationalFunction {
        let zk = RationalFunction::z_pow(self.kappa as i32);
        &(&self.g_minus * &zk) * &self.g_plus
    }
}

pub fn wiener_hopf(g: &RationalFunction, tol: CircleTol) -> Result<WienerHopfFactors> {
    if g.is_zero() {
        return Err(Error::ZeroSymbol("g"));
    }
    let zeros = classify_roots(g.zeros(), tol);
    let poles = classify_roots(g.poles(), tol);
    if let Some(&at) = zeros.on_circle.iter().chain(&poles.on_circle).next() {
        return Err(Error::NotFactorable { at });
    }
    let nz = zeros.inside.len();
    let np = poles.inside.len();
    let mut minus_poles = poles.inside.clone();
    minus_poles.extend(std::iter::repeat_n(ZERO, nz));
    let mut minus_zeros = zeros.inside.clone();
    minus_zeros.extend(std::iter::repeat_n(ZERO, np));
    let g_minus = RationalFunction::from_factors(ONE, minus_zeros, minus_poles);
    let g_plus = RationalFunction::from_factors(g.gain(), zeros.outside, poles.outside);
    Ok(WienerHopfFactors {
        g_minus,
        kappa: nz as i64 - np as i64,
        g_plus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn circle(n: usize) -> impl Iterator<Item = Complex64> {
        (0..n).map(move |k| Complex64::from_polar(1.0, 2.0 * PI * (k as f64 + 0.21) / n as f64))
    }

    #[test]
    fn classify_examples() {
        let tol = CircleTol::default();
        let p = Polynomial::from_roots(ONE, &[ZERO, c(1.0), c(3.0)]);
        let cls = classify_zeros(&p, tol).unwrap();
        assert_eq!(cls.inside.len(), 1);
        assert!(cls.inside[0].norm() < 1e-12);
        assert_eq!(cls.on_circle.len(), 1);
        assert_eq!(cls.outside.len(), 1);

        let q = Polynomial::from_roots(ONE, &[c(0.999999999)]);
        let cls = classify_zeros(&q, CircleTol(1e-6)).unwrap();
        assert_eq!(cls.on_circle.len(), 1);
    }

    #[test]
    fn blaschke_is_unimodular_on_circle() {
        let tol = CircleTol::default();
        let b = BlaschkeProduct::from_zeros(vec![c(0.5), Complex64::new(0.0, -0.3), ZERO], tol)
            .unwrap();
        let r = b.to_rational();
        for z in circle(64) {
            assert!((b.eval(z).norm() - 1.0).abs() < 1e-12);
            assert!((r.eval(z) - b.eval(z)).norm() < 1e-12);
        }
        let back = BlaschkeProduct::from_rational(&r, tol).unwrap();
        assert_eq!(back.degree(), 3);
        assert!((back.constant() - ONE).norm() < 1e-12);
        assert!(matches!(
            BlaschkeProduct::from_zeros(vec![c(2.0)], tol),
            Err(Error::BlaschkeZeroOutsideDisk { .. })
        ));
    }

    #[test]
    fn inner_outer_examples() {
        let tol = CircleTol::default();
        let p = Polynomial::from_roots(ONE, &[c(0.5), c(2.0)]);
        let (inner, outer) = inner_outer(&p, tol).unwrap();
        assert_eq!(inner.zeros().len(), 1);
        let expect = RationalFunction::from_polys(
            &(&Polynomial::from_real(&[1.0, -0.5]) * &Polynomial::from_real(&[-2.0, 1.0])),
            &Polynomial::one(),
        )
        .unwrap();
        assert!(outer.approx_eq(&expect, 1e-12));

        let (inner, outer) = inner_outer(&Polynomial::monomial(3), tol).unwrap();
        assert_eq!(inner.degree(), 3);
        assert!(outer.approx_eq(&RationalFunction::one(), 1e-12));

        let (inner, _) = inner_outer(&Polynomial::from_real(&[-3.0, 1.0]), tol).unwrap();
        assert_eq!(inner.degree(), 0);

        assert!(matches!(
            inner_outer(&Polynomial::from_real(&[-1.0, 1.0]), tol),
            Err(Error::CircleZero { .. })
        ));
    }

    #[test]
    fn wiener_hopf_examples() {
        let tol = CircleTol::default();
        let wh = wiener_hopf(&RationalFunction::z_pow(-3), tol).unwrap();
        assert_eq!(wh.kappa, -3);
        assert!(wh.g_minus.approx_eq(&RationalFunction::one(), 1e-14));
        assert!(wh.g_plus.approx_eq(&RationalFunction::one(), 1e-14));

        let b = BlaschkeProduct::from_zeros(vec![c(0.5)], tol)
            .unwrap()
            .to_rational();
        let wh = wiener_hopf(&b, tol).unwrap();
        assert_eq!(wh.kappa, 1);
        let gm = RationalFunction::from_factors(ONE, vec![c(0.5)], vec![ZERO]);
        assert!(wh.g_minus.approx_eq(&gm, 1e-12));
        let gp = RationalFunction::from_factors(c(-2.0), vec![], vec![c(2.0)]);
        assert!(wh.g_plus.approx_eq(&gp, 1e-12));
        for z in circle(32) {
            assert!((wh.reconstruct().eval(z) - b.eval(z)).norm() < 1e-9);
        }

        let g = &RationalFunction::linear(c(2.0)) * &RationalFunction::z_pow(-2);
        let wh = wiener_hopf(&g, tol).unwrap();
        assert_eq!(wh.kappa, -2);
        assert!(wh
            .g_plus
            .approx_eq(&RationalFunction::linear(c(2.0)), 1e-12));

        assert!(matches!(
            wiener_hopf(&RationalFunction::linear(c(-1.0)), tol),
            Err(Error::NotFactorable { .. })
        ));
    }
}
