//! Exact kernels of Toeplitz and paired operators in canonical form.
//!
//! Every kernel computed here is a space `u · 𝒫_{<d}`: a fixed rational
//! multiplier `u` times all polynomials of degree below `d`. Inclusion,
//! equality and intersection with `θH²₊` reduce to divisibility of
//! multipliers plus degree bookkeeping.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::factorization::{wiener_hopf, BlaschkeProduct};
use crate::poly::{match_roots, ROOT_TOL};
use crate::rational::{CircleTol, Location, RationalFunction, SymbolPair};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Which Hardy space a kernel lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ambient {
    /// Analytic Hardy space `H²₊`.
    Plus,
    /// Its orthogonal complement `H²₋ = z̄ conj(H²₊)`.
    Minus,
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ambient::Plus => "H2+",
            Ambient::Minus => "H2-",
        })
    }
}

/// The space `{ u·q : deg q < d }`.
#[derive(Clone, Debug)]
pub struct KernelSpace {
    multiplier: RationalFunction,
    dim: usize,
    ambient: Ambient,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inclusion {
    SubsetStrict,
    Equal,
    SupersetStrict,
    Incomparable,
}

impl KernelSpace {
    pub fn new(multiplier: RationalFunction, dim: usize, ambient: Ambient) -> Self {
        if dim == 0 || multiplier.is_zero() {
            return Self::zero(ambient);
        }
        Self {
            multiplier: multiplier.monic(),
            dim,
            ambient,
        }
    }

    pub fn zero(ambient: Ambient) -> Self {
        Self {
            multiplier: RationalFunction::one(),
            dim: 0,
            ambient,
        }
    }

    /// Polynomials of degree below `d`, i.e. the model space of `zᵈ`.
    pub fn polynomials(d: usize) -> Self {
        Self::new(RationalFunction::one(), d, Ambient::Plus)
    }

    pub fn multiplier(&self) -> &RationalFunction {
        &self.multiplier
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    /// `u, u z, …, u z^{d−1}`.
    pub fn basis(&self) -> Vec<RationalFunction> {
        (0..self.dim)
            .map(|j| &self.multiplier * &RationalFunction::z_pow(j as i32))
            .collect()
    }

    /// `f = u q` for a polynomial `q` of degree below `d`.
    pub fn contains(&self, f: &RationalFunction) -> bool {
        if f.is_zero() {
            return true;
        }
        if self.dim == 0 {
            return false;
        }
        let q = f / &self.multiplier;
        q.is_polynomial() && q.zeros().len() < self.dim
    }

    /// The same set of functions multiplied by `h`.
    pub fn times(&self, h: &RationalFunction) -> Self {
        Self::new(&self.multiplier * h, self.dim, self.ambient)
    }

    fn le(&self, other: &Self) -> bool {
        if self.dim == 0 {
            return true;
        }
        if other.dim == 0 {
            return false;
        }
        let p = &self.multiplier / &other.multiplier;
        p.is_polynomial() && p.zeros().len() + self.dim <= other.dim
    }

    /// Set equality of the two spaces.
    pub fn same_space(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.le(other) && other.le(self)
    }

    /// Elements of the space that vanish at 0 divided by `z` stay in the
    /// space. Checked on a basis of `K ∩ zH²₊`.
    pub fn is_nearly_invariant(&self) -> bool {
        if self.ambient != Ambient::Plus || self.dim == 0 {
            return true;
        }
        let z = BlaschkeProduct::z_pow(1);
        let vanishing = intersect_inner(self, &z).expect("ambient checked above");
        let shift = RationalFunction::z_pow(-1);
        let from_intersection = vanishing.basis().into_iter();
        let from_basis = self
            .basis()
            .into_iter()
            .filter(|e| e.eval(ZERO).norm() <= 1e-12 * e.eval(ONE).norm().max(1.0));
        from_intersection
            .chain(from_basis)
            .all(|e| self.contains(&(&e * &shift)))
    }
}

impl PartialEq for KernelSpace {
    fn eq(&self, other: &Self) -> bool {
        self.same_space(other)
    }
}

impl fmt::Display for KernelSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim == 0 {
            write!(f, "{{0}} in {}", self.ambient)
        } else {
            write!(
                f,
                "({}) * P<{} in {}",
                self.multiplier, self.dim, self.ambient
            )
        }
    }
}

pub fn kernel_include(a: &KernelSpace, b: &KernelSpace) -> Result<Inclusion> {
    if a.ambient != b.ambient {
        return Err(Error::AmbientMismatch);
    }
    Ok(match (a.le(b), b.le(a)) {
        (true, true) => Inclusion::Equal,
        (true, false) => Inclusion::SubsetStrict,
        (false, true) => Inclusion::SupersetStrict,
        (false, false) => Inclusion::Incomparable,
    })
}

/// `ker T_g` for a bounded rational symbol `g`.
pub fn toeplitz_kernel(g: &RationalFunction, tol: CircleTol) -> Result<KernelSpace> {
    if g.is_zero() {
        return Err(Error::ZeroSymbol("g"));
    }
    g.check_bounded(tol)?;
    // A circle zero z₀ of the numerator may be traded for a zero at the
    // origin without changing the kernel.
    let zeros = g
        .zeros()
        .iter()
        .map(|&r| {
            if tol.locate(r) == Location::OnCircle {
                ZERO
            } else {
                r
            }
        })
        .collect();
    let g = RationalFunction::from_factors(g.gain(), zeros, g.poles().to_vec());
    let wh = wiener_hopf(&g, tol)?;
    if wh.kappa >= 0 {
        return Ok(KernelSpace::zero(Ambient::Plus));
    }
    Ok(KernelSpace::new(
        wh.g_plus.recip()?,
        (-wh.kappa) as usize,
        Ambient::Plus,
    ))
}

/// Multiplies both symbols by their denominators and divides out common
/// zeros, returning coprime polynomials with the same paired kernel.
fn coprime_polynomials(
    a: &RationalFunction,
    b: &RationalFunction,
) -> (RationalFunction, RationalFunction) {
    let mut za = a.zeros().to_vec();
    za.extend_from_slice(b.poles());
    let mut zb = b.zeros().to_vec();
    zb.extend_from_slice(a.poles());
    let (_, za, zb) = match_roots(&za, &zb, ROOT_TOL);
    (
        RationalFunction::from_factors(a.gain(), za, Vec::new()),
        RationalFunction::from_factors(b.gain(), zb, Vec::new()),
    )
}

fn has_circle_zero(p: &RationalFunction, tol: CircleTol) -> bool {
    !p.zeros_at(tol, Location::OnCircle).is_empty()
}

/// `ker⁺ S_{a,b} = P⁺ ker(aP⁺ + bP⁻)`.
pub fn paired_kernel_plus(pair: &SymbolPair, tol: CircleTol) -> Result<KernelSpace> {
    let (a, b) = coprime_polynomials(&pair.a, &pair.b);
    if !has_circle_zero(&b, tol) {
        return toeplitz_kernel(&(&a / &b), tol);
    }
    if has_circle_zero(&a, tol) {
        return Err(Error::BothSidedCircleZeros);
    }
    // Mirror pair: its second symbol conj(a) is circle-free, so the call
    // below lands in the Toeplitz branch. The anti-analytic kernel of (a, b)
    // is z̄ conj(ker⁺ of the mirror), and P⁺-parts are recovered through
    // φ₊ = −(b/a) φ₋.
    let mirror = SymbolPair::new(b.conj_reflect(), a.conj_reflect(), tol)?;
    let k = paired_kernel_plus(&mirror, tol)?;
    if k.is_zero() {
        return Ok(KernelSpace::zero(Ambient::Plus));
    }
    let d = k.dim;
    let u = &(&(&b / &a) * &k.multiplier.conj_reflect()) * &RationalFunction::z_pow(-(d as i32));
    debug_assert!(u.poles_at(tol, Location::Inside).is_empty());
    Ok(KernelSpace::new(u, d, Ambient::Plus))
}

/// `ker⁻ S_{a,b} = P⁻ ker(aP⁺ + bP⁻)`, computed as `z̄ conj(ker⁺ S_{b̄,ā})`.
pub fn paired_kernel_minus(pair: &SymbolPair, tol: CircleTol) -> Result<KernelSpace> {
    let k = paired_kernel_plus(&pair.reflected(), tol)?;
    if k.is_zero() {
        return Ok(KernelSpace::zero(Ambient::Minus));
    }
    let d = k.dim;
    let u = &k.multiplier.conj_reflect() * &RationalFunction::z_pow(-(d as i32));
    Ok(KernelSpace::new(u, d, Ambient::Minus))
}

/// `ker⁻ S_{a,b}` as the image of `ker⁺ S_{a,b}` under `φ₊ ↦ −(a/b) φ₊`.
pub fn paired_kernel_minus_via_m(pair: &SymbolPair, tol: CircleTol) -> Result<KernelSpace> {
    let k = paired_kernel_plus(pair, tol)?;
    if k.is_zero() {
        return Ok(KernelSpace::zero(Ambient::Minus));
    }
    let ratio = &pair.a / &pair.b;
    Ok(KernelSpace::new(
        &k.multiplier * &ratio,
        k.dim,
        Ambient::Minus,
    ))
}

/// `φ₊ ↦ −(a/b) φ₊` on `ker⁺ S_{a,b}`.
pub fn map_m(
    pair: &SymbolPair,
    element: &RationalFunction,
    tol: CircleTol,
) -> Result<RationalFunction> {
    if !paired_kernel_plus(pair, tol)?.contains(element) {
        return Err(Error::NotMember);
    }
    Ok(-&(&(&pair.a / &pair.b) * element))
}

/// `max(0, d − k)` with `d = dim ker⁺ S_{a,b}` and `k = deg B`; equal to
/// `dim ker⁺ S_{aB,b}`.
pub fn blaschke_dim_formula(
    pair: &SymbolPair,
    b: &BlaschkeProduct,
    tol: CircleTol,
) -> Result<usize> {
    let d = paired_kernel_plus(pair, tol)?.dim;
    Ok(d.saturating_sub(b.degree()))
}

/// `K ∩ θH²₊` for `K ⊂ H²₊`.
pub fn intersect_inner(k: &KernelSpace, theta: &BlaschkeProduct) -> Result<KernelSpace> {
    if k.ambient != Ambient::Plus {
        return Err(Error::AmbientMismatch);
    }
    if k.is_zero() {
        return Ok(k.clone());
    }
    // Zeros of θ already carried by the multiplier are free; the rest must
    // be zeros of the polynomial factor.
    let (_, missing, _) = match_roots(theta.zeros(), k.multiplier.zeros(), ROOT_TOL);
    if missing.len() >= k.dim {
        return Ok(KernelSpace::zero(Ambient::Plus));
    }
    let w = RationalFunction::from_factors(ONE, missing.clone(), Vec::new());
    Ok(KernelSpace::new(
        &k.multiplier * &w,
        k.dim - missing.len(),
        Ambient::Plus,
    ))
}

/// Splits `ker⁺ S_{a,b}` as `ker⁺ S_{aB,b} ⊕ span{φ₁, …, φ_k}` by peeling the
/// zeros `λ₁, …, λ_k` of `B` one at a time. Witness `φᵢ` lies in
/// `ker⁺ S_{aBᵢ,b}` but not in `ker⁺ S_{aB_{i−1},b}`, where `Bᵢ` is `B`
/// without its first `i` zeros, and is scaled so that `φᵢ(λᵢ) = 1`.
pub fn basis_completion(
    pair: &SymbolPair,
    b: &BlaschkeProduct,
    tol: CircleTol,
) -> Result<(KernelSpace, Vec<RationalFunction>)> {
    let full = paired_kernel_plus(pair, tol)?;
    let k = b.degree();
    if full.dim <= k {
        return Err(Error::Precondition(format!(
            "basis completion needs dim ker⁺ = {} > deg B = {k}",
            full.dim
        )));
    }
    let mut chain = (0..=k)
        .map(|i| {
            let a = &pair.a * &b.peel(i).to_rational();
            paired_kernel_plus(&pair.with_a(a, tol)?, tol)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut witnesses = Vec::with_capacity(k);
    for i in 1..=k {
        let lambda = b.zeros()[i - 1];
        let (outer, inner) = (&chain[i], &chain[i - 1]);
        let w = witness(outer, inner, lambda).ok_or_else(|| {
            Error::Precondition(format!("no witness separates step {i} of the chain"))
        })?;
        witnesses.push(w);
    }
    Ok((chain.swap_remove(0), witnesses))
}

/// An element of `outer \ inner` not vanishing at `lambda`, normalized to
/// value 1 there. Tries monomials, then two-term combinations.
fn witness(
    outer: &KernelSpace,
    inner: &KernelSpace,
    lambda: Complex64,
) -> Option<RationalFunction> {
    let d = outer.dim;
    let mut candidates: Vec<Vec<(usize, f64)>> = (0..d).map(|j| vec![(j, 1.0)]).collect();
    for j in 0..d {
        for l in j + 1..d {
            candidates.push(vec![(j, 1.0), (l, 1.0)]);
            candidates.push(vec![(j, 2.0), (l, 1.0)]);
        }
    }
    let u = &outer.multiplier;
    let scale = u.eval(lambda).norm().max(1e-300);
    candidates.into_iter().find_map(|terms| {
        let q = terms.iter().fold(RationalFunction::zero(), |acc, &(j, c)| {
            &acc + &RationalFunction::z_pow(j as i32).scale(Complex64::new(c, 0.0))
        });
        let w = u * &q;
        let value = w.eval(lambda);
        (value.norm() > 1e-8 * scale && !inner.contains(&w)).then(|| w.scale(ONE / value))
    })
}
