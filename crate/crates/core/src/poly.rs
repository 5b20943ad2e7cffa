//! Dense univariate polynomials with complex coefficients.
//!
//! Coefficients are stored in ascending order (index = power of `z`). The
//! leading coefficient is nonzero unless the polynomial is identically zero.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Pairing tolerance for root matching (relative to `max(1, |r|)`).
pub const ROOT_TOL: f64 = 1e-7;

/// Residual acceptance for computed roots, `|p(r)| / ||p||`.
pub const ROOT_RESIDUAL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == ZERO) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![ZERO; k + 1];
        coeffs[k] = ONE;
        Self { coeffs }
    }

    /// `lead · Π (z − r)`.
    pub fn from_roots(lead: Complex64, roots: &[Complex64]) -> Self {
        let mut coeffs = vec![lead];
        for &r in roots {
            let mut next = vec![ZERO; coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            coeffs = next;
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or(ZERO)
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Drops leading coefficients below `rel · ||p||`. Used after additions
    /// where the top coefficients cancel up to rounding.
    pub fn chop(&self, rel: f64) -> Self {
        let bound = rel * self.norm();
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.norm() <= bound) {
            coeffs.pop();
        }
        Self::new(coeffs)
    }

    /// Euclidean division `self = q · d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        let dd = d.degree().ok_or(Error::ZeroPolynomial)?;
        let Some(n) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if n < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let lead = d.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![ZERO; n - dd + 1];
        for k in (0..=n - dd).rev() {
            let q = rem[k + dd] / lead;
            quot[k] = q;
            for (j, &c) in d.coeffs.iter().enumerate() {
                rem[k + j] -= q * c;
            }
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Synthetic division by `(z − c)`: returns quotient and remainder `p(c)`.
    fn deflate(&self, c: Complex64) -> (Polynomial, Complex64) {
        if self.coeffs.is_empty() {
            return (Self::zero(), ZERO);
        }
        let n = self.coeffs.len();
        let mut quot = vec![ZERO; n - 1];
        let mut acc = ZERO;
        for k in (0..n).rev() {
            acc = acc * c + self.coeffs[k];
            if k > 0 {
                quot[k - 1] = acc;
            }
        }
        (Self::new(quot), acc)
    }

    /// Coefficients of `p` in powers of `(z − c)`.
    pub fn taylor_at(&self, c: Complex64) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        let mut q = self.clone();
        while !q.is_zero() {
            let (next, r) = q.deflate(c);
            out.push(r);
            q = next;
        }
        out
    }

    /// All complex roots with multiplicity.
    ///
    /// Exact zero low-order coefficients give exact roots at the origin; the
    /// rest come from the eigenvalues of the companion matrix, followed by a
    /// clustering pass for multiple roots and Newton polishing of simple ones.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let n = self.degree().ok_or(Error::ZeroPolynomial)?;
        let shift = self.coeffs.iter().take_while(|c| **c == ZERO).count();
        let mut roots = vec![ZERO; shift];
        let rest = Polynomial::new(self.coeffs[shift..].to_vec());
        let m = n - shift;
        match m {
            0 => {}
            1 => roots.push(-rest.coeffs[0] / rest.coeffs[1]),
            _ => roots.extend(rest.nonzero_roots()?),
        }
        Ok(roots)
    }

    fn nonzero_roots(&self) -> Result<Vec<Complex64>> {
        let m = self.degree().unwrap_or(0);
        let lead = self.leading();
        let mut companion = DMatrix::<Complex64>::zeros(m, m);
        for i in 1..m {
            companion[(i, i - 1)] = ONE;
        }
        for i in 0..m {
            companion[(i, m - 1)] = -self.coeffs[i] / lead;
        }
        let schur = nalgebra::linalg::Schur::try_new(companion, f64::EPSILON, 10_000)
            .ok_or(Error::RootFinding { degree: m })?;
        let (_, t) = schur.unpack();
        let raw: Vec<Complex64> = (0..m).map(|i| t[(i, i)]).collect();
        if raw.iter().any(|r| !r.re.is_finite() || !r.im.is_finite()) {
            return Err(Error::RootFinding { degree: m });
        }
        Ok(self.refine(raw))
    }

    fn refine(&self, raw: Vec<Complex64>) -> Vec<Complex64> {
        let norm = self.norm();
        let dp = self.derivative();
        let mut out = Vec::with_capacity(raw.len());
        for cluster in clusters(&raw, 1e-4) {
            if cluster.len() == 1 {
                out.push(self.newton(cluster[0], &dp));
                continue;
            }
            let c = cluster.iter().sum::<Complex64>() / cluster.len() as f64;
            let mut q = self.clone();
            let mut rem = 0.0;
            for _ in 0..cluster.len() {
                let (next, r) = q.deflate(c);
                rem += r.norm();
                q = next;
            }
            if rem <= ROOT_RESIDUAL * norm {
                out.extend(std::iter::repeat_n(c, cluster.len()));
            } else {
                out.extend(cluster.iter().map(|&r| self.newton(r, &dp)));
            }
        }
        out
    }

    fn newton(&self, mut r: Complex64, dp: &Polynomial) -> Complex64 {
        let mut res = self.eval(r).norm();
        for _ in 0..8 {
            let d = dp.eval(r);
            if d == ZERO || res == 0.0 {
                break;
            }
            let next = r - self.eval(r) / d;
            let next_res = self.eval(next).norm();
            if next_res < res {
                r = next;
                res = next_res;
            } else {
                break;
            }
        }
        r
    }
}

/// Single-linkage clusters with relative radius `rel · max(1, |r|)`.
fn clusters(roots: &[Complex64], rel: f64) -> Vec<Vec<Complex64>> {
    let n = roots.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            let scale = roots[i].norm().max(roots[j].norm()).max(1.0);
            if (roots[i] - roots[j]).norm() <= rel * scale {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a] = b;
            }
        }
    }
    let mut groups: Vec<(usize, Vec<Complex64>)> = Vec::new();
    for (i, &r) in roots.iter().enumerate() {
        let root = find(&mut label, i);
        match groups.iter_mut().find(|(l, _)| *l == root) {
            Some((_, g)) => g.push(r),
            None => groups.push((root, vec![r])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

/// Whether two roots pair under the relative tolerance `tol`.
pub fn roots_match(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
}

/// Splits two root multisets into (common, only-in-a, only-in-b) by greedy
/// nearest pairing within `tol`.
pub fn match_roots(
    a: &[Complex64],
    b: &[Complex64],
    tol: f64,
) -> (Vec<Complex64>, Vec<Complex64>, Vec<Complex64>) {
    let mut used = vec![false; b.len()];
    let mut common = Vec::new();
    let mut only_a = Vec::new();
    for &r in a {
        let best = b
            .iter()
            .enumerate()
            .filter(|(j, s)| !used[*j] && roots_match(r, **s, tol))
            .min_by(|(_, s), (_, t)| (r - **s).norm().total_cmp(&(r - **t).norm()));
        match best {
            Some((j, _)) => {
                used[j] = true;
                common.push(r);
            }
            None => only_a.push(r),
        }
    }
    let only_b = b
        .iter()
        .zip(&used)
        .filter(|(_, u)| !**u)
        .map(|(s, _)| *s)
        .collect();
    (common, only_a, only_b)
}

/// Whether two root multisets coincide under pairing tolerance `tol`.
pub fn same_roots(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let (_, ra, rb) = match_roots(a, b, tol);
    ra.is_empty() && rb.is_empty()
}

/// Monic gcd of two nonzero polynomials by root matching.
pub fn poly_gcd(p: &Polynomial, q: &Polynomial) -> Result<Polynomial> {
    let (common, _, _) = match_roots(&p.roots()?, &q.roots()?, ROOT_TOL);
    Ok(Polynomial::from_roots(ONE, &common))
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == ZERO {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            match k {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |v: &[Complex64], k: usize| v.get(k).copied().unwrap_or(ZERO);
        Polynomial::new(
            (0..n)
                .map(|k| get(&self.coeffs, k) + get(&rhs.coeffs, k))
                .collect(),
        )
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}
