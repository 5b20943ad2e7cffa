//! JSON payloads. Complex numbers are `[re, im]` pairs and polynomial
//! coefficients are listed from the constant term upwards.

use num_complex::Complex64;
use pairker::oracle::OracleKernel;
use pairker::{Ambient, BlaschkeProduct, KernelSpace, Polynomial, RationalFunction};
use serde_json::{json, Value};

pub fn complex(c: Complex64) -> Value {
    json!([c.re, c.im])
}

pub fn complexes(cs: &[Complex64]) -> Value {
    Value::Array(cs.iter().copied().map(complex).collect())
}

pub fn poly(p: &Polynomial) -> Value {
    complexes(p.coeffs())
}

/// `{num, den}` with a monic denominator.
pub fn rational(f: &RationalFunction) -> Value {
    json!({ "num": poly(f.num()), "den": poly(f.den()) })
}

pub fn blaschke(b: &BlaschkeProduct) -> Value {
    json!({ "zeros": complexes(b.zeros()), "constant": complex(b.constant()) })
}

fn ambient(a: Ambient) -> &'static str {
    match a {
        Ambient::Plus => "H2+",
        Ambient::Minus => "H2-",
    }
}

/// `{u·q : deg q < dim}`; the zero space carries the multiplier 1.
pub fn exact_kernel(k: &KernelSpace) -> Value {
    json!({
        "dim": k.dim(),
        "multiplier": rational(k.multiplier()),
        "ambient": ambient(k.ambient()),
        "provenance": "exact",
    })
}

/// A numeric null space has no closed-form multiplier.
pub fn numeric_kernel(k: &OracleKernel, ambient_space: Ambient) -> Value {
    json!({
        "dim": k.dim(),
        "multiplier": Value::Null,
        "ambient": ambient(ambient_space),
        "provenance": "numeric",
        "order": k.order,
        "gap": finite(k.gap),
        "ill_separated": k.ill_separated,
    })
}

/// JSON has no infinities; an infinite gap means a perfectly separated spectrum.
pub fn finite(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

/// Multiplier and monomials, one line.
pub fn kernel_text(k: &KernelSpace) -> String {
    if k.is_zero() {
        return format!("{{0}} in {}", ambient(k.ambient()));
    }
    let monomials = match k.dim() {
        1 => "1".to_string(),
        2 => "1, z".to_string(),
        d => format!("1, z, ..., z^{}", d - 1),
    };
    format!(
        "dim {} in {}: ({}) * span{{{monomials}}}",
        k.dim(),
        ambient(k.ambient()),
        k.multiplier()
    )
}
