//! Jacobi elliptic functions and the real/imaginary error functions.
//!
//! The elliptic functions take the *modulus* `m` (not the parameter `m²`):
//! `sn² + cn² = 1` and `dn² + m² sn² = 1`. They are evaluated by descending
//! Landen transformation (arithmetic-geometric mean) after reducing the
//! argument modulo the real period `4K(m)`. Within `1e-9` of `m = 1` and for
//! small enough |u| the hyperbolic limit with a first-order correction in the
//! complementary parameter `1 - m²` is used instead; further out the
//! correction grows like `e^{|u|}` and the AGM path takes over again.

use std::f64::consts::{FRAC_2_SQRT_PI, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest |x| accepted by [`erf_imag`]. `erfi(26)` is about `2.2e291`, the
/// next integer argument overflows `f64`.
pub const ERFI_MAX_ARG: f64 = 26.0;

/// Distance from `m = 1` below which the hyperbolic limit forms are used.
pub const HYPERBOLIC_SWITCH: f64 = 1e-9;

/// Elliptic modulus in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct EllipticModulus(f64);

impl EllipticModulus {
    pub const ZERO: Self = Self(0.0);
    pub const ONE: Self = Self(1.0);

    pub fn new(m: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&m) {
            Ok(Self(m))
        } else {
            Err(Error::InvalidModulus(m))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Complementary parameter `1 - m²`, computed without cancellation.
    #[inline]
    pub fn complementary_parameter(self) -> f64 {
        (1.0 - self.0) * (1.0 + self.0)
    }
}

impl TryFrom<f64> for EllipticModulus {
    type Error = Error;

    fn try_from(m: f64) -> Result<Self> {
        Self::new(m)
    }
}

impl From<EllipticModulus> for f64 {
    fn from(m: EllipticModulus) -> f64 {
        m.0
    }
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= f64::EPSILON * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    a
}

/// Complete elliptic integral of the first kind `K(m)` for modulus `m`.
/// Returns `+inf` at `m = 1`.
pub fn complete_k(m: EllipticModulus) -> f64 {
    let kc2 = m.complementary_parameter();
    if kc2 == 0.0 {
        return f64::INFINITY;
    }
    PI / (2.0 * agm(1.0, kc2.sqrt()))
}

/// `(sn, cn, dn)` evaluated together; they share the AGM descent.
pub fn jacobi_sncndn(u: f64, m: EllipticModulus) -> (f64, f64, f64) {
    let k = m.value();
    if k == 0.0 {
        return (u.sin(), u.cos(), 1.0);
    }
    let kc2 = m.complementary_parameter();
    if 1.0 - k < HYPERBOLIC_SWITCH && kc2 * (2.0 * u.abs()).exp() <= 1e-6 {
        return hyperbolic_limit(u, kc2);
    }

    let period = 4.0 * complete_k(m);
    let u = u - period * (u / period).round();

    const MAX_LEVELS: usize = 16;
    let mut a = [0.0; MAX_LEVELS + 1];
    let mut c = [0.0; MAX_LEVELS + 1];
    a[0] = 1.0;
    c[0] = k;
    let mut b = kc2.sqrt();
    let mut levels = 0;
    while levels < MAX_LEVELS && c[levels].abs() > f64::EPSILON * a[levels] {
        let (an, bn) = (a[levels], b);
        a[levels + 1] = 0.5 * (an + bn);
        c[levels + 1] = 0.5 * (an - bn);
        b = (an * bn).sqrt();
        levels += 1;
    }

    let mut phi = (1u64 << levels) as f64 * a[levels] * u;
    for j in (1..=levels).rev() {
        let ratio = (c[j] / a[j] * phi.sin()).clamp(-1.0, 1.0);
        phi = 0.5 * (phi + ratio.asin());
    }
    let (sn, cn) = phi.sin_cos();
    let dn = (cn * cn + kc2 * sn * sn).sqrt();
    (sn, cn, dn)
}

// First-order expansion in the complementary parameter around m = 1.
fn hyperbolic_limit(u: f64, kc2: f64) -> (f64, f64, f64) {
    let th = u.tanh();
    let sech = 1.0 / u.cosh();
    if kc2 == 0.0 {
        return (th, sech, sech);
    }
    let sh = u.sinh();
    let quarter = 0.25 * kc2;
    let sn = th + quarter * (th - u * sech * sech);
    let cn = sech - quarter * (sh - u * sech) * th;
    let dn = sech + quarter * (sh + u * sech) * th;
    (sn, cn, dn)
}

/// Jacobi elliptic sine `sn(u, m)`.
pub fn jacobi_sn(u: f64, m: EllipticModulus) -> f64 {
    jacobi_sncndn(u, m).0
}

/// Jacobi elliptic cosine `cn(u, m)`.
pub fn jacobi_cn(u: f64, m: EllipticModulus) -> f64 {
    jacobi_sncndn(u, m).1
}

/// Jacobi delta amplitude `dn(u, m)`; always `>= sqrt(1 - m²)`.
pub fn jacobi_dn(u: f64, m: EllipticModulus) -> f64 {
    jacobi_sncndn(u, m).2
}

/// Real error function.
#[inline]
pub fn erf_real(x: f64) -> f64 {
    libm::erf(x)
}

/// Complementary error function `1 - erf(x)`, accurate in the upper tail.
#[inline]
pub fn erfc_real(x: f64) -> f64 {
    libm::erfc(x)
}

const ERFI_SERIES_LIMIT: f64 = 7.0;

/// Imaginary error function `erfi(x) = erf(ix)/i = (2/√π) ∫₀ˣ e^{t²} dt`.
///
/// Below |x| = 7 the Maclaurin series is summed (all terms positive, so no
/// cancellation). Above it, `erfi(x) = (2/√π) e^{x²} D(x)` with the Dawson
/// integral `D` from its asymptotic series, truncated at the smallest term.
/// Arguments beyond [`ERFI_MAX_ARG`] are rejected.
pub fn erf_imag(x: f64) -> Result<f64> {
    if !x.is_finite() || x.abs() > ERFI_MAX_ARG {
        return Err(Error::ErfiOverflow(x));
    }
    let ax = x.abs();
    let value = if ax < ERFI_SERIES_LIMIT {
        erfi_series(ax)
    } else {
        FRAC_2_SQRT_PI * exp_square(ax) * dawson_asymptotic(ax)
    };
    Ok(value.copysign(x))
}

fn erfi_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    for n in 1..1000 {
        term *= x2 / n as f64;
        let contribution = term / (2 * n + 1) as f64;
        sum += contribution;
        if contribution <= f64::EPSILON * 0.25 * sum {
            break;
        }
    }
    FRAC_2_SQRT_PI * sum
}

// e^{x²} with the rounding error of x² folded back in.
fn exp_square(x: f64) -> f64 {
    let hi = x * x;
    let lo = x.mul_add(x, -hi);
    hi.exp() * (1.0 + lo)
}

fn dawson_asymptotic(x: f64) -> f64 {
    let inv = 1.0 / (2.0 * x * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..200 {
        let next = term * (2 * n - 1) as f64 * inv;
        if next >= term {
            break;
        }
        term = next;
        sum += term;
        if term <= f64::EPSILON * 0.25 * sum {
            break;
        }
    }
    sum / (2.0 * x)
}

#[cfg(test)]
#[path = "../tests/support/mod.rs"]
#[allow(dead_code)]
mod support;
