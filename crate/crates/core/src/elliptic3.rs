//! Closed form of the three-variable squared-multinomial generating function
//! `M(z1,z2,z3) = sum multinomial(a+b+c; a,b,c)^2 z1^a z2^b z3^c` as a complete
//! elliptic integral of the first kind. Arguments are the square roots
//! `x_i = sqrt(z_i)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::genfun::{m2_closed_form, mgen_step};
use crate::limits::Limits;
use crate::numkernel::{multinomial, LogReal};
use crate::quad::integrate;

/// Below this `x3` the two-variable closed form replaces the elliptic route.
pub const X3_SPECIALIZATION: f64 = 1e-8;

/// Roots `Ω_{σ,τ}` of the two quadratic factors `q_σ(ω) = (1 - x3 ω)(ω - x3) - (x1 - σ x2)^2 ω`.
/// Field names are `(σ, τ)` signs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OmegaRoots {
    pub plus_plus: f64,
    pub plus_minus: f64,
    pub minus_plus: f64,
    pub minus_minus: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EllipticFactorization {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub kappa_plus: f64,
    pub kappa_minus: f64,
    pub modulus: f64,
    pub prefactor: f64,
    /// `None` on the `x3 → 0` specialization path.
    pub omegas: Option<OmegaRoots>,
}

/// `q_σ(ω)` with `σ = ±1`.
pub fn q_sigma(x1: f64, x2: f64, x3: f64, sigma: f64, w: f64) -> f64 {
    (1.0 - x3 * w) * (w - x3) - (x1 - sigma * x2).powi(2) * w
}

/// The quartic `((1 - x3 ω)(ω - x3) - (x1^2 + x2^2) ω)^2 - (2 x1 x2 ω)^2`.
pub fn quartic(x1: f64, x2: f64, x3: f64, w: f64) -> f64 {
    ((1.0 - x3 * w) * (w - x3) - (x1 * x1 + x2 * x2) * w).powi(2) - (2.0 * x1 * x2 * w).powi(2)
}

pub fn omega_roots(x1: f64, x2: f64, x3: f64) -> Result<OmegaRoots> {
    if x3 <= 0.0 {
        return domain(format!("omega roots need x3 > 0 (got {x3})"));
    }
    let root = |sigma: f64, tau: f64| -> Result<f64> {
        let d = (x1 - sigma * x2).powi(2);
        let r1 = (1.0 + x3).powi(2) - d;
        let r2 = (1.0 - x3).powi(2) - d;
        if r1 < 0.0 || r2 < 0.0 {
            return domain(format!("negative radicand in omega roots at ({x1},{x2},{x3})"));
        }
        Ok((r1.sqrt() + tau * r2.sqrt()).powi(2) / (4.0 * x3))
    };
    Ok(OmegaRoots {
        plus_plus: root(1.0, 1.0)?,
        plus_minus: root(1.0, -1.0)?,
        minus_plus: root(-1.0, 1.0)?,
        minus_minus: root(-1.0, -1.0)?,
    })
}

/// `ϰ_τ = prod over σ1 σ2 σ3 = τ of sqrt(1 + σ1 x1 + σ2 x2 + σ3 x3)`.
pub fn kappa_tau(x1: f64, x2: f64, x3: f64, tau: i8) -> Result<f64> {
    let mut prod = 1.0;
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            let s3 = f64::from(tau) * s1 * s2;
            let v = 1.0 + s1 * x1 + s2 * x2 + s3 * x3;
            if v <= 0.0 {
                return domain(format!("1{s1:+}x1{s2:+}x2{s3:+}x3 is not positive at ({x1},{x2},{x3})"));
            }
            prod *= v.sqrt();
        }
    }
    Ok(prod)
}

/// Complete elliptic integral of the first kind in the modulus convention,
/// `K(k) = ∫_0^1 dt / sqrt((1-t^2)(1-k^2 t^2)) = π / (2 AGM(1, sqrt(1-k^2)))`.
pub fn elliptic_k(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k.abs()) || k.is_nan() {
        return domain(format!("elliptic K needs |k| < 1 (got {k})"));
    }
    let mut a = 1.0f64;
    let mut b = (1.0 - k * k).sqrt();
    for _ in 0..64 {
        if (a - b).abs() < 1e-16 * a {
            break;
        }
        let next = (0.5 * (a + b), (a * b).sqrt());
        if next == (a, b) {
            break;
        }
        (a, b) = next;
    }
    Ok(PI / (a + b))
}

pub fn factorize(x1: f64, x2: f64, x3: f64) -> Result<EllipticFactorization> {
    if x1 < 0.0 || x2 < 0.0 || x3 < 0.0 {
        return domain(format!("square-root arguments must be nonnegative ({x1},{x2},{x3})"));
    }
    let kappa_plus = kappa_tau(x1, x2, x3, 1)?;
    let kappa_minus = kappa_tau(x1, x2, x3, -1)?;
    let (sp, sm) = (kappa_plus.sqrt(), kappa_minus.sqrt());
    let modulus = if x3 < X3_SPECIALIZATION {
        modulus_specialization(x1, x2)
    } else {
        ((sp - sm) / (sp + sm)).powi(2)
    };
    let omegas = if x3 < X3_SPECIALIZATION {
        None
    } else {
        Some(omega_roots(x1, x2, x3)?)
    };
    Ok(EllipticFactorization {
        x1,
        x2,
        x3,
        kappa_plus,
        kappa_minus,
        modulus,
        prefactor: 8.0 / (PI * (sp + sm).powi(2)),
        omegas,
    })
}

/// The modulus on the plane `x3 = 0`, where `ϰ_+ = ϰ_-`.
pub fn modulus_specialization(_x1: f64, _x2: f64) -> f64 {
    0.0
}

/// `M(x1^2, x2^2, x3^2) = prefactor · K(modulus)`; for `x3 < X3_SPECIALIZATION`
/// the two-variable closed form `1/sqrt(1 - 2(z1+z2) + (z1-z2)^2)`.
pub fn m3_elliptic(x1: f64, x2: f64, x3: f64) -> Result<f64> {
    let f = factorize(x1, x2, x3)?;
    if f.omegas.is_none() {
        return Ok(m2_closed_form(x1 * x1, x2 * x2));
    }
    Ok(f.prefactor * elliptic_k(f.modulus)?)
}

/// Truncated series `sum_{a+b+c <= degree} multinomial^2 z1^a z2^b z3^c`.
pub fn m3_truncated_series(z: [f64; 3], degree: usize) -> f64 {
    let ln_z: Vec<f64> = z.iter().map(|v| v.ln()).collect();
    let mut terms = Vec::new();
    for a in 0..=degree {
        for b in 0..=degree - a {
            for c in 0..=degree - a - b {
                let m = LogReal::from_bigint(&multinomial(&[a as u64, b as u64, c as u64]));
                let mut ln_t = 2.0 * m.logmag();
                for (e, lz) in [a, b, c].into_iter().zip(&ln_z) {
                    if e > 0 {
                        ln_t += e as f64 * lz;
                    }
                }
                terms.push(ln_t);
            }
        }
    }
    // terms are positive; sum smallest first
    terms.sort_by(f64::total_cmp);
    terms.iter().map(|t| t.exp()).sum()
}

/// `M(x1^2, x2^2, x3^2)` by the one-step contour recurrence from the
/// two-variable closed form (complex principal branch; valid while the
/// rescaled arguments stay small on the unit circle).
pub fn m3_by_contour(x1: f64, x2: f64, x3: f64, limits: &Limits) -> Result<f64> {
    let one = Complex64::new(1.0, 0.0);
    let m2 = |a: &[Complex64]| one / ((one - a[0] - a[1]).powi(2) - a[0] * a[1] * 4.0).sqrt();
    let v = mgen_step(m2, &[x1 * x1, x2 * x2], x3, x3, limits)?;
    if v.im.abs() > 1e-9 * v.re.abs().max(1.0) {
        return Err(Error::Domain(format!("contour value has imaginary part {}", v.im)));
    }
    Ok(v.re)
}

/// `(1/π) ∫_{Ω+-}^{Ω--} dt / sqrt(x3^2 (t - Ω--)(Ω+- - t)(Ω++ - t)(Ω-+ - t))`,
/// the real-interval form of the same contour integral, with `t` mapped to a
/// cosine so the endpoint singularities cancel.
pub fn m3_by_interval(x1: f64, x2: f64, x3: f64) -> Result<f64> {
    let o = omega_roots(x1, x2, x3)?;
    let (a, b) = (o.plus_minus, o.minus_minus);
    if !(a <= b && b < 1.0 && 1.0 < o.minus_plus) {
        return domain("omega roots out of the small-argument ordering");
    }
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let integral = integrate(
        |phi| {
            let t = mid - half * phi.cos();
            1.0 / (x3 * ((o.plus_plus - t) * (o.minus_plus - t)).sqrt())
        },
        0.0,
        PI,
        1e-14,
    );
    Ok(integral / PI)
}
