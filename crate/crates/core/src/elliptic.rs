//! Jacobi elliptic functions and the incomplete elliptic integral of the
//! first kind.
//!
//! Every function here takes the elliptic **modulus** `k`, not the parameter.
//! The functions solve
//!
//! ```text
//! y'' = 2 k² y³ − (1 + k²) y,      y = sn(u; k)
//! ```
//!
//! so `k` enters squared. Standard references (DLMF, A&S, scipy) usually take
//! the parameter `m = k²`; convert before comparing.
//!
//! The amplitude and sn/cn/dn come from the descending Landen (AGM) scale with
//! the argument first reduced to `[−K, K]`; `F(φ, k)` uses Carlson's `R_F`
//! after reducing `φ` to `[−π/2, π/2]`.

use std::f64::consts::{FRAC_PI_2, PI};

use thiserror::Error;

/// Moduli at or above this value are treated as the hyperbolic limit for
/// quarter-period bookkeeping; `K` is reported as divergent there.
pub const MODULUS_CEILING: f64 = 1.0 - 1e-14;

/// Below this modulus the amplitude is taken from its two-term series.
const SERIES_MODULUS: f64 = 1e-8;

const AGM_MAX_ITER: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum EllipticError {
    #[error("modulus {modulus} outside the supported range")]
    Domain { modulus: f64 },
    #[error("elliptic integral diverges at phi = {phi} for modulus 1")]
    Divergent { phi: f64 },
    #[error("non-finite argument {value}")]
    NonFinite { value: f64 },
}

/// `(sn, cn, dn)` at a single `(u, k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticTriple {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// Complementary modulus `√(1 − k²)` without cancellation near `k = 1`.
#[inline]
pub fn complementary(modulus: f64) -> f64 {
    ((1.0 - modulus) * (1.0 + modulus)).sqrt()
}

fn check_modulus(modulus: f64, allow_one: bool) -> Result<(), EllipticError> {
    if !modulus.is_finite() {
        return Err(EllipticError::NonFinite { value: modulus });
    }
    if !(0.0..=1.0).contains(&modulus) || (!allow_one && modulus >= 1.0) {
        return Err(EllipticError::Domain { modulus });
    }
    Ok(())
}

fn check_finite(value: f64) -> Result<(), EllipticError> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(EllipticError::NonFinite { value })
    }
}

/// Complete integral `K(k) = F(π/2, k)` from the arithmetic-geometric mean.
pub fn complete_k(modulus: f64) -> Result<f64, EllipticError> {
    check_modulus(modulus, false)?;
    if modulus >= MODULUS_CEILING {
        return Err(EllipticError::Domain { modulus });
    }
    let mut a = 1.0_f64;
    let mut b = complementary(modulus);
    for _ in 0..AGM_MAX_ITER {
        if (a - b).abs() <= 4.0 * f64::EPSILON * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    Ok(PI / (2.0 * a))
}

/// Carlson's symmetric integral `R_F(x, y, z)` by duplication.
pub(crate) fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    const ERRTOL: f64 = 0.0008;
    let (mut x, mut y, mut z) = (x, y, z);
    loop {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        let mean = (x + y + z) / 3.0;
        let dx = (mean - x) / mean;
        let dy = (mean - y) / mean;
        let dz = (mean - z) / mean;
        if dx.abs().max(dy.abs()).max(dz.abs()) < ERRTOL {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / mean.sqrt();
        }
    }
}

/// `F(φ, k)` on the principal branch `|φ| ≤ π/2`.
fn ellip_f_principal(phi: f64, modulus: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    let kp2 = (1.0 - modulus) * (1.0 + modulus);
    // 1 − k² s² written as c² + k'² s² so that k → 1 keeps its digits.
    s * carlson_rf(c * c, c * c + kp2 * s * s, 1.0)
}

/// Incomplete elliptic integral of the first kind,
/// `F(φ, k) = ∫₀^φ dθ / √(1 − k² sin²θ)`.
///
/// Valid for `k ∈ [0, 1)` and any finite `φ` (quarter-period recurrence
/// `F(φ + jπ) = F(φ) + 2jK`), and for `k = 1` when `|φ| < π/2`.
pub fn ellip_f(phi: f64, modulus: f64) -> Result<f64, EllipticError> {
    check_modulus(modulus, true)?;
    check_finite(phi)?;
    if modulus == 1.0 {
        if phi.abs() >= FRAC_PI_2 {
            return Err(EllipticError::Divergent { phi });
        }
        return Ok(phi.sin().atanh());
    }
    let turns = (phi / PI).round();
    let reduced = phi - turns * PI;
    let principal = ellip_f_principal(reduced, modulus);
    if turns == 0.0 {
        return Ok(principal);
    }
    let quarter = complete_k(modulus).map_err(|_| EllipticError::Divergent { phi })?;
    Ok(2.0 * turns * quarter + principal)
}

/// Gudermannian `gd(u) = am(u, 1)`.
#[inline]
fn gudermannian(u: f64) -> f64 {
    u.sinh().atan()
}

/// Amplitude on `[−K, K]` by the descending Landen scale.
fn landen_am(u: f64, modulus: f64) -> f64 {
    let mut a = [0.0_f64; AGM_MAX_ITER + 1];
    let mut c = [0.0_f64; AGM_MAX_ITER + 1];
    a[0] = 1.0;
    c[0] = modulus;
    let mut b = complementary(modulus);
    let mut n = 0;
    while n < AGM_MAX_ITER && c[n].abs() > f64::EPSILON * a[n] {
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = (a[n] * b).sqrt();
        n += 1;
    }
    let mut phi = (2.0_f64).powi(n as i32) * a[n] * u;
    for j in (1..=n).rev() {
        phi = 0.5 * (phi + (c[j] / a[j] * phi.sin()).asin());
    }
    phi
}

/// Near-hyperbolic expansion in `k'² = 1 − k²`, used where `K` is not
/// representable.
fn hyperbolic_limit(u: f64, modulus: f64) -> (f64, EllipticTriple) {
    let kp2 = (1.0 - modulus) * (1.0 + modulus);
    let (sh, ch) = (u.sinh(), u.cosh());
    let (t, s) = (u.tanh(), 1.0 / ch);
    let mix = if ch.is_finite() { sh * ch } else { f64::INFINITY };
    let corr_minus = 0.25 * kp2 * (mix - u);
    let corr_plus = 0.25 * kp2 * (mix + u);
    let am = gudermannian(u) + if s > 0.0 { corr_minus * s } else { 0.0 };
    let sn = t + if s > 0.0 { corr_minus * s * s } else { 0.0 };
    let cn = s - if s > 0.0 { corr_minus * t * s } else { 0.0 };
    let dn = s + if s > 0.0 { corr_plus * t * s } else { 0.0 };
    (am, EllipticTriple { sn, cn, dn })
}

/// Amplitude together with the triple, sharing one Landen pass.
fn am_and_triple(u: f64, modulus: f64) -> Result<(f64, EllipticTriple), EllipticError> {
    check_modulus(modulus, true)?;
    check_finite(u)?;
    if modulus == 1.0 {
        let s = 1.0 / u.cosh();
        return Ok((gudermannian(u), EllipticTriple { sn: u.tanh(), cn: s, dn: s }));
    }
    if modulus >= MODULUS_CEILING {
        return Ok(hyperbolic_limit(u, modulus));
    }
    if modulus < SERIES_MODULUS {
        let (s, c) = u.sin_cos();
        let am = u - 0.25 * modulus * modulus * (u - s * c);
        let (sn, cn) = am.sin_cos();
        let dn = (1.0 - modulus * modulus * sn * sn).sqrt();
        return Ok((am, EllipticTriple { sn, cn, dn }));
    }
    let quarter = complete_k(modulus)?;
    let turns = (u / (2.0 * quarter)).round();
    let reduced = u - turns * 2.0 * quarter;
    let phi = landen_am(reduced, modulus);
    let (sn, cn) = phi.sin_cos();
    // whichever form of dn² avoids cancellation
    let dn = if sn * sn < 0.5 {
        (1.0 - modulus * modulus * sn * sn).sqrt()
    } else {
        ((1.0 - modulus) * (1.0 + modulus) + modulus * modulus * cn * cn).sqrt()
    };
    let sign = if (turns as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Ok((
        phi + turns * PI,
        EllipticTriple {
            sn: sign * sn,
            cn: sign * cn,
            dn,
        },
    ))
}

/// Jacobi amplitude `am(u, k)`, the inverse of [`ellip_f`] in `φ`.
/// Satisfies `am(u + 2K) = am(u) + π`.
pub fn jacobi_am(u: f64, modulus: f64) -> Result<f64, EllipticError> {
    am_and_triple(u, modulus).map(|(am, _)| am)
}

/// `sn`, `cn`, `dn` at `(u, k)`. At `k = 1` these are `tanh u`, `sech u`,
/// `sech u`.
pub fn jacobi_sn_cn_dn(u: f64, modulus: f64) -> Result<EllipticTriple, EllipticError> {
    am_and_triple(u, modulus).map(|(_, triple)| triple)
}
