//! One-variable hyperbolic geometry of the unit disc, written to stay accurate
//! both for nearby points and for points close to the circle.

use crate::point::{c, C64};

/// `1 - |z|^2`, evaluated as `(1 - |z|)(1 + |z|)`.
pub fn one_minus_abs_sq(z: C64) -> f64 {
    let r = z.norm();
    (1.0 - r) * (1.0 + r)
}

/// Disc automorphism sending `a` to 0: `(x - a) / (1 - conj(a) x)`.
pub fn mobius(a: C64, x: C64) -> C64 {
    (x - a) / (c(1.0, 0.0) - a.conj() * x)
}

/// Inverse of [`mobius`]: `(y + a) / (1 + conj(a) y)`.
pub fn mobius_inv(a: C64, y: C64) -> C64 {
    (y + a) / (c(1.0, 0.0) + a.conj() * y)
}

/// Turns a pseudo-hyperbolic value into a distance. `sigma_direct` is the
/// value computed from a difference quotient (accurate when small) and
/// `log_p` is `ln(1 - sigma^2)` computed from a product of `1 - |.|^2`
/// factors (accurate near the boundary).
pub(crate) fn distance_from_parts(sigma_direct: f64, log_p: f64) -> f64 {
    if sigma_direct < 0.5 {
        return sigma_direct.atanh();
    }
    if !log_p.is_finite() {
        return f64::INFINITY;
    }
    let p = log_p.exp();
    let sigma = (1.0 - p).max(0.0).sqrt();
    (1.0 + sigma).ln() - 0.5 * log_p
}

/// Poincare distance normalized by `k(0, r) = artanh r`. Returns infinity
/// when an argument is not strictly inside the disc.
pub fn poincare_distance_unchecked(z: C64, w: C64) -> f64 {
    let dz = one_minus_abs_sq(z);
    let dw = one_minus_abs_sq(w);
    if dz <= 0.0 || dw <= 0.0 {
        return f64::INFINITY;
    }
    let denom = (c(1.0, 0.0) - w.conj() * z).norm();
    let sigma = (z - w).norm() / denom;
    distance_from_parts(sigma, dz.ln() + dw.ln() - 2.0 * denom.ln())
}

/// Poincare distance in the half-plane `{Re s > 0}`.
pub fn right_half_plane_distance(s1: C64, s2: C64) -> f64 {
    if s1.re <= 0.0 || s2.re <= 0.0 {
        return f64::INFINITY;
    }
    let denom = (s1 + s2.conj()).norm();
    let sigma = (s1 - s2).norm() / denom;
    distance_from_parts(sigma, (4.0 * s1.re * s2.re).ln() - 2.0 * denom.ln())
}

/// Infinitesimal Poincare norm `|v| / (1 - |z|^2)`.
pub fn poincare_norm(z: C64, v: C64) -> f64 {
    v.norm() / one_minus_abs_sq(z)
}

/// Infinitesimal norm of the half-plane `{Re s > 0}`: `|v| / (2 Re s)`.
pub fn right_half_plane_norm(s: C64, v: C64) -> f64 {
    v.norm() / (2.0 * s.re)
}

/// Hyperbolic disc automorphism with fixed points `+-sigma`, attracting at
/// `sigma`, moving the origin by Kobayashi distance `step / 2`.
pub fn hyperbolic(sigma: C64, step: f64, z: C64) -> C64 {
    let tau = (0.5 * step).tanh();
    let u = sigma.conj() * z;
    sigma * (u + tau) / (c(1.0, 0.0) + u * tau)
}

/// Parabolic disc automorphism with Denjoy-Wolff point `sigma`: translation by
/// `i * step` in the half-plane `(sigma + z) / (sigma - z)`.
pub fn parabolic(sigma: C64, step: f64, z: C64) -> C64 {
    let u = sigma.conj() * z;
    // w = (1 + u)/(1 - u); w' = w + i b; u' = (w' - 1)/(w' + 1)
    // simplified so that no division by (1 - u) occurs near u = 1
    let ib = c(0.0, step);
    let num = c(2.0, 0.0) * u + ib * (c(1.0, 0.0) - u);
    let den = c(2.0, 0.0) + ib * (c(1.0, 0.0) - u);
    sigma * num / den
}
