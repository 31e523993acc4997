//! Fourier transforms of the Gaussian window `exp(-t^2/T^2)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::quadrature::{integrate_panels_unchecked, Quadrature, QuadraturePlan};
use crate::error::{Error, Result};

/// `π^{-1/2} ∫ e^{itξ} exp(-t²/T²) dt = T exp(-T²ξ²/4)`.
pub fn gaussian_window_transform(xi: f64, big_t: f64) -> f64 {
    big_t * (-0.25 * big_t * big_t * xi * xi).exp()
}

/// `π^{-1/2} ∫ it e^{itξ} exp(-t²/T²) dt = -(T³/2) ξ exp(-T²ξ²/4)`.
pub fn gaussian_window_transform_weighted(xi: f64, big_t: f64) -> f64 {
    -0.5 * big_t.powi(3) * xi * (-0.25 * big_t * big_t * xi * xi).exp()
}

fn window_quadrature<F>(xi: f64, big_t: f64, plan: &QuadraturePlan, f: F) -> Result<Quadrature<Complex64>>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    if !(big_t > 0.0) {
        return Err(Error::Domain(big_t, "gaussian window"));
    }
    let cutoff = plan.lhs_cutoff_factor * big_t;
    let q = integrate_panels_unchecked(f, -cutoff, cutoff, plan, |_| xi.abs() * big_t)?;
    let scale = PI.sqrt().recip();
    Ok(Quadrature {
        value: q.value * scale,
        errors: q.errors * scale,
    })
}

/// Quadrature of the defining integral of [`gaussian_window_transform`].
pub fn gaussian_window_transform_quadrature(
    xi: f64,
    big_t: f64,
    plan: &QuadraturePlan,
) -> Result<Quadrature<Complex64>> {
    window_quadrature(xi, big_t, plan, |t| {
        Complex64::from_polar((-(t / big_t).powi(2)).exp(), t * xi)
    })
}

/// Quadrature of the defining integral of
/// [`gaussian_window_transform_weighted`].
pub fn gaussian_window_transform_weighted_quadrature(
    xi: f64,
    big_t: f64,
    plan: &QuadraturePlan,
) -> Result<Quadrature<Complex64>> {
    window_quadrature(xi, big_t, plan, |t| {
        Complex64::new(0.0, t) * Complex64::from_polar((-(t / big_t).powi(2)).exp(), t * xi)
    })
}
