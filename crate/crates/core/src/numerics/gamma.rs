//! Complex log-gamma, gamma and real digamma.
//!
//! `ln_gamma` uses the Stirling series after shifting the argument to
//! `|z| >= 15` with the recurrence, and the reflection formula for
//! `Re z < 1/4`. The shift keeps the truncated series (12 Bernoulli terms)
//! below 1e-20 in absolute terms, so the working error is rounding in the
//! recurrence sum, about 1e-15 relative on the verified strip.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::bernoulli::bernoulli_even;
use super::summation::{ComplexSum, NeumaierSum};
use crate::error::{Error, Result};

const STIRLING_TERMS: usize = 12;
const STIRLING_MIN_MODULUS: f64 = 15.0;
const REFLECTION_THRESHOLD: f64 = 0.25;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// `ln sin(pi z)` on some branch; only used under `exp` or in differences
/// whose branch ambiguity is a multiple of `2 pi i`.
pub fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        return ln_sin_pi(z.conj()).conj();
    }
    // sin w = (i/2) e^{-iw} (1 - e^{2iw}); |e^{2iw}| <= 1 for Im w >= 0
    let w = z * PI;
    let i = Complex64::i();
    let u = (i * w * 2.0).exp();
    (i * 0.5).ln() - i * w + (Complex64::new(1.0, 0.0) - u).ln()
}

fn stirling(z: Complex64) -> Complex64 {
    let half_ln_two_pi = 0.5 * (2.0 * PI).ln();
    let mut acc = ComplexSum::new();
    acc.add((z - 0.5) * z.ln());
    acc.add(-z);
    acc.add(Complex64::new(half_ln_two_pi, 0.0));
    let z_inv = z.inv();
    let z_inv_sq = z_inv * z_inv;
    let mut power = z_inv;
    for k in 1..=STIRLING_TERMS {
        let two_k = 2.0 * k as f64;
        acc.add(power * (bernoulli_even(k) / (two_k * (two_k - 1.0))));
        power *= z_inv_sq;
    }
    acc.value()
}

/// Logarithm of the gamma function.
///
/// The imaginary part is a continuous log-gamma branch for `Re z >= 1/4`;
/// below that the reflection formula may shift it by a multiple of `2 pi`.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(z.re, "ln_gamma"));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::GammaPole(z.re));
    }
    if z.re < REFLECTION_THRESHOLD {
        let one_minus = Complex64::new(1.0, 0.0) - z;
        return Ok(Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma(one_minus)?);
    }
    if z.norm() >= STIRLING_MIN_MODULUS {
        return Ok(stirling(z));
    }
    let shift = (STIRLING_MIN_MODULUS - z.re).ceil().max(0.0) as usize;
    let mut logs = ComplexSum::new();
    for k in 0..shift {
        logs.add((z + k as f64).ln());
    }
    Ok(stirling(z + shift as f64) - logs.value())
}

/// The gamma function `Γ(z)`.
pub fn complex_gamma(z: Complex64) -> Result<Complex64> {
    let value = ln_gamma(z)?.exp();
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite("complex_gamma"))
    }
}

/// Real digamma `ψ(x) = Γ'(x)/Γ(x)` for `x > 0`.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(x, "digamma"));
    }
    const SHIFT_TO: f64 = 10.0;
    let mut acc = NeumaierSum::new();
    let mut y = x;
    while y < SHIFT_TO {
        acc.add(-1.0 / y);
        y += 1.0;
    }
    acc.add(y.ln());
    acc.add(-0.5 / y);
    let y_inv_sq = 1.0 / (y * y);
    let mut power = y_inv_sq;
    for k in 1..=10 {
        acc.add(-bernoulli_even(k) / (2.0 * k as f64) * power);
        power *= y_inv_sq;
    }
    Ok(acc.value())
}
