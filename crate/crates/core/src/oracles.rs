//! Independent evaluations of the intermediate objects in the reciprocity
//! argument: the shifted moment `F(0)`, its three Fourier-side pieces, the
//! Taylor-approximated cosine sum, the residue-class/character split, the
//! double-pole residue and the Mellin pairs.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::characters::{cosine_twisted_sum, enumerate_characters, modular_inverse, unit_root};
use crate::error::{Error, Result};
use crate::lfunctions::{hurwitz_raw, EulerMaclaurin};
use crate::moments::{relabel, zeta_frequency, zeta_on_line, Estimate, ReciprocityInstance};
use crate::numerics::{
    complex_gamma, integrate_panels, integrate_panels_unchecked, ComplexSum, NeumaierSum,
    Quadrature, QuadraturePlan,
};

/// Number of terms past the cut-off used to estimate a truncated tail.
const TAIL_PROBE: u64 = 16;

/// `d(k)` for `0 <= k <= n` (with `d(0) = 0`).
pub fn divisor_counts(n: u64) -> Vec<u32> {
    let mut d = vec![0u32; n as usize + 1];
    for i in 1..=n {
        let mut j = i;
        while j <= n {
            d[j as usize] += 1;
            j += i;
        }
    }
    d
}

/// `nm`-cut-off `X = sum_cutoff_multiplier · T · p / q`.
pub fn sum_cutoff(inst: &ReciprocityInstance, plan: &QuadraturePlan) -> u64 {
    (plan.sum_cutoff_multiplier * inst.big_t() * inst.p() as f64 / inst.q() as f64).ceil() as u64
}

fn both_signs<F>(t: f64, f: F) -> [Complex64; 2]
where
    F: Fn(f64) -> [Complex64; 2],
{
    let a = f(t);
    let b = f(-t);
    [a[0] + b[0], a[1] + b[1]]
}

/// `[F(0), pole correction]` in one pass over the nodes.
fn f0_and_pole(inst: &ReciprocityInstance, plan: &QuadraturePlan) -> Result<Quadrature<[Complex64; 2]>> {
    plan.validate()?;
    let em = EulerMaclaurin::from(plan);
    let big_t = inst.big_t();
    let twist = inst.twist_frequency();
    let cutoff = plan.lhs_cutoff_factor * big_t;
    let integrand = |t: f64| {
        // ζ(1/2 - it) = conj ζ(1/2 + it) for real t
        let z = zeta_on_line(t.abs(), &em);
        both_signs(t, |u| {
            let zeta_plus = if u >= 0.0 { z } else { z.conj() };
            let zeta_minus = zeta_plus.conj();
            let window = (-(u / big_t).powi(2)).exp();
            let phase = Complex64::from_polar(window, u * twist);
            let pole = Complex64::new(-0.5, u).inv();
            [
                phase * zeta_minus * (zeta_plus - pole),
                phase * zeta_minus * pole,
            ]
        })
    };
    integrate_panels(integrand, 0.0, cutoff, plan, zeta_frequency(twist))
}

/// Direct quadrature of
/// `F(0) = ∫ (p/q)^{it} ζ(1/2-it) (ζ(1/2+it) - (-1/2+it)^{-1}) exp(-t²/T²) dt`.
pub fn f_at_zero_direct(inst: &ReciprocityInstance, plan: &QuadraturePlan) -> Result<Quadrature<Complex64>> {
    let q = f0_and_pole(inst, plan).map_err(|e| relabel(e, "f_at_zero_direct"))?;
    Ok(Quadrature {
        value: q.value[0],
        errors: q.errors[0],
    })
}

/// `∫ (p/q)^{it} ζ(1/2-it) (-1/2+it)^{-1} exp(-t²/T²) dt`, so that
/// `F(0) = lhs - pole_correction`.
pub fn pole_correction(inst: &ReciprocityInstance, plan: &QuadraturePlan) -> Result<Quadrature<Complex64>> {
    let q = f0_and_pole(inst, plan).map_err(|e| relabel(e, "pole_correction"))?;
    Ok(Quadrature {
        value: q.value[1],
        errors: q.errors[1],
    })
}

/// Which `y`-kernel a log-sum integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kernel {
    /// `∫ e^{-y/T} sin(A e^{2y/T}) e^{-y²} dy`
    Sine,
    /// `∫ e^{-y/T} sin(A e^{2y/T}) y e^{-y²} dy`
    SineMoment,
    /// `Im ∫ e((kq/p) e^{2y/T}) y e^{-y² - y/T} dy`
    ExponentialMoment,
}

/// `∫_{-y_max}^{y_max}` of a kernel at frequency `A = 2π k q / p`.
fn kernel_integral(kernel: Kernel, k: u64, inst: &ReciprocityInstance, plan: &QuadraturePlan) -> Result<Quadrature<f64>> {
    let big_t = inst.big_t();
    let ratio = k as f64 * inst.q() as f64 / inst.p() as f64;
    let amplitude = 2.0 * PI * ratio;
    let frequency = move |y: f64| amplitude * (2.0 / big_t) * (2.0 * y / big_t).exp();
    let y_max = plan.y_max;
    match kernel {
        Kernel::Sine => integrate_panels_unchecked(
            |y: f64| (-y / big_t - y * y).exp() * (amplitude * (2.0 * y / big_t).exp()).sin(),
            -y_max,
            y_max,
            plan,
            frequency,
        ),
        Kernel::SineMoment => integrate_panels_unchecked(
            |y: f64| y * (-y / big_t - y * y).exp() * (amplitude * (2.0 * y / big_t).exp()).sin(),
            -y_max,
            y_max,
            plan,
            frequency,
        ),
        Kernel::ExponentialMoment => {
            let q: Quadrature<Complex64> = integrate_panels_unchecked(
                |y: f64| {
                    let turns = ratio * (2.0 * y / big_t).exp();
                    Complex64::from_polar(y * (-y * y - y / big_t).exp(), 2.0 * PI * turns)
                },
                -y_max,
                y_max,
                plan,
                frequency,
            )?;
            Ok(Quadrature {
                value: q.value.im,
                errors: q.errors.im,
            })
        }
    }
}

/// `Σ_{k<=X} weight(k)/k · kernel(k)` with a probe of the truncated tail.
fn log_sum(
    kernel: Kernel,
    weight: impl Fn(u64) -> f64,
    cutoff: u64,
    inst: &ReciprocityInstance,
    plan: &QuadraturePlan,
) -> Result<(Estimate, f64)> {
    let mut acc = NeumaierSum::new();
    let mut error = 0.0;
    for k in 1..=cutoff {
        let w = weight(k);
        if w == 0.0 {
            continue;
        }
        let q = kernel_integral(kernel, k, inst, plan)?;
        acc.add(w / k as f64 * q.value);
        error += (w / k as f64).abs() * q.errors;
    }
    let mut tail = 0.0;
    for k in cutoff + 1..=cutoff + TAIL_PROBE {
        let q = kernel_integral(kernel, k, inst, plan)?;
        tail += (weight(k) / k as f64 * q.value).abs();
    }
    Ok((
        Estimate {
            value: acc.value(),
            error_estimate: error,
        },
        tail,
    ))
}

fn checked(estimate: Estimate, tail: f64, scale: f64, plan: &QuadraturePlan, what: &str) -> Result<Estimate> {
    let out = Estimate {
        value: scale * estimate.value,
        error_estimate: scale.abs() * (estimate.error_estimate + tail),
    };
    if out.error_estimate > plan.target_abs_tol {
        return Err(Error::ToleranceNotMet {
            what: what.to_string(),
            value: out.value,
            estimate: out.error_estimate,
            tolerance: plan.target_abs_tol,
        });
    }
    Ok(out)
}

/// `π^{-1/2} (p/q)^{1/2} Σ_{nm<=X} (nm)^{-1} ∫ e^{-y/T} sin((2πnmq/p) e^{2y/T}) e^{-y²} dy`.
pub fn f1_at_zero(inst: &ReciprocityInstance, plan: &QuadraturePlan) -> Result<Estimate> {
    plan.validate()?;
    let x = sum_cutoff(inst, plan);
    let d = divisor_counts(x + TAIL_PROBE);
    let (est, tail) = log_sum(Kernel::Sine, |k| d[k as usize] as f64, x, inst, plan)?;
    let scale = (inst.p() as f64 / inst.q() as f64).sqrt() / PI.sqrt();
    checked(est, tail, scale, plan, "f1_at_zero")
}

/// The `p`/`q`-swapped companion of [`f1_at_zero`].
pub fn f1_at_zero_swapped(inst: &ReciprocityInstance, plan: &QuadraturePlan) -> Result<Estimate> {
    f1_at_zero(&inst.swapped(), plan)
}

/// `2π^{-1/2} (p/q)^{1/2} Σ_{n<=X} n^{-1} ∫ e^{-y/T} sin((2πnq/p) e^{2y/T}) e^{-y²} dy`.
pub fn f3_at_zero(inst: &ReciprocityInstance, plan: &QuadraturePlan) -> Result<Estimate> {
    plan.validate()?;
    let x = sum_cutoff(inst, plan);
    let (est, tail) = log_sum(Kernel::Sine, |_| 1.0, x, inst, plan)?;
    let scale = 2.0 * (inst.p() as f64 / inst.q() as f64).sqrt() / PI.sqrt();
    checked(est, tail, scale, plan, "f3_at_zero")
}

/// `(2T/√π) (p/q)^{1/2} Σ (nm)^{-1} Im ∫ e((nmq/p) e^{2y/T}) y e^{-y²-y/T} dy`.
pub fn f2_at_zero_exact(inst: &ReciprocityInstance, plan: &QuadraturePlan) -> Result<Estimate> {
    f2_with_kernel(Kernel::ExponentialMoment, inst, plan)
}

/// [`f2_at_zero_exact`] written with the real sine kernel.
pub fn f2_at_zero_sine_form(inst: &ReciprocityInstance, plan: &QuadraturePlan) -> Result<Estimate> {
    f2_with_kernel(Kernel::SineMoment, inst, plan)
}

fn f2_with_kernel(kernel: Kernel, inst: &ReciprocityInstance, plan: &QuadraturePlan) -> Result<Estimate> {
    plan.validate()?;
    let x = sum_cutoff(inst, plan);
    let d = divisor_counts(x + TAIL_PROBE);
    let (est, tail) = log_sum(kernel, |k| d[k as usize] as f64, x, inst, plan)?;
    let scale = 2.0 * inst.big_t() / PI.sqrt() * (inst.p() as f64 / inst.q() as f64).sqrt();
    checked(est, tail, scale, plan, "f2_at_zero_exact")
}

/// Gaussian weight `exp(-(2π k q/(pT))²)` of the cosine sum.
fn cos_sum_weight(inst: &ReciprocityInstance) -> impl Fn(u64) -> f64 {
    let scale = 2.0 * PI * inst.q() as f64 / (inst.p() as f64 * inst.big_t());
    move |k: u64| (-(scale * k as f64).powi(2)).exp()
}

/// `cos(2π k q / p)` from the exact residue `kq mod p`.
fn cos_rational(k: u64, q: u64, p: u64) -> f64 {
    unit_root(((k % p) * (q % p)) as i128 % p as i128, p as i128).re
}

/// `4π √(q/p) Σ_{nm<=X} cos(2πnmq/p) exp(-(2πnmq/(pT))²)`.
pub fn f2_at_zero_cos_sum(inst: &ReciprocityInstance, plan: &QuadraturePlan) -> Result<f64> {
    plan.validate()?;
    let x = sum_cutoff(inst, plan);
    Ok(cos_sum(inst, x))
}

fn cos_sum(inst: &ReciprocityInstance, x: u64) -> f64 {
    let d = divisor_counts(x);
    let w = cos_sum_weight(inst);
    let (p, q) = (inst.p(), inst.q());
    let sum = crate::numerics::compensated_sum(
        (1..=x).map(|k| d[k as usize] as f64 * cos_rational(k, q, p) * w(k)),
    );
    4.0 * PI * (q as f64 / p as f64).sqrt() * sum
}

/// All intermediate values at `s = 0`, with cross-check residuals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntermediateLedger {
    pub p: u64,
    pub q: u64,
    #[serde(rename = "T")]
    pub big_t: f64,
    pub f0_direct_re: f64,
    pub f0_direct_im: f64,
    pub pole_correction_re: f64,
    pub pole_correction_im: f64,
    pub f1_0: f64,
    pub f2_0_exact: f64,
    pub f2_0_cos_sum: f64,
    pub f3_0: f64,
    /// `|f0_direct - (f1_0 + f2_0_exact + f3_0)|`.
    pub decomposition_residual: f64,
    /// `|f2_0_exact - f2_0_cos_sum|`.
    pub approx_gap: f64,
    pub f0_error_estimate: f64,
    pub f1_error_estimate: f64,
    pub f2_error_estimate: f64,
    pub f3_error_estimate: f64,
    /// Sum of the component error estimates.
    pub decomposition_budget: f64,
}

impl IntermediateLedger {
    pub fn f0_direct(&self) -> Complex64 {
        Complex64::new(self.f0_direct_re, self.f0_direct_im)
    }

    pub fn pole_correction(&self) -> Complex64 {
        Complex64::new(self.pole_correction_re, self.pole_correction_im)
    }

    /// Recomputes the decomposition residual from the stored components.
    pub fn recomputed_residual(&self) -> f64 {
        (self.f0_direct() - (self.f1_0 + self.f2_0_exact + self.f3_0)).norm()
    }
}

/// Fills the ledger. Component failures are reported by name through
/// [`Error::ToleranceNotMet`].
pub fn decomposition_check(inst: &ReciprocityInstance, plan: &QuadraturePlan) -> Result<IntermediateLedger> {
    let direct = f0_and_pole(inst, plan).map_err(|e| relabel(e, "f_at_zero_direct"))?;
    let f1 = f1_at_zero(inst, plan)?;
    let f2 = f2_at_zero_exact(inst, plan)?;
    let f3 = f3_at_zero(inst, plan)?;
    let cos = f2_at_zero_cos_sum(inst, plan)?;
    let f0 = direct.value[0];
    let f0_error = direct.errors[0].norm();
    let mut ledger = IntermediateLedger {
        p: inst.p(),
        q: inst.q(),
        big_t: inst.big_t(),
        f0_direct_re: f0.re,
        f0_direct_im: f0.im,
        pole_correction_re: direct.value[1].re,
        pole_correction_im: direct.value[1].im,
        f1_0: f1.value,
        f2_0_exact: f2.value,
        f2_0_cos_sum: cos,
        f3_0: f3.value,
        decomposition_residual: 0.0,
        approx_gap: (f2.value - cos).abs(),
        f0_error_estimate: f0_error,
        f1_error_estimate: f1.error_estimate,
        f2_error_estimate: f2.error_estimate,
        f3_error_estimate: f3.error_estimate,
        decomposition_budget: f0_error + f1.error_estimate + f2.error_estimate + f3.error_estimate,
    };
    ledger.decomposition_residual = ledger.recomputed_residual();
    Ok(ledger)
}

/// `|e(nm p̄/q) - e(-nm q̄/p) e(nm/(pq))|` with every phase reduced exactly
/// to a residue modulo `pq` before exponentiation.
pub fn additive_reciprocity_check(n: u64, m: u64, p: u64, q: u64) -> Result<f64> {
    if p == q {
        return Err(Error::InvalidInstance(format!("p and q must differ (both {p})")));
    }
    let (pi, qi) = (p as i128, q as i128);
    let pq = pi * qi;
    let nm = n as i128 * m as i128;
    let p_bar = modular_inverse(p as i64, q as i64)? as i128;
    let q_bar = modular_inverse(q as i64, p as i64)? as i128;
    // e(a/q) = e(a p/(pq)) and so on; all numerators reduced mod pq
    let lhs = (nm % qi * p_bar).rem_euclid(qi) * pi;
    let twisted = (-(nm % pi) * q_bar).rem_euclid(pi) * qi;
    let rhs = (twisted + nm.rem_euclid(pq)).rem_euclid(pq);
    Ok((unit_root(lhs, pq) - unit_root(rhs, pq)).norm())
}

/// How the character-split reassembly treats the `r -> r q̄` substitution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitVariant {
    Faithful,
    /// Drops the `χ(q)` produced by the substitution; breaks the identity.
    OmitSubstitution,
}

/// `|direct - reassembled|` for the truncated cosine sum
/// `Σ_{nm<=X} cos(2πnmq/p) w(nm)`, where the reassembly splits off
/// `nm ≡ 0 (mod p)` and expands the other classes in characters.
pub fn character_split_check(inst: &ReciprocityInstance, cutoff: u64) -> Result<f64> {
    character_split_check_with(inst, cutoff, SplitVariant::Faithful)
}

pub fn character_split_check_with(
    inst: &ReciprocityInstance,
    cutoff: u64,
    variant: SplitVariant,
) -> Result<f64> {
    let (p, q) = (inst.p(), inst.q());
    let d = divisor_counts(cutoff);
    let w = cos_sum_weight(inst);

    let direct = crate::numerics::compensated_sum(
        (1..=cutoff).map(|k| d[k as usize] as f64 * cos_rational(k, q, p) * w(k)),
    );

    // nm ≡ 0: (n = pn') + (m = pm') - (n = pn', m = pm')
    let mut zero_class = NeumaierSum::new();
    for j in 1..=cutoff / p {
        zero_class.add(2.0 * d[j as usize] as f64 * w(p * j));
    }
    for j in 1..=cutoff / (p * p) {
        zero_class.add(-(d[j as usize] as f64) * w(p * p * j));
    }

    let family = enumerate_characters(p)?;
    let mut characters = ComplexSum::new();
    for chi in family.characters() {
        let mut series = ComplexSum::new();
        for k in 1..=cutoff {
            let c = chi.eval(k as i64);
            if c.re != 0.0 || c.im != 0.0 {
                series.add(c * (d[k as usize] as f64 * w(k)));
            }
        }
        let twist = match variant {
            SplitVariant::Faithful => chi.eval(q as i64),
            SplitVariant::OmitSubstitution => Complex64::new(1.0, 0.0),
        };
        characters.add(twist * cosine_twisted_sum(chi) * series.value());
    }
    let reassembled = zero_class.value() + characters.value().re / (p - 1) as f64;
    Ok((direct - reassembled).abs())
}

/// Contour value, closed-form main term and their difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidueCheck {
    pub contour: f64,
    pub closed_form: f64,
    pub diff: f64,
}

/// Number of trapezoid nodes on the residue circle.
const CIRCLE_NODES: usize = 128;

/// `√(q/p) (2πi)^{-1} ∮ 2π Γ(w/2) (T/2π)^w H(w) ζ(w)² dw` around `w = 1`
/// on `|w - 1| = 1/4`, against [`crate::moments::main_term`].
pub fn residue_main_term_check(inst: &ReciprocityInstance) -> Result<ResidueCheck> {
    residue_main_term_check_with_radius(inst, 0.25)
}

pub fn residue_main_term_check_with_radius(inst: &ReciprocityInstance, radius: f64) -> Result<ResidueCheck> {
    if !(radius > 0.0 && radius < 0.9) {
        return Err(Error::Domain(radius, "residue contour radius"));
    }
    let em = EulerMaclaurin::default();
    let (p, q) = (inst.p() as f64, inst.q() as f64);
    let ln_scale = (inst.big_t() / (2.0 * PI)).ln();
    let one = Complex64::new(1.0, 0.0);
    let mellin_weight = |w: Complex64| -> Result<Complex64> {
        let pow = |base: f64, e: Complex64| (e * base.ln()).exp();
        let euler = one - pow(p, -w);
        let h = pow(q, -w) * 2.0 - pow(p * q, -w) - pow(p / q, w) * euler * euler / (p - 1.0);
        let zeta = hurwitz_raw(w, 1.0, &em);
        Ok(complex_gamma(w * 0.5)? * (w * ln_scale).exp() * h * zeta * zeta * (2.0 * PI))
    };
    // (2πi)^{-1} ∮ f dw = mean over the circle of f(w) (w - 1)
    let mut acc = ComplexSum::new();
    for k in 0..CIRCLE_NODES {
        let offset = Complex64::from_polar(radius, 2.0 * PI * k as f64 / CIRCLE_NODES as f64);
        acc.add(mellin_weight(one + offset)? * offset);
    }
    let contour = (q / p).sqrt() * acc.value().re / CIRCLE_NODES as f64;
    let closed_form = crate::moments::main_term(inst);
    Ok(ResidueCheck {
        contour,
        closed_form,
        diff: (contour - closed_form).abs(),
    })
}

/// Largest residual of the Mellin pairs, with the conditional-convergence
/// tail estimate of the split cosine integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MellinCheck {
    pub max_residual: f64,
    pub tail_estimate: f64,
}

/// `∫_0^∞ x^{u-1} cos x dx` for `0 < Re u < 1`, through
/// `-(u-1) [∫_0^{π/2} x^{u-2} sin x dx + (u-2) ∫_{π/2}^∞ x^{u-3} cos x dx]`.
pub fn cosine_mellin_split(u: Complex64, plan: &QuadraturePlan) -> Result<(Complex64, f64)> {
    if !(u.re > 0.0 && u.re < 1.0) {
        return Err(Error::Domain(u.re, "cosine Mellin transform (need 0 < Re u < 1)"));
    }
    let c = 0.5 * PI;
    let ln_c = c.ln();
    // ∫_0^c x^{u-2} sin x dx = Σ_k (-1)^k c^{u+2k} / ((2k+1)! (u+2k))
    let mut head = ComplexSum::new();
    let mut factorial = 1.0;
    for k in 0..30 {
        let kf = k as f64;
        if k > 0 {
            factorial *= (2.0 * kf) * (2.0 * kf + 1.0);
        }
        let e = u + 2.0 * kf;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        head.add((e * ln_c).exp() / (e * factorial) * sign);
    }
    // ∫_{c}^{X} x^{b} cos x dx by panels, then the asymptotic tail from X
    let b = u - 3.0;
    let upper = c + 400.0 * PI;
    let body: Quadrature<Complex64> = integrate_panels_unchecked(
        |x: f64| (b * x.ln()).exp() * x.cos(),
        c,
        upper,
        plan,
        |_| 1.0,
    )?;
    let (tail, tail_estimate) = cosine_power_tail(b, upper);
    let split = -(u - 1.0) * (head.value() + (u - 2.0) * (body.value + tail));
    Ok((split, tail_estimate + body.error_estimate()))
}

/// `∫_X^∞ x^b cos x dx` by repeated integration by parts, and the size of
/// the first omitted term.
fn cosine_power_tail(b: Complex64, x: f64) -> (Complex64, f64) {
    let (s, c) = x.sin_cos();
    let ln_x = x.ln();
    let mut acc = ComplexSum::new();
    // I_c(b) = -X^b sin X - b I_s(b-1);  I_s(b) = X^b cos X + b I_c(b-1)
    let mut coeff = Complex64::new(1.0, 0.0);
    let mut exponent = b;
    let mut last = 0.0;
    for j in 0..12 {
        let power = (exponent * ln_x).exp();
        let term = match j % 4 {
            0 => -power * s,
            1 => -power * c,
            2 => power * s,
            _ => power * c,
        } * coeff;
        acc.add(term);
        last = term.norm();
        coeff *= exponent;
        exponent -= 1.0;
    }
    (acc.value(), last)
}

/// Checks `∫_0^∞ x^{-1/2+s} cos x dx = cos(π(1/4 + s/2)) Γ(1/2 + s)` at each
/// `s` in `cosine_samples` (|Re s| < 1/2), and the Gaussian pair
/// `∫_0^∞ exp(-(2πx/T)²) x^{w-1} dx = Γ(w/2) (T/2π)^w / 2` at each `w` in
/// `gaussian_samples` (Re w > 0), plus its inverse on `Re w = 2`.
pub fn mellin_pair_check(
    cosine_samples: &[Complex64],
    gaussian_samples: &[Complex64],
    big_t: f64,
    plan: &QuadraturePlan,
) -> Result<MellinCheck> {
    let mut worst = 0.0f64;
    let mut tail_worst = 0.0f64;
    for &s in cosine_samples {
        let u = s + 0.5;
        let (split, tail) = cosine_mellin_split(u, plan)?;
        let closed = (u * (0.5 * PI)).cos() * complex_gamma(u)?;
        worst = worst.max((split - closed).norm());
        tail_worst = tail_worst.max(tail);
    }
    if tail_worst > plan.target_abs_tol {
        return Err(Error::ToleranceNotMet {
            what: "mellin_pair_check (conditional-convergence tail)".into(),
            value: worst,
            estimate: tail_worst,
            tolerance: plan.target_abs_tol,
        });
    }
    let scale = 2.0 * PI / big_t;
    for &w in gaussian_samples {
        if !(w.re > 0.0) {
            return Err(Error::Domain(w.re, "Gaussian Mellin pair (need Re w > 0)"));
        }
        // x = e^v; the integrand is negligible below v = -40/Re w
        let lower = -40.0 / w.re + (1.0 / scale).ln().min(0.0);
        let upper = (1.0 / scale).ln() + 2.5;
        let quad: Quadrature<Complex64> = integrate_panels_unchecked(
            |v: f64| (w * v).exp() * (-(scale * v.exp()).powi(2)).exp(),
            lower,
            upper,
            plan,
            |_| w.im.abs(),
        )?;
        let closed = complex_gamma(w * 0.5)? * (w * (1.0 / scale).ln()).exp() * 0.5;
        worst = worst.max((quad.value - closed).norm() / closed.norm().max(1.0));
    }
    // inverse pair: e^{-x²} = (2π)^{-1} ∫ Γ(1 + iv/2)/2 · x^{-2-iv} dv
    for &x in &[0.5f64, 1.0, 2.0] {
        let quad: Quadrature<Complex64> = integrate_panels_unchecked(
            |v: f64| {
                let w = Complex64::new(2.0, v);
                complex_gamma(w * 0.5).expect("Re = 1") * 0.5 * (-w * x.ln()).exp()
            },
            -160.0,
            160.0,
            plan,
            |v| x.ln().abs() + 0.5 * (1.0 + v.abs()).ln(),
        )?;
        let value = quad.value / (2.0 * PI);
        worst = worst.max((value - (-x * x).exp()).norm());
    }
    Ok(MellinCheck {
        max_residual: worst,
        tail_estimate: tail_worst,
    })
}
