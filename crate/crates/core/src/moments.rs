//! The three sides of the reciprocity relation: the twisted moment of
//! `|ζ(1/2+it)|²`, the closed-form main term, and the dual moment of even
//! primitive `L`-functions modulo `p`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::characters::{check_odd_prime, enumerate_characters};
use crate::error::{Error, Result};
use crate::lfunctions::{dirichlet_l_raw, hurwitz_raw, EulerMaclaurin};
use crate::numerics::{
    complex_gamma, digamma, integrate_panels, ComplexSum, QuadraturePlan, EULER_GAMMA,
};

/// One instance `(p, q, T)`: distinct odd primes and a window length `T > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReciprocityInstance {
    p: u64,
    q: u64,
    #[serde(rename = "T")]
    big_t: f64,
}

impl ReciprocityInstance {
    pub fn new(p: u64, q: u64, big_t: f64) -> Result<Self> {
        check_odd_prime(p)?;
        check_odd_prime(q)?;
        if p == q {
            return Err(Error::InvalidInstance(format!("p and q must differ (both {p})")));
        }
        if !(big_t > 1.0 && big_t.is_finite()) {
            return Err(Error::InvalidInstance(format!("T must exceed 1 (got {big_t})")));
        }
        Ok(Self { p, q, big_t })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn big_t(&self) -> f64 {
        self.big_t
    }

    /// The instance with `p` and `q` interchanged.
    pub fn swapped(&self) -> Self {
        Self {
            p: self.q,
            q: self.p,
            big_t: self.big_t,
        }
    }

    /// `√(q/p) + √(p/q)`, the scale of the theorem's error term.
    pub fn bound_scale(&self) -> f64 {
        let (p, q) = (self.p as f64, self.q as f64);
        (q / p).sqrt() + (p / q).sqrt()
    }

    /// `√(q/(pT)) + √(p/(qT))`, the scale of the corollary's error term.
    pub fn corollary_scale(&self) -> f64 {
        self.bound_scale() / self.big_t.sqrt()
    }

    /// `ln p - ln q`; antisymmetric under the swap bit for bit.
    pub fn twist_frequency(&self) -> f64 {
        (self.p as f64).ln() - (self.q as f64).ln()
    }
}

/// A value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error_estimate: f64,
}

/// `ζ(1/2 + it)`.
pub(crate) fn zeta_on_line(t: f64, em: &EulerMaclaurin) -> Complex64 {
    hurwitz_raw(Complex64::new(0.5, t), 1.0, em)
}

/// Panel frequency for `t`-integrands built from `ζ(1/2+it)`.
pub(crate) fn zeta_frequency(twist: f64) -> impl Fn(f64) -> f64 {
    move |t: f64| twist.abs() + (0.5 * ((t.abs() + 2.0) / (2.0 * PI)).ln()).max(0.0)
}

/// `∫ (p/q)^{it} |ζ(1/2+it)|² exp(-t²/T²) dt`, evaluated as
/// `2 ∫_0^c cos(t ln(p/q)) |ζ|² exp(-t²/T²) dt` with `c = lhs_cutoff_factor · T`.
pub fn lhs_moment(inst: &ReciprocityInstance, plan: &QuadraturePlan) -> Result<Estimate> {
    plan.validate()?;
    let em = EulerMaclaurin::from(plan);
    let big_t = inst.big_t();
    let twist = inst.twist_frequency();
    let cutoff = plan.lhs_cutoff_factor * big_t;
    let integrand = |t: f64| {
        let z = zeta_on_line(t, &em);
        2.0 * (t * twist).cos() * z.norm_sqr() * (-(t / big_t).powi(2)).exp()
    };
    let q = integrate_panels(integrand, 0.0, cutoff, plan, zeta_frequency(twist)).map_err(
        |e| relabel(e, "lhs_moment"),
    )?;
    Ok(Estimate {
        value: q.value,
        error_estimate: q.errors,
    })
}

pub(crate) fn relabel(e: Error, what: &str) -> Error {
    match e {
        Error::ToleranceNotMet {
            value,
            estimate,
            tolerance,
            ..
        } => Error::ToleranceNotMet {
            what: what.to_string(),
            value,
            estimate,
            tolerance,
        },
        other => other,
    }
}

/// `√(π/(pq)) · T · (ln(T/(2πpq)) + 2γ + ψ(1/2)/2)`.
pub fn main_term(inst: &ReciprocityInstance) -> f64 {
    let pq = (inst.p() * inst.q()) as f64;
    let big_t = inst.big_t();
    let psi_half = digamma(0.5).expect("ψ(1/2) is finite");
    (PI / pq).sqrt() * big_t * ((big_t / (2.0 * PI * pq)).ln() + 2.0 * EULER_GAMMA + 0.5 * psi_half)
}

/// The character moment
/// `D(p, q) = √p/(p-1) Σ*_{χ mod p, χ(-1)=1} χ(q) ∫ Γ((1-2it)/4) (T/(2q))^{it} |L(1/2+it, χ)|² dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacterMoment {
    pub value: Complex64,
    pub error_estimate: f64,
    /// Number of even primitive characters summed.
    pub characters: usize,
}

/// Evaluates `D(p, q)` over `|t| <= plan.dual_cutoff`.
///
/// Each character is integrated on its own over the symmetric range (the
/// `t` and `-t` values are evaluated separately), so the imaginary part of
/// the total is a genuine realness diagnostic.
pub fn character_moment(p: u64, q: u64, big_t: f64, plan: &QuadraturePlan) -> Result<CharacterMoment> {
    plan.validate()?;
    let inst = ReciprocityInstance::new(p, q, big_t)?;
    let em = EulerMaclaurin::from(plan);
    let family = enumerate_characters(inst.p())?;
    let log_ratio = (big_t / (2.0 * q as f64)).ln();
    let pf = p as f64;
    let weight = |t: f64| -> Complex64 {
        let gamma = complex_gamma(Complex64::new(0.25, -0.5 * t)).expect("Re = 1/4");
        gamma * Complex64::from_polar(1.0, t * log_ratio)
    };
    let frequency = move |t: f64| {
        log_ratio.abs()
            + (0.5 * (pf * (t.abs() + 2.0) / (2.0 * PI)).ln()).max(0.0)
            + 0.5 * (1.0 + 0.5 * t.abs()).ln()
    };

    let mut total = ComplexSum::new();
    let mut error = 0.0;
    let mut count = 0;
    for chi in family.even_primitive() {
        let integrand = |t: f64| {
            let plus = dirichlet_l_raw(Complex64::new(0.5, t), chi, &em);
            let minus = dirichlet_l_raw(Complex64::new(0.5, -t), chi, &em);
            weight(t) * plus.norm_sqr() + weight(-t) * minus.norm_sqr()
        };
        let quad = integrate_panels(integrand, 0.0, plan.dual_cutoff, plan, frequency)
            .map_err(|e| relabel(e, "dual_moment"))?;
        let chi_q = chi.eval(q as i64);
        total.add(chi_q * quad.value);
        error += quad.error_estimate();
        count += 1;
    }
    let scale = pf.sqrt() / (pf - 1.0);
    Ok(CharacterMoment {
        value: total.value() * scale,
        error_estimate: error * scale,
        characters: count,
    })
}

/// The dual moment: `(T/2π)^{1/2} D(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualMoment {
    pub value: f64,
    /// `|Im|` of the assembled dual moment; zero up to rounding.
    pub imag_residual: f64,
    pub error_estimate: f64,
}

pub fn dual_moment(inst: &ReciprocityInstance, plan: &QuadraturePlan) -> Result<DualMoment> {
    let d = character_moment(inst.p(), inst.q(), inst.big_t(), plan)?;
    let prefactor = (inst.big_t() / (2.0 * PI)).sqrt();
    let value = d.value * prefactor;
    Ok(DualMoment {
        value: value.re,
        imag_residual: value.im.abs(),
        error_estimate: d.error_estimate * prefactor,
    })
}

/// Residual report for one instance of the theorem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub p: u64,
    pub q: u64,
    #[serde(rename = "T")]
    pub big_t: f64,
    pub lhs: f64,
    pub main: f64,
    pub dual: f64,
    pub dual_imag_residual: f64,
    /// `lhs - main - dual`.
    pub residual: f64,
    pub bound_scale: f64,
    pub normalized_residual: f64,
    pub quadrature_error_estimate: f64,
}

pub fn verify_theorem(inst: &ReciprocityInstance, plan: &QuadraturePlan) -> Result<MomentReport> {
    let lhs = lhs_moment(inst, plan)?;
    let main = main_term(inst);
    let dual = dual_moment(inst, plan)?;
    let residual = lhs.value - main - dual.value;
    let bound_scale = inst.bound_scale();
    Ok(MomentReport {
        p: inst.p(),
        q: inst.q(),
        big_t: inst.big_t(),
        lhs: lhs.value,
        main,
        dual: dual.value,
        dual_imag_residual: dual.imag_residual,
        residual,
        bound_scale,
        normalized_residual: residual / bound_scale,
        quadrature_error_estimate: lhs.error_estimate + dual.error_estimate,
    })
}

/// `D(p, q) - D(q, p)` against the corollary's error scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorollaryReport {
    pub p: u64,
    pub q: u64,
    #[serde(rename = "T")]
    pub big_t: f64,
    pub d_pq: f64,
    pub d_qp: f64,
    pub difference: f64,
    pub imag_residual: f64,
    /// `√(q/(pT)) + √(p/(qT))`.
    pub bound_scale: f64,
    pub normalized_difference: f64,
    pub quadrature_error_estimate: f64,
}

pub fn verify_corollary(p: u64, q: u64, big_t: f64, plan: &QuadraturePlan) -> Result<CorollaryReport> {
    let inst = ReciprocityInstance::new(p, q, big_t)?;
    let forward = character_moment(p, q, big_t, plan)?;
    let backward = character_moment(q, p, big_t, plan)?;
    let difference = forward.value.re - backward.value.re;
    let bound_scale = inst.corollary_scale();
    Ok(CorollaryReport {
        p,
        q,
        big_t,
        d_pq: forward.value.re,
        d_qp: backward.value.re,
        difference,
        imag_residual: forward.value.im.abs().max(backward.value.im.abs()),
        bound_scale,
        normalized_difference: difference / bound_scale,
        quadrature_error_estimate: forward.error_estimate + backward.error_estimate,
    })
}
