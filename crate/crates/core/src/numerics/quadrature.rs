//! Frequency-adaptive composite Gauss–Legendre quadrature.
//!
//! Panels are laid out left to right with width
//! `panel_width / (1 + local_frequency(t))`, so each panel holds a roughly
//! constant number of oscillations. Every panel is integrated twice: once
//! whole and once split in half. The split value is returned; the difference
//! plus a rounding floor is the error estimate. Node evaluations may run on
//! the rayon pool, but the reduction order is fixed, so results are
//! bit-identical for any number of workers.

use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::summation::NeumaierSum;
use crate::error::{Error, Result};

/// Truncation and discretization parameters shared by every integral and
/// series in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraturePlan {
    /// The left-hand moment is integrated over `|t| <= lhs_cutoff_factor * T`.
    pub lhs_cutoff_factor: f64,
    /// Absolute `t`-bound for the dual-moment integrals.
    pub dual_cutoff: f64,
    /// Base panel length before frequency scaling.
    pub panel_width: f64,
    pub nodes_per_panel: usize,
    /// Minimum number of terms summed directly in Euler–Maclaurin.
    pub em_start: usize,
    pub em_bernoulli_terms: usize,
    /// `nm`-sums are truncated at `sum_cutoff_multiplier * T * p / q`.
    pub sum_cutoff_multiplier: f64,
    /// Half-width of the `y`-range in the Fourier-side integrals.
    pub y_max: f64,
    pub target_abs_tol: f64,
}

impl Default for QuadraturePlan {
    fn default() -> Self {
        Self {
            lhs_cutoff_factor: 7.0,
            dual_cutoff: 60.0,
            panel_width: 2.0,
            nodes_per_panel: 16,
            em_start: 20,
            em_bernoulli_terms: 15,
            sum_cutoff_multiplier: 2.0,
            y_max: 6.0,
            target_abs_tol: 1e-9,
        }
    }
}

impl QuadraturePlan {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidPlan(msg.to_string()));
        if !(self.lhs_cutoff_factor >= 5.0) {
            return bad("lhs_cutoff_factor must be at least 5");
        }
        if !(self.dual_cutoff >= 40.0) {
            return bad("dual_cutoff must be at least 40");
        }
        if !(self.panel_width > 0.0 && self.panel_width.is_finite()) {
            return bad("panel_width must be positive");
        }
        if self.nodes_per_panel < 1 || self.em_start < 1 || self.em_bernoulli_terms < 1 {
            return bad("counts must be at least 1");
        }
        if self.em_bernoulli_terms > super::bernoulli::MAX_INDEX {
            return bad("too many Bernoulli terms requested");
        }
        if !(self.sum_cutoff_multiplier > 0.0) {
            return bad("sum_cutoff_multiplier must be positive");
        }
        if !(self.y_max > 0.0) {
            return bad("y_max must be positive");
        }
        if !(self.target_abs_tol > 0.0) {
            return bad("target_abs_tol must be positive");
        }
        Ok(())
    }
}

/// Values that can be integrated componentwise.
pub trait PanelValue: Copy + Send + Sync {
    const DIM: usize;
    fn component(&self, i: usize) -> f64;
    fn from_components(c: &[f64]) -> Self;
}

impl PanelValue for f64 {
    const DIM: usize = 1;
    fn component(&self, _: usize) -> f64 {
        *self
    }
    fn from_components(c: &[f64]) -> Self {
        c[0]
    }
}

impl PanelValue for Complex64 {
    const DIM: usize = 2;
    fn component(&self, i: usize) -> f64 {
        if i == 0 {
            self.re
        } else {
            self.im
        }
    }
    fn from_components(c: &[f64]) -> Self {
        Complex64::new(c[0], c[1])
    }
}

impl<const N: usize> PanelValue for [Complex64; N] {
    const DIM: usize = 2 * N;
    fn component(&self, i: usize) -> f64 {
        self[i / 2].component(i % 2)
    }
    fn from_components(c: &[f64]) -> Self {
        std::array::from_fn(|k| Complex64::new(c[2 * k], c[2 * k + 1]))
    }
}

/// A quadrature value together with a componentwise absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<V> {
    pub value: V,
    pub errors: V,
}

impl<V: PanelValue> Quadrature<V> {
    /// Largest componentwise error estimate.
    pub fn error_estimate(&self) -> f64 {
        (0..V::DIM)
            .map(|i| self.errors.component(i))
            .fold(0.0, f64::max)
    }

    pub fn check(self, tolerance: f64, what: &str) -> Result<Self> {
        let estimate = self.error_estimate();
        if estimate <= tolerance {
            Ok(self)
        } else {
            Err(Error::ToleranceNotMet {
                what: what.to_string(),
                value: self.value.component(0),
                estimate,
                tolerance,
            })
        }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let mut rule = Vec::with_capacity(n);
    let nf = n as f64;
    for i in 0..n {
        // Newton from the Tricomi initial guess for the i-th largest root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut derivative = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let (pn, pn_1) = if n == 1 { (x, 1.0) } else { (p1, p0) };
            derivative = nf * (x * pn - pn_1) / (x * x - 1.0);
            let dx = pn / derivative;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            rule.push((0.0, 2.0));
            break;
        }
        let w = 2.0 / ((1.0 - x * x) * derivative * derivative);
        rule.push((x, w));
    }
    rule.sort_by(|a, b| a.0.total_cmp(&b.0));
    rule
}

/// Cached 16-point rule.
pub fn gauss_legendre_16() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(16))
}

fn rule_for(n: usize) -> std::borrow::Cow<'static, [(f64, f64)]> {
    if n == 16 {
        std::borrow::Cow::Borrowed(gauss_legendre_16())
    } else {
        std::borrow::Cow::Owned(gauss_legendre(n))
    }
}

/// Panel breakpoints on `[a, b]` sized by the local frequency estimate.
pub fn panel_breakpoints<W>(a: f64, b: f64, panel_width: f64, local_frequency: W) -> Vec<f64>
where
    W: Fn(f64) -> f64,
{
    let width_at = |t: f64| panel_width / (1.0 + local_frequency(t).max(0.0));
    let mut points = vec![a];
    let mut t = a;
    while t < b {
        let h0 = width_at(t);
        let h = h0.min(width_at((t + h0).min(b)));
        let mut next = t + h;
        if next >= b || b - next < 0.25 * h {
            next = b;
        }
        points.push(next);
        t = next;
    }
    points
}

const ROUNDING_FLOOR: f64 = 32.0 * f64::EPSILON;

/// Composite panel quadrature of `f` over `[a, b]` without a tolerance check.
pub fn integrate_panels_unchecked<V, F, W>(
    f: F,
    a: f64,
    b: f64,
    plan: &QuadraturePlan,
    local_frequency: W,
) -> Result<Quadrature<V>>
where
    V: PanelValue,
    F: Fn(f64) -> V + Sync,
    W: Fn(f64) -> f64,
{
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidInterval { a, b });
    }
    let rule = rule_for(plan.nodes_per_panel);
    let points = panel_breakpoints(a, b, plan.panel_width, local_frequency);
    let dim = V::DIM;

    // per panel: [coarse; dim], [fine; dim], [sum |w f|; dim]
    let panels: Vec<Vec<f64>> = points
        .par_windows(2)
        .map(|w| {
            let (lo, hi) = (w[0], w[1]);
            let mut coarse = vec![NeumaierSum::new(); dim];
            let mut fine = vec![NeumaierSum::new(); dim];
            let mut magnitude = vec![0.0; dim];
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (lo + hi);
            for &(x, wt) in rule.iter() {
                let v = f(mid + half * x);
                for i in 0..dim {
                    coarse[i].add(half * wt * v.component(i));
                }
            }
            let quarter = 0.5 * half;
            for centre in [lo + quarter, hi - quarter] {
                for &(x, wt) in rule.iter() {
                    let v = f(centre + quarter * x);
                    for i in 0..dim {
                        let term = quarter * wt * v.component(i);
                        fine[i].add(term);
                        magnitude[i] += term.abs();
                    }
                }
            }
            let mut out = Vec::with_capacity(3 * dim);
            out.extend(coarse.iter().map(NeumaierSum::value));
            out.extend(fine.iter().map(NeumaierSum::value));
            out.extend(magnitude);
            out
        })
        .collect();

    let mut coarse = vec![NeumaierSum::new(); dim];
    let mut fine = vec![NeumaierSum::new(); dim];
    let mut magnitude = vec![NeumaierSum::new(); dim];
    for panel in &panels {
        for i in 0..dim {
            coarse[i].add(panel[i]);
            fine[i].add(panel[dim + i]);
            magnitude[i].add(panel[2 * dim + i]);
        }
    }
    let value: Vec<f64> = fine.iter().map(NeumaierSum::value).collect();
    let errors: Vec<f64> = (0..dim)
        .map(|i| (value[i] - coarse[i].value()).abs() + ROUNDING_FLOOR * magnitude[i].value())
        .collect();
    if value.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("integrate_panels"));
    }
    Ok(Quadrature {
        value: V::from_components(&value),
        errors: V::from_components(&errors),
    })
}

/// Composite panel quadrature; fails with a tolerance diagnostic when the
/// two-grid estimate exceeds `plan.target_abs_tol`.
pub fn integrate_panels<V, F, W>(
    f: F,
    a: f64,
    b: f64,
    plan: &QuadraturePlan,
    local_frequency: W,
) -> Result<Quadrature<V>>
where
    V: PanelValue,
    F: Fn(f64) -> V + Sync,
    W: Fn(f64) -> f64,
{
    integrate_panels_unchecked(f, a, b, plan, local_frequency)?
        .check(plan.target_abs_tol, "integrate_panels")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan() -> QuadraturePlan {
        QuadraturePlan::default()
    }

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let rule = gauss_legendre(16);
        assert_eq!(rule.len(), 16);
        for k in 0..32 {
            let got: f64 = rule.iter().map(|(x, w)| w * x.powi(k)).sum();
            let expect = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            assert!((got - expect).abs() < 1e-14, "degree {k}");
        }
        assert_eq!(gauss_legendre(1), vec![(0.0, 2.0)]);
    }

    #[test]
    fn constant_on_unit_interval() {
        let q: Quadrature<f64> = integrate_panels(|_| 1.0, 0.0, 1.0, &plan(), |_| 0.0).unwrap();
        assert!((q.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn full_periods_of_cosine() {
        let q: Quadrature<f64> = integrate_panels(
            |t| (50.0 * t).cos(),
            0.0,
            2.0 * std::f64::consts::PI,
            &plan(),
            |_| 50.0,
        )
        .unwrap();
        assert!(q.value.abs() < 1e-10, "{}", q.value);
    }

    #[test]
    fn gaussian_integral() {
        let q: Quadrature<f64> =
            integrate_panels(|t| (-t * t).exp(), -8.0, 8.0, &plan(), |_| 0.0).unwrap();
        assert!((q.value - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn invalid_interval_rejected() {
        let r: Result<Quadrature<f64>> = integrate_panels(|_| 1.0, 1.0, 1.0, &plan(), |_| 0.0);
        assert!(matches!(r, Err(Error::InvalidInterval { .. })));
    }

    #[test]
    fn tolerance_diagnostic_fires_on_underresolved_integrand() {
        // 200 rad per unit with a frequency estimate of zero: far too few nodes
        let r: Result<Quadrature<f64>> =
            integrate_panels(|t| (200.0 * t).sin() * t, 0.0, 10.0, &plan(), |_| 0.0);
        assert!(matches!(r, Err(Error::ToleranceNotMet { .. })), "{r:?}");
    }

    #[test]
    fn halving_width_stays_within_estimate() {
        let integrands: Vec<Box<dyn Fn(f64) -> f64 + Sync>> = vec![
            Box::new(|t: f64| (-t * t).exp() * (3.0 * t).cos()),
            Box::new(|t: f64| (1.0 + t * t).ln() * (7.0 * t).sin()),
            Box::new(|t: f64| 1.0 / (1.0 + t * t)),
        ];
        for f in &integrands {
            let p = plan();
            let mut half = p;
            half.panel_width *= 0.5;
            let a: Quadrature<f64> = integrate_panels_unchecked(f, -6.0, 6.0, &p, |_| 7.0).unwrap();
            let b: Quadrature<f64> =
                integrate_panels_unchecked(f, -6.0, 6.0, &half, |_| 7.0).unwrap();
            assert!((a.value - b.value).abs() <= a.error_estimate());
        }
    }

    #[test]
    fn bit_identical_across_worker_counts() {
        let f = |t: f64| Complex64::new(t.cos() * (-0.01 * t * t).exp(), (3.0 * t).sin());
        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| {
                    integrate_panels_unchecked::<Complex64, _, _>(f, -30.0, 30.0, &plan(), |_| 3.0)
                        .unwrap()
                })
        };
        let one = run(1);
        let four = run(4);
        assert_eq!(one.value.re.to_bits(), four.value.re.to_bits());
        assert_eq!(one.value.im.to_bits(), four.value.im.to_bits());
    }

    #[test]
    fn breakpoints_follow_frequency() {
        let slow = panel_breakpoints(0.0, 10.0, 2.0, |_| 0.0);
        let fast = panel_breakpoints(0.0, 10.0, 2.0, |_| 9.0);
        assert_eq!(slow.len(), 6);
        assert_eq!(fast.len(), 51);
        assert_eq!(*fast.last().unwrap(), 10.0);
    }

    #[test]
    fn plan_validation() {
        assert!(plan().validate().is_ok());
        let mut p = plan();
        p.lhs_cutoff_factor = 4.0;
        assert!(p.validate().is_err());
        let mut p = plan();
        p.dual_cutoff = 39.0;
        assert!(p.validate().is_err());
        let mut p = plan();
        p.target_abs_tol = 0.0;
        assert!(p.validate().is_err());
        let mut p = plan();
        p.nodes_per_panel = 0;
        assert!(p.validate().is_err());
    }
}
