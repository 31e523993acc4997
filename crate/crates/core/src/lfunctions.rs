//! `ζ(s)`, `ζ(s, a)` and `L(s, χ)` near the critical line, by
//! Euler–Maclaurin summation, and functional-equation diagnostics.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::characters::{gauss_sum, DirichletCharacter};
use crate::error::{Error, Result};
use crate::numerics::bernoulli::bernoulli_over_factorial;
use crate::numerics::{ln_gamma, ComplexSum, QuadraturePlan};

/// Largest `|Im s|` accepted by the evaluators.
pub const MAX_ABS_T: f64 = 25_000.0;

/// A point `s = sigma + i t` in the supported evaluation region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub sigma: f64,
    pub t: f64,
}

impl CriticalPoint {
    pub fn new(sigma: f64, t: f64) -> Result<Self> {
        if !(-2.0..=3.0).contains(&sigma) {
            return Err(Error::Domain(sigma, "CriticalPoint (sigma outside [-2, 3])"));
        }
        if !(t.abs() <= MAX_ABS_T) {
            return Err(Error::Domain(t, "CriticalPoint (|t| too large)"));
        }
        Ok(Self { sigma, t })
    }

    /// `1/2 + it`.
    pub fn on_line(t: f64) -> Result<Self> {
        Self::new(0.5, t)
    }

    pub fn from_complex(s: Complex64) -> Result<Self> {
        Self::new(s.re, s.im)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.sigma, self.t)
    }
}

/// Euler–Maclaurin truncation: `N = max(start, ceil(1.3 |t|))` directly
/// summed terms followed by `bernoulli_terms` correction terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EulerMaclaurin {
    pub start: usize,
    pub bernoulli_terms: usize,
}

impl Default for EulerMaclaurin {
    fn default() -> Self {
        Self::from(&QuadraturePlan::default())
    }
}

impl From<&QuadraturePlan> for EulerMaclaurin {
    fn from(plan: &QuadraturePlan) -> Self {
        Self {
            start: plan.em_start,
            bernoulli_terms: plan.em_bernoulli_terms,
        }
    }
}

impl EulerMaclaurin {
    pub fn terms_for(&self, t: f64) -> usize {
        self.start.max((1.3 * t.abs()).ceil() as usize)
    }
}

fn ln_table(n: usize) -> Option<&'static [f64]> {
    const SIZE: usize = 40_000;
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    if n > SIZE {
        return None;
    }
    Some(TABLE.get_or_init(|| (0..=SIZE).map(|k| (k.max(1) as f64).ln()).collect()))
}

/// `x^{-s}` for `x > 0` given `ln x`.
#[inline]
fn pow_neg(ln_x: f64, s: Complex64) -> Complex64 {
    Complex64::from_polar((-s.re * ln_x).exp(), -s.im * ln_x)
}

/// Euler–Maclaurin tail `Σ_{n>=N} (n+a)^{-s}` continued analytically.
///
/// At `s = 1` exactly the polar part `1/(s-1)` is dropped and `-ln x` kept;
/// that is only meaningful in character sums where the poles cancel.
fn em_tail(s: Complex64, x: f64, bernoulli_terms: usize) -> Complex64 {
    let ln_x = x.ln();
    let x_neg_s = pow_neg(ln_x, s);
    let one = Complex64::new(1.0, 0.0);
    let mut acc = ComplexSum::new();
    if s == one {
        acc.add(Complex64::new(-ln_x, 0.0));
    } else {
        acc.add(x_neg_s * x / (s - one));
    }
    acc.add(x_neg_s * 0.5);
    let mut rising = s; // s (s+1) ... (s+2k-2)
    let x_inv = 1.0 / x;
    let mut x_power = x_neg_s * x_inv;
    for k in 1..=bernoulli_terms {
        acc.add(rising * x_power * bernoulli_over_factorial(k));
        let j = 2.0 * k as f64;
        rising *= (s + (j - 1.0)) * (s + j);
        x_power *= x_inv * x_inv;
    }
    acc.value()
}

pub(crate) fn hurwitz_raw(s: Complex64, a: f64, em: &EulerMaclaurin) -> Complex64 {
    let n_terms = em.terms_for(s.im);
    let mut acc = ComplexSum::new();
    if a == 1.0 {
        if let Some(ln) = ln_table(n_terms) {
            for n in 1..=n_terms {
                acc.add(pow_neg(ln[n], s));
            }
            acc.add(em_tail(s, n_terms as f64 + 1.0, em.bernoulli_terms));
            return acc.value();
        }
    }
    for n in 0..n_terms {
        acc.add(pow_neg((n as f64 + a).ln(), s));
    }
    acc.add(em_tail(s, n_terms as f64 + a, em.bernoulli_terms));
    acc.value()
}

/// Hurwitz zeta `ζ(s, a) = Σ_{n>=0} (n + a)^{-s}` for `0 < a <= 1`.
pub fn hurwitz_zeta(s: CriticalPoint, a: f64, em: &EulerMaclaurin) -> Result<Complex64> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::Domain(a, "hurwitz_zeta (a outside (0, 1])"));
    }
    if s.sigma == 1.0 && s.t == 0.0 {
        return Err(Error::ZetaPole);
    }
    Ok(hurwitz_raw(s.to_complex(), a, em))
}

/// Riemann zeta `ζ(s) = ζ(s, 1)`.
pub fn riemann_zeta(s: CriticalPoint, em: &EulerMaclaurin) -> Result<Complex64> {
    hurwitz_zeta(s, 1.0, em)
}

pub(crate) fn dirichlet_l_raw(s: Complex64, chi: &DirichletCharacter, em: &EulerMaclaurin) -> Complex64 {
    let p = chi.modulus();
    let mut acc = ComplexSum::new();
    for a in 1..p {
        acc.add(chi.values()[a as usize] * hurwitz_raw(s, a as f64 / p as f64, em));
    }
    acc.value() * pow_neg((p as f64).ln(), s)
}

/// `L(s, χ) = p^{-s} Σ_{a=1}^{p-1} χ(a) ζ(s, a/p)`.
pub fn dirichlet_l(s: CriticalPoint, chi: &DirichletCharacter, em: &EulerMaclaurin) -> Result<Complex64> {
    if chi.is_principal() && s.sigma == 1.0 && s.t == 0.0 {
        return Err(Error::ZetaPole);
    }
    Ok(dirichlet_l_raw(s.to_complex(), chi, em))
}

/// `π^{-it} Γ(1/4 + it/2) / Γ(1/4 - it/2)`, the factor with
/// `ζ(1/2 - it) = factor · ζ(1/2 + it)`.
pub fn zeta_fe_factor(t: f64) -> Complex64 {
    let a = Complex64::new(0.25, 0.5 * t);
    let ln_ratio = ln_gamma(a).expect("Re > 0") - ln_gamma(a.conj()).expect("Re > 0");
    (ln_ratio - Complex64::new(0.0, t * PI.ln())).exp()
}

/// The same factor after reflection and duplication:
/// `2 (2π)^{-1/2-it} cos(π(1/4 + it/2)) Γ(1/2 + it)`.
pub fn zeta_fe_factor_cos_gamma(t: f64) -> Complex64 {
    let ln_two_pi = (2.0 * PI).ln();
    let ln_cos = crate::numerics::gamma::ln_sin_pi(Complex64::new(0.75, 0.5 * t));
    let ln_gamma_term = ln_gamma(Complex64::new(0.5, t)).expect("Re > 0");
    (Complex64::new(2f64.ln(), 0.0) + Complex64::new(-0.5, -t) * ln_two_pi + ln_cos + ln_gamma_term).exp()
}

/// `|ζ(1/2 - it) - factor(t) ζ(1/2 + it)|` with both zeta values computed
/// independently.
pub fn zeta_fe_residual(t: f64, em: &EulerMaclaurin) -> Result<f64> {
    let plus = riemann_zeta(CriticalPoint::on_line(t)?, em)?;
    let minus = riemann_zeta(CriticalPoint::on_line(-t)?, em)?;
    Ok((minus - zeta_fe_factor(t) * plus).norm())
}

/// `|Γ-ratio form - cos·Γ form|` of the zeta functional-equation factor.
pub fn zeta_fe_factor_gap(t: f64) -> f64 {
    (zeta_fe_factor(t) - zeta_fe_factor_cos_gamma(t)).norm()
}

/// `(p/π)^{-it} Γ((1-2it)/4) / Γ((1+2it)/4)`, unimodular for real `t`.
pub fn dirichlet_fe_phase(p: u64, t: f64) -> Complex64 {
    let a = Complex64::new(0.25, 0.5 * t);
    let ln_ratio = ln_gamma(a.conj()).expect("Re > 0") - ln_gamma(a).expect("Re > 0");
    (ln_ratio - Complex64::new(0.0, t * (p as f64 / PI).ln())).exp()
}

/// Residual of `τ(χ̄) L(1/2+it, χ)^2 = √p · phase · L(1/2+it, χ) L(1/2-it, χ̄)`
/// for an even primitive character, with the two `L`-values computed
/// independently.
pub fn dirichlet_fe_residual(t: f64, chi: &DirichletCharacter, em: &EulerMaclaurin) -> Result<f64> {
    if !chi.is_even() {
        return Err(Error::OddCharacter {
            modulus: chi.modulus(),
            index: chi.index(),
        });
    }
    if chi.is_principal() {
        return Err(Error::Domain(0.0, "dirichlet_fe_residual (principal character)"));
    }
    let p = chi.modulus();
    let chi_bar = chi.conj();
    let plus = dirichlet_l(CriticalPoint::on_line(t)?, chi, em)?;
    let minus = dirichlet_l(CriticalPoint::on_line(-t)?, &chi_bar, em)?;
    let lhs = gauss_sum(&chi_bar) * plus * plus;
    let rhs = dirichlet_fe_phase(p, t) * (p as f64).sqrt() * plus * minus;
    Ok((lhs - rhs).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::enumerate_characters;
    use crate::numerics::NeumaierSum;

    fn em() -> EulerMaclaurin {
        EulerMaclaurin::default()
    }

    fn rpow(x: f64, s: Complex64) -> Complex64 {
        (s * x.ln()).exp()
    }

    fn pt(sigma: f64, t: f64) -> CriticalPoint {
        CriticalPoint::new(sigma, t).unwrap()
    }

    /// Borwein's accelerated alternating series for `η(s)`, giving
    /// `ζ(s) = η(s) / (1 - 2^{1-s})`; independent of Euler–Maclaurin.
    fn zeta_borwein(s: Complex64, n: usize) -> Complex64 {
        let nf = n as f64;
        let mut d = vec![0.0; n + 1];
        let mut term = 1.0 / nf;
        let mut acc = term;
        d[0] = nf * acc;
        for i in 1..=n {
            let i_f = i as f64;
            term *= 4.0 * (nf + i_f - 1.0) * (nf - i_f + 1.0) / ((2.0 * i_f - 1.0) * (2.0 * i_f));
            acc += term;
            d[i] = nf * acc;
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sum += rpow((k + 1) as f64, -s) * (sign * (d[k] - d[n]));
        }
        let one = Complex64::new(1.0, 0.0);
        -sum / (d[n] * (one - Complex64::new(2.0, 0.0).powc(one - s)))
    }

    #[test]
    fn zeta_two() {
        let z = riemann_zeta(pt(2.0, 0.0), &em()).unwrap();
        assert!((z - PI * PI / 6.0).norm() < 1e-12);
    }

    #[test]
    fn hurwitz_two_half() {
        let z = hurwitz_zeta(pt(2.0, 0.0), 0.5, &em()).unwrap();
        assert!((z - PI * PI / 2.0).norm() < 1e-12);
    }

    #[test]
    fn hurwitz_half_third_against_direct_sum() {
        // direct sum to 10^7 plus the integral tail and its first two
        // corrections; the remaining error is O(M^{-3.5}).
        let a = 1.0 / 3.0;
        let m = 10_000_000usize;
        let mut acc = NeumaierSum::new();
        for n in 0..m {
            acc.add(1.0 / (n as f64 + a).sqrt());
        }
        let x = m as f64 + a;
        acc.add(-2.0 * x.sqrt());
        acc.add(0.5 / x.sqrt());
        acc.add(0.5 / 12.0 * x.powf(-1.5));
        let got = hurwitz_zeta(pt(0.5, 0.0), a, &em()).unwrap();
        assert!((got.re - acc.value()).abs() < 1e-9, "{got} vs {}", acc.value());
        assert!(got.im.abs() < 1e-15);
    }

    #[test]
    fn hurwitz_domain_and_pole() {
        assert_eq!(hurwitz_zeta(pt(1.0, 0.0), 0.5, &em()), Err(Error::ZetaPole));
        assert!(hurwitz_zeta(pt(2.0, 0.0), 0.0, &em()).is_err());
        assert!(hurwitz_zeta(pt(2.0, 0.0), 1.5, &em()).is_err());
        assert!(CriticalPoint::new(4.0, 0.0).is_err());
        assert!(CriticalPoint::new(0.5, 1e6).is_err());
    }

    #[test]
    fn zeta_half_against_eta_series() {
        let oracle = zeta_borwein(Complex64::new(0.5, 0.0), 60);
        assert!((oracle.re + 1.460_354_508_809_586_8).abs() < 1e-13);
        let got = riemann_zeta(pt(0.5, 0.0), &em()).unwrap();
        assert!((got - oracle).norm() < 1e-10);
    }

    #[test]
    fn zeta_matches_eta_series_on_line() {
        for &t in &[1.0, 5.0, 14.0, 21.0, 30.0] {
            let s = Complex64::new(0.5, t);
            let got = riemann_zeta(pt(0.5, t), &em()).unwrap();
            let oracle = zeta_borwein(s, 80);
            assert!((got - oracle).norm() < 1e-10, "t = {t}: {got} vs {oracle}");
        }
    }

    #[test]
    fn first_zero() {
        // Hardy's Z(t) = e^{iθ(t)} ζ(1/2+it) from the eta-series oracle,
        // bisected on its sign change near 14.13.
        let hardy = |t: f64| {
            let theta = ln_gamma(Complex64::new(0.25, 0.5 * t)).unwrap().im - 0.5 * t * PI.ln();
            (Complex64::from_polar(1.0, theta) * zeta_borwein(Complex64::new(0.5, t), 80)).re
        };
        let (mut lo, mut hi) = (14.0, 14.3);
        assert!(hardy(lo) * hardy(hi) < 0.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if hardy(lo) * hardy(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        assert!((lo - 14.134_725_142).abs() < 1e-9);
        let z = riemann_zeta(pt(0.5, 14.134_725_142), &em()).unwrap();
        assert!(z.norm() <= 1e-5);
    }

    #[test]
    fn l_principal_removes_euler_factor() {
        for p in [3u64, 5, 7, 11] {
            let f = enumerate_characters(p).unwrap();
            let l = dirichlet_l(pt(2.0, 0.0), f.principal(), &em()).unwrap();
            let expect = (1.0 - 1.0 / (p * p) as f64) * PI * PI / 6.0;
            assert!((l - expect).norm() < 1e-11);
        }
        let f = enumerate_characters(5).unwrap();
        assert_eq!(dirichlet_l(pt(1.0, 0.0), f.principal(), &em()), Err(Error::ZetaPole));
    }

    #[test]
    fn l_quadratic_mod_three_at_one() {
        let f = enumerate_characters(3).unwrap();
        let l = dirichlet_l(pt(1.0, 0.0), &f.characters()[1], &em()).unwrap();
        // class number formula
        let expect = PI / (3.0 * 3f64.sqrt());
        assert!((expect - 0.604_599_788_078_072_6).abs() < 1e-15);
        assert!((l - expect).norm() < 1e-10);
    }

    /// Upper incomplete gamma `Γ(1/4, x)` by Gauss–Legendre panels on
    /// `u = x + v`, `v ∈ [0, 60]`.
    fn upper_gamma_quarter(x: f64) -> f64 {
        let rule = crate::numerics::quadrature::gauss_legendre_16();
        let mut acc = NeumaierSum::new();
        let panels = 600;
        let h = 60.0 / panels as f64;
        for k in 0..panels {
            let mid = (k as f64 + 0.5) * h;
            for (node, w) in rule.iter() {
                let v = mid + 0.5 * h * node;
                let u = x + v;
                acc.add(0.5 * h * w * u.powf(-0.75) * (-u).exp());
            }
        }
        acc.value()
    }

    #[test]
    fn l_quadratic_mod_five_at_half_against_smoothed_sum() {
        // Even primitive χ with root number 1: the completed functional
        // equation gives L(1/2, χ) = 2 Σ χ(n) n^{-1/2} Γ(1/4, π n²/5) / Γ(1/4).
        let f = enumerate_characters(5).unwrap();
        let chi = &f.characters()[2];
        let gamma_quarter = crate::numerics::complex_gamma(Complex64::new(0.25, 0.0)).unwrap().re;
        let mut acc = NeumaierSum::new();
        for n in 1..=12i64 {
            let x = PI * (n * n) as f64 / 5.0;
            acc.add(chi.eval(n).re / (n as f64).sqrt() * upper_gamma_quarter(x));
        }
        let oracle = 2.0 * acc.value() / gamma_quarter;
        let l = dirichlet_l(pt(0.5, 0.0), chi, &em()).unwrap();
        assert!((l - oracle).norm() < 1e-9, "{l} vs {oracle}");
    }

    #[test]
    fn zeta_functional_equation() {
        assert!(zeta_fe_residual(0.0, &em()).unwrap() <= 1e-11);
        assert!(zeta_fe_residual(10.0, &em()).unwrap() <= 1e-10);
        assert!(zeta_fe_residual(50.0, &em()).unwrap() <= 1e-9);
        for &t in &[0.0, 3.0, 40.0, 150.0, 600.0] {
            assert!(zeta_fe_factor_gap(t) < 1e-11, "t = {t}");
            assert!((zeta_fe_factor(t).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dirichlet_functional_equation() {
        let f5 = enumerate_characters(5).unwrap();
        assert!(dirichlet_fe_residual(0.0, &f5.characters()[2], &em()).unwrap() <= 1e-10);
        let f13 = enumerate_characters(13).unwrap();
        for chi in f13.even_primitive() {
            assert!(dirichlet_fe_residual(5.0, chi, &em()).unwrap() <= 1e-9);
        }
        assert!(matches!(
            dirichlet_fe_residual(1.0, &f13.characters()[1], &em()),
            Err(Error::OddCharacter { .. })
        ));
    }

    #[test]
    fn conjugation_symmetry() {
        let f = enumerate_characters(7).unwrap();
        for chi in f.characters().iter().skip(1) {
            for &(sigma, t) in &[(0.5, 3.0), (0.5, -17.0), (2.0, 8.0), (0.2, 40.0)] {
                let a = dirichlet_l(pt(sigma, -t), &chi.conj(), &em()).unwrap();
                let b = dirichlet_l(pt(sigma, t), chi, &em()).unwrap().conj();
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn character_sum_picks_out_unit_class() {
        for p in [5u64, 7] {
            let f = enumerate_characters(p).unwrap();
            for &t in &[0.0, 3.5] {
                let s = Complex64::new(2.0, t);
                let total: Complex64 = f
                    .characters()
                    .iter()
                    .map(|chi| dirichlet_l(pt(2.0, t), chi, &em()).unwrap())
                    .sum();
                // direct Σ_{n ≡ 1 (p)} n^{-s} with integral tail
                let k_max = 200_000u64;
                let mut direct = ComplexSum::new();
                for k in 0..k_max {
                    direct.add(rpow((1 + k * p) as f64, -s));
                }
                let x = k_max as f64 + 1.0 / p as f64;
                let ps = rpow(p as f64, -s);
                let one = Complex64::new(1.0, 0.0);
                direct.add(ps * (rpow(x, one - s) / (s - one) + rpow(x, -s) * 0.5 + s * rpow(x, -s - 1.0) / 12.0));
                let expect = direct.value() * (p - 1) as f64;
                assert!((total - expect).norm() < 1e-10, "p = {p}, t = {t}");
            }
        }
    }

    #[test]
    fn euler_maclaurin_self_consistency() {
        let base = em();
        let more_terms = EulerMaclaurin { bernoulli_terms: 2 * base.bernoulli_terms, ..base };
        let more_n = EulerMaclaurin { start: 2 * base.start, ..base };
        for &(sigma, t) in &[(0.5, 0.0), (0.5, 7.0), (0.5, 90.0), (0.5, 1100.0), (2.0, 30.0), (-0.5, 12.0)] {
            let z = riemann_zeta(pt(sigma, t), &base).unwrap();
            assert!((riemann_zeta(pt(sigma, t), &more_terms).unwrap() - z).norm() <= 1e-11);
            assert!((riemann_zeta(pt(sigma, t), &more_n).unwrap() - z).norm() <= 1e-11);
            let h = hurwitz_zeta(pt(sigma, t), 0.3, &base).unwrap();
            assert!((hurwitz_zeta(pt(sigma, t), 0.3, &more_terms).unwrap() - h).norm() <= 1e-11);
        }
    }
}
