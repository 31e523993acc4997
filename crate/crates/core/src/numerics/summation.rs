//! Deterministic compensated summation.
//!
//! All reductions in the crate go through [`NeumaierSum`] in a fixed order, so
//! results do not depend on how the terms were produced (serially or by a
//! thread pool) as long as they are collected in the same order.

use num_complex::Complex64;

/// Kahan–Babuška–Neumaier running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for NeumaierSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

/// Complex counterpart of [`NeumaierSum`], compensating each component.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Error-compensated sum of `terms` taken in the given order.
pub fn compensated_sum<I>(terms: I) -> f64
where
    I: IntoIterator<Item = f64>,
{
    let mut acc = NeumaierSum::new();
    acc.extend(terms);
    acc.value()
}

/// Complex version of [`compensated_sum`].
pub fn compensated_sum_complex<I>(terms: I) -> Complex64
where
    I: IntoIterator<Item = Complex64>,
{
    let mut acc = ComplexSum::new();
    for z in terms {
        acc.add(z);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_tiny_residue() {
        assert_eq!(compensated_sum([1.0, -1.0, 1e-16]), 1e-16);
        // naive summation loses it
        assert_ne!([1.0, 1e-16, -1.0].iter().sum::<f64>(), 1e-16);
        assert_eq!(compensated_sum([1.0, 1e-16, -1.0]), 1e-16);
    }

    #[test]
    fn million_tenths() {
        let s = compensated_sum(std::iter::repeat(0.1).take(1_000_000));
        assert!((s - 100_000.0).abs() <= 1e-9, "{s}");
    }

    #[test]
    fn fixed_order_is_deterministic() {
        let terms: Vec<f64> = (1..5000).map(|k| ((k as f64).sin() * 1e3).exp2()).collect();
        let a = compensated_sum(terms.iter().copied());
        let b = compensated_sum(terms.iter().copied());
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn complex_components_compensated() {
        let z = compensated_sum_complex([
            Complex64::new(1.0, -1.0),
            Complex64::new(1e-16, 2e-16),
            Complex64::new(-1.0, 1.0),
        ]);
        assert_eq!(z, Complex64::new(1e-16, 2e-16));
    }
}
