//! Special functions and numerical primitives.

pub mod bernoulli;
pub mod fourier;
pub mod gamma;
pub mod quadrature;
pub mod summation;

pub use fourier::{
    gaussian_window_transform, gaussian_window_transform_quadrature,
    gaussian_window_transform_weighted, gaussian_window_transform_weighted_quadrature,
};
pub use gamma::{complex_gamma, digamma, ln_gamma, EULER_GAMMA};
pub use quadrature::{
    integrate_panels, integrate_panels_unchecked, PanelValue, Quadrature, QuadraturePlan,
};
pub use summation::{compensated_sum, compensated_sum_complex, ComplexSum, NeumaierSum};

/// `ComplexValue` of the verification routines.
pub type ComplexValue = num_complex::Complex64;
