//! Empirical constants for the error terms, whose implied constants are not
//! given explicitly. A calibration run over the desk grid measures each
//! normalized quantity; checks then compare against the stored maximum times
//! [`SAFETY_FACTOR`].

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::moments::{verify_corollary, verify_theorem, ReciprocityInstance};
use crate::numerics::QuadraturePlan;
use crate::oracles::decomposition_check;

pub const SAFETY_FACTOR: f64 = 1.5;

pub const DESK_PAIRS: [(u64, u64); 6] = [(3, 5), (5, 3), (3, 7), (5, 7), (5, 11), (7, 11)];
pub const DESK_HEIGHTS: [f64; 4] = [20.0, 40.0, 80.0, 160.0];

/// Where a stored calibration came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub pairs: Vec<(u64, u64)>,
    pub heights: Vec<f64>,
    pub plan: QuadraturePlan,
    pub crate_version: String,
    pub command: String,
    /// Instance attaining each maximum, as `[p, q, T]`.
    pub argmax: CalibrationArgmax,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationArgmax {
    pub c0: [f64; 3],
    pub c1: [f64; 3],
    pub c2: [f64; 3],
    pub f1: [f64; 3],
    pub f3: [f64; 3],
    pub pole: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    /// `max |residual| / (√(q/p) + √(p/q))` for the theorem.
    pub c0_theorem: f64,
    /// `max |D(p,q) - D(q,p)| / (√(q/(pT)) + √(p/(qT)))`.
    pub c1_corollary: f64,
    /// `max |F₂(0) - cosine sum| / √(p/q)`.
    pub c2_approx_gap: f64,
    /// `max |F₁(0)| / √(p/q)`.
    pub c_f1: f64,
    /// `max |F₃(0)| / √(p/q)`.
    pub c_f3: f64,
    /// `max |F(0) - lhs|`, i.e. the pole correction.
    pub c_pole: f64,
    pub provenance: Provenance,
}

impl Calibration {
    /// The calibration committed in `data/calibration.json`.
    pub fn stored() -> &'static Calibration {
        static STORED: OnceLock<Calibration> = OnceLock::new();
        STORED.get_or_init(|| {
            serde_json::from_str(include_str!("../data/calibration.json"))
                .expect("data/calibration.json is valid")
        })
    }

    pub fn theorem_bound(&self) -> f64 {
        SAFETY_FACTOR * self.c0_theorem
    }

    pub fn corollary_bound(&self) -> f64 {
        SAFETY_FACTOR * self.c1_corollary
    }

    pub fn approx_gap_bound(&self) -> f64 {
        SAFETY_FACTOR * self.c2_approx_gap
    }

    pub fn f1_bound(&self) -> f64 {
        SAFETY_FACTOR * self.c_f1
    }

    pub fn f3_bound(&self) -> f64 {
        SAFETY_FACTOR * self.c_f3
    }

    pub fn pole_bound(&self) -> f64 {
        SAFETY_FACTOR * self.c_pole
    }
}

#[derive(Default)]
struct Max {
    value: f64,
    at: [f64; 3],
}

impl Max {
    fn offer(&mut self, v: f64, p: u64, q: u64, t: f64) {
        if v.abs() > self.value {
            self.value = v.abs();
            self.at = [p as f64, q as f64, t];
        }
    }
}

/// Measures every constant over `pairs × heights`.
pub fn calibrate(pairs: &[(u64, u64)], heights: &[f64], plan: &QuadraturePlan) -> Result<Calibration> {
    let (mut c0, mut c1, mut c2) = (Max::default(), Max::default(), Max::default());
    let (mut f1, mut f3, mut pole) = (Max::default(), Max::default(), Max::default());
    for &(p, q) in pairs {
        for &t in heights {
            let inst = ReciprocityInstance::new(p, q, t)?;
            let theorem = verify_theorem(&inst, plan)?;
            c0.offer(theorem.normalized_residual, p, q, t);
            let corollary = verify_corollary(p, q, t, plan)?;
            c1.offer(corollary.normalized_difference, p, q, t);
            let ledger = decomposition_check(&inst, plan)?;
            let root = (p as f64 / q as f64).sqrt();
            c2.offer(ledger.approx_gap / root, p, q, t);
            f1.offer(ledger.f1_0 / root, p, q, t);
            f3.offer(ledger.f3_0 / root, p, q, t);
            pole.offer(ledger.pole_correction().norm(), p, q, t);
        }
    }
    Ok(Calibration {
        c0_theorem: c0.value,
        c1_corollary: c1.value,
        c2_approx_gap: c2.value,
        c_f1: f1.value,
        c_f3: f3.value,
        c_pole: pole.value,
        provenance: Provenance {
            pairs: pairs.to_vec(),
            heights: heights.to_vec(),
            plan: *plan,
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            command: "zeta-reciprocity calibrate".to_string(),
            argmax: CalibrationArgmax {
                c0: c0.at,
                c1: c1.at,
                c2: c2.at,
                f1: f1.at,
                f3: f3.at,
                pole: pole.at,
            },
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stored_calibration_is_sane() {
        let c = Calibration::stored();
        for v in [c.c0_theorem, c.c1_corollary, c.c2_approx_gap, c.c_f1, c.c_f3, c.c_pole] {
            assert!(v.is_finite() && v > 0.0);
        }
        assert_eq!(c.provenance.pairs, DESK_PAIRS.to_vec());
        assert_eq!(c.provenance.heights, DESK_HEIGHTS.to_vec());
        assert_eq!(c.provenance.plan, QuadraturePlan::default());
    }

    #[test]
    fn calibrate_small_grid() {
        let c = calibrate(&[(3, 5)], &[20.0], &QuadraturePlan::default()).unwrap();
        assert_eq!(c.provenance.argmax.c0, [3.0, 5.0, 20.0]);
        assert!(c.c1_corollary > 0.0);
    }
}
