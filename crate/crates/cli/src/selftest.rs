//! The invariant suite behind `zeta-reciprocity selftest`.

use std::f64::consts::PI;

use num_complex::Complex64;
use zeta_reciprocity::calibration::Calibration;
use zeta_reciprocity::characters::{
    cosine_twisted_sum, enumerate_characters, gauss_sum, orthogonality_residual, DirichletCharacter,
};
use zeta_reciprocity::lfunctions::{
    dirichlet_fe_residual, dirichlet_l, riemann_zeta, zeta_fe_residual, CriticalPoint, EulerMaclaurin,
};
use zeta_reciprocity::moments::{dual_moment, lhs_moment, verify_theorem, ReciprocityInstance};
use zeta_reciprocity::numerics::{complex_gamma, QuadraturePlan};
use zeta_reciprocity::oracles::{
    additive_reciprocity_check, character_split_check, decomposition_check, mellin_pair_check,
    residue_main_term_check,
};
use zeta_reciprocity::{Error, Result};

use crate::{Fault, Report, EXACT_TOL};

/// ζ(1/2) to 20 digits.
const ZETA_HALF: f64 = -1.460_354_508_809_586_812_9;

const FE_HEIGHTS: [f64; 6] = [0.5, 3.0, 14.134, 37.5, 101.0, 480.25];

fn faulty_gauss_sum(chi: &DirichletCharacter, fault: Option<Fault>) -> Complex64 {
    match fault {
        Some(Fault::GaussSumSign) => -gauss_sum(chi),
        None => gauss_sum(chi),
    }
}

/// Appends every check to `report`. Errors abort the suite; failed bounds
/// are recorded and the run continues.
pub fn run_checks(report: &mut Report, fault: Option<Fault>) -> Result<()> {
    let em = EulerMaclaurin::default();
    let plan = QuadraturePlan::default();

    let zeta2 = riemann_zeta(CriticalPoint::new(2.0, 0.0)?, &em)?;
    report.check("zeta(2)", (zeta2 - PI * PI / 6.0).norm(), 1e-12);
    let zeta_half = riemann_zeta(CriticalPoint::on_line(0.0)?, &em)?;
    report.check("zeta(1/2)", (zeta_half - ZETA_HALF).norm(), 1e-10);

    let mod3 = enumerate_characters(3)?;
    let quadratic = mod3.get(1).ok_or(Error::InvalidInstance("mod 3 family".into()))?;
    let l1 = dirichlet_l(CriticalPoint::new(1.0, 0.0)?, quadratic, &em)?;
    report.check("L(1, chi_3)", (l1 - PI / (3.0 * 3f64.sqrt())).norm(), 1e-10);

    let z = Complex64::new(0.3, 2.5);
    let reflection = complex_gamma(z)? * complex_gamma(1.0 - z)? * (z * PI).sin();
    report.check("gamma reflection", (reflection - PI).norm(), 1e-12);

    let mut fe = 0.0f64;
    for &t in &FE_HEIGHTS {
        fe = fe.max(zeta_fe_residual(t, &em)?);
    }
    report.check("zeta functional equation", fe, 1e-9);
    let mut fe = 0.0f64;
    for p in [5u64, 7, 13] {
        for chi in enumerate_characters(p)?.even_primitive() {
            for &t in &FE_HEIGHTS {
                fe = fe.max(dirichlet_fe_residual(t, chi, &em)?);
            }
        }
    }
    report.check("L functional equation", fe, 1e-9);

    let mut orth = 0.0f64;
    for p in [3u64, 5, 7, 11, 13, 31] {
        orth = orth.max(orthogonality_residual(p)?);
    }
    report.check("character orthogonality", orth, 1e-12);

    // quadratic Gauss sums are √p or i√p, and |τ|² = p throughout
    let mut gauss = 0.0f64;
    let mut cosine = 0.0f64;
    for p in [5u64, 7, 11, 13] {
        let family = enumerate_characters(p)?;
        let root = (p as f64).sqrt();
        for chi in family.characters() {
            if chi.is_principal() {
                continue;
            }
            let tau = faulty_gauss_sum(chi, fault);
            gauss = gauss.max((tau.norm_sqr() - p as f64).abs());
            if chi.is_real() {
                let closed = if p % 4 == 1 {
                    Complex64::new(root, 0.0)
                } else {
                    Complex64::new(0.0, root)
                };
                gauss = gauss.max((tau - closed).norm());
            }
            let expected = if chi.is_even() {
                faulty_gauss_sum(&chi.conj(), fault)
            } else {
                Complex64::new(0.0, 0.0)
            };
            cosine = cosine.max((cosine_twisted_sum(chi) - expected).norm());
        }
    }
    report.check("gauss sum", gauss, 1e-12);
    report.check("cosine twisted sum", cosine, 1e-12);

    let mut additive = 0.0f64;
    for (n, m) in (1..40u64).flat_map(|n| (1..25u64).map(move |m| (n * 7919 % 1000 + 1, m))) {
        for (p, q) in [(3, 5), (5, 7), (97, 101)] {
            additive = additive.max(additive_reciprocity_check(n, m, p, q)?);
        }
    }
    report.check("additive reciprocity", additive, 1e-14);

    let small = ReciprocityInstance::new(5, 7, 20.0)?;
    report.check("character split", character_split_check(&small, 400)?, 1e-10);

    let first = ReciprocityInstance::new(3, 5, 20.0)?;
    let lhs = lhs_moment(&first, &plan)?.value;
    let lhs_swapped = lhs_moment(&first.swapped(), &plan)?.value;
    report.check("lhs p<->q symmetry", (lhs - lhs_swapped).abs(), EXACT_TOL);
    report.check("dual realness", dual_moment(&small, &plan)?.imag_residual, EXACT_TOL);

    let ledger = decomposition_check(&first, &plan)?;
    report.check("decomposition", ledger.decomposition_residual, 1e-6);
    let cal = Calibration::stored();
    report.check(
        "approx gap",
        ledger.approx_gap,
        cal.approx_gap_bound() * (3.0f64 / 5.0).sqrt(),
    );

    let residue = residue_main_term_check(&ReciprocityInstance::new(3, 5, 40.0)?)?;
    report.check("residue main term", residue.diff, 1e-8);

    let mellin = mellin_pair_check(
        &[Complex64::new(0.0, 0.0), Complex64::new(0.2, 3.0)],
        &[Complex64::new(2.0, 0.0), Complex64::new(2.0, -4.0)],
        40.0,
        &plan,
    )?;
    report.check("mellin pairs", mellin.max_residual, 1e-8);

    let theorem = verify_theorem(&ReciprocityInstance::new(3, 5, 40.0)?, &plan)?;
    report.check(
        "normalized residual (3,5,40)",
        theorem.normalized_residual.abs(),
        cal.theorem_bound(),
    );
    Ok(())
}
