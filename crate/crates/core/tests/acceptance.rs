//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line. Tolerances are pinned here, not configurable.

use std::time::Instant;

use fdq_core::dq::{check_gdq_laws, iterate_dq, psi_embed};
use fdq_core::duality::{
    check_duality_laws, pairing_check, positivity_transfer_check, trace_flip_check, u_transform,
    Functional,
};
use fdq_core::fm::{FMFunc, ScalarRegion};
use fdq_core::fmdq::{check_dq_laws, default_scalar_family, dq_block};
use fdq_core::linalg::{c, cr, identity, CMat, C64, ZERO};
use fdq_core::matlift::{check_lift_laws, LiftContext};
use fdq_core::ncalg::Context;
use fdq_core::positivity::cp_check;
use fdq_core::positivity::transpose_map;
use fdq_core::report::{all_passed, LawReport};
use fdq_core::resolvent::check_resolvent_laws;
use fdq_core::series::{
    corep_defect, corep_moebius_left, corep_moebius_right, corep_resolvent, corep_sandwich,
    MatSeries,
};
use fdq_core::tensor::TensorPoly;
use fdq_core::{Sampler, SamplerConfig, Site};

fn verdict(criterion: &str, passed: bool) {
    println!(
        "ACCEPTANCE {:<40} {}",
        criterion,
        if passed { "PASS" } else { "FAIL" }
    );
    assert!(passed, "acceptance criterion failed: {}", criterion);
}

fn dump_failures(reports: &[LawReport]) -> String {
    reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| format!("{}", r))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Criterion 1: the coalgebra axioms hold with defect exactly 0 on 200
/// integer-coefficient draws (q ≤ 2, n ≤ 3, degree ≤ 5) in under 10 s.
#[test]
fn criterion_01_gdq_axioms_exact() {
    let start = Instant::now();
    let cfg = SamplerConfig {
        seed: 1001,
        samples: 200,
        q: 2,
        n_vars: 3,
        max_degree: 5,
        max_terms: 4,
        integer_coeffs: true,
        max_size: 3,
    };
    let reports = check_gdq_laws(&cfg);
    let exact = reports
        .iter()
        .all(|r| r.max_defect == 0.0 && r.samples >= 200);
    let elapsed = start.elapsed().as_secs_f64();
    verdict("01 gdq-axioms-defect-zero", exact && elapsed < 10.0);
    if !exact {
        panic!("{}", dump_failures(&reports));
    }
}

/// Criterion 2: the word-embedding recovery identities are exact for k ≤ 4.
#[test]
fn criterion_02_recovery_identities() {
    let mut s = Sampler::new(1002);
    let mut ok = true;
    for q in 1..=2usize {
        let ctx = Context::new(q, 2);
        for k in 1..=4usize {
            let var = s.usize_in(0, 1);
            let factors: Vec<_> = (0..=k).map(|_| s.scalar_poly(ctx, true)).collect();
            let embedded = psi_embed(&factors, var).unwrap();
            let recovered = iterate_dq(k, var, &embedded).unwrap();
            ok &= recovered.sub(&TensorPoly::of_polys(&factors)).l1_norm() == 0.0;
            for l in 0..k {
                let short: Vec<_> = (0..=l).map(|_| s.scalar_poly(ctx, true)).collect();
                let low = psi_embed(&short, var).unwrap();
                ok &= iterate_dq(k, var, &low).unwrap().l1_norm() == 0.0;
            }
        }
    }
    verdict("02 recovery-identities-exact", ok);
}

/// Criterion 3: every corepresentation constructor has defect ≤ 1e−10 over
/// 50 draws at p ≤ 3, D ≤ 6, and the unit matrix fails with defect = p.
#[test]
fn criterion_03_corepresentations() {
    let mut s = Sampler::new(1003);
    let mut ok = true;
    for draw in 0..50 {
        let p = s.usize_in(1, 3);
        let trunc = s.usize_in(2, 6);
        let q = s.usize_in(1, 2);
        let ctx = Context::new(q, 1);
        let dim = p * q;
        let shift = identity(dim).map(|v| v * c(0.0, 3.0));
        let n_big = s.cmat(dim, dim, 0.4) + shift.clone();
        let alpha = corep_resolvent(ctx, p, trunc, &n_big, 0).unwrap();
        ok &= corep_defect(&alpha, 0).unwrap() <= 1.0e-10;
        let b1 = s.cmat(dim, dim, 0.3);
        let b2 = s.cmat(dim, dim, 0.3) + shift;
        let b3 = s.cmat(dim, dim, 0.3);
        if let Ok(sandwiched) = corep_sandwich(ctx, p, trunc, &b1, &b2, &b3, 0) {
            ok &= corep_defect(&sandwiched, 0).unwrap() <= 1.0e-10;
        }
        let beta = s.cmat(dim, dim, 0.2);
        let left = corep_moebius_left(&alpha, &beta).unwrap();
        let right = corep_moebius_right(&alpha, &beta).unwrap();
        ok &= corep_defect(&left, 0).unwrap() <= 1.0e-10;
        ok &= corep_defect(&right, 0).unwrap() <= 1.0e-10;
        assert!(
            ok,
            "corep draw {} failed (p={}, D={}, q={})",
            draw, p, trunc, q
        );
    }
    // the unit matrix fails with defect exactly p (scalar coefficients)
    for p in 1..=3usize {
        let ctx = Context::new(1, 1);
        let one = MatSeries::identity(ctx, p, 3);
        let defect = corep_defect(&one, 0).unwrap();
        ok &= (defect - p as f64).abs() <= 1.0e-12;
    }
    verdict("03 corepresentation-constructors", ok);
}

/// Criterion 4: the p = 2 lift satisfies the Leibniz/coassociativity laws
/// with defect 0, ∂Y is exactly the unit tensor, and the `D⟨X⟩` isomorphism
/// intertwines exactly (q ≤ 2).
#[test]
fn criterion_04_matrix_lift() {
    let mut ok = true;
    for q in 1..=2usize {
        let lc = LiftContext::new(2, q);
        let cfg = SamplerConfig {
            seed: 1004 + q as u64,
            samples: 25,
            q,
            n_vars: 4,
            max_degree: 3,
            max_terms: 3,
            integer_coeffs: true,
            max_size: 2,
        };
        let reports = check_lift_laws(&lc, &cfg);
        ok &= reports.iter().all(|r| r.max_defect == 0.0);
        if !ok {
            panic!("q={}d:\n{}", q, dump_failures(&reports));
        }
    }
    verdict("04 matrix-lift-exact", ok);
}

/// Criterion 5: the resolvent-set laws hold at 1e−10·κ over 100 random sites
/// with d ≤ 4 and sizes ≤ 3, including the first-order Taylor probe.
#[test]
fn criterion_05_resolvent_laws() {
    let mut s = Sampler::new(1005);
    let mut ok = true;
    for site_ix in 0..100 {
        let d = s.usize_in(1, 4);
        let y = if site_ix % 2 == 0 {
            s.hermitian(d, 1.0)
        } else {
            s.cmat(d, d, 1.0)
        };
        let site = match site_ix % 3 {
            0 => Site::scalar_site(y).unwrap(),
            1 => Site::diagonal_site(y).unwrap(),
            _ => Site::full_site(y).unwrap(),
        };
        let cfg = SamplerConfig {
            seed: 50_000 + site_ix as u64,
            samples: 2,
            max_size: 3,
            ..SamplerConfig::default()
        };
        let reports = check_resolvent_laws(&site, &cfg);
        if !all_passed(&reports) {
            panic!("site {}:\n{}", site_ix, dump_failures(&reports));
        }
        ok &= all_passed(&reports);
    }
    verdict("05 resolvent-set-laws", ok);
}

/// Criterion 6: the 1×1 difference quotient of z², z³ and 1/(c−z) matches
/// the closed-form divided difference at 50 random pairs, 1e−10 relative.
#[test]
fn criterion_06_classical_difference_quotient() {
    let mut s = Sampler::new(1006);
    let domain = ScalarRegion::Disk {
        center: ZERO,
        radius: 3.0,
    };
    let c_pole = cr(9.0);
    let funcs: Vec<(FMFunc, Box<dyn Fn(C64, C64) -> C64>)> = vec![
        (
            FMFunc::func_poly(vec![ZERO, ZERO, cr(1.0)], domain.clone()),
            Box::new(|z1: C64, z2: C64| z1 + z2),
        ),
        (
            FMFunc::func_poly(vec![ZERO, ZERO, ZERO, cr(1.0)], domain.clone()),
            Box::new(|z1: C64, z2: C64| z1 * z1 + z1 * z2 + z2 * z2),
        ),
        (
            FMFunc::func_rational(vec![cr(1.0)], vec![c_pole, cr(-1.0)], domain.clone()),
            Box::new(move |z1: C64, z2: C64| cr(1.0) / ((c_pole - z1) * (c_pole - z2))),
        ),
    ];
    let mut ok = true;
    for (f, oracle) in &funcs {
        let mut pairs = 0;
        while pairs < 50 {
            let z1 = f.sample_domain_point(1, &mut s).unwrap()[(0, 0)];
            let z2 = f.sample_domain_point(1, &mut s).unwrap()[(0, 0)];
            if (z1 - z2).norm() < 1.0e-2 {
                continue;
            }
            pairs += 1;
            let p1 = CMat::from_row_slice(1, 1, &[z1]);
            let p2 = CMat::from_row_slice(1, 1, &[z2]);
            let got = dq_block(f, &p1, &p2).unwrap().alpha_form().unwrap()[(0, 0)];
            let expect = oracle(z1, z2);
            ok &= (got - expect).norm() <= 1.0e-10 * (1.0 + expect.norm());
        }
    }
    verdict("06 classical-difference-quotient", ok);
}

/// Criterion 7: product rule, slot splitting, equivariance and second-order
/// agreement at 1e−9 (norm-scaled) with at least 100 samples each, m,n,p ≤ 3.
#[test]
fn criterion_07_matricial_dq_laws() {
    let cfg = SamplerConfig {
        seed: 1007,
        samples: 170,
        max_size: 3,
        ..SamplerConfig::default()
    };
    let reports = check_dq_laws(&default_scalar_family(), &cfg, false);
    let want = [
        "fmdq.leibniz",
        "fmdq.splitting_first_slot",
        "fmdq.splitting_second_slot",
        "fmdq.equivariance",
        "fmdq.second_order_agreement",
    ];
    let mut ok = true;
    for law in want {
        let r = reports.iter().find(|r| r.law == law).unwrap();
        ok &= r.passed && r.samples >= 100;
        assert!(
            r.passed && r.samples >= 100,
            "{} with {} samples: {}",
            law,
            r.samples,
            r
        );
    }
    verdict("07 matricial-dq-laws", ok);
}

/// Criterion 8: the pairing between entrywise resolvent products and the
/// difference quotient of the transform, 100 random (site, φ, b₁, b₂),
/// d ≤ 4, m,n ≤ 3, tolerance 1e−9·κ².
#[test]
fn criterion_08_pairing() {
    let mut s = Sampler::new(1008);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 100 {
        attempts += 1;
        assert!(attempts < 400, "too many rejected pairing draws");
        let d = s.usize_in(1, 4);
        let y = if attempts % 2 == 0 {
            s.hermitian(d, 1.0)
        } else {
            s.cmat(d, d, 1.0)
        };
        let site = match attempts % 3 {
            0 => Site::scalar_site(y).unwrap(),
            1 => Site::diagonal_site(y).unwrap(),
            _ => Site::full_site(y).unwrap(),
        };
        let phi = Functional::new(s.cmat(d, d, 1.0)).unwrap();
        let m = s.usize_in(1, 3);
        let n = s.usize_in(1, 3);
        let b1 = site.random_member(&mut s, m);
        let b2 = site.random_member(&mut s, n);
        match pairing_check(&site, &phi, &b1, &b2) {
            Ok(report) => {
                assert!(report.passed, "{}", report);
                checked += 1;
            }
            Err(_) => continue,
        }
    }
    verdict("08 pairing-identity", true);
}

/// Criterion 9: tracial weights satisfy flip symmetry at 1e−9; a non-tracial
/// weight on a noncommuting site shows a flip defect > 1e−3 together with a
/// commutator witness, and both verdicts agree on every sample.
#[test]
fn criterion_09_trace_flip() {
    let y = CMat::from_row_slice(2, 2, &[ZERO, cr(1.0), cr(1.0), ZERO]);
    let site = Site::diagonal_site(y).unwrap();
    let cfg = SamplerConfig {
        seed: 1009,
        samples: 30,
        max_size: 2,
        ..SamplerConfig::default()
    };
    let tracial = Functional::new(identity(2).map(|v| v * cr(0.5))).unwrap();
    let reports = trace_flip_check(&site, &tracial, &cfg).unwrap();
    let mut ok = all_passed(&reports);
    let flip = reports
        .iter()
        .find(|r| r.law == "duality.flip_symmetry_tracial")
        .unwrap();
    ok &= flip.max_defect <= 1.0e-9;

    let skew = Functional::new(fdq_core::linalg::unit_matrix(2, 2, 0, 0)).unwrap();
    let reports = trace_flip_check(&site, &skew, &cfg).unwrap();
    ok &= all_passed(&reports);
    ok &= reports
        .iter()
        .any(|r| r.law == "duality.flip_detects_nontracial" && r.passed);
    ok &= reports
        .iter()
        .any(|r| r.law == "duality.flip_verdict_agreement" && r.passed && r.samples > 0);
    verdict("09 trace-flip-criterion", ok);
}

/// Criterion 10: for 50 random PSD weights the negated transform passes the
/// sampled, block and Choi positivity checks (min Choi eigenvalue ≥ −1e−8);
/// the transpose fixture is rejected with min eigenvalue −1 ± 1e−9; and the
/// state normalization converges with observed O(1/N) error.
#[test]
fn criterion_10_positivity_transfer() {
    let mut s = Sampler::new(1010);
    let y = CMat::from_row_slice(2, 2, &[ZERO, cr(1.0), cr(1.0), ZERO]);
    let site = Site::diagonal_site(y).unwrap();
    let mut ok = true;
    for draw in 0..50 {
        let w = s.psd(2, 1.0);
        let phi = Functional::new(w).unwrap();
        let cfg = SamplerConfig {
            seed: 2000 + draw,
            samples: 4,
            max_size: 2,
            ..SamplerConfig::default()
        };
        let reports = positivity_transfer_check(&site, &phi, &cfg).unwrap();
        if !all_passed(&reports) {
            panic!("draw {}:\n{}", draw, dump_failures(&reports));
        }
        ok &= all_passed(&reports);
    }
    // transpose fixture: min Choi eigenvalue −1
    let (report, min_eig) = cp_check(&transpose_map(2)).unwrap();
    ok &= !report.passed && (min_eig + 1.0).abs() <= 1.0e-9;
    verdict("10 positivity-transfer", ok);
}

/// The full transform suite stays green on a dense site, and the injectivity
/// rank equals d² there (supporting check for criteria 8–10).
#[test]
fn transform_suite_on_dense_site() {
    let y = CMat::from_row_slice(2, 2, &[ZERO, cr(1.0), cr(1.0), ZERO]);
    let site = Site::diagonal_site(y).unwrap();
    let weights = vec![
        identity(2).map(|v| v * cr(0.5)),
        fdq_core::linalg::unit_matrix(2, 2, 0, 0),
    ];
    let cfg = SamplerConfig {
        seed: 77,
        samples: 10,
        max_size: 2,
        ..SamplerConfig::default()
    };
    let reports = check_duality_laws(&site, &weights, &cfg).unwrap();
    assert!(all_passed(&reports), "{}", dump_failures(&reports));
    let inj = reports
        .iter()
        .find(|r| r.law == "duality.transform_injectivity")
        .unwrap();
    assert!(inj.witness.as_deref().unwrap_or("").contains("4 = 4"));
    // the negated transform of a state is dual positive end to end
    let phi = Functional::normalized_trace(2);
    let _ = u_transform(&site, &phi).unwrap();
}
