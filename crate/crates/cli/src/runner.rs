//! Suite execution and report assembly.

use std::time::Instant;

use serde::Serialize;

use fdq_core::dq::check_gdq_laws;
use fdq_core::duality::check_duality_laws;
use fdq_core::fm::{check_fmfunc_laws, check_fmset_laws, fm_scale, FMFunc};
use fdq_core::fmdq::{check_dq_laws, default_scalar_family};
use fdq_core::linalg::cr;
use fdq_core::matlift::{check_lift_laws, LiftContext};
use fdq_core::positivity::{cp_check, dual_positive, transpose_map};
use fdq_core::report::LawReport;
use fdq_core::resolvent::check_resolvent_laws;
use fdq_core::series::check_corep_laws;
use fdq_core::SamplerConfig;

use crate::scenario::{Built, Scenario};

pub const REPORT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct LawEntry {
    pub law: String,
    pub samples: usize,
    pub max_defect: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub witness: Option<String>,
}

impl From<LawReport> for LawEntry {
    fn from(r: LawReport) -> Self {
        LawEntry {
            law: r.law,
            samples: r.samples,
            max_defect: r.max_defect,
            tolerance: r.tolerance,
            passed: r.passed,
            witness: r.witness,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub laws: Vec<LawEntry>,
    pub elapsed_ms: u64,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub format_version: u32,
    pub seed: u64,
    pub tol_scale: f64,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
    pub total_elapsed_ms: u64,
}

pub struct Flags {
    pub suite: Option<String>,
    pub seed: Option<u64>,
    pub tol_scale: f64,
    pub verify_fd: bool,
}

fn apply_tol_scale(reports: &mut [LawReport], scale: f64) {
    for r in reports.iter_mut() {
        r.tolerance *= scale;
        r.passed = r.max_defect <= r.tolerance;
    }
}

fn prefix(mut reports: Vec<LawReport>, tag: &str) -> Vec<LawReport> {
    for r in reports.iter_mut() {
        r.law = format!("{}@{}", r.law, tag);
    }
    reports
}

pub fn run(scenario: &Scenario, built: &Built, flags: &Flags) -> Result<Report, String> {
    let seed = flags.seed.unwrap_or(scenario.seed);
    let cfg = SamplerConfig {
        seed,
        samples: scenario.sampler.samples,
        q: built.context.q,
        n_vars: built.context.n_vars,
        max_degree: scenario.sampler.max_degree,
        max_terms: scenario.sampler.max_terms,
        integer_coeffs: scenario.sampler.integer_coeffs,
        max_size: scenario.sampler.max_size,
    };
    let tol_scale = flags.tol_scale * scenario.tolerances.as_ref().map(|t| t.scale).unwrap_or(1.0);

    let mut selected: Vec<String> = match &flags.suite {
        Some(s) => vec![s.clone()],
        None => scenario.suites.clone(),
    };
    if selected.iter().any(|s| s == "all") {
        selected = [
            "corep",
            "dq",
            "dualpos",
            "fm",
            "gdq",
            "lift",
            "resolvent",
            "utransform",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
    }
    selected.sort();
    selected.dedup();

    let total_start = Instant::now();
    let mut suites = Vec::new();
    for suite in &selected {
        let start = Instant::now();
        let mut reports = run_suite(suite, built, &cfg, flags)?;
        apply_tol_scale(&mut reports, tol_scale);
        reports.sort_by(|a, b| a.law.cmp(&b.law));
        let passed = reports.iter().all(|r| r.passed);
        suites.push(SuiteReport {
            suite: suite.clone(),
            passed,
            laws: reports.into_iter().map(LawEntry::from).collect(),
            elapsed_ms: start.elapsed().as_millis() as u64,
        });
    }
    let passed = suites.iter().all(|s| s.passed);
    Ok(Report {
        format_version: REPORT_FORMAT_VERSION,
        seed,
        tol_scale,
        passed,
        suites,
        total_elapsed_ms: total_start.elapsed().as_millis() as u64,
    })
}

fn run_suite(
    suite: &str,
    built: &Built,
    cfg: &SamplerConfig,
    flags: &Flags,
) -> Result<Vec<LawReport>, String> {
    match suite {
        "gdq" => Ok(check_gdq_laws(cfg)),
        "corep" => {
            let corep_cfg = SamplerConfig {
                max_degree: built.truncation,
                ..cfg.clone()
            };
            Ok(check_corep_laws(&corep_cfg))
        }
        "lift" => {
            let lc = LiftContext::new(built.lift_p, built.context.q);
            let lift_cfg = SamplerConfig {
                n_vars: built.lift_p * built.lift_p,
                ..cfg.clone()
            };
            Ok(check_lift_laws(&lc, &lift_cfg))
        }
        "resolvent" => {
            let site = built
                .site
                .as_ref()
                .ok_or_else(|| "resolvent suite needs a site".to_string())?;
            Ok(check_resolvent_laws(site, cfg))
        }
        "fm" => {
            let mut out = Vec::new();
            for (name, set) in &built.fm_sets {
                out.extend(prefix(check_fmset_laws(set, cfg), name));
            }
            for (name, f) in &built.fm_funcs {
                out.extend(prefix(check_fmfunc_laws(f, cfg), name));
            }
            if out.is_empty() {
                return Err("fm suite needs declared sets or functions".to_string());
            }
            Ok(out)
        }
        "dq" => {
            let scalar: Vec<FMFunc> = built
                .fm_funcs
                .iter()
                .filter(|(_, f)| f.h_dim() == 1)
                .map(|(_, f)| f.clone())
                .collect();
            let family = if scalar.is_empty() {
                default_scalar_family()
            } else {
                scalar
            };
            Ok(check_dq_laws(&family, cfg, flags.verify_fd))
        }
        "dualpos" => {
            let site = built
                .site
                .as_ref()
                .ok_or_else(|| "dualpos suite needs a site".to_string())?;
            let mut out = Vec::new();
            for (name, phi) in &built.functionals {
                let neg_u = fm_scale(
                    cr(-1.0),
                    fdq_core::duality::u_transform(site, phi).map_err(|e| e.to_string())?,
                );
                let reports = dual_positive(&neg_u, cfg).map_err(|e| e.to_string())?;
                out.extend(prefix(reports, &format!("neg_transform({})", name)));
            }
            // fixture: the transpose map must be rejected by the Choi test
            let mut fixture = LawReport::new("positivity.transpose_rejected", 1.0e-9);
            match cp_check(&transpose_map(2)) {
                Ok((report, min_eig)) => {
                    let rejected = !report.passed && (min_eig + 1.0).abs() <= 1.0e-9;
                    fixture.record_bool(rejected, || {
                        format!("transpose Choi min eigenvalue {:.3e}", min_eig)
                    });
                }
                Err(e) => fixture.record_bool(false, || e.to_string()),
            }
            out.push(fixture);
            Ok(out)
        }
        "utransform" => {
            let site = built
                .site
                .as_ref()
                .ok_or_else(|| "utransform suite needs a site".to_string())?;
            let weights: Vec<_> = built
                .functionals
                .iter()
                .map(|(_, f)| f.weight().clone())
                .collect();
            if weights.is_empty() {
                return Err("utransform suite needs functionals".to_string());
            }
            check_duality_laws(site, &weights, cfg).map_err(|e| e.to_string())
        }
        other => Err(format!("unknown suite {:?}", other)),
    }
}
