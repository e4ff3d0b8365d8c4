//! Positive and completely positive maps, and dual positivity of scalar
//! fully matricial functions.
//!
//! A linear map `Φ: M_n → M_n` (a square [`CornerMap`]) is positive when it
//! sends PSD matrices to PSD matrices — probed on random rank-one inputs and
//! mixtures — and completely positive iff its Choi matrix
//! `Σ_{ij} e_{ij} ⊗ Φ(e_{ij})` is PSD, which is decided exactly by one
//! Hermitian eigenvalue computation. A scalar function `f` is dual positive
//! when `f = f*` and `∇f(g, g*)` is a positive (equivalently completely
//! positive) map at every sample; the sampled form, the Choi form and the
//! two-point block form are all checked and must agree.

use crate::error::{Error, Result};
use crate::fm::{fm_star, FMFunc};
use crate::fmdq::{dq_block, nabla, CornerMap};
use crate::linalg::{self, CMat};
use crate::report::LawReport;
use crate::sampler::{Sampler, SamplerConfig};

/// Eigenvalue tolerance for PSD verdicts.
pub const PSD_TOL: f64 = 1.0e-8;

/// Hermiticity guard for Choi matrices.
const CHOI_HERM_TOL: f64 = 1.0e-9;

/// Choi matrix `Σ_{ij} e_{ij} ⊗ Φ(e_{ij})` of a square scalar corner map.
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    n: usize,
    matrix: CMat,
    herm_defect: f64,
}

impl ChoiMatrix {
    pub fn from_corner_map(map: &CornerMap) -> Result<Self> {
        let (m, n) = map.dims();
        if m != n || map.h_dim() != 1 {
            return Err(Error::ValueSpaceMismatch);
        }
        let mut c = CMat::zeros(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                let img = map.image(i, j);
                for a in 0..n {
                    for b in 0..n {
                        c[(i * n + a, j * n + b)] = img[(a, b)];
                    }
                }
            }
        }
        let herm_defect = linalg::hermitian_defect(&c);
        Ok(ChoiMatrix {
            n,
            matrix: c,
            herm_defect,
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn hermitian_defect(&self) -> f64 {
        self.herm_defect
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        linalg::min_hermitian_eigenvalue(&self.matrix)
    }
}

/// The transpose map on M_n: positive but not completely positive.
pub fn transpose_map(n: usize) -> CornerMap {
    let mut images = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            images.push(linalg::unit_matrix(n, n, j, i));
        }
    }
    CornerMap::from_images(n, n, 1, images)
}

/// Sampled positivity: Φ applied to random PSD inputs must stay PSD.
pub fn positive_map_check(map: &CornerMap, trials: usize, s: &mut Sampler) -> LawReport {
    let mut report = LawReport::new("positivity.sampled_positive_map", PSD_TOL);
    let (m, n) = map.dims();
    if m != n {
        report.record_bool(false, || "map is not square".into());
        return report;
    }
    for t in 0..trials {
        // rank-one inputs plus random PSD mixtures
        let h = if t % 3 == 0 {
            let v = s.vector(n);
            &v * v.adjoint()
        } else {
            s.psd(n, 1.0)
        };
        let h = h.map(|v| v / linalg::cr(h.norm().max(1e-300)));
        let out = map.apply(&h);
        let scale = 1.0 + out.norm();
        let herm = linalg::hermitian_defect(&out);
        let min_eig = linalg::min_hermitian_eigenvalue(&out);
        report.record((herm + (-min_eig).max(0.0)) / scale, || {
            format!("PSD input with Φ(h) eigenvalue {:.3e}", min_eig)
        });
    }
    report
}

/// Choi criterion: min eigenvalue of the Choi matrix, with a Hermiticity
/// guard that flags maps coming from non-self-adjoint functions.
pub fn cp_check(map: &CornerMap) -> Result<(LawReport, f64)> {
    let choi = ChoiMatrix::from_corner_map(map)?;
    let scale = 1.0 + choi.matrix().norm();
    if choi.hermitian_defect() > CHOI_HERM_TOL * scale {
        return Err(Error::ChoiNotHermitian(choi.hermitian_defect()));
    }
    let min_eig = choi.min_eigenvalue();
    let mut report = LawReport::new("positivity.choi_psd", PSD_TOL);
    report.record((-min_eig).max(0.0) / scale.max(1.0), || {
        format!("min Choi eigenvalue {:.3e}", min_eig)
    });
    Ok((report, min_eig))
}

/// Assemble the two-point block map `⊕_{ij} ∇_{n(i),n(j)}f(g^{(i)}, g^{(j)*})`
/// acting on `M_{n1+n2}`.
fn block_map(f: &FMFunc, g1: &CMat, g2: &CMat) -> Result<CornerMap> {
    let gd = f.g_dim();
    let n1 = g1.nrows() / gd;
    let n2 = g2.nrows() / gd;
    let n = n1 + n2;
    let points = [g1.clone(), g2.clone()];
    let sizes = [n1, n2];
    let offsets = [0usize, n1];
    let mut images = vec![CMat::zeros(n, n); n * n];
    for bi in 0..2 {
        for bj in 0..2 {
            let part = dq_block(f, &points[bi], &points[bj].adjoint())?;
            for a in 0..sizes[bi] {
                for b in 0..sizes[bj] {
                    let img = part.image(a, b);
                    let mut embedded = CMat::zeros(n, n);
                    for x in 0..sizes[bi] {
                        for y in 0..sizes[bj] {
                            embedded[(offsets[bi] + x, offsets[bj] + y)] = img[(x, y)];
                        }
                    }
                    images[(offsets[bi] + a) * n + offsets[bj] + b] = embedded;
                }
            }
        }
    }
    Ok(CornerMap::from_images(n, n, 1, images))
}

/// Full dual-positivity suite for a scalar function on a star-closed domain:
/// self-adjointness of f, sampled positivity of `∇f(g,g*)`, the Choi
/// criterion, and the two-point block form with its consistency identity.
pub fn dual_positive(f: &FMFunc, cfg: &SamplerConfig) -> Result<Vec<LawReport>> {
    if f.h_dim() != 1 {
        return Err(Error::ValueSpaceMismatch);
    }
    let mut s = Sampler::new(cfg.seed);
    let mut star_sym = LawReport::new("dualpos.star_symmetric", 1.0e-9);
    let mut sampled = LawReport::new("dualpos.positive_map", PSD_TOL);
    let mut choi = LawReport::new("dualpos.choi_psd", PSD_TOL);
    let mut block_form = LawReport::new("dualpos.block_form", PSD_TOL);
    let mut block_consistency = LawReport::new("dualpos.block_consistency", 1.0e-9);

    let starred = fm_star(f.clone());
    for _ in 0..cfg.samples {
        let n = s.usize_in(1, cfg.max_size);
        let g = match f.sample_domain_point(n, &mut s) {
            Some(g) => g,
            None => continue,
        };
        if !f.domain_member(n, &g.adjoint()).unwrap_or(false) {
            continue;
        }
        let witness = || format!("n={}", n);

        // f = f*
        let fv = f.eval(n, &g).unwrap();
        if let Ok(sv) = starred.eval(n, &g) {
            star_sym.record((&fv - sv).norm() / (1.0 + fv.norm()), witness);
        }

        let map = match nabla(f, &g) {
            Ok(map) => map,
            Err(_) => continue,
        };
        sampled.merge(&rename(
            positive_map_check(&map, 24, &mut s),
            "dualpos.positive_map",
        ));
        match cp_check(&map) {
            Ok((rep, _)) => choi.merge(&rename(rep, "dualpos.choi_psd")),
            Err(Error::ChoiNotHermitian(d)) => {
                choi.record(d.max(1.0), || "Choi not Hermitian".into())
            }
            Err(e) => return Err(e),
        }

        // two-point block form
        let n2 = s.usize_in(1, cfg.max_size);
        if let Some(g2) = f.sample_domain_point(n2, &mut s) {
            if f.domain_member(n2, &g2.adjoint()).unwrap_or(false) {
                if let Ok(big) = block_map(f, &g, &g2) {
                    block_form.merge(&rename(
                        positive_map_check(&big, 16, &mut s),
                        "dualpos.block_form",
                    ));
                    // the assembled block map is ∇ at the direct-sum point
                    let sum = linalg::direct_sum(&g, &g2);
                    if let Ok(direct) = nabla(f, &sum) {
                        let mut defect: f64 = 0.0;
                        for a in 0..n + n2 {
                            for b in 0..n + n2 {
                                defect = defect.max((direct.image(a, b) - big.image(a, b)).norm());
                            }
                        }
                        block_consistency.record(defect, witness);
                    }
                }
            }
        }
    }

    Ok(vec![star_sym, sampled, choi, block_form, block_consistency])
}

fn rename(mut report: LawReport, name: &str) -> LawReport {
    report.law = name.into();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fm::{FMFunc, ScalarRegion};
    use crate::linalg::{cr, identity, unit_matrix, ONE, ZERO};
    use crate::report::all_passed;

    fn identity_map(n: usize) -> CornerMap {
        let mut images = Vec::new();
        for i in 0..n {
            for j in 0..n {
                images.push(unit_matrix(n, n, i, j));
            }
        }
        CornerMap::from_images(n, n, 1, images)
    }

    fn disk() -> ScalarRegion {
        ScalarRegion::Disk {
            center: ZERO,
            radius: 5.0,
        }
    }

    #[test]
    fn identity_choi_is_psd() {
        // Choi of id on M_2 is the maximally entangled projector (×1): PSD, min eig 0
        let (report, min_eig) = cp_check(&identity_map(2)).unwrap();
        assert!(report.passed);
        assert!(min_eig.abs() < 1e-12);
    }

    #[test]
    fn transpose_is_positive_but_not_cp() {
        let t = transpose_map(2);
        let mut s = Sampler::new(8);
        let pos = positive_map_check(&t, 50, &mut s);
        assert!(pos.passed, "{:?}", pos);
        let (report, min_eig) = cp_check(&t).unwrap();
        assert!(!report.passed);
        assert!((min_eig + 1.0).abs() < 1e-9, "min eig {}", min_eig);
    }

    #[test]
    fn kraus_conjugation_is_cp() {
        // h ↦ AhA* has Choi Σ e_ij ⊗ A e_ij A* = (vec A)(vec A)* ≥ 0
        let mut s = Sampler::new(4);
        let a = s.cmat(3, 3, 1.0);
        let mut images = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                images.push(&a * unit_matrix(3, 3, i, j) * a.adjoint());
            }
        }
        let map = CornerMap::from_images(3, 3, 1, images);
        let (report, min_eig) = cp_check(&map).unwrap();
        assert!(report.passed, "min eig {}", min_eig);
        let pos = positive_map_check(&map, 40, &mut s);
        assert!(pos.passed);
    }

    #[test]
    fn negation_is_detected() {
        let neg = {
            let mut images = Vec::new();
            for i in 0..2 {
                for j in 0..2 {
                    images.push(unit_matrix(2, 2, i, j).map(|v| v * cr(-1.0)));
                }
            }
            CornerMap::from_images(2, 2, 1, images)
        };
        let mut s = Sampler::new(10);
        let pos = positive_map_check(&neg, 30, &mut s);
        assert!(!pos.passed);
        assert!(pos.witness.is_some());
    }

    #[test]
    fn cp_implies_positive_on_random_maps() {
        // positive_map_check never rejects a map the Choi test accepts
        let mut s = Sampler::new(17);
        for trial in 0..20 {
            let n = 2 + trial % 3;
            // random two-Kraus map, always CP
            let (a, b) = (s.cmat(n, n, 1.0), s.cmat(n, n, 0.5));
            let mut images = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    let e = unit_matrix(n, n, i, j);
                    images.push(&a * &e * a.adjoint() + &b * &e * b.adjoint());
                }
            }
            let map = CornerMap::from_images(n, n, 1, images);
            let (choi, min_eig) = cp_check(&map).unwrap();
            assert!(choi.passed, "Kraus map must be CP, min eig {}", min_eig);
            let pos = positive_map_check(&map, 30, &mut s);
            assert!(pos.passed, "CP map rejected by sampling: {:?}", pos);
        }
    }

    #[test]
    fn verdicts_stable_across_the_tolerance_window() {
        // min Choi eigenvalues of the fixtures sit far outside [−1e−8, −1e−10]
        let fixtures: Vec<(CornerMap, bool)> = vec![
            (identity_map(2), true),
            (transpose_map(2), false),
            (identity_map(3), true),
        ];
        for (map, expect_cp) in fixtures {
            let (_, min_eig) = cp_check(&map).unwrap();
            for tol in [1.0e-10, 1.0e-8] {
                assert_eq!(min_eig >= -tol, expect_cp, "tol {}: {}", tol, min_eig);
            }
        }
    }

    #[test]
    fn identity_function_is_dual_positive() {
        let f = FMFunc::identity_func(disk());
        let cfg = SamplerConfig {
            samples: 8,
            max_size: 2,
            ..SamplerConfig::default()
        };
        let reports = dual_positive(&f, &cfg).unwrap();
        assert!(all_passed(&reports), "{:#?}", reports);
    }

    #[test]
    fn negated_identity_fails_dual_positivity() {
        let f = FMFunc::func_poly(vec![ZERO, cr(-1.0)], disk());
        let cfg = SamplerConfig {
            samples: 6,
            max_size: 2,
            ..SamplerConfig::default()
        };
        let reports = dual_positive(&f, &cfg).unwrap();
        let sampled = reports
            .iter()
            .find(|r| r.law == "dualpos.positive_map")
            .unwrap();
        let choi = reports
            .iter()
            .find(|r| r.law == "dualpos.choi_psd")
            .unwrap();
        let block = reports
            .iter()
            .find(|r| r.law == "dualpos.block_form")
            .unwrap();
        // verdicts agree: every positivity form rejects
        assert!(!sampled.passed);
        assert!(!choi.passed);
        assert!(!block.passed);
        // while f is still self-adjoint on the symmetric domain
        let star = reports
            .iter()
            .find(|r| r.law == "dualpos.star_symmetric")
            .unwrap();
        assert!(star.passed);
        let _ = (identity(1), ONE);
    }
}
