//! The matricial difference quotient, read off block corners.
//!
//! For a fully matricial `f` and members `g' ∈ Ω_m`, `g'' ∈ Ω_n`, evaluating
//! at the block point `[[g', h⊗1],[0, g'']]` produces
//! `[[f(g'), h'],[0, f(g'')]]` with `h'` depending *linearly* on `h`; the
//! derivative is therefore read off exactly at `h = e_{jk}`, with no finite
//! differencing. [`CornerMap`] stores the mn unit images; for scalar-valued
//! functions the map is also materialized as an element of `M_m ⊗ M_n`
//! through the identification `(α(a⊗b))(c) = acb` (kron representation).
//!
//! The corner-linearity premise is itself a checked law, and a
//! finite-difference cross-check of the extraction is available behind a
//! verification flag.

use crate::error::{Error, Result};
use crate::fm::{fm_mul, FMFunc, ScalarRegion};
use crate::linalg::{self, block, kron, set_block, unit_matrix, CMat, C64};
use crate::report::LawReport;
use crate::sampler::{Sampler, SamplerConfig};

/// Tolerance for the diagonal-block consistency guard inside [`dq_block`].
const DIAG_GUARD_TOL: f64 = 1.0e-8;

/// The linear map `M_{m,n}(ℂ) → M_{m,n}(H)` produced by corner extraction,
/// stored as its action on all mn matrix units.
#[derive(Debug, Clone)]
pub struct CornerMap {
    m: usize,
    n: usize,
    h_dim: usize,
    images: Vec<CMat>,
}

impl CornerMap {
    pub fn from_images(m: usize, n: usize, h_dim: usize, images: Vec<CMat>) -> Self {
        assert_eq!(images.len(), m * n);
        CornerMap {
            m,
            n,
            h_dim,
            images,
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn h_dim(&self) -> usize {
        self.h_dim
    }

    /// Image of the unit `e_{jk}`.
    pub fn image(&self, j: usize, k: usize) -> &CMat {
        &self.images[j * self.n + k]
    }

    /// Apply to an arbitrary m×n matrix by linearity.
    pub fn apply(&self, h: &CMat) -> CMat {
        assert_eq!((h.nrows(), h.ncols()), (self.m, self.n));
        let mut out = CMat::zeros(self.m * self.h_dim, self.n * self.h_dim);
        for j in 0..self.m {
            for k in 0..self.n {
                let c = h[(j, k)];
                if c.norm() > 0.0 {
                    out += self.image(j, k).map(|v| v * c);
                }
            }
        }
        out
    }

    /// The element of `M_m ⊗ M_n` (kron representation, mn×mn) whose α-action
    /// reproduces this map; scalar-valued maps only.
    pub fn alpha_form(&self) -> Result<CMat> {
        if self.h_dim != 1 {
            return Err(Error::ValueSpaceMismatch);
        }
        let (m, n) = (self.m, self.n);
        let mut t = CMat::zeros(m * n, m * n);
        for i in 0..m {
            for j in 0..m {
                for k in 0..n {
                    for l in 0..n {
                        t[(i * n + k, j * n + l)] = self.image(j, k)[(i, l)];
                    }
                }
            }
        }
        Ok(t)
    }

    /// Rebuild the unit-image table from an α-form tensor.
    pub fn from_alpha(m: usize, n: usize, alpha: &CMat) -> Self {
        assert_eq!((alpha.nrows(), alpha.ncols()), (m * n, m * n));
        let mut images = Vec::with_capacity(m * n);
        for j in 0..m {
            for k in 0..n {
                let mut img = CMat::zeros(m, n);
                for i in 0..m {
                    for l in 0..n {
                        img[(i, l)] = alpha[(i * n + k, j * n + l)];
                    }
                }
                images.push(img);
            }
        }
        CornerMap {
            m,
            n,
            h_dim: 1,
            images,
        }
    }
}

/// The block point `g' ⊕ g'' + λ·(corner unit e_{jk} ⊗ I_g)`.
fn block_point(gp: &CMat, gpp: &CMat, g_dim: usize, j: usize, k: usize, lambda: C64) -> CMat {
    let m = gp.nrows() / g_dim;
    let mut p = linalg::direct_sum(gp, gpp);
    let mut corner = block(&p, j * g_dim, (m + k) * g_dim, g_dim, g_dim);
    corner += linalg::identity(g_dim).map(|v| v * lambda);
    set_block(&mut p, j * g_dim, (m + k) * g_dim, &corner);
    p
}

/// The matricial difference quotient `(∂_{m,n} f)(g', g'')` as a corner map.
///
/// Every block point is membership-checked, and the diagonal blocks of each
/// evaluation are required to reproduce `f_m(g')`, `f_n(g'')`; a mismatch
/// flags an evaluator that is not fully matricial.
pub fn dq_block(f: &FMFunc, gp: &CMat, gpp: &CMat) -> Result<CornerMap> {
    let g = f.g_dim();
    let h = f.h_dim();
    if !gp.nrows().is_multiple_of(g) || !gpp.nrows().is_multiple_of(g) {
        return Err(Error::Shape(
            "points must be multiples of the scalar size".into(),
        ));
    }
    let m = gp.nrows() / g;
    let n = gpp.nrows() / g;
    if !f.domain_member(m, gp)? || !f.domain_member(n, gpp)? {
        return Err(Error::OutsideDomain);
    }
    let fm_val = f.eval(m, gp)?;
    let fn_val = f.eval(n, gpp)?;
    let scale = 1.0 + fm_val.norm() + fn_val.norm();

    let mut images = Vec::with_capacity(m * n);
    for j in 0..m {
        for k in 0..n {
            let p = block_point(gp, gpp, g, j, k, linalg::ONE);
            if !f.domain_member(m + n, &p)? {
                return Err(Error::OutsideDomain);
            }
            let full = f.eval(m + n, &p)?;
            let top_left = block(&full, 0, 0, m * h, m * h);
            let bottom_right = block(&full, m * h, m * h, n * h, n * h);
            let bottom_left = block(&full, m * h, 0, n * h, m * h);
            let guard = (&top_left - &fm_val).norm()
                + (&bottom_right - &fn_val).norm()
                + bottom_left.norm();
            if guard > DIAG_GUARD_TOL * scale {
                return Err(Error::NotFullyMatricial(format!(
                    "diagonal blocks moved by {:.3e} under a corner perturbation",
                    guard
                )));
            }
            images.push(block(&full, 0, m * h, m * h, n * h));
        }
    }
    Ok(CornerMap::from_images(m, n, h, images))
}

/// `∇f(g, g*) = (α ∂_{n,n} f)(g, g*)` as a map `M_n → M_n`; scalar-valued
/// functions on star-closed domains only.
pub fn nabla(f: &FMFunc, g: &CMat) -> Result<CornerMap> {
    if f.h_dim() != 1 {
        return Err(Error::ValueSpaceMismatch);
    }
    let n = g.nrows() / f.g_dim();
    let g_star = g.adjoint();
    if !f.domain_member(n, g)? || !f.domain_member(n, &g_star)? {
        return Err(Error::OutsideDomain);
    }
    dq_block(f, g, &g_star)
}

/// Both composition orders of the second-order difference quotient at
/// `(g, g', g'')`, as elements of `M_m⊗M_n⊗M_p` (kron representation).
///
/// The mixed coefficient is exact at unit perturbation strength: conjugating
/// by `diag(λμ I, μ I, I)` scales the two superdiagonal perturbations by λ, μ
/// and the top-right block by λμ, so that block is exactly bilinear.
pub fn dq2_block(f: &FMFunc, g: &CMat, gp: &CMat, gpp: &CMat) -> Result<(CMat, CMat)> {
    if f.h_dim() != 1 {
        return Err(Error::ValueSpaceMismatch);
    }
    let gd = f.g_dim();
    let m = g.nrows() / gd;
    let n = gp.nrows() / gd;
    let p = gpp.nrows() / gd;
    let unit_g = |rows: usize, cols: usize, i: usize, j: usize| {
        kron(&unit_matrix(rows, cols, i, j), &linalg::identity(gd))
    };

    // (id⊗∂): differentiate ∂_{m,n+p}f(g, ·) through the (n,p) superdiagonal
    let base_w = linalg::direct_sum(gp, gpp);
    let t0 = dq_block(f, g, &base_w)?.alpha_form()?;
    let mut route_a = CMat::zeros(m * n * p, m * n * p);
    for d in 0..n {
        for e in 0..p {
            let w = &base_w + unit_g(n + p, n + p, d, n + e);
            let t1 = dq_block(f, g, &w)?.alpha_form()?;
            let diff = &t1 - &t0;
            for a in 0..m {
                for b in 0..m {
                    for c in 0..n {
                        for fq in 0..p {
                            route_a[(a * n * p + c * p + e, b * n * p + d * p + fq)] =
                                diff[(a * (n + p) + c, b * (n + p) + n + fq)];
                        }
                    }
                }
            }
        }
    }

    // (∂⊗id): differentiate ∂_{m+n,p}f(·, g'') through the (m,n) superdiagonal
    let base_v = linalg::direct_sum(g, gp);
    let s0 = dq_block(f, &base_v, gpp)?.alpha_form()?;
    let mut route_b = CMat::zeros(m * n * p, m * n * p);
    for b in 0..m {
        for c in 0..n {
            let v = &base_v + unit_g(m + n, m + n, b, m + c);
            let s1 = dq_block(f, &v, gpp)?.alpha_form()?;
            let diff = &s1 - &s0;
            for a in 0..m {
                for d in 0..n {
                    for e in 0..p {
                        for fq in 0..p {
                            route_b[(a * n * p + c * p + e, b * n * p + d * p + fq)] =
                                diff[(a * p + e, (m + d) * p + fq)];
                        }
                    }
                }
            }
        }
    }
    Ok((route_a, route_b))
}

/// Embed `t1 ⊕ t2` of `(M_{m1}⊗M_n) ⊕ (M_{m2}⊗M_n)` into `M_{m1+m2}⊗M_n`.
fn embed_first_slot(t1: &CMat, t2: &CMat, m1: usize, m2: usize, n: usize) -> CMat {
    let m = m1 + m2;
    let mut out = CMat::zeros(m * n, m * n);
    for a in 0..m1 {
        for j in 0..m1 {
            for k in 0..n {
                for l in 0..n {
                    out[(a * n + k, j * n + l)] = t1[(a * n + k, j * n + l)];
                }
            }
        }
    }
    for a in 0..m2 {
        for j in 0..m2 {
            for k in 0..n {
                for l in 0..n {
                    out[((m1 + a) * n + k, (m1 + j) * n + l)] = t2[(a * n + k, j * n + l)];
                }
            }
        }
    }
    out
}

/// Embed `t1 ⊕ t2` of `(M_m⊗M_{n1}) ⊕ (M_m⊗M_{n2})` into `M_m⊗M_{n1+n2}`.
fn embed_second_slot(t1: &CMat, t2: &CMat, m: usize, n1: usize, n2: usize) -> CMat {
    let n = n1 + n2;
    let mut out = CMat::zeros(m * n, m * n);
    for a in 0..m {
        for j in 0..m {
            for k in 0..n1 {
                for l in 0..n1 {
                    out[(a * n + k, j * n + l)] = t1[(a * n1 + k, j * n1 + l)];
                }
            }
            for k in 0..n2 {
                for l in 0..n2 {
                    out[(a * n + n1 + k, j * n + n1 + l)] = t2[(a * n2 + k, j * n2 + l)];
                }
            }
        }
    }
    out
}

/// Classical divided difference of a scalar rule, used as the oracle for the
/// 1×1 reduction law.
pub fn divided_difference(f: &FMFunc, z1: C64, z2: C64) -> Result<C64> {
    let v1 = f.eval(1, &CMat::from_row_slice(1, 1, &[z1]))?[(0, 0)];
    let v2 = f.eval(1, &CMat::from_row_slice(1, 1, &[z2]))?[(0, 0)];
    Ok((v1 - v2) / (z1 - z2))
}

/// Law suite for the matricial difference quotient over a family of
/// scalar-valued functions sharing a domain.
pub fn check_dq_laws(funcs: &[FMFunc], cfg: &SamplerConfig, verify_fd: bool) -> Vec<LawReport> {
    let mut s = Sampler::new(cfg.seed);
    let tol = 1.0e-9;

    let mut linearity = LawReport::new("fmdq.corner_linearity", tol);
    let mut leibniz = LawReport::new("fmdq.leibniz", tol);
    let mut equivariance = LawReport::new("fmdq.equivariance", tol);
    let mut split_left = LawReport::new("fmdq.splitting_first_slot", tol);
    let mut split_right = LawReport::new("fmdq.splitting_second_slot", tol);
    let mut orders = LawReport::new("fmdq.second_order_agreement", tol);
    let mut classical = LawReport::new("fmdq.classical_difference_quotient", 1.0e-10);
    let mut roundtrip = LawReport::new("fmdq.alpha_roundtrip", 0.0);
    let mut fd_guard = LawReport::new("fmdq.finite_difference_guard", 1.0e-6);

    for _ in 0..cfg.samples {
        let fi = s.usize_in(0, funcs.len() - 1);
        let f = &funcs[fi];
        let gd = f.g_dim();
        let m = s.usize_in(1, cfg.max_size);
        let n = s.usize_in(1, cfg.max_size);
        let p = s.usize_in(1, cfg.max_size);
        let (g1, g2, g3) = match (
            f.sample_domain_point(m, &mut s),
            f.sample_domain_point(n, &mut s),
            f.sample_domain_point(p, &mut s),
        ) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => continue,
        };
        let witness = || format!("func #{}, m={}, n={}", fi, m, n);

        let map = match dq_block(f, &g1, &g2) {
            Ok(map) => map,
            Err(_) => continue,
        };
        let scale = 1.0 + map.image(0, 0).norm();

        // corner(λh) = λ·corner(h) for λ ∈ {2, −1, i}
        let j = s.usize_in(0, m - 1);
        let k = s.usize_in(0, n - 1);
        let mut lam_defect: f64 = 0.0;
        for lambda in [linalg::cr(2.0), linalg::cr(-1.0), linalg::c(0.0, 1.0)] {
            let pt = block_point(&g1, &g2, gd, j, k, lambda);
            if !f.domain_member(m + n, &pt).unwrap_or(false) {
                continue;
            }
            let h = f.h_dim();
            let full = f.eval(m + n, &pt).unwrap();
            let corner = block(&full, 0, m * h, m * h, n * h);
            lam_defect =
                lam_defect.max((corner - map.image(j, k).map(|v| v * lambda)).norm() / scale);
        }
        linearity.record(lam_defect, witness);

        // α-form round trip reproduces the unit images exactly
        if f.h_dim() == 1 {
            let alpha = map.alpha_form().unwrap();
            let back = CornerMap::from_alpha(m, n, &alpha);
            let mut rt: f64 = 0.0;
            for j in 0..m {
                for k in 0..n {
                    rt = rt.max((back.image(j, k) - map.image(j, k)).norm());
                }
            }
            roundtrip.record(rt, witness);

            // product rule against a second function on the same domain
            let gi = s.usize_in(0, funcs.len() - 1);
            let r = &funcs[gi];
            if r.g_dim() == gd && r.h_dim() == 1 {
                if let Ok(product) = fm_mul(f.clone(), r.clone()) {
                    if let (Ok(t_rs), Ok(t_r)) =
                        (dq_block(&product, &g1, &g2), dq_block(r, &g1, &g2))
                    {
                        let r_m = f.eval(m, &g1).unwrap();
                        let s_n = r.eval(n, &g2).unwrap();
                        let lhs = t_rs.alpha_form().unwrap();
                        let rhs = kron(&r_m, &linalg::identity(n)) * t_r.alpha_form().unwrap()
                            + alpha.clone() * kron(&linalg::identity(m), &s_n);
                        leibniz.record(
                            (lhs - rhs).norm() / (scale * (1.0 + s_n.norm() + r_m.norm())),
                            witness,
                        );
                    }
                }
            }

            // GL(m)×GL(n) equivariance
            let s1 = s.gl(m);
            let s2 = s.gl(n);
            let c1 = kron(&s1, &linalg::identity(gd));
            let c2 = kron(&s2, &linalg::identity(gd));
            let g1c = &c1 * &g1 * c1.clone().try_inverse().unwrap();
            let g2c = &c2 * &g2 * c2.clone().try_inverse().unwrap();
            if let Ok(conj_map) = dq_block(f, &g1c, &g2c) {
                let w = kron(&s1, &s2);
                let expected = &w * &alpha * w.clone().try_inverse().unwrap();
                let kappa = linalg::cond(&s1) * linalg::cond(&s2);
                equivariance.record(
                    (conj_map.alpha_form().unwrap() - expected).norm() / (scale * kappa * kappa),
                    witness,
                );
            }

            // direct-sum splitting in each slot
            let sum_first = linalg::direct_sum(&g1, &g3);
            if let (Ok(big), Ok(t1), Ok(t2)) = (
                dq_block(f, &sum_first, &g2),
                dq_block(f, &g1, &g2),
                dq_block(f, &g3, &g2),
            ) {
                let embedded = embed_first_slot(
                    &t1.alpha_form().unwrap(),
                    &t2.alpha_form().unwrap(),
                    m,
                    p,
                    n,
                );
                split_left.record(
                    (big.alpha_form().unwrap() - embedded).norm() / scale,
                    witness,
                );
            }
            let sum_second = linalg::direct_sum(&g2, &g3);
            if let (Ok(big), Ok(t1), Ok(t2)) = (
                dq_block(f, &g1, &sum_second),
                dq_block(f, &g1, &g2),
                dq_block(f, &g1, &g3),
            ) {
                let embedded = embed_second_slot(
                    &t1.alpha_form().unwrap(),
                    &t2.alpha_form().unwrap(),
                    m,
                    n,
                    p,
                );
                split_right.record(
                    (big.alpha_form().unwrap() - embedded).norm() / scale,
                    witness,
                );
            }

            // both second-order composition orders agree
            if let Ok((a, b)) = dq2_block(f, &g1, &g2, &g3) {
                orders.record((a - b).norm() / scale, witness);
            }

            // scalar reduction to the classical difference quotient
            if let FMFunc::FuncCalc { .. } = f {
                let z1 = f.sample_domain_point(1, &mut s).unwrap()[(0, 0)];
                let z2 = f.sample_domain_point(1, &mut s).unwrap()[(0, 0)];
                if (z1 - z2).norm() > 1.0e-3 {
                    let p1 = CMat::from_row_slice(1, 1, &[z1]);
                    let p2 = CMat::from_row_slice(1, 1, &[z2]);
                    if let Ok(map11) = dq_block(f, &p1, &p2) {
                        let got = map11.alpha_form().unwrap()[(0, 0)];
                        let expect = divided_difference(f, z1, z2).unwrap();
                        classical.record((got - expect).norm() / (1.0 + expect.norm()), witness);
                    }
                }
            }
        }

        // finite-difference cross-check of the single-shot extraction
        if verify_fd {
            let eps = 1.0e-4;
            let h = f.h_dim();
            let pt = block_point(&g1, &g2, gd, j, k, linalg::cr(eps));
            if f.domain_member(m + n, &pt).unwrap_or(false) {
                let full = f.eval(m + n, &pt).unwrap();
                let corner = block(&full, 0, m * h, m * h, n * h).map(|v| v / linalg::cr(eps));
                fd_guard.record((corner - map.image(j, k)).norm() / scale, witness);
            }
        }
    }

    let mut out = vec![
        linearity,
        leibniz,
        equivariance,
        split_left,
        split_right,
        orders,
        classical,
        roundtrip,
    ];
    if verify_fd {
        out.push(fd_guard);
    }
    out
}

/// A default family of scalar rules on a shared disk, used by the law suite
/// when no functions are supplied externally.
pub fn default_scalar_family() -> Vec<FMFunc> {
    let domain = ScalarRegion::Disk {
        center: linalg::ZERO,
        radius: 10.0,
    };
    vec![
        FMFunc::func_poly(vec![linalg::ZERO, linalg::ONE], domain.clone()),
        FMFunc::func_poly(
            vec![linalg::ZERO, linalg::ZERO, linalg::ONE],
            domain.clone(),
        ),
        FMFunc::func_poly(
            vec![linalg::cr(1.0), linalg::ZERO, linalg::ZERO, linalg::ONE],
            domain.clone(),
        ),
        FMFunc::func_rational(
            vec![linalg::ONE],
            vec![linalg::cr(20.0), linalg::cr(-1.0)],
            domain,
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fm::FMFunc;
    use crate::linalg::{cr, ONE, ZERO};
    use crate::report::all_passed;
    use crate::resolvent::{resolve_matrix, Site};

    fn disk(radius: f64) -> ScalarRegion {
        ScalarRegion::Disk {
            center: ZERO,
            radius,
        }
    }

    #[test]
    fn square_rule_alpha_form_is_the_sum() {
        // f = z² at ([1], [3]): α-form is z₁ + z₂ = 4
        let f = FMFunc::func_poly(vec![ZERO, ZERO, ONE], disk(10.0));
        let g1 = CMat::from_row_slice(1, 1, &[cr(1.0)]);
        let g2 = CMat::from_row_slice(1, 1, &[cr(3.0)]);
        let map = dq_block(&f, &g1, &g2).unwrap();
        let alpha = map.alpha_form().unwrap();
        assert!((alpha[(0, 0)] - cr(4.0)).norm() < 1e-12);
    }

    #[test]
    fn identity_rule_gives_identity_map() {
        let f = FMFunc::identity_func(disk(10.0));
        let mut s = Sampler::new(3);
        let g1 = f.sample_domain_point(2, &mut s).unwrap();
        let g2 = f.sample_domain_point(2, &mut s).unwrap();
        let map = dq_block(&f, &g1, &g2).unwrap();
        let h = s.cmat(2, 2, 1.0);
        assert!((map.apply(&h) - &h).norm() < 1e-9);
    }

    #[test]
    fn resolvent_corner_matches_block_inverse_oracle() {
        // for the resolvent kind the corner map is h ↦ R(b₁)(h⊗1)R(b₂)
        let y = CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        let site = Site::scalar_site(y).unwrap();
        let f = FMFunc::Resolvent { site: site.clone() };
        let mut s = Sampler::new(5);
        let b1 = site.random_member(&mut s, 2);
        let b2 = site.random_member(&mut s, 1);
        let map = dq_block(&f, &b1, &b2).unwrap();
        let r1 = resolve_matrix(&site, 2, &b1).unwrap();
        let r2 = resolve_matrix(&site, 1, &b2).unwrap();
        for j in 0..2 {
            let h = unit_matrix(2, 1, j, 0);
            let oracle = &r1 * kron(&h, &linalg::identity(2)) * &r2;
            assert!((map.apply(&h) - oracle).norm() < 1e-9);
        }
    }

    #[test]
    fn rational_rule_divided_difference() {
        // f(z) = 1/(2−z): α-form at (0, 1) is 1/2
        let f = FMFunc::func_rational(vec![ONE], vec![cr(2.0), cr(-1.0)], disk(1.5));
        let g1 = CMat::from_row_slice(1, 1, &[ZERO]);
        let g2 = CMat::from_row_slice(1, 1, &[cr(1.0)]);
        let map = dq_block(&f, &g1, &g2).unwrap();
        assert!((map.alpha_form().unwrap()[(0, 0)] - cr(0.5)).norm() < 1e-12);
    }

    #[test]
    fn second_divided_difference_of_cube() {
        // f = z³ at (1, 2, 3): both orders equal f[1,2,3] = 6
        let f = FMFunc::func_poly(vec![ZERO, ZERO, ZERO, ONE], disk(10.0));
        let g = CMat::from_row_slice(1, 1, &[cr(1.0)]);
        let gp = CMat::from_row_slice(1, 1, &[cr(2.0)]);
        let gpp = CMat::from_row_slice(1, 1, &[cr(3.0)]);
        let (a, b) = dq2_block(&f, &g, &gp, &gpp).unwrap();
        assert!((a[(0, 0)] - cr(6.0)).norm() < 1e-10, "{}", a[(0, 0)]);
        assert!((b[(0, 0)] - cr(6.0)).norm() < 1e-10);
        // affine rules have vanishing second difference
        let affine = FMFunc::func_poly(vec![cr(5.0), ONE], disk(10.0));
        let (a, b) = dq2_block(&affine, &g, &gp, &gpp).unwrap();
        assert!(a.norm() < 1e-12);
        assert!(b.norm() < 1e-12);
    }

    #[test]
    fn second_order_of_cube_at_matrix_points() {
        // block-triangular expansion of Q³ gives the closed form
        // g⊗I⊗I + I⊗g'⊗I + I⊗I⊗g'' for both composition orders
        let f = FMFunc::func_poly(vec![ZERO, ZERO, ZERO, ONE], disk(10.0));
        let mut s = Sampler::new(31);
        for (m, n, p) in [(2usize, 2usize, 1usize), (1, 2, 2), (2, 1, 2), (2, 2, 2)] {
            let g = f.sample_domain_point(m, &mut s).unwrap();
            let gp = f.sample_domain_point(n, &mut s).unwrap();
            let gpp = f.sample_domain_point(p, &mut s).unwrap();
            let (a, b) = dq2_block(&f, &g, &gp, &gpp).unwrap();
            let oracle = kron(&kron(&g, &linalg::identity(n)), &linalg::identity(p))
                + kron(&kron(&linalg::identity(m), &gp), &linalg::identity(p))
                + kron(&kron(&linalg::identity(m), &linalg::identity(n)), &gpp);
            let scale = 1.0 + oracle.norm();
            assert!(
                (&a - &oracle).norm() / scale < 1e-9,
                "m={} n={} p={}",
                m,
                n,
                p
            );
            assert!(
                (&b - &oracle).norm() / scale < 1e-9,
                "m={} n={} p={}",
                m,
                n,
                p
            );
        }
    }

    #[test]
    fn nabla_of_identity_and_square() {
        let id = FMFunc::identity_func(disk(10.0));
        let g = CMat::from_row_slice(1, 1, &[cr(0.7)]);
        let map = nabla(&id, &g).unwrap();
        assert!((map.alpha_form().unwrap()[(0, 0)] - ONE).norm() < 1e-12);
        // z² at real t: multiplication by 2t
        let sq = FMFunc::func_poly(vec![ZERO, ZERO, ONE], disk(10.0));
        let t = CMat::from_row_slice(1, 1, &[cr(1.5)]);
        let map = nabla(&sq, &t).unwrap();
        assert!((map.alpha_form().unwrap()[(0, 0)] - cr(3.0)).norm() < 1e-12);
    }

    #[test]
    fn law_suite_on_default_family() {
        let cfg = SamplerConfig {
            samples: 25,
            max_size: 2,
            ..SamplerConfig::default()
        };
        let reports = check_dq_laws(&default_scalar_family(), &cfg, true);
        assert!(all_passed(&reports), "{:#?}", reports);
    }
}
