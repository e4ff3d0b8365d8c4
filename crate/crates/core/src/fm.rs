//! Fully matricial sets and functions.
//!
//! A fully matricial set is a size-indexed family `Ω = (Ω_n)` compatible
//! with direct sums and GL(n)-conjugation; here a set is either a full
//! resolvent set, a spectral set `{T | σ(T) ⊂ Ω₁}` over a scalar region, or
//! a finite intersection. A fully matricial function is a size-indexed
//! evaluator `f_n: Ω_n → M_n(H)` respecting the same structure; the
//! implemented kinds are scalar functional calculus (polynomial or rational
//! rules), polynomial evaluation over `B`, full resolvents, resolvent
//! transforms of functionals, and pointwise sums/products/stars/scalings.
//!
//! Spectrum membership is decided on eigenvalues with a margin: points whose
//! spectrum comes within [`SPECTRAL_MARGIN`] of the region boundary are
//! rejected as ambiguous.

use crate::duality::Functional;
use crate::error::{Error, Result};
use crate::linalg::{self, block, eigenvalues, kron, op_norm, CMat, C64};
use crate::ncalg::NCPoly;
use crate::report::LawReport;
use crate::resolvent::{membership_matrix, resolve_matrix, Site};
use crate::sampler::{Sampler, SamplerConfig};

/// Margin tolerance for spectral membership.
pub const SPECTRAL_MARGIN: f64 = 1.0e-9;

/// Open region of the complex plane with a signed boundary margin.
#[derive(Debug, Clone)]
pub enum ScalarRegion {
    /// Open disk |z − center| < radius.
    Disk {
        center: C64,
        radius: f64,
    },
    /// Open exterior |z − center| > radius.
    DiskComplement {
        center: C64,
        radius: f64,
    },
    /// Open half-plane Re(a·z) < c.
    HalfPlane {
        a: C64,
        c: f64,
    },
    Union(Vec<ScalarRegion>),
}

impl ScalarRegion {
    /// Signed distance to the boundary, positive inside.
    pub fn margin(&self, z: C64) -> f64 {
        match self {
            ScalarRegion::Disk { center, radius } => radius - (z - center).norm(),
            ScalarRegion::DiskComplement { center, radius } => (z - center).norm() - radius,
            ScalarRegion::HalfPlane { a, c } => (c - (a * z).re) / a.norm(),
            ScalarRegion::Union(parts) => parts
                .iter()
                .map(|p| p.margin(z))
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }

    pub fn contains(&self, z: C64) -> bool {
        self.margin(z) >= SPECTRAL_MARGIN
    }

    /// Whether z ∈ Ω iff z̄ ∈ Ω holds structurally (used to gate star laws).
    pub fn conjugation_symmetric(&self) -> bool {
        match self {
            ScalarRegion::Disk { center, .. } | ScalarRegion::DiskComplement { center, .. } => {
                center.im == 0.0
            }
            ScalarRegion::HalfPlane { a, .. } => a.im == 0.0,
            ScalarRegion::Union(parts) => parts.iter().all(ScalarRegion::conjugation_symmetric),
        }
    }

    /// A point comfortably inside the region.
    pub fn sample_inside(&self, s: &mut Sampler) -> C64 {
        match self {
            ScalarRegion::Disk { center, radius } => {
                let r = s.f64_in(0.0, 0.7 * radius);
                let theta = s.f64_in(0.0, std::f64::consts::TAU);
                center + C64::from_polar(r, theta)
            }
            ScalarRegion::DiskComplement { center, radius } => {
                let r = radius + s.f64_in(0.5, 2.5);
                let theta = s.f64_in(0.0, std::f64::consts::TAU);
                center + C64::from_polar(r, theta)
            }
            ScalarRegion::HalfPlane { a, c } => {
                let t = s.f64_in(0.3, 2.0);
                let w = s.f64_in(-2.0, 2.0);
                let a_norm = a.norm();
                a.conj() * linalg::cr((c - t) / (a_norm * a_norm))
                    + a.conj() * linalg::c(0.0, w / a_norm)
            }
            ScalarRegion::Union(parts) => {
                let i = s.usize_in(0, parts.len() - 1);
                parts[i].sample_inside(s)
            }
        }
    }

    /// A point comfortably outside, if one can be constructed directly.
    pub fn sample_outside(&self, s: &mut Sampler) -> Option<C64> {
        match self {
            ScalarRegion::Disk { center, radius } => Some(
                ScalarRegion::DiskComplement {
                    center: *center,
                    radius: *radius,
                }
                .sample_inside(s),
            ),
            ScalarRegion::DiskComplement { center, radius } => {
                let r = s.f64_in(0.0, 0.7 * radius.min(1.0e6));
                let theta = s.f64_in(0.0, std::f64::consts::TAU);
                Some(center + C64::from_polar(r, theta))
            }
            ScalarRegion::HalfPlane { a, c } => {
                Some(ScalarRegion::HalfPlane { a: -a, c: -c }.sample_inside(s))
            }
            ScalarRegion::Union(parts) => {
                // rejection against all parts, seeded from the first
                for _ in 0..64 {
                    let z = parts[0].sample_outside(s)?;
                    if self.margin(z) <= -0.05 {
                        return Some(z);
                    }
                }
                None
            }
        }
    }
}

/// Fully matricial set: membership decidable at every size n.
#[derive(Debug, Clone)]
pub enum FMSet {
    /// `{T ∈ M_n | σ(T) ⊂ Ω₁}` for a scalar region Ω₁.
    Spectrum(ScalarRegion),
    /// Full resolvent set of a site.
    Resolvent(Site),
    Intersection(Vec<FMSet>),
}

impl FMSet {
    /// Size of one G-slot: 1 for spectral sets, d for resolvent sets.
    pub fn g_dim(&self) -> usize {
        match self {
            FMSet::Spectrum(_) => 1,
            FMSet::Resolvent(site) => site.dim(),
            FMSet::Intersection(parts) => parts[0].g_dim(),
        }
    }

    pub fn intersection(parts: Vec<FMSet>) -> Result<FMSet> {
        if parts.is_empty() {
            return Err(Error::Invalid("empty intersection".into()));
        }
        let g = parts[0].g_dim();
        if parts.iter().any(|p| p.g_dim() != g) {
            return Err(Error::ValueSpaceMismatch);
        }
        Ok(FMSet::Intersection(parts))
    }

    /// Membership of an (n·g)×(n·g) point.
    pub fn member(&self, n: usize, point: &CMat) -> Result<bool> {
        let g = self.g_dim();
        if point.nrows() != n * g || point.ncols() != n * g {
            return Err(Error::Shape(format!("expected {0}x{0} point", n * g)));
        }
        match self {
            FMSet::Spectrum(region) => {
                let eigs = eigenvalues(point)?;
                Ok(eigs.iter().all(|&z| region.margin(z) >= SPECTRAL_MARGIN))
            }
            FMSet::Resolvent(site) => {
                if !site.is_b_valued(point, n) {
                    return Ok(false);
                }
                Ok(membership_matrix(site, n, point).0)
            }
            FMSet::Intersection(parts) => {
                for p in parts {
                    if !p.member(n, point)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// A random member of Ω_n (None if the construction fails).
    pub fn sample_member(&self, n: usize, s: &mut Sampler) -> Option<CMat> {
        match self {
            FMSet::Spectrum(region) => {
                let eigs: Vec<C64> = (0..n).map(|_| region.sample_inside(s)).collect();
                let diag = CMat::from_fn(n, n, |i, j| if i == j { eigs[i] } else { linalg::ZERO });
                let gl = s.gl(n);
                let conj = &gl * diag * gl.try_inverse().unwrap();
                self.member(n, &conj).ok().filter(|&m| m).map(|_| conj)
            }
            FMSet::Resolvent(site) => {
                let b = site.random_member(s, n);
                self.member(n, &b).ok().filter(|&m| m).map(|_| b)
            }
            FMSet::Intersection(parts) => {
                for _ in 0..64 {
                    let candidate = parts[0].sample_member(n, s)?;
                    if self.member(n, &candidate).ok()? {
                        return Some(candidate);
                    }
                }
                None
            }
        }
    }

    /// A random non-member of Ω_n, if one can be constructed.
    pub fn sample_non_member(&self, n: usize, s: &mut Sampler) -> Option<CMat> {
        match self {
            FMSet::Spectrum(region) => {
                let bad = region.sample_outside(s)?;
                let mut eigs = vec![bad];
                for _ in 1..n {
                    eigs.push(region.sample_inside(s));
                }
                let diag = CMat::from_fn(n, n, |i, j| if i == j { eigs[i] } else { linalg::ZERO });
                let gl = s.gl(n);
                Some(&gl * diag * gl.try_inverse().unwrap())
            }
            FMSet::Resolvent(site) => {
                // λ·1 for an eigenvalue λ of Y makes Y⊗I − b singular
                let lambda = eigenvalues(site.y()).ok()?[0];
                let mut big = site.random_member(s, n);
                let d = site.dim();
                linalg::set_block(&mut big, 0, 0, &linalg::identity(d).map(|v| v * lambda));
                for j in 1..n {
                    linalg::set_block(&mut big, 0, j * d, &CMat::zeros(d, d));
                    linalg::set_block(&mut big, j * d, 0, &CMat::zeros(d, d));
                }
                Some(big)
            }
            FMSet::Intersection(parts) => parts[0].sample_non_member(n, s),
        }
    }

    /// The site behind a resolvent-backed set, if any (used to draw
    /// B-valued corners for the triangular laws).
    pub fn resolvent_site(&self) -> Option<&Site> {
        match self {
            FMSet::Spectrum(_) => None,
            FMSet::Resolvent(site) => Some(site),
            FMSet::Intersection(parts) => parts.iter().find_map(FMSet::resolvent_site),
        }
    }
}

/// Fully matricial H-valued function as an immutable evaluation tree.
#[derive(Debug, Clone)]
pub enum FMFunc {
    /// Scalar rule num/den applied by matrix functional calculus on a
    /// spectral domain; `den = [1]` for polynomials.
    FuncCalc {
        num: Vec<C64>,
        den: Vec<C64>,
        domain: ScalarRegion,
    },
    /// One-variable polynomial over B evaluated at points of `M_m(B)`.
    PolyEval {
        poly: NCPoly,
    },
    /// `b ↦ (Y⊗I_n − b)⁻¹`, H = E.
    Resolvent {
        site: Site,
    },
    /// `b ↦ (φ⊗id)((b − Y⊗I_n)⁻¹)`, H = ℂ.
    UTransform {
        site: Site,
        phi: Functional,
    },
    Add(Box<FMFunc>, Box<FMFunc>),
    Mul(Box<FMFunc>, Box<FMFunc>),
    Star(Box<FMFunc>),
    Scale(C64, Box<FMFunc>),
}

impl FMFunc {
    /// Polynomial rule from coefficients `c₀ + c₁z + …`.
    pub fn func_poly(coeffs: Vec<C64>, domain: ScalarRegion) -> FMFunc {
        FMFunc::FuncCalc {
            num: coeffs,
            den: vec![linalg::ONE],
            domain,
        }
    }

    /// Rational rule num(z)/den(z).
    pub fn func_rational(num: Vec<C64>, den: Vec<C64>, domain: ScalarRegion) -> FMFunc {
        FMFunc::FuncCalc { num, den, domain }
    }

    /// The identity function z on a spectral domain.
    pub fn identity_func(domain: ScalarRegion) -> FMFunc {
        FMFunc::func_poly(vec![linalg::ZERO, linalg::ONE], domain)
    }

    pub fn poly_eval(poly: NCPoly) -> Result<FMFunc> {
        if poly.context().n_vars != 1 {
            return Err(Error::Invalid(
                "matricial polynomial evaluation needs a one-variable context".into(),
            ));
        }
        Ok(FMFunc::PolyEval { poly })
    }

    /// Size of one input G-slot.
    pub fn g_dim(&self) -> usize {
        match self {
            FMFunc::FuncCalc { .. } => 1,
            FMFunc::PolyEval { poly } => poly.context().q,
            FMFunc::Resolvent { site } | FMFunc::UTransform { site, .. } => site.dim(),
            FMFunc::Add(a, _) | FMFunc::Mul(a, _) | FMFunc::Star(a) | FMFunc::Scale(_, a) => {
                a.g_dim()
            }
        }
    }

    /// Size of one output H-slot.
    pub fn h_dim(&self) -> usize {
        match self {
            FMFunc::FuncCalc { .. } | FMFunc::UTransform { .. } => 1,
            FMFunc::PolyEval { poly } => poly.context().q,
            FMFunc::Resolvent { site } => site.dim(),
            FMFunc::Add(a, _) | FMFunc::Mul(a, _) | FMFunc::Star(a) | FMFunc::Scale(_, a) => {
                a.h_dim()
            }
        }
    }

    /// Domain membership of an (n·g)×(n·g) point.
    pub fn domain_member(&self, n: usize, point: &CMat) -> Result<bool> {
        match self {
            FMFunc::FuncCalc { domain, .. } => FMSet::Spectrum(domain.clone()).member(n, point),
            FMFunc::PolyEval { poly } => {
                let q = poly.context().q;
                Ok(point.nrows() == n * q && point.ncols() == n * q)
            }
            FMFunc::Resolvent { site } | FMFunc::UTransform { site, .. } => {
                FMSet::Resolvent(site.clone()).member(n, point)
            }
            FMFunc::Add(a, b) | FMFunc::Mul(a, b) => {
                Ok(a.domain_member(n, point)? && b.domain_member(n, point)?)
            }
            FMFunc::Star(a) => a.domain_member(n, &point.adjoint()),
            FMFunc::Scale(_, a) => a.domain_member(n, point),
        }
    }

    /// Evaluate at a member of Ω_n, producing an (n·h)×(n·h) matrix.
    pub fn eval(&self, n: usize, point: &CMat) -> Result<CMat> {
        if !self.domain_member(n, point)? {
            return Err(Error::OutsideDomain);
        }
        self.eval_unchecked(n, point)
    }

    fn eval_unchecked(&self, n: usize, point: &CMat) -> Result<CMat> {
        match self {
            FMFunc::FuncCalc { num, den, .. } => {
                let num_m = poly_at_matrix(num, point);
                if den.len() == 1 {
                    return Ok(num_m.map(|v| v / den[0]));
                }
                let den_m = poly_at_matrix(den, point);
                let den_inv = den_m.clone().try_inverse().ok_or(Error::RationalSingular)?;
                if (den_m * &den_inv - linalg::identity(point.nrows())).norm() > 1.0e-6 {
                    return Err(Error::RationalSingular);
                }
                Ok(num_m * den_inv)
            }
            FMFunc::PolyEval { poly } => poly.evaluate(std::slice::from_ref(point)),
            FMFunc::Resolvent { site } => resolve_matrix(site, n, point),
            FMFunc::UTransform { site, phi } => {
                // (φ⊗id) of (b − Y⊗I_n)⁻¹
                let m = point - site.y_amplified(n);
                let (inv, _) = linalg::inverse_checked(&m, site.kappa_max())?;
                Ok(phi.apply_blockwise(&inv, n, site.dim()))
            }
            FMFunc::Add(a, b) => Ok(a.eval_unchecked(n, point)? + b.eval_unchecked(n, point)?),
            FMFunc::Mul(a, b) => Ok(a.eval_unchecked(n, point)? * b.eval_unchecked(n, point)?),
            FMFunc::Star(a) => Ok(a.eval_unchecked(n, &point.adjoint())?.adjoint()),
            FMFunc::Scale(factor, a) => {
                let f = *factor;
                Ok(a.eval_unchecked(n, point)?.map(|v| v * f))
            }
        }
    }

    /// A random point in the domain at size n.
    pub fn sample_domain_point(&self, n: usize, s: &mut Sampler) -> Option<CMat> {
        match self {
            FMFunc::FuncCalc { domain, .. } => FMSet::Spectrum(domain.clone()).sample_member(n, s),
            FMFunc::PolyEval { poly } => {
                Some(s.cmat(n * poly.context().q, n * poly.context().q, 1.0))
            }
            FMFunc::Resolvent { site } | FMFunc::UTransform { site, .. } => {
                FMSet::Resolvent(site.clone()).sample_member(n, s)
            }
            FMFunc::Add(a, b) | FMFunc::Mul(a, b) => {
                for _ in 0..32 {
                    let p = a.sample_domain_point(n, s)?;
                    if b.domain_member(n, &p).ok()? {
                        return Some(p);
                    }
                }
                None
            }
            FMFunc::Star(a) => a.sample_domain_point(n, s).map(|p| p.adjoint()),
            FMFunc::Scale(_, a) => a.sample_domain_point(n, s),
        }
    }

    /// The site behind a resolvent-backed evaluator, if any.
    pub fn resolvent_site(&self) -> Option<&Site> {
        match self {
            FMFunc::FuncCalc { .. } | FMFunc::PolyEval { .. } => None,
            FMFunc::Resolvent { site } | FMFunc::UTransform { site, .. } => Some(site),
            FMFunc::Add(a, b) | FMFunc::Mul(a, b) => {
                a.resolvent_site().or_else(|| b.resolvent_site())
            }
            FMFunc::Star(a) | FMFunc::Scale(_, a) => a.resolvent_site(),
        }
    }
}

/// Pointwise combinations with domain/value-space compatibility checks.
pub fn fm_add(a: FMFunc, b: FMFunc) -> Result<FMFunc> {
    if a.g_dim() != b.g_dim() || a.h_dim() != b.h_dim() {
        return Err(Error::ValueSpaceMismatch);
    }
    Ok(FMFunc::Add(Box::new(a), Box::new(b)))
}

pub fn fm_mul(a: FMFunc, b: FMFunc) -> Result<FMFunc> {
    if a.g_dim() != b.g_dim() || a.h_dim() != b.h_dim() {
        return Err(Error::ValueSpaceMismatch);
    }
    Ok(FMFunc::Mul(Box::new(a), Box::new(b)))
}

pub fn fm_star(a: FMFunc) -> FMFunc {
    FMFunc::Star(Box::new(a))
}

pub fn fm_scale(factor: C64, a: FMFunc) -> FMFunc {
    FMFunc::Scale(factor, Box::new(a))
}

fn poly_at_matrix(coeffs: &[C64], t: &CMat) -> CMat {
    let n = t.nrows();
    let mut acc = CMat::zeros(n, n);
    for &c in coeffs.iter().rev() {
        acc = acc * t + linalg::identity(n).map(|v| v * c);
    }
    acc
}

/// Sup of operator norms over a finite family of members; each point must be
/// a member and stay one under a perturbation of size `eps` (the declared
/// margin of the family).
pub fn norm_k(f: &FMFunc, family: &[(usize, CMat)], eps: f64, s: &mut Sampler) -> Result<f64> {
    if eps <= 0.0 {
        return Err(Error::Invalid("margin must be positive".into()));
    }
    let mut sup: f64 = 0.0;
    for (n, point) in family {
        if !f.domain_member(*n, point)? {
            return Err(Error::OutsideDomain);
        }
        let dim = point.nrows();
        let pert = s.cmat(dim, dim, 1.0);
        let pert = pert.map(|v| v * linalg::cr(eps / op_norm(&pert).max(1e-300)));
        if !f.domain_member(*n, &(point + pert))? {
            return Err(Error::OutsideDomain);
        }
        sup = sup.max(op_norm(&f.eval(*n, point)?));
    }
    Ok(sup)
}

/// Direct-sum, conjugation and triangular-membership laws of a set.
pub fn check_fmset_laws(set: &FMSet, cfg: &SamplerConfig) -> Vec<LawReport> {
    let mut s = Sampler::new(cfg.seed);
    let g = set.g_dim();
    let mut direct_sum_law = LawReport::new("fmset.direct_sum", 0.0);
    let mut gl_law = LawReport::new("fmset.gl_invariance", 0.0);
    let mut tri_law = LawReport::new("fmset.triangular_membership", 0.0);

    for _ in 0..cfg.samples {
        let m = s.usize_in(1, cfg.max_size);
        let n = s.usize_in(1, cfg.max_size);
        let (g1, g2) = match (set.sample_member(m, &mut s), set.sample_member(n, &mut s)) {
            (Some(a), Some(b)) => (a, b),
            _ => continue,
        };
        let witness = || format!("m={}, n={}", m, n);

        let sum = linalg::direct_sum(&g1, &g2);
        let both = set.member(m + n, &sum).unwrap();
        let bad_ok = match set.sample_non_member(n, &mut s) {
            Some(bad) => {
                let mixed = linalg::direct_sum(&g1, &bad);
                !set.member(m + n, &mixed).unwrap()
            }
            None => true,
        };
        direct_sum_law.record_bool(both && bad_ok, witness);

        let gl = s.gl(n);
        let c = kron(&gl, &linalg::identity(g));
        let conj = &c * &g2 * c.try_inverse().unwrap();
        gl_law.record_bool(set.member(n, &conj).unwrap(), witness);

        // members stay members with an arbitrary G-corner glued on top
        let corner = match set.resolvent_site() {
            Some(site) => {
                let beta = site.random_b_point(&mut s, m.max(n), 1.0);
                block(&beta, 0, 0, m * g, n * g)
            }
            None => s.cmat(m * g, n * g, 1.0),
        };
        let mut tri = sum.clone();
        linalg::set_block(&mut tri, 0, m * g, &corner);
        tri_law.record_bool(set.member(m + n, &tri).unwrap(), witness);
    }
    vec![direct_sum_law, gl_law, tri_law]
}

/// Direct-sum, equivariance, star and corner-linearity laws of a function.
pub fn check_fmfunc_laws(f: &FMFunc, cfg: &SamplerConfig) -> Vec<LawReport> {
    let mut s = Sampler::new(cfg.seed);
    let g = f.g_dim();
    let h = f.h_dim();
    let tol = 1.0e-9;

    let mut split = LawReport::new("fmfunc.direct_sum", tol);
    let mut equiv = LawReport::new("fmfunc.gl_equivariance", tol);
    let mut star2 = LawReport::new("fmfunc.star_involution", tol);
    let mut star_law = LawReport::new("fmfunc.star_evaluation", tol);
    let mut corner = LawReport::new("fmfunc.corner_linearity", tol);

    for _ in 0..cfg.samples {
        let m = s.usize_in(1, cfg.max_size);
        let n = s.usize_in(1, cfg.max_size);
        let (g1, g2) = match (
            f.sample_domain_point(m, &mut s),
            f.sample_domain_point(n, &mut s),
        ) {
            (Some(a), Some(b)) => (a, b),
            _ => continue,
        };
        let witness = || format!("m={}, n={}", m, n);
        let f1 = f.eval(m, &g1).unwrap();
        let f2 = f.eval(n, &g2).unwrap();
        let scale = 1.0 + f1.norm() + f2.norm();

        // FMF2
        let sum = linalg::direct_sum(&g1, &g2);
        if f.domain_member(m + n, &sum).unwrap() {
            let fsum = f.eval(m + n, &sum).unwrap();
            split.record(
                (fsum - linalg::direct_sum(&f1, &f2)).norm() / scale,
                witness,
            );
        }

        // FMF3
        let gl = s.gl(n);
        let cg = kron(&gl, &linalg::identity(g));
        let ch = kron(&gl, &linalg::identity(h));
        let conj = &cg * &g2 * cg.clone().try_inverse().unwrap();
        if f.domain_member(n, &conj).unwrap() {
            let lhs = f.eval(n, &conj).unwrap();
            let rhs = &ch * &f2 * ch.clone().try_inverse().unwrap();
            let kappa = linalg::cond(&gl);
            equiv.record((lhs - rhs).norm() / (scale * kappa * kappa), witness);
        }

        // star laws through the public evaluation path
        let starred = fm_star(f.clone());
        if starred.domain_member(n, &g2.adjoint()).unwrap() {
            let via_star = starred.eval(n, &g2.adjoint()).unwrap();
            star_law.record((via_star - f2.adjoint()).norm() / scale, witness);
        }
        let double = fm_star(fm_star(f.clone()));
        star2.record((double.eval(n, &g2).unwrap() - &f2).norm() / scale, witness);

        // block corner at λ ∈ {0, 1, 2}: diagonal fixed, corner linear
        let gamma = match f.resolvent_site() {
            Some(site) => {
                let beta = site.random_b_point(&mut s, m.max(n), 1.0);
                block(&beta, 0, 0, m * g, n * g)
            }
            None => s.cmat(m * g, n * g, 1.0),
        };
        let eval_corner = |lambda: f64| -> Option<(CMat, CMat, CMat, CMat)> {
            let mut tri = sum.clone();
            linalg::set_block(&mut tri, 0, m * g, &gamma.map(|v| v * linalg::cr(lambda)));
            if !f.domain_member(m + n, &tri).ok()? {
                return None;
            }
            let full = f.eval(m + n, &tri).ok()?;
            Some((
                block(&full, 0, 0, m * h, m * h),
                block(&full, 0, m * h, m * h, n * h),
                block(&full, m * h, 0, n * h, m * h),
                block(&full, m * h, m * h, n * h, n * h),
            ))
        };
        if let (Some(at0), Some(at1), Some(at2)) =
            (eval_corner(0.0), eval_corner(1.0), eval_corner(2.0))
        {
            let mut defect = at0.1.norm(); // corner(0) = 0
            defect += (&at2.1 - at1.1.map(|v| v * linalg::cr(2.0))).norm(); // corner(2) = 2·corner(1)
            for at in [&at0, &at1, &at2] {
                defect += (&at.0 - &f1).norm() + (&at.3 - &f2).norm() + at.2.norm();
            }
            corner.record(defect / scale, witness);
        }
    }
    vec![split, equiv, star2, star_law, corner]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, cr, ONE, ZERO};
    use crate::ncalg::Context;
    use crate::report::all_passed;
    use crate::resolvent::Site;

    fn unit_disk() -> ScalarRegion {
        ScalarRegion::Disk {
            center: ZERO,
            radius: 1.0,
        }
    }

    fn big_disk() -> ScalarRegion {
        ScalarRegion::Disk {
            center: ZERO,
            radius: 50.0,
        }
    }

    #[test]
    fn spectral_membership_by_eigenvalues() {
        let set = FMSet::Spectrum(unit_disk());
        // nilpotent [[0,1],[0,0]] has σ = {0} ⊂ disk
        let nil = CMat::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO]);
        assert!(set.member(2, &nil).unwrap());
        // diag(0, 2) is outside
        let out = CMat::from_row_slice(2, 2, &[ZERO, ZERO, ZERO, cr(2.0)]);
        assert!(!set.member(2, &out).unwrap());
        // boundary points are ambiguous, hence rejected
        let edge = CMat::from_row_slice(1, 1, &[cr(1.0)]);
        assert!(!set.member(1, &edge).unwrap());
    }

    #[test]
    fn spectral_membership_is_similarity_invariant() {
        let set = FMSet::Spectrum(unit_disk());
        let mut s = Sampler::new(11);
        for _ in 0..20 {
            let pt = set.sample_member(3, &mut s).unwrap();
            let gl = s.gl(3);
            let conj = &gl * &pt * gl.try_inverse().unwrap();
            assert!(set.member(3, &conj).unwrap());
        }
    }

    #[test]
    fn func_calc_square_by_hand() {
        // z² at [[1,1],[0,3]] = [[1,4],[0,9]]
        let f = FMFunc::func_poly(vec![ZERO, ZERO, ONE], big_disk());
        let t = CMat::from_row_slice(2, 2, &[cr(1.0), cr(1.0), ZERO, cr(3.0)]);
        let v = f.eval(2, &t).unwrap();
        let expect = CMat::from_row_slice(2, 2, &[cr(1.0), cr(4.0), ZERO, cr(9.0)]);
        assert!((v - expect).norm() < 1e-12);
    }

    #[test]
    fn rational_rule_matches_scalar_resolvent() {
        // f(z) = 1/(2−z) at z = 0 gives 1/2
        let f = FMFunc::func_rational(vec![ONE], vec![cr(2.0), cr(-1.0)], unit_disk());
        let v = f.eval(1, &CMat::zeros(1, 1)).unwrap();
        assert!((v[(0, 0)] - cr(0.5)).norm() < 1e-12);
    }

    #[test]
    fn poly_eval_of_unit_is_identity() {
        let ctx = Context::new(2, 1);
        let f = FMFunc::poly_eval(NCPoly::one(ctx)).unwrap();
        let mut s = Sampler::new(4);
        let pt = s.cmat(4, 4, 1.0);
        let v = f.eval(2, &pt).unwrap();
        assert!((v - linalg::identity(4)).norm() < 1e-12);
    }

    #[test]
    fn combinations_behave_pointwise() {
        let f = FMFunc::func_poly(vec![ZERO, ONE], big_disk()); // z
        let one = FMFunc::func_poly(vec![ONE], big_disk());
        let mut s = Sampler::new(6);
        let pt = s.cmat(2, 2, 1.0);
        // mul by 1 is f
        let prod = fm_mul(f.clone(), one).unwrap();
        assert!((prod.eval(2, &pt).unwrap() - f.eval(2, &pt).unwrap()).norm() < 1e-12);
        // f + (−1)·f = 0
        let zero = fm_add(f.clone(), fm_scale(cr(-1.0), f.clone())).unwrap();
        assert!(zero.eval(2, &pt).unwrap().norm() < 1e-12);
        // star ∘ star = id
        let ss = fm_star(fm_star(f.clone()));
        assert!((ss.eval(2, &pt).unwrap() - f.eval(2, &pt).unwrap()).norm() < 1e-12);
        // incompatible value spaces are rejected
        let ctx = Context::new(2, 1);
        let p = FMFunc::poly_eval(NCPoly::one(ctx)).unwrap();
        assert!(fm_add(f, p).is_err());
    }

    #[test]
    fn norm_k_examples() {
        let mut s = Sampler::new(7);
        // constant 1 has norm 1 on any family
        let one = FMFunc::func_poly(vec![ONE], unit_disk());
        let family = vec![(1usize, CMat::from_row_slice(1, 1, &[cr(0.5)]))];
        assert!((norm_k(&one, &family, 0.05, &mut s).unwrap() - 1.0).abs() < 1e-12);
        // identity picks up the point norm
        let id = FMFunc::identity_func(unit_disk());
        assert!((norm_k(&id, &family, 0.05, &mut s).unwrap() - 0.5).abs() < 1e-12);
        // sup is monotone under family inclusion
        let bigger = vec![
            (1usize, CMat::from_row_slice(1, 1, &[cr(0.5)])),
            (1usize, CMat::from_row_slice(1, 1, &[c(0.0, 0.7)])),
        ];
        let small = norm_k(&id, &family, 0.05, &mut s).unwrap();
        let large = norm_k(&id, &bigger, 0.05, &mut s).unwrap();
        assert!(large >= small);
        // non-members are rejected
        let outside = vec![(1usize, CMat::from_row_slice(1, 1, &[cr(3.0)]))];
        assert!(norm_k(&id, &outside, 0.05, &mut s).is_err());
    }

    #[test]
    fn set_laws_for_spectrum_and_resolvent() {
        let cfg = SamplerConfig {
            samples: 15,
            max_size: 2,
            ..SamplerConfig::default()
        };
        let spectral = FMSet::Spectrum(unit_disk());
        assert!(all_passed(&check_fmset_laws(&spectral, &cfg)));
        let y = CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        let site = Site::scalar_site(y).unwrap();
        let reports = check_fmset_laws(&FMSet::Resolvent(site), &cfg);
        assert!(all_passed(&reports), "{:#?}", reports);
    }

    #[test]
    fn func_laws_for_square_and_resolvent() {
        let cfg = SamplerConfig {
            samples: 12,
            max_size: 2,
            ..SamplerConfig::default()
        };
        let sq = FMFunc::func_poly(vec![ZERO, ZERO, ONE], big_disk());
        let reports = check_fmfunc_laws(&sq, &cfg);
        assert!(all_passed(&reports), "{:#?}", reports);

        let y = CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        let site = Site::scalar_site(y).unwrap();
        let res = FMFunc::Resolvent { site };
        let reports = check_fmfunc_laws(&res, &cfg);
        assert!(all_passed(&reports), "{:#?}", reports);
    }

    #[test]
    fn intersection_of_resolvent_sets_keeps_b_corners() {
        // the triangular law must draw B-valued corners through the
        // intersection wrapper
        let y = CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        let site = Site::diagonal_site(y).unwrap();
        let both =
            FMSet::intersection(vec![FMSet::Resolvent(site.clone()), FMSet::Resolvent(site)])
                .unwrap();
        let cfg = SamplerConfig {
            samples: 10,
            max_size: 2,
            ..SamplerConfig::default()
        };
        let reports = check_fmset_laws(&both, &cfg);
        assert!(all_passed(&reports), "{:#?}", reports);
        let tri = reports
            .iter()
            .find(|r| r.law == "fmset.triangular_membership")
            .unwrap();
        assert!(tri.samples > 0);
    }

    #[test]
    fn intersections_conjunct() {
        let a = FMSet::Spectrum(unit_disk());
        let b = FMSet::Spectrum(ScalarRegion::HalfPlane {
            a: cr(-1.0),
            c: 0.0,
        }); // Re z > 0
        let both = FMSet::intersection(vec![a, b]).unwrap();
        let inside = CMat::from_row_slice(1, 1, &[cr(0.5)]);
        let wrong_half = CMat::from_row_slice(1, 1, &[cr(-0.5)]);
        assert!(both.member(1, &inside).unwrap());
        assert!(!both.member(1, &wrong_half).unwrap());
    }
}
