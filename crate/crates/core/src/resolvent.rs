//! Sites `(E = M_d(ℂ), B ⊆ E, Y)` and full B-resolvents.
//!
//! `B` is a unital subspace of `M_d` given by a linearly independent basis
//! containing the identity in its span. The n-th resolvent set consists of
//! the `b ∈ M_n(B)` with `Y⊗I_n − b` invertible; "invertible" carries the
//! numeric meaning of a condition number below [`DEFAULT_KAPPA_MAX`], and
//! membership always reports the condition number alongside the verdict.

use crate::error::{Error, Result};
use crate::linalg::{self, block, cond, direct_sum, kron, op_norm, CMat, C64};
use crate::report::LawReport;
use crate::sampler::{Sampler, SamplerConfig};

/// Default invertibility threshold for membership tests.
pub const DEFAULT_KAPPA_MAX: f64 = 1.0e8;

/// Residual threshold for deciding that a block lies in span(B).
const SPAN_RESIDUAL_TOL: f64 = 1.0e-9;

/// Structural properties of the scalar subspace, verified at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SiteFlags {
    pub b_mult_closed: bool,
    pub b_star_closed: bool,
    pub y_selfadjoint: bool,
}

/// `1 ∈ B ⊆ E = M_d(ℂ)` together with the analyzed element `Y ∈ E`.
#[derive(Debug, Clone)]
pub struct Site {
    d: usize,
    basis: Vec<CMat>,
    y: CMat,
    flags: SiteFlags,
    kappa_max: f64,
}

impl Site {
    pub fn new(d: usize, basis: Vec<CMat>, y: CMat) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::Invalid("scalar basis must be nonempty".into()));
        }
        for b in &basis {
            if b.nrows() != d || b.ncols() != d {
                return Err(Error::Shape(format!("basis matrices must be {0}x{0}", d)));
            }
        }
        if y.nrows() != d || y.ncols() != d {
            return Err(Error::Shape(format!("Y must be {0}x{0}", d)));
        }
        // linear independence
        let k = basis.len();
        let mut stacked = CMat::zeros(d * d, k);
        for (col, b) in basis.iter().enumerate() {
            for (row, v) in b.iter().enumerate() {
                stacked[(row, col)] = *v;
            }
        }
        if linalg::rank_with_tol(&stacked, 1.0e-10) != k {
            return Err(Error::Invalid("scalar basis is linearly dependent".into()));
        }
        // 1 ∈ span(B)
        let (_, res) = linalg::span_coordinates(&basis, &linalg::identity(d));
        if res > SPAN_RESIDUAL_TOL {
            return Err(Error::Invalid(
                "identity is not in the span of the scalar basis".into(),
            ));
        }
        let in_span = |m: &CMat| {
            let (_, res) = linalg::span_coordinates(&basis, m);
            res <= SPAN_RESIDUAL_TOL * (1.0 + m.norm())
        };
        let b_mult_closed = basis
            .iter()
            .all(|a| basis.iter().all(|b| in_span(&(a * b))));
        let b_star_closed = basis.iter().all(|b| in_span(&b.adjoint()));
        let y_selfadjoint = linalg::hermitian_defect(&y) <= 1.0e-12 * (1.0 + y.norm());
        Ok(Site {
            d,
            basis,
            y,
            flags: SiteFlags {
                b_mult_closed,
                b_star_closed,
                y_selfadjoint,
            },
            kappa_max: DEFAULT_KAPPA_MAX,
        })
    }

    /// Site with `B = ℂ·1`.
    pub fn scalar_site(y: CMat) -> Result<Self> {
        let d = y.nrows();
        Site::new(d, vec![linalg::identity(d)], y)
    }

    /// Site with `B = M_d` (the full matrix-unit basis).
    pub fn full_site(y: CMat) -> Result<Self> {
        let d = y.nrows();
        let mut basis = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                basis.push(linalg::unit_matrix(d, d, i, j));
            }
        }
        Site::new(d, basis, y)
    }

    /// Site with `B` = diagonal matrices.
    pub fn diagonal_site(y: CMat) -> Result<Self> {
        let d = y.nrows();
        let basis = (0..d).map(|i| linalg::unit_matrix(d, d, i, i)).collect();
        Site::new(d, basis, y)
    }

    pub fn with_kappa_max(mut self, kappa_max: f64) -> Self {
        self.kappa_max = kappa_max;
        self
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn basis(&self) -> &[CMat] {
        &self.basis
    }

    pub fn y(&self) -> &CMat {
        &self.y
    }

    pub fn flags(&self) -> SiteFlags {
        self.flags
    }

    pub fn kappa_max(&self) -> f64 {
        self.kappa_max
    }

    /// `Y ⊗ I_n` as an nd×nd matrix (block diagonal with Y).
    pub fn y_amplified(&self, n: usize) -> CMat {
        kron(&linalg::identity(n), &self.y)
    }

    /// Coordinates of a d×d block in the scalar basis.
    pub fn coords_of(&self, m: &CMat) -> Result<Vec<C64>> {
        let (coords, res) = linalg::span_coordinates(&self.basis, m);
        if res > SPAN_RESIDUAL_TOL * (1.0 + m.norm()) {
            return Err(Error::NotInSpan(res));
        }
        Ok(coords)
    }

    /// Whether every d×d block of an nd×nd matrix lies in B.
    pub fn is_b_valued(&self, big: &CMat, n: usize) -> bool {
        (0..n).all(|i| {
            (0..n).all(|j| {
                self.coords_of(&block(big, i * self.d, j * self.d, self.d, self.d))
                    .is_ok()
            })
        })
    }

    /// A random point of `M_n(B)` (not necessarily a member).
    pub fn random_b_point(&self, s: &mut Sampler, n: usize, scale: f64) -> CMat {
        let mut big = CMat::zeros(n * self.d, n * self.d);
        for i in 0..n {
            for j in 0..n {
                let mut blk = CMat::zeros(self.d, self.d);
                for b in &self.basis {
                    blk += b.scale_c(s.complex_gaussian().scale(scale));
                }
                linalg::set_block(&mut big, i * self.d, j * self.d, &blk);
            }
        }
        big
    }

    /// A random member of `ρ_n(Y;B)`: a bounded random point pushed off the
    /// spectrum by an imaginary multiple of the identity, so that
    /// `σ_min(Y⊗I − b) ≥ 1 + ‖Y‖` regardless of the draw.
    pub fn random_member(&self, s: &mut Sampler, n: usize) -> CMat {
        let raw = self.random_b_point(s, n, 0.5);
        let raw_norm = op_norm(&raw);
        let mu = 1.0 + op_norm(&self.y) + raw_norm + op_norm(&self.y_amplified(n));
        raw + linalg::identity(n * self.d).scale_c(linalg::c(0.0, mu))
    }
}

trait ScaleC {
    fn scale_c(&self, factor: C64) -> CMat;
}

impl ScaleC for CMat {
    fn scale_c(&self, factor: C64) -> CMat {
        let mut out = self.clone();
        for v in out.iter_mut() {
            *v *= factor;
        }
        out
    }
}

/// Point of `M_n(B)` with its coordinate tensor and realized matrix.
#[derive(Debug, Clone)]
pub struct ResolventPoint {
    n: usize,
    coords: Vec<Vec<C64>>,
    realized: CMat,
}

impl ResolventPoint {
    /// Build from an n×n grid of B-coordinates.
    pub fn from_coords(site: &Site, n: usize, coords: Vec<Vec<C64>>) -> Result<Self> {
        if coords.len() != n * n || coords.iter().any(|c| c.len() != site.basis.len()) {
            return Err(Error::Shape("coordinate grid must be n² × |basis|".into()));
        }
        let d = site.d;
        let mut realized = CMat::zeros(n * d, n * d);
        for i in 0..n {
            for j in 0..n {
                let mut blk = CMat::zeros(d, d);
                for (b, &c) in site.basis.iter().zip(&coords[i * n + j]) {
                    blk += b.scale_c(c);
                }
                linalg::set_block(&mut realized, i * d, j * d, &blk);
            }
        }
        Ok(ResolventPoint {
            n,
            coords,
            realized,
        })
    }

    /// Build from an nd×nd matrix whose blocks must lie in B.
    pub fn from_matrix(site: &Site, n: usize, big: &CMat) -> Result<Self> {
        let d = site.d;
        if big.nrows() != n * d || big.ncols() != n * d {
            return Err(Error::Shape(format!("expected {0}x{0}", n * d)));
        }
        let mut coords = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                coords.push(site.coords_of(&block(big, i * d, j * d, d, d))?);
            }
        }
        Ok(ResolventPoint {
            n,
            coords,
            realized: big.clone(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[Vec<C64>] {
        &self.coords
    }

    pub fn realized(&self) -> &CMat {
        &self.realized
    }
}

/// Membership in `ρ_n(Y;B)` with the observed condition number.
pub fn membership_matrix(site: &Site, n: usize, b: &CMat) -> (bool, f64) {
    let kappa = cond(&(site.y_amplified(n) - b));
    (kappa.is_finite() && kappa <= site.kappa_max, kappa)
}

pub fn membership(site: &Site, pt: &ResolventPoint) -> (bool, f64) {
    membership_matrix(site, pt.n, &pt.realized)
}

/// `R_n(Y;B)(b) = (Y⊗I_n − b)⁻¹`, with a residual guard.
pub fn resolve_matrix(site: &Site, n: usize, b: &CMat) -> Result<CMat> {
    let m = site.y_amplified(n) - b;
    let (inv, kappa) = linalg::inverse_checked(&m, site.kappa_max)?;
    let residual = (&m * &inv - linalg::identity(n * site.d)).norm();
    if residual > 1.0e-10 * kappa.max(1.0) {
        return Err(Error::NotResolvent(kappa));
    }
    Ok(inv)
}

pub fn resolve(site: &Site, pt: &ResolventPoint) -> Result<CMat> {
    resolve_matrix(site, pt.n, &pt.realized)
}

/// Randomized suite for the resolvent-set laws: direct sums, GL(n)
/// conjugation, triangular membership, openness, the first-order Taylor
/// expansion of the resolvent, and the finiteness property of triangular
/// members (diagonal blocks of members are members — true in M_d).
pub fn check_resolvent_laws(site: &Site, cfg: &SamplerConfig) -> Vec<LawReport> {
    let mut s = Sampler::new(cfg.seed);
    let d = site.d;
    let tol = 1.0e-10;

    let mut ds_member = LawReport::new("resolvent.direct_sum_membership", 0.0);
    let mut ds_resolve = LawReport::new("resolvent.direct_sum_resolvent", tol);
    let mut gl_member = LawReport::new("resolvent.gl_conjugation_membership", 0.0);
    let mut gl_equiv = LawReport::new("resolvent.gl_conjugation_equivariance", tol);
    let mut triangular = LawReport::new("resolvent.triangular_membership", 0.0);
    let mut openness = LawReport::new("resolvent.openness_probe", 0.0);
    let mut taylor = LawReport::new("resolvent.taylor_probe", 10.0);
    let mut finiteness = LawReport::new("resolvent.finiteness_probe", 0.0);

    for _ in 0..cfg.samples {
        let m = s.usize_in(1, cfg.max_size);
        let n = s.usize_in(1, cfg.max_size);
        let b1 = site.random_member(&mut s, m);
        let b2 = site.random_member(&mut s, n);
        let (ok1, k1) = membership_matrix(site, m, &b1);
        let (ok2, k2) = membership_matrix(site, n, &b2);
        if !(ok1 && ok2) {
            continue;
        }
        let witness = || format!("d={}, m={}, n={}", d, m, n);

        // (ii) ρ_m ⊕ ρ_n = ρ_{m+n} ∩ (M_m ⊕ M_n)
        let sum = direct_sum(&b1, &b2);
        let (ok_sum, _) = membership_matrix(site, m + n, &sum);
        // a singular block kills the direct sum
        let bad = direct_sum(&site.y_amplified(m), &b2);
        let (bad_ok, _) = membership_matrix(site, m + n, &bad);
        ds_member.record_bool(ok_sum && !bad_ok, witness);

        // (vi) R(b'⊕b'') = R(b')⊕R(b'')
        let r1 = resolve_matrix(site, m, &b1).unwrap();
        let r2 = resolve_matrix(site, n, &b2).unwrap();
        let r_sum = resolve_matrix(site, m + n, &sum).unwrap();
        let defect = (&r_sum - direct_sum(&r1, &r2)).norm() / (k1 + k2);
        ds_resolve.record(defect, witness);

        // (iii)+(vii) conjugation by S ⊗ 1
        let gl = s.gl(n);
        let c = kron(&gl, &linalg::identity(d));
        let c_inv = c.clone().try_inverse().unwrap();
        let conj = &c * &b2 * &c_inv;
        let (ok_conj, _) = membership_matrix(site, n, &conj);
        gl_member.record_bool(ok_conj == ok2, witness);
        let kappa_s = cond(&gl);
        let equiv_defect = (resolve_matrix(site, n, &conj).unwrap() - &c * &r2 * &c_inv).norm()
            / (k2 * kappa_s * kappa_s);
        gl_equiv.record(equiv_defect, witness);

        // (iv) upper-triangular block with arbitrary B corner
        let beta = site.random_b_point(&mut s, m.max(n), 1.0);
        let corner = block(&beta, 0, 0, m * d, n * d);
        let mut tri = direct_sum(&b1, &b2);
        linalg::set_block(&mut tri, 0, m * d, &corner);
        let (ok_tri, k_tri) = membership_matrix(site, m + n, &tri);
        triangular.record_bool(ok_tri, witness);

        // (i) an explicit perturbation ball stays in the set
        let r_norm = op_norm(&r2);
        let pert = site.random_b_point(&mut s, n, 1.0);
        let pert_scaled = pert.scale_c(linalg::cr(0.1 / (r_norm * op_norm(&pert) + 1e-300)));
        let (still, _) = membership_matrix(site, n, &(&b2 + pert_scaled));
        openness.record_bool(still, witness);

        // (v) R(b+εh) − R − εRhR should be the second-order term ε²RhRhR
        let eps = 1.0e-4;
        let h = site.random_b_point(&mut s, n, 1.0);
        let exact = resolve_matrix(site, n, &(&b2 + h.scale_c(linalg::cr(eps)))).unwrap();
        let first = &r2 + (&r2 * &h * &r2).scale_c(linalg::cr(eps));
        let second = (&r2 * &h * &r2 * &h * &r2).scale_c(linalg::cr(eps * eps));
        let ratio = (exact - first).norm() / (second.norm() + 1.0e-14);
        taylor.record(ratio, witness);

        // finiteness: diagonal blocks of triangular members are members
        if ok_tri && k_tri <= site.kappa_max {
            let (dm, _) = membership_matrix(site, m, &b1);
            let (dn, _) = membership_matrix(site, n, &b2);
            finiteness.record_bool(dm && dn, witness);
        }
    }

    vec![
        ds_member, ds_resolve, gl_member, gl_equiv, triangular, openness, taylor, finiteness,
    ]
}
