//! Degree-truncated power series over `B⟨X⟩`, Neumann inversion and
//! corepresentation constructors.
//!
//! Internally a matrix of series is stored densely: the degree-k homogeneous
//! component of one entry lives in `B^{⊗(k+1)} = M_q^{⊗(k+1)}`, kept as a
//! q^{k+1}-dimensional kron matrix (one factor per matrix-unit slot of the
//! word `b₀X b₁ … X b_k`). Concatenation of words then contracts adjacent
//! factors: for components x of degree a and y of degree b the product is
//! `(x ⊗ I_{q^b}) (I_{q^a} ⊗ y)`, a single small matrix product. The
//! difference quotient splits a word between two letters, which in this
//! representation is a pure regrouping of kron factors — the degree-(k+1)
//! component itself, read in `M_{q^{u+1}} ⊗ M_{q^{v+1}}` for every u+v = k.
//!
//! Inversion is the Neumann recursion on the strictly-positive-degree
//! remainder and is exact degreewise. A matrix `α` over the series ring is a
//! corepresentation for `∂ = ∂_var` when `∂a_{ik} = Σ_j a_{ij} ⊗ a_{jk}`
//! entrywise; [`corep_defect`] sums the failure of that identity over
//! entries, truncated to total degree ≤ D − 1.

use crate::error::{Error, Result};
use crate::linalg::{self, inverse_checked, kron, CMat, C64};
use crate::ncalg::{Context, NCPoly};
use crate::report::LawReport;
use crate::sampler::SamplerConfig;

/// Condition-number bound for the degree-0 part in [`MatSeries::invert`].
pub const DEGREE0_KAPPA_MAX: f64 = 1.0e8;

/// A polynomial kept truncated at variable degree ≤ D; the word-basis view
/// of one matrix entry.
#[derive(Debug, Clone, PartialEq)]
pub struct NCSeries {
    trunc: usize,
    poly: NCPoly,
}

impl NCSeries {
    pub fn new(poly: NCPoly, trunc: usize) -> Self {
        assert!(trunc >= 1);
        NCSeries {
            trunc,
            poly: poly.truncate_degree(trunc),
        }
    }

    pub fn poly(&self) -> &NCPoly {
        &self.poly
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn add(&self, other: &NCSeries) -> NCSeries {
        assert_eq!(self.trunc, other.trunc);
        NCSeries::new(self.poly.add(&other.poly), self.trunc)
    }

    pub fn sub(&self, other: &NCSeries) -> NCSeries {
        assert_eq!(self.trunc, other.trunc);
        NCSeries::new(self.poly.sub(&other.poly), self.trunc)
    }

    pub fn scale(&self, factor: C64) -> NCSeries {
        NCSeries::new(self.poly.scale(factor), self.trunc)
    }

    pub fn mul(&self, other: &NCSeries) -> Result<NCSeries> {
        assert_eq!(self.trunc, other.trunc);
        Ok(NCSeries::new(self.poly.mul(&other.poly)?, self.trunc))
    }
}

fn qpow(q: usize, k: usize) -> usize {
    q.pow(k as u32)
}

/// p×p matrix over the truncated series ring in the dense representation.
#[derive(Debug, Clone, PartialEq)]
pub struct MatSeries {
    p: usize,
    trunc: usize,
    ctx: Context,
    /// The variable whose letters occur in the series, if any occur at all.
    var: Option<usize>,
    /// entries[i*p+j][k]: degree-k component as a q^{k+1} kron matrix.
    entries: Vec<Vec<CMat>>,
}

impl MatSeries {
    fn empty_entry(ctx: Context, trunc: usize) -> Vec<CMat> {
        (0..=trunc)
            .map(|k| CMat::zeros(qpow(ctx.q, k + 1), qpow(ctx.q, k + 1)))
            .collect()
    }

    pub fn zero(ctx: Context, p: usize, trunc: usize) -> Self {
        assert!(trunc >= 1);
        MatSeries {
            p,
            trunc,
            ctx,
            var: None,
            entries: vec![Self::empty_entry(ctx, trunc); p * p],
        }
    }

    /// `1 ⊗ I_p`.
    pub fn identity(ctx: Context, p: usize, trunc: usize) -> Self {
        let mut m = MatSeries::zero(ctx, p, trunc);
        for i in 0..p {
            m.entries[i * p + i][0] = linalg::identity(ctx.q);
        }
        m
    }

    /// Embed an element of `M_p(B)` given as a pq×pq complex matrix.
    pub fn from_b_matrix(ctx: Context, p: usize, trunc: usize, big: &CMat) -> Result<Self> {
        let q = ctx.q;
        if big.nrows() != p * q || big.ncols() != p * q {
            return Err(Error::Shape(format!(
                "expected {0}x{0}, got {1}x{2}",
                p * q,
                big.nrows(),
                big.ncols()
            )));
        }
        let mut m = MatSeries::zero(ctx, p, trunc);
        for i in 0..p {
            for j in 0..p {
                m.entries[i * p + j][0] = linalg::block(big, i * q, j * q, q, q);
            }
        }
        Ok(m)
    }

    /// `X_var ⊗ I_p`; the degree-1 component of `X = Σ_{rs} e_{rr}Xe_{ss}`
    /// is the identity of `M_q ⊗ M_q`.
    pub fn x_diag(ctx: Context, p: usize, trunc: usize, var: usize) -> Result<Self> {
        if var >= ctx.n_vars {
            return Err(Error::VarIndex(var, ctx.n_vars));
        }
        let mut m = MatSeries::zero(ctx, p, trunc);
        m.var = Some(var);
        for i in 0..p {
            m.entries[i * p + i][1] = linalg::identity(ctx.q * ctx.q);
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.p
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn context(&self) -> Context {
        self.ctx
    }

    pub fn variable(&self) -> Option<usize> {
        self.var
    }

    fn comp(&self, i: usize, j: usize, k: usize) -> &CMat {
        &self.entries[i * self.p + j][k]
    }

    /// Word-basis view of one entry.
    pub fn entry(&self, i: usize, j: usize) -> NCSeries {
        let q = self.ctx.q;
        let var = self.var.unwrap_or(0) as u8;
        let mut poly = NCPoly::zero(self.ctx);
        for k in 0..=self.trunc {
            let comp = self.comp(i, j, k);
            for row in 0..comp.nrows() {
                for col in 0..comp.ncols() {
                    let coeff = comp[(row, col)];
                    if coeff.norm() < 1.0e-300 {
                        continue;
                    }
                    // decode kron digits, most significant slot first
                    let mut units = Vec::with_capacity(k + 1);
                    let (mut r, mut c) = (row, col);
                    for t in (0..=k).rev() {
                        let base = qpow(q, t);
                        units.push(((r / base) as u8, (c / base) as u8));
                        r %= base;
                        c %= base;
                    }
                    poly = poly.add(&NCPoly::monomial(self.ctx, coeff, &units, &vec![var; k]));
                }
            }
        }
        NCSeries::new(poly, self.trunc)
    }

    fn merge_var(&self, other: &MatSeries) -> Result<Option<usize>> {
        match (self.var, other.var) {
            (Some(a), Some(b)) if a != b => {
                Err(Error::Invalid("series use different variables".into()))
            }
            (Some(a), _) => Ok(Some(a)),
            (_, b) => Ok(b),
        }
    }

    pub fn add(&self, other: &MatSeries) -> MatSeries {
        assert_eq!((self.p, self.trunc), (other.p, other.trunc));
        let mut out = self.clone();
        out.var = self.merge_var(other).expect("variable mismatch in add");
        for (e, o) in out.entries.iter_mut().zip(&other.entries) {
            for (a, b) in e.iter_mut().zip(o) {
                *a += b;
            }
        }
        out
    }

    pub fn sub(&self, other: &MatSeries) -> MatSeries {
        self.add(&other.scale(linalg::c(-1.0, 0.0)))
    }

    pub fn scale(&self, factor: C64) -> MatSeries {
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            for a in e.iter_mut() {
                *a = a.map(|v| v * factor);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.iter().all(|c| c.iter().all(|v| v.norm() < 1.0e-300)))
    }

    /// Sum of absolute values of all word coefficients.
    pub fn l1_norm(&self) -> f64 {
        self.entries
            .iter()
            .flat_map(|e| e.iter())
            .map(|c| c.iter().map(|v| v.norm()).sum::<f64>())
            .sum()
    }

    /// Contraction product of homogeneous components: degree a times
    /// degree b lands in degree a+b, multiplying the adjacent unit slots.
    fn contract(x: &CMat, y: &CMat, q: usize, a: usize, b: usize) -> CMat {
        kron(x, &linalg::identity(qpow(q, b))) * kron(&linalg::identity(qpow(q, a)), y)
    }

    pub fn mul(&self, other: &MatSeries) -> Result<MatSeries> {
        assert_eq!((self.p, self.trunc), (other.p, other.trunc));
        self.ctx.check_matches(&other.ctx)?;
        let var = self.merge_var(other)?;
        let q = self.ctx.q;
        let mut out = MatSeries::zero(self.ctx, self.p, self.trunc);
        out.var = var;
        for i in 0..self.p {
            for k in 0..self.p {
                for a in 0..=self.trunc {
                    let x = self.comp(i, k, a);
                    if x.iter().all(|v| v.norm() == 0.0) {
                        continue;
                    }
                    for j in 0..self.p {
                        for b in 0..=(self.trunc - a) {
                            let y = other.comp(k, j, b);
                            if y.iter().all(|v| v.norm() == 0.0) {
                                continue;
                            }
                            out.entries[i * self.p + j][a + b] += Self::contract(x, y, q, a, b);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// *-transpose: `(α*)_{ij} = (α_{ji})*`; on a degree-k component the kron
    /// factors reverse order and each matrix unit takes its adjoint.
    pub fn star_transpose(&self) -> MatSeries {
        let q = self.ctx.q;
        let mut out = MatSeries::zero(self.ctx, self.p, self.trunc);
        out.var = self.var;
        for i in 0..self.p {
            for j in 0..self.p {
                for k in 0..=self.trunc {
                    let src = self.comp(j, i, k);
                    let dim = src.nrows();
                    let mut dst = CMat::zeros(dim, dim);
                    for row in 0..dim {
                        for col in 0..dim {
                            let v = src[(row, col)];
                            if v.norm() == 0.0 {
                                continue;
                            }
                            let mut row_digits = Vec::with_capacity(k + 1);
                            let mut col_digits = Vec::with_capacity(k + 1);
                            let (mut rr, mut cc) = (row, col);
                            for t in (0..=k).rev() {
                                let base = qpow(q, t);
                                row_digits.push(rr / base);
                                col_digits.push(cc / base);
                                rr %= base;
                                cc %= base;
                            }
                            // (β₀,…,β_k)* = (β_k*,…,β₀*): reversed digits, swapped pairs
                            let mut new_row = 0usize;
                            let mut new_col = 0usize;
                            for t in (0..=k).rev() {
                                new_row = new_row * q + col_digits[t];
                                new_col = new_col * q + row_digits[t];
                            }
                            dst[(new_row, new_col)] += v.conj();
                        }
                    }
                    out.entries[i * self.p + j][k] = dst;
                }
            }
        }
        out
    }

    /// Degree-0 part realized as a pq×pq complex matrix.
    pub fn degree0(&self) -> CMat {
        let q = self.ctx.q;
        let mut big = CMat::zeros(self.p * q, self.p * q);
        for i in 0..self.p {
            for j in 0..self.p {
                linalg::set_block(&mut big, i * q, j * q, self.comp(i, j, 0));
            }
        }
        big
    }

    /// Two-sided inverse up to the truncation order via the Neumann
    /// recursion; requires the degree-0 part to be well-conditioned.
    pub fn invert(&self) -> Result<MatSeries> {
        let a0 = self.degree0();
        let (a0_inv, _) = inverse_checked(&a0, DEGREE0_KAPPA_MAX)
            .map_err(|_| Error::SingularLeadingTerm(linalg::cond(&a0)))?;
        let m = MatSeries::from_b_matrix(self.ctx, self.p, self.trunc, &a0_inv)?;
        // a = a0 + a₊, inv(a) = Σ_k (−a0⁻¹ a₊)^k a0⁻¹
        let mut a_plus = self.clone();
        for e in a_plus.entries.iter_mut() {
            e[0] = CMat::zeros(self.ctx.q, self.ctx.q);
        }
        let step = m.mul(&a_plus)?.scale(linalg::c(-1.0, 0.0));
        let mut sum = MatSeries::identity(self.ctx, self.p, self.trunc);
        sum.var = self.var;
        let mut power = MatSeries::identity(self.ctx, self.p, self.trunc);
        for _ in 0..self.trunc {
            power = power.mul(&step)?;
            if power.is_zero() {
                break;
            }
            sum = sum.add(&power);
        }
        sum.mul(&m)
    }
}

/// Failure of the corepresentation identity w.r.t. `∂_var`, summed over
/// entries, with both sides truncated to total degree ≤ D − 1.
///
/// At bidegree (u, v) the coproduct side is the degree-(u+v+1) component of
/// the entry itself (a kron regrouping), and the product side is
/// `Σ_j comp_u(a_{ij}) ⊗ comp_v(a_{jk})`.
pub fn corep_defect(alpha: &MatSeries, var: usize) -> Result<f64> {
    let ctx = alpha.context();
    if var >= ctx.n_vars {
        return Err(Error::VarIndex(var, ctx.n_vars));
    }
    let p = alpha.size();
    let cap = alpha.trunc() - 1;
    let splits_match = alpha.variable() == Some(var);
    let mut total = 0.0;
    for i in 0..p {
        for k in 0..p {
            for u in 0..=cap {
                for v in 0..=(cap - u) {
                    let dim = qpow(ctx.q, u + v + 2);
                    let lhs = if splits_match {
                        alpha.comp(i, k, u + v + 1).clone()
                    } else {
                        CMat::zeros(dim, dim)
                    };
                    let mut rhs = CMat::zeros(dim, dim);
                    for j in 0..p {
                        rhs += kron(alpha.comp(i, j, u), alpha.comp(j, k, v));
                    }
                    total += (lhs - rhs).iter().map(|z| z.norm()).sum::<f64>();
                }
            }
        }
    }
    Ok(total)
}

/// Generalized resolvent `α = (n − X⊗I_p)⁻¹` with `n ∈ M_p(B)` invertible.
pub fn corep_resolvent(
    ctx: Context,
    p: usize,
    trunc: usize,
    n_big: &CMat,
    var: usize,
) -> Result<MatSeries> {
    let n = MatSeries::from_b_matrix(ctx, p, trunc, n_big)?;
    let x = MatSeries::x_diag(ctx, p, trunc, var)?;
    n.sub(&x).invert()
}

/// Sandwiched resolvent `α = β₃ (β₂ − β₁ (X⊗I_p) β₃)⁻¹ β₁` with βᵢ ∈ M_p(B).
pub fn corep_sandwich(
    ctx: Context,
    p: usize,
    trunc: usize,
    b1: &CMat,
    b2: &CMat,
    b3: &CMat,
    var: usize,
) -> Result<MatSeries> {
    let beta1 = MatSeries::from_b_matrix(ctx, p, trunc, b1)?;
    let beta2 = MatSeries::from_b_matrix(ctx, p, trunc, b2)?;
    let beta3 = MatSeries::from_b_matrix(ctx, p, trunc, b3)?;
    let x = MatSeries::x_diag(ctx, p, trunc, var)?;
    let y = beta2.sub(&beta1.mul(&x)?.mul(&beta3)?);
    beta3.mul(&y.invert()?)?.mul(&beta1)
}

/// Möbius modification `α = (1 − ξβ)⁻¹ ξ` of a corepresentation ξ, β ∈ M_p(B).
pub fn corep_moebius_left(xi: &MatSeries, beta_big: &CMat) -> Result<MatSeries> {
    let beta = MatSeries::from_b_matrix(xi.context(), xi.size(), xi.trunc(), beta_big)?;
    let one = MatSeries::identity(xi.context(), xi.size(), xi.trunc());
    one.sub(&xi.mul(&beta)?).invert()?.mul(xi)
}

/// Möbius modification `γ = ξ (1 − βξ)⁻¹`.
pub fn corep_moebius_right(xi: &MatSeries, beta_big: &CMat) -> Result<MatSeries> {
    let beta = MatSeries::from_b_matrix(xi.context(), xi.size(), xi.trunc(), beta_big)?;
    let one = MatSeries::identity(xi.context(), xi.size(), xi.trunc());
    xi.mul(&one.sub(&beta.mul(xi)?).invert()?)
}

/// Randomized suite over all three constructors plus the unit counterexample
/// and the inverse/symmetry identities.
pub fn check_corep_laws(cfg: &SamplerConfig) -> Vec<LawReport> {
    let ctx = Context::new(cfg.q, cfg.n_vars);
    let mut s = cfg.sampler();
    let tol = 1.0e-10;

    let mut inverse = LawReport::new("series.two_sided_inverse", tol);
    let mut resolvent = LawReport::new("corep.resolvent_defect", tol);
    let mut sandwich = LawReport::new("corep.sandwich_defect", tol);
    let mut moebius_l = LawReport::new("corep.moebius_left_defect", tol);
    let mut moebius_r = LawReport::new("corep.moebius_right_defect", tol);
    let mut symmetry = LawReport::new("corep.moebius_symmetry", tol);
    let mut unit_ce = LawReport::new("corep.unit_counterexample", 1.0e-12);

    for _ in 0..cfg.samples {
        let p = s.usize_in(1, cfg.max_size.min(3));
        let trunc = s.usize_in(2, cfg.max_degree.clamp(2, 6));
        let var = s.usize_in(0, ctx.n_vars - 1);
        let dim = p * ctx.q;
        let shift = linalg::identity(dim).map(|v| v * linalg::c(0.0, 3.0));
        let n_big = s.cmat(dim, dim, 0.4) + shift.clone();

        let witness = |tag: &'static str| {
            move || {
                format!(
                    "{}: p={}, q={}, D={}, var={}",
                    tag,
                    p,
                    ctx.q,
                    trunc,
                    var + 1
                )
            }
        };

        // truncated two-sided inverse
        let a = MatSeries::from_b_matrix(ctx, p, trunc, &n_big)
            .unwrap()
            .sub(&MatSeries::x_diag(ctx, p, trunc, var).unwrap());
        let inv = a.invert().unwrap();
        let one = MatSeries::identity(ctx, p, trunc);
        let d = a.mul(&inv).unwrap().sub(&one).l1_norm() + inv.mul(&a).unwrap().sub(&one).l1_norm();
        inverse.record(d, witness("inverse"));

        let alpha = corep_resolvent(ctx, p, trunc, &n_big, var).unwrap();
        resolvent.record(corep_defect(&alpha, var).unwrap(), witness("resolvent"));

        let b1 = s.cmat(dim, dim, 0.3);
        let b2 = s.cmat(dim, dim, 0.3) + shift.clone();
        let b3 = s.cmat(dim, dim, 0.3);
        if let Ok(alpha_s) = corep_sandwich(ctx, p, trunc, &b1, &b2, &b3, var) {
            sandwich.record(corep_defect(&alpha_s, var).unwrap(), witness("sandwich"));
        }

        // Möbius with β scaled to keep 1 − ξβ invertible
        let beta = s.cmat(dim, dim, 0.2);
        let left = corep_moebius_left(&alpha, &beta).unwrap();
        moebius_l.record(corep_defect(&left, var).unwrap(), witness("moebius_left"));
        let right = corep_moebius_right(&alpha, &beta).unwrap();
        moebius_r.record(corep_defect(&right, var).unwrap(), witness("moebius_right"));

        // γ(ξ, β) agrees with the *-transposed left form on (ξ*, β*)
        let mirrored = corep_moebius_left(&alpha.star_transpose(), &beta.adjoint())
            .unwrap()
            .star_transpose();
        symmetry.record(right.sub(&mirrored).l1_norm(), witness("symmetry"));

        // the unit is not a corepresentation: its defect is exactly p·q²
        let defect = corep_defect(&one, var).unwrap();
        let predicted = (p * ctx.q * ctx.q) as f64;
        unit_ce.record((defect - predicted).abs(), witness("unit"));
    }

    vec![
        inverse, resolvent, sandwich, moebius_l, moebius_r, symmetry, unit_ce,
    ]
}
