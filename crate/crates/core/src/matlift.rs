//! Reduction of a p²-variable ring to one matrix variable.
//!
//! With the variables reindexed as `∂_{ij}` (row-major, `v = i·p + j`), the
//! comultiplication on `M_p(A) = M_p ⊗ A` is
//! `∂(T⊗a) = Σ_{ij} ((T⊗I_p)Δ_{ij}) ⊗ ∂_{ij}a` with
//! `Δ_{ij} = Σ_k e_{ki}⊗e_{jk}`, equivalently `Σ_{ij} (Δ_{ij}(I_p⊗T)) ⊗ ∂_{ij}a`.
//! The lifted ring is isomorphic to `D⟨X⟩`, `D = M_p ⊗ B`, via
//! `X ↦ Σ_{ij} e_{ij} ⊗ X_{ij}`; [`DxIso`] realizes that homomorphism and
//! [`check_lift_laws`] verifies that it is multiplicative and intertwines
//! the one-variable difference quotient with the lifted one.

use std::collections::BTreeMap;

use crate::dq::partial_dq;
use crate::error::{Error, Result};
use crate::linalg::{self, kron, unit_matrix, CMat, C64};
use crate::ncalg::{Context, NCPoly};
use crate::report::LawReport;
use crate::sampler::{Sampler, SamplerConfig};
use crate::tensor::TensorPoly;

/// Base data for the lift: `p`, the p²-variable context, and an optional
/// invertible reindexing weight applied to the vector of partials.
#[derive(Debug, Clone)]
pub struct LiftContext {
    p: usize,
    base: Context,
    transform: Option<CMat>,
}

impl LiftContext {
    pub fn new(p: usize, q: usize) -> Self {
        LiftContext {
            p,
            base: Context::new(q, p * p),
            transform: None,
        }
    }

    /// Precompose the partials with an invertible p²×p² weight matrix:
    /// `D_{ij} = Σ_k W[(ij),k] ∂_k`.
    pub fn with_transform(mut self, w: CMat) -> Result<Self> {
        let n = self.p * self.p;
        if w.nrows() != n || w.ncols() != n {
            return Err(Error::Shape(format!("transform must be {0}x{0}", n)));
        }
        if !linalg::cond(&w).is_finite() {
            return Err(Error::Invalid("transform must be invertible".into()));
        }
        self.transform = Some(w);
        Ok(self)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn base(&self) -> Context {
        self.base
    }

    pub fn var_index(&self, i: usize, j: usize) -> usize {
        i * self.p + j
    }

    /// `D_{ij}` applied to one leg of a tensor.
    fn partial_at_leg(&self, i: usize, j: usize, t: &TensorPoly, leg: usize) -> Result<TensorPoly> {
        match &self.transform {
            None => t.apply_partial_at_leg(self.var_index(i, j), leg),
            Some(w) => {
                let row = self.var_index(i, j);
                let mut acc = TensorPoly::zero(t.context(), t.order() + 1);
                for k in 0..self.base.n_vars {
                    let weight = w[(row, k)];
                    if weight.norm() > 0.0 {
                        acc = acc.add(&t.apply_partial_at_leg(k, leg)?.scale(weight));
                    }
                }
                Ok(acc)
            }
        }
    }

    /// Δ_{ij} = Σ_k e_{ki} ⊗ e_{jk} in the kron representation of M_p⊗M_p.
    pub fn delta(&self, i: usize, j: usize) -> CMat {
        let p = self.p;
        let mut m = CMat::zeros(p * p, p * p);
        for k in 0..p {
            m += kron(&unit_matrix(p, p, k, i), &unit_matrix(p, p, j, k));
        }
        m
    }
}

/// Element of `M_p(A)`: a p×p matrix of polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct MatPoly {
    p: usize,
    ctx: Context,
    entries: Vec<NCPoly>,
}

impl MatPoly {
    pub fn zero(ctx: Context, p: usize) -> Self {
        MatPoly {
            p,
            ctx,
            entries: vec![NCPoly::zero(ctx); p * p],
        }
    }

    pub fn identity(ctx: Context, p: usize) -> Self {
        let mut m = MatPoly::zero(ctx, p);
        for i in 0..p {
            *m.entry_mut(i, i) = NCPoly::one(ctx);
        }
        m
    }

    /// `T ⊗ a` for a single matrix unit `T = e_{rs}`.
    pub fn simple(ctx: Context, p: usize, r: usize, s: usize, a: &NCPoly) -> Self {
        let mut m = MatPoly::zero(ctx, p);
        *m.entry_mut(r, s) = a.clone();
        m
    }

    pub fn size(&self) -> usize {
        self.p
    }

    pub fn context(&self) -> Context {
        self.ctx
    }

    pub fn entry(&self, i: usize, j: usize) -> &NCPoly {
        &self.entries[i * self.p + j]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut NCPoly {
        &mut self.entries[i * self.p + j]
    }

    pub fn add(&self, other: &MatPoly) -> MatPoly {
        assert_eq!(self.p, other.p);
        let mut out = self.clone();
        for (e, o) in out.entries.iter_mut().zip(&other.entries) {
            *e = e.add(o);
        }
        out
    }

    pub fn sub(&self, other: &MatPoly) -> MatPoly {
        assert_eq!(self.p, other.p);
        let mut out = self.clone();
        for (e, o) in out.entries.iter_mut().zip(&other.entries) {
            *e = e.sub(o);
        }
        out
    }

    pub fn scale(&self, factor: C64) -> MatPoly {
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            *e = e.scale(factor);
        }
        out
    }

    pub fn mul(&self, other: &MatPoly) -> Result<MatPoly> {
        assert_eq!(self.p, other.p);
        let mut out = MatPoly::zero(self.ctx, self.p);
        for i in 0..self.p {
            for j in 0..self.p {
                let mut acc = NCPoly::zero(self.ctx);
                for k in 0..self.p {
                    acc = acc.add(&self.entry(i, k).mul(other.entry(k, j))?);
                }
                *out.entry_mut(i, j) = acc;
            }
        }
        Ok(out)
    }

    pub fn l1_norm(&self) -> f64 {
        self.entries.iter().map(NCPoly::l1_norm).sum()
    }
}

/// Element of `M_p(A)^{⊗k}` in the identification
/// `(T₁⊗a₁)⊗…⊗(T_k⊗a_k) ↦ (T₁⊗…⊗T_k) ⊗ (a₁⊗…⊗a_k)`:
/// matrix-unit leg tuples paired with order-k tensor polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftTensor {
    p: usize,
    ctx: Context,
    order: usize,
    terms: BTreeMap<Vec<(u8, u8)>, TensorPoly>,
}

impl LiftTensor {
    pub fn zero(ctx: Context, p: usize, order: usize) -> Self {
        LiftTensor {
            p,
            ctx,
            order,
            terms: BTreeMap::new(),
        }
    }

    /// `(I_p⊗1)^{⊗order}`.
    pub fn unit(ctx: Context, p: usize, order: usize) -> Self {
        let mut t = LiftTensor::zero(ctx, p, order);
        let mut legs = vec![(0u8, 0u8); order];
        loop {
            t.add_entry(legs.clone(), &TensorPoly::unit(ctx, order));
            // advance the diagonal multi-index
            let mut done = true;
            for leg in legs.iter_mut() {
                let next = leg.0 as usize + 1;
                if next < p {
                    *leg = (next as u8, next as u8);
                    done = false;
                    break;
                }
                *leg = (0, 0);
            }
            if done {
                break;
            }
        }
        t
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn add_entry(&mut self, legs: Vec<(u8, u8)>, tp: &TensorPoly) {
        debug_assert_eq!(legs.len(), self.order);
        debug_assert_eq!(tp.order(), self.order);
        if tp.is_zero() {
            return;
        }
        match self.terms.get_mut(&legs) {
            Some(existing) => {
                let merged = existing.add(tp);
                if merged.is_zero() {
                    self.terms.remove(&legs);
                } else {
                    *existing = merged;
                }
            }
            None => {
                self.terms.insert(legs, tp.clone());
            }
        }
    }

    pub fn add(&self, other: &LiftTensor) -> LiftTensor {
        assert_eq!(self.order, other.order);
        let mut out = self.clone();
        for (legs, tp) in &other.terms {
            out.add_entry(legs.clone(), tp);
        }
        out
    }

    pub fn sub(&self, other: &LiftTensor) -> LiftTensor {
        self.add(&other.scale(linalg::c(-1.0, 0.0)))
    }

    pub fn scale(&self, factor: C64) -> LiftTensor {
        let mut out = LiftTensor::zero(self.ctx, self.p, self.order);
        for (legs, tp) in &self.terms {
            out.add_entry(legs.clone(), &tp.scale(factor));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(TensorPoly::l1_norm).sum()
    }

    /// Componentwise product: matrix units contract legwise, polynomial legs
    /// multiply componentwise.
    pub fn mul(&self, other: &LiftTensor) -> Result<LiftTensor> {
        assert_eq!(self.order, other.order);
        let mut out = LiftTensor::zero(self.ctx, self.p, self.order);
        for (la, ta) in &self.terms {
            'next: for (lb, tb) in &other.terms {
                let mut legs = Vec::with_capacity(self.order);
                for (&(a, b), &(c, d)) in la.iter().zip(lb) {
                    if b != c {
                        continue 'next;
                    }
                    legs.push((a, d));
                }
                out.add_entry(legs, &ta.mul(tb)?);
            }
        }
        Ok(out)
    }

    /// `m ⊗ (I_p⊗1)` (left Leibniz factor).
    pub fn left_factor(m: &MatPoly) -> LiftTensor {
        let mut out = LiftTensor::zero(m.ctx, m.p, 2);
        let one = NCPoly::one(m.ctx);
        for r in 0..m.p {
            for s in 0..m.p {
                if m.entry(r, s).is_zero() {
                    continue;
                }
                for k in 0..m.p {
                    out.add_entry(
                        vec![(r as u8, s as u8), (k as u8, k as u8)],
                        &TensorPoly::of_polys(&[m.entry(r, s).clone(), one.clone()]),
                    );
                }
            }
        }
        out
    }

    /// `(I_p⊗1) ⊗ m` (right Leibniz factor).
    pub fn right_factor(m: &MatPoly) -> LiftTensor {
        let mut out = LiftTensor::zero(m.ctx, m.p, 2);
        let one = NCPoly::one(m.ctx);
        for r in 0..m.p {
            for s in 0..m.p {
                if m.entry(r, s).is_zero() {
                    continue;
                }
                for k in 0..m.p {
                    out.add_entry(
                        vec![(k as u8, k as u8), (r as u8, s as u8)],
                        &TensorPoly::of_polys(&[one.clone(), m.entry(r, s).clone()]),
                    );
                }
            }
        }
        out
    }

    /// Embed `m ⊗ m'` as an order-2 lift tensor.
    pub fn of_pair(a: &MatPoly, b: &MatPoly) -> LiftTensor {
        let mut out = LiftTensor::zero(a.ctx, a.p, 2);
        for r in 0..a.p {
            for s in 0..a.p {
                if a.entry(r, s).is_zero() {
                    continue;
                }
                for u in 0..b.p {
                    for v in 0..b.p {
                        if b.entry(u, v).is_zero() {
                            continue;
                        }
                        out.add_entry(
                            vec![(r as u8, s as u8), (u as u8, v as u8)],
                            &TensorPoly::of_polys(&[a.entry(r, s).clone(), b.entry(u, v).clone()]),
                        );
                    }
                }
            }
        }
        out
    }
}

/// The lifted comultiplication `∂: M_p(A) → M_p(A)⊗M_p(A)`.
pub fn lift_dq(lc: &LiftContext, m: &MatPoly) -> Result<LiftTensor> {
    if m.context() != lc.base {
        return Err(Error::Shape("matrix entries use the wrong context".into()));
    }
    let p = lc.p;
    let mut out = LiftTensor::zero(lc.base, p, 2);
    for r in 0..p {
        for s in 0..p {
            let a = m.entry(r, s);
            if a.is_zero() {
                continue;
            }
            let base = TensorPoly::from_poly(a);
            for i in 0..p {
                for j in 0..p {
                    let d = lc.partial_at_leg(i, j, &base, 0)?;
                    if d.is_zero() {
                        continue;
                    }
                    out.add_entry(vec![(r as u8, i as u8), (j as u8, s as u8)], &d);
                }
            }
        }
    }
    Ok(out)
}

/// Apply the lifted `∂` to one leg of an order-k lift tensor.
pub fn lift_at_leg(lc: &LiftContext, t: &LiftTensor, leg: usize) -> Result<LiftTensor> {
    let p = lc.p;
    let mut out = LiftTensor::zero(lc.base, p, t.order + 1);
    for (legs, tp) in &t.terms {
        let (r, s) = legs[leg];
        for i in 0..p {
            for j in 0..p {
                let d = lc.partial_at_leg(i, j, tp, leg)?;
                if d.is_zero() {
                    continue;
                }
                let mut new_legs = Vec::with_capacity(t.order + 1);
                new_legs.extend_from_slice(&legs[..leg]);
                new_legs.push((r, i as u8));
                new_legs.push((j as u8, s));
                new_legs.extend_from_slice(&legs[leg + 1..]);
                out.add_entry(new_legs, &d);
            }
        }
    }
    Ok(out)
}

/// Lift of `T ⊗ a` through either Δ-form, with the M_p⊗M_p factor computed
/// numerically in the kron representation.
pub fn lift_simple_via_delta(
    lc: &LiftContext,
    t_mat: &CMat,
    a: &NCPoly,
    left_form: bool,
) -> Result<LiftTensor> {
    let p = lc.p;
    let ip = linalg::identity(p);
    let base = TensorPoly::from_poly(a);
    let mut out = LiftTensor::zero(lc.base, p, 2);
    for i in 0..p {
        for j in 0..p {
            let d = lc.partial_at_leg(i, j, &base, 0)?;
            if d.is_zero() {
                continue;
            }
            let delta = lc.delta(i, j);
            let factor = if left_form {
                kron(t_mat, &ip) * &delta
            } else {
                &delta * kron(&ip, t_mat)
            };
            for a1 in 0..p {
                for b1 in 0..p {
                    for a2 in 0..p {
                        for b2 in 0..p {
                            let coeff = factor[(a1 * p + a2, b1 * p + b2)];
                            if coeff.norm() > 0.0 {
                                out.add_entry(
                                    vec![(a1 as u8, b1 as u8), (a2 as u8, b2 as u8)],
                                    &d.scale(coeff),
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The isomorphism `Φ: D⟨X⟩ → M_p(A)` with `D = M_p ⊗ B = M_{pq}` and
/// `X ↦ Σ_{ij} e_{ij} ⊗ X_{ij}`.
pub struct DxIso {
    lc: LiftContext,
    d_ctx: Context,
}

impl DxIso {
    pub fn new(lc: &LiftContext) -> Self {
        let d_ctx = Context::new(lc.p * lc.base.q, 1);
        DxIso {
            lc: LiftContext::new(lc.p, lc.base.q),
            d_ctx,
        }
    }

    /// One-variable context over the enlarged scalars `D = M_{pq}`.
    pub fn d_context(&self) -> Context {
        self.d_ctx
    }

    /// The image of the variable: `Y = Σ_{ij} e_{ij} ⊗ X_{ij}`.
    pub fn y_matrix(&self) -> MatPoly {
        let p = self.lc.p;
        let mut y = MatPoly::zero(self.lc.base, p);
        for i in 0..p {
            for j in 0..p {
                *y.entry_mut(i, j) =
                    NCPoly::var(self.lc.base, self.lc.var_index(i, j)).expect("in range");
            }
        }
        y
    }

    /// Image of a D-scalar matrix unit `e_{RS}`.
    fn d_unit(&self, r: usize, s: usize) -> MatPoly {
        let q = self.lc.base.q;
        MatPoly::simple(
            self.lc.base,
            self.lc.p,
            r / q,
            s / q,
            &NCPoly::unit_b(self.lc.base, r % q, s % q),
        )
    }

    /// Apply Φ to an element of `D⟨X⟩`.
    pub fn apply(&self, u: &NCPoly) -> Result<MatPoly> {
        if u.context() != self.d_ctx {
            return Err(Error::Shape("expected a one-variable D-polynomial".into()));
        }
        let y = self.y_matrix();
        let mut out = MatPoly::zero(self.lc.base, self.lc.p);
        for (w, &coeff) in u.terms() {
            let (r0, s0) = w.units[0];
            let mut acc = self.d_unit(r0 as usize, s0 as usize);
            for (k, _) in w.vars.iter().enumerate() {
                let (r, s) = w.units[k + 1];
                acc = acc.mul(&y)?.mul(&self.d_unit(r as usize, s as usize))?;
            }
            out = out.add(&acc.scale(coeff));
        }
        Ok(out)
    }

    /// Apply Φ⊗Φ to an order-2 tensor over `D⟨X⟩`.
    pub fn apply_tensor(&self, t: &TensorPoly) -> Result<LiftTensor> {
        assert_eq!(t.order(), 2);
        let mut out = LiftTensor::zero(self.lc.base, self.lc.p, 2);
        for (words, &coeff) in t.terms() {
            let a = self.apply(&NCPoly::monomial(
                self.d_ctx,
                linalg::ONE,
                &words[0].units,
                &words[0].vars,
            ))?;
            let b = self.apply(&NCPoly::monomial(
                self.d_ctx,
                linalg::ONE,
                &words[1].units,
                &words[1].vars,
            ))?;
            out = out.add(&LiftTensor::of_pair(&a, &b).scale(coeff));
        }
        Ok(out)
    }
}

/// Randomized suite for the lifted comultiplication and the `D⟨X⟩` isomorphism.
pub fn check_lift_laws(lc: &LiftContext, cfg: &SamplerConfig) -> Vec<LawReport> {
    let mut s = Sampler::new(cfg.seed);
    let ctx = lc.base;
    let p = lc.p;
    let int = cfg.integer_coeffs;
    let tol = if int && lc.transform.is_none() {
        0.0
    } else {
        1.0e-9
    };

    let mut intertwine = LawReport::new("lift.delta_intertwine", 0.0);
    let mut forms = LawReport::new("lift.delta_forms", tol);
    let mut leibniz = LawReport::new("lift.leibniz", tol);
    let mut coassoc = LawReport::new("lift.coassociativity", tol);
    let mut kernel = LawReport::new("lift.kernel", tol);
    let mut y_law = LawReport::new("lift.y_coproduct", 0.0);
    let mut iso_mul = LawReport::new("lift.iso_multiplicative", 0.0);
    let mut iso_int = LawReport::new("lift.iso_intertwines", 0.0);

    let iso = DxIso::new(lc);

    let random_matpoly = |s: &mut Sampler, deg: usize| {
        let mut m = MatPoly::zero(ctx, p);
        for i in 0..p {
            for j in 0..p {
                *m.entry_mut(i, j) = s.poly(ctx, deg, 2, int);
            }
        }
        m
    };

    for _ in 0..cfg.samples {
        let deg = cfg.max_degree.min(3);
        let m = random_matpoly(&mut s, deg);
        let n = random_matpoly(&mut s, deg);

        // (T ⊗ I_p)Δ_{ij} = Δ_{ij}(I_p ⊗ T)
        let t_mat = s.cmat(p, p, 1.0);
        let ip = linalg::identity(p);
        let mut worst: f64 = 0.0;
        for i in 0..p {
            for j in 0..p {
                let delta = lc.delta(i, j);
                worst = worst.max((kron(&t_mat, &ip) * &delta - &delta * kron(&ip, &t_mat)).norm());
            }
        }
        intertwine.record(worst, || format!("p={}", p));

        // both Δ-forms of the lift agree on simple tensors
        let a = s.poly(ctx, deg, 2, int);
        let lhs = lift_simple_via_delta(lc, &t_mat, &a, true).unwrap();
        let rhs = lift_simple_via_delta(lc, &t_mat, &a, false).unwrap();
        forms.record(lhs.sub(&rhs).l1_norm(), || format!("a={}", a));

        // ∂(MN) = (M⊗(I⊗1))·∂N + ∂M·((I⊗1)⊗N)
        let dmn = lift_dq(lc, &m.mul(&n).unwrap()).unwrap();
        let expected = LiftTensor::left_factor(&m)
            .mul(&lift_dq(lc, &n).unwrap())
            .unwrap()
            .add(
                &lift_dq(lc, &m)
                    .unwrap()
                    .mul(&LiftTensor::right_factor(&n))
                    .unwrap(),
            );
        leibniz.record(dmn.sub(&expected).l1_norm(), || format!("p={}", p));

        // (∂⊗id)∂ = (id⊗∂)∂ on M_p(A)
        let d = lift_dq(lc, &m).unwrap();
        let l = lift_at_leg(lc, &d, 0).unwrap();
        let r = lift_at_leg(lc, &d, 1).unwrap();
        coassoc.record(l.sub(&r).l1_norm(), || format!("p={}", p));

        // Ker ∂ = M_p ⊗ (∩ Ker ∂_{ij}); adding any variable letter leaves it
        let mut z = MatPoly::zero(ctx, p);
        for i in 0..p {
            for j in 0..p {
                *z.entry_mut(i, j) = s.scalar_poly(ctx, int);
            }
        }
        let in_kernel = lift_dq(lc, &z).unwrap().l1_norm();
        let spoiler = z.add(&MatPoly::simple(
            ctx,
            p,
            s.usize_in(0, p - 1),
            s.usize_in(0, p - 1),
            &NCPoly::var(ctx, s.usize_in(0, ctx.n_vars - 1)).unwrap(),
        ));
        let escaped = !lift_dq(lc, &spoiler).unwrap().is_zero();
        kernel.record(in_kernel + if escaped { 0.0 } else { 1.0 }, || {
            "scalar matrix with an added variable letter".into()
        });

        if lc.transform.is_none() {
            // ∂Y = (I_p⊗1)⊗(I_p⊗1)
            let y = iso.y_matrix();
            y_law.record(
                lift_dq(lc, &y)
                    .unwrap()
                    .sub(&LiftTensor::unit(ctx, p, 2))
                    .l1_norm(),
                || "Y".into(),
            );

            // Φ is multiplicative and intertwines the difference quotients
            let u = s.poly(iso.d_context(), deg, 2, int);
            let v = s.poly(iso.d_context(), deg, 2, int);
            let phi_uv = iso.apply(&u.mul(&v).unwrap()).unwrap();
            let phi_u_phi_v = iso.apply(&u).unwrap().mul(&iso.apply(&v).unwrap()).unwrap();
            iso_mul.record(phi_uv.sub(&phi_u_phi_v).l1_norm(), || format!("u={}", u));

            let lifted = lift_dq(lc, &iso.apply(&u).unwrap()).unwrap();
            let mapped = iso.apply_tensor(&partial_dq(0, &u).unwrap()).unwrap();
            iso_int.record(lifted.sub(&mapped).l1_norm(), || format!("u={}", u));
        }
    }

    let mut out = vec![intertwine, forms, leibniz, coassoc, kernel];
    if lc.transform.is_none() {
        out.push(y_law);
        out.push(iso_mul);
        out.push(iso_int);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::all_passed;

    #[test]
    fn lift_of_unit_tensor_variable_matrix() {
        // ∂(Σ e_{ij}⊗X_{ij}) = (I_p⊗1)⊗(I_p⊗1)
        for (p, q) in [(2usize, 1usize), (2, 2), (3, 1)] {
            let lc = LiftContext::new(p, q);
            let iso = DxIso::new(&lc);
            let y = iso.y_matrix();
            let got = lift_dq(&lc, &y).unwrap();
            assert_eq!(got, LiftTensor::unit(lc.base(), p, 2), "p={} q={}", p, q);
        }
    }

    #[test]
    fn lift_on_simple_tensor_matches_unit_expansion() {
        // ∂(e_{rs}⊗a) = Σ_{ij}(e_{ri}⊗e_{js})⊗∂_{ij}a
        let lc = LiftContext::new(2, 1);
        let ctx = lc.base();
        let a = NCPoly::var(ctx, 1).unwrap(); // X_{01} under row-major indexing
        let m = MatPoly::simple(ctx, 2, 1, 0, &a); // e_{10} ⊗ X_{01}
        let got = lift_dq(&lc, &m).unwrap();
        // only ∂_{01} hits: legs (e_{1,0}? -> (r,i)=(1,0)), ((j,s)=(1,0))
        let mut expect = LiftTensor::zero(ctx, 2, 2);
        expect.add_entry(vec![(1, 0), (1, 0)], &TensorPoly::unit(ctx, 2));
        assert_eq!(got, expect);
    }

    #[test]
    fn scalar_matrices_are_in_the_kernel() {
        let lc = LiftContext::new(2, 2);
        let ctx = lc.base();
        let mut z = MatPoly::zero(ctx, 2);
        *z.entry_mut(0, 1) = NCPoly::unit_b(ctx, 1, 0);
        *z.entry_mut(1, 1) = NCPoly::one(ctx);
        assert!(lift_dq(&lc, &z).unwrap().is_zero());
    }

    #[test]
    fn iso_fixes_scalars() {
        let lc = LiftContext::new(2, 1);
        let iso = DxIso::new(&lc);
        // d ∈ D maps to the same matrix over B: e_{01} of M_2 = M_p⊗B (q = 1)
        let d = NCPoly::unit_b(iso.d_context(), 0, 1);
        let m = iso.apply(&d).unwrap();
        assert_eq!(m.entry(0, 1), &NCPoly::one(lc.base()));
        assert!(m.entry(0, 0).is_zero());
        assert!(m.entry(1, 1).is_zero());
    }

    #[test]
    fn lift_suite_is_exact() {
        let lc = LiftContext::new(2, 1);
        let cfg = SamplerConfig {
            samples: 12,
            q: 1,
            n_vars: 4,
            max_degree: 3,
            ..SamplerConfig::default()
        };
        let reports = check_lift_laws(&lc, &cfg);
        assert!(all_passed(&reports), "{:#?}", reports);
        for r in &reports {
            assert_eq!(r.max_defect, 0.0, "{}", r.law);
        }
    }

    #[test]
    fn lift_suite_with_transform() {
        let lc = LiftContext::new(2, 1);
        let mut s = Sampler::new(9);
        let w = s.gl(4);
        let lc = lc.with_transform(w).unwrap();
        let cfg = SamplerConfig {
            samples: 8,
            q: 1,
            n_vars: 4,
            max_degree: 3,
            integer_coeffs: true,
            ..SamplerConfig::default()
        };
        let reports = check_lift_laws(&lc, &cfg);
        assert!(all_passed(&reports), "{:#?}", reports);
    }
}
