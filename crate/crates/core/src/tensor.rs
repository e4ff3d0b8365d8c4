//! Tensor powers `B⟨X⟩^{⊗k}` over the shared word basis.
//!
//! Order-k elements are coefficient maps over k-tuples of basis words. The
//! componentwise product `(u₁⊗…⊗u_k)(v₁⊗…⊗v_k) = u₁v₁⊗…⊗u_kv_k` makes each
//! tensor power an algebra; difference quotients land here and are iterated
//! by expanding one tensor leg at a time.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, C64};
use crate::ncalg::{BasisWord, Context, NCPoly, CANONICAL_EPS};

/// Element of the k-th tensor power with canonical coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorPoly {
    ctx: Context,
    order: usize,
    terms: BTreeMap<Vec<BasisWord>, C64>,
}

impl TensorPoly {
    pub fn zero(ctx: Context, order: usize) -> Self {
        assert!(order >= 1);
        TensorPoly {
            ctx,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_poly(p: &NCPoly) -> Self {
        let mut t = TensorPoly::zero(p.context(), 1);
        for (w, &coeff) in p.terms() {
            t.add_term(vec![w.clone()], coeff);
        }
        t
    }

    /// `1⊗…⊗1` of the given order.
    pub fn unit(ctx: Context, order: usize) -> Self {
        let mut t = TensorPoly::from_poly(&NCPoly::one(ctx));
        for _ in 1..order {
            t = t.tensor(&TensorPoly::from_poly(&NCPoly::one(ctx)));
        }
        t
    }

    /// Tensor product of polynomials, in order.
    pub fn of_polys(factors: &[NCPoly]) -> Self {
        assert!(!factors.is_empty());
        let mut t = TensorPoly::from_poly(&factors[0]);
        for p in &factors[1..] {
            t = t.tensor(&TensorPoly::from_poly(p));
        }
        t
    }

    pub fn context(&self) -> Context {
        self.ctx
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<BasisWord>, &C64)> {
        self.terms.iter()
    }

    /// Sum of coefficient magnitudes of the canonical form.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    pub(crate) fn add_term(&mut self, words: Vec<BasisWord>, coeff: C64) {
        use std::collections::btree_map::Entry;
        debug_assert_eq!(words.len(), self.order);
        match self.terms.entry(words) {
            Entry::Vacant(slot) => {
                if coeff.norm() >= CANONICAL_EPS {
                    slot.insert(coeff);
                }
            }
            Entry::Occupied(mut slot) => {
                let updated = *slot.get() + coeff;
                if updated.norm() < CANONICAL_EPS {
                    slot.remove();
                } else {
                    *slot.get_mut() = updated;
                }
            }
        }
    }

    pub fn add(&self, other: &TensorPoly) -> TensorPoly {
        assert_eq!(self.ctx, other.ctx);
        assert_eq!(self.order, other.order);
        let mut out = self.clone();
        for (w, &coeff) in &other.terms {
            out.add_term(w.clone(), coeff);
        }
        out
    }

    pub fn sub(&self, other: &TensorPoly) -> TensorPoly {
        self.add(&other.scale(linalg::c(-1.0, 0.0)))
    }

    pub fn scale(&self, factor: C64) -> TensorPoly {
        let mut out = TensorPoly::zero(self.ctx, self.order);
        for (w, &coeff) in &self.terms {
            out.add_term(w.clone(), coeff * factor);
        }
        out
    }

    /// Componentwise algebra product; orders must agree.
    pub fn mul(&self, other: &TensorPoly) -> Result<TensorPoly> {
        self.ctx.check_matches(&other.ctx)?;
        if self.order != other.order {
            return Err(Error::Shape(format!(
                "tensor order mismatch: {} vs {}",
                self.order, other.order
            )));
        }
        let mut out = TensorPoly::zero(self.ctx, self.order);
        for (wa, &ca) in &self.terms {
            'next: for (wb, &cb) in &other.terms {
                let mut words = Vec::with_capacity(self.order);
                for (a, b) in wa.iter().zip(wb) {
                    match a.concat(b) {
                        Some(w) => words.push(w),
                        None => continue 'next,
                    }
                }
                out.add_term(words, ca * cb);
            }
        }
        Ok(out)
    }

    /// Tensor product, concatenating legs.
    pub fn tensor(&self, other: &TensorPoly) -> TensorPoly {
        assert_eq!(self.ctx, other.ctx);
        let mut out = TensorPoly::zero(self.ctx, self.order + other.order);
        for (wa, &ca) in &self.terms {
            for (wb, &cb) in &other.terms {
                let mut words = wa.clone();
                words.extend(wb.iter().cloned());
                out.add_term(words, ca * cb);
            }
        }
        out
    }

    /// Componentwise star with conjugated coefficients (no leg swap).
    pub fn star_each(&self) -> TensorPoly {
        let mut out = TensorPoly::zero(self.ctx, self.order);
        for (w, &coeff) in &self.terms {
            out.add_term(w.iter().map(BasisWord::star).collect(), coeff.conj());
        }
        out
    }

    /// σ₁₂: swap the first two legs.
    pub fn swap_first_two(&self) -> TensorPoly {
        assert!(self.order >= 2);
        let mut out = TensorPoly::zero(self.ctx, self.order);
        for (w, &coeff) in &self.terms {
            let mut words = w.clone();
            words.swap(0, 1);
            out.add_term(words, coeff);
        }
        out
    }

    /// Total-degree truncation (sum of leg degrees ≤ max_total).
    pub fn truncate_total(&self, max_total: usize) -> TensorPoly {
        let mut out = TensorPoly::zero(self.ctx, self.order);
        for (w, &coeff) in &self.terms {
            let total: usize = w.iter().map(BasisWord::degree).sum();
            if total <= max_total {
                out.add_term(w.clone(), coeff);
            }
        }
        out
    }

    /// Apply the partial difference quotient `∂_var` to one leg, raising the
    /// order by one: the leg `b₀X…b_m` splits at each occurrence of `X_var`.
    pub fn apply_partial_at_leg(&self, var: usize, leg: usize) -> Result<TensorPoly> {
        if var >= self.ctx.n_vars {
            return Err(Error::VarIndex(var, self.ctx.n_vars));
        }
        assert!(leg < self.order);
        let mut out = TensorPoly::zero(self.ctx, self.order + 1);
        for (w, &coeff) in &self.terms {
            let word = &w[leg];
            for (t, &v) in word.vars.iter().enumerate() {
                if v as usize != var {
                    continue;
                }
                let mut words = Vec::with_capacity(self.order + 1);
                words.extend_from_slice(&w[..leg]);
                words.push(word.prefix(t));
                words.push(word.suffix(t));
                words.extend_from_slice(&w[leg + 1..]);
                out.add_term(words, coeff);
            }
        }
        Ok(out)
    }

    /// `Σ_j (id⊗…⊗L⊗…⊗id)` with the grading `L = id + deg` on each leg.
    pub fn grade_sum(&self) -> TensorPoly {
        let mut out = TensorPoly::zero(self.ctx, self.order);
        for (w, &coeff) in &self.terms {
            let factor: usize = w.iter().map(|word| 1 + word.degree()).sum();
            out.add_term(w.clone(), coeff * linalg::cr(factor as f64));
        }
        out
    }
}

impl fmt::Display for TensorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (words, coeff)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.4}{:+.4}i)·[", coeff.re, coeff.im)?;
            for (j, w) in words.iter().enumerate() {
                if j > 0 {
                    write!(f, " ⊗ ")?;
                }
                write!(f, "{}", w)?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cr, ONE};

    #[test]
    fn componentwise_product_contracts_each_leg() {
        let ctx = Context::new(2, 1);
        let a = TensorPoly::of_polys(&[NCPoly::unit_b(ctx, 0, 1), NCPoly::unit_b(ctx, 0, 0)]);
        let b = TensorPoly::of_polys(&[NCPoly::unit_b(ctx, 1, 0), NCPoly::unit_b(ctx, 0, 1)]);
        let ab = a.mul(&b).unwrap();
        let expect = TensorPoly::of_polys(&[NCPoly::unit_b(ctx, 0, 0), NCPoly::unit_b(ctx, 0, 1)]);
        assert_eq!(ab, expect);
        // mismatched middle indices kill the term
        let c = TensorPoly::of_polys(&[NCPoly::unit_b(ctx, 0, 1), NCPoly::unit_b(ctx, 1, 1)]);
        assert!(a.mul(&c).unwrap().is_zero());
    }

    #[test]
    fn unit_tensor_is_neutral() {
        let ctx = Context::new(2, 2);
        let one = TensorPoly::unit(ctx, 2);
        let x = NCPoly::var(ctx, 0).unwrap();
        let t = TensorPoly::of_polys(&[x.clone(), x]);
        assert_eq!(one.mul(&t).unwrap(), t);
        assert_eq!(t.mul(&one).unwrap(), t);
    }

    #[test]
    fn partial_on_a_leg_splits_words() {
        let ctx = Context::new(1, 1);
        let x = NCPoly::var(ctx, 0).unwrap();
        let x2 = x.mul(&x).unwrap();
        let t = TensorPoly::from_poly(&x2);
        let dt = t.apply_partial_at_leg(0, 0).unwrap();
        // ∂(X²) = 1⊗X + X⊗1
        let one = NCPoly::one(ctx);
        let expect =
            TensorPoly::of_polys(&[one.clone(), x.clone()]).add(&TensorPoly::of_polys(&[x, one]));
        assert_eq!(dt, expect);
    }

    #[test]
    fn grade_sum_counts_legs_and_degrees() {
        let ctx = Context::new(1, 1);
        let x = NCPoly::var(ctx, 0).unwrap();
        let one = NCPoly::one(ctx);
        let t = TensorPoly::of_polys(&[one, x]); // degrees 0 and 1 → factor 1 + 2
        assert_eq!(t.grade_sum(), t.scale(cr(3.0)));
    }

    #[test]
    fn truncation_drops_high_total_degree() {
        let ctx = Context::new(1, 1);
        let x = NCPoly::var(ctx, 0).unwrap();
        let x2 = x.mul(&x).unwrap();
        let t = TensorPoly::of_polys(&[x.clone(), x2]); // total degree 3
        assert!(t.truncate_total(2).is_zero());
        assert_eq!(t.truncate_total(3), t);
        let _ = ONE;
    }
}
