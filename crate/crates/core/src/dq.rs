//! Partial free difference quotients and the coalgebra law suite.
//!
//! `∂_i` is the derivation-comultiplication with `∂_i X_j = δ_{ij} 1⊗1` and
//! `∂_i B = 0`: on a monomial it sums prefix⊗suffix splits at every
//! occurrence of `X_i`. [`check_gdq_laws`] exercises coassociativity, the
//! Leibniz rule, mixed compatibility of the partials, the grading laws, the
//! involution laws and the recovery identities for the word embedding
//! [`psi_embed`], all with defect 0 on integer-coefficient draws.

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::ncalg::NCPoly;
use crate::report::LawReport;
use crate::sampler::SamplerConfig;
use crate::tensor::TensorPoly;

/// `∂_i p` as an order-2 tensor.
pub fn partial_dq(var: usize, p: &NCPoly) -> Result<TensorPoly> {
    TensorPoly::from_poly(p).apply_partial_at_leg(var, 0)
}

/// `Σ_i λ_i ∂_i p`; any complex weights.
pub fn combo_dq(weights: &[C64], p: &NCPoly) -> Result<TensorPoly> {
    let ctx = p.context();
    if weights.len() != ctx.n_vars {
        return Err(Error::Shape(format!(
            "expected {} weights, got {}",
            ctx.n_vars,
            weights.len()
        )));
    }
    let mut acc = TensorPoly::zero(ctx, 2);
    for (i, &w) in weights.iter().enumerate() {
        acc = acc.add(&partial_dq(i, p)?.scale(w));
    }
    Ok(acc)
}

/// Iterated coproduct `∂^{(k)} = (∂_i ⊗ id_{k−1}) ∘ ∂^{(k−1)}`, order k+1.
pub fn iterate_dq(k: usize, var: usize, p: &NCPoly) -> Result<TensorPoly> {
    assert!(k >= 1, "iterate order must be positive");
    let mut t = partial_dq(var, p)?;
    for _ in 1..k {
        t = t.apply_partial_at_leg(var, 0)?;
    }
    Ok(t)
}

/// Word embedding `ψ_k(n₀⊗…⊗n_k) = n₀ X_i n₁ X_i … n_k` for factors in
/// `N = Ker ∂` (variable degree zero).
pub fn psi_embed(factors: &[NCPoly], var: usize) -> Result<NCPoly> {
    assert!(!factors.is_empty());
    let ctx = factors[0].context();
    let x = NCPoly::var(ctx, var)?;
    let mut acc = factors[0].clone();
    if acc.x_degree() > 0 {
        return Err(Error::FactorNotScalar);
    }
    for f in &factors[1..] {
        if f.x_degree() > 0 {
            return Err(Error::FactorNotScalar);
        }
        acc = acc.mul(&x)?.mul(f)?;
    }
    Ok(acc)
}

/// Apply `Σ_i λ_i ∂_i` to one tensor leg.
fn combo_at_leg(weights: &[C64], t: &TensorPoly, leg: usize) -> Result<TensorPoly> {
    let mut acc = TensorPoly::zero(t.context(), t.order() + 1);
    for (i, &w) in weights.iter().enumerate() {
        acc = acc.add(&t.apply_partial_at_leg(i, leg)?.scale(w));
    }
    Ok(acc)
}

fn leibniz_defect(
    dq: impl Fn(&NCPoly) -> Result<TensorPoly>,
    p: &NCPoly,
    r: &NCPoly,
) -> Result<f64> {
    let ctx = p.context();
    let one = NCPoly::one(ctx);
    let lhs = dq(&p.mul(r)?)?;
    let t1 = dq(p)?.mul(&TensorPoly::of_polys(&[one.clone(), r.clone()]))?;
    let t2 = TensorPoly::of_polys(&[p.clone(), one]).mul(&dq(r)?)?;
    Ok(lhs.sub(&t1.add(&t2)).l1_norm())
}

/// Run the full GDQ/grading/involution/recovery suite.
pub fn check_gdq_laws(cfg: &SamplerConfig) -> Vec<LawReport> {
    let ctx = cfg.context();
    let mut s = cfg.sampler();
    let int = cfg.integer_coeffs;
    let tol = if int { 0.0 } else { 1.0e-9 };

    let mut coassoc = LawReport::new("gdq.coassociativity", tol);
    let mut leibniz = LawReport::new("gdq.leibniz", tol);
    let mut compat = LawReport::new("gdq.mixed_compatibility", tol);
    let mut grade_der = LawReport::new("gdq.grading_derivation", tol);
    let mut grade_coder = LawReport::new("gdq.grading_coderivation", tol);
    let mut inv_algebra = LawReport::new("gdq.involution_algebra", tol);
    let mut inv_coprod = LawReport::new("gdq.involution_comultiplication", tol);
    let mut inv_grading = LawReport::new("gdq.involution_grading", tol);
    let mut combo_coassoc = LawReport::new("gdq.combo_coassociativity", tol);
    let mut combo_leibniz = LawReport::new("gdq.combo_leibniz", tol);
    let mut recovery = LawReport::new("gdq.recovery_identity", tol);
    let mut vanishing = LawReport::new("gdq.recovery_vanishing", tol);

    for _ in 0..cfg.samples {
        let p = s.poly(ctx, cfg.max_degree, cfg.max_terms, int);
        let r = s.poly(ctx, cfg.max_degree, cfg.max_terms, int);
        let i = s.usize_in(0, ctx.n_vars - 1);
        let j = s.usize_in(0, ctx.n_vars - 1);

        let witness = || format!("i={}, p={}, r={}", i + 1, p, r);

        // (∂⊗id)∂ = (id⊗∂)∂
        let d = partial_dq(i, &p).unwrap();
        let lhs = d.apply_partial_at_leg(i, 0).unwrap();
        let rhs = d.apply_partial_at_leg(i, 1).unwrap();
        coassoc.record(lhs.sub(&rhs).l1_norm(), witness);

        leibniz.record(
            leibniz_defect(|u| partial_dq(i, u), &p, &r).unwrap(),
            witness,
        );

        // (∂_i⊗id)∂_j = (id⊗∂_j)∂_i
        let a = partial_dq(j, &p)
            .unwrap()
            .apply_partial_at_leg(i, 0)
            .unwrap();
        let b = partial_dq(i, &p)
            .unwrap()
            .apply_partial_at_leg(j, 1)
            .unwrap();
        compat.record(a.sub(&b).l1_norm(), || {
            format!("i={}, j={}, p={}", i + 1, j + 1, p)
        });

        // L1: grade − id is a derivation
        let lp = p.grade().sub(&p);
        let lr = r.grade().sub(&r);
        let pr = p.mul(&r).unwrap();
        let l1 = pr
            .grade()
            .sub(&pr)
            .sub(&lp.mul(&r).unwrap())
            .sub(&p.mul(&lr).unwrap());
        grade_der.record(l1.l1_norm(), witness);

        // L2: ∂∘L = (L⊗id + id⊗L)∘∂
        let l2 = partial_dq(i, &p.grade())
            .unwrap()
            .sub(&partial_dq(i, &p).unwrap().grade_sum());
        grade_coder.record(l2.l1_norm(), witness);

        // I1: involutive, antimultiplicative, conjugate-linear
        let c = s.coeff(int);
        let i1 = p.star().star().sub(&p).l1_norm()
            + pr.star().sub(&r.star().mul(&p.star()).unwrap()).l1_norm()
            + p.scale(c).star().sub(&p.star().scale(c.conj())).l1_norm();
        inv_algebra.record(i1, witness);

        // I2: ∂(p*) = σ₁₂((∂p)*)
        let i2 = partial_dq(i, &p.star())
            .unwrap()
            .sub(&partial_dq(i, &p).unwrap().star_each().swap_first_two());
        inv_coprod.record(i2.l1_norm(), witness);

        // I3: L(p*) = (Lp)*
        inv_grading.record(p.star().grade().sub(&p.grade().star()).l1_norm(), witness);

        // a weighted combination of the partials is again a comultiplication-derivation
        let weights: Vec<C64> = (0..ctx.n_vars).map(|_| s.coeff(int)).collect();
        let dw = combo_dq(&weights, &p).unwrap();
        let ca = combo_at_leg(&weights, &dw, 0).unwrap();
        let cb = combo_at_leg(&weights, &dw, 1).unwrap();
        combo_coassoc.record(ca.sub(&cb).l1_norm(), witness);
        combo_leibniz.record(
            leibniz_defect(|u| combo_dq(&weights, u), &p, &r).unwrap(),
            witness,
        );

        // ∂^{(k)}∘ψ_k = id and ∂^{(k)}∘ψ_l = 0 for l < k ≤ 4
        let var = s.usize_in(0, ctx.n_vars - 1);
        let k = s.usize_in(1, 4);
        let factors: Vec<NCPoly> = (0..=k).map(|_| s.scalar_poly(ctx, int)).collect();
        let embedded = psi_embed(&factors, var).unwrap();
        let recovered = iterate_dq(k, var, &embedded).unwrap();
        let target = TensorPoly::of_polys(&factors);
        recovery.record(recovered.sub(&target).l1_norm(), || {
            format!("k={}, var={}", k, var + 1)
        });
        let l = s.usize_in(0, k - 1);
        let shorter: Vec<NCPoly> = (0..=l).map(|_| s.scalar_poly(ctx, int)).collect();
        let low = psi_embed(&shorter, var).unwrap();
        vanishing.record(iterate_dq(k, var, &low).unwrap().l1_norm(), || {
            format!("k={}, l={}, var={}", k, l, var + 1)
        });
    }

    vec![
        coassoc,
        leibniz,
        compat,
        grade_der,
        grade_coder,
        inv_algebra,
        inv_coprod,
        inv_grading,
        combo_coassoc,
        combo_leibniz,
        recovery,
        vanishing,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cr, ONE, ZERO};
    use crate::ncalg::Context;
    use crate::report::all_passed;

    #[test]
    fn partial_kills_scalars_and_foreign_variables() {
        let ctx = Context::new(2, 2);
        let b = NCPoly::unit_b(ctx, 0, 1);
        assert!(partial_dq(0, &b).unwrap().is_zero());
        let x1 = NCPoly::var(ctx, 0).unwrap();
        assert!(partial_dq(1, &x1).unwrap().is_zero());
        assert_eq!(partial_dq(0, &x1).unwrap(), TensorPoly::unit(ctx, 2));
    }

    #[test]
    fn partial_splits_two_letter_word() {
        // ∂(X b X) = 1⊗bX + Xb⊗1
        let ctx = Context::new(2, 1);
        let x = NCPoly::var(ctx, 0).unwrap();
        let b = NCPoly::unit_b(ctx, 0, 1);
        let p = x.mul(&b).unwrap().mul(&x).unwrap();
        let one = NCPoly::one(ctx);
        let expect = TensorPoly::of_polys(&[one.clone(), b.mul(&x).unwrap()])
            .add(&TensorPoly::of_polys(&[x.mul(&b).unwrap(), one]));
        assert_eq!(partial_dq(0, &p).unwrap(), expect);
    }

    #[test]
    fn combo_is_the_weighted_sum() {
        let ctx = Context::new(1, 2);
        let p = NCPoly::var(ctx, 0)
            .unwrap()
            .add(&NCPoly::var(ctx, 1).unwrap());
        let both = combo_dq(&[ONE, ONE], &p).unwrap();
        assert_eq!(both, TensorPoly::unit(ctx, 2).scale(cr(2.0)));
        assert!(combo_dq(&[ZERO, ZERO], &p).unwrap().is_zero());
        // weights (2,0) on X₁bX₁ double the single-variable coproduct
        let ctx1 = Context::new(2, 2);
        let x = NCPoly::var(ctx1, 0).unwrap();
        let b = NCPoly::unit_b(ctx1, 1, 1);
        let w = x.mul(&b).unwrap().mul(&x).unwrap();
        let scaled = combo_dq(&[cr(2.0), ZERO], &w).unwrap();
        assert_eq!(scaled, partial_dq(0, &w).unwrap().scale(cr(2.0)));
    }

    #[test]
    fn second_iterate_of_the_cube() {
        // ∂^{(2)}(X³) = 1⊗1⊗X + 1⊗X⊗1 + X⊗1⊗1 (expanded by definition)
        let ctx = Context::new(1, 1);
        let x = NCPoly::var(ctx, 0).unwrap();
        let x3 = x.mul(&x).unwrap().mul(&x).unwrap();
        let got = iterate_dq(2, 0, &x3).unwrap();
        let one = NCPoly::one(ctx);
        let expect = TensorPoly::of_polys(&[one.clone(), one.clone(), x.clone()])
            .add(&TensorPoly::of_polys(&[
                one.clone(),
                x.clone(),
                one.clone(),
            ]))
            .add(&TensorPoly::of_polys(&[x, one.clone(), one]));
        assert_eq!(got, expect);
    }

    #[test]
    fn second_iterate_kills_degree_one() {
        let ctx = Context::new(2, 1);
        let p = NCPoly::unit_b(ctx, 0, 0)
            .mul(&NCPoly::var(ctx, 0).unwrap())
            .unwrap()
            .mul(&NCPoly::unit_b(ctx, 1, 1))
            .unwrap();
        assert!(iterate_dq(2, 0, &p).unwrap().is_zero());
        assert_eq!(iterate_dq(1, 0, &p).unwrap(), partial_dq(0, &p).unwrap());
    }

    #[test]
    fn psi_recovers_and_degree_guard_fires() {
        let ctx = Context::new(2, 1);
        let b = NCPoly::unit_b(ctx, 0, 1);
        let b2 = NCPoly::unit_b(ctx, 1, 1);
        // ψ₁(b,b') = bXb' and ∂(bXb') = b⊗b'
        let w = psi_embed(&[b.clone(), b2.clone()], 0).unwrap();
        assert_eq!(
            partial_dq(0, &w).unwrap(),
            TensorPoly::of_polys(&[b.clone(), b2.clone()])
        );
        // ψ₀(b) = b
        assert_eq!(psi_embed(&[b.clone()], 0).unwrap(), b);
        // ∂^{(2)}∘ψ₁ = 0
        assert!(iterate_dq(2, 0, &w).unwrap().is_zero());
        let x = NCPoly::var(ctx, 0).unwrap();
        assert!(matches!(psi_embed(&[b, x], 0), Err(Error::FactorNotScalar)));
    }

    #[test]
    fn involution_coproduct_identity_hand_case() {
        // p = e01·X1: ∂(p*) and σ₁₂((∂p)*) both equal 1⊗e10.
        let ctx = Context::new(2, 1);
        let p = NCPoly::unit_b(ctx, 0, 1)
            .mul(&NCPoly::var(ctx, 0).unwrap())
            .unwrap();
        let lhs = partial_dq(0, &p.star()).unwrap();
        let rhs = partial_dq(0, &p).unwrap().star_each().swap_first_two();
        let expect = TensorPoly::of_polys(&[NCPoly::one(ctx), NCPoly::unit_b(ctx, 1, 0)]);
        assert_eq!(lhs, expect);
        assert_eq!(rhs, expect);
    }

    #[test]
    fn compatibility_hand_case() {
        // both orders on X₁X₂ give 1⊗1⊗1
        let ctx = Context::new(1, 2);
        let p = NCPoly::var(ctx, 0)
            .unwrap()
            .mul(&NCPoly::var(ctx, 1).unwrap())
            .unwrap();
        let a = partial_dq(1, &p)
            .unwrap()
            .apply_partial_at_leg(0, 0)
            .unwrap();
        let b = partial_dq(0, &p)
            .unwrap()
            .apply_partial_at_leg(1, 1)
            .unwrap();
        assert_eq!(a, TensorPoly::unit(ctx, 3));
        assert_eq!(b, TensorPoly::unit(ctx, 3));
    }

    #[test]
    fn law_suite_is_exact_on_integer_draws() {
        let cfg = SamplerConfig {
            samples: 40,
            ..SamplerConfig::default()
        };
        let reports = check_gdq_laws(&cfg);
        assert!(all_passed(&reports), "{:#?}", reports);
        for r in &reports {
            assert_eq!(r.max_defect, 0.0, "{}", r.law);
        }
    }
}
