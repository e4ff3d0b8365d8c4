//! Seeded random generation of polynomials, matrices and test points.
//!
//! All law suites draw from a [`Sampler`] seeded through [`SamplerConfig`];
//! a fixed seed reproduces the exact sample sequence. Coefficients come from
//! `{±1, ±i, ±2, ±1±i}` in integer mode (laws that must hold with defect
//! exactly 0) or from complex Gaussians otherwise.

use nalgebra::DMatrix;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c, cond, cr, CMat, C64};
use crate::ncalg::{BasisWord, Context, NCPoly};

/// Knobs for the randomized law suites.
#[derive(Debug, Clone)]
pub struct SamplerConfig {
    pub seed: u64,
    pub samples: usize,
    pub q: usize,
    pub n_vars: usize,
    pub max_degree: usize,
    pub max_terms: usize,
    /// Draw coefficients from Gaussian integers so exact laws have defect 0.
    pub integer_coeffs: bool,
    /// Cap on matrix sizes m, n used by the matricial suites.
    pub max_size: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            seed: 0x5eed,
            samples: 50,
            q: 2,
            n_vars: 2,
            max_degree: 4,
            max_terms: 4,
            integer_coeffs: true,
            max_size: 3,
        }
    }
}

impl SamplerConfig {
    pub fn context(&self) -> Context {
        Context::new(self.q, self.n_vars)
    }

    pub fn sampler(&self) -> Sampler {
        Sampler::new(self.seed)
    }
}

/// Deterministic sample source (ChaCha8 keyed by the scenario seed).
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn usize_in(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        self.rng.gen_range(lo..=hi_inclusive)
    }

    pub fn f64_in(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    pub fn gaussian(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn complex_gaussian(&mut self) -> C64 {
        c(self.gaussian(), self.gaussian())
    }

    /// Coefficient draw per the configured mode.
    pub fn coeff(&mut self, integer: bool) -> C64 {
        if integer {
            const CHOICES: [(f64, f64); 8] = [
                (1.0, 0.0),
                (-1.0, 0.0),
                (0.0, 1.0),
                (0.0, -1.0),
                (2.0, 0.0),
                (-2.0, 0.0),
                (1.0, 1.0),
                (1.0, -1.0),
            ];
            let (re, im) = CHOICES[self.rng.gen_range(0..CHOICES.len())];
            c(re, im)
        } else {
            self.complex_gaussian().scale(0.5)
        }
    }

    pub fn word(&mut self, ctx: Context, max_degree: usize) -> BasisWord {
        let deg = self.rng.gen_range(0..=max_degree);
        let mut units = Vec::with_capacity(deg + 1);
        let mut vars = Vec::with_capacity(deg);
        for _ in 0..=deg {
            units.push((
                self.rng.gen_range(0..ctx.q) as u8,
                self.rng.gen_range(0..ctx.q) as u8,
            ));
        }
        for _ in 0..deg {
            vars.push(self.rng.gen_range(0..ctx.n_vars) as u8);
        }
        BasisWord::new(units, vars)
    }

    /// Random polynomial with bounded degree and term count.
    pub fn poly(
        &mut self,
        ctx: Context,
        max_degree: usize,
        max_terms: usize,
        integer: bool,
    ) -> NCPoly {
        let terms = self.rng.gen_range(1..=max_terms.max(1));
        let mut p = NCPoly::zero(ctx);
        for _ in 0..terms {
            let w = self.word(ctx, max_degree);
            let coeff = self.coeff(integer);
            p = p.add(&NCPoly::monomial(ctx, coeff, &w.units, &w.vars));
        }
        p
    }

    /// Random degree-0 polynomial (an element of B).
    pub fn scalar_poly(&mut self, ctx: Context, integer: bool) -> NCPoly {
        let mut p = NCPoly::zero(ctx);
        for r in 0..ctx.q {
            for s in 0..ctx.q {
                if self.rng.gen_bool(0.7) {
                    p = p.add(&NCPoly::monomial(
                        ctx,
                        self.coeff(integer),
                        &[(r as u8, s as u8)],
                        &[],
                    ));
                }
            }
        }
        p
    }

    /// Dense complex Gaussian matrix scaled by `scale`.
    pub fn cmat(&mut self, rows: usize, cols: usize, scale: f64) -> CMat {
        DMatrix::from_fn(rows, cols, |_, _| self.complex_gaussian().scale(scale))
    }

    /// Hermitian Gaussian matrix.
    pub fn hermitian(&mut self, n: usize, scale: f64) -> CMat {
        let a = self.cmat(n, n, scale);
        (&a + a.adjoint()).scale(0.5)
    }

    /// PSD matrix a·a*.
    pub fn psd(&mut self, n: usize, scale: f64) -> CMat {
        let a = self.cmat(n, n, scale);
        &a * a.adjoint()
    }

    /// Random vector as an n×1 matrix.
    pub fn vector(&mut self, n: usize) -> CMat {
        self.cmat(n, 1, 1.0)
    }

    /// Invertible complex matrix with condition number at most ~1e3.
    pub fn gl(&mut self, n: usize) -> CMat {
        loop {
            let m = self.cmat(n, n, 1.0) + CMat::identity(n, n).scale(0.3);
            if cond(&m) < 1.0e3 {
                return m;
            }
        }
    }

    /// Invertible matrix with entries in {−1, 0, 1, 2} (exact arithmetic draws).
    pub fn gl_integer(&mut self, n: usize) -> CMat {
        loop {
            let m = DMatrix::from_fn(n, n, |_, _| {
                cr(*[-1.0, 0.0, 0.0, 1.0, 1.0, 2.0]
                    .choose(&mut self.rng)
                    .unwrap())
            });
            let k = cond(&m);
            if k.is_finite() && k < 1.0e3 {
                return m;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let cfg = SamplerConfig::default();
        let ctx = cfg.context();
        let mut a = Sampler::new(17);
        let mut b = Sampler::new(17);
        for _ in 0..5 {
            assert_eq!(a.poly(ctx, 3, 3, true), b.poly(ctx, 3, 3, true));
        }
    }

    #[test]
    fn gl_is_invertible() {
        let mut s = Sampler::new(3);
        for n in 1..=4 {
            let m = s.gl(n);
            assert!(m.try_inverse().is_some());
        }
    }

    #[test]
    fn integer_coeffs_are_gaussian_integers() {
        let mut s = Sampler::new(5);
        for _ in 0..50 {
            let z = s.coeff(true);
            assert_eq!(z.re, z.re.round());
            assert_eq!(z.im, z.im.round());
        }
    }
}
