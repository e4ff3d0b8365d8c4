//! Canonical-form arithmetic for `B⟨X₁…Xₙ⟩` with `B = M_q(ℂ)`.
//!
//! A monomial `b₀X_{i₁}b₁ … X_{i_m}b_m` with all `b_j` matrix units is a
//! [`BasisWord`]; because `e_{rs}e_{tu} = δ_{st}e_{ru}`, the words form a
//! genuine linear basis and multiplication is δ-concatenation. Polynomials
//! are finitely supported coefficient maps over that basis, kept canonical
//! by dropping coefficients below [`CANONICAL_EPS`].

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, c, kron, unit_matrix, CMat, C64};

/// Coefficients with magnitude below this are dropped during canonicalization.
pub const CANONICAL_EPS: f64 = 1.0e-14;

/// Ambient algebra data: scalar algebra `M_q(ℂ)` and the number of variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Context {
    pub q: usize,
    pub n_vars: usize,
}

impl Context {
    pub fn new(q: usize, n_vars: usize) -> Self {
        assert!((1..=255).contains(&q), "scalar algebra size out of range");
        assert!(n_vars <= 255, "variable count out of range");
        Context { q, n_vars }
    }

    fn describe(&self) -> String {
        format!("q={}, n={}", self.q, self.n_vars)
    }

    pub(crate) fn check_matches(&self, other: &Context) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ContextMismatch(self.describe(), other.describe()))
        }
    }
}

/// Alternating word `(β₀, i₁, β₁, …, i_m, β_m)`: matrix-unit index pairs
/// interleaved with variable indices, beginning and ending with a unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisWord {
    /// m+1 matrix-unit index pairs (0-based).
    pub units: Vec<(u8, u8)>,
    /// m variable indices (0-based).
    pub vars: Vec<u8>,
}

impl BasisWord {
    pub fn new(units: Vec<(u8, u8)>, vars: Vec<u8>) -> Self {
        assert_eq!(units.len(), vars.len() + 1, "malformed basis word");
        BasisWord { units, vars }
    }

    /// Degree-0 word: a single matrix unit e_{rs}.
    pub fn scalar(r: u8, s: u8) -> Self {
        BasisWord {
            units: vec![(r, s)],
            vars: Vec::new(),
        }
    }

    /// Number of variable letters.
    pub fn degree(&self) -> usize {
        self.vars.len()
    }

    /// δ-concatenation: `(…e_{rs})·(e_{tu}…)` is a word iff s = t.
    pub fn concat(&self, other: &BasisWord) -> Option<BasisWord> {
        let (r, s) = *self.units.last().unwrap();
        let (t, u) = other.units[0];
        if s != t {
            return None;
        }
        let mut units = self.units[..self.units.len() - 1].to_vec();
        units.push((r, u));
        units.extend_from_slice(&other.units[1..]);
        let mut vars = self.vars.clone();
        vars.extend_from_slice(&other.vars);
        Some(BasisWord { units, vars })
    }

    /// `(b₀X_{i₁}…X_{i_m}b_m)* = b_m* X_{i_m} … X_{i₁} b₀*` with `e_{rs}* = e_{sr}`.
    pub fn star(&self) -> BasisWord {
        let units = self.units.iter().rev().map(|&(r, s)| (s, r)).collect();
        let vars = self.vars.iter().rev().cloned().collect();
        BasisWord { units, vars }
    }

    /// Left piece `(β₀,…,β_t)` up to (excluding) the variable at position t.
    pub fn prefix(&self, t: usize) -> BasisWord {
        BasisWord {
            units: self.units[..=t].to_vec(),
            vars: self.vars[..t].to_vec(),
        }
    }

    /// Right piece `(β_{t+1},…,β_m)` after the variable at position t.
    pub fn suffix(&self, t: usize) -> BasisWord {
        BasisWord {
            units: self.units[t + 1..].to_vec(),
            vars: self.vars[t + 1..].to_vec(),
        }
    }
}

impl PartialOrd for BasisWord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BasisWord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.vars.cmp(&other.vars))
            .then_with(|| self.units.cmp(&other.units))
    }
}

impl fmt::Display for BasisWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}{}", self.units[0].0, self.units[0].1)?;
        for (k, v) in self.vars.iter().enumerate() {
            let (r, s) = self.units[k + 1];
            write!(f, " X{} e{}{}", v + 1, r, s)?;
        }
        Ok(())
    }
}

/// Element of `B⟨X₁…Xₙ⟩` in canonical form over the word basis.
#[derive(Debug, Clone, PartialEq)]
pub struct NCPoly {
    ctx: Context,
    terms: BTreeMap<BasisWord, C64>,
}

impl NCPoly {
    pub fn zero(ctx: Context) -> Self {
        NCPoly {
            ctx,
            terms: BTreeMap::new(),
        }
    }

    /// The unit `1 = Σ_r e_{rr}`.
    pub fn one(ctx: Context) -> Self {
        let mut p = NCPoly::zero(ctx);
        for r in 0..ctx.q as u8 {
            p.add_term(BasisWord::scalar(r, r), linalg::ONE);
        }
        p
    }

    pub fn scalar(ctx: Context, value: C64) -> Self {
        NCPoly::one(ctx).scale(value)
    }

    /// The matrix unit `e_{rs}` (0-based indices).
    pub fn unit_b(ctx: Context, r: usize, s: usize) -> Self {
        assert!(r < ctx.q && s < ctx.q);
        let mut p = NCPoly::zero(ctx);
        p.add_term(BasisWord::scalar(r as u8, s as u8), linalg::ONE);
        p
    }

    /// The variable `X_i = Σ_{r,s} e_{rr} X_i e_{ss}` (0-based index).
    pub fn var(ctx: Context, i: usize) -> Result<Self> {
        if i >= ctx.n_vars {
            return Err(Error::VarIndex(i, ctx.n_vars));
        }
        let mut p = NCPoly::zero(ctx);
        for r in 0..ctx.q as u8 {
            for s in 0..ctx.q as u8 {
                p.add_term(
                    BasisWord::new(vec![(r, r), (s, s)], vec![i as u8]),
                    linalg::ONE,
                );
            }
        }
        Ok(p)
    }

    /// Single monomial `c · b₀X…b_m` from explicit word data (0-based).
    pub fn monomial(ctx: Context, coeff: C64, units: &[(u8, u8)], vars: &[u8]) -> Self {
        let mut p = NCPoly::zero(ctx);
        p.add_term(BasisWord::new(units.to_vec(), vars.to_vec()), coeff);
        p
    }

    /// Embed a q×q matrix as an element of B.
    pub fn from_b_matrix(ctx: Context, b: &CMat) -> Result<Self> {
        if b.nrows() != ctx.q || b.ncols() != ctx.q {
            return Err(Error::Shape(format!(
                "expected {0}x{0} scalar, got {1}x{2}",
                ctx.q,
                b.nrows(),
                b.ncols()
            )));
        }
        let mut p = NCPoly::zero(ctx);
        for r in 0..ctx.q {
            for s in 0..ctx.q {
                p.add_term(BasisWord::scalar(r as u8, s as u8), b[(r, s)]);
            }
        }
        Ok(p)
    }

    /// Coefficient matrix of a degree-0 polynomial as a q×q matrix.
    pub fn to_b_matrix(&self) -> Result<CMat> {
        if self.x_degree() > 0 {
            return Err(Error::FactorNotScalar);
        }
        let mut m = CMat::zeros(self.ctx.q, self.ctx.q);
        for (w, &coeff) in &self.terms {
            let (r, s) = w.units[0];
            m[(r as usize, s as usize)] += coeff;
        }
        Ok(m)
    }

    pub fn context(&self) -> Context {
        self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisWord, &C64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximal variable degree over the support (0 for the zero polynomial).
    pub fn x_degree(&self) -> usize {
        self.terms.keys().map(|w| w.degree()).max().unwrap_or(0)
    }

    /// Sum of coefficient magnitudes; the defect norm of the symbolic layer.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    /// Drop all terms of variable degree above `max_degree`.
    pub fn truncate_degree(&self, max_degree: usize) -> NCPoly {
        let mut out = NCPoly::zero(self.ctx);
        for (w, &coeff) in &self.terms {
            if w.degree() <= max_degree {
                out.add_term(w.clone(), coeff);
            }
        }
        out
    }

    pub(crate) fn add_term(&mut self, word: BasisWord, coeff: C64) {
        use std::collections::btree_map::Entry;
        debug_assert!(word
            .units
            .iter()
            .all(|&(r, s)| (r as usize) < self.ctx.q && (s as usize) < self.ctx.q));
        debug_assert!(word.vars.iter().all(|&v| (v as usize) < self.ctx.n_vars));
        match self.terms.entry(word) {
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

    pub fn add(&self, other: &NCPoly) -> NCPoly {
        assert_eq!(self.ctx, other.ctx, "context mismatch in add");
        let mut out = self.clone();
        for (w, &coeff) in &other.terms {
            out.add_term(w.clone(), coeff);
        }
        out
    }

    pub fn sub(&self, other: &NCPoly) -> NCPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> NCPoly {
        self.scale(c(-1.0, 0.0))
    }

    pub fn scale(&self, factor: C64) -> NCPoly {
        let mut out = NCPoly::zero(self.ctx);
        for (w, &coeff) in &self.terms {
            out.add_term(w.clone(), coeff * factor);
        }
        out
    }

    /// Bilinear product; adjacent matrix units contract by `e_{rs}e_{tu} = δ_{st}e_{ru}`.
    pub fn mul(&self, other: &NCPoly) -> Result<NCPoly> {
        self.ctx.check_matches(&other.ctx)?;
        let mut out = NCPoly::zero(self.ctx);
        for (wa, &ca) in &self.terms {
            for (wb, &cb) in &other.terms {
                if let Some(w) = wa.concat(wb) {
                    out.add_term(w, ca * cb);
                }
            }
        }
        Ok(out)
    }

    /// Conjugate-linear antimultiplicative involution with self-adjoint variables.
    pub fn star(&self) -> NCPoly {
        let mut out = NCPoly::zero(self.ctx);
        for (w, &coeff) in &self.terms {
            out.add_term(w.star(), coeff.conj());
        }
        out
    }

    /// Grading `L = id + deg`: a degree-m homogeneous term picks up (1+m).
    pub fn grade(&self) -> NCPoly {
        let mut out = NCPoly::zero(self.ctx);
        for (w, &coeff) in &self.terms {
            let factor = (1 + w.degree()) as f64;
            out.add_term(w.clone(), coeff * c(factor, 0.0));
        }
        out
    }

    /// Algebra homomorphism `X_i ↦ point[i]`, `e_{rs} ↦ I_m ⊗ e_{rs}`,
    /// for points in `M_m(B)` given as mq×mq matrices.
    pub fn evaluate(&self, point: &[CMat]) -> Result<CMat> {
        if point.len() != self.ctx.n_vars {
            return Err(Error::Shape(format!(
                "expected {} point matrices, got {}",
                self.ctx.n_vars,
                point.len()
            )));
        }
        let dim = if self.ctx.n_vars == 0 {
            self.ctx.q
        } else {
            point[0].nrows()
        };
        if dim % self.ctx.q != 0 {
            return Err(Error::Shape(format!(
                "point size {} not divisible by q={}",
                dim, self.ctx.q
            )));
        }
        for m in point {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::Shape(
                    "point matrices must be square and equal-sized".into(),
                ));
            }
        }
        let amp = dim / self.ctx.q;
        let im = linalg::identity(amp);
        let embed = |&(r, s): &(u8, u8)| {
            kron(
                &im,
                &unit_matrix(self.ctx.q, self.ctx.q, r as usize, s as usize),
            )
        };
        let mut acc = CMat::zeros(dim, dim);
        for (w, &coeff) in &self.terms {
            let mut term = embed(&w.units[0]);
            for (k, &v) in w.vars.iter().enumerate() {
                term = &term * &point[v as usize];
                term = &term * embed(&w.units[k + 1]);
            }
            acc += term.scale_complex(coeff);
        }
        Ok(acc)
    }
}

trait ScaleComplex {
    fn scale_complex(self, factor: C64) -> Self;
}

impl ScaleComplex for CMat {
    fn scale_complex(mut self, factor: C64) -> Self {
        for v in self.iter_mut() {
            *v *= factor;
        }
        self
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, coeff)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.4}{:+.4}i)·{}", coeff.re, coeff.im, w)?;
        }
        Ok(())
    }
}
