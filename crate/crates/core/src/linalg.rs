//! Dense complex matrix helpers on top of nalgebra.
//!
//! Everything downstream works with `CMat = DMatrix<Complex<f64>>`. This
//! module collects the handful of decomposition-backed operations the rest of
//! the crate needs: Kronecker/block assembly, operator norms and condition
//! numbers via SVD, eigenvalues via the complex Schur form, Hermitian
//! eigenvalues, and least-squares coordinates in a matrix span.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;

pub const ONE: C64 = Complex::new(1.0, 0.0);
pub const ZERO: C64 = Complex::new(0.0, 0.0);
pub const I: C64 = Complex::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn cr(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

/// e_{ij} in M_{rows,cols}.
pub fn unit_matrix(rows: usize, cols: usize, i: usize, j: usize) -> CMat {
    let mut m = CMat::zeros(rows, cols);
    m[(i, j)] = ONE;
    m
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Kronecker product a ⊗ b.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Block diagonal a ⊕ b.
pub fn direct_sum(a: &CMat, b: &CMat) -> CMat {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut m = CMat::zeros(ra + rb, ca + cb);
    m.view_mut((0, 0), (ra, ca)).copy_from(a);
    m.view_mut((ra, ca), (rb, cb)).copy_from(b);
    m
}

pub fn block(m: &CMat, r0: usize, c0: usize, rows: usize, cols: usize) -> CMat {
    m.view((r0, c0), (rows, cols)).into()
}

pub fn set_block(m: &mut CMat, r0: usize, c0: usize, b: &CMat) {
    m.view_mut((r0, c0), b.shape()).copy_from(b);
}

/// Operator (spectral) norm, σ_max.
pub fn op_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let sv = m.clone().singular_values();
    sv.iter().cloned().fold(0.0, f64::max)
}

/// 2-norm condition number σ_max / σ_min; `f64::INFINITY` when singular.
pub fn cond(m: &CMat) -> f64 {
    let sv = m.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min <= 0.0 || !min.is_finite() {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Inverse guarded by a condition-number bound.
pub fn inverse_checked(m: &CMat, kappa_max: f64) -> Result<(CMat, f64)> {
    let kappa = cond(m);
    if !kappa.is_finite() || kappa > kappa_max {
        return Err(Error::NotResolvent(kappa));
    }
    let inv = m
        .clone()
        .try_inverse()
        .ok_or(Error::NotResolvent(f64::INFINITY))?;
    Ok((inv, kappa))
}

/// Eigenvalues of a general complex matrix via the Schur form.
pub fn eigenvalues(m: &CMat) -> Result<Vec<C64>> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::Shape(format!("eigenvalues of {}x{}", n, m.ncols())));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let schur = m
        .clone()
        .try_schur(1.0e-13, 100_000)
        .ok_or_else(|| Error::Invalid("Schur iteration did not converge".into()))?;
    let ev = schur
        .eigenvalues()
        .ok_or_else(|| Error::Invalid("Schur form left unresolved blocks".into()))?;
    Ok(ev.iter().cloned().collect())
}

pub fn adjoint(m: &CMat) -> CMat {
    m.adjoint()
}

/// ‖m − m*‖ (Frobenius); zero iff Hermitian.
pub fn hermitian_defect(m: &CMat) -> f64 {
    (m - m.adjoint()).norm()
}

/// Eigenvalues of (m + m*)/2, ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let h = (m + m.adjoint()).scale(0.5);
    let mut ev: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().cloned().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

pub fn min_hermitian_eigenvalue(m: &CMat) -> f64 {
    hermitian_eigenvalues(m).first().cloned().unwrap_or(0.0)
}

/// Least-squares coordinates of `target` in the span of `basis`
/// (matrices of equal shape); returns coordinates and the residual norm.
pub fn span_coordinates(basis: &[CMat], target: &CMat) -> (Vec<C64>, f64) {
    let dim = target.len();
    let k = basis.len();
    let mut a = CMat::zeros(dim, k);
    for (col, b) in basis.iter().enumerate() {
        for (row, v) in b.iter().enumerate() {
            a[(row, col)] = *v;
        }
    }
    let mut t = CMat::zeros(dim, 1);
    for (row, v) in target.iter().enumerate() {
        t[(row, 0)] = *v;
    }
    let svd = a.clone().svd(true, true);
    let x = svd.solve(&t, 1.0e-13).unwrap_or_else(|_| CMat::zeros(k, 1));
    let residual = (&a * &x - &t).norm();
    (x.column(0).iter().cloned().collect(), residual)
}

/// Numerical rank against the threshold `rel_tol · σ_max`.
pub fn rank_with_tol(m: &CMat, rel_tol: f64) -> usize {
    let sv = m.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * max).count()
}

/// Least-squares slope of y against x (used by the log-log decay probes).
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let num: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    num / den
}
