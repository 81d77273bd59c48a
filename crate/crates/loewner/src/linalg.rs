//! Dense complex linear algebra helpers: thin SVD, pseudo-inverse, pivoted
//! solves with a cheap conditioning guard, and log-determinants.
//!
//! Everything here wraps nalgebra factorizations behind the numeric contracts
//! the fitting modules rely on (relative singular-value cutoffs, reciprocal
//! condition estimates). Matrices are column-major `DMatrix<Complex64>`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Iteration cap for the implicit-QR SVD sweep; generous for the matrix sizes
/// used here (hundreds at most), converts pathological inputs into an error
/// instead of a hang.
const SVD_MAX_ITER: usize = 10_000;

/// Reciprocal-condition proxy below which a shifted pencil is treated as
/// singular during transfer evaluation.
pub const RCOND_FLOOR: f64 = 1e-14;

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cre(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Thin SVD of `m` with singular values sorted in descending order.
///
/// `u` has orthonormal columns spanning the column space, `v` holds right
/// singular vectors as columns, so `m = u * diag(sigma) * v.adjoint()`.
pub struct ThinSvd {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

pub fn thin_svd(m: &CMatrix) -> Result<ThinSvd> {
    if m.is_empty() {
        return Err(Error::Degenerate("svd of an empty matrix".into()));
    }
    let svd = m
        .clone()
        .try_svd(true, true, f64::EPSILON, SVD_MAX_ITER)
        .ok_or(Error::SvdFailure)?;
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    Ok(ThinSvd {
        u,
        sigma: svd.singular_values.iter().copied().collect(),
        v: v_t.adjoint(),
    })
}

/// Number of singular values at or above `tol_rel` times the largest one.
/// The list is assumed sorted descending, as produced by [`thin_svd`].
pub fn count_above(sigma: &[f64], tol_rel: f64) -> usize {
    match sigma.first() {
        None => 0,
        Some(&s0) if s0 <= 0.0 => 0,
        Some(&s0) => sigma.iter().take_while(|&&s| s >= tol_rel * s0).count(),
    }
}

/// Moore-Penrose pseudo-inverse with a relative singular-value cutoff.
/// Singular values below `tol_rel * sigma_max` are treated as zero.
pub fn pseudo_inverse(m: &CMatrix, tol_rel: f64) -> Result<CMatrix> {
    let svd = thin_svd(m)?;
    let rank = count_above(&svd.sigma, tol_rel);
    let mut acc = CMatrix::zeros(m.ncols(), m.nrows());
    for i in 0..rank {
        let vi = svd.v.column(i);
        let ui = svd.u.column(i);
        acc += (&vi * ui.adjoint()).map(|z| z / svd.sigma[i]);
    }
    Ok(acc)
}

/// (min, max) absolute values of the U diagonal from a partial-pivoted LU;
/// a cheap proxy for how close `m` is to singular. (0, 0) for an empty
/// matrix.
pub fn pivot_range(m: &CMatrix) -> (f64, f64) {
    let lu = m.clone().lu();
    let udiag = lu.u();
    let n = udiag.nrows().min(udiag.ncols());
    if n == 0 {
        return (0.0, 0.0);
    }
    let mut dmin = f64::INFINITY;
    let mut dmax: f64 = 0.0;
    for i in 0..n {
        let d = udiag[(i, i)].norm();
        dmin = dmin.min(d);
        dmax = dmax.max(d);
    }
    (dmin, dmax)
}

/// Solve `a x = b` by partial-pivoted LU, failing when the reciprocal
/// condition proxy (min/max of the U diagonal) drops below `rcond_floor`.
pub fn solve_guarded(a: &CMatrix, b: &CMatrix, rcond_floor: f64, at: Complex64) -> Result<CMatrix> {
    let (dmin, dmax) = pivot_range(a);
    if !(dmax > 0.0) || dmin / dmax < rcond_floor {
        return Err(Error::EvalSingular { at });
    }
    a.clone().lu().solve(b).ok_or(Error::EvalSingular { at })
}

/// `[a, b]` side by side; shapes must agree on rows.
pub fn hcat(a: &CMatrix, b: &CMatrix) -> CMatrix {
    debug_assert_eq!(a.nrows(), b.nrows());
    let mut m = CMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    m.view_mut((0, 0), (a.nrows(), a.ncols())).copy_from(a);
    m.view_mut((0, a.ncols()), (b.nrows(), b.ncols()))
        .copy_from(b);
    m
}

/// `[a; b]` stacked; shapes must agree on columns.
pub fn vcat(a: &CMatrix, b: &CMatrix) -> CMatrix {
    debug_assert_eq!(a.ncols(), b.ncols());
    let mut m = CMatrix::zeros(a.nrows() + b.nrows(), a.ncols());
    m.view_mut((0, 0), (a.nrows(), a.ncols())).copy_from(a);
    m.view_mut((a.nrows(), 0), (b.nrows(), b.ncols()))
        .copy_from(b);
    m
}

/// Entrywise real part, kept complex-typed.
pub fn real_part(m: &CMatrix) -> CMatrix {
    m.map(|z| cre(z.re))
}

/// Largest entrywise |Im| of a matrix; diagnostic for coefficients that
/// should be real on conjugate-symmetric data.
pub fn max_imag(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.im.abs()))
}
