//! Normalised Taylor series at `x = 0` of the square root of the spectral
//! polynomial and of its quotients by the caustic factors.
//!
//! With `s_i` the reciprocals of the roots, `P(x)/P(0) = prod (1 - s_i x)`,
//! so every series here starts with 1 and has coefficients that are
//! polynomials in the `s_i`. The code is generic over [`Ring`] so that the
//! same recurrences run on numbers and on symbolic bivariate polynomials.

use serde::{Deserialize, Serialize};

use super::params::HyperellipticParams;
use crate::error::ConditionError;
use crate::exact::linalg::{rank, Matrix};
use crate::exact::{rat, Field, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SeriesKind {
    A,
    B,
    C,
    D,
    DoubleA,
    DoubleB,
    LightA,
    LightB,
}

#[derive(Clone, Debug)]
pub struct NormalizedSeries<R: Ring> {
    pub kind: SeriesKind,
    /// `coeffs[k]` is the coefficient of `x^k`, for `k = 0..=order`.
    pub coeffs: Vec<R>,
    pub order: usize,
}

/// `prod (1 - s_i x)` modulo `x^(order+1)`.
pub fn product_series<R: Ring>(s: &[R], order: usize, ctx: &R::Ctx) -> Vec<R> {
    let mut out = vec![R::zero(ctx); order + 1];
    out[0] = R::one(ctx);
    for si in s {
        for k in (1..=order).rev() {
            out[k] = out[k].sub(&si.mul(&out[k - 1]));
        }
    }
    out
}

/// Square root of a series with constant term 1, from the coefficient
/// recurrence of `S^2 = P`: `2 S_k = P_k - sum_{j=1}^{k-1} S_j S_{k-j}`.
pub fn sqrt_unit_series<R: Ring>(p: &[R], ctx: &R::Ctx) -> Vec<R> {
    let half = rat(1, 2);
    let mut s: Vec<R> = Vec::with_capacity(p.len());
    s.push(R::one(ctx));
    for k in 1..p.len() {
        let mut acc = p[k].clone();
        for j in 1..k {
            acc = acc.sub(&s[j].mul(&s[k - j]));
        }
        s.push(acc.scale(&half));
    }
    s
}

/// Division by `1 - u x`: `B_k = A_k + u B_{k-1}`.
pub fn divide_linear<R: Ring>(c: &[R], u: &R) -> Vec<R> {
    let mut out: Vec<R> = Vec::with_capacity(c.len());
    for (k, ck) in c.iter().enumerate() {
        out.push(if k == 0 { ck.clone() } else { ck.add(&u.mul(&out[k - 1])) });
    }
    out
}

/// Multiplication by `1 - u x`, truncated to the same length.
pub fn multiply_linear<R: Ring>(c: &[R], u: &R) -> Vec<R> {
    (0..c.len()).map(|k| if k == 0 { c[0].clone() } else { c[k].sub(&u.mul(&c[k - 1])) }).collect()
}

/// Coefficients of the series of the given kind, from the reciprocals
/// `s = [1/a1, 1/a2, -1/a3, u = 1/gamma1, w = 1/gamma2]`. Double kinds use
/// `u` twice and ignore `w`; light kinds ignore `w`.
pub fn kind_coeffs<R: Ring>(kind: SeriesKind, s: &[R; 5], order: usize, ctx: &R::Ctx) -> Vec<R> {
    let [s1, s2, s3, u, w] = s;
    let base = |extra: &[&R]| {
        let mut roots = vec![s1.clone(), s2.clone(), s3.clone()];
        roots.extend(extra.iter().map(|r| (*r).clone()));
        sqrt_unit_series(&product_series(&roots, order, ctx), ctx)
    };
    match kind {
        SeriesKind::A => base(&[u, w]),
        SeriesKind::B => divide_linear(&divide_linear(&base(&[u, w]), u), w),
        SeriesKind::C => divide_linear(&base(&[u, w]), u),
        SeriesKind::D => divide_linear(&base(&[u, w]), w),
        SeriesKind::DoubleA => base(&[u, u]),
        SeriesKind::DoubleB => divide_linear(&divide_linear(&base(&[u, u]), u), u),
        SeriesKind::LightA => base(&[u]),
        SeriesKind::LightB => divide_linear(&base(&[u]), u),
    }
}

/// `sqrt(P(x)/P(0))` to the given order. For a light-like pair this is the
/// light-like base series; for a double pair the double one.
pub fn sqrt_series<F: Field>(params: &HyperellipticParams<F>, order: usize) -> Result<NormalizedSeries<F>, ConditionError> {
    let kind = if params.is_light() {
        SeriesKind::LightA
    } else if params.is_double() {
        SeriesKind::DoubleA
    } else {
        SeriesKind::A
    };
    series_of_kind(params, kind, order)
}

pub fn series_of_kind<F: Field>(
    params: &HyperellipticParams<F>,
    kind: SeriesKind,
    order: usize,
) -> Result<NormalizedSeries<F>, ConditionError> {
    let s = params.reciprocals()?;
    let coeffs = kind_coeffs(kind, &s, order, &params.ctx());
    Ok(NormalizedSeries { kind, coeffs, order })
}

/// Divides a base series by the normalised caustic factor(s) that turn it
/// into `kind` (`A -> B, C, D`; `C -> B`; `D -> B`; `DoubleA -> DoubleB`;
/// `LightA -> LightB`).
pub fn divided_series<F: Field>(
    base: &NormalizedSeries<F>,
    kind: SeriesKind,
    params: &HyperellipticParams<F>,
) -> Result<NormalizedSeries<F>, ConditionError> {
    use SeriesKind::*;
    let [_, _, _, u, w] = params.reciprocals()?;
    let coeffs = match (base.kind, kind) {
        (A, B) => divide_linear(&divide_linear(&base.coeffs, &u), &w),
        (A, C) | (D, B) | (LightA, LightB) => divide_linear(&base.coeffs, &u),
        (A, D) | (C, B) => divide_linear(&base.coeffs, &w),
        (DoubleA, DoubleB) => divide_linear(&divide_linear(&base.coeffs, &u), &u),
        _ => return Err(ConditionError::CaseMismatch(format!("cannot divide {:?} into {:?}", base.kind, kind))),
    };
    Ok(NormalizedSeries { kind, coeffs, order: base.order })
}

/// `entry(i, j) = coeffs[row_lo + i + j]`.
pub fn hankel_matrix<R: Ring>(coeffs: &[R], row_lo: usize, rows: usize, cols: usize) -> Matrix<R> {
    (0..rows).map(|i| (0..cols).map(|j| coeffs[row_lo + i + j].clone()).collect()).collect()
}

pub fn hankel_rank<F: Field>(
    series: &NormalizedSeries<F>,
    row_lo: usize,
    rows: usize,
    cols: usize,
) -> Result<usize, ConditionError> {
    if rows == 0 || cols == 0 {
        return Ok(0);
    }
    let need = row_lo + rows + cols - 2;
    if need > series.order || need >= series.coeffs.len() {
        return Err(ConditionError::InsufficientOrder { have: series.order, need });
    }
    Ok(rank(&hankel_matrix(&series.coeffs, row_lo, rows, cols)))
}
