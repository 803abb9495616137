//! Hankel rank conditions for `n`-periodicity and their dispatch over the
//! caustic cases.

use serde::{Deserialize, Serialize};

use super::params::HyperellipticParams;
use super::series::{hankel_rank, series_of_kind, SeriesKind};
use crate::confocal::CausticCase;
use crate::error::ConditionError;
use crate::exact::{Field, Ring};

/// One rank test: the Hankel block of `kind` starting at coefficient
/// `row_lo`, of shape `rows x cols`, must have rank `< cols`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub kind: SeriesKind,
    pub row_lo: usize,
    pub rows: usize,
    pub cols: usize,
}

impl Block {
    /// Highest series coefficient the block reads.
    pub fn last_index(&self) -> usize {
        self.row_lo + self.rows + self.cols - 2
    }

    /// Even `n = 2m >= 6`: rows start at coefficient 4, `(m-1) x (m-2)`.
    pub fn a_type(kind: SeriesKind, n: usize) -> Option<Block> {
        (n % 2 == 0 && n >= 6).then(|| {
            let m = n / 2;
            Block { kind, row_lo: 4, rows: m - 1, cols: m - 2 }
        })
    }

    /// Even `n = 2m >= 4`: rows start at coefficient 2, `m x (m-1)`.
    pub fn b_type(kind: SeriesKind, n: usize) -> Option<Block> {
        (n % 2 == 0 && n >= 4).then(|| {
            let m = n / 2;
            Block { kind, row_lo: 2, rows: m, cols: m - 1 }
        })
    }

    /// Odd `n = 2m+1 >= 5`: rows start at coefficient 3, `m x (m-1)`.
    pub fn odd_type(kind: SeriesKind, n: usize) -> Option<Block> {
        (n % 2 == 1 && n >= 5).then(|| {
            let m = (n - 1) / 2;
            Block { kind, row_lo: 3, rows: m, cols: m - 1 }
        })
    }
}

/// The alternative blocks for `(case, n)`; the condition holds iff at least
/// one of them is rank deficient. Empty means the condition is false.
pub fn blocks_for(case: CausticCase, n: usize) -> Vec<Block> {
    use CausticCase::*;
    use SeriesKind as K;
    let even = n % 2 == 0;
    let cands = match (case, even) {
        (S1, true) => vec![Block::a_type(K::A, n), Block::b_type(K::B, n)],
        (S1, false) => vec![Block::odd_type(K::C, n), Block::odd_type(K::D, n)],
        (S2 | T1 | T2, true) | (S3 | S4 | T4, true) => vec![Block::a_type(K::A, n)],
        (S2 | T1 | T2, false) => vec![Block::odd_type(K::C, n)],
        (S4, false) => vec![Block::odd_type(K::D, n)],
        (T3, true) => vec![Block::a_type(K::A, n), Block::b_type(K::B, n)],
        (S3 | T3 | T4, false) => vec![],
        (DoubleCaustic, true) => vec![Block::a_type(K::DoubleA, n), Block::b_type(K::DoubleB, n)],
        (DoubleCaustic, false) => vec![],
        (LightLike, true) => vec![Block::a_type(K::LightA, n)],
        (LightLike, false) => vec![Block::odd_type(K::LightB, n)],
    };
    cands.into_iter().flatten().collect()
}

/// Human-readable reason why `(case, n)` has no applicable rank test.
pub fn threshold_note(case: CausticCase, n: usize) -> Option<String> {
    if !blocks_for(case, n).is_empty() {
        return None;
    }
    let even = n % 2 == 0;
    Some(match case {
        CausticCase::S3 | CausticCase::T3 | CausticCase::T4 | CausticCase::DoubleCaustic if !even => {
            format!("case {case} admits only even periods")
        }
        CausticCase::LightLike if !even => format!("odd light-like periods need n >= 5 (got {n})"),
        CausticCase::S1 | CausticCase::T3 | CausticCase::DoubleCaustic if even => {
            format!("even periods need n >= 4 (got {n})")
        }
        _ if even => format!("even periods in case {case} need n >= 6 (got {n})"),
        _ => format!("odd periods need n >= 5 (got {n})"),
    })
}

fn blocks_hold<F: Field>(params: &HyperellipticParams<F>, blocks: &[Block]) -> Result<bool, ConditionError> {
    for b in blocks {
        let s = series_of_kind(params, b.kind, b.last_index())?;
        if hankel_rank(&s, b.row_lo, b.rows, b.cols)? < b.cols {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Exact periodicity test for caustic case `case` and period `n`.
pub fn cayley_test<F: Field>(params: &HyperellipticParams<F>, case: CausticCase, n: usize) -> Result<bool, ConditionError> {
    if n < 3 {
        return Err(ConditionError::PeriodTooSmall);
    }
    let actual = params.case()?;
    if actual != case {
        return Err(ConditionError::CaseMismatch(format!("parameters are in case {actual}, not {case}")));
    }
    blocks_hold(params, &blocks_for(case, n))
}

/// Periodicity test for a double caustic `gamma1 = gamma2` in `(a2, a1)`.
pub fn double_caustic_test<F: Field>(a: &[F; 3], gamma1: &F, n: usize) -> Result<bool, ConditionError> {
    let params = HyperellipticParams {
        a: a.clone(),
        gamma1: gamma1.clone(),
        gamma2: super::params::G2::Finite(gamma1.clone()),
    };
    if params.case().ok() != Some(CausticCase::DoubleCaustic) {
        return Err(ConditionError::GammaOutOfRange);
    }
    if n < 3 {
        return Err(ConditionError::PeriodTooSmall);
    }
    blocks_hold(&params, &blocks_for(CausticCase::DoubleCaustic, n))
}

/// Periodicity test for light-like trajectories with caustic `gamma1`.
/// Odd periods require an ellipsoidal caustic.
pub fn lightlike_test<F: Field>(a: &[F; 3], gamma1: &F, n: usize) -> Result<bool, ConditionError> {
    let params = HyperellipticParams { a: a.clone(), gamma1: gamma1.clone(), gamma2: super::params::G2::Infinity };
    if params.case().ok() != Some(CausticCase::LightLike) {
        return Err(ConditionError::GammaOutOfRange);
    }
    if n < 3 {
        return Err(ConditionError::PeriodTooSmall);
    }
    let ellipsoidal = gamma1.cmp_exact(&a[1]).is_lt();
    if n % 2 == 1 && !ellipsoidal {
        return Ok(false);
    }
    blocks_hold(&params, &blocks_for(CausticCase::LightLike, n))
}

/// The polynomial entries that must vanish for `block` to be rank
/// deficient, in the degenerate `cols = 1` shape; for larger blocks the
/// maximal minors. Generic over rings so the search can use it symbolically.
pub fn deficiency_conditions<R: Ring>(coeffs: &[R], block: &Block, ctx: &R::Ctx) -> Vec<R> {
    let m = super::series::hankel_matrix(coeffs, block.row_lo, block.rows, block.cols);
    crate::exact::linalg::minors(&m, block.cols, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::params::RatParams;
    use crate::exact::rat;

    #[test]
    fn shapes() {
        assert_eq!(Block::b_type(SeriesKind::B, 4), Some(Block { kind: SeriesKind::B, row_lo: 2, rows: 2, cols: 1 }));
        assert_eq!(Block::a_type(SeriesKind::A, 6), Some(Block { kind: SeriesKind::A, row_lo: 4, rows: 2, cols: 1 }));
        assert_eq!(Block::odd_type(SeriesKind::C, 5), Some(Block { kind: SeriesKind::C, row_lo: 3, rows: 2, cols: 1 }));
        assert_eq!(Block::a_type(SeriesKind::A, 4), None);
        assert_eq!(Block::odd_type(SeriesKind::C, 3), None);
    }

    #[test]
    fn odd_periods_excluded_in_s3() {
        let s3 = RatParams::from_ints([4, 2, 1], (3, 1), Some((-2, 1)));
        assert_eq!(s3.case(), Ok(CausticCase::S3));
        assert_eq!(cayley_test(&s3, CausticCase::S3, 5), Ok(false));
        assert!(threshold_note(CausticCase::S3, 5).is_some());
        assert_eq!(threshold_note(CausticCase::S1, 3).unwrap(), "odd periods need n >= 5 (got 3)");
        assert_eq!(threshold_note(CausticCase::S1, 2).unwrap(), "even periods need n >= 4 (got 2)");
    }

    #[test]
    fn case_mismatch_detected() {
        let s1 = RatParams::from_ints([4, 2, 1], (1, 1), Some((-1, 2)));
        assert!(matches!(cayley_test(&s1, CausticCase::S2, 4), Err(ConditionError::CaseMismatch(_))));
    }

    #[test]
    fn generic_rational_point_is_not_periodic() {
        let s1 = RatParams::from_ints([4, 2, 1], (1, 1), Some((-1, 2)));
        for n in 3..10 {
            assert_eq!(cayley_test(&s1, CausticCase::S1, n), Ok(false));
        }
    }

    #[test]
    fn odd_light_like_with_hyperboloid_caustic_fails() {
        let a = [rat(4, 1), rat(2, 1), rat(1, 1)];
        assert_eq!(lightlike_test(&a, &rat(3, 1), 5), Ok(false));
        assert_eq!(lightlike_test(&a, &rat(-2, 1), 5), Err(ConditionError::GammaOutOfRange));
    }

    #[test]
    fn odd_double_caustic_fails() {
        let a = [rat(4, 1), rat(2, 1), rat(1, 1)];
        assert_eq!(double_caustic_test(&a, &rat(3, 1), 5), Ok(false));
    }
}
