//! Exact linear algebra: fraction-free (Bareiss) rank, cofactor
//! determinants over rings, and nullspaces by reduced row echelon form.

use super::field::{Field, Ring};

pub type Matrix<F> = Vec<Vec<F>>;

/// Rank by Bareiss elimination with row pivoting.
///
/// Every intermediate entry is a minor of the input, so for integer input
/// all divisions are exact and no fractions appear.
pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut a = m.clone();
    let ctx = a[0].first().map(|x| x.ctx());
    let Some(ctx) = ctx else { return 0 };
    let mut prev = F::one(&ctx);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = a[r][c].mul(&a[i][j]).sub(&a[i][c].mul(&a[r][j]));
                a[i][j] = num.div(&prev).expect("Bareiss pivot is nonzero");
            }
            a[i][c] = F::zero(&ctx);
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Determinant by cofactor expansion along the first row. Works over any
/// commutative ring; intended for the small blocks of the search.
pub fn det_cofactor<R: Ring>(m: &Matrix<R>, ctx: &R::Ctx) -> R {
    let n = m.len();
    match n {
        0 => R::one(ctx),
        1 => m[0][0].clone(),
        2 => m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0])),
        _ => {
            let mut acc = R::zero(ctx);
            for j in 0..n {
                let minor: Matrix<R> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = m[0][j].mul(&det_cofactor(&minor, ctx));
                acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

/// All `k`-element subsets of `0..n`, lexicographic.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// All `k x k` minors of `m`.
pub fn minors<R: Ring>(m: &Matrix<R>, k: usize, ctx: &R::Ctx) -> Vec<R> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for rs in combinations(rows, k) {
        for cs in combinations(cols, k) {
            let sub: Matrix<R> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j].clone()).collect()).collect();
            out.push(det_cofactor(&sub, ctx));
        }
    }
    out
}

/// Rank as the size of the largest non-vanishing minor (slow oracle).
pub fn rank_by_minors<F: Field>(m: &Matrix<F>, ctx: &F::Ctx) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    (1..=rows.min(cols))
        .rev()
        .find(|&k| minors(m, k, ctx).iter().any(|d| !d.is_zero()))
        .unwrap_or(0)
}

/// Basis of the right nullspace `{v : m v = 0}` (one vector per free column).
pub fn nullspace<F: Field>(m: &Matrix<F>, cols: usize, ctx: &F::Ctx) -> Vec<Vec<F>> {
    let mut a = m.clone();
    let rows = a.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inv().unwrap();
        for j in 0..cols {
            a[r][j] = a[r][j].mul(&inv);
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    a[i][j] = a[i][j].sub(&f.mul(&a[r][j]));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero(ctx); cols];
            v[f] = F::one(ctx);
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = a[row][f].neg();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::rat;
    use num_rational::BigRational;

    fn m(rows: &[&[i64]]) -> Matrix<BigRational> {
        rows.iter().map(|r| r.iter().map(|&k| rat(k, 1)).collect()).collect()
    }

    #[test]
    fn zero_block_has_rank_zero() {
        assert_eq!(rank(&m(&[&[0, 0], &[0, 0]])), 0);
    }

    #[test]
    fn geometric_hankel_has_rank_one() {
        // entries 2^(i+j)
        let h = m(&[&[1, 2, 4], &[2, 4, 8], &[4, 8, 16]]);
        assert_eq!(rank(&h), 1);
        assert_eq!(rank_by_minors(&h, &()), 1);
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = nullspace(&a, 3, &());
        assert_eq!(ns.len(), 2);
        for v in ns {
            for row in &a {
                let s: BigRational = row.iter().zip(&v).map(|(x, y)| x * y).sum();
                assert_eq!(s, rat(0, 1));
            }
        }
    }

    #[test]
    fn cofactor_determinant() {
        let a = m(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]]);
        assert_eq!(det_cofactor(&a, &()), rat(6, 1));
    }
}
