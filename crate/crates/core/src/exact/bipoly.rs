//! Bivariate rational polynomials and elimination by resultants.
//!
//! Used to turn a pair of polynomial conditions in two unknowns into a
//! univariate polynomial whose real roots are the candidate values of the
//! first unknown.

use num_rational::BigRational;
use super::field::{qis_zero, qone, qzero, rat, Field, Ring};
use super::poly::{Poly, RatPoly};

/// `sum c[i][j] x^i y^j`, dense.
#[derive(Clone, Debug, Default)]
pub struct BiPoly {
    c: Vec<Vec<BigRational>>,
}

impl BiPoly {
    pub fn constant(q: BigRational) -> Self {
        BiPoly { c: vec![vec![q]] }.trimmed()
    }

    pub fn var_x() -> Self {
        BiPoly { c: vec![vec![], vec![qone()]] }
    }

    pub fn var_y() -> Self {
        BiPoly { c: vec![vec![qzero(), qone()]] }
    }

    fn trimmed(mut self) -> Self {
        for row in self.c.iter_mut() {
            while row.last().is_some_and(qis_zero) {
                row.pop();
            }
        }
        while self.c.last().is_some_and(|r| r.is_empty()) {
            self.c.pop();
        }
        self
    }

    fn get(&self, i: usize, j: usize) -> BigRational {
        self.c.get(i).and_then(|r| r.get(j)).cloned().unwrap_or_else(qzero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree_x(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn degree_y(&self) -> Option<usize> {
        self.c.iter().filter_map(|r| r.len().checked_sub(1)).max()
    }

    /// Coefficient of `y^j` as a polynomial in `x`.
    pub fn coeff_y(&self, j: usize) -> RatPoly {
        RatPoly::new((0..self.c.len()).map(|i| self.get(i, j)).collect(), &())
    }

    /// Substitutes `x = x0`, leaving a polynomial in `y` over `F`.
    pub fn specialize_x<F: Field>(&self, x0: &F) -> Poly<F> {
        let ctx = x0.ctx();
        let dy = self.degree_y().map_or(0, |d| d + 1);
        let coeffs = (0..dy)
            .map(|j| {
                let cj = self.coeff_y(j);
                cj.coeffs()
                    .iter()
                    .rev()
                    .fold(F::zero(&ctx), |acc, q| acc.mul(x0).add(&F::from_rational(&ctx, q)))
            })
            .collect();
        Poly::new(coeffs, &ctx)
    }

    pub fn eval<F: Field>(&self, x0: &F, y0: &F) -> F {
        self.specialize_x(x0).eval(y0)
    }
}

impl Ring for BiPoly {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero(_: &()) -> Self {
        BiPoly::default()
    }
    fn one(_: &()) -> Self {
        BiPoly::constant(qone())
    }
    fn from_rational(_: &(), q: &BigRational) -> Self {
        BiPoly::constant(q.clone())
    }
    fn add(&self, other: &Self) -> Self {
        let n = self.c.len().max(other.c.len());
        let c = (0..n)
            .map(|i| {
                let m = self.c.get(i).map_or(0, Vec::len).max(other.c.get(i).map_or(0, Vec::len));
                (0..m).map(|j| self.get(i, j) + other.get(i, j)).collect()
            })
            .collect();
        BiPoly { c }.trimmed()
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return BiPoly::default();
        }
        let nx = self.c.len() + other.c.len() - 1;
        let ny = self.degree_y().unwrap_or(0) + other.degree_y().unwrap_or(0) + 1;
        let mut c = vec![vec![qzero(); ny]; nx];
        for (i1, r1) in self.c.iter().enumerate() {
            for (j1, a) in r1.iter().enumerate() {
                if qis_zero(a) {
                    continue;
                }
                for (i2, r2) in other.c.iter().enumerate() {
                    for (j2, b) in r2.iter().enumerate() {
                        c[i1 + i2][j1 + j2] += a * b;
                    }
                }
            }
        }
        BiPoly { c }.trimmed()
    }
    fn neg(&self) -> Self {
        BiPoly { c: self.c.iter().map(|r| r.iter().map(|q| -q).collect()).collect() }
    }
    fn scale(&self, q: &BigRational) -> Self {
        BiPoly { c: self.c.iter().map(|r| r.iter().map(|a| a * q).collect()).collect() }.trimmed()
    }
}

/// Resultant of two univariate rational polynomials (Euclidean recurrence).
pub fn resultant(f: &RatPoly, g: &RatPoly) -> BigRational {
    let (Some(df), Some(dg)) = (f.degree(), g.degree()) else {
        return qzero();
    };
    if dg == 0 {
        return num_traits::pow(g.coeff(0), df);
    }
    let r = f.rem(g);
    let Some(dr) = r.degree() else {
        return qzero();
    };
    let sign = if (df * dg) % 2 == 1 { -qone() } else { qone() };
    sign * num_traits::pow(g.lead().unwrap().clone(), df - dr) * resultant(g, &r)
}

/// `Res_y(f, g)` as a polynomial in `x`, by evaluation at integer points
/// (skipping points where a leading coefficient in `y` vanishes) and
/// Newton interpolation.
pub fn resultant_y(f: &BiPoly, g: &BiPoly) -> RatPoly {
    let (Some(dyf), Some(dyg)) = (f.degree_y(), g.degree_y()) else {
        return RatPoly::zero(&());
    };
    let dxf = f.degree_x().unwrap_or(0);
    let dxg = g.degree_x().unwrap_or(0);
    let bound = dxf * dyg + dxg * dyf;
    let lf = f.coeff_y(dyf);
    let lg = g.coeff_y(dyg);
    let mut xs: Vec<BigRational> = Vec::with_capacity(bound + 1);
    let mut ys: Vec<BigRational> = Vec::with_capacity(bound + 1);
    let mut k: i64 = 0;
    while xs.len() <= bound {
        let x0 = rat(k, 1);
        k = if k > 0 { -k } else { -k + 1 };
        if qis_zero(&lf.eval(&x0)) || qis_zero(&lg.eval(&x0)) {
            continue;
        }
        let fy: RatPoly = f.specialize_x(&x0);
        let gy: RatPoly = g.specialize_x(&x0);
        ys.push(resultant(&fy, &gy));
        xs.push(x0);
    }
    interpolate(&xs, &ys)
}

fn det_rational(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = qone();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !qis_zero(&m[r][col])) else {
            return qzero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let piv = m[col][col].clone();
        det *= &piv;
        for r in col + 1..n {
            if qis_zero(&m[r][col]) {
                continue;
            }
            let f = &m[r][col] / &piv;
            for c in col..n {
                let d = &f * &m[col][c];
                m[r][c] -= d;
            }
        }
    }
    det
}

/// Coefficients `(s0, s1)` of the first subresultant `s1 y + s0` of two
/// polynomials in `y` with formal degrees `m, n >= 1`.
fn first_subresultant(f: &RatPoly, m: usize, g: &RatPoly, n: usize) -> (BigRational, BigRational) {
    let size = m + n - 2;
    let width = size + 1;
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(size);
    // Columns hold powers m+n-2 down to 0.
    let mut push = |p: &RatPoly, shift: usize| {
        let mut row = vec![qzero(); width];
        for (k, c) in p.coeffs().iter().enumerate() {
            row[width - 1 - (k + shift)] = c.clone();
        }
        rows.push(row);
    };
    for k in (0..n.saturating_sub(1)).rev() {
        push(f, k);
    }
    for k in (0..m.saturating_sub(1)).rev() {
        push(g, k);
    }
    let pick = |power: usize| -> BigRational {
        let mat: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| {
                let mut v = r[..size - 1].to_vec();
                v.push(r[width - 1 - power].clone());
                v
            })
            .collect();
        det_rational(mat)
    };
    (pick(0), pick(1))
}

/// First subresultant of `f, g` with respect to `y`, as the pair of
/// polynomials `(s0(x), s1(x))`. Where `Res_y` vanishes and `s1` does not,
/// the common root in `y` is `-s0/s1`.
pub fn first_subresultant_y(f: &BiPoly, g: &BiPoly) -> Option<(RatPoly, RatPoly)> {
    let (m, n) = (f.degree_y()?, g.degree_y()?);
    if m == 0 || n == 0 || m + n < 3 {
        return None;
    }
    let bound = f.degree_x().unwrap_or(0) * (n - 1) + g.degree_x().unwrap_or(0) * (m - 1);
    let mut xs = Vec::with_capacity(bound + 1);
    let (mut s0, mut s1) = (Vec::with_capacity(bound + 1), Vec::with_capacity(bound + 1));
    for k in 0..=bound as i64 {
        let x0 = rat(k - bound as i64 / 2, 1);
        let (a, b) = first_subresultant(&f.specialize_x(&x0), m, &g.specialize_x(&x0), n);
        s0.push(a);
        s1.push(b);
        xs.push(x0);
    }
    Some((interpolate(&xs, &s0), interpolate(&xs, &s1)))
}

/// Newton-form interpolation through `(xs[i], ys[i])`.
pub fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> RatPoly {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    let mut p = RatPoly::zero(&());
    for i in (0..n).rev() {
        p = p.mul(&RatPoly::linear_root(&xs[i])).add(&RatPoly::constant(dd[i].clone()));
    }
    p
}
