//! Dense univariate polynomials over an exact ring, ascending coefficients.

use std::fmt;

use num_rational::BigRational;

use super::field::{format_rational, Field, Ring};

/// Canonical form: no trailing zero coefficient; the zero polynomial has no
/// coefficients. Canonicalisation needs a zero test, so it only happens for
/// polynomials over a [`Field`]; ring-level constructors keep what they get.
#[derive(Clone, Debug)]
pub struct Poly<F: Ring> {
    coeffs: Vec<F>,
    ctx: F::Ctx,
}

pub type RatPoly = Poly<BigRational>;

impl<F: Ring> Poly<F> {
    pub fn zero(ctx: &F::Ctx) -> Self {
        Poly { coeffs: Vec::new(), ctx: ctx.clone() }
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the stored range).
    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(|| F::zero(&self.ctx))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&F, &F) -> F) -> Vec<F> {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).map(|k| f(&self.coeff(k), &other.coeff(k))).collect()
    }
}

impl<F: Field> Poly<F> {
    pub fn new(coeffs: Vec<F>, ctx: &F::Ctx) -> Self {
        let mut p = Poly { coeffs, ctx: ctx.clone() };
        p.trim();
        p
    }

    pub fn constant(c: F) -> Self {
        let ctx = c.ctx();
        Poly::new(vec![c], &ctx)
    }

    pub fn one(ctx: &F::Ctx) -> Self {
        Poly::new(vec![F::one(ctx)], ctx)
    }

    /// The monomial `x`.
    pub fn x(ctx: &F::Ctx) -> Self {
        Poly::new(vec![F::zero(ctx), F::one(ctx)], ctx)
    }

    /// `x - r`.
    pub fn linear_root(r: &F) -> Self {
        let ctx = r.ctx();
        Poly::new(vec![r.neg(), F::one(&ctx)], &ctx)
    }

    pub fn from_rationals(qs: &[BigRational], ctx: &F::Ctx) -> Self {
        Poly::new(qs.iter().map(|q| F::from_rational(ctx, q)).collect(), ctx)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        Poly::new(self.zip_with(other, |a, b| a.add(b)), &self.ctx)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Poly::new(self.zip_with(other, |a, b| a.sub(b)), &self.ctx)
    }

    pub fn neg(&self) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.neg()).collect(), &self.ctx)
    }

    pub fn scale(&self, c: &F) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.mul(c)).collect(), &self.ctx)
    }

    pub fn scale_rational(&self, q: &BigRational) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.scale(q)).collect(), &self.ctx)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.ctx);
        }
        let mut out = vec![F::zero(&self.ctx); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::new(out, &self.ctx)
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Poly::one(&self.ctx), |acc, _| acc.mul(self))
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![F::zero(&self.ctx); k];
        c.extend(self.coeffs.iter().cloned());
        Poly { coeffs: c, ctx: self.ctx.clone() }
    }

    /// Truncation modulo `x^k`.
    pub fn truncate(&self, k: usize) -> Self {
        Poly::new(self.coeffs.iter().take(k).cloned().collect(), &self.ctx)
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(&self.ctx), |acc, c| acc.mul(x).add(c))
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.mul(&F::from_int(&self.ctx, k as i64)))
            .collect();
        Poly::new(c, &self.ctx)
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn divrem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.lead().unwrap().inv().expect("trimmed leading coefficient");
        let mut rem = self.coeffs.clone();
        let ctx = &self.ctx;
        if rem.len() <= dd {
            return (Poly::zero(ctx), self.clone());
        }
        let mut quot = vec![F::zero(ctx); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].mul(&lead_inv);
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].sub(&c.mul(d));
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot, ctx), Poly::new(rem, ctx))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.divrem(divisor).1
    }

    /// Exact division; `None` if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.divrem(divisor);
        r.is_zero().then_some(q)
    }

    /// The same polynomial up to a positive factor, with small coefficients.
    pub fn shrunk(&self) -> Self {
        let mut c = self.coeffs.clone();
        F::shrink_coeffs(&mut c);
        Poly::new(c, &self.ctx)
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(l) => self.scale(&l.inv().unwrap()),
            None => self.clone(),
        }
    }

    /// Monic gcd; the gcd of two zero polynomials is zero.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).shrunk();
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn xgcd(&self, other: &Self) -> (Self, Self, Self) {
        let ctx = &self.ctx;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(ctx), Poly::zero(ctx));
        let (mut t0, mut t1) = (Poly::zero(ctx), Poly::one(ctx));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        match r0.lead().cloned() {
            Some(l) => {
                let li = l.inv().unwrap();
                (r0.scale(&li), s0.scale(&li), t0.scale(&li))
            }
            None => (r0, s0, t0),
        }
    }

    /// Squarefree part `p / gcd(p, p')`, made monic.
    pub fn squarefree(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        self.div_exact(&g).expect("gcd divides").monic()
    }

    /// `x^d * p(1/x)` for `d >= deg p`: the reciprocal substitution used to
    /// move between `x` and `s = 1/x`.
    pub fn reciprocal(&self, d: usize) -> Self {
        assert!(self.len() <= d + 1, "reciprocal degree below polynomial degree");
        let mut c = vec![F::zero(&self.ctx); d + 1];
        for (k, a) in self.coeffs.iter().enumerate() {
            c[d - k] = a.clone();
        }
        Poly::new(c, &self.ctx)
    }

    /// `p(q(x))`.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(&self.ctx), |acc, c| acc.mul(inner).add(&Poly::constant(c.clone())))
    }

    pub fn eq_exact(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !Field::is_zero(*c))
            .map(|(k, c)| match k {
                0 => format_rational(c),
                1 => format!("({})*x", format_rational(c)),
                _ => format!("({})*x^{k}", format_rational(c)),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::rat;

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::new(c.iter().map(|&k| rat(k, 1)).collect(), &())
    }

    #[test]
    fn reciprocal_of_x_squared_minus_one() {
        // s^2 * ((1/s)^2 - 1) = 1 - s^2
        assert!(p(&[-1, 0, 1]).reciprocal(2).eq_exact(&p(&[1, 0, -1])));
    }

    #[test]
    fn degree_of_product() {
        let f = p(&[1, 2, 3]);
        let g = p(&[0, 5, 0, 7]);
        assert_eq!(f.mul(&g).degree(), Some(5));
    }

    #[test]
    fn additive_inverse() {
        let f = p(&[3, -1, 4, 1]);
        assert!(f.add(&f.neg()).is_zero());
    }

    #[test]
    fn divrem_and_gcd() {
        let a = p(&[-1, 0, 1]); // (x-1)(x+1)
        let b = p(&[-1, 1]).mul(&p(&[2, 1])); // (x-1)(x+2)
        assert!(a.gcd(&b).eq_exact(&p(&[-1, 1])));
        let (q, r) = a.mul(&b).add(&p(&[1])).divrem(&b);
        assert!(q.eq_exact(&a));
        assert!(r.eq_exact(&p(&[1])));
        let (g, s, t) = a.xgcd(&b);
        assert!(s.mul(&a).add(&t.mul(&b)).eq_exact(&g));
    }

    #[test]
    fn squarefree_strips_repeated_factor() {
        let f = p(&[-1, 1]).pow(3).mul(&p(&[2, 1]));
        assert!(f.squarefree().eq_exact(&p(&[-1, 1]).mul(&p(&[2, 1]))));
    }
}
