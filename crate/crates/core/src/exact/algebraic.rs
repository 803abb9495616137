//! Exact arithmetic in a real algebraic number field `Q(theta)`.
//!
//! `theta` is pinned down by a squarefree rational polynomial `M` together
//! with a rational interval isolating one of its real roots. `M` need not be
//! irreducible: whenever a zero test meets a zero divisor, `M` is split by a
//! gcd and the factor vanishing at `theta` is kept (dynamic evaluation).
//! Elements created before a split stay valid because they are reduced
//! modulo the current `M` on every use.

use std::cell::RefCell;
use std::fmt;
use std::rc::Rc;

use num_rational::BigRational;
use super::field::{format_rational, qzero, rat, rational_to_f64, Field, Ring};
use super::poly::RatPoly;
use super::roots::{count_roots, eval_interval, isolate_roots, refine_with, sign_at, sturm_sequence, RootInterval};
use crate::error::ExactError;

#[derive(Debug)]
struct FieldState {
    modulus: RatPoly,
    root: RootInterval,
    // Known irreducible: nonzero remainders are nonzero elements.
    irreducible: bool,
    sturm: Vec<RatPoly>,
}

impl FieldState {
    fn set_modulus(&mut self, m: RatPoly) {
        self.sturm = sturm_sequence(&m);
        self.modulus = m;
    }
}

/// Shared handle describing `Q(theta)`.
#[derive(Debug)]
pub struct NumberField {
    state: RefCell<FieldState>,
}

pub type FieldRef = Rc<NumberField>;

impl NumberField {
    /// `modulus` must have exactly one real root in `(lo, hi]`.
    pub fn new(modulus: &RatPoly, lo: BigRational, hi: BigRational) -> Result<FieldRef, ExactError> {
        Self::build(modulus, lo, hi, false)
    }

    /// Like [`NumberField::new`] for a modulus known to be irreducible over
    /// Q, which makes zero tests a single polynomial remainder.
    pub fn new_irreducible(modulus: &RatPoly, lo: BigRational, hi: BigRational) -> Result<FieldRef, ExactError> {
        Self::build(modulus, lo, hi, true)
    }

    fn build(modulus: &RatPoly, lo: BigRational, hi: BigRational, irreducible: bool) -> Result<FieldRef, ExactError> {
        if modulus.degree().unwrap_or(0) == 0 {
            return Err(ExactError::ConstantModulus);
        }
        let m = if irreducible { modulus.monic() } else { modulus.squarefree() };
        let sturm = sturm_sequence(&m);
        if count_roots(&sturm, &lo, &hi) != 1 {
            return Err(ExactError::NotIsolating);
        }
        let root = RootInterval { lo, hi };
        let nf = NumberField { state: RefCell::new(FieldState { modulus: m, root, irreducible, sturm }) };
        nf.settle_rational_root();
        Ok(Rc::new(nf))
    }

    /// The field generated by the `index`-th real root (ascending) of `p`.
    pub fn from_real_root(p: &RatPoly, index: usize) -> Result<FieldRef, ExactError> {
        let m = p.squarefree();
        let b = super::roots::root_bound(&m);
        let ivs = isolate_roots(&m, &-b.clone(), &b);
        let iv = ivs.get(index).ok_or(ExactError::NotIsolating)?;
        NumberField::new(&m, iv.lo.clone(), iv.hi.clone())
    }

    /// `Q` itself, as the degenerate field of `x - 0`.
    pub fn rationals() -> FieldRef {
        let m = RatPoly::x(&());
        NumberField::new(&m, rat(-1, 1), rat(1, 1)).expect("x isolates 0")
    }

    pub fn modulus(&self) -> RatPoly {
        self.state.borrow().modulus.clone()
    }

    pub fn degree(&self) -> usize {
        self.state.borrow().modulus.degree().unwrap_or(0)
    }

    pub fn interval(&self) -> RootInterval {
        self.state.borrow().root.clone()
    }

    // If the root sits exactly on the right endpoint it is rational.
    fn settle_rational_root(&self) {
        let mut st = self.state.borrow_mut();
        if st.modulus.degree() != Some(1) && sign_at(&st.modulus, &st.root.hi) == 0 {
            let r = st.root.hi.clone();
            st.set_modulus(RatPoly::linear_root(&r));
            st.irreducible = true;
        }
    }

    fn reduce(&self, p: &RatPoly) -> RatPoly {
        let st = self.state.borrow();
        if p.len() < st.modulus.len() {
            p.clone()
        } else {
            p.rem(&st.modulus)
        }
    }

    /// Decides whether `p(theta) = 0`, splitting the modulus if needed.
    fn vanishes(&self, p: &RatPoly) -> bool {
        let r = self.reduce(p);
        if r.is_zero() {
            return true;
        }
        if self.state.borrow().irreducible {
            return false;
        }
        let m = self.modulus();
        let g = m.gcd(&r);
        if g.degree().unwrap_or(0) == 0 {
            return false;
        }
        let iv = self.interval();
        let seq = sturm_sequence(&g);
        let contains = count_roots(&seq, &iv.lo, &iv.hi) == 1;
        let mut st = self.state.borrow_mut();
        if contains {
            st.set_modulus(g);
        } else {
            st.set_modulus(m.div_exact(&g).expect("gcd divides modulus").monic());
        }
        drop(st);
        self.settle_rational_root();
        contains
    }

    /// Bisects the isolating interval once.
    fn bisect(&self) {
        let mut st = self.state.borrow_mut();
        let m = st.root.midpoint();
        match sign_at(&st.modulus, &m) {
            0 => {
                st.set_modulus(RatPoly::linear_root(&m));
                st.irreducible = true;
                st.root = RootInterval { lo: &m - rat(1, 1), hi: m };
            }
            _ => {
                if count_roots(&st.sturm, &st.root.lo, &m) == 1 {
                    st.root.hi = m;
                } else {
                    st.root.lo = m;
                }
            }
        }
    }

    /// Narrows the isolating interval to at most `width`.
    pub fn refine_to(&self, width: &BigRational) {
        let mut st = self.state.borrow_mut();
        if st.modulus.degree() == Some(1) {
            return;
        }
        if st.root.width() > *width {
            st.root = refine_with(&st.modulus, &st.sturm, &st.root, width);
            drop(st);
            self.settle_rational_root();
        }
    }

    /// Rational approximation of `theta` within `width`.
    pub fn approx_generator(&self, width: &BigRational) -> BigRational {
        self.refine_to(width);
        let st = self.state.borrow();
        if st.modulus.degree() == Some(1) {
            return -st.modulus.coeff(0) / st.modulus.coeff(1);
        }
        st.root.midpoint()
    }
}

/// An element of a [`NumberField`], stored as a rational polynomial in theta.
#[derive(Clone)]
pub struct Alg {
    rep: RatPoly,
    field: FieldRef,
}

impl Alg {
    pub fn generator(field: &FieldRef) -> Alg {
        Alg { rep: RatPoly::x(&()), field: field.clone() }
    }

    pub fn from_poly(rep: RatPoly, field: &FieldRef) -> Alg {
        let rep = field.reduce(&rep);
        Alg { rep, field: field.clone() }
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    /// Representative polynomial in theta, reduced modulo the current modulus.
    pub fn representative(&self) -> RatPoly {
        self.field.reduce(&self.rep)
    }

    /// Rational approximation with absolute error below `tol`.
    pub fn approx(&self, tol: &BigRational) -> BigRational {
        let rep = self.representative();
        if rep.degree().unwrap_or(0) == 0 {
            return rep.coeff(0);
        }
        let mut width = tol.clone();
        loop {
            let theta = self.field.approx_generator(&width);
            let iv = self.field.interval();
            let (lo, hi) = if self.field.degree() == 1 {
                let v = rep.eval(&theta);
                (v.clone(), v)
            } else {
                eval_interval(&rep, &iv.lo, &iv.hi)
            };
            if &hi - &lo <= *tol {
                return rep.eval(&theta);
            }
            width = width / rat(1 << 20, 1);
        }
    }
}

impl fmt::Debug for Alg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alg({} ~ {:.6e})", self.representative(), self.to_f64())
    }
}

impl fmt::Display for Alg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_rational() {
            Some(q) => write!(f, "{}", format_rational(&q)),
            None => write!(f, "{:.17e}", self.to_f64()),
        }
    }
}

impl Ring for Alg {
    type Ctx = FieldRef;

    fn ctx(&self) -> FieldRef {
        self.field.clone()
    }
    fn zero(ctx: &FieldRef) -> Self {
        Alg { rep: RatPoly::zero(&()), field: ctx.clone() }
    }
    fn one(ctx: &FieldRef) -> Self {
        Alg { rep: RatPoly::one(&()), field: ctx.clone() }
    }
    fn from_rational(ctx: &FieldRef, q: &BigRational) -> Self {
        Alg { rep: RatPoly::constant(q.clone()), field: ctx.clone() }
    }
    fn add(&self, other: &Self) -> Self {
        Alg { rep: self.rep.add(&other.rep), field: self.field.clone() }
    }
    fn sub(&self, other: &Self) -> Self {
        Alg { rep: self.rep.sub(&other.rep), field: self.field.clone() }
    }
    fn mul(&self, other: &Self) -> Self {
        Alg::from_poly(self.rep.mul(&other.rep), &self.field)
    }
    fn neg(&self) -> Self {
        Alg { rep: self.rep.neg(), field: self.field.clone() }
    }
    fn scale(&self, q: &BigRational) -> Self {
        Alg { rep: self.rep.scale(q), field: self.field.clone() }
    }
}

impl Field for Alg {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let r = self.representative();
        let (g, s, _) = r.xgcd(&self.field.modulus());
        debug_assert_eq!(g.degree(), Some(0));
        Some(Alg::from_poly(s, &self.field))
    }

    fn is_zero(&self) -> bool {
        self.field.vanishes(&self.rep)
    }

    fn signum(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        loop {
            let rep = self.representative();
            if rep.degree().unwrap_or(0) == 0 {
                return rep.coeff(0).signum();
            }
            if self.field.degree() == 1 {
                let theta = self.field.approx_generator(&rat(1, 1));
                return rep.eval(&theta).signum();
            }
            let iv = self.field.interval();
            let (lo, hi) = eval_interval(&rep, &iv.lo, &iv.hi);
            if Field::signum(&lo) > 0 {
                return 1;
            }
            if Field::signum(&hi) < 0 {
                return -1;
            }
            self.field.bisect();
        }
    }

    fn to_f64(&self) -> f64 {
        let v = self.approx(&rat(1, 1));
        let mag = rational_to_f64(&v).abs().max(1e-300);
        let tol = BigRational::from_float(mag * 1e-19).unwrap_or_else(|| rat(1, 1 << 62));
        rational_to_f64(&self.approx(&tol))
    }

    fn to_rational(&self) -> Option<BigRational> {
        let rep = self.representative();
        match rep.degree() {
            None => Some(qzero()),
            Some(0) => Some(rep.coeff(0)),
            _ if self.field.degree() == 1 => {
                let theta = self.field.approx_generator(&rat(1, 1));
                Some(rep.eval(&theta))
            }
            _ => None,
        }
    }
}

impl PartialEq for Alg {
    fn eq(&self, other: &Self) -> bool {
        Rc::ptr_eq(&self.field, &other.field) && self.eq_exact(other)
    }
}

/// Convenience: evaluates a rational polynomial at an algebraic point.
pub fn eval_rat_poly(p: &RatPoly, x: &Alg) -> Alg {
    let ctx = x.ctx();
    p.coeffs()
        .iter()
        .rev()
        .fold(Alg::zero(&ctx), |acc, c| acc.mul(x).add(&Alg::from_rational(&ctx, c)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::new(c.iter().map(|&k| rat(k, 1)).collect(), &())
    }

    #[test]
    fn sqrt_two_arithmetic() {
        let k = NumberField::from_real_root(&p(&[-2, 0, 1]), 1).unwrap();
        let t = Alg::generator(&k);
        let two = Alg::from_int(&k, 2);
        assert!(t.mul(&t).eq_exact(&two));
        assert_eq!(t.signum(), 1);
        assert!((t.to_f64() - 2f64.sqrt()).abs() < 1e-15);
        let inv = t.inv().unwrap();
        assert!((inv.to_f64() - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(t.sub(&Alg::from_rational(&k, &rat(141421, 100000))).signum(), 1);
    }

    #[test]
    fn reducible_modulus_splits_on_demand() {
        // (x^2 - 2)(x - 3): generator chosen as 3
        let m = p(&[-2, 0, 1]).mul(&p(&[-3, 1]));
        let k = NumberField::from_real_root(&m, 2).unwrap();
        let t = Alg::generator(&k);
        let e = t.sub(&Alg::from_int(&k, 3));
        assert!(e.is_zero());
        assert_eq!(k.degree(), 1);
        assert_eq!(t.to_rational(), Some(rat(3, 1)));
    }

    #[test]
    fn zero_divisor_other_branch() {
        // generator is -sqrt(2); x - 3 is a zero divisor but nonzero at theta
        let m = p(&[-2, 0, 1]).mul(&p(&[-3, 1]));
        let k = NumberField::from_real_root(&m, 0).unwrap();
        let t = Alg::generator(&k);
        let e = t.sub(&Alg::from_int(&k, 3));
        assert!(!e.is_zero());
        assert_eq!(k.degree(), 2);
        let prod = e.mul(&e.inv().unwrap());
        assert!(prod.eq_exact(&Alg::one(&k)));
        assert_eq!(t.signum(), -1);
    }
}
