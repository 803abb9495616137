//! Exact scalar abstractions.
//!
//! Everything in the conditions engine is written against [`Field`], which is
//! implemented by [`BigRational`] and by [`crate::exact::Alg`] (elements of a
//! real number field). Elements carry a context handle so that constants can
//! be created without a global registry.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Commutative ring operations plus exact scaling by rationals.
///
/// Bivariate polynomials (used for symbolic elimination) only implement this
/// trait; scalars used for ranks and nullspaces implement [`Field`].
pub trait Ring: Clone + Debug {
    type Ctx: Clone + Debug;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_rational(ctx: &Self::Ctx, q: &BigRational) -> Self;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, q: &BigRational) -> Self;

    fn from_int(ctx: &Self::Ctx, k: i64) -> Self {
        Self::from_rational(ctx, &BigRational::from_integer(BigInt::from(k)))
    }
}

/// An exact field with a real embedding.
pub trait Field: Ring {
    /// `None` iff the element is zero.
    fn inv(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    /// Sign under the real embedding: -1, 0 or 1.
    fn signum(&self) -> i32;
    fn to_f64(&self) -> f64;
    /// The element as a rational number, if it is one.
    fn to_rational(&self) -> Option<BigRational>;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }

    fn eq_exact(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// Rescales polynomial coefficients by a positive constant to keep them
    /// small (remainder sequences); the default leaves them alone.
    fn shrink_coeffs(_coeffs: &mut [Self]) {}

    fn cmp_exact(&self, other: &Self) -> Ordering {
        match self.sub(other).signum() {
            s if s < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

impl Ring for BigRational {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero(_: &()) -> Self {
        <BigRational as Zero>::zero()
    }
    fn one(_: &()) -> Self {
        <BigRational as One>::one()
    }
    fn from_rational(_: &(), q: &BigRational) -> Self {
        q.clone()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, q: &BigRational) -> Self {
        self * q
    }
}

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn signum(&self) -> i32 {
        if Zero::is_zero(self) {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
    /// Primitive integer part with positive content.
    fn shrink_coeffs(coeffs: &mut [Self]) {
        if coeffs.iter().all(Zero::is_zero) {
            return;
        }
        let den = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let num = coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(&(c.numer() * (&den / c.denom()))));
        let s = BigRational::new(den, num);
        for c in coeffs.iter_mut() {
            *c = &*c * &s;
        }
    }
}

/// Correctly scaled conversion that survives numerators and denominators
/// beyond the f64 range.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(q) {
        if v.is_finite() {
            return v;
        }
    }
    let num = q.numer();
    let den = q.denom();
    let shift = num.bits() as i64 - den.bits() as i64;
    // bring the quotient into [2^-60, 2^60] before dividing
    let (n, d) = if shift > 0 {
        (num.clone(), den.clone() << (shift as usize))
    } else {
        (num.clone() << ((-shift) as usize), den.clone())
    };
    let head = ToPrimitive::to_f64(&BigRational::new(n, d)).unwrap_or(0.0);
    head * 2f64.powi(shift as i32)
}

/// Parses `"p/q"`, `"p"` or a decimal literal such as `"-0.125"` exactly.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Some(BigRational::from_integer(n));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let q = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    Some(if neg { -q } else { q })
}

/// `"num/den"` (or `"num"` for integers).
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn qzero() -> BigRational {
    <BigRational as Zero>::zero()
}

pub fn qone() -> BigRational {
    <BigRational as One>::one()
}

pub fn qis_zero(q: &BigRational) -> bool {
    <BigRational as Zero>::is_zero(q)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
