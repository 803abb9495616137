//! Continued-fraction rationalization of floats.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Default denominator bound for rationalizing simulator output.
pub const DEFAULT_DENOM_BOUND: u64 = 1_000_000_000;

/// Best rational approximation of `x` with denominator at most `bound`
/// (last convergent or semiconvergent within the bound).
pub fn rationalize(x: f64, bound: u64) -> Option<BigRational> {
    if !x.is_finite() || bound == 0 {
        return None;
    }
    let exact = BigRational::from_float(x)?;
    let bound = BigInt::from(bound);
    let (mut p0, mut q0) = (BigInt::from(0), BigInt::from(1));
    let (mut p1, mut q1) = (BigInt::from(1), BigInt::from(0));
    let mut rest = exact.clone();
    loop {
        let a = rest.floor().to_integer();
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if q2 > bound {
            // largest semiconvergent that still fits
            let k = (&bound - &q0) / &q1;
            let ps = &k * &p1 + &p0;
            let qs = &k * &q1 + &q0;
            let cand_conv = BigRational::new(p1.clone(), q1.clone());
            if k > BigInt::zero() {
                let cand_semi = BigRational::new(ps, qs);
                let e1 = (&cand_conv - &exact).abs();
                let e2 = (&cand_semi - &exact).abs();
                return Some(if e2 < e1 { cand_semi } else { cand_conv });
            }
            return Some(cand_conv);
        }
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let frac = &rest - BigRational::from_integer(a);
        if frac.is_zero() {
            return Some(BigRational::new(p1, q1));
        }
        rest = frac.recip();
    }
}
