//! Real root isolation for rational polynomials (Sturm sequences, exact
//! bisection) and rational interval evaluation.

use num_rational::BigRational;
use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};

use super::field::{rat, Field};
use super::poly::RatPoly;

/// A half-open rational interval `(lo, hi]` isolating one simple root.
#[derive(Clone, Debug, PartialEq)]
pub struct RootInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootInterval {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / rat(2, 1)
    }
}

pub fn sign_at(p: &RatPoly, x: &BigRational) -> i32 {
    if !p.coeffs().iter().all(|c| c.is_integer()) {
        return Field::signum(&p.eval(x));
    }
    // Homogeneous Horner over the integers: d^deg * p(n/d) has the sign of p(x).
    let (n, d) = (x.numer(), x.denom());
    let mut acc = BigInt::zero();
    let mut dpow = BigInt::one();
    for c in p.coeffs().iter().rev() {
        acc = acc * n + c.numer() * &dpow;
        dpow *= d;
    }
    match acc.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

pub fn sturm_sequence(p: &RatPoly) -> Vec<RatPoly> {
    let mut seq = vec![p.shrunk(), p.derivative().shrunk()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let r = seq[n - 2].rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(r.neg().shrunk());
    }
    seq
}

fn variations(seq: &[RatPoly], x: &BigRational) -> usize {
    let signs: Vec<i32> = seq.iter().map(|q| sign_at(q, x)).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots in `(lo, hi]`.
pub fn count_roots(seq: &[RatPoly], lo: &BigRational, hi: &BigRational) -> usize {
    variations(seq, lo).saturating_sub(variations(seq, hi))
}

/// Isolates every distinct real root of `p` in `(lo, hi]`.
pub fn isolate_roots(p: &RatPoly, lo: &BigRational, hi: &BigRational) -> Vec<RootInterval> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let seq = sturm_sequence(p);
    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone())];
    while let Some((a, b)) = stack.pop() {
        match count_roots(&seq, &a, &b) {
            0 => {}
            1 => out.push(RootInterval { lo: a, hi: b }),
            _ => {
                let m = (&a + &b) / rat(2, 1);
                stack.push((m.clone(), b));
                stack.push((a, m));
            }
        }
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}

/// Shrinks an isolating interval of a squarefree polynomial until its width
/// is at most `width`. Endpoints never land on the root unless the root is
/// rational, in which case the degenerate interval `(r - w, r]` is returned.
pub fn refine(p: &RatPoly, iv: &RootInterval, width: &BigRational) -> RootInterval {
    refine_with(p, &sturm_sequence(p), iv, width)
}

/// [`refine`] with a precomputed Sturm sequence of `p`.
pub fn refine_with(p: &RatPoly, seq: &[RatPoly], iv: &RootInterval, width: &BigRational) -> RootInterval {
    let mut lo = iv.lo.clone();
    let mut hi = iv.hi.clone();
    if sign_at(p, &hi) == 0 {
        let lo = &hi - width;
        return RootInterval { lo, hi };
    }
    while &hi - &lo > *width {
        let m = (&lo + &hi) / rat(2, 1);
        if sign_at(p, &m) == 0 {
            let lo = &m - width;
            return RootInterval { lo, hi: m };
        }
        if count_roots(seq, &lo, &m) == 1 {
            hi = m;
        } else {
            lo = m;
        }
    }
    RootInterval { lo, hi }
}

/// Encloses `{p(x) : x in [lo, hi]}` with a rational interval.
pub fn eval_interval(p: &RatPoly, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
    let mut acc = (BigRational::zero(), BigRational::zero());
    for c in p.coeffs().iter().rev() {
        let cands = [&acc.0 * lo, &acc.0 * hi, &acc.1 * lo, &acc.1 * hi];
        let mn = cands.iter().min().unwrap().clone();
        let mx = cands.iter().max().unwrap().clone();
        acc = (mn + c, mx + c);
    }
    acc
}

/// Absolute bound on all complex roots (Cauchy).
pub fn root_bound(p: &RatPoly) -> BigRational {
    let lead = p.lead().expect("nonzero polynomial").abs();
    let m = p.coeffs().iter().map(|c| c.abs() / &lead).max().unwrap();
    m + rat(1, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::new(c.iter().map(|&k| rat(k, 1)).collect(), &())
    }

    #[test]
    fn isolates_roots_of_cubic() {
        // (x-1)(x-2)(x+3)
        let f = p(&[-1, 1]).mul(&p(&[-2, 1])).mul(&p(&[3, 1]));
        let ivs = isolate_roots(&f, &rat(-10, 1), &rat(10, 1));
        assert_eq!(ivs.len(), 3);
        let r = refine(&f, &ivs[1], &rat(1, 1_000_000));
        assert!(r.lo < rat(1, 1) && rat(1, 1) <= r.hi);
    }

    #[test]
    fn sqrt_two_refinement() {
        let f = p(&[-2, 0, 1]);
        let ivs = isolate_roots(&f, &rat(0, 1), &rat(4, 1));
        assert_eq!(ivs.len(), 1);
        let r = refine(&f, &ivs[0], &rat(1, 1 << 40));
        let m = r.midpoint().to_f64();
        assert!((m - 2f64.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn interval_enclosure_contains_values() {
        let f = p(&[1, -3, 0, 2]);
        let (lo, hi) = eval_interval(&f, &rat(-1, 2), &rat(3, 4));
        for k in 0..=10 {
            let x = rat(-1, 2) + rat(5, 4) * rat(k, 10);
            let v = f.eval(&x);
            assert!(lo <= v && v <= hi);
        }
    }
}
