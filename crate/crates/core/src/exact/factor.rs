//! Factorization of rational polynomials into irreducibles over Q
//! (Cantor–Zassenhaus modulo a word-sized prime, Hensel lifting, and
//! recombination of modular factors).
//!
//! Used to give every algebraic candidate its minimal number field: the
//! eliminants from the search carry spurious and rational factors that make
//! arithmetic in the full quotient ring needlessly expensive.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::Field;
use super::poly::RatPoly;

/// Beyond this many modular factors recombination is skipped and the input
/// is returned unfactored (still correct, only slower downstream).
pub const MAX_MODULAR_FACTORS: usize = 16;

const PRIME_TRIALS: usize = 6;

type Fp = Vec<u64>;

fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

fn fp_sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p).collect())
}

fn fp_mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            c[i + j] = (c[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim(c)
}

fn fp_divrem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let db = b.len() - 1;
    let li = inv_mod(b[db], p);
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = mulmod(r[k + db], li, p);
        q[k] = c;
        if c != 0 {
            for (j, &d) in b.iter().enumerate() {
                r[k + j] = (r[k + j] + p - mulmod(c, d, p)) % p;
            }
        }
    }
    r.truncate(db);
    (trim(q), trim(r))
}

fn fp_monic(a: &Fp, p: u64) -> Fp {
    match a.last() {
        Some(&l) => {
            let li = inv_mod(l, p);
            a.iter().map(|&c| mulmod(c, li, p)).collect()
        }
        None => Vec::new(),
    }
}

fn fp_gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = fp_divrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    fp_monic(&a, p)
}

/// `(g, s, t)` with `s a + t b = g` monic.
fn fp_xgcd(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp, Fp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (Fp, Fp) = (vec![1], Vec::new());
    let (mut t0, mut t1): (Fp, Fp) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        let s2 = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        let t2 = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        (r0, r1, s0, s1, t0, t1) = (r1, r, s1, s2, t1, t2);
    }
    let li = inv_mod(*r0.last().unwrap(), p);
    let sc = |v: &Fp| v.iter().map(|&c| mulmod(c, li, p)).collect::<Fp>();
    (sc(&r0), sc(&s0), sc(&t0))
}

fn fp_derivative(a: &Fp, p: u64) -> Fp {
    trim(a.iter().enumerate().skip(1).map(|(k, &c)| mulmod(c, k as u64 % p, p)).collect())
}

/// `base^e mod m` for a big exponent.
fn fp_powmod(base: &Fp, e: &BigUint, m: &Fp, p: u64) -> Fp {
    let mut r: Fp = vec![1];
    let b = fp_divrem(base, m, p).1;
    for i in (0..e.bits()).rev() {
        r = fp_divrem(&fp_mul(&r, &r, p), m, p).1;
        if e.bit(i) {
            r = fp_divrem(&fp_mul(&r, &b, p), m, p).1;
        }
    }
    r
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn distinct_degree(f: &Fp, p: u64) -> Vec<(Fp, usize)> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let x: Fp = vec![0, 1];
    let mut h = x.clone();
    let mut d = 0;
    let pe = BigUint::from(p);
    while f.len() > 1 && 2 * (d + 1) <= f.len() - 1 {
        d += 1;
        h = fp_powmod(&h, &pe, &f, p);
        let g = fp_gcd(&f, &fp_sub(&h, &x, p), p);
        if g.len() > 1 {
            f = fp_divrem(&f, &g, p).0;
            h = fp_divrem(&h, &f, p).1;
            out.push((g, d));
        }
    }
    if f.len() > 1 {
        let deg = f.len() - 1;
        out.push((fp_monic(&f, p), deg));
    }
    out
}

/// Splits a product of distinct monic irreducibles of degree `d`.
fn equal_degree(f: &Fp, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Fp> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.clone()];
    }
    let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a: Fp = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let mut b = fp_powmod(&a, &e, f, p);
        b = fp_sub(&b, &vec![1], p);
        let g = fp_gcd(f, &b, p);
        if g.len() > 1 && g.len() < f.len() {
            let h = fp_monic(&fp_divrem(f, &g, p).0, p);
            let mut out = equal_degree(&g, d, p, rng);
            out.extend(equal_degree(&h, d, p, rng));
            return out;
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

fn reduce(f: &[BigInt], p: u64) -> Fp {
    let pb = BigInt::from(p);
    trim(f.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect())
}

fn modp(f: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    f.iter().map(|c| c.mod_floor(m)).collect()
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    c
}

fn zsub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
        .collect()
}

fn zadd_scaled(a: &[BigInt], b: &Fp, m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() + m * BigInt::from(b.get(i).copied().unwrap_or(0)))
        .collect()
}

fn lift_fp(a: &Fp) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lifts `f = g h (mod p)` with `g` monic and `gcd(g, h) = 1 (mod p)` to a
/// factorization modulo `target` (a power of `p`). `f` is known modulo
/// `target`.
fn hensel_pair(f: &[BigInt], g: &Fp, h: &Fp, p: u64, target: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let (_, s, t) = fp_xgcd(g, h, p);
    let pb = BigInt::from(p);
    let mut gz = lift_fp(g);
    let mut hz = lift_fp(h);
    // The leading coefficient of h must be that of f modulo every power.
    let lead = f.last().unwrap().clone();
    *hz.last_mut().unwrap() = lead.mod_floor(target);
    let mut m = pb.clone();
    while &m < target {
        let next = &m * &pb;
        let diff = modp(&zsub(f, &zmul(&gz, &hz)), &next);
        let e: Fp = trim(diff.iter().map(|c| (c / &m).mod_floor(&pb).to_u64().unwrap()).collect());
        if !e.is_empty() {
            let et = fp_mul(&e, &t, p);
            let (q, dg) = fp_divrem(&et, g, p);
            // h dg + g dh = e, with deg dh < deg h.
            let dh = fp_add(&fp_mul(&e, &s, p), &fp_mul(&q, h, p), p);
            gz = zadd_scaled(&gz, &dg, &m);
            hz = zadd_scaled(&hz, &dh, &m);
        }
        m = next;
        gz = modp(&gz, &m);
        hz = modp(&hz, &m);
    }
    (modp(&gz, target), modp(&hz, target))
}

fn fp_add(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p).collect())
}

/// Lifts the monic modular factors of `f` (leading coefficient `lc`) to
/// monic factors modulo `target`.
fn hensel_multi(f: &[BigInt], factors: &[Fp], p: u64, target: &BigInt) -> Vec<Vec<BigInt>> {
    if factors.len() == 1 {
        let li = f.last().unwrap().modinv(target).expect("leading coefficient is a unit");
        return vec![modp(&f.iter().map(|c| c * &li).collect::<Vec<_>>(), target)];
    }
    let lc = reduce(&[f.last().unwrap().clone()], p)[0];
    let rest = factors[1..].iter().fold(vec![lc], |acc, g| fp_mul(&acc, g, p));
    let (g, h) = hensel_pair(f, &factors[0], &rest, p, target);
    let mut out = vec![g];
    out.extend(hensel_multi(&h, &factors[1..], p, target));
    out
}

fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn to_int_primitive(f: &RatPoly) -> Vec<BigInt> {
    let mut c = f.coeffs().to_vec();
    BigRational::shrink_coeffs(&mut c);
    let mut v: Vec<BigInt> = c.iter().map(|q| q.numer().clone()).collect();
    if v.last().is_some_and(|l| l.is_negative()) {
        v.iter_mut().for_each(|x| *x = -&*x);
    }
    v
}

fn from_int(v: &[BigInt]) -> RatPoly {
    RatPoly::new(v.iter().map(|c| BigRational::from_integer(c.clone())).collect(), &())
}

fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    to_int_primitive(&from_int(v))
}

/// Exact quotient over the integers, if `d` divides `f`.
fn zdiv(f: &[BigInt], d: &[BigInt]) -> Option<Vec<BigInt>> {
    let (q, r) = from_int(f).divrem(&from_int(d));
    if !r.is_zero() || !q.coeffs().iter().all(|c| c.is_integer()) {
        return None;
    }
    Some(q.coeffs().iter().map(|c| c.numer().clone()).collect())
}

/// Modular factorization data for the best of a few primes.
fn modular_factors(f: &[BigInt], rng: &mut ChaCha8Rng) -> Option<(u64, Vec<Fp>)> {
    let mut best: Option<(u64, Vec<Fp>)> = None;
    let mut cand = (1u64 << 31) - 1;
    let mut tried = 0;
    while tried < PRIME_TRIALS && cand > 3 {
        cand -= 2;
        if !is_prime(cand) {
            continue;
        }
        let p = cand;
        let fp = reduce(f, p);
        if fp.len() != f.len() {
            continue;
        }
        if fp_gcd(&fp, &fp_derivative(&fp, p), p).len() > 1 {
            continue;
        }
        tried += 1;
        let monic = fp_monic(&fp, p);
        let mut facs = Vec::new();
        for (g, d) in distinct_degree(&monic, p) {
            facs.extend(equal_degree(&g, d, p, rng));
        }
        if best.as_ref().map_or(true, |(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        if best.as_ref().is_some_and(|(_, b)| b.len() == 1) {
            break;
        }
    }
    best
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    super::linalg::combinations(n, k)
}

/// Factors of a squarefree polynomial over Q, each primitive with integer
/// coefficients and positive leading coefficient. Irreducible unless the
/// modular factorization is too fragmented, in which case the (primitive)
/// input is returned; see [`irreducible_factors`].
pub fn factor_squarefree(f: &RatPoly) -> Vec<RatPoly> {
    irreducible_factors(f).unwrap_or_else(|| vec![from_int(&to_int_primitive(f))])
}

/// Irreducible factors over Q of a squarefree polynomial, or `None` when
/// recombination would be too expensive.
pub fn irreducible_factors(f: &RatPoly) -> Option<Vec<RatPoly>> {
    let f0 = to_int_primitive(f);
    let deg = f0.len().saturating_sub(1);
    if deg <= 1 {
        return Some(vec![from_int(&f0)]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(deg as u64);
    let (p, facs) = modular_factors(&f0, &mut rng)?;
    if facs.len() == 1 {
        return Some(vec![from_int(&f0)]);
    }
    if facs.len() > MAX_MODULAR_FACTORS {
        return None;
    }
    // Coefficient bound for any factor, times the leading coefficient.
    let norm2: BigInt = f0.iter().map(|c| c * c).sum();
    let bound = (BigInt::one() << (deg + 1)) * (norm2.sqrt() + 1u32) * f0.last().unwrap();
    let pb = BigInt::from(p);
    let mut target = pb.clone();
    while target < bound {
        target *= &pb;
    }
    let mut lifted = hensel_multi(&f0, &facs, p, &target);
    let mut rest = f0;
    let mut out = Vec::new();
    let mut k = 1;
    while 2 * k <= lifted.len() {
        let mut found = None;
        for s in subsets(lifted.len(), k) {
            let lc = rest.last().unwrap().clone();
            let prod = s.iter().fold(vec![lc.clone()], |acc, &i| modp(&zmul(&acc, &lifted[i]), &target));
            let cand = primitive(&prod.iter().map(|c| symmetric(c, &target)).collect::<Vec<_>>());
            if let Some(q) = zdiv(&rest, &cand) {
                found = Some((s, cand, q));
                break;
            }
        }
        match found {
            Some((s, cand, q)) => {
                out.push(from_int(&cand));
                rest = primitive(&q);
                lifted = lifted.into_iter().enumerate().filter(|(i, _)| !s.contains(i)).map(|(_, g)| g).collect();
            }
            None => k += 1,
        }
    }
    out.push(from_int(&rest));
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn p(c: &[i64]) -> RatPoly {
        RatPoly::new(c.iter().map(|&k| rat(k, 1)).collect(), &())
    }

    fn product(fs: &[RatPoly]) -> RatPoly {
        fs.iter().fold(p(&[1]), |acc, f| acc.mul(f))
    }

    #[test]
    fn splits_known_product() {
        let parts = [p(&[-2, 0, 1]), p(&[-1, -1, 0, 1]), p(&[-3, 7]), p(&[1, 0, 0, 0, 1])];
        let f = product(&parts);
        let fs = factor_squarefree(&f);
        assert_eq!(fs.len(), 4);
        assert!(product(&fs).monic().eq_exact(&f.monic()));
        let mut degs: Vec<usize> = fs.iter().map(|g| g.degree().unwrap()).collect();
        degs.sort();
        assert_eq!(degs, [1, 2, 3, 4]);
    }

    #[test]
    fn irreducible_with_many_modular_factors() {
        // x^4 + 1 splits modulo every prime but is irreducible over Q.
        let fs = irreducible_factors(&p(&[1, 0, 0, 0, 1])).unwrap();
        assert_eq!(fs.len(), 1);
        // (x^2 - 2)(x^2 - 3) versus the irreducible x^4 - 10x^2 + 1.
        assert_eq!(factor_squarefree(&p(&[6, 0, -5, 0, 1])).len(), 2);
        assert_eq!(factor_squarefree(&p(&[1, 0, -10, 0, 1])).len(), 1);
    }

    #[test]
    fn large_leading_coefficient() {
        let parts = [p(&[5, -19 * 19]), p(&[-28, 19]), p(&[3, 1, 12, 7])];
        let f = product(&parts);
        let fs = factor_squarefree(&f);
        assert_eq!(fs.len(), 3);
        assert!(product(&fs).monic().eq_exact(&f.monic()));
    }
}
