//! Polynomial Pell equations equivalent to periodicity.
//!
//! Each variant is an identity `M(s) p(s)^2 - W(s) q(s)^2 = r` with
//! polynomial multiplier `M`, weight `W` and a constant `r`. Solutions are
//! found in the variable `x = 1/s`, where the identity becomes the
//! requirement that `p*(x) + q*(x) S(x)` vanish to order `n` at `x = 0` for
//! the matching normalised series `S`. That is a linear system whose
//! nullspace is nontrivial exactly when the Hankel rank test passes.
//!
//! The classical identities have right-hand side `1`, `eps` or `-1`. With
//! `p*` monic the raw right-hand side is `sign * norm` where `norm > 0`
//! depends on the caustic parameters; dividing `p` and `q` by `sqrt(norm)`
//! gives the unit form, which in general leaves the field of definition, so
//! the raw pair and `norm` are what is stored.

use std::fmt;

use num_rational::BigRational;
use serde_json::{json, Value};

use crate::conditions::params::{HyperellipticParams, G2};
use crate::conditions::series::{kind_coeffs, SeriesKind};
use crate::conditions::Block;
use crate::confocal::CausticCase;
use crate::error::{ConditionError, PellError};
use crate::exact::linalg::nullspace;
use crate::exact::{Alg, Field, FieldRef, NumberField, Poly, RatPoly, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PellVariant {
    EvenA,
    EvenB,
    OddC,
    OddD,
    DoubleA,
    DoubleB,
    LightEven,
    LightOdd,
}

impl PellVariant {
    pub const ALL: [PellVariant; 8] = [
        PellVariant::EvenA,
        PellVariant::EvenB,
        PellVariant::OddC,
        PellVariant::OddD,
        PellVariant::DoubleA,
        PellVariant::DoubleB,
        PellVariant::LightEven,
        PellVariant::LightOdd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PellVariant::EvenA => "EvenA",
            PellVariant::EvenB => "EvenB",
            PellVariant::OddC => "OddC",
            PellVariant::OddD => "OddD",
            PellVariant::DoubleA => "DoubleA",
            PellVariant::DoubleB => "DoubleB",
            PellVariant::LightEven => "LightEven",
            PellVariant::LightOdd => "LightOdd",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.name().eq_ignore_ascii_case(s))
    }

    pub fn series_kind(self) -> SeriesKind {
        match self {
            PellVariant::EvenA => SeriesKind::A,
            PellVariant::EvenB => SeriesKind::B,
            PellVariant::OddC => SeriesKind::C,
            PellVariant::OddD => SeriesKind::D,
            PellVariant::DoubleA => SeriesKind::DoubleA,
            PellVariant::DoubleB => SeriesKind::DoubleB,
            PellVariant::LightEven => SeriesKind::LightA,
            PellVariant::LightOdd => SeriesKind::LightB,
        }
    }

    pub fn from_series_kind(kind: SeriesKind) -> Self {
        match kind {
            SeriesKind::A => PellVariant::EvenA,
            SeriesKind::B => PellVariant::EvenB,
            SeriesKind::C => PellVariant::OddC,
            SeriesKind::D => PellVariant::OddD,
            SeriesKind::DoubleA => PellVariant::DoubleA,
            SeriesKind::DoubleB => PellVariant::DoubleB,
            SeriesKind::LightA => PellVariant::LightEven,
            SeriesKind::LightB => PellVariant::LightOdd,
        }
    }

    fn block(self, n: usize) -> Option<Block> {
        let kind = self.series_kind();
        match self {
            PellVariant::EvenA | PellVariant::DoubleA | PellVariant::LightEven => Block::a_type(kind, n),
            PellVariant::EvenB | PellVariant::DoubleB => Block::b_type(kind, n),
            PellVariant::OddC | PellVariant::OddD | PellVariant::LightOdd => Block::odd_type(kind, n),
        }
    }

    /// `(deg p, deg q)` for period `n`, or `None` if `n` has the wrong
    /// parity or is below the threshold of the variant.
    pub fn degrees(self, n: usize) -> Option<(usize, usize)> {
        self.block(n)?;
        let m = n / 2;
        Some(match self {
            PellVariant::EvenA | PellVariant::DoubleA | PellVariant::LightEven => (m, m - 3),
            PellVariant::EvenB | PellVariant::DoubleB => (m - 1, m - 2),
            PellVariant::OddC | PellVariant::OddD | PellVariant::LightOdd => (m, m - 2),
        })
    }

    fn threshold_message(self, n: usize) -> String {
        let (parity, min) = match self {
            PellVariant::EvenA | PellVariant::DoubleA | PellVariant::LightEven => ("even", 6),
            PellVariant::EvenB | PellVariant::DoubleB => ("even", 4),
            PellVariant::OddC | PellVariant::OddD | PellVariant::LightOdd => ("odd", 5),
        };
        format!("variant {} needs {parity} n >= {min} (got {n})", self.name())
    }

    fn is_double(self) -> bool {
        matches!(self, PellVariant::DoubleA | PellVariant::DoubleB)
    }

    fn is_light(self) -> bool {
        matches!(self, PellVariant::LightEven | PellVariant::LightOdd)
    }

    /// The even variant whose identity a composed solution satisfies.
    fn composite(self) -> PellVariant {
        if self.is_double() {
            PellVariant::DoubleA
        } else if self.is_light() {
            PellVariant::LightEven
        } else {
            PellVariant::EvenA
        }
    }
}

impl fmt::Display for PellVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Variants whose solvability is equivalent to the rank test of
/// `(case, n)`, in the same order as the rank test's alternatives.
pub fn variants_for(case: CausticCase, n: usize) -> Vec<PellVariant> {
    crate::conditions::blocks_for(case, n).iter().map(|b| PellVariant::from_series_kind(b.kind)).collect()
}

#[derive(Clone, Debug)]
pub struct PellSolution<F: Field> {
    pub p: Poly<F>,
    pub q: Poly<F>,
    pub variant: PellVariant,
    pub n: usize,
    /// Positive constant with `M p^2 - W q^2 = sign * norm`.
    pub norm: F,
    pub params: HyperellipticParams<F>,
}

/// Multiplier `M(s)`, weight `W(s)`, sign of the right-hand side and the
/// norm of a variant, all in the variable `s`.
struct Identity<F: Field> {
    mult: Poly<F>,
    weight: Poly<F>,
    sign: i32,
    norm: F,
}

fn identity<F: Field>(variant: PellVariant, params: &HyperellipticParams<F>) -> Result<Identity<F>, PellError> {
    let [s1, s2, s3, u, w] = params.reciprocals().map_err(|_| PellError::SingularCurve)?;
    let ctx = params.ctx();
    let one = Poly::one(&ctx);
    let s = Poly::x(&ctx);
    let lin = |r: &F| Poly::linear_root(r);
    let w3 = s.mul(&lin(&s1)).mul(&lin(&s2)).mul(&lin(&s3));
    let abs = |x: F| if x.signum() < 0 { x.neg() } else { x };
    let f1 = F::one(&ctx);
    let eps = params.epsilon();
    let (mult, weight, sign, norm) = match variant {
        PellVariant::EvenA => (one, w3.mul(&lin(&u)).mul(&lin(&w)), 1, f1),
        PellVariant::EvenB => (lin(&u).mul(&lin(&w)), w3, eps, abs(u.mul(&w))),
        PellVariant::OddC => (lin(&u), w3.mul(&lin(&w)), -1, abs(u.clone())),
        PellVariant::OddD => (lin(&w), w3.mul(&lin(&u)), 1, abs(w.clone())),
        PellVariant::DoubleA => (one, w3.mul(&lin(&u).square()), 1, f1),
        PellVariant::DoubleB => (lin(&u).square(), w3, 1, u.mul(&u)),
        PellVariant::LightEven => (one, s.mul(&w3).mul(&lin(&u)), 1, f1),
        PellVariant::LightOdd => (lin(&u), s.mul(&w3), -1, abs(u.clone())),
    };
    Ok(Identity { mult, weight, sign, norm })
}

fn check_variant<F: Field>(params: &HyperellipticParams<F>, variant: PellVariant) -> Result<(), PellError> {
    params.validate().map_err(|_| PellError::SingularCurve)?;
    if variant.is_double() != params.is_double() || variant.is_light() != params.is_light() {
        return Err(PellError::ThresholdViolation(format!(
            "variant {} does not match the caustic parameters",
            variant.name()
        )));
    }
    Ok(())
}

/// Solves the Pell identity of `variant` for period `n`; `None` iff the
/// vanishing-order system has only the trivial solution.
pub fn solve_pell<F: Field>(
    params: &HyperellipticParams<F>,
    n: usize,
    variant: PellVariant,
) -> Result<Option<PellSolution<F>>, PellError> {
    let (dp, dq) = variant.degrees(n).ok_or_else(|| PellError::ThresholdViolation(variant.threshold_message(n)))?;
    check_variant(params, variant)?;
    let ctx = params.ctx();
    let s = params.reciprocals().map_err(|_| PellError::SingularCurve)?;
    let series = kind_coeffs(variant.series_kind(), &s, n - 1, &ctx);

    // Unknowns [p*_0..p*_dp, q*_0..q*_dq]; row k is the x^k coefficient of
    // p*(x) + q*(x) S(x).
    let cols = dp + dq + 2;
    let base: Vec<Vec<F>> = (0..n)
        .map(|k| {
            let mut row = vec![F::zero(&ctx); cols];
            if k <= dp {
                row[k] = F::one(&ctx);
            }
            for j in 0..=dq.min(k) {
                row[dp + 1 + j] = series[k - j].clone();
            }
            row
        })
        .collect();

    // Smallest degree of q admitting a solution.
    let mut chosen = None;
    for t in 0..=dq {
        let mut m = base.clone();
        for j in t + 1..=dq {
            let mut row = vec![F::zero(&ctx); cols];
            row[dp + 1 + j] = F::one(&ctx);
            m.push(row);
        }
        let ns = nullspace(&m, cols, &ctx);
        if !ns.is_empty() {
            chosen = Some(ns);
            break;
        }
    }
    let Some(ns) = chosen else {
        return Ok(None);
    };
    let v = ns.iter().find(|v| !v[dp].is_zero()).unwrap_or(&ns[0]);
    let lead = if v[dp].is_zero() { v.iter().find(|c| !c.is_zero()).expect("nonzero vector") } else { &v[dp] };
    let inv = lead.inv().expect("nonzero");
    let v: Vec<F> = v.iter().map(|c| c.mul(&inv)).collect();

    let p_star = Poly::new(v[..=dp].to_vec(), &ctx);
    let q_star = Poly::new(v[dp + 1..].to_vec(), &ctx);
    let norm = identity(variant, params)?.norm;
    Ok(Some(PellSolution {
        p: p_star.reciprocal(dp),
        q: q_star.reciprocal(dq),
        variant,
        n,
        norm,
        params: params.clone(),
    }))
}

/// Exact check of degrees, norm and the polynomial identity.
pub fn verify_pell<F: Field>(sol: &PellSolution<F>) -> bool {
    let Some((dp, dq)) = sol.variant.degrees(sol.n) else {
        return false;
    };
    if check_variant(&sol.params, sol.variant).is_err() {
        return false;
    }
    if sol.p.degree() != Some(dp) || sol.q.degree().is_some_and(|d| d > dq) {
        return false;
    }
    let Ok(id) = identity(sol.variant, &sol.params) else {
        return false;
    };
    if !sol.norm.eq_exact(&id.norm) {
        return false;
    }
    let rhs = if id.sign < 0 { id.norm.neg() } else { id.norm.clone() };
    let lhs = id.mult.mul(&sol.p.square()).sub(&id.weight.mul(&sol.q.square()));
    lhs.eq_exact(&Poly::constant(rhs))
}

/// Builds `p^ = (2 M p^2 - sign * norm) / norm`, `q^ = 2 p q / norm`, which
/// satisfy `p^2 - (M W) q^2 = 1` with `deg p^ = n`, `deg q^ = n - 3`. The
/// result is returned as the solution of the even variant for period `2n`
/// (whose degrees are exactly `(n, n - 3)`).
pub fn compose_pell<F: Field>(sol: &PellSolution<F>) -> Result<PellSolution<F>, PellError> {
    if !verify_pell(sol) {
        return Err(PellError::UnverifiedInput);
    }
    let id = identity(sol.variant, &sol.params)?;
    let c_inv = id.norm.inv().ok_or(PellError::SingularCurve)?;
    let ctx = sol.params.ctx();
    let two = F::from_int(&ctx, 2);
    let signed = if id.sign < 0 { id.norm.neg() } else { id.norm.clone() };
    let p_hat = id.mult.mul(&sol.p.square()).scale(&two).sub(&Poly::constant(signed)).scale(&c_inv);
    let q_hat = sol.p.mul(&sol.q).scale(&two).scale(&c_inv);
    Ok(PellSolution {
        p: p_hat,
        q: q_hat,
        variant: sol.variant.composite(),
        n: 2 * sol.n,
        norm: F::one(&ctx),
        params: sol.params.clone(),
    })
}

/// Pell solutions for a double caustic (`gamma2 = gamma1`) or the
/// light-like limit. Parity mismatches and odd light-like periods with a
/// hyperboloid caustic are absent rather than errors.
pub fn solve_pell_singular<F: Field>(
    a: &[F; 3],
    gamma1: &F,
    n: usize,
    which: PellVariant,
) -> Result<Option<PellSolution<F>>, PellError> {
    let gamma2 = match which {
        PellVariant::DoubleA | PellVariant::DoubleB => G2::Finite(gamma1.clone()),
        PellVariant::LightEven | PellVariant::LightOdd => G2::Infinity,
        _ => return Err(PellError::ThresholdViolation(format!("{} is not a singular variant", which.name()))),
    };
    let params = HyperellipticParams { a: a.clone(), gamma1: gamma1.clone(), gamma2 };
    let expected = if which.is_double() { CausticCase::DoubleCaustic } else { CausticCase::LightLike };
    match params.case() {
        Ok(c) if c == expected => {}
        Err(ConditionError::SingularCurve | ConditionError::ZeroGamma) => return Err(PellError::SingularCurve),
        _ => return Err(PellError::ThresholdViolation(format!("gamma1 out of range for {}", which.name()))),
    }
    let wants_even = matches!(which, PellVariant::DoubleA | PellVariant::DoubleB | PellVariant::LightEven);
    if (n % 2 == 0) != wants_even {
        return Ok(None);
    }
    if which == PellVariant::LightOdd && gamma1.cmp_exact(&a[1]).is_gt() {
        return Ok(None);
    }
    let sol = solve_pell(&params, n, which)?;
    Ok(sol.filter(verify_pell))
}

// ---------------------------------------------------------------------------
// Certificates

fn num_den(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn parse_q(v: &Value) -> Result<BigRational, String> {
    let s = v.as_str().ok_or_else(|| format!("expected a rational string, got {v}"))?;
    crate::exact::parse_rational(s).ok_or_else(|| format!("bad rational {s:?}"))
}

/// Scalars that can be written into and read back from a certificate.
pub trait CertScalar: Field {
    fn to_cert(&self) -> Value;
    fn field_cert(ctx: &Self::Ctx) -> Option<Value>;
}

impl CertScalar for BigRational {
    fn to_cert(&self) -> Value {
        Value::String(num_den(self))
    }
    fn field_cert(_: &()) -> Option<Value> {
        None
    }
}

impl CertScalar for Alg {
    /// Rational elements as strings, others as coefficient lists in theta.
    fn to_cert(&self) -> Value {
        match self.to_rational() {
            Some(q) => Value::String(num_den(&q)),
            None => Value::Array(self.representative().coeffs().iter().map(|c| Value::String(num_den(c))).collect()),
        }
    }
    fn field_cert(ctx: &FieldRef) -> Option<Value> {
        if ctx.degree() <= 1 {
            return None;
        }
        let iv = ctx.interval();
        Some(json!({
            "modulus": ctx.modulus().coeffs().iter().map(num_den).collect::<Vec<_>>(),
            "interval": [num_den(&iv.lo), num_den(&iv.hi)],
        }))
    }
}

/// JSON certificate `{variant, n, params, p_coeffs, q_coeffs, norm}` plus
/// `field` when the coefficients live in a number field.
pub fn certificate<F: CertScalar>(sol: &PellSolution<F>) -> Value {
    let ps = &sol.params;
    let mut params = json!({
        "a": ps.a.iter().map(CertScalar::to_cert).collect::<Vec<_>>(),
        "gamma1": ps.gamma1.to_cert(),
        "gamma2": match &ps.gamma2 {
            G2::Finite(g) => g.to_cert(),
            G2::Infinity => Value::String("inf".into()),
        },
    });
    if ps.is_light() {
        params["gamma2"] = Value::String("inf".into());
    }
    let mut out = json!({
        "variant": sol.variant.name(),
        "n": sol.n,
        "params": params,
        "p_coeffs": sol.p.coeffs().iter().map(CertScalar::to_cert).collect::<Vec<_>>(),
        "q_coeffs": sol.q.coeffs().iter().map(CertScalar::to_cert).collect::<Vec<_>>(),
        "norm": sol.norm.to_cert(),
    });
    if let Some(f) = F::field_cert(&ps.ctx()) {
        out["field"] = f;
    }
    out
}

/// A parsed certificate, over the rationals or over a number field.
#[derive(Clone, Debug)]
pub enum Certificate {
    Rational(PellSolution<BigRational>),
    Algebraic(PellSolution<Alg>),
}

impl Certificate {
    pub fn verify(&self) -> bool {
        match self {
            Certificate::Rational(s) => verify_pell(s),
            Certificate::Algebraic(s) => verify_pell(s),
        }
    }

    pub fn variant(&self) -> PellVariant {
        match self {
            Certificate::Rational(s) => s.variant,
            Certificate::Algebraic(s) => s.variant,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Certificate::Rational(s) => s.n,
            Certificate::Algebraic(s) => s.n,
        }
    }
}

fn parse_solution<F: Field>(v: &Value, scalar: &dyn Fn(&Value) -> Result<F, String>, ctx: &F::Ctx) -> Result<PellSolution<F>, String> {
    let get = |k: &str| v.get(k).ok_or_else(|| format!("missing field {k:?}"));
    let variant = get("variant")?
        .as_str()
        .and_then(PellVariant::parse)
        .ok_or_else(|| "unknown variant".to_string())?;
    let n = get("n")?.as_u64().ok_or("n must be a non-negative integer")? as usize;
    let params = get("params")?;
    let a = params.get("a").and_then(Value::as_array).ok_or("params.a must be a list")?;
    if a.len() != 3 {
        return Err("params.a must have three entries".into());
    }
    let a = [scalar(&a[0])?, scalar(&a[1])?, scalar(&a[2])?];
    let gamma1 = scalar(params.get("gamma1").ok_or("missing params.gamma1")?)?;
    let gamma2 = match params.get("gamma2").ok_or("missing params.gamma2")? {
        Value::String(s) if s == "inf" => G2::Infinity,
        g => G2::Finite(scalar(g)?),
    };
    let list = |k: &str| -> Result<Poly<F>, String> {
        let xs = get(k)?.as_array().ok_or_else(|| format!("{k} must be a list"))?;
        Ok(Poly::new(xs.iter().map(scalar).collect::<Result<_, _>>()?, ctx))
    };
    Ok(PellSolution {
        p: list("p_coeffs")?,
        q: list("q_coeffs")?,
        variant,
        n,
        norm: scalar(get("norm")?)?,
        params: HyperellipticParams { a, gamma1, gamma2 },
    })
}

pub fn parse_certificate(v: &Value) -> Result<Certificate, String> {
    match v.get("field") {
        None | Some(Value::Null) => {
            let sol = parse_solution(v, &parse_q, &())?;
            Ok(Certificate::Rational(sol))
        }
        Some(f) => {
            let modulus = f.get("modulus").and_then(Value::as_array).ok_or("field.modulus must be a list")?;
            let modulus = RatPoly::new(modulus.iter().map(parse_q).collect::<Result<_, _>>()?, &());
            let iv = f.get("interval").and_then(Value::as_array).ok_or("field.interval must be a pair")?;
            if iv.len() != 2 {
                return Err("field.interval must be a pair".into());
            }
            let field = NumberField::new(&modulus, parse_q(&iv[0])?, parse_q(&iv[1])?).map_err(|e| e.to_string())?;
            let scalar = |v: &Value| -> Result<Alg, String> {
                match v {
                    Value::Array(cs) => {
                        let rep = RatPoly::new(cs.iter().map(parse_q).collect::<Result<_, _>>()?, &());
                        Ok(Alg::from_poly(rep, &field))
                    }
                    _ => Ok(Alg::from_rational(&field, &parse_q(v)?)),
                }
            };
            let sol = parse_solution(v, &scalar, &field)?;
            Ok(Certificate::Algebraic(sol))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::{cayley_test, RatParams};
    use crate::exact::rat;

    #[test]
    fn reciprocal_substitution() {
        let p = RatPoly::new(vec![rat(-1, 1), rat(0, 1), rat(1, 1)], &());
        assert!(p.reciprocal(2).eq_exact(&RatPoly::new(vec![rat(1, 1), rat(0, 1), rat(-1, 1)], &())));
    }

    #[test]
    fn thresholds() {
        let p = RatParams::from_ints([4, 2, 1], (1, 1), Some((-1, 2)));
        assert!(matches!(solve_pell(&p, 4, PellVariant::EvenA), Err(PellError::ThresholdViolation(_))));
        assert!(matches!(solve_pell(&p, 5, PellVariant::EvenB), Err(PellError::ThresholdViolation(_))));
        assert_eq!(PellVariant::OddC.degrees(5), Some((2, 0)));
        assert_eq!(PellVariant::EvenB.degrees(4), Some((1, 0)));
        assert_eq!(PellVariant::EvenA.degrees(6), Some((3, 0)));
    }

    #[test]
    fn generic_parameters_have_no_solution() {
        let p = RatParams::from_ints([4, 2, 1], (1, 1), Some((-1, 2)));
        for n in 4..9 {
            for v in variants_for(CausticCase::S1, n) {
                assert!(solve_pell(&p, n, v).unwrap().is_none());
            }
            assert_eq!(cayley_test(&p, CausticCase::S1, n), Ok(false));
        }
    }

    #[test]
    fn degenerate_pair_rejected() {
        let p = RatParams::from_ints([4, 2, 1], (1, 1), Some((-1, 2)));
        let ctx = ();
        let sol = PellSolution {
            p: RatPoly::one(&ctx),
            q: RatPoly::zero(&ctx),
            variant: PellVariant::EvenA,
            n: 6,
            norm: rat(1, 1),
            params: p,
        };
        assert!(!verify_pell(&sol));
    }

    #[test]
    fn singular_parity() {
        let a = [rat(4, 1), rat(2, 1), rat(1, 1)];
        assert!(solve_pell_singular(&a, &rat(3, 1), 5, PellVariant::DoubleA).unwrap().is_none());
        assert!(solve_pell_singular(&a, &rat(3, 1), 5, PellVariant::LightOdd).unwrap().is_none());
    }
}
