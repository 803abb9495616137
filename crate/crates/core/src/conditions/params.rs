//! Exact parameters `(a1, a2, a3, gamma1, gamma2)` of the spectral curve.

use num_rational::BigRational;

use crate::confocal::{CausticCase, CausticPair, Ellipsoid, Gamma2};
use crate::error::ConditionError;
use crate::exact::Field;
use crate::mink::LineType;

/// Second caustic parameter over an exact field.
#[derive(Clone, Debug)]
pub enum G2<F> {
    Finite(F),
    Infinity,
}

#[derive(Clone, Debug)]
pub struct HyperellipticParams<F: Field> {
    pub a: [F; 3],
    pub gamma1: F,
    pub gamma2: G2<F>,
}

pub type RatParams = HyperellipticParams<BigRational>;

impl<F: Field> HyperellipticParams<F> {
    /// Orders the caustic parameters canonically: for opposite signs the
    /// positive one is `gamma1`; otherwise `gamma1 <= gamma2`.
    pub fn new(a: [F; 3], g1: F, g2: G2<F>) -> Self {
        let (gamma1, gamma2) = match g2 {
            G2::Finite(g2) => {
                let opposite = g1.signum() * g2.signum() < 0;
                let swap = if opposite { g1.signum() < 0 } else { g1.cmp_exact(&g2).is_gt() };
                if swap {
                    (g2, G2::Finite(g1))
                } else {
                    (g1, G2::Finite(g2))
                }
            }
            G2::Infinity => (g1, G2::Infinity),
        };
        HyperellipticParams { a, gamma1, gamma2 }
    }

    pub fn ctx(&self) -> F::Ctx {
        self.gamma1.ctx()
    }

    pub fn gamma2_finite(&self) -> Option<&F> {
        match &self.gamma2 {
            G2::Finite(g) => Some(g),
            G2::Infinity => None,
        }
    }

    /// `sign(gamma1 gamma2)`, with `+1` for the light-like limit.
    pub fn epsilon(&self) -> i32 {
        match &self.gamma2 {
            G2::Finite(g2) => self.gamma1.signum() * g2.signum(),
            G2::Infinity => 1,
        }
    }

    pub fn is_double(&self) -> bool {
        self.gamma2_finite().is_some_and(|g2| g2.eq_exact(&self.gamma1))
    }

    pub fn is_light(&self) -> bool {
        matches!(self.gamma2, G2::Infinity)
    }

    fn branch_values(&self) -> [F; 3] {
        let [a1, a2, a3] = &self.a;
        [a1.clone(), a2.clone(), a3.neg()]
    }

    /// Rejects invalid ellipsoids and caustic parameters that are zero or
    /// coincide with a branch value `a1, a2, -a3` (singular curve).
    pub fn validate(&self) -> Result<(), ConditionError> {
        let [a1, a2, a3] = &self.a;
        if !(a1.cmp_exact(a2).is_gt() && a2.signum() > 0 && a3.signum() > 0) {
            return Err(ConditionError::SingularCurve);
        }
        let mut gs = vec![&self.gamma1];
        if let Some(g2) = self.gamma2_finite() {
            gs.push(g2);
        }
        for g in gs {
            if g.is_zero() {
                return Err(ConditionError::ZeroGamma);
            }
            if self.branch_values().iter().any(|b| b.eq_exact(g)) {
                return Err(ConditionError::SingularCurve);
            }
        }
        Ok(())
    }

    /// Reciprocals of the roots of the spectral polynomial:
    /// `(1/a1, 1/a2, -1/a3, 1/gamma1, 1/gamma2)`; the last is `0` in the
    /// light-like limit.
    pub fn reciprocals(&self) -> Result<[F; 5], ConditionError> {
        self.validate()?;
        let inv = |x: &F| x.inv().ok_or(ConditionError::ZeroGamma);
        let [b1, b2, b3] = self.branch_values();
        let w = match &self.gamma2 {
            G2::Finite(g) => inv(g)?,
            G2::Infinity => F::zero(&self.ctx()),
        };
        Ok([inv(&b1)?, inv(&b2)?, inv(&b3)?, inv(&self.gamma1)?, w])
    }

    fn slot(&self, g: &F) -> Option<u8> {
        let [a1, a2, a3] = &self.a;
        let lt = |x: &F, y: &F| x.cmp_exact(y).is_lt();
        if lt(g, &a3.neg()) {
            Some(0)
        } else if lt(&a3.neg(), g) && lt(g, a2) && !g.is_zero() {
            Some(1)
        } else if lt(a2, g) && lt(g, a1) {
            Some(2)
        } else if lt(a1, g) {
            Some(3)
        } else {
            None
        }
    }

    /// Exact version of the caustic case table.
    pub fn case(&self) -> Result<CausticCase, ConditionError> {
        let mismatch = || ConditionError::CaseMismatch("no admissible case".into());
        self.validate()?;
        let s1 = self.slot(&self.gamma1).ok_or_else(mismatch)?;
        let Some(g2) = self.gamma2_finite() else {
            return match s1 {
                1 | 2 => Ok(CausticCase::LightLike),
                _ => Err(mismatch()),
            };
        };
        let s2 = self.slot(g2).ok_or_else(mismatch)?;
        if self.is_double() {
            return if s1 == 2 { Ok(CausticCase::DoubleCaustic) } else { Err(mismatch()) };
        }
        let case = if self.epsilon() < 0 {
            match (s1, s2) {
                (1, 1) => CausticCase::S1,
                (1, 0) => CausticCase::S2,
                (2, 0) => CausticCase::S3,
                (2, 1) => CausticCase::S4,
                _ => return Err(mismatch()),
            }
        } else {
            if self.gamma1.signum() < 0 {
                return Err(mismatch());
            }
            match (s1, s2) {
                (1, 2) => CausticCase::T1,
                (1, 3) => CausticCase::T2,
                (2, 2) => CausticCase::T3,
                (2, 3) => CausticCase::T4,
                _ => return Err(mismatch()),
            }
        };
        Ok(case)
    }

    pub fn linetype(&self) -> LineType {
        if self.is_light() {
            LineType::LightLike
        } else if self.epsilon() < 0 {
            LineType::SpaceLike
        } else {
            LineType::TimeLike
        }
    }

    pub fn ellipsoid_f64(&self) -> Ellipsoid {
        let [a1, a2, a3] = &self.a;
        Ellipsoid { a1: a1.to_f64(), a2: a2.to_f64(), a3: a3.to_f64() }
    }

    pub fn caustics_f64(&self) -> CausticPair {
        let g2 = match &self.gamma2 {
            G2::Finite(g) => Gamma2::Finite(g.to_f64()),
            G2::Infinity => Gamma2::Infinity,
        };
        CausticPair::new(self.gamma1.to_f64(), g2, self.linetype())
    }
}

impl RatParams {
    pub fn from_ints(a: [i64; 3], g1: (i64, i64), g2: Option<(i64, i64)>) -> Self {
        use crate::exact::rat;
        let a = a.map(|k| rat(k, 1));
        let g2 = match g2 {
            Some((n, d)) => G2::Finite(rat(n, d)),
            None => G2::Infinity,
        };
        HyperellipticParams::new(a, rat(g1.0, g1.1), g2)
    }
}

/// Converts every parameter into another exact field (e.g. rationals into
/// a number field).
pub fn lift<F: Field, K: Field>(p: &HyperellipticParams<F>, f: impl Fn(&F) -> K) -> HyperellipticParams<K> {
    HyperellipticParams {
        a: [f(&p.a[0]), f(&p.a[1]), f(&p.a[2])],
        gamma1: f(&p.gamma1),
        gamma2: match &p.gamma2 {
            G2::Finite(g) => G2::Finite(f(g)),
            G2::Infinity => G2::Infinity,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_table_exact() {
        let s1 = RatParams::from_ints([4, 2, 1], (1, 1), Some((-1, 2)));
        assert_eq!(s1.case(), Ok(CausticCase::S1));
        assert_eq!(s1.epsilon(), -1);
        let t3 = RatParams::from_ints([4, 2, 1], (7, 2), Some((5, 2)));
        assert_eq!(t3.case(), Ok(CausticCase::T3));
        assert_eq!(t3.gamma1, crate::exact::rat(5, 2));
        let dbl = RatParams::from_ints([4, 2, 1], (3, 1), Some((3, 1)));
        assert_eq!(dbl.case(), Ok(CausticCase::DoubleCaustic));
        let light = RatParams::from_ints([4, 2, 1], (1, 1), None);
        assert_eq!(light.case(), Ok(CausticCase::LightLike));
    }

    #[test]
    fn singular_parameters_rejected() {
        let p = RatParams::from_ints([4, 2, 1], (2, 1), Some((-1, 2)));
        assert_eq!(p.validate(), Err(ConditionError::SingularCurve));
        let p = RatParams::from_ints([4, 2, 1], (1, 1), Some((-1, 1)));
        assert_eq!(p.validate(), Err(ConditionError::SingularCurve));
    }
}
