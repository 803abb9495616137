//! The Minkowski scalar product of signature (2,1), line types, and
//! reflection in a plane given by its normal.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::GeomError;

/// Default relative tolerance for the light-like test.
pub const LIGHT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3M {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl Vec3M {
    /// Checked constructor: rejects NaN and infinities.
    pub fn new(x1: f64, x2: f64, x3: f64) -> Result<Self, GeomError> {
        if x1.is_finite() && x2.is_finite() && x3.is_finite() {
            Ok(Vec3M { x1, x2, x3 })
        } else {
            Err(GeomError::NonFinite)
        }
    }

    pub const fn from_array(a: [f64; 3]) -> Self {
        Vec3M { x1: a[0], x2: a[1], x3: a[2] }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub fn dot_e(self, o: Vec3M) -> f64 {
        self.x1 * o.x1 + self.x2 * o.x2 + self.x3 * o.x3
    }

    pub fn norm2_e(self) -> f64 {
        self.dot_e(self)
    }

    pub fn norm_e(self) -> f64 {
        self.norm2_e().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }
}

impl Add for Vec3M {
    type Output = Vec3M;
    fn add(self, o: Vec3M) -> Vec3M {
        Vec3M { x1: self.x1 + o.x1, x2: self.x2 + o.x2, x3: self.x3 + o.x3 }
    }
}

impl Sub for Vec3M {
    type Output = Vec3M;
    fn sub(self, o: Vec3M) -> Vec3M {
        Vec3M { x1: self.x1 - o.x1, x2: self.x2 - o.x2, x3: self.x3 - o.x3 }
    }
}

impl Mul<Vec3M> for f64 {
    type Output = Vec3M;
    fn mul(self, v: Vec3M) -> Vec3M {
        Vec3M { x1: self * v.x1, x2: self * v.x2, x3: self * v.x3 }
    }
}

impl Neg for Vec3M {
    type Output = Vec3M;
    fn neg(self) -> Vec3M {
        Vec3M { x1: -self.x1, x2: -self.x2, x3: -self.x3 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LineType {
    SpaceLike,
    TimeLike,
    LightLike,
}

impl LineType {
    pub fn label(self) -> &'static str {
        match self {
            LineType::SpaceLike => "space",
            LineType::TimeLike => "time",
            LineType::LightLike => "light",
        }
    }
}

/// `u1 v1 + u2 v2 - u3 v3`.
pub fn mink_dot(u: Vec3M, v: Vec3M) -> f64 {
    u.x1 * v.x1 + u.x2 * v.x2 - u.x3 * v.x3
}

/// `<X - Y, X - Y>`; negative for time-like separation.
pub fn mink_quadrance(x: Vec3M, y: Vec3M) -> f64 {
    let d = x - y;
    mink_dot(d, d)
}

fn is_light_like(v: Vec3M, tol: f64) -> bool {
    mink_dot(v, v).abs() <= tol * v.norm2_e()
}

pub fn classify_direction(v: Vec3M, tol: f64) -> Result<LineType, GeomError> {
    if v.norm2_e() == 0.0 {
        return Err(GeomError::ZeroVector);
    }
    let q = mink_dot(v, v);
    Ok(if is_light_like(v, tol) {
        LineType::LightLike
    } else if q > 0.0 {
        LineType::SpaceLike
    } else {
        LineType::TimeLike
    })
}

/// `v - 2 <v,n>/<n,n> n`.
pub fn reflect_direction(v: Vec3M, normal: Vec3M, tol: f64) -> Result<Vec3M, GeomError> {
    if normal.norm2_e() == 0.0 {
        return Err(GeomError::ZeroVector);
    }
    if is_light_like(normal, tol) {
        return Err(GeomError::LightLikeNormal);
    }
    let k = 2.0 * mink_dot(v, normal) / mink_dot(normal, normal);
    Ok(v - k * normal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(a: f64, b: f64, c: f64) -> Vec3M {
        Vec3M::new(a, b, c).unwrap()
    }

    #[test]
    fn scalar_product_examples() {
        assert_eq!(mink_dot(v(1., 2., 3.), v(4., 5., 6.)), -4.0);
        assert_eq!(mink_dot(v(1., 0., 1.), v(1., 0., 1.)), 0.0);
        assert_eq!(mink_dot(v(0., 0., 1.), v(0., 0., 1.)), -1.0);
    }

    #[test]
    fn quadrance_examples() {
        let o = v(0., 0., 0.);
        assert_eq!(mink_quadrance(v(1., 2., 3.), v(1., 2., 3.)), 0.0);
        assert_eq!(mink_quadrance(o, v(0., 0., 2.)), -4.0);
        assert_eq!(mink_quadrance(o, v(3., 0., 0.)), 9.0);
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_direction(v(1., 0., 1.), 0.0), Ok(LineType::LightLike));
        assert_eq!(classify_direction(v(1., 0., 0.), 0.0), Ok(LineType::SpaceLike));
        assert_eq!(classify_direction(v(0., 1., 2.), 0.0), Ok(LineType::TimeLike));
        assert_eq!(classify_direction(v(0., 0., 0.), 0.0), Err(GeomError::ZeroVector));
    }

    #[test]
    fn reflection_examples() {
        let t = v(0., 0., 1.);
        assert_eq!(reflect_direction(t, t, LIGHT_TOL), Ok(v(0., 0., -1.)));
        assert_eq!(reflect_direction(v(1., 0., 0.), t, LIGHT_TOL), Ok(v(1., 0., 0.)));
        assert_eq!(reflect_direction(v(1., 2., 3.), v(1., 0., 1.), LIGHT_TOL), Err(GeomError::LightLikeNormal));
    }

    #[test]
    fn rejects_nan() {
        assert_eq!(Vec3M::new(f64::NAN, 0.0, 0.0), Err(GeomError::NonFinite));
    }
}
