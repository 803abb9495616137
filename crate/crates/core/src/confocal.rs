//! The confocal family
//!
//! ```text
//! x1^2/(a1 - l) + x2^2/(a2 - l) + x3^2/(a3 + l) = 1
//! ```
//!
//! of quadrics around the ellipsoid `l = 0`: quadric types, generalised
//! elliptic coordinates, caustics of a line and the caustic case table.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GeomError;
use crate::mink::{classify_direction, mink_dot, LineType, Vec3M, LIGHT_TOL};

/// Relative tolerance for collapsing two caustic parameters into one.
pub const DOUBLE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ellipsoid {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl Ellipsoid {
    pub fn new(a1: f64, a2: f64, a3: f64) -> Result<Self, GeomError> {
        let ok = [a1, a2, a3].iter().all(|a| a.is_finite()) && a1 > a2 && a2 > 0.0 && a3 > 0.0;
        if ok {
            Ok(Ellipsoid { a1, a2, a3 })
        } else {
            Err(GeomError::InvalidEllipsoid)
        }
    }

    /// The reference ellipsoid `(4, 2, 1)` used throughout the tests.
    pub fn standard() -> Self {
        Ellipsoid { a1: 4.0, a2: 2.0, a3: 1.0 }
    }

    pub fn axes(&self) -> [f64; 3] {
        [self.a1, self.a2, self.a3]
    }

    /// Denominators `(a1 - l, a2 - l, a3 + l)`.
    pub fn denominators(&self, lambda: f64) -> [f64; 3] {
        [self.a1 - lambda, self.a2 - lambda, self.a3 + lambda]
    }

    /// `x1^2/a1 + x2^2/a2 + x3^2/a3 - 1` (Euclidean-ellipsoid level).
    pub fn level(&self, p: Vec3M) -> f64 {
        p.x1 * p.x1 / self.a1 + p.x2 * p.x2 / self.a2 + p.x3 * p.x3 / self.a3 - 1.0
    }

    /// A length scale for relative tolerances.
    pub fn scale(&self) -> f64 {
        self.a1.sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QuadricType {
    Ellipsoid,
    Hyperboloid1SheetX3,
    Hyperboloid1SheetX2,
    Hyperboloid2Sheet,
    PlaneX1,
    PlaneX2,
    PlaneX3,
    PlaneAtInfinity,
}

pub fn quadric_type(lambda: f64, e: &Ellipsoid) -> QuadricType {
    if lambda.is_infinite() {
        QuadricType::PlaneAtInfinity
    } else if lambda == -e.a3 {
        QuadricType::PlaneX3
    } else if lambda == e.a2 {
        QuadricType::PlaneX2
    } else if lambda == e.a1 {
        QuadricType::PlaneX1
    } else if lambda < -e.a3 {
        QuadricType::Hyperboloid1SheetX3
    } else if lambda < e.a2 {
        QuadricType::Ellipsoid
    } else if lambda < e.a1 {
        QuadricType::Hyperboloid1SheetX2
    } else {
        QuadricType::Hyperboloid2Sheet
    }
}

/// Left-hand side of the family equation minus one.
pub fn quadric_residual(lambda: f64, p: Vec3M, e: &Ellipsoid) -> Result<f64, GeomError> {
    let d = e.denominators(lambda);
    if d.iter().any(|&x| x == 0.0) {
        return Err(GeomError::DegenerateParameter(lambda));
    }
    Ok(p.x1 * p.x1 / d[0] + p.x2 * p.x2 / d[1] + p.x3 * p.x3 / d[2] - 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllipticCoords {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
}

impl EllipticCoords {
    pub fn to_array(self) -> [f64; 3] {
        [self.lambda1, self.lambda2, self.lambda3]
    }
}

// Small dense polynomial helpers on ascending f64 coefficients.
fn pmul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn padd(a: &mut Vec<f64>, b: &[f64], k: f64) {
    if a.len() < b.len() {
        a.resize(b.len(), 0.0);
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x += k * y;
    }
}

fn peval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &k| acc * x + k)
}

fn pderiv_eval(c: &[f64], x: f64) -> f64 {
    c.iter().enumerate().skip(1).rev().fold(0.0, |acc, (k, &a)| acc * x + k as f64 * a)
}

fn denominator_polys(e: &Ellipsoid) -> [[f64; 2]; 3] {
    [[e.a1, -1.0], [e.a2, -1.0], [e.a3, 1.0]]
}

/// Coefficients (ascending) of the cleared family equation at `p`:
/// `x1^2 d2 d3 + x2^2 d1 d3 + x3^2 d1 d2 - d1 d2 d3`, a cubic with leading
/// coefficient `-1`.
pub fn cleared_cubic(p: Vec3M, e: &Ellipsoid) -> [f64; 4] {
    let [d1, d2, d3] = denominator_polys(e);
    let x = p.to_array();
    let mut f = vec![0.0];
    padd(&mut f, &pmul(&d2, &d3), x[0] * x[0]);
    padd(&mut f, &pmul(&d1, &d3), x[1] * x[1]);
    padd(&mut f, &pmul(&d1, &d2), x[2] * x[2]);
    padd(&mut f, &pmul(&pmul(&d1, &d2), &d3), -1.0);
    [f[0], f[1], f[2], f[3]]
}

/// Real roots of a monic cubic known to have three real roots, ascending,
/// by the trigonometric formula followed by Newton polishing.
fn real_cubic_roots(b: f64, c: f64, d: f64) -> [f64; 3] {
    let poly = [d, c, b, 1.0];
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let mut r = if p < 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let th = arg.acos() / 3.0;
        let tau = 2.0 * std::f64::consts::PI / 3.0;
        [m * th.cos(), m * (th - tau).cos(), m * (th - 2.0 * tau).cos()].map(|t| t - shift)
    } else {
        [(-q).cbrt() - shift; 3]
    };
    for x in r.iter_mut() {
        for _ in 0..3 {
            let fx = peval(&poly, *x);
            let dx = pderiv_eval(&poly, *x);
            if dx == 0.0 {
                break;
            }
            let nx = *x - fx / dx;
            if !nx.is_finite() || peval(&poly, nx).abs() >= fx.abs() {
                break;
            }
            *x = nx;
        }
    }
    r.sort_by(|a, b| a.partial_cmp(b).unwrap());
    r
}

/// Roots of the cleared cubic at `p`, ascending, without domain checks.
/// Used for points on the ellipsoid and wherever degeneracy is acceptable.
pub fn elliptic_coordinates_unchecked(p: Vec3M, e: &Ellipsoid) -> EllipticCoords {
    let f = cleared_cubic(p, e);
    // f has leading coefficient -1; work with -f
    let r = real_cubic_roots(-f[2], -f[1], -f[0]);
    EllipticCoords { lambda1: r[0], lambda2: r[1], lambda3: r[2] }
}

pub fn elliptic_coordinates(p: Vec3M, e: &Ellipsoid) -> Result<EllipticCoords, GeomError> {
    if e.level(p) > 1e-10 {
        return Err(GeomError::OutsideDomain);
    }
    let tiny = 1e-15 * e.scale();
    let on_planes = p.to_array().iter().filter(|x| x.abs() <= tiny).count();
    if on_planes >= 2 {
        return Err(GeomError::DegeneratePoint);
    }
    let c = elliptic_coordinates_unchecked(p, e);
    let sep = 1e-12 * e.a1;
    if c.lambda2 - c.lambda1 <= sep || c.lambda3 - c.lambda2 <= sep {
        return Err(GeomError::DegeneratePoint);
    }
    Ok(c)
}

/// Inverse of the coordinate map; `signs[i]` selects the sign of `x_i`.
pub fn point_from_elliptic(c: EllipticCoords, signs: [bool; 3], e: &Ellipsoid) -> Result<Vec3M, GeomError> {
    let l = c.to_array();
    let (a1, a2, a3) = (e.a1, e.a2, e.a3);
    let prod = |f: &dyn Fn(f64) -> f64| l.iter().map(|&x| f(x)).product::<f64>();
    let sq = [
        prod(&|x| a1 - x) / ((a1 - a2) * (a1 + a3)),
        -prod(&|x| a2 - x) / ((a1 - a2) * (a2 + a3)),
        prod(&|x| a3 + x) / ((a1 + a3) * (a2 + a3)),
    ];
    let axes = e.axes();
    let mut x = [0.0; 3];
    for i in 0..3 {
        if sq[i] < -1e-12 * axes[i] {
            return Err(GeomError::InvalidCoords(sq[i]));
        }
        let v = sq[i].max(0.0).sqrt();
        x[i] = if signs[i] { -v } else { v };
    }
    Ok(Vec3M::from_array(x))
}

/// The second caustic parameter, which is at infinity for light-like lines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gamma2 {
    Finite(f64),
    Infinity,
}

impl Gamma2 {
    pub fn finite(self) -> Option<f64> {
        match self {
            Gamma2::Finite(g) => Some(g),
            Gamma2::Infinity => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CausticPair {
    pub gamma1: f64,
    pub gamma2: Gamma2,
    pub linetype: LineType,
    /// `sign(gamma1 gamma2)`; `+1` placeholder for light-like pairs.
    pub epsilon: i8,
}

impl CausticPair {
    pub fn new(gamma1: f64, gamma2: Gamma2, linetype: LineType) -> Self {
        let epsilon = match gamma2 {
            Gamma2::Finite(g2) if gamma1 * g2 < 0.0 => -1,
            _ => 1,
        };
        CausticPair { gamma1, gamma2, linetype, epsilon }
    }

    /// Infers the line type from the placement of the parameters.
    pub fn from_gammas(gamma1: f64, gamma2: Option<f64>) -> Self {
        match gamma2 {
            None => CausticPair::new(gamma1, Gamma2::Infinity, LineType::LightLike),
            Some(g2) => {
                let lt = if gamma1 * g2 < 0.0 { LineType::SpaceLike } else { LineType::TimeLike };
                let (g1, g2) = if lt == LineType::SpaceLike { (gamma1.max(g2), gamma1.min(g2)) } else { (gamma1.min(g2), gamma1.max(g2)) };
                CausticPair::new(g1, Gamma2::Finite(g2), lt)
            }
        }
    }
}

/// Quadratic (linear for light-like lines) in `l` whose roots are the
/// parameters of the confocal quadrics tangent to the line `p + t v`,
/// returned as the list of monomial contributions per coefficient so that
/// residuals can be normalised.
fn tangency_terms(p: Vec3M, v: Vec3M, e: &Ellipsoid) -> Vec<Vec<f64>> {
    let d = denominator_polys(e);
    let pa = p.to_array();
    let va = v.to_array();
    let mut terms = Vec::with_capacity(6);
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        terms.push(pmul(&d[j], &d[k]).iter().map(|c| c * va[i] * va[i]).collect());
    }
    for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        let w = pa[i] * va[j] - pa[j] * va[i];
        terms.push(d[k].iter().map(|c| -c * w * w).collect());
    }
    terms
}

/// Coefficients `[c0, c1, c2]` of the tangency polynomial. `c2 = -<v,v>`.
pub fn tangency_poly(p: Vec3M, v: Vec3M, e: &Ellipsoid) -> [f64; 3] {
    let mut acc = vec![0.0; 3];
    for t in tangency_terms(p, v, e) {
        padd(&mut acc, &t, 1.0);
    }
    [acc[0], acc[1], acc[2]]
}

/// `|Phi(gamma)| / sum |monomials of Phi at gamma|`, a scale-free measure of
/// how far the line is from touching the quadric `gamma`.
pub fn tangency_residual(p: Vec3M, v: Vec3M, e: &Ellipsoid, gamma: f64) -> f64 {
    let terms = tangency_terms(p, v, e);
    let mut total = 0.0;
    let mut mag = 0.0;
    for t in &terms {
        let x = peval(t, gamma);
        total += x;
        mag += x.abs();
    }
    if mag == 0.0 {
        0.0
    } else {
        total.abs() / mag
    }
}

fn polish_root(c: &[f64], mut x: f64) -> f64 {
    for _ in 0..3 {
        let fx = peval(c, x);
        let dx = pderiv_eval(c, x);
        if dx == 0.0 {
            break;
        }
        let nx = x - fx / dx;
        if !nx.is_finite() || peval(c, nx).abs() >= fx.abs() {
            break;
        }
        x = nx;
    }
    x
}

pub fn line_caustics(p: Vec3M, v: Vec3M, e: &Ellipsoid) -> Result<CausticPair, GeomError> {
    let lt = classify_direction(v, LIGHT_TOL)?;
    let [c0, c1, _] = tangency_poly(p, v, e);
    // Phi(0) = a1 a2 a3 (B^2 - AC): positive iff the line crosses the interior
    let mag0: f64 = tangency_terms(p, v, e).iter().map(|t| t[0].abs()).sum();
    if c0 <= 1e-14 * mag0 {
        return Err(GeomError::NoInteriorIntersection);
    }
    let tol = 1e-8 * e.a1;
    if lt == LineType::LightLike {
        if c1 == 0.0 {
            return Err(GeomError::ComplexCaustics);
        }
        let g1 = polish_root(&[c0, c1], -c0 / c1);
        if !(g1 > -e.a3 - tol && g1 < e.a1 + tol) {
            return Err(GeomError::NoInteriorIntersection);
        }
        return Ok(CausticPair::new(g1, Gamma2::Infinity, lt));
    }
    // c2 = -<v,v>
    let c2 = -mink_dot(v, v);
    let disc = c1 * c1 - 4.0 * c2 * c0;
    if disc < 0.0 {
        return Err(GeomError::ComplexCaustics);
    }
    let s = disc.sqrt();
    let qq = -0.5 * (c1 + c1.signum() * s);
    let (mut r1, mut r2) = (qq / c2, c0 / qq);
    let poly = [c0, c1, c2];
    r1 = polish_root(&poly, r1);
    r2 = polish_root(&poly, r2);
    let (lo, hi) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
    let pair = match lt {
        LineType::SpaceLike => {
            if !(lo < tol && hi > -tol && hi < e.a1 + tol) {
                return Err(GeomError::NoInteriorIntersection);
            }
            CausticPair::new(hi, Gamma2::Finite(lo), lt)
        }
        _ => {
            if lo < -tol {
                return Err(GeomError::NoInteriorIntersection);
            }
            CausticPair::new(lo, Gamma2::Finite(hi), lt)
        }
    };
    Ok(pair)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CausticCase {
    S1,
    S2,
    S3,
    S4,
    T1,
    T2,
    T3,
    T4,
    DoubleCaustic,
    LightLike,
}

impl CausticCase {
    pub const ALL: [CausticCase; 10] = [
        CausticCase::S1,
        CausticCase::S2,
        CausticCase::S3,
        CausticCase::S4,
        CausticCase::T1,
        CausticCase::T2,
        CausticCase::T3,
        CausticCase::T4,
        CausticCase::DoubleCaustic,
        CausticCase::LightLike,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CausticCase::S1 => "S1",
            CausticCase::S2 => "S2",
            CausticCase::S3 => "S3",
            CausticCase::S4 => "S4",
            CausticCase::T1 => "T1",
            CausticCase::T2 => "T2",
            CausticCase::T3 => "T3",
            CausticCase::T4 => "T4",
            CausticCase::DoubleCaustic => "double",
            CausticCase::LightLike => "light",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        CausticCase::ALL.into_iter().find(|c| c.label().eq_ignore_ascii_case(s))
    }

    pub fn linetype(self) -> LineType {
        match self {
            CausticCase::S1 | CausticCase::S2 | CausticCase::S3 | CausticCase::S4 => LineType::SpaceLike,
            CausticCase::LightLike => LineType::LightLike,
            _ => LineType::TimeLike,
        }
    }
}

impl fmt::Display for CausticCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Where a caustic parameter sits relative to `-a3 < 0 < a2 < a1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    BelowMinusA3,
    Ellipsoid,
    BetweenA2A1,
    AboveA1,
    Boundary,
}

pub fn slot(g: f64, e: &Ellipsoid) -> Slot {
    if g < -e.a3 {
        Slot::BelowMinusA3
    } else if g > -e.a3 && g < e.a2 && g != 0.0 {
        Slot::Ellipsoid
    } else if g > e.a2 && g < e.a1 {
        Slot::BetweenA2A1
    } else if g > e.a1 {
        Slot::AboveA1
    } else {
        Slot::Boundary
    }
}

pub fn classify_case(cp: &CausticPair, e: &Ellipsoid) -> Result<CausticCase, GeomError> {
    use Slot::*;
    let g1 = cp.gamma1;
    let bad = Err(GeomError::InconsistentConfiguration);
    let g2 = match cp.gamma2 {
        Gamma2::Infinity => {
            return match (cp.linetype, slot(g1, e)) {
                (LineType::LightLike, Ellipsoid | BetweenA2A1) => Ok(CausticCase::LightLike),
                _ => bad,
            };
        }
        Gamma2::Finite(g2) => g2,
    };
    if (g1 - g2).abs() <= DOUBLE_TOL * g1.abs().max(1.0) {
        return match (slot(g1, e), slot(g2, e)) {
            (BetweenA2A1, BetweenA2A1) if cp.linetype != LineType::SpaceLike => Ok(CausticCase::DoubleCaustic),
            _ => bad,
        };
    }
    match cp.linetype {
        LineType::SpaceLike => {
            if !(g2 < 0.0 && g1 > 0.0) {
                return bad;
            }
            match (slot(g1, e), slot(g2, e)) {
                (Ellipsoid, Ellipsoid) => Ok(CausticCase::S1),
                (Ellipsoid, BelowMinusA3) => Ok(CausticCase::S2),
                (BetweenA2A1, BelowMinusA3) => Ok(CausticCase::S3),
                (BetweenA2A1, Ellipsoid) => Ok(CausticCase::S4),
                _ => bad,
            }
        }
        LineType::TimeLike => {
            if !(g1 > 0.0 && g2 > g1) {
                return bad;
            }
            match (slot(g1, e), slot(g2, e)) {
                (Ellipsoid, BetweenA2A1) => Ok(CausticCase::T1),
                (Ellipsoid, AboveA1) => Ok(CausticCase::T2),
                (BetweenA2A1, BetweenA2A1) => Ok(CausticCase::T3),
                (BetweenA2A1, AboveA1) => Ok(CausticCase::T4),
                _ => bad,
            }
        }
        LineType::LightLike => bad,
    }
}

/// The ordered split of `{a1, a2, -a3, gamma1, gamma2}` into positive
/// values `b` and negative values `c` (with `c[0]` the one closest to 0).
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalPartition {
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    /// Light-like lines carry an extra `b = infinity`.
    pub b_at_infinity: bool,
}

impl IntervalPartition {
    pub fn new(cp: &CausticPair, e: &Ellipsoid) -> Self {
        let mut vals = vec![e.a1, e.a2, -e.a3, cp.gamma1];
        let b_at_infinity = match cp.gamma2 {
            Gamma2::Finite(g) => {
                vals.push(g);
                false
            }
            Gamma2::Infinity => true,
        };
        let mut b: Vec<f64> = vals.iter().copied().filter(|&x| x > 0.0).collect();
        let mut c: Vec<f64> = vals.iter().copied().filter(|&x| x < 0.0).collect();
        b.sort_by(|x, y| x.partial_cmp(y).unwrap());
        c.sort_by(|x, y| y.partial_cmp(x).unwrap());
        IntervalPartition { b, c, b_at_infinity }
    }

    pub fn p(&self) -> usize {
        self.b.len() + usize::from(self.b_at_infinity)
    }

    pub fn q(&self) -> usize {
        self.c.len()
    }

    /// The three coordinate ranges `[c1, 0]`, `[0, b1]`, `[b2, b3]`.
    pub fn ranges(&self) -> [(f64, f64); 3] {
        [(self.c[0], 0.0), (0.0, self.b[0]), (self.b[1], self.b[2])]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e() -> Ellipsoid {
        Ellipsoid::standard()
    }

    fn v(a: f64, b: f64, c: f64) -> Vec3M {
        Vec3M::new(a, b, c).unwrap()
    }

    #[test]
    fn quadric_types() {
        assert_eq!(quadric_type(0.0, &e()), QuadricType::Ellipsoid);
        assert_eq!(quadric_type(3.0, &e()), QuadricType::Hyperboloid1SheetX2);
        assert_eq!(quadric_type(2.0, &e()), QuadricType::PlaneX2);
        assert_eq!(quadric_type(-2.0, &e()), QuadricType::Hyperboloid1SheetX3);
        assert_eq!(quadric_type(5.0, &e()), QuadricType::Hyperboloid2Sheet);
        assert_eq!(quadric_type(-1.0, &e()), QuadricType::PlaneX3);
        assert_eq!(quadric_type(4.0, &e()), QuadricType::PlaneX1);
    }

    #[test]
    fn residual_examples() {
        assert_eq!(quadric_residual(0.0, v(2., 0., 0.), &e()), Ok(0.0));
        assert_eq!(quadric_residual(0.0, v(0., 0., 0.), &e()), Ok(-1.0));
        assert!(matches!(quadric_residual(4.0, v(1., 1., 1.), &e()), Err(GeomError::DegenerateParameter(_))));
    }

    #[test]
    fn vertex_is_degenerate() {
        assert_eq!(elliptic_coordinates(v(2., 0., 0.), &e()), Err(GeomError::DegeneratePoint));
        assert_eq!(elliptic_coordinates(v(3., 0., 0.), &e()), Err(GeomError::OutsideDomain));
    }

    #[test]
    fn coordinates_of_sample_point() {
        let p = v(0.5, 0.5, 0.2);
        let c = elliptic_coordinates(p, &e()).unwrap();
        assert!(c.lambda1 < 0.0 && c.lambda1 > -1.0);
        assert!(c.lambda2 > 0.0 && c.lambda2 < 2.0);
        assert!(c.lambda3 > 2.0 && c.lambda3 < 4.0);
        for l in c.to_array() {
            assert!(quadric_residual(l, p, &e()).unwrap().abs() <= 1e-10);
        }
        let back = point_from_elliptic(c, [false; 3], &e()).unwrap();
        assert!((back - p).norm_e() < 1e-12);
    }

    #[test]
    fn point_on_ellipsoid_has_zero_coordinate() {
        let p = v(2.0 * 0.6, 2f64.sqrt() * 0.6, (1.0 - 0.72f64).sqrt());
        let c = elliptic_coordinates(p, &e()).unwrap();
        assert!(c.lambda1.abs().min(c.lambda2.abs()) < 1e-10);
    }

    #[test]
    fn light_like_line_has_one_finite_caustic() {
        let cp = line_caustics(v(0.1, 0.2, 0.1), v(1., 0., 1.), &e()).unwrap();
        assert_eq!(cp.gamma2, Gamma2::Infinity);
        assert_eq!(cp.linetype, LineType::LightLike);
        assert!(tangency_residual(v(0.1, 0.2, 0.1), v(1., 0., 1.), &e(), cp.gamma1) < 1e-12);
    }

    #[test]
    fn space_like_caustics_satisfy_tangency() {
        let p = v(0., 0., 0.);
        let d = v(1., 0.1, 0.);
        let cp = line_caustics(p, d, &e()).unwrap();
        assert_eq!(cp.linetype, LineType::SpaceLike);
        let g2 = cp.gamma2.finite().unwrap();
        assert!(g2 < 0.0 && cp.gamma1 > 0.0);
        assert_eq!(cp.epsilon, -1);
        for g in [cp.gamma1, g2] {
            assert!(tangency_residual(p, d, &e(), g) < 1e-10);
        }
    }

    #[test]
    fn case_table_examples() {
        let s1 = CausticPair::new(1.0, Gamma2::Finite(-0.5), LineType::SpaceLike);
        assert_eq!(classify_case(&s1, &e()), Ok(CausticCase::S1));
        let t3 = CausticPair::new(2.5, Gamma2::Finite(3.5), LineType::TimeLike);
        assert_eq!(classify_case(&t3, &e()), Ok(CausticCase::T3));
        let bad = CausticPair::new(-0.5, Gamma2::Finite(3.0), LineType::TimeLike);
        assert_eq!(classify_case(&bad, &e()), Err(GeomError::InconsistentConfiguration));
        let dbl = CausticPair::new(3.0, Gamma2::Finite(3.0), LineType::TimeLike);
        assert_eq!(classify_case(&dbl, &e()), Ok(CausticCase::DoubleCaustic));
    }

    #[test]
    fn partition_counts() {
        let s = IntervalPartition::new(&CausticPair::new(1.0, Gamma2::Finite(-0.5), LineType::SpaceLike), &e());
        assert_eq!((s.p(), s.q()), (3, 2));
        let t = IntervalPartition::new(&CausticPair::new(1.0, Gamma2::Finite(3.0), LineType::TimeLike), &e());
        assert_eq!((t.p(), t.q()), (4, 1));
        let l = IntervalPartition::new(&CausticPair::new(1.0, Gamma2::Infinity, LineType::LightLike), &e());
        assert_eq!((l.p(), l.q()), (4, 1));
    }
}
