//! The billiard map inside the ellipsoid: impacts, reflections with
//! polar-cap / belt / tropic bookkeeping, and period detection.

use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::confocal::{
    classify_case, elliptic_coordinates_unchecked, line_caustics, tangency_residual, CausticCase, CausticPair, Ellipsoid,
    EllipticCoords, Gamma2, IntervalPartition,
};
use crate::error::GeomError;
use crate::mink::{classify_direction, mink_dot, reflect_direction, LineType, Vec3M, LIGHT_TOL};

/// Relative tolerance for detecting a light-like surface normal.
pub const TROPIC_TOL: f64 = 1e-9;
/// Default return tolerance for period detection.
pub const RETURN_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SurfaceComponent {
    PolarCapNorth,
    PolarCapSouth,
    EquatorialBelt,
    Tropic,
}

impl SurfaceComponent {
    pub fn label(self) -> &'static str {
        match self {
            SurfaceComponent::PolarCapNorth => "capN",
            SurfaceComponent::PolarCapSouth => "capS",
            SurfaceComponent::EquatorialBelt => "belt",
            SurfaceComponent::Tropic => "tropic",
        }
    }

    pub fn is_cap(self) -> bool {
        matches!(self, SurfaceComponent::PolarCapNorth | SurfaceComponent::PolarCapSouth)
    }
}

/// Index-lowered gradient of the ellipsoid equation: Minkowski-orthogonal
/// to the tangent plane.
pub fn surface_normal(p: Vec3M, e: &Ellipsoid) -> Vec3M {
    Vec3M::from_array([2.0 * p.x1 / e.a1, 2.0 * p.x2 / e.a2, -2.0 * p.x3 / e.a3])
}

fn cap(p: Vec3M) -> SurfaceComponent {
    if p.x3 >= 0.0 {
        SurfaceComponent::PolarCapNorth
    } else {
        SurfaceComponent::PolarCapSouth
    }
}

pub fn classify_surface_point(p: Vec3M, e: &Ellipsoid, tol: f64) -> SurfaceComponent {
    let n = surface_normal(p, e);
    let q = mink_dot(n, n);
    if q.abs() <= tol * n.norm2_e() {
        SurfaceComponent::Tropic
    } else if q < 0.0 {
        cap(p)
    } else {
        SurfaceComponent::EquatorialBelt
    }
}

/// First boundary point hit by the ray `p + t v`, `t > 0`.
pub fn next_impact(p: Vec3M, v: Vec3M, e: &Ellipsoid) -> Result<(Vec3M, f64), GeomError> {
    let a = [e.a1, e.a2, e.a3];
    let (pa, va) = (p.to_array(), v.to_array());
    let qa: f64 = (0..3).map(|i| va[i] * va[i] / a[i]).sum();
    let qb: f64 = (0..3).map(|i| pa[i] * va[i] / a[i]).sum();
    let qc: f64 = (0..3).map(|i| pa[i] * pa[i] / a[i]).sum::<f64>() - 1.0;
    if qa == 0.0 {
        return Err(GeomError::ZeroVector);
    }
    let disc = qb * qb - qa * qc;
    if disc < 0.0 {
        return Err(GeomError::NoForwardIntersection);
    }
    let s = disc.sqrt();
    let mut t = if qb <= 0.0 { (-qb + s) / qa } else { -qc / (qb + s) };
    let min_t = 1e-10 * e.scale() / v.norm_e();
    if !(t > min_t) {
        return Err(GeomError::NoForwardIntersection);
    }
    // Newton on the level function along the ray
    for _ in 0..3 {
        let f = qa * t * t + 2.0 * qb * t + qc;
        let df = 2.0 * (qa * t + qb);
        if df == 0.0 || f.abs() <= 1e-16 {
            break;
        }
        t -= f / df;
    }
    Ok((p + t * v, t))
}

/// Outcome of a reflection at a boundary point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Reflection {
    Regular(Vec3M),
    /// Light-like normal with the ray along it: `v' = -v`, counted as a cap
    /// and a belt reflection.
    TropicReversal(Vec3M),
}

impl Reflection {
    pub fn direction(self) -> Vec3M {
        match self {
            Reflection::Regular(v) | Reflection::TropicReversal(v) => v,
        }
    }
}

pub fn reflect_at(p: Vec3M, v: Vec3M, e: &Ellipsoid) -> Result<Reflection, GeomError> {
    let n = surface_normal(p, e);
    if mink_dot(n, n).abs() <= TROPIC_TOL * n.norm2_e() {
        let cross = [
            v.x2 * n.x3 - v.x3 * n.x2,
            v.x3 * n.x1 - v.x1 * n.x3,
            v.x1 * n.x2 - v.x2 * n.x1,
        ];
        let sin = cross.iter().map(|c| c * c).sum::<f64>().sqrt() / (v.norm_e() * n.norm_e());
        return if sin <= 1e-6 { Ok(Reflection::TropicReversal(-v)) } else { Err(GeomError::UndefinedReflection) };
    }
    reflect_direction(v, n, LIGHT_TOL).map(Reflection::Regular)
}

type Dd3 = [TwoFloat; 3];

fn to_dd(v: Vec3M) -> Dd3 {
    v.to_array().map(TwoFloat::from)
}

fn round_dd(x: Dd3) -> Vec3M {
    Vec3M::from_array(x.map(|c| c.hi() + c.lo()))
}

/// `next_impact` for a ray held in double-double precision: the float root
/// polished by Newton steps on the level function.
fn next_impact_dd(p: Dd3, v: Dd3, e: &Ellipsoid) -> Result<(Dd3, f64), GeomError> {
    let (_, t0) = next_impact(round_dd(p), round_dd(v), e)?;
    let a = [e.a1, e.a2, e.a3];
    let point = |t: TwoFloat| [0, 1, 2].map(|i| p[i] + t * v[i]);
    let mut t = TwoFloat::from(t0);
    for _ in 0..2 {
        let x = point(t);
        let mut f = TwoFloat::from(-1.0);
        let mut df = TwoFloat::from(0.0);
        for i in 0..3 {
            f += x[i] * x[i] / a[i];
            df += x[i] * v[i] * (2.0 / a[i]);
        }
        if df.hi() == 0.0 {
            break;
        }
        t -= f / df;
    }
    Ok((point(t), t.hi()))
}

/// The reflection law evaluated in double-double precision. Near the
/// tropics `<n,n>` is small and the caustics of the outgoing line become
/// very sensitive to the impact point: a one-ulp error there is enough to
/// move them by far more than an ulp, so the tracer keeps its running state
/// in extended precision and only rounds what it records.
fn reflect_dd(x: Dd3, v: Dd3, e: &Ellipsoid) -> Result<(Reflection, Dd3), GeomError> {
    let (p, vf) = (round_dd(x), round_dd(v));
    if let Reflection::TropicReversal(out) = reflect_at(p, vf, e)? {
        return Ok((Reflection::TropicReversal(out), v.map(|c| -c)));
    }
    // v - 2 <v,n>/<n,n> n with n = (x1/a1, x2/a2, -x3/a3)
    let n = [x[0] / e.a1, x[1] / e.a2, -x[2] / e.a3];
    let dot = |u: Dd3, w: Dd3| u[0] * w[0] + u[1] * w[1] - u[2] * w[2];
    let k = dot(v, n) * 2.0 / dot(n, n);
    let out = [0, 1, 2].map(|i| v[i] - k * n[i]);
    // rescale so the direction stays of order one
    let s = 1.0 / round_dd(out).norm_e();
    let out = out.map(|c| c * s);
    Ok((Reflection::Regular(round_dd(out)), out))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BounceRecord {
    pub point: Vec3M,
    pub incoming: Vec3M,
    pub outgoing: Vec3M,
    pub component: SurfaceComponent,
    pub param_t: f64,
    pub coords: EllipticCoords,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PeriodSignature {
    pub n: usize,
    pub m1: usize,
    pub n1: usize,
    pub n2: usize,
}

impl PeriodSignature {
    /// The parity constraints a periodic trajectory of the given case obeys.
    pub fn parity_ok(&self, case: CausticCase) -> bool {
        let even = |k: usize| k % 2 == 0;
        match case {
            CausticCase::S2 => even(self.m1),
            CausticCase::S3 => even(self.m1) && even(self.n1) && even(self.n2),
            CausticCase::S4 => even(self.n1) && even(self.n2),
            CausticCase::T1 => even(self.m1) && even(self.n2),
            CausticCase::T3 => even(self.m1) && even(self.n1),
            CausticCase::T4 => even(self.m1) && even(self.n1) && even(self.n2),
            _ => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub ellipsoid: Ellipsoid,
    pub start: (Vec3M, Vec3M),
    pub bounces: Vec<BounceRecord>,
    pub linetype: LineType,
    /// Caustics of the first segment; absent when they are degenerate.
    pub caustics: Option<CausticPair>,
    pub case: Option<CausticCase>,
    /// Set when tracing stopped early.
    pub error: Option<GeomError>,
}

fn unit(v: Vec3M) -> Vec3M {
    (1.0 / v.norm_e()) * v
}

pub fn trace(p: Vec3M, v: Vec3M, e: &Ellipsoid, max_bounces: usize) -> Result<Trajectory, GeomError> {
    let linetype = classify_direction(v, LIGHT_TOL)?;
    let caustics = line_caustics(p, v, e).ok();
    let case = caustics.and_then(|cp| classify_case(&cp, e).ok());
    let mut traj =
        Trajectory { ellipsoid: *e, start: (p, v), bounces: Vec::new(), linetype, caustics, case, error: None };
    let (mut cur, mut dir) = (to_dd(p), to_dd(unit(v)));
    while traj.bounces.len() < max_bounces {
        let (qd, t) = match next_impact_dd(cur, dir, e) {
            Ok(x) => x,
            Err(err) => {
                traj.error = Some(err);
                break;
            }
        };
        let q = round_dd(qd);
        let incoming = round_dd(dir);
        let coords = elliptic_coordinates_unchecked(q, e);
        match reflect_dd(qd, dir, e) {
            Ok((Reflection::Regular(out), next)) => {
                let component = classify_surface_point(q, e, TROPIC_TOL);
                traj.bounces.push(BounceRecord { point: q, incoming, outgoing: out, component, param_t: t, coords });
                dir = next;
            }
            Ok((Reflection::TropicReversal(out), next)) => {
                for (component, param_t) in [(cap(q), t), (SurfaceComponent::EquatorialBelt, 0.0)] {
                    traj.bounces.push(BounceRecord { point: q, incoming, outgoing: out, component, param_t, coords });
                }
                dir = next;
            }
            Err(err) => {
                traj.error = Some(err);
                break;
            }
        }
        cur = qd;
    }
    Ok(traj)
}

/// Largest normalised tangency residual of segments `1..` against the
/// caustics of segment 0.
pub fn chasles_residual(traj: &Trajectory) -> f64 {
    let Some(cp) = traj.caustics else { return 0.0 };
    let mut gammas = vec![cp.gamma1];
    if let Gamma2::Finite(g) = cp.gamma2 {
        gammas.push(g);
    }
    traj.bounces
        .iter()
        .flat_map(|b| gammas.iter().map(move |&g| tangency_residual(b.point, b.outgoing, &traj.ellipsoid, g)))
        .fold(0.0, f64::max)
}

/// Relative phase-space distance between bounce 0 and bounce `n`.
pub fn return_distance(traj: &Trajectory, n: usize) -> f64 {
    let (b0, bn) = (&traj.bounces[0], &traj.bounces[n]);
    let dp = (bn.point - b0.point).norm_e() / traj.ellipsoid.scale();
    let dv = (bn.outgoing - b0.outgoing).norm_e();
    dp.max(dv)
}

/// Parameters along the segment `p + t v`, `0 < t < t_end`, at which the
/// coordinate `lambda3` turns (reaches `b2` or `b3`).
fn lambda3_turns(p: Vec3M, v: Vec3M, t_end: f64, e: &Ellipsoid, part: &IntervalPartition) -> usize {
    let targets = [part.b[1], part.b[2]];
    let mut count = 0;
    let inside = |t: f64| t > 1e-12 * t_end && t < t_end * (1.0 - 1e-12);
    for &b in &targets {
        if b == e.a1 || b == e.a2 {
            let (x0, dx) = if b == e.a1 { (p.x1, v.x1) } else { (p.x2, v.x2) };
            if dx != 0.0 && inside(-x0 / dx) {
                count += 1;
            }
        } else {
            // tangency with the caustic quadric b
            let d = e.denominators(b);
            let (pa, va) = (p.to_array(), v.to_array());
            let qa: f64 = (0..3).map(|i| va[i] * va[i] / d[i]).sum();
            let qb: f64 = (0..3).map(|i| pa[i] * va[i] / d[i]).sum();
            if qa != 0.0 && inside(-qb / qa) {
                count += 1;
            }
        }
    }
    count
}

/// Signature of the trajectory over bounces `0..n`.
pub fn signature_for(traj: &Trajectory, n: usize) -> PeriodSignature {
    let recs = &traj.bounces[..n];
    let m1 = recs.iter().filter(|b| b.component.is_cap()).count();
    let n1 = recs.iter().filter(|b| b.component == SurfaceComponent::EquatorialBelt).count();
    let n2 = match traj.caustics {
        Some(cp) => {
            let part = IntervalPartition::new(&cp, &traj.ellipsoid);
            let turns: usize = (0..n)
                .map(|i| {
                    let (b, next) = (&traj.bounces[i], &traj.bounces[i + 1]);
                    lambda3_turns(b.point, b.outgoing, next.param_t, &traj.ellipsoid, &part)
                })
                .sum();
            turns / 2
        }
        None => 0,
    };
    PeriodSignature { n, m1, n1, n2 }
}

pub fn detect_period(traj: &Trajectory, tol: f64) -> Option<PeriodSignature> {
    (1..traj.bounces.len()).find(|&n| return_distance(traj, n) <= tol).map(|n| signature_for(traj, n))
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
    fn normals() {
        assert_eq!(surface_normal(v(2., 0., 0.), &e()), v(1., 0., 0.));
        let n = surface_normal(v(0., 0., 1.), &e());
        assert_eq!(n, v(0., 0., -2.));
        assert_eq!(mink_dot(n, n), -4.0);
    }

    #[test]
    fn surface_components() {
        assert_eq!(classify_surface_point(v(0., 0., 1.), &e(), TROPIC_TOL), SurfaceComponent::PolarCapNorth);
        assert_eq!(classify_surface_point(v(0., 0., -1.), &e(), TROPIC_TOL), SurfaceComponent::PolarCapSouth);
        assert_eq!(classify_surface_point(v(2., 0., 0.), &e(), TROPIC_TOL), SurfaceComponent::EquatorialBelt);
        let s5 = 5f64.sqrt();
        assert_eq!(classify_surface_point(v(4. / s5, 0., 1. / s5), &e(), TROPIC_TOL), SurfaceComponent::Tropic);
    }

    #[test]
    fn axis_shots() {
        let (q, t) = next_impact(v(0., 0., 0.), v(1., 0., 0.), &e()).unwrap();
        assert!((q - v(2., 0., 0.)).norm_e() < 1e-15 && (t - 2.0).abs() < 1e-15);
        let (q, t) = next_impact(v(0., 0., 0.), v(0., 0., 1.), &e()).unwrap();
        assert!((q - v(0., 0., 1.)).norm_e() < 1e-15 && (t - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pole_reverses_direction() {
        let r = reflect_at(v(0., 0., 1.), v(0., 0., 1.), &e()).unwrap();
        assert_eq!(r, Reflection::Regular(v(0., 0., -1.)));
    }

    #[test]
    fn transversal_tropic_hit_is_undefined() {
        let s5 = 5f64.sqrt();
        let p = v(4. / s5, 0., 1. / s5);
        assert_eq!(reflect_at(p, v(1., 0.3, 0.), &e()), Err(GeomError::UndefinedReflection));
    }

    #[test]
    fn axial_orbit_signature() {
        let traj = trace(v(0., 0., 0.), v(0., 0., 1.), &e(), 6).unwrap();
        let sig = detect_period(&traj, RETURN_TOL).unwrap();
        assert_eq!((sig.n, sig.m1, sig.n1), (2, 2, 0));
    }
}
