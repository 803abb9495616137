//! Hyperelliptic integrals `int l^k dl / sqrt(P(l))` over the coordinate
//! ranges, whose integer combination vanishes on periodic trajectories.

use crate::confocal::{CausticPair, Ellipsoid, Gamma2, IntervalPartition};
use crate::error::ConditionError;

const ABS_TOL: f64 = 1e-13;

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive Gauss-Kronrod quadrature to absolute tolerance `tol`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (v, err) = gk15(f, a, b);
        if err <= tol || depth >= 40 {
            return v;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, 0.5 * tol, depth + 1) + rec(f, m, b, 0.5 * tol, depth + 1)
    }
    rec(f, a, b, tol, 0)
}

/// `P(x) = lead * prod (x - r)` in real arithmetic.
#[derive(Clone, Debug)]
pub struct SpectralPoly {
    pub lead: f64,
    pub roots: Vec<f64>,
}

impl SpectralPoly {
    /// `eps (a1-x)(a2-x)(a3+x)(g1-x)(g2-x)`, or `(a1-x)(a2-x)(a3+x)(g1-x)`
    /// for a light-like pair.
    pub fn new(e: &Ellipsoid, cp: &CausticPair) -> Self {
        match cp.gamma2 {
            Gamma2::Finite(g2) => SpectralPoly { lead: cp.epsilon as f64, roots: vec![e.a1, e.a2, -e.a3, cp.gamma1, g2] },
            Gamma2::Infinity => SpectralPoly { lead: -1.0, roots: vec![e.a1, e.a2, -e.a3, cp.gamma1] },
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.roots.iter().fold(self.lead, |acc, r| acc * (x - r))
    }

    /// `P(x) / (x - roots[skip])`.
    fn eval_without(&self, x: f64, skip: usize) -> f64 {
        self.roots.iter().enumerate().filter(|&(i, _)| i != skip).fold(self.lead, |acc, (_, r)| acc * (x - r))
    }
}

/// `int_lo^hi x^k dx / sqrt(P(x))` for `P > 0` on `(lo, hi)`, with the
/// substitutions `x = lo + t^2`, `x = hi - t^2` on the two halves.
fn interval_integral(p: &SpectralPoly, lo: f64, hi: f64, k: i32, tol: f64) -> f64 {
    let mid = 0.5 * (lo + hi);
    let root_at = |x: f64| p.roots.iter().position(|&r| r == x);
    let left = {
        let root = root_at(lo);
        let f = move |t: f64| {
            let x = lo + t * t;
            match root {
                // P = t^2 R(x), R > 0
                Some(i) => 2.0 * x.powi(k) / p.eval_without(x, i).sqrt(),
                None => 2.0 * t * x.powi(k) / p.eval(x).sqrt(),
            }
        };
        integrate(&f, 0.0, (mid - lo).sqrt(), 0.5 * tol)
    };
    let right = {
        let root = root_at(hi);
        let f = move |t: f64| {
            let x = hi - t * t;
            match root {
                // P = -t^2 R(x), R < 0
                Some(i) => 2.0 * x.powi(k) / (-p.eval_without(x, i)).sqrt(),
                None => 2.0 * t * x.powi(k) / p.eval(x).sqrt(),
            }
        };
        integrate(&f, 0.0, (hi - mid).sqrt(), 0.5 * tol)
    };
    left + right
}

/// The three integrals `(I1, I2, I3)` with `I1` taken from `0` to `c1`
/// (so it is negative for `k = 0`), `I2` from `0` to `b1` and `I3` from
/// `b2` to `b3`. On an `n`-periodic trajectory with signature
/// `(m1, n1, n2)`, `m1 I1 + n1 I2 - n2 I3 = 0` for `k = 0, 1`.
pub fn darboux_integrals(
    e: &Ellipsoid,
    cp: &CausticPair,
    partition: &IntervalPartition,
    k: i32,
) -> Result<[f64; 3], ConditionError> {
    darboux_integrals_tol(e, cp, partition, k, ABS_TOL)
}

pub fn darboux_integrals_tol(
    e: &Ellipsoid,
    cp: &CausticPair,
    partition: &IntervalPartition,
    k: i32,
    tol: f64,
) -> Result<[f64; 3], ConditionError> {
    let p = SpectralPoly::new(e, cp);
    let ranges = partition.ranges();
    for (i, &(lo, hi)) in ranges.iter().enumerate() {
        if !(hi > lo) || !(p.eval(0.5 * (lo + hi)) > 0.0) {
            return Err(ConditionError::NonpositiveIntegrand(i + 1));
        }
    }
    let [r1, r2, r3] = ranges;
    Ok([
        -interval_integral(&p, r1.0, r1.1, k, tol),
        interval_integral(&p, r2.0, r2.1, k, tol),
        interval_integral(&p, r3.0, r3.1, k, tol),
    ])
}

/// `|m1 I1 + n1 I2 - n2 I3| / max |I_j|`.
pub fn darboux_residual(ints: &[f64; 3], m1: usize, n1: usize, n2: usize) -> f64 {
    let s = m1 as f64 * ints[0] + n1 as f64 * ints[1] - n2 as f64 * ints[2];
    let scale = ints.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    s.abs() / scale
}
