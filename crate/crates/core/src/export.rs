//! Trajectory export as JSON and CSV.

use std::io::Write;

use serde_json::{json, Value};

use crate::billiard::{detect_period, Trajectory, RETURN_TOL};
use crate::confocal::Gamma2;

/// The trajectory document: `ellipsoid`, `linetype`, `caustics`, `case`,
/// `bounces` and `period` (`null` when no return within tolerance).
pub fn trajectory_json(traj: &Trajectory) -> Value {
    let e = &traj.ellipsoid;
    let caustics = traj.caustics.map(|cp| {
        json!({
            "gamma1": cp.gamma1,
            "gamma2": match cp.gamma2 {
                Gamma2::Finite(g) => json!(g),
                Gamma2::Infinity => json!("inf"),
            },
        })
    });
    let bounces: Vec<Value> = traj
        .bounces
        .iter()
        .map(|b| {
            json!({
                "t": b.param_t,
                "point": b.point.to_array(),
                "component": b.component.label(),
                "lambda": b.coords.to_array(),
            })
        })
        .collect();
    let period = detect_period(traj, RETURN_TOL).map(|s| json!({"n": s.n, "m1": s.m1, "n1": s.n1, "n2": s.n2}));
    json!({
        "ellipsoid": [e.a1, e.a2, e.a3],
        "linetype": traj.linetype.label(),
        "caustics": caustics,
        "case": traj.case.map(|c| c.label()),
        "bounces": bounces,
        "period": period,
    })
}

/// One row per bounce: `index,t,x1,x2,x3,component,lambda1,lambda2,lambda3`.
pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["index", "t", "x1", "x2", "x3", "component", "lambda1", "lambda2", "lambda3"])?;
    for (i, b) in traj.bounces.iter().enumerate() {
        let [x1, x2, x3] = b.point.to_array();
        let [l1, l2, l3] = b.coords.to_array();
        w.write_record(&[
            i.to_string(),
            b.param_t.to_string(),
            x1.to_string(),
            x2.to_string(),
            x3.to_string(),
            b.component.label().to_string(),
            l1.to_string(),
            l2.to_string(),
            l3.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::billiard::trace;
    use crate::confocal::Ellipsoid;
    use crate::mink::Vec3M;

    #[test]
    fn schema_fields() {
        let e = Ellipsoid::standard();
        let t = trace(Vec3M::from_array([0.0, 0.0, 0.0]), Vec3M::from_array([0.0, 0.0, 1.0]), &e, 6).unwrap();
        let v = trajectory_json(&t);
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, ["bounces", "case", "caustics", "ellipsoid", "linetype", "period"]);
        assert_eq!(v["period"], json!({"n": 2, "m1": 2, "n1": 0, "n2": 0}));
        assert_eq!(v["bounces"][0]["component"], "capN");
        let mut buf = Vec::new();
        write_trajectory_csv(&t, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 7);
    }
}
