use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Value};

use mbl::billiard::trace;
use mbl::conditions::{cayley_test, threshold_note, HyperellipticParams, G2};
use mbl::confocal::{classify_case, line_caustics, CausticCase, Ellipsoid, Gamma2};
use mbl::exact::parse_rational;
use mbl::export::{trajectory_json, write_trajectory_csv};
use mbl::mink::{classify_direction, Vec3M, LIGHT_TOL};
use mbl::pell::parse_certificate;
use mbl::search::{cross_validate, find_periodic, SearchSpec, ValidateOptions, ValidateSpec};

#[derive(Parser)]
#[command(name = "mbl", version, about = "Billiards in an ellipsoid in 3D Minkowski space")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Line type of a direction vector.
    Classify {
        #[arg(allow_negative_numbers = true)]
        vx: f64,
        #[arg(allow_negative_numbers = true)]
        vy: f64,
        #[arg(allow_negative_numbers = true)]
        vz: f64,
    },
    /// Caustic parameters of the line through a point with a direction.
    Caustics {
        #[arg(long, default_value = "4,2,1")]
        ellipsoid: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, allow_hyphen_values = true)]
        dir: String,
    },
    /// Traces a billiard trajectory and writes it as JSON (and optionally CSV).
    Trace {
        #[arg(long, default_value = "4,2,1")]
        ellipsoid: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, allow_hyphen_values = true)]
        dir: String,
        #[arg(long, default_value_t = 20)]
        bounces: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Exact periodicity test: `--params a1,a2,a3,gamma1,gamma2` (gamma2 may be `inf`).
    CheckCayley {
        #[arg(long, allow_hyphen_values = true)]
        params: String,
        #[arg(long)]
        case: String,
        #[arg(long)]
        n: usize,
    },
    /// Verifies a Pell certificate exactly.
    VerifyPell {
        #[arg(long)]
        cert: PathBuf,
    },
    /// Searches for periodic caustic parameters described by a JSON spec.
    FindPeriodic {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validates one configuration (spec with scalar `gamma1`) or every
    /// candidate of a search spec.
    CrossValidate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Exit codes: 0 success, 1 not satisfied, 2 usage error.
enum Outcome {
    Ok,
    No,
}

struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn floats(s: &str, what: &str) -> Result<[f64; 3], Usage> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Usage(format!("{what} must be three comma-separated numbers")))?;
    v.try_into().map_err(|_| Usage(format!("{what} must have exactly three components")))
}

fn ellipsoid(s: &str) -> Result<Ellipsoid, Usage> {
    let [a1, a2, a3] = floats(s, "--ellipsoid")?;
    Ellipsoid::new(a1, a2, a3).map_err(|e| Usage(format!("--ellipsoid: {e}")))
}

fn vec3(s: &str, what: &str) -> Result<Vec3M, Usage> {
    let [x, y, z] = floats(s, what)?;
    Vec3M::new(x, y, z).map_err(|e| Usage(format!("{what}: {e}")))
}

fn write_or_print(v: &Value, out: Option<&PathBuf>) -> Result<(), Usage> {
    let text = serde_json::to_string_pretty(v)?;
    match out {
        Some(p) => fs::write(p, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(())
}

fn read_json(p: &PathBuf) -> Result<Value, Usage> {
    let text = fs::read_to_string(p).map_err(|e| Usage(format!("{}: {e}", p.display())))?;
    serde_json::from_str(&text).map_err(|e| Usage(format!("{}: {e}", p.display())))
}

fn run(cmd: Cmd) -> Result<Outcome, Usage> {
    match cmd {
        Cmd::Classify { vx, vy, vz } => {
            let v = Vec3M::new(vx, vy, vz)?;
            let lt = classify_direction(v, LIGHT_TOL)?;
            println!("{}-like", lt.label());
            Ok(Outcome::Ok)
        }
        Cmd::Caustics { ellipsoid: es, point, dir } => {
            let e = ellipsoid(&es)?;
            let p = vec3(&point, "--point")?;
            let v = vec3(&dir, "--dir")?;
            let cp = line_caustics(p, v, &e)?;
            let case = classify_case(&cp, &e).ok();
            let out = json!({
                "linetype": cp.linetype.label(),
                "gamma1": cp.gamma1,
                "gamma2": match cp.gamma2 { Gamma2::Finite(g) => json!(g), Gamma2::Infinity => json!("inf") },
                "case": case.map(|c| c.label()),
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(Outcome::Ok)
        }
        Cmd::Trace { ellipsoid: es, point, dir, bounces, out, csv } => {
            let e = ellipsoid(&es)?;
            let p = vec3(&point, "--point")?;
            let v = vec3(&dir, "--dir")?;
            if e.level(p) >= 0.0 {
                return Err(Usage("--point must lie strictly inside the ellipsoid".into()));
            }
            let traj = trace(p, v, &e, bounces)?;
            let doc = trajectory_json(&traj);
            write_or_print(&doc, out.as_ref())?;
            if let Some(path) = csv {
                write_trajectory_csv(&traj, fs::File::create(&path)?)?;
            }
            if let Some(err) = &traj.error {
                eprintln!("tracing stopped after {} bounces: {err}", traj.bounces.len());
                return Ok(Outcome::No);
            }
            Ok(Outcome::Ok)
        }
        Cmd::CheckCayley { params, case, n } => {
            let case = CausticCase::parse(&case).ok_or_else(|| Usage(format!("unknown case {case:?}")))?;
            let parts: Vec<&str> = params.split(',').map(str::trim).collect();
            if parts.len() != 5 {
                return Err(Usage("--params needs a1,a2,a3,gamma1,gamma2".into()));
            }
            let q = |s: &str| parse_rational(s).ok_or_else(|| Usage(format!("bad rational {s:?}")));
            let a: [BigRational; 3] = [q(parts[0])?, q(parts[1])?, q(parts[2])?];
            let g2 = if parts[4] == "inf" { G2::Infinity } else { G2::Finite(q(parts[4])?) };
            let hp = HyperellipticParams::new(a, q(parts[3])?, g2);
            if n < 3 {
                return Err(Usage("--n must be at least 3".into()));
            }
            if let Some(note) = threshold_note(case, n) {
                println!("NOT SATISFIED: {note}");
                return Ok(Outcome::No);
            }
            match cayley_test(&hp, case, n) {
                Ok(true) => {
                    println!("SATISFIED");
                    Ok(Outcome::Ok)
                }
                Ok(false) => {
                    println!("NOT SATISFIED: Hankel blocks have full rank");
                    Ok(Outcome::No)
                }
                Err(e) => Err(Usage(e.to_string())),
            }
        }
        Cmd::VerifyPell { cert } => {
            let v = read_json(&cert)?;
            let c = parse_certificate(&v).map_err(Usage)?;
            if c.verify() {
                println!("VERIFIED: {} identity holds exactly (n = {})", c.variant(), c.n());
                Ok(Outcome::Ok)
            } else {
                println!("FAILED: {} identity does not hold", c.variant());
                Ok(Outcome::No)
            }
        }
        Cmd::FindPeriodic { spec, out } => {
            let s: SearchSpec = serde_json::from_value(read_json(&spec)?)?;
            let cands = find_periodic(&s)?;
            let doc = Value::Array(cands.iter().map(|c| c.to_json()).collect());
            write_or_print(&doc, out.as_ref())?;
            eprintln!("{} candidate(s)", cands.len());
            Ok(if cands.is_empty() { Outcome::No } else { Outcome::Ok })
        }
        Cmd::CrossValidate { spec, out } => {
            let v = read_json(&spec)?;
            let scalar = v.get("gamma1").is_some_and(|g| !g.is_array());
            let reports = if scalar {
                let s: ValidateSpec = serde_json::from_value(v)?;
                let case = CausticCase::parse(&s.case).ok_or_else(|| Usage(format!("unknown case {:?}", s.case)))?;
                let opts = ValidateOptions { seed: s.seed, ..Default::default() };
                vec![cross_validate(&s.params(), case, s.n, &opts)]
            } else {
                let s: SearchSpec = serde_json::from_value(v)?;
                let opts = ValidateOptions { seed: s.seed, ..Default::default() };
                find_periodic(&s)?.iter().map(|c| cross_validate(&c.params, c.case, c.n, &opts)).collect()
            };
            let all_valid = !reports.is_empty() && reports.iter().all(|r| r.valid);
            for r in &reports {
                let status = if r.valid { "VALID".to_string() } else { format!("INVALID ({})", r.failure_stage.as_deref().unwrap_or("")) };
                eprintln!("{} n={} gamma1={} closure={:.3e}: {status}", r.case, r.n, r.params["gamma1"], r.closure_error);
            }
            write_or_print(&serde_json::to_value(&reports)?, out.as_ref())?;
            Ok(if all_valid { Outcome::Ok } else { Outcome::No })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::No) => ExitCode::from(1),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
