//! Argument parsing and dispatch for the `kronecker` binary. Every command
//! returns its stdout payload as a string so it can be tested in-process.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use kronecker::benjamin_ono::{bo_report, BoActionSpec};
use kronecker::classification::module::{classification_report, closures_homeomorphic, orbit_closure};
use kronecker::dynamics::{
    average_report, equidistribution_report, minimality_probe, resonance_witness, trajectory, trajectory_csv,
    ProbeConfig, TrigPolynomial,
};
use kronecker::frequency::generator::GeneratorTable;
use kronecker::frequency::{parse_frequency_spec, FrequencyVector, SigmaSequence};
use kronecker::linalg::{parse_rational, IntVecFin, Rational};
use kronecker::precision::{Precision, MIN_PRECISION_BITS};
use kronecker::resonance::{reduce_flow, reduce_vector, resonance_basis};
use kronecker::solenoid::{
    approximating_times, from_coordinates, is_member, local_chart, to_coordinates, SolenoidCoords,
};
use kronecker::torus::TorusPoint;
use kronecker::{KronError, Result};

pub const DEFAULT_DEPTH: usize = 16;

#[derive(Parser, Debug)]
#[command(name = "kronecker", version, about = "Exact invariants and numeric checks for linear flows on truncated infinite-dimensional tori")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Frequency module decomposition and orbit closure.
    Classify {
        spec: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Integer basis of the resonance module of the first N frequencies.
    Resonance {
        spec: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Reduce an integer vector to (gcd, 0, …) with an audit trail.
    Reduce {
        #[arg(long, allow_hyphen_values = true)]
        nu: String,
    },
    /// Conjugate the flow to one with a zero block and a non-resonant block.
    ReduceFlow {
        spec: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Sample a trajectory and write it as CSV.
    Simulate {
        spec: PathBuf,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t0: f64,
        #[arg(long, allow_hyphen_values = true)]
        t1: f64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        /// Initial point as a JSON list ("p/q" turns or float angles).
        #[arg(long)]
        theta0: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form time averages of a trigonometric polynomial.
    Average {
        spec: PathBuf,
        #[arg(long)]
        poly: PathBuf,
        #[arg(long = "T", value_delimiter = ',', default_values_t = [1e2, 1e3, 1e4])]
        times: Vec<f64>,
        #[arg(long)]
        theta0: Option<String>,
    },
    /// Decay of time averages of single exponentials against 2/(T|ω·ν|).
    Equidistribution {
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true, required = true)]
        nu: Vec<String>,
        #[arg(long = "T", value_delimiter = ',', default_values_t = [1e2, 1e3, 1e4])]
        times: Vec<f64>,
        #[arg(long)]
        theta0: Option<String>,
    },
    /// Search the orbit of the origin for a point near a target.
    Probe {
        spec: PathBuf,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[arg(long, default_value_t = 1e4)]
        t_max: f64,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Check exactly that a resonance is conserved along the orbit.
    Witness {
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        nu: String,
        /// Rational times in turns, comma separated.
        #[arg(long, allow_hyphen_values = true, default_value = "0,1/2,7/3,-5/7,100")]
        times: String,
        #[arg(long)]
        theta0: Option<String>,
    },
    /// Solenoid membership, coordinates, approximating times and chart.
    Solenoid {
        #[command(subcommand)]
        op: SolenoidOp,
    },
    /// Benjamin–Ono frequency module and orbit closure.
    Bo {
        spec: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Whether two orbit closures are homeomorphic.
    Iso {
        spec1: PathBuf,
        spec2: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum SolenoidOp {
    /// Exact membership of a point at its depth.
    Member {
        /// Sequence as JSON, or @file.
        #[arg(long)]
        a: String,
        #[arg(long)]
        theta: String,
    },
    /// (τ, digits) of a member point, or the point of given coordinates.
    Coords {
        #[arg(long)]
        a: String,
        #[arg(long, conflicts_with = "coords", required_unless_present = "coords")]
        theta: Option<String>,
        #[arg(long)]
        coords: Option<String>,
    },
    /// Approximating times of the point with given coordinates.
    Times {
        #[arg(long)]
        a: String,
        #[arg(long)]
        coords: String,
    },
    /// Local interval × digits chart of a member point.
    Chart {
        #[arg(long)]
        a: String,
        #[arg(long)]
        theta: String,
    },
}

/// Reads `KRON_PRECISION`, defaulting to the library precision.
pub fn precision_from_env(value: Option<&str>) -> Result<Precision> {
    match value {
        None => Ok(Precision::default()),
        Some(text) => {
            let bits: usize = text
                .trim()
                .parse()
                .map_err(|_| KronError::parse("KRON_PRECISION", format!("expected a bit count, got {text:?}")))?;
            if bits < MIN_PRECISION_BITS {
                return Err(KronError::validation(
                    "KRON_PRECISION",
                    format!("at least {MIN_PRECISION_BITS} bits are required, got {bits}"),
                ));
            }
            Ok(Precision::new(bits))
        }
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let field = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| KronError::parse(&field, e.to_string()))?;
    serde_json::from_str(&text).map_err(|e| KronError::parse(&field, e.to_string()))
}

fn inline_json(text: &str, field: &str) -> Result<Value> {
    match text.strip_prefix('@') {
        Some(path) => read_json(Path::new(path)),
        None => serde_json::from_str(text).map_err(|e| KronError::parse(field, e.to_string())),
    }
}

fn load_spec(path: &Path) -> Result<FrequencyVector> {
    parse_frequency_spec(&read_json(path)?)
}

fn check_depth(depth: usize) -> Result<()> {
    if depth == 0 {
        return Err(KronError::validation("depth", "must be at least 1"));
    }
    Ok(())
}

fn parse_int_list(text: &str, field: &str) -> Result<IntVecFin> {
    let values = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| KronError::parse(field, format!("bad integer {s:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntVecFin::from_dense(&values))
}

fn parse_rational_list(text: &str, field: &str) -> Result<Vec<Rational>> {
    text.split(',')
        .map(|s| parse_rational(s.trim()).map_err(|e| KronError::parse(field, e.to_string())))
        .collect()
}

fn point_or_origin(text: Option<&str>, field: &str, depth: usize) -> Result<TorusPoint> {
    match text {
        Some(t) => TorusPoint::from_json(&inline_json(t, field)?, field),
        None => Ok(TorusPoint::origin(depth)),
    }
}

fn solenoid_point(text: &str, field: &str) -> Result<TorusPoint> {
    let p = TorusPoint::from_json(&inline_json(text, field)?, field)?;
    if p.depth() < 2 {
        return Err(KronError::validation(field, "solenoid points need depth at least 2"));
    }
    Ok(p)
}

fn solenoid_coords(text: &str) -> Result<SolenoidCoords> {
    let c = SolenoidCoords::from_json(&inline_json(text, "coords")?, "coords")?;
    if c.digits.is_empty() {
        return Err(KronError::validation("coords.digits", "solenoid coordinates need depth at least 2"));
    }
    Ok(c)
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Runs one command and returns what it prints on stdout.
pub fn run(cli: &Cli, precision: Precision) -> Result<String> {
    match &cli.command {
        Command::Classify { spec, depth } => {
            check_depth(*depth)?;
            Ok(render(&classification_report(&load_spec(spec)?, *depth)?))
        }
        Command::Resonance { spec, depth } => {
            check_depth(*depth)?;
            Ok(render(&resonance_basis(&load_spec(spec)?, *depth).to_json()))
        }
        Command::Reduce { nu } => Ok(render(&reduce_vector(&parse_int_list(nu, "nu")?)?.to_json())),
        Command::ReduceFlow { spec, depth } => {
            check_depth(*depth)?;
            Ok(render(&reduce_flow(&load_spec(spec)?, *depth).to_json()))
        }
        Command::Simulate {
            spec,
            t0,
            t1,
            steps,
            depth,
            theta0,
            out,
        } => {
            check_depth(*depth)?;
            let fv = load_spec(spec)?;
            let n = fv.effective_depth(*depth);
            let start = point_or_origin(theta0.as_deref(), "theta0", n)?;
            let rows = trajectory(&fv, &start, *t0, *t1, *steps, n, precision)?;
            let csv = trajectory_csv(&rows);
            match out {
                Some(path) => {
                    fs::write(path, &csv).map_err(|e| KronError::parse("out", e.to_string()))?;
                    Ok(render(&json!({ "out": path.display().to_string(), "rows": rows.len(), "depth": n })))
                }
                None => Ok(csv),
            }
        }
        Command::Average {
            spec,
            poly,
            times,
            theta0,
        } => {
            let fv = load_spec(spec)?;
            let p = TrigPolynomial::from_json(&read_json(poly)?)?;
            let n = fv.effective_depth(p.max_index().max(1));
            let start = point_or_origin(theta0.as_deref(), "theta0", n.max(p.max_index()))?;
            let rows = average_report(&fv, &p, &start, times, precision)?;
            Ok(render(&json!({
                "haar": kronecker::linalg::format_rational(&kronecker::dynamics::haar_average(&p)),
                "rows": rows.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            })))
        }
        Command::Equidistribution {
            spec,
            nu,
            times,
            theta0,
        } => {
            let fv = load_spec(spec)?;
            let nus = nu
                .iter()
                .enumerate()
                .map(|(k, s)| parse_int_list(s, &format!("nu[{k}]")))
                .collect::<Result<Vec<_>>>()?;
            let need = nus.iter().map(IntVecFin::max_index).max().unwrap_or(1);
            let start = point_or_origin(theta0.as_deref(), "theta0", need)?;
            let rows = equidistribution_report(&fv, &nus, times, &start, precision)?;
            Ok(render(&json!({
                "rows": rows.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
                "all_pass": rows.iter().all(|r| r.passed() != Some(false)),
            })))
        }
        Command::Probe {
            spec,
            target,
            eps,
            t_max,
            step,
            depth,
        } => {
            check_depth(*depth)?;
            let fv = load_spec(spec)?;
            let target = TorusPoint::from_json(&inline_json(target, "target")?, "target")?;
            let config = ProbeConfig {
                epsilon: *eps,
                t_max: *t_max,
                step: *step,
            };
            Ok(render(&minimality_probe(&fv, &target, *depth, &config, precision)?.to_json()))
        }
        Command::Witness {
            spec,
            nu,
            times,
            theta0,
        } => {
            let fv = load_spec(spec)?;
            let nu = parse_int_list(nu, "nu")?;
            let times = parse_rational_list(times, "times")?;
            let start = point_or_origin(theta0.as_deref(), "theta0", nu.max_index())?;
            Ok(render(&resonance_witness(&fv, &nu, &start, &times)?.to_json()))
        }
        Command::Solenoid { op } => run_solenoid(op),
        Command::Bo { spec, depth } => {
            check_depth(*depth)?;
            let doc = read_json(spec)?;
            let table = GeneratorTable::from_json(doc.get("generators"))?;
            let bo = BoActionSpec::from_json(&doc, &table)?;
            Ok(render(&bo_report(&bo, *depth)?))
        }
        Command::Iso { spec1, spec2, depth } => {
            check_depth(*depth)?;
            let (a, b) = (load_spec(spec1)?, load_spec(spec2)?);
            Ok(render(&json!({
                "homeomorphic": closures_homeomorphic(&a, &b, *depth)?,
                "left": orbit_closure(&a, *depth)?.to_json(),
                "right": orbit_closure(&b, *depth)?.to_json(),
            })))
        }
    }
}

fn run_solenoid(op: &SolenoidOp) -> Result<String> {
    let seq = |text: &str| SigmaSequence::from_json(&inline_json(text, "a")?, "a");
    match op {
        SolenoidOp::Member { a, theta } => {
            let p = solenoid_point(theta, "theta")?;
            let member = is_member(&seq(a)?, &p)?;
            Ok(render(&json!({
                "member": member,
                "depth": p.depth(),
                "verdict": if member { format!("member at depth {}", p.depth()) } else { "not a member".into() },
            })))
        }
        SolenoidOp::Coords { a, theta, coords } => {
            let a = seq(a)?;
            match (theta, coords) {
                (Some(t), _) => Ok(render(&to_coordinates(&a, &solenoid_point(t, "theta")?)?.to_json())),
                (None, Some(c)) => Ok(render(&from_coordinates(&a, &solenoid_coords(c)?)?.to_json())),
                (None, None) => Err(KronError::parse("theta", "either --theta or --coords is required")),
            }
        }
        SolenoidOp::Times { a, coords } => {
            let times = approximating_times(&seq(a)?, &solenoid_coords(coords)?)?;
            Ok(render(&json!({
                "times": times.iter().map(kronecker::linalg::format_rational).collect::<Vec<_>>(),
                "unit": "turns",
            })))
        }
        SolenoidOp::Chart { a, theta } => {
            let (x, digits) = local_chart(&seq(a)?, &solenoid_point(theta, "theta")?)?;
            Ok(render(&json!({
                "interval": kronecker::linalg::format_rational(&x),
                "digits": digits,
            })))
        }
    }
}
