use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use toroidal_core::combinatorics::{
    enumerate_arc_partitions, enumerate_asyt, enumerate_fixed_points, enumerate_syt, Arc, DegreeVector,
    NTuplePartition, SkewShape,
};
use toroidal_core::correspondences::{geometric_matcoeff, GeomOperator};
use toroidal_core::module_k::{KModule, KVector};
use toroidal_core::params::Params;
use toroidal_core::shuffle::{ShuffleExpr, Sign};
use toroidal_core::verify::{self, VerifyOptions};

#[derive(Parser)]
#[command(name = "toroidal", version, about = "Exact shuffle algebra computations on fixed-point bases")]
struct Cli {
    /// Print a readable summary instead of JSON.
    #[arg(long, global = true)]
    human: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the fixed points of a given degree.
    FixedPoints {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        degree: Vec<u32>,
    },
    /// List the standard and almost standard tableaux of a skew shape.
    Tableaux {
        #[arg(long)]
        n: usize,
        /// Inner fixed point.
        #[arg(long)]
        from: String,
        /// Outer fixed point.
        #[arg(long)]
        to: String,
        /// Label interval `i,j`; defaults to every start color in `1..=n`.
        #[arg(long, value_delimiter = ',')]
        arc: Option<Vec<i64>>,
    },
    /// Matrix coefficient of a shuffle element between two fixed points.
    Matcoeff(Transition),
    /// Geometric coefficient of the correspondence realizing an S, T or G element.
    Geomcoeff(Transition),
    /// Apply a shuffle element to a basis vector.
    Apply {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        op: String,
        #[arg(long)]
        from: String,
    },
    /// Compare fixed-point counts with arc-partition counts.
    Dims {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max: u32,
    },
    /// Run verification suites.
    Verify {
        /// Suite name, `theorem-geom`, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        max_boxes: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        jobs: Option<usize>,
        /// Include wall time in the report.
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Args)]
struct Transition {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    op: String,
    /// Source fixed point.
    #[arg(long)]
    from: String,
    /// Target fixed point.
    #[arg(long)]
    to: String,
}

enum Failure {
    Usage(String),
    Internal(String),
}

type Outcome = Result<(Value, String, bool), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn internal(e: impl std::fmt::Display) -> Failure {
    Failure::Internal(e.to_string())
}

fn partition(text: &str, n: usize) -> Result<NTuplePartition, Failure> {
    let p: NTuplePartition = serde_json::from_str(text).map_err(|e| usage(format!("invalid partition `{text}`: {e}")))?;
    if p.n() != n {
        return Err(usage(format!("partition `{text}` has {} components, expected {n}", p.n())));
    }
    Ok(p)
}

fn params(n: usize) -> Result<Params, Failure> {
    Params::symbolic(n).map_err(usage)
}

fn element(text: &str, n: usize) -> Result<ShuffleExpr, Failure> {
    ShuffleExpr::parse(text, n).map_err(usage)
}

/// `(λ, μ)` in the order matrix coefficients take them: `+` raises `μ` to `λ`,
/// `−` lowers `λ` to `μ`.
fn oriented(sign: Sign, from: NTuplePartition, to: NTuplePartition) -> (NTuplePartition, NTuplePartition) {
    match sign {
        Sign::Plus => (to, from),
        Sign::Minus => (from, to),
    }
}

fn fixed_points(n: usize, degree: Vec<u32>) -> Outcome {
    if degree.len() != n {
        return Err(usage(format!("--degree has {} entries, expected {n}", degree.len())));
    }
    let points = enumerate_fixed_points(n, &DegreeVector(degree)).map_err(usage)?;
    let human = points.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("\n");
    Ok((json!(points), human, true))
}

fn tableaux(n: usize, from: &str, to: &str, arc: Option<Vec<i64>>) -> Outcome {
    let (inner, outer) = (partition(from, n)?, partition(to, n)?);
    let skew = SkewShape::new(outer, inner).map_err(usage)?;
    let len = skew.len() as i64;
    let arcs = match arc {
        Some(a) if a.len() == 2 => vec![Arc { i: a[0], j: a[1] }],
        Some(_) => return Err(usage("--arc takes two integers `i,j`")),
        None => (1..=n as i64).map(|i| Arc { i, j: i + len }).collect(),
    };
    let mut out = Vec::new();
    let mut human = Vec::new();
    for arc in arcs {
        if arc.j - arc.i != len {
            return Err(usage(format!("arc {arc} has length {}, skew shape has {len} boxes", arc.j - arc.i)));
        }
        let standard = enumerate_syt(&skew, &arc);
        let almost: Vec<Value> =
            enumerate_asyt(&skew, &arc).iter().map(|a| json!({"tableau": a.tableau, "cutoffs": a.cutoffs})).collect();
        human.push(format!("{arc}: {} standard, {} almost standard", standard.len(), almost.len()));
        out.push(json!({"arc": [arc.i, arc.j], "standard": standard, "almost_standard": almost}));
    }
    Ok((Value::Array(out), human.join("\n"), true))
}

fn matcoeff_cmd(t: &Transition) -> Outcome {
    let p = params(t.n)?;
    let r = element(&t.op, t.n)?;
    let (from, to) = (partition(&t.from, t.n)?, partition(&t.to, t.n)?);
    let (lambda, mu) = oriented(r.sign(), from.clone(), to.clone());
    let value = KModule::new(p).matcoeff(&r, &lambda, &mu).map_err(internal)?;
    let out = json!({"op": r.to_string(), "from": from, "to": to, "value": value.to_string()});
    Ok((out, value.to_string(), true))
}

fn geomcoeff_cmd(t: &Transition) -> Outcome {
    let p = params(t.n)?;
    let r = element(&t.op, t.n)?;
    let op = GeomOperator::realizing(&r).ok_or_else(|| usage(format!("`{}` is not an S, T or G element", t.op)))?;
    let (from, to) = (partition(&t.from, t.n)?, partition(&t.to, t.n)?);
    let (lambda, mu) = oriented(r.sign(), from.clone(), to.clone());
    let geometric = geometric_matcoeff(&p, &op, &lambda, &mu).map_err(internal)?;
    let shuffle = KModule::new(p).matcoeff(&r, &lambda, &mu).map_err(internal)?;
    let equal = geometric.equals(&shuffle);
    let out = json!({
        "op": r.to_string(),
        "from": from,
        "to": to,
        "geometric": geometric.to_string(),
        "shuffle": shuffle.to_string(),
        "equal": equal,
    });
    Ok((out, format!("geometric {geometric}\nshuffle   {shuffle}\nequal     {equal}"), equal))
}

fn apply(n: usize, op: &str, from: &str) -> Outcome {
    let km = KModule::new(params(n)?);
    let r = element(op, n)?;
    let v = km.apply(&r, &KVector::basis(partition(from, n)?)).map_err(internal)?;
    let human = v.iter().map(|(p, c)| format!("{p}  {c}")).collect::<Vec<_>>().join("\n");
    Ok((json!(v), human, true))
}

fn dims(n: usize, max: u32) -> Outcome {
    let mut rows = Vec::new();
    let mut human = Vec::new();
    let mut all_equal = true;
    for d in DegreeVector::all_up_to(n, max) {
        let points = enumerate_fixed_points(n, &d).map_err(usage)?.len();
        let arcs = enumerate_arc_partitions(&d).len();
        all_equal &= points == arcs;
        human.push(format!("{d:<12} {points:>6} {arcs:>6}"));
        rows.push(json!({"degree": d.0, "fixed_points": points, "arc_partitions": arcs, "equal": points == arcs}));
    }
    Ok((Value::Array(rows), human.join("\n"), all_equal))
}

fn verify_cmd(suite: &str, opts: VerifyOptions) -> Outcome {
    let reports = verify::run(suite, &opts).map_err(|e| match e {
        verify::VerifyError::UnknownSuite(_) => usage(e),
        other => internal(other),
    })?;
    let ok = reports.iter().all(|r| r.passed());
    let human = reports
        .iter()
        .map(|r| {
            let verdict = if r.passed() { "PASS" } else { "FAIL" };
            format!("{verdict} {:<22} {}/{}", r.suite, r.summary.passed, r.summary.total)
        })
        .collect::<Vec<_>>()
        .join("\n");
    Ok((json!(reports), human, ok))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::FixedPoints { n, degree } => fixed_points(*n, degree.clone()),
        Command::Tableaux { n, from, to, arc } => tableaux(*n, from, to, arc.clone()),
        Command::Matcoeff(t) => matcoeff_cmd(t),
        Command::Geomcoeff(t) => geomcoeff_cmd(t),
        Command::Apply { n, op, from } => apply(*n, op, from),
        Command::Dims { n, max } => dims(*n, *max),
        Command::Verify { suite, n, max_boxes, seed, jobs, timing } => verify_cmd(
            suite,
            VerifyOptions { n: *n, max_boxes: *max_boxes, seed: *seed, jobs: *jobs, timing: *timing },
        ),
    };
    match outcome {
        Ok((value, human, ok)) => {
            let text = if cli.human { human } else { value.to_string() };
            // A closed pipe downstream is not an error worth reporting.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            println!("{}", json!({"error": msg}));
            ExitCode::FAILURE
        }
    }
}
