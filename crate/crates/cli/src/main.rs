//! `qfint` — integral point sets over affine spaces F_q^m.
//!
//! Subcommands map onto the library modules: `field` (arithmetic), `counts`
//! and `srg` and `neighbors` (norm-class censuses and common neighbors),
//! `witness` (orthogonal transitivity witnesses), `verify` (invariant
//! suites), `clique` and `itable` (maximum integral point sets),
//! `construct` (explicit lower-bound sets), `export-dimacs` and
//! `verify-pointset` (interchange).
//!
//! Every command honors `--json` (stable, alphabetically-keyed schema) and
//! `--deterministic` (byte-identical output across runs and worker counts;
//! wall times are rendered as `-`/null). Exit codes: 0 success, 1
//! verification failure, 2 usage error, 3 budget or timeout with partial
//! output. Setting `QFINT_CACHE_DIR` enables an append-only cache of
//! completed clique results shared by `clique` and `itable`.

mod cache;
mod verify;

use clap::{Parser, Subcommand};
use qfint_core::clique::{
    self, CliqueError, CliqueResult, CliqueStatus, IntegralityGraph, SearchConfig,
};
use qfint_core::constructions::{self, ConstructionError};
use qfint_core::counting::{self, CountError, CountRecord};
use qfint_core::ffield::{make_field, parse_field_descriptor, FieldError, FieldSpec};
use qfint_core::geometry::{
    format_point_set, parse_point, parse_point_set, GeometryError, NormClass, Point,
};
use qfint_core::symmetry::{self, SymmetryError};
use serde_json::json;
use std::fmt::Write as _;
use std::fs;
use std::io::Read as _;
use std::time::Duration;

const EXIT_OK: i32 = 0;
const EXIT_VERIFY: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_PARTIAL: i32 = 3;

#[derive(Parser)]
#[command(name = "qfint", version, about = "Integral point sets over F_q^m")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Reproducible output: fixed search order, wall times rendered as `-`.
    #[arg(long, global = true)]
    deterministic: bool,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Describe a finite field: order, modulus, quadratic structure.
    Field {
        /// Field descriptor `p`, `p^r`, or `p^r:c0,...,cr` (or a prime power).
        #[arg(long)]
        q: String,
    },
    /// Norm-class censuses S, Z, N and the graph degree D as CSV.
    Counts {
        #[arg(long)]
        m: u32,
        /// Comma-separated field orders, e.g. `5,7,9`.
        #[arg(long, value_delimiter = ',')]
        q: Vec<u64>,
        /// closed | recursive | brute
        #[arg(long, default_value = "closed")]
        method: String,
        /// Run all three methods and require agreement.
        #[arg(long)]
        cross_check: bool,
    },
    /// Strong-regularity parameters of the integral-distance graph as CSV.
    Srg {
        #[arg(long)]
        m: u32,
        #[arg(long, value_delimiter = ',')]
        q: Vec<u64>,
    },
    /// Count common neighbors of two points, against the closed forms.
    Neighbors {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        q: String,
        /// First point (default: the origin).
        #[arg(long)]
        u: Option<String>,
        /// Second point (default: the first unit vector).
        #[arg(long)]
        v: Option<String>,
    },
    /// Orthogonal matrix mapping one point to another of the same norm.
    Witness {
        #[arg(long)]
        q: String,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
    },
    /// Run invariant suites: all | conjecture | groups | constructions.
    Verify {
        suite: String,
        /// Largest prime for conjecture sweeps.
        #[arg(long, default_value_t = 101)]
        pmax: u64,
        /// Largest field order for construction checks.
        #[arg(long, default_value_t = 27)]
        qmax: u64,
        /// Restrict the conjecture sweep to one dimension.
        #[arg(long)]
        m: Option<u32>,
        /// Random representatives sampled per norm class.
        #[arg(long, default_value_t = 5)]
        samples: u32,
        #[arg(long, default_value_t = 0x51F7)]
        seed: u64,
    },
    /// Maximum-clique search on the integral-distance graph.
    Clique {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        q: String,
        /// Points every clique must contain, e.g. `(0,0,0);(1,0,0)`.
        #[arg(long)]
        prescribe: Option<String>,
        /// Wall-clock limit, e.g. `600s`, `10m`, `250ms`.
        #[arg(long)]
        time_limit: Option<String>,
        /// Also write the graph in DIMACS format to this path.
        #[arg(long)]
        export_dimacs: Option<String>,
    },
    /// Exact I(m, q) over a list of field orders, as a table plus CSV.
    Itable {
        #[arg(long, default_value_t = 3)]
        m: u32,
        #[arg(long, value_delimiter = ',')]
        q: Vec<String>,
        /// Wall-clock limit per entry.
        #[arg(long)]
        time_limit: Option<String>,
    },
    /// Emit an explicit integral point set in the point-set file format.
    Construct {
        /// line | hyperplane | circle-plus-line | isotropic-plane |
        /// nonintegral-plane | lower-bound
        name: String,
        #[arg(long)]
        q: String,
        /// Dimension (required for line and lower-bound).
        #[arg(long)]
        m: Option<usize>,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<String>,
    },
    /// Write the integral-distance graph in DIMACS `p edge` format.
    ExportDimacs {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        q: String,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<String>,
    },
    /// Check a point-set file for pairwise integral distances.
    VerifyPointset {
        /// Path to a point-set file, or `-` for stdin.
        file: String,
    },
}

/// A command failure carrying its process exit code.
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_USAGE,
            message: msg.into(),
        }
    }
}

impl From<FieldError> for Failure {
    fn from(e: FieldError) -> Failure {
        Failure::usage(e.to_string())
    }
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Failure {
        Failure::usage(e.to_string())
    }
}

impl From<CountError> for Failure {
    fn from(e: CountError) -> Failure {
        let code = match e {
            CountError::BudgetExceeded { .. } => EXIT_PARTIAL,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<SymmetryError> for Failure {
    fn from(e: SymmetryError) -> Failure {
        let code = match e {
            SymmetryError::BudgetExceeded { .. } => EXIT_PARTIAL,
            SymmetryError::WitnessDefect(_) => EXIT_VERIFY,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<ConstructionError> for Failure {
    fn from(e: ConstructionError) -> Failure {
        let code = match e {
            ConstructionError::BudgetExceeded { .. } => EXIT_PARTIAL,
            ConstructionError::WrongResidue { .. } | ConstructionError::MixedPoints => EXIT_USAGE,
            ConstructionError::Field(_) | ConstructionError::Geometry(_) => EXIT_USAGE,
            _ => EXIT_VERIFY,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<CliqueError> for Failure {
    fn from(e: CliqueError) -> Failure {
        let code = match &e {
            CliqueError::BudgetExceeded { .. } => EXIT_PARTIAL,
            CliqueError::InfeasiblePrescribed { .. } => EXIT_VERIFY,
            CliqueError::Construction(ConstructionError::BudgetExceeded { .. }) => EXIT_PARTIAL,
            CliqueError::Construction(ConstructionError::WrongResidue { .. }) => EXIT_USAGE,
            CliqueError::Construction(_) => EXIT_VERIFY,
            CliqueError::Io(_) => EXIT_VERIFY,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure {
            code: EXIT_VERIFY,
            message: e.to_string(),
        }
    }
}

pub struct Ctx {
    pub json: bool,
    pub deterministic: bool,
    pub workers: usize,
}

impl Ctx {
    /// Wall time for reports: suppressed in deterministic mode.
    pub fn secs(&self, d: Duration) -> Option<f64> {
        if self.deterministic {
            None
        } else {
            Some(d.as_secs_f64())
        }
    }

    pub fn secs_str(&self, d: Duration) -> String {
        match self.secs(d) {
            Some(s) => format!("{s:.3}s"),
            None => "-".to_string(),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let ctx = Ctx {
        json: cli.json,
        deterministic: cli.deterministic,
        workers: cli.workers.filter(|&w| w > 0).unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        }),
    };
    let code = match run(cli.cmd, &ctx) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    };
    std::process::exit(code);
}

fn run(cmd: Cmd, ctx: &Ctx) -> Result<i32, Failure> {
    match cmd {
        Cmd::Field { q } => cmd_field(ctx, &q),
        Cmd::Counts {
            m,
            q,
            method,
            cross_check,
        } => cmd_counts(ctx, m, &q, &method, cross_check),
        Cmd::Srg { m, q } => cmd_srg(ctx, m, &q),
        Cmd::Neighbors { m, q, u, v } => cmd_neighbors(ctx, m, &q, u.as_deref(), v.as_deref()),
        Cmd::Witness { q, u, v } => cmd_witness(ctx, &q, &u, &v),
        Cmd::Verify {
            suite,
            pmax,
            qmax,
            m,
            samples,
            seed,
        } => verify::cmd_verify(ctx, &suite, pmax, qmax, m, samples, seed),
        Cmd::Clique {
            m,
            q,
            prescribe,
            time_limit,
            export_dimacs,
        } => cmd_clique(
            ctx,
            m,
            &q,
            prescribe.as_deref(),
            time_limit.as_deref(),
            export_dimacs.as_deref(),
        ),
        Cmd::Itable { m, q, time_limit } => cmd_itable(ctx, m, &q, time_limit.as_deref()),
        Cmd::Construct { name, q, m, out } => cmd_construct(ctx, &name, &q, m, out.as_deref()),
        Cmd::ExportDimacs { m, q, out } => cmd_export_dimacs(ctx, m, &q, out.as_deref()),
        Cmd::VerifyPointset { file } => cmd_verify_pointset(ctx, &file),
    }
}

// ---------------------------------------------------------------------------
// Shared argument parsing
// ---------------------------------------------------------------------------

/// Factor a prime power and build the field with the default modulus.
pub fn field_for_q(q: u64) -> Result<FieldSpec, Failure> {
    if q < 3 {
        return Err(Failure::usage(format!("{q} is not an odd prime power")));
    }
    let mut p = 0;
    for d in 2..=q {
        if d * d > q {
            p = q;
            break;
        }
        if q % d == 0 {
            p = d;
            break;
        }
    }
    let mut r = 0u32;
    let mut acc = 1u64;
    while acc < q {
        acc *= p;
        r += 1;
    }
    if acc != q {
        return Err(Failure::usage(format!("{q} is not a prime power")));
    }
    Ok(make_field(p, r, None)?)
}

/// Accept a full field descriptor or a bare prime-power order.
pub fn parse_field_arg(s: &str) -> Result<FieldSpec, Failure> {
    match parse_field_descriptor(s) {
        Ok(f) => Ok(f),
        Err(e) => {
            if let Ok(q) = s.parse::<u64>() {
                field_for_q(q)
            } else {
                Err(Failure::from(e))
            }
        }
    }
}

/// `600s`, `10m`, `250ms`, `2h`, or bare seconds.
fn parse_duration(s: &str) -> Result<Duration, Failure> {
    let (num, scale) = if let Some(v) = s.strip_suffix("ms") {
        (v, 0.001)
    } else if let Some(v) = s.strip_suffix('s') {
        (v, 1.0)
    } else if let Some(v) = s.strip_suffix('m') {
        (v, 60.0)
    } else if let Some(v) = s.strip_suffix('h') {
        (v, 3600.0)
    } else {
        (s, 1.0)
    };
    let v: f64 = num
        .parse()
        .map_err(|_| Failure::usage(format!("cannot parse duration {s:?}")))?;
    if !v.is_finite() || v < 0.0 {
        return Err(Failure::usage(format!("cannot parse duration {s:?}")));
    }
    Ok(Duration::from_secs_f64(v * scale))
}

fn parse_prescribed(field: &FieldSpec, s: &str) -> Result<Vec<Point>, Failure> {
    let mut pts = Vec::new();
    for part in s.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        pts.push(parse_point(field, part)?);
    }
    if pts.is_empty() {
        return Err(Failure::usage("empty prescribed point list"));
    }
    Ok(pts)
}

fn emit(ctx: &Ctx, text: String, json_value: serde_json::Value) {
    if ctx.json {
        println!("{json_value}");
    } else {
        print!("{text}");
    }
}

// ---------------------------------------------------------------------------
// field
// ---------------------------------------------------------------------------

fn cmd_field(ctx: &Ctx, q: &str) -> Result<i32, Failure> {
    let field = parse_field_arg(q)?;
    let omega = field.omega().ok().map(|w| w.val());
    let modulus: Vec<u64> = field.modulus().to_vec();
    let mut text = String::new();
    let _ = writeln!(text, "descriptor: {field}");
    let _ = writeln!(text, "p: {}", field.p());
    let _ = writeln!(text, "r: {}", field.r());
    let _ = writeln!(text, "q: {}", field.q());
    let _ = writeln!(
        text,
        "modulus: {}",
        modulus
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    let _ = writeln!(text, "nonzero squares: {}", (field.q() - 1) / 2);
    let _ = writeln!(
        text,
        "omega: {}",
        omega.map_or("-".to_string(), |w| w.to_string())
    );
    emit(
        ctx,
        text,
        json!({
            "descriptor": field.to_string(),
            "p": field.p(),
            "r": field.r(),
            "q": field.q(),
            "modulus": modulus,
            "nonzero_squares": (field.q() - 1) / 2,
            "omega": omega,
        }),
    );
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// counts
// ---------------------------------------------------------------------------

fn record_for(field_q: u64, m: u32, method: &str) -> Result<CountRecord, Failure> {
    match method {
        "closed" => Ok(counting::counts_closed(m, field_q)?),
        "recursive" => Ok(counting::counts_recursive(m, field_q)?),
        "brute" => {
            let field = field_for_q(field_q)?;
            Ok(counting::counts_brute(&field, m)?)
        }
        other => Err(Failure::usage(format!(
            "unknown method {other:?} (closed | recursive | brute)"
        ))),
    }
}

fn cmd_counts(ctx: &Ctx, m: u32, qs: &[u64], method: &str, cross_check: bool) -> Result<i32, Failure> {
    if qs.is_empty() {
        return Err(Failure::usage("--q requires at least one field order"));
    }
    let mut rows = Vec::new();
    let mut text = String::from("m,q,S,Z,N,D,method\n");
    for &q in qs {
        let rec = record_for(q, m, method)?;
        if cross_check {
            for other in ["closed", "recursive", "brute"] {
                if other == method {
                    continue;
                }
                let alt = record_for(q, m, other)?;
                if !rec.same_counts(&alt) {
                    return Err(Failure {
                        code: EXIT_VERIFY,
                        message: format!(
                            "count mismatch at m={m} q={q}: {method} gives S={},Z={},N={}, {other} gives S={},Z={},N={}",
                            rec.s, rec.z, rec.n, alt.s, alt.z, alt.n
                        ),
                    });
                }
            }
        }
        let _ = writeln!(
            text,
            "{},{},{},{},{},{},{}",
            rec.m,
            rec.q,
            rec.s,
            rec.z,
            rec.n,
            rec.d(),
            rec.method
        );
        rows.push(json!({
            "m": rec.m,
            "q": rec.q,
            "S": rec.s.to_string(),
            "Z": rec.z.to_string(),
            "N": rec.n.to_string(),
            "D": rec.d().to_string(),
            "method": rec.method.to_string(),
        }));
    }
    if cross_check {
        let _ = writeln!(text, "cross-check: PASS");
    }
    emit(
        ctx,
        text,
        json!({
            "rows": rows,
            "cross_check": if cross_check { Some("pass") } else { None },
        }),
    );
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// srg
// ---------------------------------------------------------------------------

fn cmd_srg(ctx: &Ctx, m: u32, qs: &[u64]) -> Result<i32, Failure> {
    if qs.is_empty() {
        return Err(Failure::usage("--q requires at least one field order"));
    }
    let mut rows = Vec::new();
    let mut text = String::from("m,q,v,k,lambda,mu_num,mu_den,mu_integral,is_srg\n");
    for &q in qs {
        let rep = counting::srg_report(m, q)?;
        let is_srg = match rep.is_srg {
            Some(true) => "true",
            Some(false) => "false",
            None => "unknown",
        };
        let _ = writeln!(
            text,
            "{},{},{},{},{},{},{},{},{}",
            rep.m,
            rep.q,
            rep.v,
            rep.k,
            rep.lambda,
            rep.mu.numer(),
            rep.mu.denom(),
            rep.mu_integral,
            is_srg
        );
        rows.push(json!({
            "m": rep.m,
            "q": rep.q,
            "v": rep.v.to_string(),
            "k": rep.k.to_string(),
            "lambda": rep.lambda.to_string(),
            "mu_num": rep.mu.numer().to_string(),
            "mu_den": rep.mu.denom().to_string(),
            "mu_integral": rep.mu_integral,
            "is_srg": is_srg,
        }));
    }
    emit(ctx, text, json!({ "rows": rows }));
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// neighbors
// ---------------------------------------------------------------------------

fn cmd_neighbors(
    ctx: &Ctx,
    m: u32,
    q: &str,
    u: Option<&str>,
    v: Option<&str>,
) -> Result<i32, Failure> {
    let field = parse_field_arg(q)?;
    let u = match u {
        Some(s) => parse_point(&field, s)?,
        None => Point::zero(&field, m as usize),
    };
    let v = match v {
        Some(s) => parse_point(&field, s)?,
        None => Point::unit(&field, m as usize, 0),
    };
    if u.dim() != m as usize || v.dim() != m as usize {
        return Err(Failure::usage(format!(
            "points must have dimension {m}, got {} and {}",
            u.dim(),
            v.dim()
        )));
    }
    let diff = v.sub(&u)?;
    let class = diff.norm_class();
    if class == NormClass::Origin {
        return Err(Failure::usage("u and v must be distinct"));
    }
    let brute = counting::common_neighbors_brute(&u, &v)?;
    let (expected, kind) = match class {
        NormClass::Plus => (
            Some(counting::common_adjacent_closed(m, field.q())?),
            Some("closed"),
        ),
        NormClass::Zero => (
            Some(counting::conjectured_b(m, field.q())?),
            Some("conjectured"),
        ),
        _ => (None, None),
    };
    let agree = expected
        .as_ref()
        .map(|e| *e == num_bigint::BigUint::from(brute));
    let mut text = String::new();
    let _ = writeln!(text, "u: {u}");
    let _ = writeln!(text, "v: {v}");
    let _ = writeln!(text, "class: {class}");
    let _ = writeln!(text, "brute: {brute}");
    let _ = writeln!(
        text,
        "expected: {}",
        match (&expected, kind) {
            (Some(e), Some(k)) => format!("{e} ({k})"),
            _ => "-".to_string(),
        }
    );
    let _ = writeln!(
        text,
        "agreement: {}",
        match agree {
            Some(true) => "MATCH",
            Some(false) => "MISMATCH",
            None => "-",
        }
    );
    emit(
        ctx,
        text,
        json!({
            "m": m,
            "q": field.q(),
            "u": u.to_string(),
            "v": v.to_string(),
            "class": class.to_string(),
            "brute": brute,
            "expected": expected.map(|e| e.to_string()),
            "expected_kind": kind,
            "match": agree,
        }),
    );
    if agree == Some(false) {
        return Ok(EXIT_VERIFY);
    }
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// witness
// ---------------------------------------------------------------------------

fn cmd_witness(ctx: &Ctx, q: &str, u: &str, v: &str) -> Result<i32, Failure> {
    let field = parse_field_arg(q)?;
    let u = parse_point(&field, u)?;
    let v = parse_point(&field, v)?;
    let same_norm = u.inner(&u)? == v.inner(&v)?;
    let outcome = if same_norm {
        symmetry::transitivity_witness(&u, &v).map(|w| (w, None))
    } else {
        symmetry::oz_witness(&u, &v).map(|(w, f)| (w, Some(f)))
    };
    let (matrix, factor) = match outcome {
        Ok(pair) => pair,
        Err(SymmetryError::NormMismatch { left, right }) => {
            let msg = format!("no witness: norms {left} and {right} are not related by a square");
            if ctx.json {
                println!(
                    "{}",
                    json!({ "matrix": null, "factor": null, "verified": false, "reason": msg })
                );
            } else {
                println!("FAILED: {msg}");
            }
            return Ok(EXIT_VERIFY);
        }
        Err(e) => return Err(e.into()),
    };
    // Re-check the returned map independently of the construction.
    let ok = match &factor {
        None => matrix.is_orthogonal() && matrix.apply(&u)? == v,
        Some(_) => matrix.is_oz() && matrix.apply(&u)? == v,
    };
    let mut text = String::new();
    let _ = writeln!(text, "matrix: {matrix}");
    let _ = writeln!(
        text,
        "factor: {}",
        factor.map_or("1".to_string(), |f| f.val().to_string())
    );
    let _ = writeln!(text, "{}", if ok { "VERIFIED" } else { "FAILED" });
    emit(
        ctx,
        text,
        json!({
            "matrix": matrix.to_string(),
            "factor": factor.map(|f| f.val()),
            "verified": ok,
        }),
    );
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY })
}

// ---------------------------------------------------------------------------
// clique & itable
// ---------------------------------------------------------------------------

fn clique_json(ctx: &Ctx, field: &FieldSpec, r: &CliqueResult) -> serde_json::Value {
    json!({
        "field": field.to_string(),
        "m": r.m,
        "q": r.q,
        "size": r.size,
        "status": r.status.to_string(),
        "reduction": r.reduction.to_string(),
        "elapsed_s": ctx.secs(r.elapsed),
        "witness": r.witness.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
    })
}

fn cmd_clique(
    ctx: &Ctx,
    m: u32,
    q: &str,
    prescribe: Option<&str>,
    time_limit: Option<&str>,
    export_dimacs: Option<&str>,
) -> Result<i32, Failure> {
    let field = parse_field_arg(q)?;
    let g = IntegralityGraph::build(&field, m)?;
    if let Some(path) = export_dimacs {
        let mut out = Vec::new();
        clique::export_dimacs(&g, &mut out)?;
        fs::write(path, out)?;
    }
    let config = SearchConfig {
        prescribed: match prescribe {
            Some(s) => parse_prescribed(&field, s)?,
            None => Vec::new(),
        },
        time_limit: time_limit.map(parse_duration).transpose()?,
        deterministic: ctx.deterministic,
        workers: ctx.workers,
    };

    // The cache only answers the unrestricted question: a prescribed search
    // changes what is being maximized, so it never touches the cache.
    let mut cache = cache::Cache::open_from_env();
    let cached = if config.prescribed.is_empty() {
        cache
            .as_ref()
            .and_then(|c| c.lookup(&field.to_string(), m))
            .and_then(|rec| rec.to_result(&field))
    } else {
        None
    };
    let result = match cached {
        Some(r) => r,
        None => {
            let r = clique::max_clique(&g, &config)?;
            if config.prescribed.is_empty() {
                if let Some(c) = cache.as_mut() {
                    c.store(&field, &r);
                }
            }
            r
        }
    };

    emit(
        ctx,
        format!("{}\n", result.record_line(ctx.deterministic)),
        clique_json(ctx, &field, &result),
    );
    Ok(if result.status == CliqueStatus::LowerBound {
        EXIT_PARTIAL
    } else {
        EXIT_OK
    })
}

fn cmd_itable(ctx: &Ctx, m: u32, qs: &[String], time_limit: Option<&str>) -> Result<i32, Failure> {
    if qs.is_empty() {
        return Err(Failure::usage("--q requires at least one field order"));
    }
    let limit = time_limit.map(parse_duration).transpose()?;
    let mut cache = cache::Cache::open_from_env();
    let mut results: Vec<(FieldSpec, CliqueResult)> = Vec::new();
    for q in qs {
        let field = parse_field_arg(q)?;
        let cached = cache
            .as_ref()
            .and_then(|c| c.lookup(&field.to_string(), m))
            .and_then(|rec| rec.to_result(&field));
        let result = match cached {
            Some(r) => r,
            None => {
                let config = SearchConfig {
                    prescribed: Vec::new(),
                    time_limit: limit,
                    deterministic: ctx.deterministic,
                    workers: ctx.workers,
                };
                let r = clique::compute_i(&field, m, &config)?;
                if let Some(c) = cache.as_mut() {
                    c.store(&field, &r);
                }
                r
            }
        };
        results.push((field, result));
    }

    // Aligned table: one column per field order, then the same data as CSV.
    let mut text = String::new();
    let header: Vec<String> = results.iter().map(|(f, _)| f.q().to_string()).collect();
    let sizes: Vec<String> = results.iter().map(|(_, r)| r.size.to_string()).collect();
    let statuses: Vec<String> = results.iter().map(|(_, r)| r.status.to_string()).collect();
    let label = format!("I({m},q)");
    let left = ["q", label.as_str(), "status"];
    let left_w = left.iter().map(|s| s.len()).max().unwrap();
    let widths: Vec<usize> = header
        .iter()
        .zip(&sizes)
        .zip(&statuses)
        .map(|((h, s), t)| h.len().max(s.len()).max(t.len()))
        .collect();
    for (name, row) in [("q", &header), (label.as_str(), &sizes), ("status", &statuses)] {
        let _ = write!(text, "{name:<left_w$}");
        for (cell, w) in row.iter().zip(&widths) {
            let _ = write!(text, "  {cell:>w$}");
        }
        let _ = writeln!(text);
    }
    let _ = writeln!(text);
    let _ = writeln!(text, "m,q,size,status,elapsed");
    for (f, r) in &results {
        let _ = writeln!(
            text,
            "{},{},{},{},{}",
            m,
            f.q(),
            r.size,
            r.status,
            ctx.secs_str(r.elapsed)
        );
    }
    let rows: Vec<serde_json::Value> = results
        .iter()
        .map(|(f, r)| clique_json(ctx, f, r))
        .collect();
    emit(ctx, text, json!({ "m": m, "rows": rows }));
    Ok(
        if results.iter().any(|(_, r)| r.status == CliqueStatus::LowerBound) {
            EXIT_PARTIAL
        } else {
            EXIT_OK
        },
    )
}

// ---------------------------------------------------------------------------
// construct
// ---------------------------------------------------------------------------

fn cmd_construct(
    ctx: &Ctx,
    name: &str,
    q: &str,
    m: Option<usize>,
    out: Option<&str>,
) -> Result<i32, Failure> {
    let field = parse_field_arg(q)?;
    let need_m = |m: Option<usize>| {
        m.ok_or_else(|| Failure::usage(format!("construction {name:?} requires --m")))
    };
    let c = match name {
        "line" => constructions::line(&field, need_m(m)?)?,
        "hyperplane" => constructions::hyperplane_q1mod4(&field)?,
        "circle-plus-line" => constructions::circle_plus_line(&field)?,
        "isotropic-plane" => constructions::isotropic_plane_4d(&field)?,
        "nonintegral-plane" => constructions::nonintegral_plane(&field)?,
        "lower-bound" => constructions::lower_bound(&field, need_m(m)?)?,
        other => {
            return Err(Failure::usage(format!(
                "unknown construction {other:?} (line | hyperplane | circle-plus-line | isotropic-plane | nonintegral-plane | lower-bound)"
            )))
        }
    };
    for w in &c.warnings {
        eprintln!("warning: {w}");
    }
    let dim = c.points[0].dim();
    let file_text = format_point_set(&field, dim, &c.points);
    if let Some(path) = out {
        fs::write(path, &file_text)?;
    }
    if ctx.json {
        println!(
            "{}",
            json!({
                "name": c.name,
                "params": c.params,
                "size": c.points.len(),
                "dim": dim,
                "warnings": c.warnings,
                "points": c.points.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "out": out,
            })
        );
    } else if let Some(path) = out {
        println!("wrote {} points to {path}", c.points.len());
    } else {
        print!("{file_text}");
    }
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// export-dimacs
// ---------------------------------------------------------------------------

fn cmd_export_dimacs(ctx: &Ctx, m: u32, q: &str, out: Option<&str>) -> Result<i32, Failure> {
    let field = parse_field_arg(q)?;
    let g = IntegralityGraph::build(&field, m)?;
    let mut buf = Vec::new();
    clique::export_dimacs(&g, &mut buf)?;
    let edges = g.n() * g.degree() / 2;
    if let Some(path) = out {
        fs::write(path, &buf)?;
        emit(
            ctx,
            format!("wrote {} vertices, {} edges to {path}\n", g.n(), edges),
            json!({
                "m": m,
                "q": field.q(),
                "vertices": g.n(),
                "edges": edges,
                "out": path,
            }),
        );
    } else if ctx.json {
        return Err(Failure::usage("--json requires --out for export-dimacs"));
    } else {
        print!("{}", String::from_utf8_lossy(&buf));
    }
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// verify-pointset
// ---------------------------------------------------------------------------

fn cmd_verify_pointset(ctx: &Ctx, file: &str) -> Result<i32, Failure> {
    let text = if file == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(file)?
    };
    let (field, m, points) = parse_point_set(&text)?;
    let violation = clique::verify_point_set(&points)?;
    match violation {
        None => {
            emit(
                ctx,
                format!(
                    "VERIFIED: {} points over F_{} in dimension {m}\n",
                    points.len(),
                    field.q()
                ),
                json!({
                    "file": file,
                    "q": field.q(),
                    "m": m,
                    "points": points.len(),
                    "ok": true,
                    "violation": null,
                }),
            );
            Ok(EXIT_OK)
        }
        Some((i, j)) => {
            emit(
                ctx,
                format!(
                    "FAILED: points {i} and {j} ({} and {}) are not at integral distance\n",
                    points[i], points[j]
                ),
                json!({
                    "file": file,
                    "q": field.q(),
                    "m": m,
                    "points": points.len(),
                    "ok": false,
                    "violation": [i, j],
                }),
            );
            Ok(EXIT_VERIFY)
        }
    }
}
