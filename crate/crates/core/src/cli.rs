//! The `kmn` command line: argument parsing, dispatch and the benchmark harness.
//!
//! Exit codes: 0 success, 1 domain error (including failed checks), 2 usage error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::config::{Configuration, GraphShape};
use crate::error::SandpileError;
use crate::genfunc::{k_tilde_csv, k_tilde_table, k_xy_csv, k_xy_table, enumerate_parking_sorted, verify_gf_theorem};
use crate::rank::{park, park_sort, r_vector, rank_greedy, rank_of, rank_scan, RVector};
use crate::render::{cylindric_diagram, diagram_of, render_svg, render_text};
use crate::series::Caps;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Svg,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "kmn", version, about = "Sandpile rank, operators and generating functions on K_{m,n}")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Configuration file, `-` for stdin, or an inline JSON object / `<a..;sink|b..>` string
    #[arg(short, long, default_value = "-")]
    pub input: String,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Table {
    Xy,
    DegreeRank,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiagramKind {
    Plain,
    Cylindric,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank with the parking sorted representative and its r-vector
    Rank {
        #[command(flatten)]
        io: InputArgs,
        /// Also print a witness f for the rank
        #[arg(long)]
        proof: bool,
        /// Cross-check against the greedy and the grid-walk algorithms
        #[arg(long)]
        check: bool,
    },
    /// The parking configuration equivalent to the input, in its labelling
    Park {
        #[command(flatten)]
        io: InputArgs,
    },
    /// Sorted stable configuration equivalent to the input
    Sort {
        #[command(flatten)]
        io: InputArgs,
    },
    /// r-vector of a stable sorted input, otherwise of its parking sorted form
    Rvector {
        #[command(flatten)]
        io: InputArgs,
    },
    /// Diagram picture as text or SVG
    Render {
        #[command(flatten)]
        io: InputArgs,
        #[arg(long, value_enum, default_value = "plain")]
        kind: DiagramKind,
    },
    /// Tables over all parking sorted configurations of K_{m,n}
    Enumerate {
        #[arg(short)]
        m: usize,
        #[arg(short)]
        n: usize,
        #[arg(long, value_enum, default_value = "xy")]
        table: Table,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Largest xpara / ypara exponent kept
        #[arg(long, default_value_t = 10)]
        xymax: u32,
        #[arg(long, allow_hyphen_values = true)]
        dmin: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        dmax: Option<i64>,
    },
    /// Compare the enumerated generating function with its closed form
    VerifyGf {
        #[arg(long, default_value_t = 4)]
        wmax: u32,
        #[arg(long, default_value_t = 4)]
        hmax: u32,
        #[arg(long, default_value_t = 6)]
        xymax: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Time rank_of on random inputs of growing size
    Bench {
        /// Comma separated sizes, each `M+N` total or `MxN`
        #[arg(long, value_delimiter = ',', default_value = "100000,200000,400000,800000,1600000,3200000,6400000,12800000")]
        sizes: Vec<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        runs: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
}

impl From<SandpileError> for CliError {
    fn from(e: SandpileError) -> Self {
        match e {
            SandpileError::Parse(_) | SandpileError::LengthMismatch { .. } | SandpileError::InvalidShape { .. } => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Domain(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read_input(spec: &str, stdin: &mut dyn Read) -> CliResult<String> {
    let t = spec.trim_start();
    if t.starts_with('{') || t.starts_with('<') || t.starts_with('⟨') {
        return Ok(spec.to_string());
    }
    let mut text = String::new();
    if spec == "-" {
        stdin.read_to_string(&mut text).map_err(|e| CliError::Usage(format!("reading stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(spec).map_err(|e| CliError::Usage(format!("reading {spec}: {e}")))?;
    }
    Ok(text)
}

/// Accepts the JSON object form or the bracket notation.
pub fn parse_configuration(text: &str) -> CliResult<Configuration> {
    let t = text.trim();
    if t.starts_with('{') {
        serde_json::from_str(t).map_err(|e| CliError::Usage(format!("invalid configuration JSON: {e}")))
    } else {
        t.parse().map_err(|e: SandpileError| CliError::Usage(format!("invalid configuration: {e}")))
    }
}

fn load(io: &InputArgs, stdin: &mut dyn Read) -> CliResult<Configuration> {
    parse_configuration(&read_input(&io.input, stdin)?)
}

fn require_sink(u: &Configuration, cmd: &str) -> CliResult<()> {
    if u.is_partial() {
        return Err(CliError::Usage(format!("{cmd} needs a full configuration: missing field `sink`")));
    }
    Ok(())
}

fn only(format: Format, allowed: &[Format], cmd: &str) -> CliResult<()> {
    if !allowed.contains(&format) {
        return Err(CliError::Usage(format!("{cmd} does not support --format {format:?}").to_lowercase()));
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn cmd_rank(io: &InputArgs, proof: bool, check: bool, stdin: &mut dyn Read) -> CliResult<String> {
    only(io.format, &[Format::Json, Format::Text], "rank")?;
    let u = load(io, stdin)?;
    require_sink(&u, "rank")?;
    let rank = rank_of(&u)?;
    let parking = park_sort(&u)?;
    let r = r_vector(&parking)?;
    let witness = if proof || check { Some(rank_greedy(&u)?) } else { None };
    if check {
        let greedy = witness.as_ref().map(|w| w.0).expect("computed above");
        let scan = rank_scan(&u)?;
        if greedy != rank || scan != rank {
            return Err(CliError::Domain(format!("rank disagreement: formula {rank}, greedy {greedy}, scan {scan}")));
        }
    }
    let proof_f = witness.filter(|_| proof).map(|w| w.1.f);
    Ok(match io.format {
        Format::Json => {
            let mut v = json!({ "rank": rank, "parking_sorted": parking, "r_vector": r.entries() });
            if let Some(f) = &proof_f {
                v["proof"] = json!({ "f": f });
            }
            if check {
                v["check"] = json!("ok");
            }
            to_json(&v)
        }
        _ => {
            let mut out = format!("rank: {rank}\nparking sorted: {parking}\nr-vector: {r}\n");
            if let Some(f) = &proof_f {
                writeln!(out, "proof: {f}").expect("write to string");
            }
            if check {
                out.push_str("check: greedy and scan agree\n");
            }
            out
        }
    })
}

fn emit_configuration(u: &Configuration, format: Format, cmd: &str) -> CliResult<String> {
    only(format, &[Format::Json, Format::Text], cmd)?;
    Ok(match format {
        Format::Json => to_json(u),
        _ => format!("{u}\n"),
    })
}

fn rvector_of(u: &Configuration) -> CliResult<RVector> {
    if u.is_stable() && u.is_sorted() {
        return Ok(r_vector(u)?);
    }
    require_sink(u, "rvector of a non stable sorted input")?;
    Ok(r_vector(&park_sort(u)?)?)
}

fn cmd_render(io: &InputArgs, kind: DiagramKind, stdin: &mut dyn Read) -> CliResult<String> {
    only(io.format, &[Format::Text, Format::Svg], "render")?;
    let u = load(io, stdin)?;
    let spec = match kind {
        DiagramKind::Plain if u.is_stable() && u.is_sorted() => diagram_of(&u)?,
        DiagramKind::Plain => {
            require_sink(&u, "render of a non stable sorted input")?;
            diagram_of(&park_sort(&u)?)?
        }
        DiagramKind::Cylindric => {
            require_sink(&u, "render --kind cylindric")?;
            cylindric_diagram(&park_sort(&u)?)?
        }
    };
    Ok(match io.format {
        Format::Svg => render_svg(&spec),
        _ => render_text(&spec),
    })
}

fn cmd_enumerate(
    shape: GraphShape,
    table: Table,
    format: Format,
    xymax: u32,
    dmin: Option<i64>,
    dmax: Option<i64>,
) -> CliResult<String> {
    let mn = (shape.m * shape.n) as i64;
    match table {
        Table::Xy => {
            only(format, &[Format::Csv, Format::Json, Format::Text], "enumerate --table xy")?;
            let series = k_xy_table(shape, xymax, xymax)?;
            Ok(match format {
                Format::Csv => k_xy_csv(&series),
                Format::Text => series.dump_with(["x", "y", "w", "h"]),
                _ => {
                    let entries: Vec<_> = series
                        .terms()
                        .map(|(e, c)| json!({ "xpara": e[0], "ypara": e[1], "count": c.to_string() }))
                        .collect();
                    let total = enumerate_parking_sorted(shape)?.len();
                    to_json(&json!({ "m": shape.m, "n": shape.n, "configurations": total, "entries": entries }))
                }
            })
        }
        Table::DegreeRank => {
            only(format, &[Format::Csv, Format::Json], "enumerate --table degree-rank")?;
            let (lo, hi) = (dmin.unwrap_or(-1), dmax.unwrap_or(2 * mn));
            if lo > hi {
                return Err(CliError::Usage(format!("empty degree window [{lo}, {hi}]")));
            }
            let t = k_tilde_table(shape, lo, hi)?;
            Ok(match format {
                Format::Csv => k_tilde_csv(&t),
                _ => {
                    let entries: Vec<_> =
                        t.iter().map(|(&(d, r), &c)| json!({ "degree": d, "rank": r, "count": c })).collect();
                    to_json(&json!({ "m": shape.m, "n": shape.n, "entries": entries }))
                }
            })
        }
    }
}

fn cmd_verify_gf(wmax: u32, hmax: u32, xymax: u32, format: Format) -> CliResult<(String, bool)> {
    only(format, &[Format::Json, Format::Text], "verify-gf")?;
    if wmax == 0 || hmax == 0 {
        return Err(CliError::Usage("--wmax and --hmax must be at least 1".into()));
    }
    let report = verify_gf_theorem(Caps::new(xymax, xymax, wmax, hmax))?;
    let text = match format {
        Format::Json => to_json(&report),
        _ => match &report.first_mismatch {
            None => format!("PASS: {} coefficients agree (w<={wmax}, h<={hmax}, x,y<={xymax})\n", report.compared),
            Some(m) => {
                let [x, y, w, h] = m.exponents;
                format!("FAIL: coefficient of x^{x} y^{y} w^{w} h^{h}: enumeration {} vs closed form {}\n", m.lhs, m.rhs)
            }
        },
    };
    Ok((text, report.passed))
}

/// A random full configuration: `a` uniform in `[0, 4n]`, `b` in `[0, 4m]`,
/// sink in `[-mn, 3mn]`.
pub fn random_configuration(shape: GraphShape, rng: &mut impl Rng) -> Configuration {
    let (m, n) = (shape.m as i64, shape.n as i64);
    let a = (0..shape.m - 1).map(|_| rng.gen_range(0..=4 * n)).collect();
    let b = (0..shape.n).map(|_| rng.gen_range(0..=4 * m)).collect();
    let sink = rng.gen_range(-m * n..=3 * m * n);
    Configuration::new(shape, a, Some(sink), b).expect("lengths match the shape")
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub m: usize,
    pub n: usize,
    pub median_seconds: f64,
    /// Median time over the previous row's median.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub max_ratio: f64,
    pub passed: bool,
}

pub const BENCH_RATIO_LIMIT: f64 = 3.0;

pub fn parse_size(s: &str) -> CliResult<GraphShape> {
    let bad = || CliError::Usage(format!("invalid size {s:?}: expected M+N total or MxN"));
    let (m, n) = match s.trim().split_once('x') {
        Some((m, n)) => (m.parse().map_err(|_| bad())?, n.parse().map_err(|_| bad())?),
        None => {
            let total: usize = s.trim().parse().map_err(|_| bad())?;
            (total / 2, total - total / 2)
        }
    };
    GraphShape::new(m, n).map_err(|_| bad())
}

/// Median wall time of `rank_of` over `runs` fresh random inputs per shape.
pub fn bench(shapes: &[GraphShape], seed: u64, runs: usize) -> CliResult<BenchReport> {
    if runs == 0 {
        return Err(CliError::Usage("--runs must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<BenchRow> = Vec::new();
    for &shape in shapes {
        let mut times = Vec::with_capacity(runs);
        // one untimed warm-up run per size
        std::hint::black_box(rank_of(&random_configuration(shape, &mut rng))?);
        for _ in 0..runs {
            let u = random_configuration(shape, &mut rng);
            let start = Instant::now();
            let r = rank_of(&u)?;
            times.push(start.elapsed().as_secs_f64());
            std::hint::black_box(r);
        }
        times.sort_by(f64::total_cmp);
        let median = times[runs / 2];
        let ratio = rows.last().map(|p| median / p.median_seconds);
        rows.push(BenchRow { m: shape.m, n: shape.n, median_seconds: median, ratio });
    }
    let max_ratio = rows.iter().filter_map(|r| r.ratio).fold(0.0, f64::max);
    Ok(BenchReport { passed: max_ratio <= BENCH_RATIO_LIMIT, rows, max_ratio })
}

fn cmd_bench(sizes: &[String], seed: u64, runs: usize, format: Format) -> CliResult<(String, bool)> {
    only(format, &[Format::Json, Format::Text, Format::Csv], "bench")?;
    let shapes = sizes.iter().map(|s| parse_size(s)).collect::<CliResult<Vec<_>>>()?;
    let report = bench(&shapes, seed, runs)?;
    let text = match format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut out = String::from("m,n,m_plus_n,median_seconds,ratio\n");
            for r in &report.rows {
                let ratio = r.ratio.map(|x| format!("{x:.3}")).unwrap_or_default();
                writeln!(out, "{},{},{},{:.6},{ratio}", r.m, r.n, r.m + r.n, r.median_seconds).expect("write");
            }
            out
        }
        _ => {
            let mut out = format!("{:>10} {:>10} {:>12} {:>8}\n", "m", "n", "median_s", "ratio");
            for r in &report.rows {
                let ratio = r.ratio.map(|x| format!("{x:.3}")).unwrap_or_else(|| "-".into());
                writeln!(out, "{:>10} {:>10} {:>12.6} {:>8}", r.m, r.n, r.median_seconds, ratio).expect("write");
            }
            let verdict = if report.passed { "PASS" } else { "FAIL" };
            writeln!(out, "{verdict}: largest doubling ratio {:.3} (limit {BENCH_RATIO_LIMIT})", report.max_ratio)
                .expect("write");
            out
        }
    };
    Ok((text, report.passed))
}

fn dispatch(cli: Cli, stdin: &mut dyn Read) -> CliResult<(String, bool)> {
    let ok = |s: String| Ok((s, true));
    match cli.command {
        Command::Rank { io, proof, check } => ok(cmd_rank(&io, proof, check, stdin)?),
        Command::Park { io } => {
            let u = load(&io, stdin)?;
            require_sink(&u, "park")?;
            ok(emit_configuration(&park(&u)?, io.format, "park")?)
        }
        Command::Sort { io } => {
            let u = load(&io, stdin)?;
            require_sink(&u, "sort")?;
            ok(emit_configuration(&u.stabilize_equiv()?.sort_config()?, io.format, "sort")?)
        }
        Command::Rvector { io } => {
            only(io.format, &[Format::Json, Format::Text], "rvector")?;
            let r = rvector_of(&load(&io, stdin)?)?;
            ok(match io.format {
                Format::Json => to_json(&r.entries()),
                _ => format!("{r}\n"),
            })
        }
        Command::Render { io, kind } => ok(cmd_render(&io, kind, stdin)?),
        Command::Enumerate { m, n, table, format, xymax, dmin, dmax } => {
            let shape = GraphShape::new(m, n)?;
            ok(cmd_enumerate(shape, table, format, xymax, dmin, dmax)?)
        }
        Command::VerifyGf { wmax, hmax, xymax, format } => cmd_verify_gf(wmax, hmax, xymax, format),
        Command::Bench { sizes, seed, runs, format } => cmd_bench(&sizes, seed, runs, format),
    }
}

/// Runs the command line against the given streams and returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(rendered.as_bytes());
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    match dispatch(cli, stdin) {
        Ok((text, passed)) => {
            let _ = stdout.write_all(text.as_bytes());
            if passed { EXIT_OK } else { EXIT_DOMAIN }
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Domain(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_DOMAIN
        }
    }
}

pub fn main_with_std() -> i32 {
    run(std::env::args_os(), &mut std::io::stdin().lock(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
