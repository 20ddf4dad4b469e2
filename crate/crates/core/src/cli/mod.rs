//! Batch verification front-end. `run` parses arguments, expands the
//! parameter grid, checks every point on a worker pool and writes one
//! report entry per point in grid order.

mod commands;
mod report;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use rayon::prelude::*;

use crate::arith::parse_rational;

pub use report::{Status, VerifyReport};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "qmorris",
    version,
    about = "Exact constant-term verification for q-Dyson type products"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Eq)]
enum Command {
    /// Dyson constant term at q = 1 against the multinomial; `--a` ranges over every exponent.
    VerifyDyson(#[command(flatten)] GridArgs),
    /// q-Dyson constant term against its product formula; `--a` ranges over every exponent.
    VerifyQdyson(#[command(flatten)] GridArgs),
    /// Constant term of the q-Morris kernel against the closed form.
    VerifyHk(#[command(flatten)] GridArgs),
    /// The constant term, as a polynomial in q^a, vanishes at a = -h for every root h.
    VerifyVanishing(#[command(flatten)] GridArgs),
    /// Recursion, interpolation and closed form agree at the extra point.
    VerifyExtra(#[command(flatten)] GridArgs),
    /// The finite summation identity over `--n`, `--b`, `--k`.
    VerifyProp52(#[command(flatten)] GridArgs),
    /// Constant term against its expansion over compositions.
    VerifyExpansion(#[command(flatten)] GridArgs),
    /// Exhaustive tuple classifier check; `--n` is the tuple length.
    VerifyLemma42(#[command(flatten)] GridArgs),
    /// Times direct constant-term expansion of the q-Morris kernel.
    Bench(#[command(flatten)] GridArgs),
}

impl Command {
    fn grid(&self) -> &GridArgs {
        match self {
            Command::VerifyDyson(g)
            | Command::VerifyQdyson(g)
            | Command::VerifyHk(g)
            | Command::VerifyVanishing(g)
            | Command::VerifyExtra(g)
            | Command::VerifyProp52(g)
            | Command::VerifyExpansion(g)
            | Command::VerifyLemma42(g)
            | Command::Bench(g) => g,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::VerifyDyson(_) => "verify-dyson",
            Command::VerifyQdyson(_) => "verify-qdyson",
            Command::VerifyHk(_) => "verify-hk",
            Command::VerifyVanishing(_) => "verify-vanishing",
            Command::VerifyExtra(_) => "verify-extra",
            Command::VerifyProp52(_) => "verify-prop52",
            Command::VerifyExpansion(_) => "verify-expansion",
            Command::VerifyLemma42(_) => "verify-lemma42",
            Command::Bench(_) => "bench",
        }
    }
}

/// An inclusive integer range written `lo..hi` or as a single value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub lo: i64,
    pub hi: i64,
}

impl Span {
    const fn single(v: i64) -> Span {
        Span { lo: v, hi: v }
    }

    fn values(&self) -> RangeInclusive<i64> {
        self.lo..=self.hi
    }
}

fn parse_span(s: &str) -> std::result::Result<Span, String> {
    let int = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|e| format!("bad integer {t:?}: {e}"))
    };
    let span = match s.split_once("..") {
        Some((lo, hi)) => Span {
            lo: int(lo)?,
            hi: int(hi.strip_prefix('=').unwrap_or(hi))?,
        },
        None => Span::single(int(s)?),
    };
    if span.lo > span.hi {
        return Err(format!("empty range {s}"));
    }
    if span.lo < 0 {
        return Err(format!("negative value in {s}"));
    }
    Ok(span)
}

fn parse_q0(s: &str) -> std::result::Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Args, Debug, Clone, PartialEq, Eq)]
struct GridArgs {
    #[arg(long, value_parser = parse_span)]
    n: Option<Span>,
    #[arg(long, value_parser = parse_span)]
    a: Option<Span>,
    #[arg(long, value_parser = parse_span)]
    b: Option<Span>,
    #[arg(long, value_parser = parse_span)]
    m: Option<Span>,
    #[arg(long, value_parser = parse_span)]
    l: Option<Span>,
    #[arg(long, value_parser = parse_span)]
    k: Option<Span>,
    /// Specialization of q for interpolation, NUM/DEN.
    #[arg(long, value_parser = parse_q0, default_value = "3/2")]
    q0: BigRational,
    /// Repeat interpolation-based checks at a second value of q.
    #[arg(long, value_parser = parse_q0)]
    q0_alt: Option<BigRational>,
    #[arg(long, value_enum, default_value = "text")]
    report: ReportFormat,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write recursion certificates into this directory.
    #[arg(long)]
    cert_dir: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

/// Everything a check needs besides its grid point.
pub(crate) struct Context {
    pub q0s: Vec<BigRational>,
    pub cert_dir: Option<PathBuf>,
}

/// One point of the grid. `avec` holds the exponent vector of the
/// Dyson-type commands; the other commands leave it empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Point {
    pub n: i64,
    pub a: i64,
    pub b: i64,
    pub m: i64,
    pub l: i64,
    pub k: i64,
    pub avec: Vec<i64>,
}

const FLAGS: [&str; 6] = ["n", "a", "b", "m", "l", "k"];

/// Cartesian product of the flag ranges in the order `n a b m l k`.
fn expand_grid(g: &GridArgs, spec: &commands::GridSpec) -> std::result::Result<Vec<Point>, String> {
    let given = [g.n, g.a, g.b, g.m, g.l, g.k];
    let mut spans = [Span::single(0); 6];
    for i in 0..6 {
        spans[i] = match (given[i], spec.defaults[i]) {
            (Some(s), Some(_)) => s,
            (None, Some(d)) => d,
            (Some(_), None) => return Err(format!("--{} is not used by this command", FLAGS[i])),
            (None, None) => Span::single(0),
        };
    }
    if spans[0].hi as usize >= crate::laurent::MAX_VARS {
        return Err(format!(
            "n = {} needs more than {} variables",
            spans[0].hi,
            crate::laurent::MAX_VARS
        ));
    }
    let mut out = Vec::new();
    for n in spans[0].values() {
        let avecs: Vec<Vec<i64>> = if spec.vector_a {
            cube(spans[1], n as usize + 1)
        } else {
            spans[1].values().map(|a| vec![a]).collect()
        };
        for av in avecs {
            for b in spans[2].values() {
                for m in spans[3].values() {
                    for l in spans[4].values() {
                        for k in spans[5].values() {
                            let (a, avec) = if spec.vector_a {
                                (0, av.clone())
                            } else {
                                (av[0], Vec::new())
                            };
                            out.push(Point {
                                n,
                                a,
                                b,
                                m,
                                l,
                                k,
                                avec,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `span^len` in lexicographic order.
fn cube(span: Span, len: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                span.values().map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}

fn execute(command: Command) -> std::result::Result<i32, String> {
    let g = command.grid();
    let mut q0s = vec![g.q0.clone()];
    q0s.extend(g.q0_alt.clone());
    for q0 in &q0s {
        use num_traits::{One, Signed, Zero};
        if q0.is_zero() || q0.abs().is_one() {
            return Err(format!("q0 = {q0} must not be 0 or +-1"));
        }
    }
    let name = command.name();
    let points = expand_grid(g, &commands::grid_spec(name))?;
    commands::check_domain(name, &points)?;
    if let Some(dir) = &g.cert_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    }
    let ctx = Context {
        q0s,
        cert_dir: g.cert_dir.clone(),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(g.jobs)
        .build()
        .map_err(|e| e.to_string())?;
    // indexed parallel collect keeps grid order
    let reports: Vec<VerifyReport> = pool.install(|| {
        points
            .par_iter()
            .map(|p| commands::check(name, p, &ctx))
            .collect()
    });

    let rendered = match g.report {
        ReportFormat::Json => report::to_json(&reports),
        ReportFormat::Text => report::to_text(&reports),
    };
    let written = match &g.out {
        Some(path) => File::create(path).and_then(|mut f| f.write_all(rendered.as_bytes())),
        None => io::stdout().lock().write_all(rendered.as_bytes()),
    };
    written.map_err(|e| format!("cannot write report: {e}"))?;
    Ok(report::exit_code(&reports))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans() {
        assert_eq!(parse_span("3"), Ok(Span::single(3)));
        assert_eq!(parse_span("1..4"), Ok(Span { lo: 1, hi: 4 }));
        assert_eq!(parse_span("1..=4"), Ok(Span { lo: 1, hi: 4 }));
        assert!(parse_span("4..1").is_err());
        assert!(parse_span("-1").is_err());
        assert!(parse_span("x").is_err());
    }

    #[test]
    fn grid_is_cartesian_in_flag_order() {
        let cli = Cli::try_parse_from([
            "qmorris",
            "verify-hk",
            "--n",
            "1..2",
            "--a",
            "1",
            "--b",
            "0",
            "--m",
            "0",
            "--l",
            "0",
            "--k",
            "0..1",
        ])
        .unwrap();
        let pts = expand_grid(cli.command.grid(), &commands::grid_spec("verify-hk")).unwrap();
        let nk: Vec<_> = pts.iter().map(|p| (p.n, p.k)).collect();
        assert_eq!(nk, vec![(1, 0), (1, 1), (2, 0), (2, 1)]);

        let cli =
            Cli::try_parse_from(["qmorris", "verify-qdyson", "--n", "1", "--a", "0..1"]).unwrap();
        let pts = expand_grid(cli.command.grid(), &commands::grid_spec("verify-qdyson")).unwrap();
        let av: Vec<_> = pts.iter().map(|p| p.avec.clone()).collect();
        assert_eq!(av, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);

        let cli = Cli::try_parse_from(["qmorris", "verify-prop52", "--a", "1"]).unwrap();
        assert!(expand_grid(cli.command.grid(), &commands::grid_spec("verify-prop52")).is_err());
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(["qmorris", "verify-hk", "--bogus"]), EXIT_USAGE);
        assert_eq!(run(["qmorris", "nonsense"]), EXIT_USAGE);
        assert_eq!(run(["qmorris", "verify-hk", "--q0", "1"]), EXIT_USAGE);
        assert_eq!(
            run(["qmorris", "verify-vanishing", "--b", "1", "--k", "2"]),
            EXIT_USAGE
        );
    }
}
