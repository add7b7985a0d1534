//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 size limit exceeded.

mod reproduce;

pub use reproduce::{reproduce, Check};

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::{lattice_lower_bound, lp_bound, LatticeBound, Objective};
use crate::entropy::{check_perfect, ratio_report, PerfectReport, RatioReport};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graphs::{hypercube, lattice_window, path, Graph};
use crate::rational::Rational;
use crate::scheme::{
    build_cube_scheme, build_lattice_cover, combine_schemes, default_cube_field, lattice_share_formula, LinearScheme,
    ShareBundle,
};

pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_SIZE: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "hypershare",
    version,
    about = "Perfect secret sharing on cubes and lattice windows, with exact lower bounds"
)]
pub struct RunConfig {
    /// Emit machine-readable JSON instead of tables.
    #[arg(long, global = true)]
    pub json: bool,
    /// Show approximate decimals next to exact fractions.
    #[arg(long, global = true)]
    pub decimal: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the 2-face scheme on C^d, verify it and report ratios.
    Cube {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        prime: Option<u64>,
        /// Seed for the sample dealing used as a round-trip self test.
        #[arg(long, env = "HYPERSHARE_SEED", default_value_t = 0)]
        seed: u64,
        /// Write the scheme here as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Deal a secret with a saved scheme.
    Deal {
        #[arg(long)]
        scheme: PathBuf,
        /// Comma-separated field elements, e.g. `1,2`.
        #[arg(long)]
        secret: String,
        #[arg(long, env = "HYPERSHARE_SEED", default_value_t = 0)]
        seed: u64,
        /// Write the share bundle here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover the secret from the shares of an edge's endpoints.
    Reconstruct {
        #[arg(long)]
        scheme: PathBuf,
        #[arg(long)]
        bundle: PathBuf,
        /// The two endpoints, as labels (`001`, `(0,1)`) or vertex indices.
        #[arg(long, num_args = 2, value_names = ["U", "V"])]
        edge: Vec<String>,
    },
    /// Lower-bound the information ratio of a graph.
    Bound(BoundArgs),
    /// Cover L^d_k by cubes, combine the schemes and report share sizes.
    Lattice {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        prime: Option<u64>,
        /// Write the composite scheme here as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute the headline numbers and print a pass/fail table.
    Reproduce,
}

#[derive(Args, Debug)]
#[group(skip)]
#[command(group = clap::ArgGroup::new("graph").required(true))]
pub struct BoundArgs {
    #[arg(long, value_name = "D", group = "graph")]
    pub cube: Option<usize>,
    #[arg(long, num_args = 2, value_names = ["D", "K"], group = "graph")]
    pub lattice: Option<Vec<usize>>,
    #[arg(long, value_name = "M", group = "graph")]
    pub path: Option<usize>,
    #[arg(long, default_value = "average")]
    pub objective: Objective,
    #[arg(long, value_enum, default_value = "lp")]
    pub method: Method,
    /// Write the LP witness (lp) or the derivation (certificate) here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the LP itself here in LP text format.
    #[arg(long)]
    pub export_lp: Option<PathBuf>,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Lp,
    Certificate,
}

/// What a command produced: human text, the same content as JSON, and
/// whether everything it checked held.
pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub verified: bool,
}

/// Maps a library error to the process exit code.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::TooLarge { .. } => EXIT_SIZE,
        Error::UnqualifiedPair(..) | Error::CorruptShare(_) | Error::Solver(_) | Error::Hypothesis(_) => EXIT_VERIFY,
        _ => EXIT_USAGE,
    }
}

/// Parses the process arguments, runs the command and prints its output.
pub fn run() -> ExitCode {
    let cfg = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match execute(&cfg) {
        Ok(out) => {
            if cfg.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("json values serialize")
                );
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(if out.verified { 0 } else { EXIT_VERIFY })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    let q = Fmt { decimal: cfg.decimal };
    match &cfg.command {
        Command::Cube { d, prime, seed, out } => cmd_cube(q, *d, *prime, *seed, out.as_deref()),
        Command::Deal {
            scheme,
            secret,
            seed,
            out,
        } => cmd_deal(scheme, secret, *seed, out.as_deref()),
        Command::Reconstruct { scheme, bundle, edge } => cmd_reconstruct(scheme, bundle, edge),
        Command::Bound(args) => cmd_bound(q, args),
        Command::Lattice { d, k, prime, out } => cmd_lattice(q, *d, *k, *prime, out.as_deref()),
        Command::Reproduce => {
            let checks = reproduce()?;
            Ok(reproduce::outcome(&checks))
        }
    }
}

#[derive(Clone, Copy)]
struct Fmt {
    decimal: bool,
}

impl Fmt {
    fn q(&self, x: &Rational) -> String {
        if self.decimal && !x.is_integer() {
            format!("{x} ({:.4})", x.to_f64())
        } else {
            x.to_string()
        }
    }
}

fn prime_field(prime: Option<u64>) -> Result<Option<Field>> {
    prime.map(Field::new).transpose()
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {what} {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("cannot parse {what} {}: {e}", path.display())))
}

fn perfect_json(r: &PerfectReport) -> Value {
    json!({
        "perfect": r.is_perfect(),
        "edges_checked": r.edges_checked,
        "independent_sets_checked": r.independent_sets_checked,
        "qualified_failures": r.qualified_failures,
        "independence_failures": r.independence_failures,
    })
}

fn ratio_json(g: &Graph, r: &RatioReport) -> Value {
    let per_vertex: Vec<Value> = r
        .per_vertex
        .iter()
        .enumerate()
        .map(|(v, x)| json!({ "vertex": g.label(v), "ratio": x.to_string() }))
        .collect();
    let histogram: Vec<Value> = r
        .histogram()
        .iter()
        .map(|(x, c)| json!({ "ratio": x.to_string(), "count": c }))
        .collect();
    json!({
        "average": r.average.to_string(),
        "worst": r.worst.to_string(),
        "total": r.total().to_string(),
        "per_vertex": per_vertex,
        "histogram": histogram,
    })
}

fn perfect_text(out: &mut String, r: &PerfectReport) {
    let _ = writeln!(
        out,
        "perfect   {} ({} edges, {} maximal independent sets checked)",
        r.is_perfect(),
        r.edges_checked,
        r.independent_sets_checked
    );
    for (u, v) in &r.qualified_failures {
        let _ = writeln!(out, "  edge {u}-{v} does not recover the secret");
    }
    for s in &r.independence_failures {
        let _ = writeln!(out, "  independent set {s:?} learns about the secret");
    }
}

fn cmd_cube(q: Fmt, d: usize, prime: Option<u64>, seed: u64, out: Option<&Path>) -> Result<Outcome> {
    if d < 2 {
        return Err(Error::InvalidDimension {
            value: d,
            reason: "the cube construction needs d >= 2; for d = 1 the ratio is 1, not d/2",
        });
    }
    let s = build_cube_scheme(d, prime_field(prime)?)?;
    if let Some(path) = out {
        write_json(path, &s)?;
    }
    let g = s.graph();
    let perfect = check_perfect(&s)?;
    let ratios = ratio_report(&s);

    // Round trip one dealing through every edge.
    let secret: Vec<u32> = (0..s.secret_len() as u32).map(|i| (i + 1) % s.field().p()).collect();
    let bundle = s.deal(&secret, seed)?;
    let round_trip = g
        .edges()
        .iter()
        .all(|&(u, v)| s.reconstruct_bundle(&bundle, u, v).ok().as_deref() == Some(&secret[..]));

    let mut text = String::new();
    let _ = writeln!(
        text,
        "scheme    C^{d} over GF({}), secret length {}, seed dimension {}",
        s.field().p(),
        s.secret_len(),
        s.seed_dim()
    );
    let _ = writeln!(text, "id        {}", s.id());
    if let Some(path) = out {
        let _ = writeln!(text, "written   {}", path.display());
    }
    perfect_text(&mut text, &perfect);
    let _ = writeln!(text, "dealing   seed {seed}, round trip on every edge: {round_trip}");
    let _ = writeln!(text, "average   {}", q.q(&ratios.average));
    let _ = writeln!(text, "worst     {}", q.q(&ratios.worst));
    let _ = writeln!(text, "\nvertex  ratio");
    for (v, r) in ratios.per_vertex.iter().enumerate() {
        let _ = writeln!(text, "{:<7} {}", g.label(v), q.q(r));
    }
    Ok(Outcome {
        json: json!({
            "d": d,
            "prime": s.field().p(),
            "secret_len": s.secret_len(),
            "seed_dim": s.seed_dim(),
            "id": s.id(),
            "perfect": perfect_json(&perfect),
            "round_trip": round_trip,
            "ratios": ratio_json(g, &ratios),
        }),
        verified: perfect.is_perfect() && round_trip,
        text,
    })
}

fn parse_secret(text: &str, s: &LinearScheme) -> Result<Vec<u32>> {
    let p = s.field().p() as u64;
    let values = text
        .split(',')
        .map(|t| {
            let t = t.trim();
            let v: u64 = t
                .parse()
                .map_err(|_| Error::Parse(format!("secret value {t:?} is not a number")))?;
            if v >= p {
                return Err(Error::Parse(format!("secret value {v} is not an element of GF({p})")));
            }
            Ok(v as u32)
        })
        .collect::<Result<Vec<u32>>>()?;
    if values.len() != s.secret_len() {
        return Err(Error::SecretLength {
            expected: s.secret_len(),
            got: values.len(),
        });
    }
    Ok(values)
}

fn cmd_deal(scheme: &Path, secret: &str, seed: u64, out: Option<&Path>) -> Result<Outcome> {
    let s: LinearScheme = read_json(scheme, "scheme")?;
    let secret = parse_secret(secret, &s)?;
    let bundle = s.deal(&secret, seed)?;
    let json = serde_json::to_value(&bundle)?;
    let text = match out {
        Some(path) => {
            write_json(path, &bundle)?;
            format!("dealt {} shares to {}\n", bundle.shares.len(), path.display())
        }
        None => format!("{}\n", serde_json::to_string_pretty(&bundle)?),
    };
    Ok(Outcome {
        text,
        json,
        verified: true,
    })
}

fn cmd_reconstruct(scheme: &Path, bundle: &Path, edge: &[String]) -> Result<Outcome> {
    let s: LinearScheme = read_json(scheme, "scheme")?;
    let b: ShareBundle = read_json(bundle, "bundle")?;
    let g = s.graph();
    let vertex = |t: &str| {
        g.find_vertex(t)
            .ok_or_else(|| Error::Parse(format!("{t:?} is not a vertex of the scheme's graph")))
    };
    let (u, v) = (vertex(&edge[0])?, vertex(&edge[1])?);
    let secret = s.reconstruct_bundle(&b, u, v)?;
    let matches = secret == b.secret;
    let shown: Vec<String> = secret.iter().map(u32::to_string).collect();
    Ok(Outcome {
        text: format!(
            "secret {} (from {} and {}; matches dealt secret: {matches})\n",
            shown.join(","),
            g.label(u),
            g.label(v)
        ),
        json: json!({ "secret": secret, "edge": [g.label(u), g.label(v)], "matches_bundle": matches }),
        verified: matches,
    })
}

enum GraphSpec {
    Cube(usize),
    Lattice(usize, usize),
    Path(usize),
}

impl GraphSpec {
    fn from_args(a: &BoundArgs) -> Result<GraphSpec> {
        match (a.cube, a.lattice.as_deref(), a.path) {
            (Some(d), None, None) => Ok(GraphSpec::Cube(d)),
            (None, Some(&[d, k]), None) => Ok(GraphSpec::Lattice(d, k)),
            (None, None, Some(m)) => Ok(GraphSpec::Path(m)),
            _ => Err(Error::Parse("give exactly one of --cube, --lattice, --path".into())),
        }
    }

    fn name(&self) -> String {
        match self {
            GraphSpec::Cube(d) => format!("C^{d}"),
            GraphSpec::Lattice(d, k) => format!("L^{d}_{k}"),
            GraphSpec::Path(m) => format!("P{m}"),
        }
    }

    fn graph(&self) -> Result<Graph> {
        match *self {
            GraphSpec::Cube(d) => hypercube(d),
            GraphSpec::Lattice(d, k) => lattice_window(d, k),
            GraphSpec::Path(m) => path(m),
        }
    }

    /// The window this graph is, for the certificate chain.
    fn window(&self) -> (usize, usize) {
        match *self {
            GraphSpec::Cube(d) => (d, 2),
            GraphSpec::Lattice(d, k) => (d, k),
            GraphSpec::Path(m) => (1, m),
        }
    }
}

fn cmd_bound(q: Fmt, a: &BoundArgs) -> Result<Outcome> {
    let target = GraphSpec::from_args(a)?;
    let name = target.name();
    match a.method {
        Method::Lp => {
            let g = target.graph()?;
            if let Some(path) = &a.export_lp {
                let p = crate::bounds::build_entropy_lp(&g, a.objective)?;
                fs::write(path, p.to_lp_text())?;
            }
            let b = lp_bound(&g, a.objective)?;
            if let Some(path) = &a.out {
                write_json(path, &b.solution.witness)?;
            }
            let text = format!(
                "graph     {name}\nobjective {}\nmethod    lp ({} rows, {} pivots{})\nbound     {}\n",
                a.objective,
                b.rows,
                b.solution.pivots,
                if b.escalated { ", full strong submodularity" } else { "" },
                q.q(&b.optimum)
            );
            Ok(Outcome {
                text,
                json: json!({
                    "graph": name,
                    "objective": a.objective,
                    "method": "lp",
                    "bound": b.optimum.to_string(),
                    "rows": b.rows,
                    "pivots": b.solution.pivots,
                    "escalated": b.escalated,
                }),
                verified: true,
            })
        }
        Method::Certificate => {
            let (d, k) = target.window();
            let lb: LatticeBound = lattice_lower_bound(d, k)?;
            if let Some(path) = &a.out {
                fs::write(path, format!("{lb}\n"))?;
            }
            let text = format!(
                "graph     {name}\nobjective {} (the average bound also bounds the worst case)\nmethod    certificate\n{lb}\nbound     {}\n",
                a.objective,
                q.q(&lb.bound)
            );
            Ok(Outcome {
                text,
                json: json!({
                    "graph": name,
                    "objective": a.objective,
                    "method": "certificate",
                    "bound": lb.bound.to_string(),
                    "lemma_constant": lb.lemma_constant.to_string(),
                    "bracket_min": lb.bracket_min.to_string(),
                    "sum_min": lb.sum_min.to_string(),
                }),
                verified: true,
            })
        }
    }
}

fn cmd_lattice(q: Fmt, d: usize, k: usize, prime: Option<u64>, out: Option<&Path>) -> Result<Outcome> {
    if k % 2 == 1 {
        return Err(Error::InvalidSize {
            value: k,
            reason: "the cube cover needs an even k",
        });
    }
    let cover = build_lattice_cover(d, k)?;
    let field = match prime_field(prime)? {
        Some(f) => f,
        None => default_cube_field(cover.max_dim())?,
    };
    let s = combine_schemes(&cover, field)?;
    if let Some(path) = out {
        write_json(path, &s)?;
    }
    let g = s.graph();
    let perfect = check_perfect(&s)?;
    let ratios = ratio_report(&s);
    let total = ratios.total();
    let formula = lattice_share_formula(d, k);
    let deviation = &total - &formula;

    let mut text = String::new();
    let _ = writeln!(
        text,
        "window    L^{d}_{k}: {} vertices, {} edges",
        g.n(),
        g.edges().len()
    );
    let _ = writeln!(
        text,
        "cover     {} cubes and edges, all edges covered: {}",
        cover.parts.len(),
        cover.uncovered().is_empty()
    );
    let _ = writeln!(
        text,
        "field     GF({}), secret length {}",
        s.field().p(),
        s.secret_len()
    );
    perfect_text(&mut text, &perfect);
    let _ = writeln!(text, "average   {}", q.q(&ratios.average));
    let _ = writeln!(text, "worst     {}", q.q(&ratios.worst));
    let _ = writeln!(
        text,
        "total     {}  (formula {}, deviation {})",
        q.q(&total),
        q.q(&formula),
        deviation
    );
    let _ = writeln!(text, "\nratio   vertices");
    for (r, c) in ratios.histogram() {
        let _ = writeln!(text, "{:<7} {c}", q.q(&r));
    }
    Ok(Outcome {
        json: json!({
            "d": d,
            "k": k,
            "parts": cover.parts.len(),
            "prime": s.field().p(),
            "perfect": perfect_json(&perfect),
            "ratios": ratio_json(g, &ratios),
            "formula_total": formula.to_string(),
            "deviation": deviation.to_string(),
        }),
        verified: perfect.is_perfect(),
        text,
    })
}
