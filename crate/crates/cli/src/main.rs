//! `grassmirror`: batch front end for the verification suites, series and
//! exports. Exit status 0 when every requested check passes, 1 when a check
//! fails, 2 on usage or input errors.

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use grassmirror::cluster::{additivity_report, random_walk, walk_report};
use grassmirror::connection::{connection_json, flatness_check};
use grassmirror::ehx::{aseries_closed, aseries_constterm, ehx_potential, verify_pullback, verify_round_trip};
use grassmirror::exact::parse_rational;
use grassmirror::fields::{action_report, boundary_report, gm_connection_coeffs, main_report, sum_report, Mode};
use grassmirror::plucker::eval_w;
use grassmirror::report::VerifyReport;
use grassmirror::richardson::{sweep, symbolic_report};
use grassmirror::{Error, Exec, GrassCtx, Matrix, QSeries, Rational};
use serde_json::{json, Value};
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "grassmirror", version, about = "Exact checks for the Grassmannian mirror")]
struct Cli {
    /// Run every sweep on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct CtxArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: usize,
}

impl CtxArgs {
    fn ctx(&self) -> Result<GrassCtx, Failure> {
        GrassCtx::new(self.k, self.n).map_err(Failure::from)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Matrix of the connection in the Schubert basis, as JSON.
    Connection {
        #[command(flatten)]
        ctx: CtxArgs,
        #[arg(long, value_enum)]
        dir: Dir,
    },
    /// Evaluate W at a point given as a JSON matrix of rational strings.
    Superpotential {
        #[command(flatten)]
        ctx: CtxArgs,
        #[arg(long)]
        point: std::path::PathBuf,
        #[arg(long)]
        q: String,
    },
    /// The grid-quiver Laurent polynomial.
    Ehx {
        #[command(flatten)]
        ctx: CtxArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// A-series coefficients up to q^order.
    Aseries {
        #[command(flatten)]
        ctx: CtxArgs,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run one verification suite.
    Verify(VerifyArgs),
    /// Mutation walks on cluster seeds.
    #[command(subcommand)]
    Cluster(ClusterCmd),
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    theorem: Theorem,
    #[command(flatten)]
    ctx: CtxArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Point)]
    mode: ModeArg,
    /// Random points per case for point-mode vector-field checks.
    #[arg(long, default_value_t = 25)]
    points: usize,
    /// Random samples for the Richardson checks.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Walk length for the additivity check.
    #[arg(long, default_value_t = 20)]
    steps: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum ClusterCmd {
    /// Random quadrilateral-mutation walk from the rectangles seed.
    Walk {
        #[command(flatten)]
        ctx: CtxArgs,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum)]
        check: WalkCheck,
        /// Random matrices per mutation for the exchange check.
        #[arg(long, default_value_t = 5)]
        matrices: usize,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Dir {
    Q,
    Z,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Method {
    Closed,
    Constterm,
    Both,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ModeArg {
    Symbolic,
    Point,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Theorem {
    Eistar,
    Fw,
    Action,
    Sum,
    Main,
    BoundarySum,
    Additivity,
    Pullback,
    Flatness,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum WalkCheck {
    Ws,
    Exchange,
    Additivity,
}

/// Failure to run at all (exit 2), as opposed to a failed check (exit 1).
#[derive(Debug)]
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure(format!("{e:#}"))
    }
}

struct Output {
    text: String,
    passed: bool,
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn render_report(r: &VerifyReport, format: Format) -> String {
    match format {
        Format::Text => {
            let mut s = format!("{r}\n{}", if r.passed() { "PASS" } else { "FAIL" });
            if let Some(f) = r.failures.first() {
                s.push_str(&format!("\nfirst failure: {}: {}", f.case, f.detail));
            }
            s
        }
        _ => r.to_json(),
    }
}

fn need_seed(seed: Option<u64>) -> Result<u64, Failure> {
    seed.ok_or_else(|| Failure("--seed is required for randomized checks".into()))
}

fn read_point(path: &std::path::Path) -> Result<Matrix<Rational>, Failure> {
    let raw = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: Value = serde_json::from_str(&raw).with_context(|| format!("parsing {}", path.display()))?;
    let rows = v.get("matrix").unwrap_or(&v);
    let rows = rows.as_array().ok_or_else(|| Failure("point must be an array of rows".into()))?;
    let parsed = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Failure("row must be an array".into()))?
                .iter()
                .map(|x| match x {
                    Value::String(s) => parse_rational(s).map_err(Failure::from),
                    Value::Number(n) => parse_rational(&n.to_string()).map_err(Failure::from),
                    _ => Err(Failure(format!("entry {x} is not a rational"))),
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_rows(parsed)?)
}

fn series_output(ctx: &GrassCtx, order: usize, method: Method, format: Format, exec: Exec) -> Output {
    let mut runs: Vec<(&str, QSeries)> = Vec::new();
    if method != Method::Constterm {
        runs.push(("closed", aseries_closed(ctx, order, exec)));
    }
    if method != Method::Closed {
        runs.push(("constterm", aseries_constterm(ctx, order, exec)));
    }
    let mismatch = if runs.len() == 2 { (0..=order).find(|&d| runs[0].1.coeff(d) != runs[1].1.coeff(d)) } else { None };
    let text = match format {
        Format::Csv => {
            let mut s = String::from("order,method,numerator,denominator");
            for d in 0..=order {
                for (name, series) in &runs {
                    let c = series.coeff(d);
                    s.push_str(&format!("\n{d},{name},{},{}", c.numer(), c.denom()));
                }
            }
            s
        }
        Format::Json => {
            let mut methods = serde_json::Map::new();
            for (name, series) in &runs {
                methods.insert(name.to_string(), json!(series.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>()));
            }
            pretty(&json!({
                "schema": 1,
                "k": ctx.k(),
                "n": ctx.n(),
                "order": order,
                "coefficients": methods,
                "agree": mismatch.is_none(),
                "first_mismatch": mismatch,
            }))
        }
        Format::Text => {
            let mut s = String::new();
            for (name, series) in &runs {
                s.push_str(&format!("{name}: {series}\n"));
            }
            match mismatch {
                Some(d) => s.push_str(&format!("methods disagree at order {d}")),
                None if runs.len() == 2 => s.push_str("methods agree"),
                None => s.pop().map(|_| ()).unwrap_or(()),
            }
            s
        }
    };
    Output { text, passed: mismatch.is_none() }
}

fn simple_report(theorem: &str, ctx: &GrassCtx, mode: &str, checks: &[(&str, Result<bool, Error>)]) -> VerifyReport {
    let mut r = VerifyReport::new(theorem, ctx.k(), ctx.n(), mode);
    for (case, res) in checks {
        r.cases += 1;
        match res {
            Ok(true) => {}
            Ok(false) => r.fail(*case, "identity fails"),
            Err(e) => r.fail(*case, e.to_string()),
        }
    }
    r
}

fn verify(a: &VerifyArgs, exec: Exec) -> Result<Output, Failure> {
    let ctx = a.ctx.ctx()?;
    let symbolic = a.mode == ModeArg::Symbolic;
    let point_mode = |seed: Option<u64>| -> Result<Mode, Failure> {
        Ok(if symbolic { Mode::Symbolic } else { Mode::Point { points: a.points, seed: need_seed(seed)? } })
    };
    let mut extra: Option<Value> = None;
    let report = match a.theorem {
        Theorem::Eistar | Theorem::Fw => {
            let fw = a.theorem == Theorem::Fw;
            if symbolic {
                symbolic_report(&ctx, fw)
            } else {
                sweep(&ctx, fw, a.samples, need_seed(a.seed)?, exec)
            }
        }
        Theorem::Action => action_report(&ctx, point_mode(a.seed)?, exec),
        Theorem::Sum => sum_report(&ctx, point_mode(a.seed)?, exec),
        Theorem::BoundarySum => boundary_report(&ctx),
        Theorem::Additivity => additivity_report(&ctx, a.steps, need_seed(a.seed)?, 10_000, exec),
        Theorem::Pullback => simple_report(
            "pullback",
            &ctx,
            "symbolic",
            &[("W(M(d)) = grid potential", verify_pullback(&ctx)), ("rect_ratios round trip", verify_round_trip(&ctx))],
        ),
        Theorem::Flatness => simple_report("flatness", &ctx, "symbolic", &[("curvature", flatness_check(&ctx))]),
        Theorem::Main => {
            let seed = a.seed.unwrap_or(0);
            let r = main_report(&ctx, seed, exec);
            if r.passed() {
                let gm = gm_connection_coeffs(&ctx, seed, exec)?;
                let mut lines = Vec::new();
                for (j, lam) in ctx.partitions().iter().enumerate() {
                    for (dir, m) in [("q", &gm.q_dir), ("z", &gm.z_dir)] {
                        let terms: Vec<String> = (0..m.rows())
                            .filter(|&i| m.get(i, j).num_terms() > 0)
                            .map(|i| format!("({})*[p_({})w]", m.get(i, j).to_text(), ctx.partitions()[i]))
                            .collect();
                        let rhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
                        lines.push(format!("nabla_{dir}([p_({lam})w]) = {rhs}"));
                    }
                }
                extra = Some(json!(lines));
            }
            r
        }
    };
    let passed = report.passed();
    let text = match (extra, a.format) {
        (Some(lines), Format::Json) => {
            let mut v: Value = serde_json::from_str(&report.to_json()).expect("report json");
            v["connection"] = lines;
            pretty(&v)
        }
        (Some(lines), _) => {
            let body: Vec<String> = lines.as_array().unwrap().iter().map(|l| l.as_str().unwrap().to_string()).collect();
            format!("{}\n{}", render_report(&report, a.format), body.join("\n"))
        }
        (None, f) => render_report(&report, f),
    };
    Ok(Output { text, passed })
}

fn cluster_walk(ctx: &GrassCtx, steps: usize, seed: u64, check: WalkCheck, matrices: usize, exec: Exec) -> Result<Output, Failure> {
    let walk = random_walk(ctx, steps, seed)?;
    let seeds = walk.seeds()?;
    let report = match check {
        WalkCheck::Ws => {
            let mut r = VerifyReport::new("weak-separation", ctx.k(), ctx.n(), "walk");
            for (i, s) in seeds.iter().enumerate() {
                r.cases += 1;
                if let Err(e) = s.validate(ctx) {
                    r.fail(format!("seed {i}"), e.to_string());
                }
            }
            r
        }
        WalkCheck::Exchange => walk_report(ctx, steps, seed, matrices, exec),
        WalkCheck::Additivity => additivity_report(ctx, steps, seed, 10_000, exec),
    };
    let path: Vec<String> = walk.steps.iter().zip(&seeds).map(|(&v, s)| s.label(v).to_string()).collect();
    let mut v: Value = serde_json::from_str(&report.to_json()).expect("report json");
    v["mutated_labels"] = json!(path);
    v["final_seed"] = seeds.last().expect("start seed").to_json();
    Ok(Output { text: pretty(&v), passed: report.passed() })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    match &cli.command {
        Command::Connection { ctx, dir } => {
            let c = ctx.ctx()?;
            let d = if *dir == Dir::Q { "q" } else { "z" };
            Ok(Output { text: pretty(&connection_json(&c, d)?), passed: true })
        }
        Command::Superpotential { ctx, point, q } => {
            let c = ctx.ctx()?;
            let m = read_point(point)?;
            let q = parse_rational(q)?;
            let w = eval_w(&c, &m, &q)?;
            Ok(Output { text: w.to_string(), passed: true })
        }
        Command::Ehx { ctx, format } => {
            let w = ehx_potential(&ctx.ctx()?);
            let text = match format {
                Format::Json => pretty(&w.to_json()),
                _ => w.to_text(),
            };
            Ok(Output { text, passed: true })
        }
        Command::Aseries { ctx, order, method, format } => Ok(series_output(&ctx.ctx()?, *order, *method, *format, exec)),
        Command::Verify(a) => verify(a, exec),
        Command::Cluster(ClusterCmd::Walk { ctx, steps, seed, check, matrices }) => {
            cluster_walk(&ctx.ctx()?, *steps, *seed, *check, *matrices, exec)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            // a closed pipe (e.g. `| head`) is not an error
            let _ = writeln!(std::io::stdout().lock(), "{}", out.text);
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
