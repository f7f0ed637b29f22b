//! `wpbailey`: list, verify and explore WP-Bailey pairs and identities.
//!
//! Exit codes: 0 success, 1 a check failed or was refuted, 2 usage or
//! configuration error, 3 internal or evaluation error.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use wpbailey_core::chains::{chain_path, ChainStep};
use wpbailey_core::identities::{
    registry, verify_all, verify_id, Backend, BatchReport, IdentityInfo, Status, Summary, VerificationReport,
    VerifyConfig, Witness,
};
use wpbailey_core::pair_check::{check_pair, PairReport};
use wpbailey_core::pairs::{catalog, pair_by_id};
use wpbailey_core::{Error, ExactScalar};

#[derive(Parser, Debug)]
#[command(name = "wpbailey", version, about = "Exact checks for WP-Bailey pairs, chains and q-series identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(clap::Args, Debug, Default)]
struct Common {
    /// Flat TOML file with defaults for the flags below
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Sample points per N (or per identity without N)
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Comma list or range of N, e.g. `0,1,4` or `0..=5`
    #[arg(long = "n-set", global = true)]
    n_set: Option<String>,
    /// Series truncation order
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Consecutive terms the tail ratio must stay under the cap
    #[arg(long, global = true)]
    window: Option<usize>,
    /// Ratio cap for the tail, e.g. `3/4`
    #[arg(long = "ratio-cap", global = true)]
    ratio_cap: Option<String>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Record wall-clock time in reports
    #[arg(long, global = true)]
    timing: bool,
    /// Include entries registered verbatim from known misprints
    #[arg(long = "include-misprints", global = true)]
    include_misprints: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List catalog pairs or registered identities
    List {
        #[arg(value_enum)]
        what: ListWhat,
    },
    /// Verify one identity, or `all`
    Verify {
        id: String,
        #[arg(long)]
        backend: Option<String>,
        /// Hold a coordinate fixed, e.g. `k=0` (repeatable)
        #[arg(long = "pin")]
        pins: Vec<String>,
    },
    /// Check a pair (optionally after chain steps) against the defining relation
    PairCheck {
        pair: String,
        /// Steps such as `first:rho1=ry^2,rho2=rz^2;second;dual;invert`
        #[arg(long, default_value = "")]
        steps: String,
        #[arg(long = "n-max", default_value_t = 4)]
        n_max: i64,
    },
    /// Walk a chain path from a seed pair and check every node
    Tree {
        pair: String,
        #[arg(long)]
        steps: String,
        #[arg(long = "n-max", default_value_t = 3)]
        n_max: i64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ListWhat {
    Pairs,
    Identities,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    #[default]
    Human,
    Json,
}

/// Keys accepted in `--config`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    seed: Option<u64>,
    trials: Option<usize>,
    n_set: Option<Vec<i64>>,
    order: Option<usize>,
    window: Option<usize>,
    ratio_cap: Option<String>,
    format: Option<Format>,
    timing: Option<bool>,
    include_misprints: Option<bool>,
    max_numerator: Option<u32>,
    max_denominator: Option<u32>,
}

#[derive(Serialize)]
struct PairInfo {
    id: String,
    anchor: String,
    symbols: Vec<String>,
    constraints: Vec<String>,
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownId(_)
            | Error::InadmissibleBackend { .. }
            | Error::Config(_)
            | Error::Step(_)
            | Error::Parse { .. }
            | Error::Constraint { .. } => Failure::Usage(e.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

fn parse_n_set(s: &str) -> Result<Vec<i64>, Failure> {
    let bad = || Failure::Usage(format!("bad --n-set `{s}`"));
    if let Some((lo, hi)) = s.split_once("..") {
        let (hi, inclusive) = match hi.strip_prefix('=') {
            Some(h) => (h, true),
            None => (hi, false),
        };
        let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
        return Ok(if inclusive { (lo..=hi).collect() } else { (lo..hi).collect() });
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

struct Settings {
    verify: VerifyConfig,
    format: Format,
}

fn settings(c: &Common) -> Result<Settings, Failure> {
    let file: FileConfig = match &c.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            toml::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };
    let mut v = VerifyConfig::default();
    if let Some(s) = c.seed.or(file.seed) {
        v.seed = s;
    }
    if let Some(t) = c.trials.or(file.trials) {
        v.trials = t;
    }
    if let Some(n) = &c.n_set {
        v.n_set = parse_n_set(n)?;
    } else if let Some(n) = file.n_set {
        v.n_set = n;
    }
    if let Some(o) = c.order.or(file.order) {
        v.order = o;
    }
    if let Some(w) = c.window.or(file.window) {
        if w == 0 {
            return Err(Failure::Usage("window must be positive".into()));
        }
        v.tail.window = w;
    }
    if let Some(r) = c.ratio_cap.clone().or(file.ratio_cap) {
        v.tail.set_ratio_cap(&r)?;
    }
    if let Some(n) = file.max_numerator {
        v.sampler.max_numerator = n;
    }
    if let Some(d) = file.max_denominator {
        v.sampler.max_denominator = d;
    }
    v.timing = c.timing || file.timing.unwrap_or(false);
    v.include_misprints = c.include_misprints || file.include_misprints.unwrap_or(false);
    v.sampler.seed = v.seed;
    Ok(Settings { verify: v, format: c.format.or(file.format).unwrap_or_default() })
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes") + "\n"
}

fn witness_line(w: &Witness) -> String {
    match w {
        Witness::Point { n, trial, point, lhs, rhs } => {
            let n = n.map(|n| format!("N={n} ")).unwrap_or_default();
            format!("{n}trial={trial} at {point:?}: lhs={lhs} rhs={rhs}")
        }
        Witness::Coefficient { point, index, var, lhs, rhs } => {
            format!("coefficient of {var}^{index} at {point:?}: lhs={lhs} rhs={rhs}")
        }
        Witness::Gap { point, lhs, rhs, gap } => format!("at {point:?}: lhs={lhs} rhs={rhs} gap={gap}"),
        Witness::Error { message } => message.clone(),
    }
}

fn report_lines(r: &VerificationReport, out: &mut String) {
    let status = format!("{:?}", r.status).to_uppercase();
    let time = r.elapsed_ms.map(|t| format!(" {t} ms")).unwrap_or_default();
    let _ = writeln!(out, "{status:<10} {:<24} {}{time}", r.id, r.backend);
    if let Some(w) = &r.witness {
        let _ = writeln!(out, "           {}", witness_line(w));
    }
}

fn summary_line(s: &Summary) -> String {
    format!(
        "total {}: {} pass, {} consistent, {} fail, {} refuted, {} error\n",
        s.total, s.pass, s.consistent, s.fail, s.refuted, s.error
    )
}

fn status_code(statuses: impl IntoIterator<Item = Status>) -> u8 {
    let mut code = 0;
    for s in statuses {
        match s {
            Status::Error => return 3,
            Status::Fail | Status::Refuted => code = 1,
            _ => {}
        }
    }
    code
}

fn pair_lines(r: &PairReport, out: &mut String) {
    let path = if r.path.is_empty() { String::new() } else { format!(" via {}", r.path.join(" -> ")) };
    let _ = writeln!(out, "{:<6} {}{path} (n <= {}, {} trials)", r.status.to_uppercase(), r.id, r.n_max, r.trials);
    if let Some(w) = &r.witness {
        let _ = writeln!(out, "       trial={} n={} {} at {:?}: expected {} got {}", w.trial, w.n, w.form, w.point, w.expected, w.got);
    }
    if let Some(e) = &r.error {
        let _ = writeln!(out, "       {e}");
    }
}

fn pair_code(reports: &[PairReport]) -> u8 {
    if reports.iter().any(|r| r.status == "error") {
        3
    } else if reports.iter().any(|r| r.status == "fail") {
        1
    } else {
        0
    }
}

fn run(cli: Cli) -> Result<(String, u8), Failure> {
    let s = settings(&cli.common)?;
    let human = s.format == Format::Human;
    let mut out = String::new();
    let code = match cli.command {
        Command::List { what: ListWhat::Identities } => {
            let infos: Vec<IdentityInfo> = registry()
                .iter()
                .filter(|i| s.verify.include_misprints || i.expectation.holds())
                .map(|i| i.info())
                .collect();
            if human {
                for i in &infos {
                    let flag = if i.expectation.holds() { "" } else { " [misprint]" };
                    let _ = writeln!(out, "{:<24} {:<9} {}{flag}", i.id, i.default_backend.to_string(), i.summary);
                }
            } else {
                out = json(&infos);
            }
            0
        }
        Command::List { what: ListWhat::Pairs } => {
            let infos: Vec<PairInfo> = catalog()
                .iter()
                .map(|p| PairInfo {
                    id: p.id.clone(),
                    anchor: p.anchor.clone(),
                    symbols: p.decls().iter().map(|d| d.name.clone()).collect(),
                    constraints: p.constraints.iter().map(|c| c.text.clone()).collect(),
                })
                .collect();
            if human {
                for p in &infos {
                    let c = if p.constraints.is_empty() { String::new() } else { format!(" with {}", p.constraints.join(", ")) };
                    let _ = writeln!(out, "{:<10} symbols {}{c}", p.id, p.symbols.join(", "));
                }
            } else {
                out = json(&infos);
            }
            0
        }
        Command::Verify { id, backend, pins } => {
            let mut cfg = s.verify;
            for p in &pins {
                let (k, v) = p.split_once('=').ok_or_else(|| Failure::Usage(format!("bad --pin `{p}` (want name=value)")))?;
                let v: ExactScalar = v.trim().parse().map_err(|_| Failure::Usage(format!("bad pin value `{v}`")))?;
                cfg.pins.insert(k.trim().to_string(), v);
            }
            let backend = backend.map(|b| b.parse::<Backend>()).transpose()?;
            if id == "all" {
                if backend.is_some() {
                    return Err(Failure::Usage("`verify all` uses each default backend; drop --backend".into()));
                }
                let batch: BatchReport = verify_all(&cfg);
                if human {
                    for r in &batch.reports {
                        report_lines(r, &mut out);
                    }
                    out.push_str(&summary_line(&batch.summary));
                } else {
                    out = json(&batch);
                }
                status_code(batch.reports.iter().map(|r| r.status))
            } else {
                let r = verify_id(&id, backend, &cfg)?;
                if human {
                    report_lines(&r, &mut out);
                } else {
                    out = json(&r);
                }
                status_code([r.status])
            }
        }
        Command::PairCheck { pair, steps, n_max } => {
            let seed = pair_by_id(&pair).ok_or_else(|| Failure::Usage(format!("unknown pair `{pair}`")))?;
            let steps = ChainStep::parse_list(&steps)?;
            let path = chain_path(&seed, &steps)?;
            let last = &path.last().expect("nonempty").pair;
            let r = check_pair(last, &s.verify.sampler, s.verify.trials, n_max);
            if human {
                pair_lines(&r, &mut out);
            } else {
                out = json(&r);
            }
            pair_code(std::slice::from_ref(&r))
        }
        Command::Tree { pair, steps, n_max } => {
            let seed = pair_by_id(&pair).ok_or_else(|| Failure::Usage(format!("unknown pair `{pair}`")))?;
            let steps = ChainStep::parse_list(&steps)?;
            let path = chain_path(&seed, &steps)?;
            let reports: Vec<PairReport> =
                path.iter().map(|node| check_pair(&node.pair, &s.verify.sampler, s.verify.trials, n_max)).collect();
            if human {
                for r in &reports {
                    pair_lines(r, &mut out);
                }
            } else {
                out = json(&reports);
            }
            pair_code(&reports)
        }
    };
    if let Some(path) = &cli.common.out {
        fs::write(path, &out).map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))?;
        out.clear();
    }
    Ok((out, code))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(3)
        }
    }
}
