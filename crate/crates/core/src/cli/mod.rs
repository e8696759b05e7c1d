//! Command-line front end.
//!
//! Every command builds a JSON value; text and CSV are rendered from it, so
//! cached and fresh results print identically.

mod cache;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::classify::{classify_triples_capped, invariant_set, orbit_partition_with, OrbitReport, TripleMode};
use crate::enumeration::{
    enumerate_filtered, key_from_named, ActionParams, NamedSubgroup, SubgroupKey, DEFAULT_CANDIDATE_CAP,
};
use crate::error::{Error, Result};
use crate::fpalgebra::{is_prime, FpVector};
use crate::geometry::{fiber_product_model, jacobian_decomposition, pgonal_model, MarkedPoints};
use crate::hgroup::PermGroup;
use crate::predictions::FamilyCase;
use crate::verify;

pub use cache::Cache;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_SCALE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

pub const CACHE_ENV: &str = "FERMAT_ACTIONS_CACHE";

#[derive(Parser, Debug)]
#[command(
    name = "fermat-actions",
    version,
    about = "Classify Z_p^m-actions of signature (0; p^(n+1))"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Cache directory; also read from FERMAT_ACTIONS_CACHE.
    #[arg(long, global = true, conflicts_with = "no_cache")]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exhaustive,
    Predicted,
}

#[derive(Args, Debug)]
struct ParamArgs {
    #[arg(short, long)]
    p: u64,
    #[arg(short, long)]
    n: usize,
    #[arg(short, long, default_value_t = 2)]
    m: usize,
}

impl ParamArgs {
    fn params(&self) -> Result<ActionParams> {
        ActionParams::new(self.p, self.n, self.m)
    }
}

#[derive(Args, Debug)]
struct GroupArgs {
    /// A generator in cycle notation; repeat for more.
    #[arg(long = "group")]
    group: Vec<String>,
    /// A named case such as N3_Q4 or N5_D3.
    #[arg(long, conflicts_with = "group")]
    case: Option<String>,
}

impl GroupArgs {
    fn resolve(&self, degree: usize, default_symmetric: bool) -> Result<PermGroup> {
        if let Some(c) = &self.case {
            let case: FamilyCase = c.parse()?;
            if case.n() + 1 != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: case.n() + 1,
                });
            }
            return Ok(case.group());
        }
        if self.group.is_empty() {
            if default_symmetric {
                return PermGroup::symmetric(degree);
            }
            return Err(Error::InvalidParams(
                "a group is required: use --group or --case".into(),
            ));
        }
        PermGroup::from_cycle_strings(degree, &self.group)
    }
}

#[derive(Args, Debug)]
struct KeyArgs {
    /// A key "p/n/m:rows" or a name such as K(0,1) together with -p and -n.
    #[arg(long)]
    key: String,
    #[arg(short, long)]
    p: Option<u64>,
    #[arg(short, long)]
    n: Option<usize>,
    /// A preset (standard, quartic, dihedral, klein) or comma-separated labels.
    #[arg(long)]
    points: Option<String>,
}

impl KeyArgs {
    fn key(&self) -> Result<SubgroupKey> {
        if self.key.starts_with(|c: char| c.is_ascii_digit()) {
            return SubgroupKey::parse(&self.key);
        }
        let (Some(p), Some(n)) = (self.p, self.n) else {
            return Err(Error::InvalidParams("named keys need -p and -n".into()));
        };
        let params = ActionParams::new(p, n, 2)?;
        key_from_named(&params, &NamedSubgroup::parse(&self.key, n)?)
    }

    fn points(&self, n: usize) -> Result<MarkedPoints> {
        match &self.points {
            Some(s) => MarkedPoints::preset(s, n),
            None => Ok(MarkedPoints::default_for(n)),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List F(p,n,m).
    Enumerate {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = DEFAULT_CANDIDATE_CAP)]
        cap: u128,
    },
    /// Orbits of F(p,n,m) under a group, S_{n+1} by default.
    Orbits {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = DEFAULT_CANDIDATE_CAP)]
        cap: u128,
    },
    /// Keys of F(p,n,m) invariant under a group.
    Invariants {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = DEFAULT_CANDIDATE_CAP)]
        cap: u128,
    },
    /// Inequivalent triples for a group Q, up to its normalizer.
    Triples {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        #[arg(long, default_value_t = crate::classify::TRIPLES_DEFAULT_CAP)]
        cap: u128,
    },
    /// Algebraic models of a key: the fiber product, or S/L for --line.
    Models {
        #[command(flatten)]
        key: KeyArgs,
        /// A line of Z_p^2 as "a,b".
        #[arg(long)]
        line: Option<String>,
    },
    /// Genera and fixed points of the quotients by lines of Z_p^2.
    Jacobian {
        #[command(flatten)]
        key: KeyArgs,
    },
    /// Key and orbit counts under S_{n+1} for a list of primes.
    Table {
        /// Comma-separated primes, or a range "lo..hi".
        #[arg(long)]
        primes: String,
        #[arg(short, long, default_value_t = 3)]
        n: usize,
        #[arg(short, long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = DEFAULT_CANDIDATE_CAP)]
        cap: u128,
    },
    /// Run the built-in verification criteria.
    Verify {
        /// Comma-separated criterion ids.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

/// Parses arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, code)) => match emit(&cli, &text) {
            Ok(()) => code,
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_USAGE
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ScaleCap { .. } | Error::GroupTooLarge { .. } => EXIT_SCALE,
        _ => EXIT_USAGE,
    }
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

fn cache_for(cli: &Cli) -> Option<Cache> {
    if cli.no_cache {
        return None;
    }
    cli.cache_dir
        .clone()
        .or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
        .map(Cache::new)
}

fn cached(cli: &Cli, request: Value, compute: impl FnOnce() -> Result<Value>) -> Result<Value> {
    let Some(cache) = cache_for(cli) else {
        return compute();
    };
    if let Some(v) = cache.get(&request) {
        return Ok(v);
    }
    let v = compute()?;
    if let Err(e) = cache.put(&request, &v) {
        eprintln!("warning: cache write failed: {e}");
    }
    Ok(v)
}

fn execute(cli: &Cli) -> Result<(String, i32)> {
    let f = cli.format;
    match &cli.command {
        Command::Enumerate { params, cap } => {
            let params = params.params()?;
            let request = json!({"command": "enumerate", "params": params_json(&params), "cap": cap.to_string()});
            let v = cached(cli, request, || {
                let keys = enumerate_filtered(&params, *cap, |_| true)?;
                Ok(json!({
                    "params": params_json(&params),
                    "count": keys.len(),
                    "keys": keys.iter().map(key_json).collect::<Vec<_>>(),
                }))
            })?;
            Ok((output::key_list(&v, f), EXIT_OK))
        }
        Command::Orbits { params, group, cap } => {
            let params = params.params()?;
            let g = group.resolve(params.degree(), true)?;
            let request = json!({
                "command": "orbits", "params": params_json(&params),
                "group": group_json(&g), "cap": cap.to_string(),
            });
            let v = cached(cli, request, || {
                let keys = enumerate_filtered(&params, *cap, |_| true)?;
                Ok(report_json(&orbit_partition_with(params, &keys, &g)?))
            })?;
            Ok((output::orbit_report(&v, f), EXIT_OK))
        }
        Command::Invariants { params, group, cap } => {
            let params = params.params()?;
            let g = group.resolve(params.degree(), false)?;
            let request = json!({
                "command": "invariants", "params": params_json(&params),
                "group": group_json(&g), "cap": cap.to_string(),
            });
            let v = cached(cli, request, || {
                let keys = invariant_set(&enumerate_filtered(&params, *cap, |_| true)?, &g)?;
                Ok(json!({
                    "params": params_json(&params),
                    "group": group_json(&g),
                    "count": keys.len(),
                    "keys": keys.iter().map(key_json).collect::<Vec<_>>(),
                }))
            })?;
            Ok((output::key_list(&v, f), EXIT_OK))
        }
        Command::Triples {
            params,
            group,
            mode,
            cap,
        } => {
            let params = params.params()?;
            let q = group.resolve(params.degree(), false)?;
            let mode = match mode {
                Mode::Exhaustive => TripleMode::Exhaustive,
                Mode::Predicted => TripleMode::Predicted,
            };
            let request = json!({
                "command": "triples", "params": params_json(&params), "group": group_json(&q),
                "mode": format!("{mode:?}").to_lowercase(), "cap": cap.to_string(),
            });
            let v = cached(cli, request, || {
                let mut v = report_json(&classify_triples_capped(&params, &q, mode, *cap)?);
                v["q"] = group_json(&q);
                Ok(v)
            })?;
            Ok((output::orbit_report(&v, f), EXIT_OK))
        }
        Command::Models { key, line } => {
            let k = key.key()?;
            let points = key.points(k.params().n())?;
            let v = match line {
                Some(line) => {
                    let pm = k.params().modulus();
                    let coords = line
                        .split(',')
                        .map(|t| {
                            t.trim()
                                .parse::<i64>()
                                .map_err(|_| Error::Parse(format!("bad line '{line}'")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let w = FpVector::from_i64(pm, &coords);
                    let model = pgonal_model(&k, &w, &points)?;
                    json!({"key": k.to_string(), "kind": "pgonal", "line": w.to_string(),
                           "text": model.render("y"), "model": model.to_json()})
                }
                None => {
                    let model = fiber_product_model(&k, &points)?;
                    json!({"key": k.to_string(), "kind": "fiber_product",
                           "text": model.render(), "model": model.to_json()})
                }
            };
            Ok((output::model(&v, f), EXIT_OK))
        }
        Command::Jacobian { key } => {
            let k = key.key()?;
            let points = key.points(k.params().n())?;
            let r = jacobian_decomposition(&k, &points)?;
            let v = json!({
                "key": k.to_string(),
                "genus_sum": r.genus_sum,
                "total_genus": r.total_genus,
                "lines": r.lines.iter().map(|l| json!({
                    "line": l.line.to_string(),
                    "genus": l.genus,
                    "fixed_count": l.fixed_count,
                    "model": l.model.render("y"),
                })).collect::<Vec<_>>(),
            });
            Ok((output::jacobian(&v, f), EXIT_OK))
        }
        Command::Table { primes, n, m, cap } => {
            let primes = parse_primes(primes)?;
            let request = json!({"command": "table", "primes": primes, "n": n, "m": m, "cap": cap.to_string()});
            let v = cached(cli, request, || {
                let mut rows = Vec::new();
                for &p in &primes {
                    let params = ActionParams::new(p, *n, *m)?;
                    let keys = enumerate_filtered(&params, *cap, |_| true)?;
                    let s = PermGroup::symmetric(params.degree())?;
                    let r = orbit_partition_with(params, &keys, &s)?;
                    rows.push(json!({"p": p, "keys": keys.len(), "orbits": r.count}));
                }
                Ok(json!({"n": n, "m": m, "rows": rows}))
            })?;
            Ok((output::table(&v, f), EXIT_OK))
        }
        Command::Verify { only } => {
            let outcomes = if only.is_empty() {
                verify::run_all()
            } else {
                if let Some(bad) = only.iter().find(|&&i| !(1..=12).contains(&i)) {
                    return Err(Error::InvalidParams(format!("no criterion {bad}")));
                }
                verify::run_selected(only)
            };
            let code = if outcomes.iter().all(|o| o.passed) {
                EXIT_OK
            } else {
                EXIT_VERIFY
            };
            Ok((output::verify(&outcomes, f), code))
        }
    }
}

fn parse_primes(s: &str) -> Result<Vec<u64>> {
    let bad = || Error::Parse(format!("bad prime list '{s}'"));
    let primes: Vec<u64> = if let Some((lo, hi)) = s.split_once("..") {
        let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
        (lo..=hi).filter(|&p| is_prime(p)).collect()
    } else {
        s.split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| bad()))
            .collect::<Result<_>>()?
    };
    if primes.is_empty() {
        return Err(bad());
    }
    Ok(primes)
}

fn params_json(p: &ActionParams) -> Value {
    json!({"p": p.p(), "n": p.n(), "m": p.m()})
}

/// JSON form of a key: parameters and the rows of its reduced θ.
pub fn key_json(k: &SubgroupKey) -> Value {
    let params = k.params();
    let theta = k.theta();
    let rows: Vec<Vec<u16>> = (0..theta.rows()).map(|r| theta.row(r).to_vec()).collect();
    json!({"p": params.p(), "n": params.n(), "m": params.m(), "theta": rows})
}

/// Inverse of [`key_json`].
pub fn key_from_json(v: &Value) -> Result<SubgroupKey> {
    let bad = || Error::Parse(format!("bad key object {v}"));
    let field = |name: &str| v.get(name).and_then(Value::as_u64).ok_or_else(bad);
    let params = ActionParams::new(field("p")?, field("n")? as usize, field("m")? as usize)?;
    let rows = v.get("theta").and_then(Value::as_array).ok_or_else(bad)?;
    let text = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|x| x.as_u64().map(|x| x.to_string()).ok_or_else(bad))
                .collect::<Result<Vec<_>>>()
                .map(|xs| xs.join(","))
        })
        .collect::<Result<Vec<_>>>()?
        .join(";");
    SubgroupKey::parse_theta(params, &text)
}

fn group_json(g: &PermGroup) -> Value {
    json!({
        "degree": g.degree(),
        "order": g.order(),
        "generators": g.generators().iter().map(|s| s.to_string()).collect::<Vec<_>>(),
    })
}

fn report_json(r: &OrbitReport) -> Value {
    json!({
        "params": params_json(&r.params),
        "group": group_json(&r.group),
        "count": r.count,
        "orbits": r.orbits.iter().map(|o| json!({
            "rep": o.representative.to_string(),
            "size": o.size(),
            "members": o.members.iter().map(|k| k.to_string()).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}
