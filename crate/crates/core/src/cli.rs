//! The `gvlab` command line: argument and config-file parsing, subcommand
//! dispatch, CSV/JSON emission and exit codes.
//!
//! Exit status: 0 on success, 2 on configuration errors, 3 on data errors
//! (unreadable or corrupt input), 1 on numerical failures.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::{Error, Result};
use crate::lfun::{central_value_holomorphic, central_value_twisted, coefficients_needed, completed_central_maass};
use crate::modforms::{holomorphic_eigenform, load_maass_form, Eigenform};
use crate::periods::{
    cache_compact, cache_stats, cache_verify, mu_batch, period_of_form, write_atomic, BatchOptions, HolomorphicBundle,
    MaassObservable, PeriodCache, PeriodOptions,
};
use crate::qforms::{enumerate_classes, pell_fundamental};
use crate::variance::{
    mean_csv, mean_from_records, rankin_identity_suite, variance_csv, variance_from_records, form_target, y_grid,
};

pub const EXIT_NUMERIC: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DATA: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "gvlab", version, about = "Geodesic periods of modular forms and their variances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args, Debug, Default, Clone)]
struct Flags {
    /// Discriminant
    #[arg(long, global = true)]
    disc: Option<i64>,
    /// Comma-separated form selectors: delta, hol16, hol18, hol20, hol22, hol26, maass:<path>
    #[arg(long, global = true)]
    forms: Option<String>,
    /// Largest discriminant
    #[arg(long, global = true)]
    dmax: Option<i64>,
    /// Significant digits in printed values (at least 15)
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Quadrature tolerance per unit flow time
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Period table path (default: $GVLAB_CACHE)
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Output file (default: stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Emit JSON instead of CSV
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for period batches
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Suite for `verify`: rankin, ladder, vanishing
    #[arg(long, global = true)]
    suite: Option<String>,
    /// Spectral parameter for `verify --suite rankin`
    #[arg(long, global = true)]
    r: Option<f64>,
    /// Fundamental discriminant of a quadratic twist for `lvalue`
    #[arg(long, global = true)]
    twist: Option<i64>,
    /// Config file with `key = value` lines; flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Classes of forms of one discriminant
    Classes,
    /// Fundamental solution of t² − d u² = 4
    Pell,
    /// Per-class periods of the given forms at one discriminant
    Period,
    /// μ_d for all discriminants up to --dmax
    Mu,
    /// Empirical variance against the predicted constant
    Variance,
    /// Running mean of the normalized periods
    Mean,
    /// Central L-values
    Lvalue,
    /// Self-checks: identities and symmetry vanishing
    Verify,
    /// Period table maintenance
    Cache {
        #[arg(value_enum)]
        action: CacheAction,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum CacheAction {
    Verify,
    Compact,
    Stats,
}

/// Fully resolved settings for one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: String,
    pub disc: Option<i64>,
    pub forms: Vec<String>,
    pub d_max: i64,
    pub precision: u32,
    pub tolerance: f64,
    pub cache_path: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub json: bool,
    pub threads: usize,
    pub suite: Option<String>,
    pub r: f64,
    pub twist: Option<i64>,
    pub cache_action: Option<String>,
}

const CONFIG_KEYS: &[&str] =
    &["disc", "forms", "dmax", "precision", "tol", "cache", "out", "json", "threads", "suite", "r", "twist"];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse { line: i + 1, msg: format!("expected `key = value`, got `{line}`") })?;
        let k = k.trim();
        if !CONFIG_KEYS.contains(&k) {
            return Err(Error::Parse { line: i + 1, msg: format!("unknown key `{k}`") });
        }
        out.insert(k.to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn file_value<T: std::str::FromStr>(file: &BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
    match file.get(key) {
        None => Ok(None),
        Some(v) => v.parse().map(Some).map_err(|_| Error::Config(format!("bad value `{v}` for `{key}` in config file"))),
    }
}

/// Builds the run configuration from arguments (including the program name)
/// and the optional config file they name. Flags override file values.
pub fn parse_config(argv: &[String]) -> std::result::Result<RunConfig, CliError> {
    let cli = Cli::try_parse_from(argv).map_err(CliError::Clap)?;
    resolve(cli).map_err(CliError::Run)
}

fn resolve(cli: Cli) -> Result<RunConfig> {
    let f = cli.flags;
    let file = match &f.config {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Config(format!("cannot read config {}: {e}", p.display())))?;
            parse_config_file(&text).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?
        }
        None => BTreeMap::new(),
    };
    let (command, cache_action) = match &cli.command {
        Command::Classes => ("classes", None),
        Command::Pell => ("pell", None),
        Command::Period => ("period", None),
        Command::Mu => ("mu", None),
        Command::Variance => ("variance", None),
        Command::Mean => ("mean", None),
        Command::Lvalue => ("lvalue", None),
        Command::Verify => ("verify", None),
        Command::Cache { action } => (
            "cache",
            Some(match action {
                CacheAction::Verify => "verify",
                CacheAction::Compact => "compact",
                CacheAction::Stats => "stats",
            }),
        ),
    };
    let forms_raw = f.forms.clone().or(file.get("forms").cloned());
    let forms: Vec<String> = forms_raw
        .map(|s| s.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect())
        .unwrap_or_default();
    let cfg = RunConfig {
        command: command.to_string(),
        disc: f.disc.or(file_value(&file, "disc")?),
        forms,
        d_max: f.dmax.or(file_value(&file, "dmax")?).unwrap_or(1000),
        precision: f.precision.or(file_value(&file, "precision")?).unwrap_or(15),
        tolerance: f.tol.or(file_value(&file, "tol")?).unwrap_or(PeriodOptions::default().tol),
        cache_path: f
            .cache
            .or(file_value::<String>(&file, "cache")?.map(PathBuf::from))
            .or(std::env::var_os("GVLAB_CACHE").map(PathBuf::from)),
        output: f.out.or(file_value::<String>(&file, "out")?.map(PathBuf::from)),
        json: f.json || file_value::<bool>(&file, "json")?.unwrap_or(false),
        threads: f.threads.or(file_value(&file, "threads")?).unwrap_or(1),
        suite: f.suite.or(file.get("suite").cloned()),
        r: f.r.or(file_value(&file, "r")?).unwrap_or(1.0),
        twist: f.twist.or(file_value(&file, "twist")?),
        cache_action: cache_action.map(String::from),
    };
    validate(&cfg)?;
    Ok(cfg)
}

fn validate(c: &RunConfig) -> Result<()> {
    let need = |ok: bool, msg: &str| if ok { Ok(()) } else { Err(Error::Config(msg.to_string())) };
    need(c.d_max >= 5, "--dmax must be at least 5")?;
    need(c.precision >= 15, "--precision must be at least 15")?;
    need(c.threads >= 1, "--threads must be at least 1")?;
    need(c.tolerance > 0.0 && c.tolerance < 1.0, "--tol must lie in (0, 1)")?;
    match c.command.as_str() {
        "classes" | "pell" => need(c.disc.is_some(), "--disc is required")?,
        "period" => {
            need(c.disc.is_some(), "--disc is required")?;
            need(!c.forms.is_empty(), "--forms is required")?;
        }
        "mu" | "mean" | "lvalue" => need(!c.forms.is_empty(), "--forms is required")?,
        "variance" => need(c.forms.len() == 2, "--forms must name two forms, e.g. delta,delta")?,
        "verify" => need(c.suite.is_some(), "--suite is required (rankin, ladder, vanishing)")?,
        "cache" => need(c.cache_path.is_some(), "--cache (or GVLAB_CACHE) is required")?,
        _ => {}
    }
    Ok(())
}

#[derive(Debug)]
pub enum CliError {
    Clap(clap::Error),
    Run(Error),
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) => EXIT_CONFIG,
        Error::Parse { .. }
        | Error::CacheCorrupt { .. }
        | Error::Io(_)
        | Error::Validation(_)
        | Error::NotADiscriminant(_)
        | Error::SquareDiscriminant(_)
        | Error::NotFundamental(_)
        | Error::UnsupportedWeight(_) => EXIT_DATA,
        _ => EXIT_NUMERIC,
    }
}

/// Parses a form selector.
pub fn load_form(sel: &str, n_coeffs: usize) -> Result<Eigenform> {
    if let Some(path) = sel.strip_prefix("maass:") {
        return Ok(Eigenform::Maass(load_maass_form(Path::new(path))?));
    }
    let w = match sel {
        "delta" | "hol12" => 12,
        s => s
            .strip_prefix("hol")
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| Error::Config(format!("unknown form selector `{sel}`")))?,
    };
    Ok(Eigenform::Holomorphic(holomorphic_eigenform(w, n_coeffs.max(64)).map_err(|e| match e {
        Error::UnsupportedWeight(w) => Error::Config(format!("weight {w} has no one-dimensional cusp space")),
        e => e,
    })?))
}

fn fmt(x: f64, digits: u32) -> String {
    format!("{:.*e}", (digits.min(17) - 1) as usize, x)
}

/// Entry point used by the binary. Returns the process exit status.
pub fn main_with_args(argv: &[String]) -> i32 {
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    run_with_io(argv, &mut out, &mut err)
}

/// Runs with explicit output streams.
pub fn run_with_io(argv: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cfg = match parse_config(argv) {
        Ok(c) => c,
        Err(CliError::Clap(e)) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    EXIT_CONFIG
                }
            };
        }
        Err(CliError::Run(e)) => {
            let _ = writeln!(stderr, "gvlab: {e}");
            return exit_code(&e);
        }
    };
    match run(&cfg, stderr) {
        Ok(text) => {
            let res = match &cfg.output {
                Some(p) => write_atomic(p, text.as_bytes()),
                None => stdout.write_all(text.as_bytes()).map_err(Error::from),
            };
            match res {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(stderr, "gvlab: {e}");
                    exit_code(&e)
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "gvlab: {e}");
            exit_code(&e)
        }
    }
}

/// Executes a resolved configuration, returning the text to emit.
pub fn run(cfg: &RunConfig, log: &mut dyn Write) -> Result<String> {
    let p = cfg.precision;
    let batch_opts = BatchOptions {
        period: PeriodOptions { tol: cfg.tolerance, ..Default::default() },
        threads: cfg.threads,
        ..Default::default()
    };
    match cfg.command.as_str() {
        "classes" => {
            let d = cfg.disc.unwrap();
            let list = enumerate_classes(d)?;
            let pell = pell_fundamental(d)?;
            if cfg.json {
                let classes: Vec<_> = list
                    .reps
                    .iter()
                    .map(|r| json!({"form": r.form.to_string(), "primitive_disc": r.primitive_disc, "scale": r.scale}))
                    .collect();
                return Ok(json!({"d": d, "H": list.h(), "t": pell.t.to_string(), "u": pell.u.to_string(), "classes": classes})
                    .to_string()
                    + "\n");
            }
            let mut s = String::from("d,index,form,primitive_disc,scale,t,u\n");
            for (i, r) in list.reps.iter().enumerate() {
                s += &format!("{d},{},\"{}\",{},{},{},{}\n", i + 1, r.form, r.primitive_disc, r.scale, pell.t, pell.u);
            }
            Ok(s)
        }
        "pell" => {
            let d = cfg.disc.unwrap();
            let pell = pell_fundamental(d)?;
            if cfg.json {
                return Ok(json!({"d": d, "t": pell.t.to_string(), "u": pell.u.to_string(), "log_epsilon": pell.log_epsilon()})
                    .to_string()
                    + "\n");
            }
            Ok(format!("d,t,u,log_epsilon\n{d},{},{},{}\n", pell.t, pell.u, fmt(pell.log_epsilon(), p)))
        }
        "period" => {
            let d = cfg.disc.unwrap();
            let list = enumerate_classes(d)?;
            let popts = batch_opts.period;
            let mut rows = Vec::new();
            for sel in &cfg.forms {
                let f = load_form(sel, 64)?;
                for rep in &list.reps {
                    let (re, im, err) = match &f {
                        Eigenform::Holomorphic(h) => {
                            let b = HolomorphicBundle::new(std::array::from_ref(h))?;
                            let v = period_of_form(&b, &rep.form, d, &popts)?;
                            (v.value.0[0].re, v.value.0[0].im, v.error)
                        }
                        Eigenform::Maass(m) => {
                            let v = period_of_form(&MaassObservable::new(m)?, &rep.form, d, &popts)?;
                            (v.value, 0.0, v.error)
                        }
                    };
                    rows.push((f.form_id(), rep.form.to_string(), re, im, err));
                }
            }
            if cfg.json {
                let items: Vec<_> = rows
                    .iter()
                    .map(|r| json!({"form_id": r.0, "class": r.1, "value_re": r.2, "value_im": r.3, "quad_err": r.4}))
                    .collect();
                return Ok(json!({"d": d, "periods": items}).to_string() + "\n");
            }
            let mut s = String::from("d,form_id,class,value_re,value_im,quad_err\n");
            for r in rows {
                s += &format!("{d},{},\"{}\",{},{},{}\n", r.0, r.1, fmt(r.2, p), fmt(r.3, p), fmt(r.4, 3));
            }
            Ok(s)
        }
        "mu" | "variance" | "mean" => {
            let forms = cfg.forms.iter().map(|s| load_form(s, 64)).collect::<Result<Vec<_>>>()?;
            let mut cache = match &cfg.cache_path {
                Some(path) => Some(PeriodCache::open(path)?),
                None => None,
            };
            let distinct: Vec<Eigenform> = {
                let mut seen = Vec::new();
                let mut out = Vec::new();
                for f in &forms {
                    if !seen.contains(&f.form_id()) {
                        seen.push(f.form_id());
                        out.push(f.clone());
                    }
                }
                out
            };
            let batch = mu_batch(&distinct, 5, cfg.d_max, cache.as_mut(), &batch_opts)?;
            for (d, msg) in &batch.failures {
                let _ = writeln!(log, "gvlab: d={d}: {msg}");
            }
            let _ = writeln!(log, "gvlab: {} cycle sums computed", batch.quadrature_calls);
            let recs_of = |f: &Eigenform| {
                let i = distinct.iter().position(|g| g.form_id() == f.form_id()).unwrap();
                &batch.records[i]
            };
            match cfg.command.as_str() {
                "mu" => {
                    let mut s = String::from("form_id,d,H,t,u,value_re,value_im,normalized,quad_err\n");
                    for f in &distinct {
                        for r in recs_of(f) {
                            s += &format!(
                                "{},{},{},{},{},{},{},{},{}\n",
                                r.form_id,
                                r.d,
                                r.h,
                                r.t,
                                r.u,
                                fmt(r.value.re, p),
                                fmt(r.value.im, p),
                                fmt(r.normalized.re, p),
                                fmt(r.quad_error, 3)
                            );
                        }
                    }
                    Ok(s)
                }
                "variance" => {
                    let t1 = form_target(&forms[0], None)?;
                    let t2 = form_target(&forms[1], None)?;
                    let (a, b) = (recs_of(&forms[0]), recs_of(&forms[1]));
                    let common: std::collections::HashSet<i64> = b.iter().map(|r| r.d).collect();
                    let a: Vec<_> = a.iter().filter(|r| common.contains(&r.d)).cloned().collect();
                    let keep: std::collections::HashSet<i64> = a.iter().map(|r| r.d).collect();
                    let b: Vec<_> = b.iter().filter(|r| keep.contains(&r.d)).cloned().collect();
                    let rep = variance_from_records(&a, &b, &t1, &t2, &y_grid(cfg.d_max))?;
                    if cfg.json {
                        let rows: Vec<_> = rep
                            .rows
                            .iter()
                            .map(|r| {
                                json!({"Y": r.y, "count": r.count, "B_emp_sharp": [r.b_sharp.re, r.b_sharp.im],
                                       "B_emp_flat": [r.b_flat.re, r.b_flat.im], "target": r.target,
                                       "ratio_sharp": r.ratio_sharp, "ratio_flat": r.ratio_flat,
                                       "mean": [r.mean.re, r.mean.im]})
                            })
                            .collect();
                        return Ok(json!({"forms": [rep.form_ids.0, rep.form_ids.1],
                                         "dictionary": [t1.dictionary, t2.dictionary],
                                         "last_decade_spread": [rep.last_decade_spread.0, rep.last_decade_spread.1],
                                         "block_error": rep.block_error, "rows": rows})
                        .to_string()
                            + "\n");
                    }
                    Ok(variance_csv(&rep))
                }
                _ => {
                    let mut s = String::new();
                    for f in &distinct {
                        let rep = mean_from_records(&f.form_id(), recs_of(f), &y_grid(cfg.d_max));
                        if cfg.json {
                            s += &(json!({"form_id": rep.form_id, "exponent": rep.exponent,
                                          "sqrt_constant": rep.sqrt_constant,
                                          "rows": rep.rows.iter().map(|(y, n, m)| json!([y, n, m.re, m.im])).collect::<Vec<_>>()})
                            .to_string()
                                + "\n");
                        } else {
                            s += &mean_csv(&rep);
                        }
                    }
                    Ok(s)
                }
            }
        }
        "lvalue" => {
            let mut rows = Vec::new();
            for sel in &cfg.forms {
                let q = cfg.twist.map_or(1, |d| d.unsigned_abs());
                let f = load_form(sel, coefficients_needed(26, q))?;
                let v = match (&f, cfg.twist) {
                    (Eigenform::Holomorphic(h), None) => central_value_holomorphic(h)?,
                    (Eigenform::Holomorphic(h), Some(d)) => central_value_twisted(h, d)?,
                    (Eigenform::Maass(m), None) => completed_central_maass(m)?,
                    (Eigenform::Maass(_), Some(_)) => {
                        return Err(Error::Config("--twist is only available for holomorphic forms".into()))
                    }
                };
                rows.push((f.form_id(), v));
            }
            if cfg.json {
                let items: Vec<_> = rows
                    .iter()
                    .map(|(id, v)| json!({"form_id": id, "twist": cfg.twist, "value": v.value,
                                         "error_estimate": v.error_estimate, "method": v.method,
                                         "cutoffs": [v.cutoffs.0, v.cutoffs.1]}))
                    .collect();
                return Ok(serde_json::Value::Array(items).to_string() + "\n");
            }
            let mut s = String::from("form_id,twist,value,error_estimate,method\n");
            for (id, v) in rows {
                s += &format!(
                    "{id},{},{},{},\"{}\"\n",
                    cfg.twist.unwrap_or(1),
                    fmt(v.value, p),
                    fmt(v.error_estimate, 3),
                    v.method
                );
            }
            Ok(s)
        }
        "verify" => verify(cfg),
        "cache" => {
            let path = cfg.cache_path.as_ref().unwrap();
            match cfg.cache_action.as_deref() {
                Some("verify") => {
                    let c = cache_verify(path)?;
                    if let Some(line) = c.first_bad {
                        let _ = writeln!(log, "gvlab: {} of {} lines fail their checksum", c.bad, c.lines);
                        return Err(Error::CacheCorrupt { line, msg: "checksum mismatch".into() });
                    }
                    Ok(format!("lines,bad\n{},0\n", c.lines))
                }
                Some("compact") => {
                    let (before, after) = cache_compact(path)?;
                    Ok(format!("lines_before,lines_after\n{before},{after}\n"))
                }
                _ => {
                    let stats = cache_stats(path)?;
                    let mut s = String::from("form_id,records,ranges\n");
                    for (form, (n, runs)) in stats {
                        let ranges: Vec<String> = runs.iter().map(|(a, b)| format!("{a}-{b}")).collect();
                        s += &format!("{form},{n},{}\n", ranges.join(" "));
                    }
                    Ok(s)
                }
            }
        }
        other => Err(Error::Config(format!("unknown command {other}"))),
    }
}

fn verify(cfg: &RunConfig) -> Result<String> {
    let mut lines = Vec::new();
    let mut ok = true;
    let mut check = |name: String, pass: bool, detail: String| {
        ok &= pass;
        lines.push(format!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" }));
    };
    match cfg.suite.as_deref() {
        Some("rankin") => {
            let rep = rankin_identity_suite(cfg.r)?;
            for (name, key) in [("R+/R- Gamma ratio", "ratio"), ("digamma identity", "digamma"), ("residue of I", "residue")] {
                let res = rep.residual(key);
                check(format!("{name} (r={})", cfg.r), res < 1e-7, format!("residual {res:.2e}"));
            }
            for (name, key) in [("M recurrence", "recurrence"), ("det M closed form", "det")] {
                let res = rep.residual(key);
                check(format!("{name} (r={}, 3 s-points)", cfg.r), res < 1e-7, format!("residual {res:.2e}"));
            }
            for key in ["cross+", "cross-", "square+", "square-"] {
                let res = rep.residual(key);
                check(format!("Whittaker integral {key} (r={})", cfg.r), res < 1e-7, format!("residual {res:.2e}"));
            }
        }
        Some("ladder") => {
            use crate::variance::{ladder_parameter, ladder_ratio, LadderSpec};
            use num_complex::Complex64;
            let specs = [
                LadderSpec::Spherical { s: Complex64::new(0.0, cfg.r) },
                LadderSpec::Spherical { s: Complex64::new(0.4, 0.0) },
                LadderSpec::Discrete { m0: 12 },
                LadderSpec::Discrete { m0: 18 },
            ];
            for spec in specs {
                let s = ladder_parameter(spec);
                let (lo, hi) = match spec {
                    LadderSpec::Spherical { .. } => (-60, 60),
                    LadderSpec::Discrete { m0 } => (m0 + 2, m0 + 120),
                };
                let mut worst: f64 = 0.0;
                let mut n = lo;
                while n <= hi {
                    let a = (n as f64 - s - 1.0) * ladder_ratio(spec, n - 2)?;
                    let b = (n as f64 + s + 1.0) * ladder_ratio(spec, n + 2)?;
                    let scale = a.norm().max(b.norm());
                    if scale > 0.0 {
                        worst = worst.max((a - b).norm() / scale);
                    }
                    n += 2;
                }
                check(format!("ladder recurrence {spec:?}"), worst < 1e-12, format!("residual {worst:.2e}"));
            }
        }
        Some("vanishing") => {
            let f = load_form("hol18", 64)?;
            let batch = mu_batch(&[f], 5, cfg.d_max.min(1000), None, &BatchOptions::default())?;
            let worst = batch.records[0].iter().map(|r| r.normalized.norm()).fold(0.0, f64::max);
            check(format!("weight 18, d <= {}", cfg.d_max.min(1000)), worst < 1e-6, format!("max |mu_d|/d^(1/4) = {worst:.2e}"));
        }
        other => return Err(Error::Config(format!("unknown suite {other:?}"))),
    }
    let mut s = lines.join("\n");
    s.push('\n');
    if !ok {
        return Err(Error::Validation(s));
    }
    Ok(s)
}
