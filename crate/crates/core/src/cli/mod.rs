//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on data or I/O errors, 2 on bad arguments or
//! unknown variables, 3 when `audit` finds a violation.

pub mod experiment;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::citest::{ci_decide_sets, ci_statistics};
use crate::dataset::{empirical_cond_entropy, load_csv_path, Dataset, VarSet};
use crate::error::{Error, Result};
use crate::numerics::LogBase;
use crate::regularity::{audit, make_deterministic_dataset, AuditScore, DeterministicSpec};
use crate::scores::{
    aic, bic, conditional_score_local, conditional_score_ratio, marginal_score, parameter_count,
    ParentWeight, PriorSpec,
};
use crate::search::{build_parent_tables, learn_exact_from_table};

use experiment::{stream_rng, DnSweepConfig, ResidualConfig};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VIOLATIONS: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "bdscore",
    version,
    about = "Bayesian-Dirichlet scores for discrete data"
)]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PriorKind {
    Jeffreys,
    Bdeu,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Criterion {
    Bd,
    Aic,
    Bic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LocalWeight {
    Coupled,
    Independent,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    #[arg(long, global = true, value_enum, default_value_t = PriorKind::Jeffreys)]
    pub prior: PriorKind,
    /// Equivalent sample size for BDeu.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub ess: f64,
    /// Per-cell weight for `--prior custom`.
    #[arg(long = "cell-weight", global = true, default_value_t = 0.5)]
    pub cell_weight: f64,
    /// Prior probability of independence for `citest`.
    #[arg(long, global = true, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long = "log-base", global = true, default_value = "e")]
    pub log_base: LogBase,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Output format; experiments default to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Parent-set size cap for `learn` and `audit`, clamped to N-1.
    #[arg(long = "max-parents", global = true, default_value_t = 3)]
    pub max_parents: usize,
}

impl GlobalOpts {
    pub fn prior_spec(&self) -> Result<PriorSpec> {
        let prior = match self.prior {
            PriorKind::Jeffreys => PriorSpec::Jeffreys,
            PriorKind::Bdeu => PriorSpec::bdeu(self.ess),
            PriorKind::Custom => PriorSpec::custom_uniform(self.cell_weight),
        };
        prior.validate()?;
        Ok(prior)
    }

    fn prior_json(&self) -> Value {
        match self.prior {
            PriorKind::Jeffreys => json!({"kind": "jeffreys"}),
            PriorKind::Bdeu => json!({"kind": "bdeu", "ess": self.ess}),
            PriorKind::Custom => json!({"kind": "custom", "cell_weight": self.cell_weight}),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Log score of a subset ("X,Y"), a family ("X|Z,W") or nothing ("").
    Score {
        data: PathBuf,
        spec: String,
        /// Use the local form with this parent weighting instead of the ratio form.
        #[arg(long, value_enum)]
        local: Option<LocalWeight>,
    },
    /// Score-based conditional independence test of X and Y given Z.
    Citest {
        data: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value = "")]
        z: String,
    },
    /// Empirical conditional entropy with AIC and BIC, for "X|U".
    Entropy { data: PathBuf, spec: String },
    /// Lists nested parent sets where the better-fitting set scores worse.
    Audit {
        data: PathBuf,
        child: String,
        /// Candidate parents; defaults to every other variable.
        #[arg(long)]
        candidates: Option<String>,
        #[arg(long, value_enum, default_value_t = Criterion::Bd)]
        criterion: Criterion,
    },
    /// Exact highest-scoring DAG.
    Learn { data: PathBuf },
    /// Writes data where X and Y are functions of Z.
    GenDeterministic(GenArgs),
    #[command(subcommand)]
    Experiment(ExperimentCmd),
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long = "z-arity")]
    pub z_arity: u32,
    #[arg(long = "x-arity", default_value_t = 2)]
    pub x_arity: u32,
    #[arg(long = "y-arity", default_value_t = 2)]
    pub y_arity: u32,
    /// X value per Z state, comma separated; random if omitted.
    #[arg(long)]
    pub f: Option<String>,
    #[arg(long)]
    pub g: Option<String>,
    /// Explicit Z sequence, comma separated.
    #[arg(long = "z-seq", conflicts_with_all = ["repeat", "n"])]
    pub z_seq: Option<String>,
    /// Every Z state in order, each repeated this many times.
    #[arg(long, conflicts_with = "n")]
    pub repeat: Option<usize>,
    /// Number of uniformly random Z draws.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ExperimentCmd {
    /// D_n against 0.5 log2 n for independent sparse binary pairs.
    DnSweep {
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long = "n-min", default_value_t = 10)]
        n_min: usize,
        #[arg(long = "n-max", default_value_t = 1000)]
        n_max: usize,
        #[arg(long, default_value_t = 0.75)]
        exponent: f64,
    },
    /// J(n) for X with r ones and constant Y.
    JnVsR {
        #[arg(long, default_value_t = 100)]
        n: usize,
    },
    /// Residuals of J against its asymptotic expansion.
    Residuals {
        #[arg(long, default_value = "100,1000,10000,100000")]
        grid: String,
    },
}

/// Parses `std::env::args`, runs, and returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = match execute(&cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    if let Err(e) = out.flush() {
        eprintln!("error: {e}");
        return EXIT_FAILURE;
    }
    code
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::UnknownVariable(_) | Error::InvalidArgument(_) | Error::Config(_) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

/// Runs a parsed command, writing its report to `out`.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let o = &cli.opts;
    match &cli.command {
        Command::Score { data, spec, local } => cmd_score(o, data, spec, *local, out),
        Command::Citest { data, x, y, z } => cmd_citest(o, data, x, y, z, out),
        Command::Entropy { data, spec } => cmd_entropy(o, data, spec, out),
        Command::Audit {
            data,
            child,
            candidates,
            criterion,
        } => cmd_audit(o, data, child, candidates.as_deref(), *criterion, out),
        Command::Learn { data } => cmd_learn(o, data, out),
        Command::GenDeterministic(args) => cmd_gen(o, args, out),
        Command::Experiment(cmd) => cmd_experiment(o, cmd, out),
    }
}

fn split_names(s: &str) -> Vec<&str> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .collect()
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    split_names(s)
        .into_iter()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::InvalidArgument(format!("bad {what} entry {t:?}")))
        })
        .collect()
}

/// A score or entropy target: `"X,Y"`, `"X|Z,W"`, `"X|"` or `""`.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Target {
    Subset(VarSet),
    Family { child: usize, parents: VarSet },
}

fn parse_target(ds: &Dataset, spec: &str) -> Result<Target> {
    match spec.split_once('|') {
        None => Ok(Target::Subset(ds.varset(&split_names(spec))?)),
        Some((child, parents)) => {
            let child_names = split_names(child);
            if child_names.len() != 1 {
                return Err(Error::InvalidArgument(format!(
                    "expected one child before '|', got {child:?}"
                )));
            }
            Ok(Target::Family {
                child: ds.resolve(child_names[0])?,
                parents: ds.varset(&split_names(parents))?,
            })
        }
    }
}

fn set_names(ds: &Dataset, set: &VarSet) -> Vec<String> {
    set.indices()
        .iter()
        .map(|&v| ds.name(v).to_string())
        .collect()
}

fn joined(ds: &Dataset, set: &VarSet) -> String {
    set_names(ds, set).join(";")
}

fn report(command: &str, inputs: Value, outputs: impl Serialize) -> Result<Value> {
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "outputs": serde_json::to_value(outputs).map_err(|e| Error::Unsupported(e.to_string()))?,
    }))
}

fn write_json(out: &mut dyn Write, value: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn write_csv(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn load(path: &Path) -> Result<Dataset> {
    load_csv_path(path)
}

fn cmd_score(
    o: &GlobalOpts,
    data: &Path,
    spec: &str,
    local: Option<LocalWeight>,
    out: &mut dyn Write,
) -> Result<i32> {
    let prior = o.prior_spec()?;
    let ds = load(data)?;
    let score = match (parse_target(&ds, spec)?, local) {
        (Target::Subset(s), None) => marginal_score(&ds, &s, &prior)?,
        (Target::Subset(_), Some(_)) => {
            return Err(Error::InvalidArgument(
                "--local needs a \"child|parents\" spec".into(),
            ))
        }
        (Target::Family { child, parents }, None) => {
            conditional_score_ratio(&ds, child, &parents, &prior)?
        }
        (Target::Family { child, parents }, Some(w)) => {
            let w = match w {
                LocalWeight::Coupled => ParentWeight::Coupled,
                LocalWeight::Independent => ParentWeight::Independent,
            };
            conditional_score_local(&ds, child, &parents, &prior, w)?
        }
    };
    let log_score = o.log_base.from_nat(score.value);
    match o.format.unwrap_or(Format::Json) {
        Format::Json => {
            let inputs = json!({
                "data": data.display().to_string(),
                "spec": spec,
                "prior": o.prior_json(),
                "log_base": o.log_base,
                "form": local.map_or("ratio", |w| match w {
                    LocalWeight::Coupled => "local-coupled",
                    LocalWeight::Independent => "local-independent",
                }),
            });
            let outputs = json!({
                "n": ds.n(),
                "log_score": log_score,
                "score": score.prob(),
            });
            write_json(out, &report("score", inputs, outputs)?)?;
        }
        Format::Csv => write_csv(
            out,
            &["spec", "n", "log_score", "score"],
            &[vec![
                spec.to_string(),
                ds.n().to_string(),
                num(log_score),
                num(score.prob()),
            ]],
        )?,
    }
    Ok(EXIT_OK)
}

fn cmd_citest(
    o: &GlobalOpts,
    data: &Path,
    x: &str,
    y: &str,
    z: &str,
    out: &mut dyn Write,
) -> Result<i32> {
    let prior = o.prior_spec()?;
    let ds = load(data)?;
    let xs = ds.varset(&split_names(x))?;
    let ys = ds.varset(&split_names(y))?;
    let zs = ds.varset(&split_names(z))?;
    let verdict = ci_decide_sets(&ds, &xs, &ys, &zs, &prior, o.p)?;
    let stats = ci_statistics(&ds, &xs, &ys, &zs, &prior, o.log_base)?;
    match o.format.unwrap_or(Format::Json) {
        Format::Json => {
            let inputs = json!({
                "data": data.display().to_string(),
                "x": set_names(&ds, &xs),
                "y": set_names(&ds, &ys),
                "z": set_names(&ds, &zs),
                "prior": o.prior_json(),
                "p": o.p,
                "log_base": o.log_base,
            });
            let outputs = json!({
                "n": stats.n,
                "independent": verdict.independent,
                "log_independent": verdict.left,
                "log_dependent": verdict.right,
                "j": stats.j,
                "i": stats.i,
                "d_n": stats.d_n,
                "alpha": stats.dims.alpha,
                "beta": stats.dims.beta,
                "gamma": stats.dims.gamma,
            });
            write_json(out, &report("citest", inputs, outputs)?)?;
        }
        Format::Csv => write_csv(
            out,
            &[
                "x",
                "y",
                "z",
                "n",
                "independent",
                "log_independent",
                "log_dependent",
                "j",
                "i",
                "d_n",
            ],
            &[vec![
                joined(&ds, &xs),
                joined(&ds, &ys),
                joined(&ds, &zs),
                stats.n.to_string(),
                verdict.independent.to_string(),
                num(verdict.left),
                num(verdict.right),
                num(stats.j),
                num(stats.i),
                stats.d_n.map(num).unwrap_or_default(),
            ]],
        )?,
    }
    Ok(EXIT_OK)
}

fn cmd_entropy(o: &GlobalOpts, data: &Path, spec: &str, out: &mut dyn Write) -> Result<i32> {
    let ds = load(data)?;
    let (child, parents) = match parse_target(&ds, spec)? {
        Target::Family { child, parents } => (child, parents),
        Target::Subset(s) if s.len() == 1 => (s.indices()[0], VarSet::empty()),
        Target::Subset(_) => {
            return Err(Error::InvalidArgument(format!(
                "entropy needs \"X|U\" or a single variable, got {spec:?}"
            )))
        }
    };
    let h = empirical_cond_entropy(&ds, child, &parents, o.log_base)?;
    let a = aic(&ds, child, &parents)?;
    let b = bic(&ds, child, &parents)?;
    let k = parameter_count(&ds, child, &parents)?;
    match o.format.unwrap_or(Format::Json) {
        Format::Json => {
            let inputs = json!({
                "data": data.display().to_string(),
                "spec": spec,
                "log_base": o.log_base,
            });
            let outputs = json!({
                "n": ds.n(),
                "entropy": h,
                "parameters": k,
                "aic_nats": a,
                "bic_nats": b,
            });
            write_json(out, &report("entropy", inputs, outputs)?)?;
        }
        Format::Csv => write_csv(
            out,
            &["spec", "n", "entropy", "parameters", "aic_nats", "bic_nats"],
            &[vec![
                spec.into(),
                ds.n().to_string(),
                num(h),
                k.to_string(),
                num(a),
                num(b),
            ]],
        )?,
    }
    Ok(EXIT_OK)
}

fn cmd_audit(
    o: &GlobalOpts,
    data: &Path,
    child: &str,
    candidates: Option<&str>,
    criterion: Criterion,
    out: &mut dyn Write,
) -> Result<i32> {
    let ds = load(data)?;
    let child = ds.resolve(child)?;
    let candidates = match candidates {
        Some(c) => ds.varset(&split_names(c))?,
        None => VarSet::new((0..ds.num_vars()).filter(|&v| v != child))?,
    };
    let score = match criterion {
        Criterion::Bd => AuditScore::Bayes(o.prior_spec()?),
        Criterion::Aic => AuditScore::Aic,
        Criterion::Bic => AuditScore::Bic,
    };
    let cap = o.max_parents.min(candidates.len());
    let violations = audit(&ds, child, &score, &candidates, cap)?;
    match o.format.unwrap_or(Format::Json) {
        Format::Json => {
            let inputs = json!({
                "data": data.display().to_string(),
                "child": ds.name(child),
                "candidates": set_names(&ds, &candidates),
                "criterion": format!("{criterion:?}").to_lowercase(),
                "prior": o.prior_json(),
                "max_parents": cap,
            });
            let rows: Vec<Value> = violations
                .iter()
                .map(|v| {
                    json!({
                        "smaller": set_names(&ds, &v.smaller),
                        "larger": set_names(&ds, &v.larger),
                        "h_smaller": v.h_smaller,
                        "h_larger": v.h_larger,
                        "score_smaller": v.score_smaller,
                        "score_larger": v.score_larger,
                    })
                })
                .collect();
            let outputs = json!({"n": ds.n(), "violations": rows});
            write_json(out, &report("audit", inputs, outputs)?)?;
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = violations
                .iter()
                .map(|v| {
                    vec![
                        ds.name(child).to_string(),
                        joined(&ds, &v.smaller),
                        joined(&ds, &v.larger),
                        num(v.h_smaller),
                        num(v.h_larger),
                        num(v.score_smaller),
                        num(v.score_larger),
                    ]
                })
                .collect();
            write_csv(
                out,
                &[
                    "child",
                    "smaller",
                    "larger",
                    "h_smaller",
                    "h_larger",
                    "score_smaller",
                    "score_larger",
                ],
                &rows,
            )?;
        }
    }
    Ok(if violations.is_empty() {
        EXIT_OK
    } else {
        EXIT_VIOLATIONS
    })
}

fn cmd_learn(o: &GlobalOpts, data: &Path, out: &mut dyn Write) -> Result<i32> {
    let prior = o.prior_spec()?;
    let ds = load(data)?;
    let cap = o.max_parents.min(ds.num_vars().saturating_sub(1));
    let table = build_parent_tables(&ds, &prior, cap)?;
    let (net, log_score) = learn_exact_from_table(&table)?;
    match o.format.unwrap_or(Format::Json) {
        Format::Json => {
            let inputs = json!({
                "data": data.display().to_string(),
                "prior": o.prior_json(),
                "max_parents": cap,
                "log_base": o.log_base,
            });
            let families: Vec<Value> = net
                .families()
                .map(|(v, ps)| json!({"variable": ds.name(v), "parents": set_names(&ds, ps)}))
                .collect();
            let outputs = json!({
                "n": ds.n(),
                "log_score": o.log_base.from_nat(log_score),
                "edges": net.num_edges(),
                "network": families,
            });
            write_json(out, &report("learn", inputs, outputs)?)?;
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = net
                .families()
                .map(|(v, ps)| vec![ds.name(v).to_string(), joined(&ds, ps)])
                .collect();
            write_csv(out, &["variable", "parents"], &rows)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_gen(o: &GlobalOpts, args: &GenArgs, out: &mut dyn Write) -> Result<i32> {
    let mut rng = stream_rng(o.seed, 0);
    let n_for_sample = args.n.unwrap_or(0);
    let mut spec = DeterministicSpec::sample(
        &mut rng,
        n_for_sample,
        args.z_arity,
        args.x_arity,
        args.y_arity,
    );
    if let Some(f) = &args.f {
        spec.f = parse_list(f, "f")?;
    }
    if let Some(g) = &args.g {
        spec.g = parse_list(g, "g")?;
    }
    if let Some(seq) = &args.z_seq {
        spec.z_sequence = parse_list(seq, "z-seq")?;
    } else if let Some(k) = args.repeat {
        spec.z_sequence = (0..args.z_arity)
            .flat_map(|z| std::iter::repeat_n(z, k))
            .collect();
    } else if args.n.is_none() {
        return Err(Error::InvalidArgument(
            "one of --z-seq, --repeat or --n is required".into(),
        ));
    }
    let (ds, _) = make_deterministic_dataset(&spec)?;
    match &args.output {
        Some(path) => ds.write_csv(BufWriter::new(File::create(path)?))?,
        None => ds.write_csv(&mut *out)?,
    }
    Ok(EXIT_OK)
}

fn cmd_experiment(o: &GlobalOpts, cmd: &ExperimentCmd, out: &mut dyn Write) -> Result<i32> {
    let format = o.format.unwrap_or(Format::Csv);
    match cmd {
        ExperimentCmd::DnSweep {
            points,
            n_min,
            n_max,
            exponent,
        } => {
            let cfg = DnSweepConfig {
                seed: o.seed,
                points: *points,
                n_min: *n_min,
                n_max: *n_max,
                exponent: *exponent,
            };
            let rows = experiment::dn_sweep(&cfg)?;
            match format {
                Format::Json => {
                    let inputs = json!({
                        "seed": o.seed, "points": points, "n_min": n_min,
                        "n_max": n_max, "exponent": exponent, "ess": 1.0, "log_base": "2",
                    });
                    write_json(out, &report("experiment dn-sweep", inputs, &rows)?)?;
                }
                Format::Csv => write_csv(
                    out,
                    &["n", "d_n", "half_log2_n", "above"],
                    &rows
                        .iter()
                        .map(|r| {
                            vec![
                                r.n.to_string(),
                                num(r.d_n),
                                num(r.threshold),
                                r.above.to_string(),
                            ]
                        })
                        .collect::<Vec<_>>(),
                )?,
            }
        }
        ExperimentCmd::JnVsR { n } => {
            let rows = experiment::jn_vs_r(*n, o.ess)?;
            match format {
                Format::Json => {
                    let inputs = json!({"n": n, "ess": o.ess});
                    write_json(out, &report("experiment jn-vs-r", inputs, &rows)?)?;
                }
                Format::Csv => write_csv(
                    out,
                    &["r", "j_bdeu", "j_jeffreys"],
                    &rows
                        .iter()
                        .map(|r| vec![r.r.to_string(), num(r.j_bdeu), num(r.j_jeffreys)])
                        .collect::<Vec<_>>(),
                )?,
            }
        }
        ExperimentCmd::Residuals { grid } => {
            let cfg = ResidualConfig {
                seed: o.seed,
                grid: parse_list(grid, "grid")?,
                ess: o.ess,
            };
            let (theta, rows) = experiment::residual_sweep(&cfg)?;
            match format {
                Format::Json => {
                    let inputs = json!({"seed": o.seed, "grid": cfg.grid, "ess": o.ess});
                    let outputs = json!({"theta": theta, "rows": rows});
                    write_json(out, &report("experiment residuals", inputs, outputs)?)?;
                }
                Format::Csv => write_csv(
                    out,
                    &[
                        "n",
                        "j_jeffreys",
                        "j_bdeu",
                        "i",
                        "d_n",
                        "residual_jeffreys",
                        "residual_bdeu",
                    ],
                    &rows
                        .iter()
                        .map(|r| {
                            vec![
                                r.n.to_string(),
                                num(r.j_jeffreys),
                                num(r.j_bdeu),
                                num(r.i),
                                num(r.d_n),
                                num(r.residual_jeffreys),
                                num(r.residual_bdeu),
                            ]
                        })
                        .collect::<Vec<_>>(),
                )?,
            }
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds() -> Dataset {
        crate::dataset::load_csv(include_str!("../../fixtures/determined.csv").as_bytes()).unwrap()
    }

    #[test]
    fn targets_parse() {
        let ds = ds();
        assert_eq!(
            parse_target(&ds, "").unwrap(),
            Target::Subset(VarSet::empty())
        );
        assert_eq!(
            parse_target(&ds, "X|Z,W").unwrap(),
            Target::Family {
                child: 0,
                parents: VarSet::new([1, 2]).unwrap()
            }
        );
        assert_eq!(
            parse_target(&ds, "X|").unwrap(),
            Target::Family {
                child: 0,
                parents: VarSet::empty()
            }
        );
        assert!(matches!(
            parse_target(&ds, "Q"),
            Err(Error::UnknownVariable(_))
        ));
        assert!(parse_target(&ds, "X,Y|Z").is_err());
    }

    #[test]
    fn usage_errors_map_to_two() {
        assert_eq!(exit_code(&Error::UnknownVariable("Q".into())), EXIT_USAGE);
        assert_eq!(exit_code(&Error::EmptyDataset), EXIT_FAILURE);
    }

    #[test]
    fn num_round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 12345.678] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }
}
