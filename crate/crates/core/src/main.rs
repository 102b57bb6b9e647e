use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_traits::{One, Signed};

use sgmc::algebra::{parse_rational, Point, VarTable, Q};
use sgmc::chainfile::ChainFile;
use sgmc::expansions::{right_cayley, scc, to_dot, transition_edges, DotStyle};
use sgmc::markov::MarkovChainSpec;
use sgmc::mixing::mixing_report;
use sgmc::pipeline::{full_report, path_checks, stationary, Expansion, Options};
use sgmc::report::{analysis_report, mixing_json, mixing_text, PathCheckReport, VerificationReport, VerifyReport};
use sgmc::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "sgmc", version, about = "Exact stationary distributions and hitting times of finite Markov chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Symbolic stationary distribution with oracle verification (JSON report).
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Evaluation point, e.g. `x1=1/3,x2=1/3,x3=1/3`.
        #[arg(long)]
        eval: Option<String>,
        /// Number of random verification points.
        #[arg(long, default_value_t = 3)]
        points: usize,
    },
    /// Hitting-time tail, expected hitting time and mixing bound.
    Mixing {
        #[command(flatten)]
        common: Common,
        /// Evaluation point; required when the chain is symbolic.
        #[arg(long)]
        eval: Option<String>,
        /// Mixing threshold.
        #[arg(long, default_value = "1/4")]
        epsilon: String,
        /// Last step in the tail and TV tables.
        #[arg(long, default_value_t = 15)]
        tmax: usize,
        /// Start element of the ideal walk for the TV table (default: first).
        #[arg(long)]
        start: Option<String>,
        /// Print the report as JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Graph in DOT format: `rcay`, `kr`, `mc` or `loop:<word>`.
    Export {
        #[command(flatten)]
        common: Common,
        /// Which graph to export.
        #[arg(long)]
        graph: String,
    },
    /// Oracle, path and normalization checks.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Number of random verification points.
        #[arg(long, default_value_t = 5)]
        points: usize,
        /// Longest word in the path and series comparisons.
        #[arg(long, default_value_t = 8)]
        maxlen: usize,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Chain file (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for random verification points.
    #[arg(long, env = "SGMC_SEED")]
    seed: Option<u64>,
    /// Cap on the size of the generated semigroup.
    #[arg(long)]
    max_elements: Option<usize>,
    /// Cap on the vertices of the Karnofsky–Rhodes expansion.
    #[arg(long)]
    max_kr: Option<usize>,
    /// Cap on the vertices of the McCammond expansion.
    #[arg(long)]
    max_mc: Option<usize>,
    /// Degree bound of the series cross-checks.
    #[arg(long)]
    series_order: Option<u32>,
    /// Use the adjoined-zero construction even for left-zero ideals.
    #[arg(long)]
    adjoin_zero: bool,
}

impl Common {
    fn load(&self) -> Result<(MarkovChainSpec, Options)> {
        let file = ChainFile::load(&self.input)?;
        let spec = file.to_spec()?;
        let mut opts = Options::default();
        file.apply_options(&mut opts);
        if let Some(v) = self.seed {
            opts.seed = v;
        }
        if let Some(v) = self.max_elements {
            opts.max_elements = v;
        }
        if let Some(v) = self.max_kr {
            opts.max_kr = v;
        }
        if let Some(v) = self.max_mc {
            opts.max_mc = v;
        }
        if let Some(v) = self.series_order {
            opts.series_order = v;
        }
        if self.adjoin_zero {
            opts.force_general = true;
        }
        Ok((spec, opts))
    }

    fn write(&self, text: &str) -> Result<()> {
        write_output(self.out.as_deref(), text)
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Resolves `x1`, `x_1`, `x_a` or a bare label to a variable.
fn resolve_var(vars: &VarTable, n: usize, key: &str) -> Option<usize> {
    let key = key.trim();
    let candidates = [Some(key), key.strip_prefix("x_"), key.strip_prefix('x')];
    candidates
        .into_iter()
        .flatten()
        .find_map(|k| vars.find(k).filter(|&v| v < n))
}

/// Parses `k=v,…`. One omitted variable is set to the remaining mass.
fn parse_eval(text: &str, vars: &VarTable, n: usize) -> Result<Point> {
    let mut point = Point::new();
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Input(format!("--eval: expected k=v, got {part:?}")))?;
        let var = resolve_var(vars, n, k).ok_or_else(|| Error::Input(format!("--eval: unknown variable {k:?}")))?;
        let value = parse_rational(v).map_err(|e| Error::Input(format!("--eval {k}: {e}")))?;
        if value.is_negative() || value > Q::one() {
            return Err(Error::Input(format!("--eval {k}: {value} is outside [0, 1]")));
        }
        point.insert(var, value);
    }
    let missing: Vec<usize> = (0..n).filter(|v| !point.contains_key(v)).collect();
    let sum = point.values().fold(Q::default(), |a, b| a + b);
    match missing.as_slice() {
        [] => {}
        [v] => {
            point.insert(*v, Q::one() - &sum);
        }
        _ => {
            let names: Vec<String> = missing.iter().map(|&v| vars.name(v)).collect();
            return Err(Error::Input(format!("--eval: no value for {}", names.join(", "))));
        }
    }
    let total = point.values().fold(Q::default(), |a, b| a + b);
    if total != Q::one() || point.values().any(|x| x.is_negative()) {
        return Err(Error::Input(format!("--eval: probabilities sum to {total}, not 1")));
    }
    Ok(point)
}

/// The `--eval` point, or the chain's own probabilities when numeric.
fn eval_point(eval: Option<&str>, spec: &MarkovChainSpec, vars: &VarTable, n: usize) -> Result<Option<Point>> {
    match eval {
        Some(text) => parse_eval(text, vars, n).map(Some),
        None => Ok(spec.numeric_point().filter(|p| spec.is_stochastic(p))),
    }
}

fn verification_failed(vars: &VarTable, v: &sgmc::pipeline::Verification) -> Result<()> {
    match v.failure(vars) {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn cmd_analyze(common: &Common, eval: Option<&str>, points: usize) -> Result<()> {
    let (spec, mut opts) = common.load()?;
    opts.verify_points = points;
    let (result, verification) = full_report(&spec, &opts)?;
    let n = result.generator_count();
    let point = eval_point(eval, &spec, &result.vars, n)?;
    let report = analysis_report(&spec, &result, &verification, &opts, point.as_ref())?;
    common.write(&to_json(&report))?;
    verification_failed(&result.vars, &verification)
}

fn cmd_mixing(
    common: &Common,
    eval: Option<&str>,
    epsilon: &str,
    tmax: usize,
    start: Option<&str>,
    json: bool,
) -> Result<()> {
    let (spec, opts) = common.load()?;
    let epsilon = parse_rational(epsilon).map_err(|e| Error::Input(format!("--epsilon: {e}")))?;
    if !epsilon.is_positive() {
        return Err(Error::Input("--epsilon must be positive".into()));
    }
    let s = spec.semigroup(opts.max_elements)?;
    let result = stationary(&s, &opts)?;
    let n = result.generator_count();
    let point = eval_point(eval, &spec, &result.vars, n)?
        .ok_or_else(|| Error::Input("symbolic chain: --eval is required".into()))?;
    let start = match start {
        None => 0,
        Some(name) => result
            .ideal
            .iter()
            .position(|&w| result.semigroup.name(w) == name)
            .ok_or_else(|| Error::Input(format!("--start: {name:?} is not an element of K(S)")))?,
    };
    let m = mixing_report(&result, &opts, &point, &epsilon, tmax, start)?;
    let report = mixing_json(&m, &result.vars, &point, n);
    if report.asst.is_none() {
        eprintln!("warning: K(S) is not left zero; skipping the TV bound table");
    }
    let text = if json { to_json(&report) } else { mixing_text(&report) };
    common.write(&text)
}

fn cmd_export(common: &Common, graph: &str) -> Result<()> {
    let (spec, opts) = common.load()?;
    let mut s = spec.semigroup(opts.max_elements)?;
    let dot = match graph {
        "rcay" | "kr" | "mc" => {
            if opts.force_general {
                s = s.adjoin_zero()?;
            }
            let labels = s.labels().to_vec();
            match graph {
                "rcay" => {
                    let g = right_cayley(&s);
                    let style = DotStyle {
                        highlighted: transition_edges(&g, &scc(&g)),
                        dashed: BTreeSet::new(),
                    };
                    to_dot(&g, "RCay", &labels, &style)
                }
                "kr" => {
                    let exp = Expansion::build(s, &opts)?;
                    to_dot(&exp.kr.graph, "KR", &labels, &DotStyle::default())
                }
                _ => {
                    let exp = Expansion::build(s, &opts)?;
                    let style = DotStyle {
                        highlighted: BTreeSet::new(),
                        dashed: exp.mc.back_edges().collect(),
                    };
                    to_dot(&exp.mc.graph, "Mc", &labels, &style)
                }
            }
        }
        other => {
            let word = other
                .strip_prefix("loop:")
                .ok_or_else(|| Error::Input(format!("--graph: unknown graph {other:?}")))?;
            let result = stationary(&s, &opts)?;
            let t = result
                .first_hit
                .terminals
                .iter()
                .find(|t| t.name == word)
                .ok_or_else(|| Error::UnknownVertexWord(word.to_string()))?;
            let labels: Vec<String> = (0..result.vars.len()).map(|v| result.vars.label(v).to_string()).collect();
            t.loop_graph.to_dot(word, &result.first_hit.graph, &labels, opts.max_paths)?
        }
    };
    common.write(&dot)
}

fn cmd_verify(common: &Common, points: usize, maxlen: usize) -> Result<()> {
    let (spec, mut opts) = common.load()?;
    opts.verify_points = points;
    let (result, verification) = full_report(&spec, &opts)?;
    let paths = path_checks(&result, maxlen, opts.max_paths)?;
    let oracle = VerificationReport {
        passed: verification.passed(),
        normalization: verification.normalization,
        points: analysis_report(&spec, &result, &verification, &opts, None)?.verification.points,
    };
    let passed = oracle.passed && paths.iter().all(|p| p.passed());
    let report = VerifyReport {
        passed,
        oracle,
        paths: paths.iter().map(PathCheckReport::from).collect(),
    };
    common.write(&to_json(&report))?;
    for (i, c) in verification.checks.iter().enumerate() {
        eprintln!("oracle point {i}: {}", if c.passed { "pass" } else { "FAIL" });
    }
    eprintln!("normalization: {}", if verification.normalization { "pass" } else { "FAIL" });
    for p in &paths {
        eprintln!("paths {} (length ≤ {}): {}", p.name, p.maxlen, if p.passed() { "pass" } else { "FAIL" });
    }
    verification_failed(&result.vars, &verification)?;
    if let Some(p) = paths.iter().find(|p| !p.passed()) {
        return Err(Error::VerificationFailed {
            point: p.name.clone(),
            detail: "path enumerations disagree".into(),
        });
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Input(_) | Error::InvalidTransformation(_) | Error::UnknownVertexWord(_) | Error::UnassignedVariable(_) => 1,
        Error::CapExceeded { .. } => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match &cli.command {
        Command::Analyze { common, eval, points } => cmd_analyze(common, eval.as_deref(), *points),
        Command::Mixing {
            common,
            eval,
            epsilon,
            tmax,
            start,
            json,
        } => cmd_mixing(common, eval.as_deref(), epsilon, *tmax, start.as_deref(), *json),
        Command::Export { common, graph } => cmd_export(common, graph),
        Command::Verify { common, points, maxlen } => cmd_verify(common, *points, *maxlen),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
