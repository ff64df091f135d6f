//! `majlab`: simulate majority dynamics on G(n,p), run seeded sweeps,
//! query the exact small-n oracle, inspect structural sets and run the
//! verification suites.

mod output;

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use majlab_core::appendix::{verify_appendix_a, GridPreset};
use majlab_core::harness::{self, CapPolicy, ExperimentConfig, SchemePreset, SweepResult};
use majlab_core::identities::{verify_fourier_suite, verify_identities};
use majlab_core::oracle::{oracle_eval, oracle_vs_mc, OracleP, OracleQuery, SetKind, Statistic};
use majlab_core::report::{lemma_report, ReportParams};
use majlab_core::theory::{delta_threshold, ThresholdParams};
use majlab_core::{
    compute_s_sets, default_cap, parse_colors, rng, run, sample_gnp_with, Color, ColoredGraph, ColoringScheme,
    UpdateRule,
};

use output::{fmt12, opt_f, write_csv, write_json, write_jsonl, Format};

#[derive(Parser, Debug)]
#[command(name = "majlab", version, about = "Majority dynamics on Erdős–Rényi random graphs")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true, env = "MAJLAB_WORKERS")]
    workers: Option<usize>,
    /// JSON file with one section per subcommand; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the dynamics on one sampled graph.
    Simulate(SimulateArgs),
    /// Monte Carlo sweep over a grid of (n, p, gap) cells.
    Sweep(SweepArgs),
    /// Bracket the smallest gap reaching a target win probability.
    Scan(ScanArgs),
    /// Exact statistic by enumerating every edge configuration (n <= 6).
    Oracle(OracleArgs),
    /// Structural sets of a sampled or given graph.
    Sets(SetsArgs),
    /// Run a verification suite; exits with 3 on any violation.
    Verify(VerifyArgs),
    /// Tabulate bounds against estimates.
    Report(ReportArgs),
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
struct SimulateArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    /// Gap: |C1| = n/2 + delta. Ignored with --scheme half|biased.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<f64>,
    /// fixed (default), half or biased.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    scheme: Option<String>,
    /// Color-1 probability of the biased random scheme.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    q1: Option<f64>,
    /// standard or biased.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    rule: Option<UpdateRule>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    /// Day cap; defaults to the O(log n / log np) cap.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    cap: Option<u32>,
    /// Also write the (day, c1, c2) trace to this CSV file.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
struct SweepArgs {
    /// Comma separated vertex counts.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Comma separated edge probabilities.
    #[arg(long, value_delimiter = ',')]
    p: Vec<f64>,
    /// Comma separated gaps.
    #[arg(long, value_delimiter = ',')]
    delta: Vec<f64>,
    /// half or biased instead of gaps.
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    q1: Option<f64>,
    #[arg(long)]
    rule: Option<UpdateRule>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Fixed day cap for every cell.
    #[arg(long)]
    cap: Option<u32>,
    /// Directory for results.jsonl, summary.csv and checkpoints.jsonl.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Continue from checkpoints in --out.
    #[arg(long)]
    resume: bool,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
struct ScanArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    rule: Option<UpdateRule>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    trials: Option<u64>,
    /// Target win probability in (0.5, 1).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    target: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    cap: Option<u32>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
struct OracleArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    /// Initial colors as digits, e.g. 112.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    colors: Option<String>,
    /// Edge probability as a fraction (1/3) or decimal (0.25).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<String>,
    /// Evaluate in floating point instead of exact rationals.
    #[arg(long)]
    #[serde(skip_serializing_if = "is_false")]
    float: bool,
    /// winprob, expected, var, moment, set or fourier.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    stat: Option<String>,
    /// Color for winprob, expected and var (1 or 2).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    color: Option<u8>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    day: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    rule: Option<UpdateRule>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    cap: Option<u32>,
    /// Moment order for moment.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<u32>,
    /// s1, s2, sstar, ig or rhat for set.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    set: Option<SetKind>,
    /// 1 for the mean, 2 for the variance, for set.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    moment: Option<u32>,
    /// Focal pair "u,v" for set.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    focal: Option<String>,
    /// Focal vertex of rhat.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    w: Option<usize>,
    /// Vertex for fourier.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    v: Option<usize>,
    /// Edge set "u-v,u-v" for fourier.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    edges: Option<String>,
    /// Also estimate the statistic by Monte Carlo with this many trials.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    mc_trials: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
struct SetsArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    /// Graph snapshot JSON {n, edges, colors} instead of sampling.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    graph: Option<PathBuf>,
    /// Focal vertices; default to the first two color-1 vertices.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    u: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    v: Option<usize>,
    /// Also report R̂_w.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    w: Option<usize>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(subcommand)]
    suite: Suite,
}

#[derive(Subcommand, Debug)]
enum Suite {
    /// Inequalities on binomial differences and the normal distribution.
    AppendixA(AppendixArgs),
    /// Structural identities on every graph with at most --max-n vertices.
    Identities(ExhaustiveArgs),
    /// Exact Fourier identities on every coloring with at most --max-n vertices.
    Fourier(ExhaustiveArgs),
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
struct AppendixArgs {
    /// default or small.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<GridPreset>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
struct ExhaustiveArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    max_n: Option<usize>,
    /// Edge probability (fraction or decimal) entering μ.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<String>,
    /// Accepted for uniformity; the suite is deterministic.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[command(subcommand)]
    which: ReportKind,
}

#[derive(Subcommand, Debug)]
enum ReportKind {
    /// One record per bound with its anchor, hypotheses and estimate.
    Lemmas(LemmaArgs),
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
struct LemmaArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    trials: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    /// Moment order of the Z^k bounds.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<u32>,
}

/// Failure classes, mapped to exit codes.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
    Violations(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<majlab_core::Error>() {
            Some(majlab_core::Error::Io(_) | majlab_core::Error::Json(_) | majlab_core::Error::Csv(_)) | None => {
                Failure::Runtime(e)
            }
            Some(inner) => Failure::Usage(inner.to_string()),
        }
    }
}

impl From<majlab_core::Error> for Failure {
    fn from(e: majlab_core::Error) -> Self {
        Failure::from(anyhow::Error::new(e))
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn required<T>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| usage(format!("missing required flag --{flag}")))
}

/// Reads the section `key` of the config file, if any.
fn config_section(path: Option<&Path>, key: &str) -> Result<Option<Value>, Failure> {
    let Some(path) = path else { return Ok(None) };
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config {}", path.display()))
        .map_err(Failure::Runtime)?;
    let root: Value =
        serde_json::from_str(&text).map_err(|e| usage(format!("config {} is not valid JSON: {e}", path.display())))?;
    Ok(root.get(key).cloned())
}

/// Overlays flags on top of the config section: flag values win.
fn merged<T: Serialize + DeserializeOwned>(flags: T, path: Option<&Path>, key: &str) -> Result<T, Failure> {
    let Some(Value::Object(mut base)) = config_section(path, key)? else {
        return Ok(flags);
    };
    if let Value::Object(over) = serde_json::to_value(&flags).map_err(|e| Failure::Runtime(e.into()))? {
        base.extend(over);
    }
    serde_json::from_value(Value::Object(base)).map_err(|e| usage(format!("config section {key:?}: {e}")))
}

fn scheme_from(name: Option<&str>, delta: Option<f64>, q1: Option<f64>) -> Result<ColoringScheme, Failure> {
    match name.unwrap_or("fixed") {
        "fixed" => Ok(ColoringScheme::fixed_gap(delta.unwrap_or(0.0))?),
        "half" => Ok(ColoringScheme::RandomHalf),
        "biased" => Ok(ColoringScheme::RandomBiased {
            q1: required(q1, "q1")?,
        }),
        other => Err(usage(format!("unknown scheme {other:?}; use fixed, half or biased"))),
    }
}

fn cap_or_default(cap: Option<u32>, n: usize, p: f64) -> Result<u32, Failure> {
    match cap {
        Some(c) if c >= 1 => Ok(c),
        Some(_) => Err(usage("--cap must be at least 1")),
        None => Ok(default_cap(n as f64, p)?),
    }
}

fn simulate(a: SimulateArgs, format: Format, out: &mut dyn Write) -> Outcome {
    let n = required(a.n, "n")?;
    let p = required(a.p, "p")?;
    let scheme = scheme_from(a.scheme.as_deref(), a.delta, a.q1)?;
    let rule = a.rule.unwrap_or_default();
    let seed = a.seed.unwrap_or(0);
    let cap = cap_or_default(a.cap, n, p)?;
    let g = sample_gnp_with(n, p, &scheme, &mut rng::split(seed, 0))?;
    let trace = run(&g, rule, cap);
    if let Some(path) = &a.trace {
        let file = std::fs::File::create(path)
            .with_context(|| format!("cannot create {}", path.display()))
            .map_err(Failure::Runtime)?;
        trace.write_csv(io::BufWriter::new(file))?;
    }
    match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = trace
                .counts
                .iter()
                .map(|c| vec![c.day.to_string(), c.c1.to_string(), (n - c.c1).to_string()])
                .collect();
            write_csv(out, &["day", "c1", "c2"], &rows)?;
        }
        Format::Json => write_json(
            out,
            &json!({
                "n": n, "p": p, "scheme": scheme, "rule": rule, "seed": seed, "cap": cap,
                "edges": g.adjacency().edge_count(),
                "termination": trace.termination,
                "counts": trace.counts.iter().map(|c| json!({"day": c.day, "c1": c.c1, "c2": n - c.c1})).collect::<Vec<_>>(),
            }),
        )?,
    }
    Ok(())
}

fn sweep_config(a: SweepArgs, config: Option<&Path>, workers: Option<usize>) -> Result<ExperimentConfig, Failure> {
    let mut base = config_section(config, "sweep")?.unwrap_or_else(|| json!({}));
    let obj = base
        .as_object_mut()
        .ok_or_else(|| usage("config section \"sweep\" must be an object"))?;
    if !a.n.is_empty() {
        obj.insert("n_values".into(), json!(a.n));
    }
    if !a.p.is_empty() {
        obj.insert("p_values".into(), json!(a.p));
    }
    if !a.delta.is_empty() {
        obj.insert("delta_values".into(), json!(a.delta));
        obj.remove("scheme");
    }
    if let Some(name) = a.scheme.as_deref() {
        let preset = match name {
            "half" => SchemePreset::RandomHalf,
            "biased" => SchemePreset::RandomBiased {
                q1: required(a.q1, "q1")?,
            },
            other => return Err(usage(format!("unknown sweep scheme {other:?}; use half or biased"))),
        };
        obj.insert(
            "scheme".into(),
            serde_json::to_value(preset).map_err(anyhow::Error::from)?,
        );
        obj.remove("delta_values");
    }
    if let Some(rule) = a.rule {
        obj.insert("rule".into(), json!(rule));
    }
    if let Some(t) = a.trials {
        obj.insert("trials".into(), json!(t));
    }
    if let Some(s) = a.seed {
        obj.insert("master_seed".into(), json!(s));
    }
    if let Some(c) = a.cap {
        obj.insert(
            "cap".into(),
            serde_json::to_value(CapPolicy::Fixed { cap: c }).map_err(anyhow::Error::from)?,
        );
    }
    if let Some(o) = &a.out {
        obj.insert("output".into(), json!(o));
    }
    if a.resume {
        obj.insert("resume".into(), json!(true));
    }
    obj.remove("workers");
    if !obj.contains_key("trials") {
        return Err(usage("missing required flag --trials"));
    }
    let mut cfg: ExperimentConfig =
        serde_json::from_value(base).map_err(|e| usage(format!("invalid sweep configuration: {e}")))?;
    cfg.workers = workers;
    Ok(cfg)
}

fn write_sweep(r: &SweepResult, format: Format, out: &mut dyn Write) -> Outcome {
    match format {
        Format::Json => write_jsonl(out, &r.cells)?,
        Format::Csv => r.write_summary_csv(out)?,
    }
    Ok(())
}

fn sweep(a: SweepArgs, config: Option<&Path>, workers: Option<usize>, format: Format, out: &mut dyn Write) -> Outcome {
    let cfg = sweep_config(a, config, workers)?;
    cfg.validate()?;
    let r = harness::run_sweep(&cfg)?;
    write_sweep(&r, format, out)
}

fn scan(a: ScanArgs, format: Format, out: &mut dyn Write) -> Outcome {
    let n = required(a.n, "n")?;
    let p = required(a.p, "p")?;
    let cap = match a.cap {
        Some(cap) => CapPolicy::Fixed { cap },
        None => CapPolicy::Default,
    };
    let r = harness::threshold_scan(
        n,
        p,
        a.rule.unwrap_or_default(),
        a.trials.unwrap_or(200),
        a.target.unwrap_or(0.9),
        a.seed.unwrap_or(0),
        cap,
    )?;
    let threshold = delta_threshold(n as f64, p, ThresholdParams::default()).ok();
    match format {
        Format::Json => write_json(out, &json!({ "scan": r, "delta_threshold": threshold }))?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = r
                .points
                .iter()
                .map(|pt| {
                    vec![
                        fmt12(pt.delta),
                        pt.trials.to_string(),
                        pt.win1.to_string(),
                        fmt12(pt.wilson_lo),
                        fmt12(pt.wilson_hi),
                        pt.success.to_string(),
                    ]
                })
                .collect();
            write_csv(
                out,
                &["delta", "trials", "win1", "wilson_lo", "wilson_hi", "success"],
                &rows,
            )?;
        }
    }
    Ok(())
}

fn parse_pair(s: &str, sep: char) -> Result<(usize, usize), Failure> {
    let bad = || usage(format!("cannot parse {s:?} as two vertices separated by {sep:?}"));
    let (a, b) = s.split_once(sep).ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

fn color_arg(c: Option<u8>) -> Result<Color, Failure> {
    Color::try_from(c.unwrap_or(1)).map_err(usage)
}

fn statistic(a: &OracleArgs) -> Result<Statistic, Failure> {
    let name = required(a.stat.as_deref(), "stat")?;
    Ok(match name {
        "winprob" => Statistic::WinProb {
            color: color_arg(a.color)?,
            rule: a.rule.unwrap_or_default(),
            cap: a.cap,
        },
        "expected" => Statistic::ExpectedCount {
            day: a.day.unwrap_or(1),
            color: color_arg(a.color)?,
            rule: a.rule.unwrap_or_default(),
        },
        "var" => Statistic::VarCount {
            day: a.day.unwrap_or(1),
            color: color_arg(a.color)?,
            rule: a.rule.unwrap_or_default(),
        },
        "moment" => Statistic::MomentZ {
            k: a.k.unwrap_or(2),
            rule: a.rule.unwrap_or(UpdateRule::Biased),
        },
        "set" => Statistic::SetStat {
            which: required(a.set, "set")?,
            moment: a.moment.unwrap_or(1),
            focal: a.focal.as_deref().map(|s| parse_pair(s, ',')).transpose()?,
            w: a.w,
        },
        "fourier" => Statistic::FourierCoeff {
            v: required(a.v, "v")?,
            set: a
                .edges
                .as_deref()
                .unwrap_or("")
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| parse_pair(s, '-'))
                .collect::<Result<_, _>>()?,
            rule: a.rule.unwrap_or(UpdateRule::Biased),
        },
        other => {
            return Err(usage(format!(
                "unknown statistic {other:?}; use winprob, expected, var, moment, set or fourier"
            )))
        }
    })
}

fn oracle(a: OracleArgs, format: Format, out: &mut dyn Write) -> Outcome {
    let colors = parse_colors(&required(a.colors.clone(), "colors")?)?;
    let n = a.n.unwrap_or(colors.len());
    if n != colors.len() {
        return Err(usage(format!("--n {n} does not match {} colors", colors.len())));
    }
    let p = OracleP::parse(&required(a.p.clone(), "p")?, a.float)?;
    let q = OracleQuery {
        n,
        p,
        colors,
        statistic: statistic(&a)?,
    };
    let answer = oracle_eval(&q)?;
    let agreement = a
        .mc_trials
        .map(|t| oracle_vs_mc(&q, t, a.seed.unwrap_or(0)))
        .transpose()?;
    match format {
        Format::Json => write_json(
            out,
            &json!({
                "n": n, "colors": a.colors, "p": a.p, "statistic": q.statistic,
                "answer": answer, "monte_carlo": agreement,
            }),
        )?,
        Format::Csv => {
            let row = vec![
                a.stat.clone().unwrap_or_default(),
                fmt12(answer.value),
                answer.exact.clone().unwrap_or_default(),
                answer.exact_square.clone().unwrap_or_default(),
                opt_f(agreement.as_ref().map(|r| r.estimate)),
                opt_f(agreement.as_ref().map(|r| r.stderr)),
            ];
            write_csv(
                out,
                &[
                    "statistic",
                    "value",
                    "exact",
                    "exact_square",
                    "mc_estimate",
                    "mc_stderr",
                ],
                &[row],
            )?;
        }
    }
    Ok(())
}

fn sets(a: SetsArgs, format: Format, out: &mut dyn Write) -> Outcome {
    let g = match &a.graph {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))
                .map_err(Failure::Runtime)?;
            ColoredGraph::from_json(&text)?
        }
        None => {
            let n = required(a.n, "n")?;
            let p = required(a.p, "p")?;
            let scheme = ColoringScheme::fixed_gap(a.delta.unwrap_or(0.0))?;
            sample_gnp_with(n, p, &scheme, &mut rng::split(a.seed.unwrap_or(0), 0))?
        }
    };
    let ones: Vec<usize> = (0..g.n()).filter(|&v| g.color(v) == Color::One).collect();
    let u = match a.u {
        Some(u) => u,
        None => *ones.first().ok_or_else(|| usage("graph has no color-1 vertex"))?,
    };
    let v = match a.v {
        Some(v) => v,
        None => *ones
            .iter()
            .find(|&&x| x != u)
            .ok_or_else(|| usage("graph has fewer than two color-1 vertices"))?,
    };
    let mut report = compute_s_sets(&g, u, v)?;
    if let Some(w) = a.w {
        report = report.with_r_hat(&g, w)?;
    }
    let day2 = if g.has_edge(u, v) {
        None
    } else {
        Some(majlab_core::day2_identity_sides(&g, u, v)?)
    };
    match format {
        Format::Json => write_json(
            out,
            &json!({
                "n": g.n(), "edges": g.adjacency().edge_count(), "counts": g.counts(),
                "report": report,
                "day2_identity": day2.map(|(l, r)| json!({"lhs": l, "rhs": r, "holds": l == r})),
            }),
        )?,
        Format::Csv => {
            let join = |xs: &[usize]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
            let mut rows = vec![
                vec!["s1".into(), report.s1.len().to_string(), join(&report.s1)],
                vec!["s2".into(), report.s2.len().to_string(), join(&report.s2)],
                vec!["s_star".into(), report.s_star.len().to_string(), join(&report.s_star)],
                vec!["i_g".into(), report.i_g.to_string(), String::new()],
            ];
            if let Some(r) = &report.r_hat {
                rows.push(vec![
                    format!("r_hat_{}", r.w),
                    r.members.len().to_string(),
                    join(&r.members),
                ]);
            }
            write_csv(out, &["set", "size", "members"], &rows)?;
        }
    }
    Ok(())
}

fn exact_p(s: Option<&str>) -> Result<majlab_core::exact::Q, Failure> {
    Ok(majlab_core::exact::parse_rational(s.unwrap_or("1/3"))?)
}

fn verify(suite: Suite, config: Option<&Path>, format: Format, out: &mut dyn Write) -> Outcome {
    match suite {
        Suite::AppendixA(a) => {
            let a: AppendixArgs = merged(a, config, "verify_appendix_a")?;
            let report = verify_appendix_a(a.grid.unwrap_or_default(), a.seed.unwrap_or(0));
            let tally = report.tally();
            match format {
                Format::Json => write_json(
                    out,
                    &json!({"all_pass": report.all_pass(), "tally": tally, "records": report.records}),
                )?,
                Format::Csv => {
                    let rows: Vec<Vec<String>> = report
                        .records
                        .iter()
                        .map(|r| {
                            vec![
                                r.lemma_id.clone(),
                                r.params.to_string(),
                                serde_json::to_value(r.relation)
                                    .map(|v| v.as_str().unwrap_or("").to_string())
                                    .unwrap_or_default(),
                                fmt12(r.lhs),
                                fmt12(r.rhs),
                                fmt12(r.slack),
                                r.pass.map_or("skipped".to_string(), |p| p.to_string()),
                            ]
                        })
                        .collect();
                    write_csv(
                        out,
                        &["lemma_id", "params", "relation", "lhs", "rhs", "slack", "pass"],
                        &rows,
                    )?;
                }
            }
            let bad = report.violations().len();
            if bad > 0 {
                return Err(Failure::Violations(format!("{bad} inequality points violated")));
            }
        }
        Suite::Identities(a) => {
            let a: ExhaustiveArgs = merged(a, config, "verify_identities")?;
            let r = verify_identities(a.max_n.unwrap_or(5), &exact_p(a.p.as_deref())?)?;
            emit_counts(&r, format, out)?;
            if r.total_violations() > 0 {
                return Err(Failure::Violations(format!(
                    "{} identity violations",
                    r.total_violations()
                )));
            }
        }
        Suite::Fourier(a) => {
            let a: ExhaustiveArgs = merged(a, config, "verify_fourier")?;
            let r = verify_fourier_suite(a.max_n.unwrap_or(5), &exact_p(a.p.as_deref())?)?;
            emit_counts(&r, format, out)?;
            if r.total_violations() > 0 {
                return Err(Failure::Violations(format!(
                    "{} Fourier violations",
                    r.total_violations()
                )));
            }
        }
    }
    Ok(())
}

/// Writes a flat or one-level nested report of counters.
fn emit_counts<T: Serialize>(r: &T, format: Format, out: &mut dyn Write) -> Outcome {
    match format {
        Format::Json => write_json(out, r)?,
        Format::Csv => {
            let mut rows = Vec::new();
            if let Value::Object(map) = serde_json::to_value(r).map_err(anyhow::Error::from)? {
                for (k, v) in map {
                    match v {
                        Value::Object(inner) => rows.extend(
                            inner
                                .into_iter()
                                .map(|(k2, v2)| vec![format!("{k}.{k2}"), v2.to_string()]),
                        ),
                        other => rows.push(vec![k, other.to_string()]),
                    }
                }
            }
            write_csv(out, &["key", "value"], &rows)?;
        }
    }
    Ok(())
}

fn report(kind: ReportKind, config: Option<&Path>, format: Format, out: &mut dyn Write) -> Outcome {
    let ReportKind::Lemmas(a) = kind;
    let a: LemmaArgs = merged(a, config, "report_lemmas")?;
    let d = ReportParams::default();
    let params = ReportParams {
        n: a.n.unwrap_or(d.n),
        p: a.p.unwrap_or(d.p),
        delta: a.delta.unwrap_or(d.delta),
        trials: a.trials.unwrap_or(d.trials),
        seed: a.seed.unwrap_or(d.seed),
        k: a.k.unwrap_or(d.k),
        ..d
    };
    let r = lemma_report(&params)?;
    match format {
        Format::Json => write_json(out, &r)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = r
                .records
                .iter()
                .map(|x| {
                    let enum_str = |v: Value| v.as_str().unwrap_or_default().to_string();
                    vec![
                        x.lemma_id.clone(),
                        x.quote_anchor.clone(),
                        enum_str(json!(x.relation)),
                        opt_f(x.lhs),
                        opt_f(x.rhs),
                        enum_str(json!(x.mode)),
                        x.hypotheses_met.to_string(),
                        x.asserted.to_string(),
                        enum_str(json!(x.status)),
                        x.note.clone(),
                    ]
                })
                .collect();
            write_csv(
                out,
                &[
                    "lemma_id",
                    "quote_anchor",
                    "relation",
                    "lhs",
                    "rhs",
                    "mode",
                    "hypotheses_met",
                    "asserted",
                    "status",
                    "note",
                ],
                &rows,
            )?;
        }
    }
    Ok(())
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Outcome {
    let config = cli.config.as_deref();
    let format = cli.format;
    match cli.command {
        Command::Simulate(a) => simulate(merged(a, config, "simulate")?, format, out),
        Command::Sweep(a) => sweep(a, config, cli.workers, format, out),
        Command::Scan(a) => scan(merged(a, config, "scan")?, format, out),
        Command::Oracle(a) => oracle(merged(a, config, "oracle")?, format, out),
        Command::Sets(a) => sets(merged(a, config, "sets")?, format, out),
        Command::Verify(v) => verify(v.suite, config, format, out),
        Command::Report(r) => report(r.which, config, format, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if cli.workers == Some(0) {
        eprintln!("error: --workers must be at least 1");
        return ExitCode::from(2);
    }
    let workers = cli.workers;
    let stdout = io::stdout();
    let result = harness::with_workers(workers, move || {
        let mut lock = stdout.lock();
        let r = dispatch(cli, &mut lock);
        let _ = lock.flush();
        r
    });
    let result = match result {
        Ok(r) => r,
        Err(e) => Err(Failure::from(e)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\nRun `majlab --help` or `majlab <command> --help` for usage.");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Violations(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(3)
        }
    }
}
