//! Seeded Monte Carlo sweeps over `(n, p, gap)` grids and coloring presets.
//!
//! Each cell gets its own seed `derive_seed(master_seed, cell_id)` and each
//! trial the stream `split(cell_seed, trial)`. Per-trial outcomes are
//! integer tallies, so the reduction does not depend on how trials are
//! scheduled and the output is byte-identical for any worker count.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{cap_with, default_cap, run, Termination, UpdateRule};
use crate::error::{Error, Result};
use crate::graph::{check_probability, sample_gnp_with, Color, ColoringScheme};
use crate::rng;

/// Trials between two checkpoint lines of a cell.
pub const CHECKPOINT_EVERY: u64 = 10_000;

/// Two-sided 95% standard normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

pub const RESULTS_FILE: &str = "results.jsonl";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const CHECKPOINT_FILE: &str = "checkpoints.jsonl";

/// How the day cap of a cell is chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CapPolicy {
    /// `default_cap(n, p)`; requires `np > 1`.
    #[default]
    Default,
    /// The same cap for every cell.
    Fixed { cap: u32 },
    /// `cap_with(n, p, c, c0)`.
    Scaled { c: f64, c0: u32 },
}

impl CapPolicy {
    /// The cap for one cell.
    pub fn cap(&self, n: usize, p: f64) -> Result<u32> {
        match *self {
            CapPolicy::Default => default_cap(n as f64, p),
            CapPolicy::Fixed { cap } => Ok(cap),
            CapPolicy::Scaled { c, c0 } => cap_with(n as f64, p, c, c0),
        }
    }
}

/// Random coloring presets used instead of a list of gaps.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SchemePreset {
    RandomHalf,
    RandomBiased { q1: f64 },
}

impl From<SchemePreset> for ColoringScheme {
    fn from(s: SchemePreset) -> Self {
        match s {
            SchemePreset::RandomHalf => ColoringScheme::RandomHalf,
            SchemePreset::RandomBiased { q1 } => ColoringScheme::RandomBiased { q1 },
        }
    }
}

fn default_rule() -> UpdateRule {
    UpdateRule::Standard
}

/// A sweep over the grid `n_values x p_values x delta_values`, or over
/// `n_values x p_values` with a random coloring preset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n_values: Vec<usize>,
    pub p_values: Vec<f64>,
    #[serde(default)]
    pub delta_values: Vec<f64>,
    #[serde(default)]
    pub scheme: Option<SchemePreset>,
    #[serde(default = "default_rule")]
    pub rule: UpdateRule,
    pub trials: u64,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub cap: CapPolicy,
    /// Directory receiving `results.jsonl`, `summary.csv` and
    /// `checkpoints.jsonl`. Nothing is written when absent.
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Worker threads; `None` uses every core. Does not affect results.
    #[serde(default)]
    pub workers: Option<usize>,
    /// Continue from `checkpoints.jsonl` in `output` when present.
    #[serde(default)]
    pub resume: bool,
}

impl ExperimentConfig {
    /// A config for a plain gap sweep.
    pub fn gaps(n_values: Vec<usize>, p_values: Vec<f64>, delta_values: Vec<f64>, trials: u64, seed: u64) -> Self {
        ExperimentConfig {
            n_values,
            p_values,
            delta_values,
            scheme: None,
            rule: UpdateRule::Standard,
            trials,
            master_seed: seed,
            cap: CapPolicy::Default,
            output: None,
            workers: None,
            resume: false,
        }
    }

    /// Reads a config from a JSON file.
    pub fn from_json_file(path: &Path) -> Result<Self> {
        Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
    }

    /// The part of the config that determines results.
    fn fingerprint(&self) -> ExperimentConfig {
        ExperimentConfig {
            output: None,
            workers: None,
            resume: false,
            ..self.clone()
        }
    }

    /// Cells in output order: `n` outermost, then `p`, then the gap.
    pub fn cells(&self) -> Result<Vec<Cell>> {
        self.validate()?;
        let schemes: Vec<ColoringScheme> = match self.scheme {
            Some(preset) => vec![preset.into()],
            None => self
                .delta_values
                .iter()
                .map(|&d| ColoringScheme::fixed_gap(d))
                .collect::<Result<_>>()?,
        };
        let mut cells = Vec::new();
        for &n in &self.n_values {
            for &p in &self.p_values {
                for scheme in &schemes {
                    scheme.validate(n)?;
                    let id = cells.len() as u64;
                    cells.push(Cell {
                        id,
                        n,
                        p,
                        scheme: *scheme,
                        rule: self.rule,
                        cap: self.cap.cap(n, p)?,
                        seed: rng::derive_seed(self.master_seed, id),
                    });
                }
            }
        }
        Ok(cells)
    }

    /// Checks the config without running anything.
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if self.n_values.is_empty() || self.p_values.is_empty() {
            return Err(Error::InvalidArgument("n_values and p_values must be nonempty".into()));
        }
        match (self.scheme.is_some(), self.delta_values.is_empty()) {
            (true, false) => {
                return Err(Error::InvalidArgument(
                    "give either delta_values or a scheme preset, not both".into(),
                ))
            }
            (false, true) => {
                return Err(Error::InvalidArgument(
                    "delta_values is empty and no scheme preset is set".into(),
                ))
            }
            _ => {}
        }
        if self.workers == Some(0) {
            return Err(Error::InvalidArgument("workers must be at least 1".into()));
        }
        for &p in &self.p_values {
            check_probability(p)?;
        }
        Ok(())
    }
}

/// One grid point of a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub id: u64,
    pub n: usize,
    pub p: f64,
    pub scheme: ColoringScheme,
    pub rule: UpdateRule,
    pub cap: u32,
    pub seed: u64,
}

/// Integer counts accumulated over trials.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellTally {
    pub trials: u64,
    pub win1: u64,
    pub win2: u64,
    pub cycles: u64,
    pub cap_hits: u64,
    /// Sum of unanimity days over winning trials.
    pub days_sum: u64,
    /// Trials whose initial coloring had a strict majority.
    pub majority_trials: u64,
    /// Of those, trials won by the initial majority.
    pub majority_wins: u64,
    /// Trials starting with `|C_1| = |C_2|`.
    pub no_majority: u64,
}

impl CellTally {
    fn merge(mut self, o: CellTally) -> CellTally {
        self.trials += o.trials;
        self.win1 += o.win1;
        self.win2 += o.win2;
        self.cycles += o.cycles;
        self.cap_hits += o.cap_hits;
        self.days_sum += o.days_sum;
        self.majority_trials += o.majority_trials;
        self.majority_wins += o.majority_wins;
        self.no_majority += o.no_majority;
        self
    }
}

/// Runs trial `t` of a cell.
pub fn run_trial(cell: &Cell, t: u64) -> Result<CellTally> {
    let mut r = rng::split(cell.seed, t);
    let g = sample_gnp_with(cell.n, cell.p, &cell.scheme, &mut r)?;
    let (c1, c2) = g.counts();
    let majority = match c1.cmp(&c2) {
        std::cmp::Ordering::Greater => Some(Color::One),
        std::cmp::Ordering::Less => Some(Color::Two),
        std::cmp::Ordering::Equal => None,
    };
    let trace = run(&g, cell.rule, cell.cap);
    let mut tally = CellTally {
        trials: 1,
        majority_trials: majority.is_some() as u64,
        no_majority: majority.is_none() as u64,
        ..CellTally::default()
    };
    match trace.termination {
        Termination::Unanimity { winner, day } => {
            match winner {
                Color::One => tally.win1 = 1,
                Color::Two => tally.win2 = 1,
            }
            tally.days_sum = day as u64;
            tally.majority_wins = (majority == Some(winner)) as u64;
        }
        Termination::TwoCycle { .. } => tally.cycles = 1,
        Termination::CapReached { .. } => tally.cap_hits = 1,
    }
    Ok(tally)
}

/// Trials `range` of a cell, reduced in a fixed order.
fn run_range(cell: &Cell, range: std::ops::Range<u64>) -> Result<CellTally> {
    range
        .into_par_iter()
        .map(|t| run_trial(cell, t))
        .try_reduce(CellTally::default, |a, b| Ok(a.merge(b)))
}

/// Wilson score interval for `successes` out of `trials` at quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Summary of one cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub cell_id: u64,
    pub n: usize,
    pub p: f64,
    pub delta: Option<f64>,
    pub scheme: ColoringScheme,
    pub rule: UpdateRule,
    pub cap: u32,
    pub trials: u64,
    pub win1: u64,
    pub win2: u64,
    pub cycles: u64,
    pub cap_hits: u64,
    pub p_hat: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    /// Mean unanimity day over winning trials.
    pub mean_days: Option<f64>,
    pub majority_trials: u64,
    pub majority_wins: u64,
    pub no_majority: u64,
    /// Frequency with which the initial majority wins, over trials with one.
    pub majority_win_freq: Option<f64>,
    pub majority_wilson_lo: Option<f64>,
    pub majority_wilson_hi: Option<f64>,
}

impl CellResult {
    fn new(cell: &Cell, t: &CellTally) -> CellResult {
        let (lo, hi) = wilson_interval(t.win1, t.trials, Z95);
        let wins = t.win1 + t.win2;
        let (mlo, mhi) = wilson_interval(t.majority_wins, t.majority_trials, Z95);
        let has_majority = t.majority_trials > 0;
        CellResult {
            cell_id: cell.id,
            n: cell.n,
            p: cell.p,
            delta: cell.scheme.delta(),
            scheme: cell.scheme,
            rule: cell.rule,
            cap: cell.cap,
            trials: t.trials,
            win1: t.win1,
            win2: t.win2,
            cycles: t.cycles,
            cap_hits: t.cap_hits,
            p_hat: t.win1 as f64 / t.trials as f64,
            wilson_lo: lo,
            wilson_hi: hi,
            mean_days: (wins > 0).then(|| t.days_sum as f64 / wins as f64),
            majority_trials: t.majority_trials,
            majority_wins: t.majority_wins,
            no_majority: t.no_majority,
            majority_win_freq: has_majority.then(|| t.majority_wins as f64 / t.majority_trials as f64),
            majority_wilson_lo: has_majority.then_some(mlo),
            majority_wilson_hi: has_majority.then_some(mhi),
        }
    }
}

/// All cells of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub cells: Vec<CellResult>,
}

impl SweepResult {
    /// One JSON object per cell and line.
    pub fn to_jsonl(&self) -> Result<String> {
        let mut s = String::new();
        for c in &self.cells {
            s.push_str(&serde_json::to_string(c)?);
            s.push('\n');
        }
        Ok(s)
    }

    /// The summary table as CSV.
    pub fn write_summary_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "cell_id",
            "n",
            "p",
            "delta",
            "trials",
            "win1",
            "win2",
            "cycles",
            "cap_hits",
            "p_hat",
            "wilson_lo",
            "wilson_hi",
            "mean_days",
        ])?;
        let opt = |x: Option<f64>| x.map_or(String::new(), |v| v.to_string());
        for c in &self.cells {
            w.write_record([
                c.cell_id.to_string(),
                c.n.to_string(),
                c.p.to_string(),
                opt(c.delta),
                c.trials.to_string(),
                c.win1.to_string(),
                c.win2.to_string(),
                c.cycles.to_string(),
                c.cap_hits.to_string(),
                c.p_hat.to_string(),
                c.wilson_lo.to_string(),
                c.wilson_hi.to_string(),
                opt(c.mean_days),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Adjacent gap cells at the same `(n, p)` whose Wilson intervals
    /// certify a decrease of the win probability as the gap grows.
    pub fn monotonicity_violations(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for w in self.cells.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            if a.n != b.n || a.p != b.p {
                continue;
            }
            let (Some(da), Some(db)) = (a.delta, b.delta) else {
                continue;
            };
            let (small, large) = if da < db { (a, b) } else { (b, a) };
            if small.wilson_lo > large.wilson_hi {
                out.push((small.cell_id, large.cell_id));
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CheckpointLine {
    Header { config: ExperimentConfig },
    Progress { cell_id: u64, tally: CellTally },
}

/// Latest tally per cell found in a checkpoint file written for `cfg`.
fn load_checkpoints(path: &Path, cfg: &ExperimentConfig, cells: usize) -> Result<Vec<CellTally>> {
    let mut tallies = vec![CellTally::default(); cells];
    let mut lines = BufReader::new(File::open(path)?).lines();
    match lines.next().transpose()? {
        Some(first) => match serde_json::from_str(&first)? {
            CheckpointLine::Header { config } if config == cfg.fingerprint() => {}
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "{} was written for a different config",
                    path.display()
                )))
            }
        },
        None => return Ok(tallies),
    }
    for line in lines {
        let line = line?;
        // A torn final line from an interrupted write is ignored.
        let Ok(CheckpointLine::Progress { cell_id, tally }) = serde_json::from_str(&line) else {
            continue;
        };
        if let Some(slot) = tallies.get_mut(cell_id as usize) {
            if tally.trials > slot.trials {
                *slot = tally;
            }
        }
    }
    Ok(tallies)
}

fn checkpoint_writer(dir: &Path, cfg: &ExperimentConfig, cells: usize) -> Result<(BufWriter<File>, Vec<CellTally>)> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(CHECKPOINT_FILE);
    let resumed = cfg.resume && path.exists();
    let tallies = if resumed {
        load_checkpoints(&path, cfg, cells)?
    } else {
        vec![CellTally::default(); cells]
    };
    let file = if resumed {
        OpenOptions::new().append(true).open(&path)?
    } else {
        File::create(&path)?
    };
    let mut w = BufWriter::new(file);
    if !resumed {
        writeln!(
            w,
            "{}",
            serde_json::to_string(&CheckpointLine::Header {
                config: cfg.fingerprint()
            })?
        )?;
        w.flush()?;
    }
    Ok((w, tallies))
}

fn sweep_cells(cfg: &ExperimentConfig, cells: &[Cell]) -> Result<SweepResult> {
    let mut checkpoints = match &cfg.output {
        Some(dir) => Some(checkpoint_writer(dir, cfg, cells.len())?),
        None => None,
    };
    let mut results = Vec::with_capacity(cells.len());
    for cell in cells {
        let mut tally = checkpoints
            .as_ref()
            .map_or(CellTally::default(), |(_, t)| t[cell.id as usize]);
        while tally.trials < cfg.trials {
            let end = (tally.trials + CHECKPOINT_EVERY).min(cfg.trials);
            tally = tally.merge(run_range(cell, tally.trials..end)?);
            if let Some((w, _)) = checkpoints.as_mut() {
                let line = CheckpointLine::Progress {
                    cell_id: cell.id,
                    tally,
                };
                writeln!(w, "{}", serde_json::to_string(&line)?)?;
                w.flush()?;
            }
        }
        results.push(CellResult::new(cell, &tally));
    }
    let result = SweepResult { cells: results };
    if let Some(dir) = &cfg.output {
        std::fs::write(dir.join(RESULTS_FILE), result.to_jsonl()?)?;
        result.write_summary_csv(BufWriter::new(File::create(dir.join(SUMMARY_FILE))?))?;
    }
    Ok(result)
}

/// Runs `f` on a pool with `workers` threads, or on the global pool.
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("cannot build worker pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Runs every cell of a sweep and writes the outputs when `cfg.output` is
/// set. Checkpoints are appended every [`CHECKPOINT_EVERY`] trials of a
/// cell; completed checkpoints survive a failure and are picked up again
/// with `resume`.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let cells = cfg.cells()?;
    with_workers(cfg.workers, || sweep_cells(cfg, &cells))?
}

/// Runs a random coloring preset at one `(n, p)`. The result carries the
/// initial-majority counts; ties land in `no_majority`.
pub fn scheme_experiment(
    scheme: SchemePreset,
    n: usize,
    p: f64,
    rule: UpdateRule,
    trials: u64,
    seed: u64,
) -> Result<CellResult> {
    let cfg = ExperimentConfig {
        scheme: Some(scheme),
        rule,
        ..ExperimentConfig::gaps(vec![n], vec![p], Vec::new(), trials, seed)
    };
    let mut r = run_sweep(&cfg)?;
    Ok(r.cells.remove(0))
}

/// One gap evaluated during a threshold scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub delta: f64,
    pub trials: u64,
    pub win1: u64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    /// Whether the Wilson lower bound reaches the target.
    pub success: bool,
}

/// Bracket `(lower, upper]` for the smallest gap whose color-1 win
/// probability reaches the target.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub n: usize,
    pub p: f64,
    pub target: f64,
    /// Largest failing gap below `upper`; `None` when no such gap was seen.
    pub lower: Option<f64>,
    /// Smallest succeeding gap above every failure; `None` when even the
    /// largest gap fails.
    pub upper: Option<f64>,
    /// Whether some failure was seen above a success.
    pub non_monotone: bool,
    pub points: Vec<ScanPoint>,
}

impl ScanResult {
    /// Whether `delta` lies in `(lower, upper]`.
    pub fn contains(&self, delta: f64) -> bool {
        self.lower.is_none_or(|l| l < delta) && self.upper.is_none_or(|u| delta <= u)
    }
}

/// Bisection over the admissible gaps `delta0, delta0 + 1, ..., n/2` for
/// the smallest one whose Wilson lower bound reaches `target`.
pub fn threshold_scan(
    n: usize,
    p: f64,
    rule: UpdateRule,
    trials: u64,
    target: f64,
    seed: u64,
    cap: CapPolicy,
) -> Result<ScanResult> {
    if !(target > 0.5 && target < 1.0) {
        return Err(Error::InvalidArgument(format!("target {target} must lie in (0.5, 1)")));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    check_probability(p)?;
    let cap = cap.cap(n, p)?;
    let base = (n % 2) as u64;
    let top = n as u64;
    let mut points: Vec<ScanPoint> = Vec::new();
    let mut eval = |twice: u64| -> Result<bool> {
        if let Some(pt) = points.iter().find(|pt| pt.delta == twice as f64 / 2.0) {
            return Ok(pt.success);
        }
        let cell = Cell {
            id: twice,
            n,
            p,
            scheme: ColoringScheme::FixedGap { twice_delta: twice },
            rule,
            cap,
            seed: rng::derive_seed(seed, twice),
        };
        let t = run_range(&cell, 0..trials)?;
        let (lo, hi) = wilson_interval(t.win1, t.trials, Z95);
        let success = lo >= target;
        points.push(ScanPoint {
            delta: twice as f64 / 2.0,
            trials,
            win1: t.win1,
            wilson_lo: lo,
            wilson_hi: hi,
            success,
        });
        Ok(success)
    };
    // Gaps are indexed by twice_delta in steps of 2.
    if !eval(base)? && eval(top)? {
        let (mut lo, mut hi) = (base, top);
        while hi - lo > 2 {
            let mid = lo + (hi - lo) / 4 * 2;
            if eval(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    points.sort_by(|a, b| a.delta.total_cmp(&b.delta));
    let first_success = points.iter().find(|pt| pt.success).map(|pt| pt.delta);
    let last_failure = points.iter().rev().find(|pt| !pt.success).map(|pt| pt.delta);
    let non_monotone = matches!((first_success, last_failure), (Some(s), Some(f)) if f > s);
    let upper = match last_failure {
        Some(f) => points.iter().find(|pt| pt.success && pt.delta > f).map(|pt| pt.delta),
        None => first_success,
    };
    let lower = match first_success {
        Some(s) => points
            .iter()
            .rev()
            .find(|pt| !pt.success && pt.delta < s)
            .map(|pt| pt.delta),
        None => last_failure,
    };
    Ok(ScanResult {
        n,
        p,
        target,
        lower,
        upper,
        non_monotone,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_contains_phat_and_is_clamped() {
        let (lo, hi) = wilson_interval(30, 100, Z95);
        assert!(lo < 0.3 && 0.3 < hi);
        let (lo, hi) = wilson_interval(100, 100, Z95);
        assert!(lo > 0.95 && hi == 1.0);
        assert_eq!(wilson_interval(0, 0, Z95), (0.0, 1.0));
    }

    #[test]
    fn monochromatic_start_wins_on_day_zero() {
        let cfg = ExperimentConfig::gaps(vec![50], vec![0.2], vec![25.0], 20, 3);
        let r = run_sweep(&cfg).unwrap();
        let c = &r.cells[0];
        assert_eq!((c.win1, c.trials), (20, 20));
        assert_eq!(c.mean_days, Some(0.0));
    }

    #[test]
    fn tallies_add_up() {
        let cfg = ExperimentConfig::gaps(vec![40, 41], vec![0.1, 0.3], vec![0.0, 0.5, 2.0, 2.5], 50, 9);
        let err = run_sweep(&cfg);
        assert!(err.is_err(), "parity mismatch must be rejected");
        let cfg = ExperimentConfig::gaps(vec![40], vec![0.1, 0.3], vec![0.0, 2.0], 50, 9);
        for c in run_sweep(&cfg).unwrap().cells {
            assert_eq!(c.win1 + c.win2 + c.cycles + c.cap_hits, c.trials);
        }
    }

    #[test]
    fn random_biased_all_one() {
        let c = scheme_experiment(
            SchemePreset::RandomBiased { q1: 1.0 },
            30,
            0.3,
            UpdateRule::Standard,
            10,
            1,
        )
        .unwrap();
        assert_eq!(c.win1, 10);
        assert_eq!(c.majority_wins, 10);
    }

    #[test]
    fn complete_graph_scan_brackets_one_half() {
        let r = threshold_scan(20, 1.0, UpdateRule::Standard, 60, 0.9, 0, CapPolicy::Fixed { cap: 5 }).unwrap();
        assert!(r.contains(0.5), "{r:?}");
        assert_eq!(r.upper, Some(1.0));
    }
}
