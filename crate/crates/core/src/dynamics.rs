//! Synchronous majority dynamics and its biased variant.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Color, ColoredGraph};

/// Vertex counts above which a step is split across threads.
const PARALLEL_STEP_MIN_N: usize = 2048;

/// Update rule applied by every vertex each day.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpdateRule {
    /// Adopt the strict majority color of the neighborhood, keep on ties.
    #[default]
    Standard,
    /// Color 1 if `d1 > d2 - 1`, color 2 if `d1 < d2 - 1`, keep if equal.
    Biased,
}

impl UpdateRule {
    /// Next color of a vertex with color `current` and neighbor split
    /// `(d1, d2)`.
    pub fn next_color(self, current: Color, d1: usize, d2: usize) -> Color {
        let shift = match self {
            UpdateRule::Standard => 0,
            UpdateRule::Biased => 1,
        };
        match (d1 + shift).cmp(&d2) {
            std::cmp::Ordering::Greater => Color::One,
            std::cmp::Ordering::Less => Color::Two,
            std::cmp::Ordering::Equal => current,
        }
    }
}

impl std::str::FromStr for UpdateRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(UpdateRule::Standard),
            "biased" => Ok(UpdateRule::Biased),
            other => Err(Error::InvalidArgument(format!("unknown rule {other:?}"))),
        }
    }
}

/// Colors of every vertex after one synchronous day.
pub fn next_colors(g: &ColoredGraph, rule: UpdateRule) -> Vec<Color> {
    let update = |v: usize| {
        let d1 = g.color_one_neighbors(v);
        rule.next_color(g.color(v), d1, g.degree(v) - d1)
    };
    if g.n() >= PARALLEL_STEP_MIN_N {
        (0..g.n()).into_par_iter().map(update).collect()
    } else {
        (0..g.n()).map(update).collect()
    }
}

/// One synchronous day. The input is untouched; the output shares its
/// adjacency.
pub fn step(g: &ColoredGraph, rule: UpdateRule) -> ColoredGraph {
    g.with_colors(next_colors(g, rule))
        .expect("coloring length matches by construction")
}

/// How a run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Termination {
    /// Every vertex holds `winner` from `day` on.
    Unanimity { winner: Color, day: u32 },
    /// The configuration repeats with period one or two starting at
    /// `entered_day`.
    TwoCycle { entered_day: u32 },
    /// Neither happened within `cap` days.
    CapReached { cap: u32 },
}

/// Color-1 count on one day.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DayCount {
    pub day: u32,
    pub c1: usize,
}

/// Per-day color counts of a run and how it ended.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynamicsTrace {
    pub n: usize,
    pub rule: UpdateRule,
    pub counts: Vec<DayCount>,
    pub termination: Termination,
}

#[derive(Serialize)]
struct TraceFooter<'a> {
    n: usize,
    rule: UpdateRule,
    days: u32,
    termination: &'a Termination,
}

impl DynamicsTrace {
    /// Last executed day.
    pub fn last_day(&self) -> u32 {
        self.counts.last().map_or(0, |c| c.day)
    }

    /// Writes `day,c1,c2` rows followed by one `# {json}` footer line
    /// carrying the termination metadata.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["day", "c1", "c2"])?;
            for c in &self.counts {
                w.serialize((c.day, c.c1, self.n - c.c1))?;
            }
            w.flush()?;
        }
        let footer = TraceFooter {
            n: self.n,
            rule: self.rule,
            days: self.last_day(),
            termination: &self.termination,
        };
        writeln!(out, "# {}", serde_json::to_string(&footer)?)?;
        Ok(())
    }
}

/// Default day cap `ceil(10 ln n / ln(np)) + 10`.
pub fn default_cap(n: f64, p: f64) -> Result<u32> {
    cap_with(n, p, 10.0, 10)
}

/// Day cap `ceil(c * ln n / ln(np)) + c0`; requires `np > 1`.
pub fn cap_with(n: f64, p: f64, c: f64, c0: u32) -> Result<u32> {
    let np = n * p;
    if np.is_nan() || np <= 1.0 {
        return Err(Error::Subcritical(np));
    }
    // Round away tiny representation error so that exact ratios such as
    // ln(1e4)/ln(100) = 2 are not pushed up by one.
    let ratio = c * n.ln() / np.ln();
    let rounded = (ratio * 1e9).round() / 1e9;
    Ok(rounded.ceil() as u32 + c0)
}

fn is_stable_unanimity(g: &ColoredGraph, rule: UpdateRule) -> Option<Color> {
    let winner = g.unanimous()?;
    match rule {
        UpdateRule::Standard => Some(winner),
        // Under the biased rule an all-2 state is left by isolated vertices.
        UpdateRule::Biased => (next_colors(g, rule) == g.colors()).then_some(winner),
    }
}

/// Runs the dynamics for at most `cap` days, also returning the final state.
pub fn run_to_end(g: &ColoredGraph, rule: UpdateRule, cap: u32) -> (DynamicsTrace, ColoredGraph) {
    let mut counts = vec![DayCount {
        day: 0,
        c1: g.counts().0,
    }];
    let finish = |counts, termination, state| {
        (
            DynamicsTrace {
                n: g.n(),
                rule,
                counts,
                termination,
            },
            state,
        )
    };
    if let Some(winner) = is_stable_unanimity(g, rule) {
        return finish(counts, Termination::Unanimity { winner, day: 0 }, g.clone());
    }
    let mut before: Option<ColoredGraph> = None;
    let mut current = g.clone();
    for day in 1..=cap {
        let next = step(&current, rule);
        counts.push(DayCount {
            day,
            c1: next.counts().0,
        });
        if let Some(winner) = is_stable_unanimity(&next, rule) {
            return finish(counts, Termination::Unanimity { winner, day }, next);
        }
        if next.color_one_mask() == current.color_one_mask() {
            return finish(counts, Termination::TwoCycle { entered_day: day - 1 }, next);
        }
        if before
            .as_ref()
            .is_some_and(|b| b.color_one_mask() == next.color_one_mask())
        {
            return finish(counts, Termination::TwoCycle { entered_day: day - 2 }, next);
        }
        before = Some(current);
        current = next;
    }
    finish(counts, Termination::CapReached { cap }, current)
}

/// Runs the dynamics until unanimity, a repeat with period at most two,
/// or `cap` days.
pub fn run(g: &ColoredGraph, rule: UpdateRule, cap: u32) -> DynamicsTrace {
    run_to_end(g, rule, cap).0
}
