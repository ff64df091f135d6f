//! Majority dynamics on Erdős–Rényi random graphs.
//!
//! The crate bundles a bit-parallel simulator for synchronous majority
//! dynamics (and a biased variant), exact structural set computations, an
//! exhaustive small-`n` oracle, a probability toolkit with inequality
//! checks, p-biased Fourier analysis of day-1 indicators, and a seeded,
//! thread-count independent Monte Carlo harness.
//!
//! ```
//! use majlab_core::{sample_gnp, run, ColoringScheme, GraphParams, UpdateRule};
//!
//! let params = GraphParams { n: 200, p: 0.1, seed: 7 };
//! let g = sample_gnp(&params, &ColoringScheme::fixed_gap(20.0).unwrap()).unwrap();
//! let trace = run(&g, UpdateRule::Standard, 40);
//! assert!(!trace.counts.is_empty());
//! ```

pub mod appendix;
pub mod dynamics;
pub mod error;
pub mod exact;
pub mod fourier;
pub mod graph;
pub mod harness;
pub mod identities;
pub mod oracle;
pub mod prob;
pub mod report;
pub mod rng;
pub mod structural;
pub mod theory;

pub use dynamics::{
    cap_with, default_cap, next_colors, run, run_to_end, step, DayCount, DynamicsTrace, Termination, UpdateRule,
};
pub use error::{Error, Result};
pub use graph::{
    degree_split, pair_list, parse_colors, sample_adjacency, sample_gnp, sample_gnp_with, Adjacency, Color,
    ColoredGraph, ColoringScheme, GraphParams, GraphSnapshot,
};
pub use prob::{
    bindiff_cdf, bindiff_ge, bindiff_pmf, binom_pmf, normal_cdf, normal_cdf0, normal_pdf, BinDiffDist, C_BE,
};
pub use structural::{
    check_day2_identity, compute_r_hat, compute_s_sets, day2_identity_sides, SPart, StructuralReport,
};
