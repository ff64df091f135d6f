use std::fs;

use majlab_core::exact::q;
use majlab_core::harness::{
    run_sweep, threshold_scan, CapPolicy, ExperimentConfig, CHECKPOINT_FILE, RESULTS_FILE, SUMMARY_FILE,
};
use majlab_core::oracle::{Oracle, OracleP, Statistic};
use majlab_core::rng::{derive_seed, split};
use majlab_core::{parse_colors, run, sample_gnp_with, Color, ColoringScheme, Termination, UpdateRule};

fn small_sweep(dir: &std::path::Path, workers: usize) -> Vec<u8> {
    let cfg = ExperimentConfig {
        output: Some(dir.to_path_buf()),
        workers: Some(workers),
        ..ExperimentConfig::gaps(vec![60, 80], vec![0.1, 0.2], vec![0.0, 2.0, 5.0], 300, 77)
    };
    run_sweep(&cfg).unwrap();
    fs::read(dir.join(RESULTS_FILE)).unwrap()
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let tmp = tempfile::tempdir().unwrap();
    let outputs: Vec<Vec<u8>> = [1, 4, 16]
        .iter()
        .map(|&w| small_sweep(&tmp.path().join(format!("w{w}")), w))
        .collect();
    assert!(!outputs[0].is_empty());
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
}

#[test]
fn outputs_have_the_documented_shape() {
    let tmp = tempfile::tempdir().unwrap();
    let jsonl = small_sweep(tmp.path(), 2);
    assert_eq!(String::from_utf8(jsonl).unwrap().lines().count(), 12);
    let csv = fs::read_to_string(tmp.path().join(SUMMARY_FILE)).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "cell_id,n,p,delta,trials,win1,win2,cycles,cap_hits,p_hat,wilson_lo,wilson_hi,mean_days"
    );
    assert_eq!(csv.lines().count(), 13);
}

#[test]
fn resumed_sweep_matches_an_uninterrupted_one() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig {
        output: Some(tmp.path().to_path_buf()),
        ..ExperimentConfig::gaps(vec![16], vec![0.3], vec![0.0, 1.0], 25_000, 5)
    };
    let full = run_sweep(&cfg).unwrap();
    let results = fs::read(tmp.path().join(RESULTS_FILE)).unwrap();
    let ckpt = tmp.path().join(CHECKPOINT_FILE);
    let lines: Vec<String> = fs::read_to_string(&ckpt).unwrap().lines().map(String::from).collect();
    // Header plus three progress lines per cell.
    assert_eq!(lines.len(), 7);
    // Keep the header, the first cell's first checkpoint and a torn line.
    fs::write(&ckpt, format!("{}\n{}\n{{\"cell_id\":1,\"tal", lines[0], lines[1])).unwrap();
    fs::remove_file(tmp.path().join(RESULTS_FILE)).unwrap();
    let resumed = run_sweep(&ExperimentConfig {
        resume: true,
        ..cfg.clone()
    })
    .unwrap();
    assert_eq!(resumed, full);
    assert_eq!(fs::read(tmp.path().join(RESULTS_FILE)).unwrap(), results);

    let other = ExperimentConfig {
        master_seed: 6,
        resume: true,
        ..cfg
    };
    assert!(
        run_sweep(&other).is_err(),
        "checkpoints of another config must be rejected"
    );
}

#[test]
fn swapping_colors_swaps_the_winner() {
    let scheme = ColoringScheme::fixed_gap(0.0).unwrap();
    let seed = derive_seed(4, 0);
    let mut decided = 0;
    for t in 0..300 {
        let g = sample_gnp_with(100, 0.2, &scheme, &mut split(seed, t)).unwrap();
        let swapped = g.with_colors(g.colors().iter().map(|c| c.other()).collect()).unwrap();
        let a = run(&g, UpdateRule::Standard, 40).termination;
        let b = run(&swapped, UpdateRule::Standard, 40).termination;
        match (a, b) {
            (Termination::Unanimity { winner: w1, day: d1 }, Termination::Unanimity { winner: w2, day: d2 }) => {
                assert_eq!((w1.other(), d1), (w2, d2));
                decided += 1;
            }
            (x, y) => assert_eq!(x, y),
        }
    }
    assert!(decided >= 150, "only {decided} of 300 runs reached unanimity");
}

#[test]
fn win_probability_never_certifiably_decreases_in_the_gap() {
    let cfg = ExperimentConfig::gaps(vec![200], vec![0.05], vec![0.0, 1.0, 2.0, 4.0, 8.0, 16.0], 400, 8);
    let r = run_sweep(&cfg).unwrap();
    assert!(
        r.monotonicity_violations().is_empty(),
        "{:?}",
        r.monotonicity_violations()
    );
    assert!(r.cells.last().unwrap().p_hat > r.cells[0].p_hat);
}

#[test]
fn five_vertex_cell_matches_the_oracle() {
    let cfg = ExperimentConfig {
        cap: CapPolicy::Fixed { cap: 32 },
        ..ExperimentConfig::gaps(vec![5], vec![0.5], vec![0.5], 40_000, 12)
    };
    let cell = run_sweep(&cfg).unwrap().cells.remove(0);
    let oracle = Oracle::new(5, parse_colors("11122").unwrap()).unwrap();
    let exact = oracle
        .eval(
            &OracleP::Exact(q(1, 2)),
            &Statistic::WinProb {
                color: Color::One,
                rule: UpdateRule::Standard,
                cap: Some(32),
            },
        )
        .unwrap()
        .value;
    let se = (exact * (1.0 - exact) / cell.trials as f64).sqrt();
    assert!((cell.p_hat - exact).abs() <= 4.0 * se, "{} vs {exact}", cell.p_hat);
}

#[test]
fn scan_at_zero_gap_excludes_zero() {
    let r = threshold_scan(200, 0.05, UpdateRule::Standard, 200, 0.9, 3, CapPolicy::Default).unwrap();
    assert!(!r.contains(0.0), "{r:?}");
    assert!(r.upper.is_some());
}
