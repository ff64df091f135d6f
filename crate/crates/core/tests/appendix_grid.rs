use majlab_core::appendix::{verify_appendix_a, GridPreset};

#[test]
fn default_grid_has_enough_points_and_passes() {
    let report = verify_appendix_a(GridPreset::Default, 0);
    let tally = report.tally();
    for id in ["A.2", "A.3", "A.5", "A.6", "A.7", "A.8", "A.9", "A.10(i)", "A.10(ii)"] {
        let t = &tally[id];
        assert!(t.checked >= 200, "{id}: only {} checked points", t.checked);
        assert_eq!(t.failed, 0, "{id}: {t:?}");
    }
    for v in report.violations().iter().take(5) {
        eprintln!("{v:?}");
    }
    assert!(report.all_pass());
}
