//! End-to-end tests that drive the compiled `mobw` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/retinopathy.csv")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mobw"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_analyze(out: &Path, extra: &[&str]) -> Output {
    let data = data_path();
    let mut args = vec![
        "analyze",
        "--data",
        data.to_str().unwrap(),
        "--divisor",
        "365",
        "--draws",
        "1500",
        "--seed",
        "9",
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    run(&args)
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("reading {name}: {e}"))
}

/// Rows of a stamped table, without the `# manifest=` line or the header.
fn data_rows(text: &str) -> Vec<&str> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .skip(1)
        .collect()
}

/// The 16-hex manifest hash stamped on a table file.
fn stamp(text: &str) -> &str {
    text.lines()
        .next()
        .and_then(|l| l.strip_prefix("# manifest="))
        .expect("file starts with a manifest stamp")
}

fn field(row: &str, index: usize) -> f64 {
    row.split(',').nth(index).unwrap().parse().unwrap()
}

#[test]
fn analyze_writes_stamped_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_analyze(dir.path(), &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let estimates = read(dir.path(), "estimates.csv");
    let rows = data_rows(&estimates);
    assert_eq!(rows.len(), 4);
    let names: Vec<&str> = rows.iter().map(|r| r.split(',').next().unwrap()).collect();
    assert_eq!(names, ["alpha", "lambda0", "lambda1", "lambda2"]);
    for row in &rows {
        assert!(field(row, 1) > 0.0, "means are positive: {row}");
        assert!(field(row, 2) > 0.0, "variances are positive: {row}");
    }

    let intervals = read(dir.path(), "intervals.csv");
    // 4 parameters x 2 interval kinds x 3 default levels.
    assert_eq!(data_rows(&intervals).len(), 24);
    for row in data_rows(&intervals) {
        let (lower, upper, length) = (field(row, 3), field(row, 4), field(row, 5));
        assert!(lower < upper && (length - (upper - lower)).abs() < 1e-12, "{row}");
    }

    let fit = read(dir.path(), "fit.csv");
    let fit_rows = data_rows(&fit);
    assert_eq!(fit_rows.len(), 1);
    assert!(fit_rows[0].ends_with(",71"), "dataset has 71 observations");

    let manifest = read(dir.path(), "manifest.txt");
    assert!(manifest.contains("command=analyze"));
    assert!(manifest.contains("draws=1500"));
    assert!(manifest.contains("seed=9"));
    assert!(manifest.contains("divisor=365"));

    // Every artifact of the run carries the same configuration hash.
    let hash = manifest
        .lines()
        .last()
        .unwrap()
        .strip_prefix("manifest=")
        .unwrap();
    assert_eq!(stamp(&estimates), hash);
    assert_eq!(stamp(&intervals), hash);
    assert_eq!(stamp(&fit), hash);
}

#[test]
fn reruns_are_byte_identical_across_out_dirs() {
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    assert!(run_analyze(first.path(), &[]).status.success());
    assert!(run_analyze(second.path(), &[]).status.success());
    for name in ["estimates.csv", "intervals.csv", "fit.csv", "manifest.txt"] {
        assert_eq!(read(first.path(), name), read(second.path(), name), "{name}");
    }
}

#[test]
fn restricted_analysis_orders_the_cause_rates() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_analyze(dir.path(), &["--restricted"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let estimates = read(dir.path(), "estimates.csv");
    let rows = data_rows(&estimates);
    assert!(field(rows[2], 1) < field(rows[3], 1), "mean rate of cause 1 below cause 2");

    let intervals = read(dir.path(), "intervals.csv");
    let upper_of = |param: &str| {
        data_rows(&intervals)
            .into_iter()
            .find(|r| r.starts_with(&format!("{param},symmetric,0.95,")))
            .map(|r| field(r, 4))
            .unwrap()
    };
    assert!(upper_of("lambda1") < upper_of("lambda2"));
    assert!(read(dir.path(), "manifest.txt").contains("restricted=true"));
}

#[test]
fn bf_test_reports_the_closed_form_test() {
    let dir = tempfile::tempdir().unwrap();
    let data = data_path();
    let out = run(&[
        "bf-test",
        "--data",
        data.to_str().unwrap(),
        "--divisor",
        "365",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let bf = read(dir.path(), "bf.csv");
    let rows = data_rows(&bf);
    assert_eq!(rows.len(), 1);
    let cells: Vec<&str> = rows[0].split(',').collect();
    let log10_bf: f64 = cells[1].parse().unwrap();
    assert!((log10_bf - 32.3667).abs() < 0.01, "log10 BF {log10_bf}");
    assert_eq!(&cells[2..6], ["71", "10", "28", "33"]);
    assert_eq!(cells[6], "supports equal cause effects");
}

#[test]
fn plot_data_emits_monotone_cdfs() {
    let dir = tempfile::tempdir().unwrap();
    let data = data_path();
    let base = [
        "plot-data",
        "--data",
        data.to_str().unwrap(),
        "--divisor",
        "365",
        "--draws",
        "1500",
        "--seed",
        "9",
        "--out",
        dir.path().to_str().unwrap(),
    ];
    assert!(run(&base).status.success());

    let cdf = read(dir.path(), "cdf.csv");
    let rows = data_rows(&cdf);
    assert!(rows.len() > 50, "most of the 71 times are distinct");
    let mut last = (0.0, 0.0, 0.0);
    for row in &rows {
        let point = (field(row, 0), field(row, 1), field(row, 2));
        assert!(point.0 > last.0, "times strictly increase");
        assert!(point.1 >= last.1 && point.2 >= last.2, "both curves are monotone");
        assert!(point.2 >= 0.0 && point.2 <= 1.0);
        last = point;
    }
    assert_eq!(last.1, 1.0, "empirical CDF ends at one");

    let mut pooled = base.to_vec();
    pooled.push("--pooled");
    assert!(run(&pooled).status.success());
    let pooled_cdf = read(dir.path(), "cdf_pooled.csv");
    assert_eq!(data_rows(&pooled_cdf).len(), rows.len());
}

#[test]
fn missing_data_file_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "analyze",
        "--data",
        "/no/such/file.csv",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.starts_with("error:"), "{stderr}");
    assert!(stderr.contains("/no/such/file.csv"), "{stderr}");
    assert_eq!(stderr.trim_end().lines().count(), 1, "single-line report");
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.conf");
    std::fs::write(
        &config,
        format!(
            "# analysis settings\ndata = {}\ndivisor = 365\ndraws = 800\nseed = 5\n",
            data_path().display()
        ),
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&[
        "analyze",
        "--config",
        config.to_str().unwrap(),
        "--draws",
        "1200",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let manifest = read(&out_dir, "manifest.txt");
    assert!(manifest.contains("draws=1200"), "command line wins");
    assert!(manifest.contains("seed=5"), "config fills the rest");
    assert!(manifest.contains("divisor=365"));
}

#[test]
fn simulate_writes_a_study_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "simulate",
        "--n",
        "20",
        "--replications",
        "10",
        "--draws",
        "300",
        "--seed",
        "3",
        "--levels",
        "0.95",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let study = read(dir.path(), "study.csv");
    let header = study.lines().nth(1).unwrap();
    assert!(header.contains("avg_estimate") && header.contains("coverage_hpd_95"));
    let rows = data_rows(&study);
    assert_eq!(rows.len(), 4);
    let truths: Vec<f64> = rows.iter().map(|r| field(r, 1)).collect();
    assert_eq!(truths, [2.0, 0.5, 1.0, 1.2], "default truth is recorded");
    for row in &rows {
        assert!(field(row, 3) > 0.0, "mse is positive: {row}");
    }
    let manifest = read(dir.path(), "manifest.txt");
    assert!(manifest.contains("command=simulate"));
    assert!(manifest.contains("replications=10"));
}

#[test]
fn invalid_scheme_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let data = data_path();
    let out = run(&[
        "analyze",
        "--data",
        data.to_str().unwrap(),
        "--scheme",
        "type-iii:x=1",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("unknown censoring scheme"), "{stderr}");
}

#[test]
fn bf_test_requires_complete_data() {
    let dir = tempfile::tempdir().unwrap();
    let data = data_path();
    let out = run(&[
        "bf-test",
        "--data",
        data.to_str().unwrap(),
        "--divisor",
        "365",
        "--scheme",
        "type-i:tau=5",
        "--n-total",
        "75",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("complete"), "{stderr}");
}
