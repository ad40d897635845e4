//! The four commands: resolve flags against the config file, validate, run
//! the library, and write stamped artifacts into the output directory.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use mobw::data::{CensoringScheme, CompetingRisksDataset};
use mobw::distributions::{GdParams, MobwParams};
use mobw::inference::{
    fitted_min_cdf, ks_test, log_bayes_factor, min_lifetime_cdf, pooled_weibull_fit, summarize,
    BfHypers, EstimateReport, IntervalKind, Parameter,
};
use mobw::samplers::{
    sample_posterior_restricted, sample_posterior_unrestricted, AlphaSampleMethod, PriorSpec,
};
use mobw::simulation::{run_study, StudyConfig};
use mobw::Parallelism;

use crate::config::FileConfig;
use crate::output::{write_table, Manifest};
use crate::scheme::parse_scheme;
use crate::{AnalyzeArgs, BfTestArgs, CommonArgs, DataArgs, PlotDataArgs, SimulateArgs};

/// Shared settings after flag/file/default resolution.
struct CommonRun {
    out: PathBuf,
    draws: usize,
    seed: u64,
    levels: Vec<f64>,
    levels_text: String,
    method: AlphaSampleMethod,
    method_name: String,
    parallelism: Parallelism,
    sequential: bool,
    prior: PriorSpec,
    /// (a, b, a0, a1, a2, c1, c2) exactly as configured, for the manifest.
    prior_raw: [f64; 7],
}

fn load_config(common: &CommonArgs) -> Result<FileConfig> {
    match &common.config {
        Some(path) => FileConfig::load(path),
        None => Ok(FileConfig::empty()),
    }
}

fn resolve_common(args: &CommonArgs, cfg: &FileConfig, default_draws: usize) -> Result<CommonRun> {
    let out = args
        .out
        .clone()
        .or_else(|| cfg.get_str("out").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let draws = cfg.pick(args.draws, "draws", default_draws)?;
    let seed = cfg.pick(args.seed, "seed", 0)?;
    let levels_text = args
        .levels
        .clone()
        .or_else(|| cfg.get_str("levels").map(str::to_string))
        .unwrap_or_else(|| "0.90,0.95,0.99".to_string());
    let levels = parse_levels(&levels_text)?;
    let method_name = args
        .method
        .clone()
        .or_else(|| cfg.get_str("method").map(str::to_string))
        .unwrap_or_else(|| "ars".to_string());
    let method = match method_name.to_ascii_lowercase().as_str() {
        "ars" => AlphaSampleMethod::AdaptiveRejection,
        "rou" => AlphaSampleMethod::RatioOfUniforms,
        other => bail!("unknown sampling method `{other}` (expected ars or rou)"),
    };
    let sequential = cfg.pick_flag(args.sequential, "sequential")?;
    let parallelism = if sequential {
        Parallelism::Sequential
    } else {
        Parallelism::default()
    };
    let a = cfg.pick(args.prior_a, "prior_a", 0.001)?;
    let b = cfg.pick(args.prior_b, "prior_b", 0.001)?;
    let a0 = cfg.pick(args.prior_a0, "prior_a0", 1.0)?;
    let a1 = cfg.pick(args.prior_a1, "prior_a1", 1.0)?;
    let a2 = cfg.pick(args.prior_a2, "prior_a2", 1.0)?;
    let c1 = cfg.pick(args.prior_c1, "prior_c1", 0.001)?;
    let c2 = cfg.pick(args.prior_c2, "prior_c2", 0.001)?;
    let prior = PriorSpec::new(GdParams::new(a, b, a0, a1, a2)?, c1, c2)?;
    Ok(CommonRun {
        out,
        draws,
        seed,
        levels,
        levels_text,
        method,
        method_name: method_name.to_ascii_lowercase(),
        parallelism,
        sequential,
        prior,
        prior_raw: [a, b, a0, a1, a2, c1, c2],
    })
}

fn parse_levels(text: &str) -> Result<Vec<f64>> {
    let levels: Vec<f64> = text
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .with_context(|| format!("credible level `{part}`"))
        })
        .collect::<Result<_>>()?;
    if levels.is_empty() {
        bail!("at least one credible level is required");
    }
    for &level in &levels {
        if !(level > 0.0 && level < 1.0) {
            bail!("credible level {level} is outside (0, 1)");
        }
    }
    Ok(levels)
}

/// Input dataset settings after resolution.
struct DataRun {
    path: PathBuf,
    divisor: f64,
    scheme: CensoringScheme,
    n_total: Option<usize>,
}

fn resolve_data(args: &DataArgs, cfg: &FileConfig) -> Result<DataRun> {
    let path = args
        .data
        .clone()
        .or_else(|| cfg.get_str("data").map(PathBuf::from))
        .context("no input file: pass --data or set `data` in the config")?;
    let divisor = cfg.pick(args.divisor, "divisor", 1.0)?;
    let scheme_text = args
        .scheme
        .clone()
        .or_else(|| cfg.get_str("scheme").map(str::to_string))
        .unwrap_or_else(|| "complete".to_string());
    let scheme = parse_scheme(&scheme_text)?;
    let n_total = cfg.pick_opt(args.n_total, "n_total")?;
    Ok(DataRun { path, divisor, scheme, n_total })
}

fn load_dataset(run: &DataRun) -> Result<CompetingRisksDataset> {
    CompetingRisksDataset::from_csv(&run.path, run.divisor, run.scheme.clone(), run.n_total)
        .with_context(|| format!("loading {}", run.path.display()))
}

fn stamp_common(manifest: &mut Manifest, run: &CommonRun) {
    manifest.set("draws", run.draws);
    manifest.set("seed", run.seed);
    manifest.set("levels", &run.levels_text);
    manifest.set("method", &run.method_name);
    manifest.set("sequential", run.sequential);
    let [a, b, a0, a1, a2, c1, c2] = run.prior_raw;
    manifest.set("prior_a", a);
    manifest.set("prior_b", b);
    manifest.set("prior_a0", a0);
    manifest.set("prior_a1", a1);
    manifest.set("prior_a2", a2);
    manifest.set("prior_c1", c1);
    manifest.set("prior_c2", c2);
}

fn stamp_data(manifest: &mut Manifest, run: &DataRun) {
    manifest.set("data", run.path.display());
    manifest.set("divisor", run.divisor);
    manifest.set("scheme", &run.scheme);
    if let Some(n_total) = run.n_total {
        manifest.set("n_total", n_total);
    }
}

fn fit_posterior(
    data: &CompetingRisksDataset,
    common: &CommonRun,
    restricted: bool,
) -> Result<EstimateReport> {
    let sample = if restricted {
        sample_posterior_restricted(
            data,
            &common.prior,
            common.method,
            common.draws,
            common.seed,
            common.parallelism,
        )?
    } else {
        sample_posterior_unrestricted(
            data,
            &common.prior,
            common.method,
            common.draws,
            common.seed,
            common.parallelism,
        )?
    };
    Ok(summarize(&sample, &common.levels)?)
}

pub fn analyze(args: AnalyzeArgs) -> Result<Vec<PathBuf>> {
    let cfg = load_config(&args.common)?;
    let common = resolve_common(&args.common, &cfg, 100_000)?;
    let data_run = resolve_data(&args.data, &cfg)?;
    let restricted = cfg.pick_flag(args.restricted, "restricted")?;
    let data = load_dataset(&data_run)?;

    let mut manifest = Manifest::new("analyze");
    stamp_common(&mut manifest, &common);
    stamp_data(&mut manifest, &data_run);
    manifest.set("restricted", restricted);
    let hash = manifest.hash();

    let report = fit_posterior(&data, &common, restricted)?;
    println!(
        "fitted {} draws (effective sample size {:.1})",
        report.draw_count, report.ess
    );

    let estimates = write_table(
        &common.out,
        "estimates.csv",
        &hash,
        "parameter,mean,variance",
        Parameter::ALL
            .into_iter()
            .map(|p| format!("{},{},{}", p.name(), report.mean(p), report.variance(p))),
    )?;

    let mut interval_rows = Vec::new();
    for p in Parameter::ALL {
        for kind in IntervalKind::ALL {
            for &level in &common.levels {
                let ci = report
                    .interval(p, kind, level)
                    .expect("every requested level is summarized");
                interval_rows.push(format!(
                    "{},{},{},{},{},{}",
                    p.name(),
                    kind.name(),
                    level,
                    ci.lower,
                    ci.upper,
                    ci.length()
                ));
            }
        }
    }
    let intervals = write_table(
        &common.out,
        "intervals.csv",
        &hash,
        "parameter,kind,level,lower,upper,length",
        interval_rows,
    )?;

    let ks = ks_test(&data, |t| {
        fitted_min_cdf(t, &report).expect("fitted CDF evaluates on observed times")
    })?;
    let fit_file = write_table(
        &common.out,
        "fit.csv",
        &hash,
        "ks_statistic,p_value,n_observations",
        [format!("{},{},{}", ks.statistic, ks.p_value, ks.n)],
    )?;

    let manifest_file = manifest.write(&common.out)?;
    Ok(vec![estimates, intervals, fit_file, manifest_file])
}

pub fn plot_data(args: PlotDataArgs) -> Result<Vec<PathBuf>> {
    let cfg = load_config(&args.common)?;
    let common = resolve_common(&args.common, &cfg, 100_000)?;
    let data_run = resolve_data(&args.data, &cfg)?;
    let restricted = cfg.pick_flag(args.restricted, "restricted")?;
    let pooled = cfg.pick_flag(args.pooled, "pooled")?;
    let data = load_dataset(&data_run)?;

    let mut manifest = Manifest::new("plot-data");
    stamp_common(&mut manifest, &common);
    stamp_data(&mut manifest, &data_run);
    manifest.set("restricted", restricted);
    manifest.set("pooled", pooled);
    let hash = manifest.hash();

    let (fitted, file_name): (Box<dyn Fn(f64) -> f64>, &str) = if pooled {
        // The pooled model's prior mirrors the full-model prior.
        let [a, b, _, _, _, c1, c2] = common.prior_raw;
        let hypers = BfHypers::new(c1, c2, b, a)?;
        let pf = pooled_weibull_fit(
            &data,
            &hypers,
            common.method,
            common.draws,
            common.seed,
            common.parallelism,
        )?;
        println!("pooled fit: shape {:.4}, total rate {:.4}", pf.alpha, pf.lambda);
        (
            Box::new(move |t| min_lifetime_cdf(pf.alpha, pf.lambda, t)),
            "cdf_pooled.csv",
        )
    } else {
        let report = fit_posterior(&data, &common, restricted)?;
        (
            Box::new(move |t| fitted_min_cdf(t, &report).expect("fitted CDF evaluates")),
            "cdf.csv",
        )
    };

    let times: Vec<f64> = data.observations().iter().map(|o| o.time).collect();
    if times.is_empty() {
        bail!("dataset has no observed failures to plot");
    }
    // Right-continuous empirical CDF at the distinct observed times.
    let n_star = times.len() as f64;
    let mut rows = Vec::new();
    let mut i = 0;
    while i < times.len() {
        let t = times[i];
        let mut j = i;
        while j < times.len() && times[j] == t {
            j += 1;
        }
        rows.push(format!("{},{},{}", t, j as f64 / n_star, fitted(t)));
        i = j;
    }
    let cdf_file = write_table(
        &common.out,
        file_name,
        &hash,
        "t,empirical_cdf,fitted_cdf",
        rows,
    )?;
    let manifest_file = manifest.write(&common.out)?;
    Ok(vec![cdf_file, manifest_file])
}

pub fn bf_test(args: BfTestArgs) -> Result<Vec<PathBuf>> {
    let cfg = load_config(&args.common)?;
    let common = resolve_common(&args.common, &cfg, 100_000)?;
    let data_run = resolve_data(&args.data, &cfg)?;
    let data = load_dataset(&data_run)?;

    let d1 = cfg.pick(args.bf_d1, "bf_d1", 0.001)?;
    let d2 = cfg.pick(args.bf_d2, "bf_d2", 0.001)?;
    let d3 = cfg.pick(args.bf_d3, "bf_d3", 0.001)?;
    let d4 = cfg.pick(args.bf_d4, "bf_d4", 0.001)?;
    let hypers = BfHypers::new(d1, d2, d3, d4)?;

    let mut manifest = Manifest::new("bf-test");
    stamp_common(&mut manifest, &common);
    stamp_data(&mut manifest, &data_run);
    manifest.set("bf_d1", d1);
    manifest.set("bf_d2", d2);
    manifest.set("bf_d3", d3);
    manifest.set("bf_d4", d4);
    let hash = manifest.hash();

    let ln_bf = log_bayes_factor(&data, &common.prior, &hypers)?;
    let log10_bf = ln_bf / std::f64::consts::LN_10;
    // High values support the pooled null (equal cause effects); low values
    // reject it.
    let conclusion = if ln_bf > 0.0 {
        "supports equal cause effects"
    } else {
        "evidence against equal cause effects"
    };
    let (n, n0, n1, n2) = data.counts();
    println!("log10 Bayes factor {log10_bf:.4} ({conclusion})");

    let bf_file = write_table(
        &common.out,
        "bf.csv",
        &hash,
        "ln_bf,log10_bf,n,n0,n1,n2,conclusion",
        [format!("{ln_bf},{log10_bf},{n},{n0},{n1},{n2},{conclusion}")],
    )?;
    let manifest_file = manifest.write(&common.out)?;
    Ok(vec![bf_file, manifest_file])
}

pub fn simulate(args: SimulateArgs) -> Result<Vec<PathBuf>> {
    let cfg = load_config(&args.common)?;
    let common = resolve_common(&args.common, &cfg, 2_000)?;
    let alpha = cfg.pick(args.alpha, "alpha", 2.0)?;
    let lambda0 = cfg.pick(args.lambda0, "lambda0", 0.5)?;
    let lambda1 = cfg.pick(args.lambda1, "lambda1", 1.0)?;
    let lambda2 = cfg.pick(args.lambda2, "lambda2", 1.2)?;
    let n = cfg.pick(args.n, "n", 50)?;
    let replications = cfg.pick(args.replications, "replications", 1000)?;
    let scheme_text = args
        .scheme
        .clone()
        .or_else(|| cfg.get_str("scheme").map(str::to_string))
        .unwrap_or_else(|| "complete".to_string());
    let scheme = parse_scheme(&scheme_text)?;
    let restricted = cfg.pick_flag(args.restricted, "restricted")?;

    let truth = MobwParams::new(alpha, lambda0, lambda1, lambda2)?;
    let mut study = StudyConfig::new(truth, n, scheme);
    study.replications = replications;
    study.draws = common.draws;
    study.levels = common.levels.clone();
    study.restricted = restricted;
    study.method = common.method;
    study.prior = common.prior.clone();
    study.seed = common.seed;
    study.parallelism = common.parallelism;
    study.validate()?;

    let mut manifest = Manifest::new("simulate");
    stamp_common(&mut manifest, &common);
    manifest.set("alpha", alpha);
    manifest.set("lambda0", lambda0);
    manifest.set("lambda1", lambda1);
    manifest.set("lambda2", lambda2);
    manifest.set("n", n);
    manifest.set("replications", replications);
    manifest.set("scheme", &study.scheme);
    manifest.set("restricted", restricted);
    let hash = manifest.hash();

    let result = run_study(&study)?;
    println!(
        "completed {} replications ({} failed to fit)",
        result.completed, result.failed
    );

    let csv = result.to_csv();
    let mut lines = csv.lines().map(str::to_string);
    let header = lines.next().expect("study table has a header");
    let study_file = write_table(&common.out, "study.csv", &hash, &header, lines)?;
    let manifest_file = manifest.write(&common.out)?;
    Ok(vec![study_file, manifest_file])
}
