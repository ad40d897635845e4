//! Shared helpers for the integration suites: first-principles Weibull
//! densities, independent quadrature, and KS statistics. Everything here is
//! deliberately reimplemented from scratch so the suites can act as oracles
//! for the library.
#![allow(dead_code)]

use std::path::PathBuf;

use mobw::data::{CensoringScheme, CompetingRisksDataset};
use mobw::distributions::Cause;
use mobw::samplers::{AlphaMarginal, PriorSpec};

pub fn data_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/retinopathy.csv")
}

/// The bundled real dataset, converted from days to years.
pub fn bundled_dataset() -> CompetingRisksDataset {
    CompetingRisksDataset::from_csv(data_path(), 365.0, CensoringScheme::Complete, None)
        .expect("bundled dataset loads")
}

/// Rate-form Weibull density `alpha lam t^(alpha-1) exp(-lam t^alpha)`.
pub fn weib_pdf(t: f64, alpha: f64, lam: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    alpha * lam * t.powf(alpha - 1.0) * (-lam * t.powf(alpha)).exp()
}

/// Rate-form Weibull survival `exp(-lam t^alpha)`.
pub fn weib_sf(t: f64, alpha: f64, lam: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    (-lam * t.powf(alpha)).exp()
}

/// Composite Simpson rule with `n` panels (`n` is rounded up to even).
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = if n.is_multiple_of(2) { n } else { n + 1 };
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// One-sample KS statistic of `xs` against `cdf` (textbook form, evaluated
/// at every order statistic with both one-sided gaps).
pub fn ks_one_sample(xs: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = xs.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    d
}

/// Two-sample KS statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_by(|u, v| u.partial_cmp(v).unwrap());
    xb.sort_by(|u, v| u.partial_cmp(v).unwrap());
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        if xa[i] <= xb[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Brute-force 4-D midpoint-grid posterior means for a tiny complete
/// dataset, written directly from the latent-lifetimes factorization and the
/// raw prior densities. Serves as an independent oracle for the composition
/// sampler.
pub fn grid_posterior_means(
    times: &[f64],
    causes: &[Cause],
    prior: &PriorSpec,
    alpha_grid: (f64, f64, usize),
    lambda_grid: (f64, usize),
) -> [f64; 4] {
    let (a_lo, a_hi, a_n) = alpha_grid;
    let (l_hi, l_n) = lambda_grid;
    let gd = prior.gd();
    let (a, b) = (gd.a(), gd.b());
    let (a0, a1, a2) = (gd.a0(), gd.a1(), gd.a2());
    let abar = a0 + a1 + a2;
    let (c1, c2) = (prior.c1(), prior.c2());

    let mut w_sum = 0.0;
    let mut means = [0.0f64; 4];
    let da = (a_hi - a_lo) / a_n as f64;
    let dl = l_hi / l_n as f64;
    for ia in 0..a_n {
        let alpha = a_lo + (ia as f64 + 0.5) * da;
        // Per-observation powers reused across the lambda grid.
        let pow_t: Vec<f64> = times.iter().map(|t| t.powf(alpha)).collect();
        let log_t: Vec<f64> = times.iter().map(|t| t.ln()).collect();
        let log_prior_alpha = (c2 - 1.0) * alpha.ln() - c1 * alpha;
        for i0 in 0..l_n {
            let l0 = (i0 as f64 + 0.5) * dl;
            for i1 in 0..l_n {
                let l1 = (i1 as f64 + 0.5) * dl;
                for i2 in 0..l_n {
                    let l2 = (i2 as f64 + 0.5) * dl;
                    let ltot = l0 + l1 + l2;
                    // Likelihood: each observation contributes the density of
                    // its own latent cause at t and survival of the others.
                    let mut log_lik = 0.0;
                    for (k, cause) in causes.iter().enumerate() {
                        let fail_rate = match cause {
                            Cause::Both => l0,
                            Cause::First => l1,
                            Cause::Second => l2,
                        };
                        log_lik += alpha.ln() + fail_rate.ln() + (alpha - 1.0) * log_t[k]
                            - ltot * pow_t[k];
                    }
                    let log_prior_l = (a - abar) * ltot.ln() - b * ltot
                        + (a0 - 1.0) * l0.ln()
                        + (a1 - 1.0) * l1.ln()
                        + (a2 - 1.0) * l2.ln();
                    let w = (log_lik + log_prior_l + log_prior_alpha + 10.0).exp();
                    w_sum += w;
                    means[0] += w * alpha;
                    means[1] += w * l0;
                    means[2] += w * l1;
                    means[3] += w * l2;
                }
            }
        }
    }
    for m in &mut means {
        *m /= w_sum;
    }
    means
}

/// Largest central second difference of the log shape-marginal over a
/// log-spaced grid on [0.05, 10]; nonpositive (up to rounding) means the
/// density is numerically log-concave.
pub fn concavity_max_second_diff(data: &CompetingRisksDataset, prior: &PriorSpec) -> f64 {
    let marginal = AlphaMarginal::new(prior, data).expect("marginal builds");
    let h = |x: f64| marginal.log_density(x).expect("marginal evaluates");
    let mut worst = f64::NEG_INFINITY;
    for i in 0..200 {
        let alpha = 0.05 * (10.0f64 / 0.05).powf(i as f64 / 199.0);
        let d = alpha * 1e-3;
        worst = worst.max(h(alpha - d) - 2.0 * h(alpha) + h(alpha + d));
    }
    worst
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn sd(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() as f64 - 1.0)).sqrt()
}
