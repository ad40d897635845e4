//! Posterior summaries and model checks: point estimates, symmetric and
//! highest-posterior-density credible intervals (plain and
//! importance-weighted), the closed-form Bayes factor for testing equal
//! cause-specific rates, a cause-blind pooled Weibull fit, and a
//! Kolmogorov-Smirnov goodness-of-fit check of the fitted minimum-lifetime
//! distribution.

use statrs::function::gamma::ln_gamma;

use crate::data::CompetingRisksDataset;
use crate::data::CensoringScheme;
use crate::distributions::GdParams;
use crate::error::{Error, Result};
use crate::exec::Parallelism;
use crate::numeric::{adaptive_simpson, exp_clamped, find_positive_mode, kahan_sum};
use crate::samplers::{
    sample_alpha, AlphaMarginal, AlphaSampleMethod, PosteriorDraw, PriorSpec, WeightedSample,
};

/// The four model parameters, in reporting order.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Parameter {
    Alpha,
    Lambda0,
    Lambda1,
    Lambda2,
}

impl Parameter {
    pub const ALL: [Parameter; 4] = [
        Parameter::Alpha,
        Parameter::Lambda0,
        Parameter::Lambda1,
        Parameter::Lambda2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Parameter::Alpha => "alpha",
            Parameter::Lambda0 => "lambda0",
            Parameter::Lambda1 => "lambda1",
            Parameter::Lambda2 => "lambda2",
        }
    }

    /// Reads this parameter out of a posterior draw.
    pub fn extract(self, draw: &PosteriorDraw) -> f64 {
        match self {
            Parameter::Alpha => draw.alpha,
            Parameter::Lambda0 => draw.scales.lambda0,
            Parameter::Lambda1 => draw.scales.lambda1,
            Parameter::Lambda2 => draw.scales.lambda2,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum IntervalKind {
    Symmetric,
    Hpd,
}

impl IntervalKind {
    pub const ALL: [IntervalKind; 2] = [IntervalKind::Symmetric, IntervalKind::Hpd];

    pub fn name(self) -> &'static str {
        match self {
            IntervalKind::Symmetric => "symmetric",
            IntervalKind::Hpd => "hpd",
        }
    }
}

/// A credible interval; both bounds are members of the sampled values.
#[derive(Copy, Clone, Debug)]
pub struct CredibleInterval {
    pub lower: f64,
    pub upper: f64,
    /// Credibility level `1 - gamma`.
    pub level: f64,
    pub kind: IntervalKind,
}

impl CredibleInterval {
    pub fn length(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

fn validate_cri_inputs(
    values: &[f64],
    weights: Option<&[f64]>,
    gamma: f64,
) -> Result<()> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Domain(format!(
            "gamma must lie in (0, 1), got {gamma}"
        )));
    }
    let m = values.len();
    if (m as f64) < 1.0 / gamma {
        return Err(Error::InsufficientSample(format!(
            "need at least 1/gamma = {:.0} values for a {:.0}% interval, got {m}",
            (1.0 / gamma).ceil(),
            100.0 * (1.0 - gamma)
        )));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("values must be finite".into()));
    }
    if let Some(w) = weights {
        if w.len() != m {
            return Err(Error::Domain(format!(
                "{} weights for {m} values",
                w.len()
            )));
        }
        if w.iter().any(|&x| x < 0.0 || !x.is_finite()) {
            return Err(Error::Domain("weights must be finite and nonnegative".into()));
        }
        if kahan_sum(w.iter().copied()) <= 0.0 {
            return Err(Error::Domain("weights sum to zero".into()));
        }
    }
    Ok(())
}

/// Sorts values (carrying weights along) ascending.
fn sorted_with_weights(values: &[f64], weights: Option<&[f64]>) -> (Vec<f64>, Option<Vec<f64>>) {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).expect("finite"));
    let v = idx.iter().map(|&i| values[i]).collect();
    let w = weights.map(|w| idx.iter().map(|&i| w[i]).collect());
    (v, w)
}

/// Equal-tail credible interval.
///
/// Unweighted: order statistics at ranks `ceil(gamma/2 * M)` and
/// `floor((1-gamma/2) * M)` (1-indexed). Weighted: the values at the
/// smallest ranks whose cumulative weight reaches `gamma/2` and
/// `1 - gamma/2`.
pub fn symmetric_cri(
    values: &[f64],
    weights: Option<&[f64]>,
    gamma: f64,
) -> Result<CredibleInterval> {
    validate_cri_inputs(values, weights, gamma)?;
    let (v, w) = sorted_with_weights(values, weights);
    let m = v.len();
    let (lower, upper) = match w {
        None => {
            // Guard the rank arithmetic against floating-point drizzle like
            // 0.05 * 20 = 1.0000000000000002.
            let lo_rank = ((0.5 * gamma * m as f64) - 1e-9).ceil().max(1.0) as usize;
            let hi_rank = (((1.0 - 0.5 * gamma) * m as f64) + 1e-9).floor() as usize;
            if hi_rank < lo_rank || hi_rank > m {
                return Err(Error::InsufficientSample(format!(
                    "cannot form ranks ({lo_rank}, {hi_rank}) from {m} values"
                )));
            }
            (v[lo_rank - 1], v[hi_rank - 1])
        }
        Some(w) => {
            let total = kahan_sum(w.iter().copied());
            let first_reaching = |target: f64| -> usize {
                let mut cum = 0.0;
                let mut comp = 0.0;
                for (i, &wi) in w.iter().enumerate() {
                    let y = wi - comp;
                    let t = cum + y;
                    comp = (t - cum) - y;
                    cum = t;
                    if cum >= target - 1e-12 * total {
                        return i;
                    }
                }
                w.len() - 1
            };
            let lo = first_reaching(0.5 * gamma * total);
            let hi = first_reaching((1.0 - 0.5 * gamma) * total);
            (v[lo], v[hi.max(lo)])
        }
    };
    Ok(CredibleInterval {
        lower,
        upper,
        level: 1.0 - gamma,
        kind: IntervalKind::Symmetric,
    })
}

/// Highest-posterior-density credible interval: the shortest window of
/// order statistics carrying the required mass.
///
/// Unweighted: minimizes `v_(j + ceil((1-gamma) M)) - v_(j)`. Weighted: the
/// shortest `(v_(j1), v_(j2))` whose interior weight
/// `sum_{i=j1+1..=j2} w_(i)` reaches `1 - gamma`; with uniform weights this
/// reduces exactly to the unweighted rule. Ties break toward the smallest
/// start index.
pub fn hpd_cri(values: &[f64], weights: Option<&[f64]>, gamma: f64) -> Result<CredibleInterval> {
    validate_cri_inputs(values, weights, gamma)?;
    let (v, w) = sorted_with_weights(values, weights);
    let m = v.len();
    let (lower, upper) = match w {
        None => {
            let span = (((1.0 - gamma) * m as f64) - 1e-9).ceil() as usize;
            if span == 0 || span >= m {
                return Err(Error::InsufficientSample(format!(
                    "window of {span} order statistics from {m} values"
                )));
            }
            let mut best = 0;
            for j in 1..m - span {
                if v[j + span] - v[j] < v[best + span] - v[best] {
                    best = j;
                }
            }
            (v[best], v[best + span])
        }
        Some(w) => {
            // Prefix sums keep the two-pointer mass queries exact enough for
            // the uniform-weight case to reproduce the rank rule.
            let mut prefix = Vec::with_capacity(m + 1);
            prefix.push(0.0);
            {
                let mut cum = 0.0;
                let mut comp = 0.0;
                for &wi in &w {
                    let y = wi - comp;
                    let t = cum + y;
                    comp = (t - cum) - y;
                    cum = t;
                    prefix.push(cum);
                }
            }
            let total = prefix[m];
            let target = (1.0 - gamma) * total - 1e-9 * total;
            let mut best: Option<(usize, usize)> = None;
            let mut j2 = 0usize;
            for j1 in 0..m {
                if j2 < j1 {
                    j2 = j1;
                }
                while j2 + 1 < m && prefix[j2 + 1] - prefix[j1 + 1] < target {
                    j2 += 1;
                }
                if prefix[j2 + 1] - prefix[j1 + 1] < target {
                    break; // larger j1 only loses mass
                }
                let better = match best {
                    None => true,
                    Some((b1, b2)) => v[j2] - v[j1] < v[b2] - v[b1],
                };
                if better {
                    best = Some((j1, j2));
                }
            }
            let (j1, j2) = match best {
                Some(pair) => pair,
                None => {
                    // All candidate windows exclude their left atom; when a
                    // heavy first atom starves them, fall back to windows
                    // closed on the left.
                    let j2 = (0..m)
                        .find(|&j| prefix[j + 1] >= target)
                        .unwrap_or(m - 1);
                    (0, j2)
                }
            };
            (v[j1], v[j2])
        }
    };
    Ok(CredibleInterval {
        lower,
        upper,
        level: 1.0 - gamma,
        kind: IntervalKind::Hpd,
    })
}

/// Mean, variance and intervals for one parameter.
#[derive(Clone, Debug)]
pub struct ParamSummary {
    pub parameter: Parameter,
    pub mean: f64,
    pub variance: f64,
    pub intervals: Vec<CredibleInterval>,
}

/// Full posterior summary of a weighted sample.
#[derive(Clone, Debug)]
pub struct EstimateReport {
    pub params: Vec<ParamSummary>,
    pub draw_count: usize,
    pub ess: f64,
    pub restricted: bool,
}

impl EstimateReport {
    pub fn summary(&self, p: Parameter) -> &ParamSummary {
        &self.params[match p {
            Parameter::Alpha => 0,
            Parameter::Lambda0 => 1,
            Parameter::Lambda1 => 2,
            Parameter::Lambda2 => 3,
        }]
    }

    pub fn mean(&self, p: Parameter) -> f64 {
        self.summary(p).mean
    }

    pub fn variance(&self, p: Parameter) -> f64 {
        self.summary(p).variance
    }

    pub fn interval(&self, p: Parameter, kind: IntervalKind, level: f64) -> Option<&CredibleInterval> {
        self.summary(p)
            .intervals
            .iter()
            .find(|ci| ci.kind == kind && (ci.level - level).abs() < 1e-9)
    }

    /// Posterior mean of the total rate `lambda0 + lambda1 + lambda2`.
    pub fn total_rate_mean(&self) -> f64 {
        self.mean(Parameter::Lambda0) + self.mean(Parameter::Lambda1) + self.mean(Parameter::Lambda2)
    }
}

/// Weighted posterior means, variances and credible intervals (both kinds)
/// at every requested level.
///
/// Uniform-weight samples take the unweighted order-statistic paths, so the
/// published rank conventions apply verbatim to exact samples.
pub fn summarize(sample: &WeightedSample, levels: &[f64]) -> Result<EstimateReport> {
    if sample.len() < 2 {
        return Err(Error::InsufficientSample(
            "posterior summaries need at least two draws".into(),
        ));
    }
    for &level in levels {
        if !(level > 0.0 && level < 1.0) {
            return Err(Error::Domain(format!(
                "credibility levels must lie in (0,1), got {level}"
            )));
        }
    }
    let weights = sample.restricted.then_some(sample.weights.as_slice());
    let mut params = Vec::with_capacity(4);
    for p in Parameter::ALL {
        let values: Vec<f64> = sample.draws.iter().map(|d| p.extract(d)).collect();
        let (mean, variance) = match weights {
            Some(w) => {
                let mean = kahan_sum(values.iter().zip(w).map(|(&v, &wi)| wi * v));
                let var =
                    kahan_sum(values.iter().zip(w).map(|(&v, &wi)| wi * (v - mean) * (v - mean)));
                (mean, var)
            }
            None => {
                let m = values.len() as f64;
                let mean = kahan_sum(values.iter().copied()) / m;
                let var = kahan_sum(values.iter().map(|&v| (v - mean) * (v - mean))) / m;
                (mean, var)
            }
        };
        let mut intervals = Vec::with_capacity(levels.len() * 2);
        for &level in levels {
            let gamma = 1.0 - level;
            intervals.push(symmetric_cri(&values, weights, gamma)?);
            intervals.push(hpd_cri(&values, weights, gamma)?);
        }
        params.push(ParamSummary {
            parameter: p,
            mean,
            variance,
            intervals,
        });
    }
    Ok(EstimateReport {
        params,
        draw_count: sample.len(),
        ess: sample.ess(),
        restricted: sample.restricted,
    })
}

/// Means and variances only (no intervals).
pub fn point_estimates(sample: &WeightedSample) -> Result<EstimateReport> {
    summarize(sample, &[])
}

/// Prior hyperparameters of the cause-blind pooled Weibull model: shape
/// `alpha* ~ GA(d1, d2)` and rate `lambda* ~ GA(d3, d4)` (rate `d1`/`d3`,
/// shape `d2`/`d4` in the gamma parameterization used throughout).
#[derive(Copy, Clone, Debug)]
pub struct BfHypers {
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
}

impl BfHypers {
    pub fn new(d1: f64, d2: f64, d3: f64, d4: f64) -> Result<Self> {
        Error::require_positive("d1", d1)?;
        Error::require_positive("d2", d2)?;
        Error::require_positive("d3", d3)?;
        Error::require_positive("d4", d4)?;
        Ok(Self { d1, d2, d3, d4 })
    }

    pub fn noninformative() -> Self {
        Self {
            d1: 0.001,
            d2: 0.001,
            d3: 0.001,
            d4: 0.001,
        }
    }

    /// Whether these hypers satisfy the matching condition
    /// `d1 = c1, d2 = c2, d3 = b, d4 = a` that makes the closed-form Bayes
    /// factor exact.
    pub fn matches(&self, prior: &PriorSpec) -> bool {
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(y.abs());
        close(self.d1, prior.c1())
            && close(self.d2, prior.c2())
            && close(self.d3, prior.gd().b())
            && close(self.d4, prior.gd().a())
    }
}

/// Natural-log Bayes factor of the pooled single-risk Weibull model against
/// the full competing-risks model (testing equal cause-specific rates), in
/// closed form.
///
/// Requires complete data and the hyperparameter matching
/// `d1 = c1, d2 = c2, d3 = b, d4 = a`; under matching the shared
/// shape-integral cancels and only gamma functions of the counts remain.
pub fn log_bayes_factor(
    data: &CompetingRisksDataset,
    prior: &PriorSpec,
    hypers: &BfHypers,
) -> Result<f64> {
    if !matches!(data.scheme(), CensoringScheme::Complete) {
        return Err(Error::Scheme(
            "the Bayes factor is defined for complete data".into(),
        ));
    }
    if !hypers.matches(prior) {
        return Err(Error::HyperMismatch(format!(
            "closed-form Bayes factor requires d1=c1, d2=c2, d3=b, d4=a; got \
             d=({}, {}, {}, {}) against (c1, c2, b, a)=({}, {}, {}, {}). Use the \
             numeric mode for unmatched hyperparameters.",
            hypers.d1,
            hypers.d2,
            hypers.d3,
            hypers.d4,
            prior.c1(),
            prior.c2(),
            prior.gd().b(),
            prior.gd().a()
        )));
    }
    let (ns, n0, n1, n2) = data.counts();
    let n = ns as f64;
    let g = prior.gd();
    let (a, b, a0, a1, a2) = (g.a(), g.b(), g.a0(), g.a1(), g.a2());
    let abar = g.a_bar();
    let (c1, c2) = (prior.c1(), prior.c2());
    let BfHypers { d1, d2, d3, d4 } = *hypers;
    Ok(d2 * d1.ln() + d4 * d3.ln() + ln_gamma(n + d4)
        + ln_gamma(a0) + ln_gamma(a1) + ln_gamma(a2)
        + ln_gamma(n + abar) + ln_gamma(a) + ln_gamma(c2)
        - a * b.ln() - c2 * c1.ln()
        - ln_gamma(n0 as f64 + a0) - ln_gamma(n1 as f64 + a1) - ln_gamma(n2 as f64 + a2)
        - ln_gamma(n + a) - ln_gamma(abar) - ln_gamma(d2) - ln_gamma(d4))
}

/// Base-10 logarithm of the closed-form Bayes factor.
pub fn log10_bayes_factor(
    data: &CompetingRisksDataset,
    prior: &PriorSpec,
    hypers: &BfHypers,
) -> Result<f64> {
    Ok(log_bayes_factor(data, prior, hypers)? / std::f64::consts::LN_10)
}

/// `ln ∫ exp(h(alpha)) d alpha` for a unimodal log-integrand on `(0, inf)`,
/// by mode-shifted adaptive quadrature.
fn log_integral(h: &impl Fn(f64) -> f64) -> Result<f64> {
    let (mode, h_max) = find_positive_mode(h)?;
    let mut lo = mode;
    while lo > 1e-12 && h(0.5 * lo) > h_max - 45.0 {
        lo *= 0.5;
    }
    lo *= 0.5;
    let mut hi = mode;
    let mut tries = 0;
    while h(hi) > h_max - 45.0 {
        hi *= 2.0;
        tries += 1;
        if tries > 200 {
            return Err(Error::Domain(
                "log-integrand does not decay on the right".into(),
            ));
        }
    }
    let integral = adaptive_simpson(&|x| exp_clamped(h(x) - h_max), lo, hi, 1e-10);
    if integral <= 0.0 || integral.is_nan() {
        return Err(Error::Domain("quadrature returned a nonpositive mass".into()));
    }
    Ok(h_max + integral.ln())
}

/// Natural-log Bayes factor computed by one-dimensional quadrature of both
/// marginal likelihoods; valid for arbitrary (unmatched) hyperparameters.
pub fn log_bayes_factor_numeric(
    data: &CompetingRisksDataset,
    prior: &PriorSpec,
    hypers: &BfHypers,
) -> Result<f64> {
    if !matches!(data.scheme(), CensoringScheme::Complete) {
        return Err(Error::Scheme(
            "the Bayes factor is defined for complete data".into(),
        ));
    }
    let stats = data.stats();
    let (ns, n0, n1, n2) = data.counts();
    let n = ns as f64;
    let g = prior.gd();
    let (a, b, a0, a1, a2) = (g.a(), g.b(), g.a0(), g.a1(), g.a2());
    let abar = g.a_bar();

    // Full model: marginal likelihood = K1 * ∫ exp(h1), where h1 is the
    // unnormalized shape marginal and K1 collects the prior normalizers and
    // the rate integral's gamma functions.
    let full = AlphaMarginal::new(prior, data)?;
    let ln_k1 = a * b.ln() - ln_gamma(a) + ln_gamma(abar)
        - ln_gamma(a0) - ln_gamma(a1) - ln_gamma(a2)
        + prior.c2() * prior.c1().ln() - ln_gamma(prior.c2())
        + ln_gamma(n + a)
        + ln_gamma(n0 as f64 + a0) + ln_gamma(n1 as f64 + a1) + ln_gamma(n2 as f64 + a2)
        - ln_gamma(n + abar);
    let ln_m1 = ln_k1 + log_integral(&|x| full.log_density_unchecked(x))?;

    // Pooled model: identical structure with (c1, c2, a, b) = (d1, d2, d4, d3)
    // and the causes ignored.
    let pooled_prior = PriorSpec::new(
        GdParams::new(hypers.d4, hypers.d3, 1.0, 1.0, 1.0)?,
        hypers.d1,
        hypers.d2,
    )?;
    let pooled = AlphaMarginal::from_stats(pooled_prior, stats.clone())?;
    let ln_k0 = hypers.d4 * hypers.d3.ln() - ln_gamma(hypers.d4)
        + hypers.d2 * hypers.d1.ln() - ln_gamma(hypers.d2)
        + ln_gamma(n + hypers.d4);
    let ln_m0 = ln_k0 + log_integral(&|x| pooled.log_density_unchecked(x))?;

    Ok(ln_m0 - ln_m1)
}

/// CDF of the fitted minimum-lifetime law `1 - exp(-lambda t^alpha)`.
pub fn min_lifetime_cdf(alpha: f64, total_rate: f64, t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        -(-total_rate * exp_clamped(alpha * t.ln())).exp_m1()
    }
}

/// Fitted CDF of the observed lifetime at `t`, using the report's posterior
/// means.
pub fn fitted_min_cdf(t: f64, report: &EstimateReport) -> Result<f64> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::Domain(format!("CDF argument must be >= 0, got {t}")));
    }
    Ok(min_lifetime_cdf(
        report.mean(Parameter::Alpha),
        report.total_rate_mean(),
        t,
    ))
}

/// Kolmogorov-Smirnov test outcome.
#[derive(Copy, Clone, Debug)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
    pub n: usize,
}

/// Asymptotic Kolmogorov tail probability `P(K > x)`.
fn kolmogorov_p(x: f64) -> f64 {
    if x < 1e-8 {
        return 1.0;
    }
    let mut p = 0.0;
    let mut sign = 1.0;
    for k in 1..=1000 {
        let term = (-2.0 * (k as f64) * (k as f64) * x * x).exp();
        p += sign * term;
        if term < 0.5e-12 {
            break;
        }
        sign = -sign;
    }
    (2.0 * p).clamp(0.0, 1.0)
}

/// One-sample KS test of the observed failure times against `cdf`.
///
/// The statistic is evaluated at the jump points with ties merged into a
/// single jump, taking both one-sided gaps at each jump.
pub fn ks_test(
    data: &CompetingRisksDataset,
    cdf: impl Fn(f64) -> f64,
) -> Result<KsResult> {
    let mut times: Vec<f64> = data.observations().iter().map(|o| o.time).collect();
    if times.is_empty() {
        return Err(Error::InsufficientSample(
            "KS test needs at least one observation".into(),
        ));
    }
    times.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let n = times.len();
    let nf = n as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && times[j + 1] == times[i] {
            j += 1;
        }
        let f = cdf(times[i]);
        if !((-1e-12..=1.0 + 1e-12).contains(&f)) {
            return Err(Error::Domain(format!(
                "CDF returned {f} outside [0, 1] at t={}",
                times[i]
            )));
        }
        let f = f.clamp(0.0, 1.0);
        let below = i as f64 / nf;
        let above = (j + 1) as f64 / nf;
        d = d.max(f - below).max(above - f);
        i = j + 1;
    }
    Ok(KsResult {
        statistic: d,
        p_value: kolmogorov_p(nf.sqrt() * d),
        n,
    })
}

/// Posterior means of the cause-blind pooled Weibull fit.
#[derive(Copy, Clone, Debug)]
pub struct PooledFit {
    pub alpha: f64,
    pub lambda: f64,
}

/// Fits the pooled single-risk Weibull model by the same composition scheme:
/// the pooled shape has a log-concave marginal of identical structure, and
/// the pooled rate given the shape is `Gamma(n + d4, rate d3 + D(alpha))`,
/// whose mean is used directly (Rao-Blackwellized over the shape draws).
pub fn pooled_weibull_fit(
    data: &CompetingRisksDataset,
    hypers: &BfHypers,
    method: AlphaSampleMethod,
    m: usize,
    seed: u64,
    parallelism: Parallelism,
) -> Result<PooledFit> {
    if !matches!(data.scheme(), CensoringScheme::Complete) {
        return Err(Error::Scheme(
            "the pooled fit is defined for complete data".into(),
        ));
    }
    if m == 0 {
        return Err(Error::InsufficientSample("requested zero draws".into()));
    }
    let prior = PriorSpec::new(
        GdParams::new(hypers.d4, hypers.d3, 1.0, 1.0, 1.0)?,
        hypers.d1,
        hypers.d2,
    )?;
    let marginal = AlphaMarginal::from_stats(prior, data.stats().clone())?;
    let alphas = sample_alpha(&marginal, method, m, seed, parallelism)?;
    let n = data.stats().n_star as f64;
    let alpha_mean = kahan_sum(alphas.iter().copied()) / m as f64;
    let lambda_mean = kahan_sum(
        alphas
            .iter()
            .map(|&alpha| (n + hypers.d4) / marginal.b_plus_exposure(alpha)),
    ) / m as f64;
    Ok(PooledFit {
        alpha: alpha_mean,
        lambda: lambda_mean,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Observation;
    use crate::distributions::{Cause, ScaleTriple};
    use statrs::function::gamma::gamma;

    fn uniform_sample(values: &[f64]) -> WeightedSample {
        let draws: Vec<PosteriorDraw> = values
            .iter()
            .map(|&v| PosteriorDraw {
                alpha: v,
                scales: ScaleTriple {
                    lambda0: 1.0,
                    lambda1: 1.0,
                    lambda2: 1.0,
                },
            })
            .collect();
        let m = draws.len();
        WeightedSample {
            draws,
            weights: vec![1.0 / m as f64; m],
            restricted: false,
        }
    }

    #[test]
    fn symmetric_ranks_match_conventions() {
        let v20: Vec<f64> = (1..=20).map(|i| i as f64).collect();
        let ci = symmetric_cri(&v20, None, 0.1).unwrap();
        assert_eq!((ci.lower, ci.upper), (1.0, 19.0));

        let v100: Vec<f64> = (1..=100).map(|i| i as f64).collect();
        let ci = symmetric_cri(&v100, None, 0.05).unwrap();
        assert_eq!((ci.lower, ci.upper), (3.0, 97.0));
    }

    #[test]
    fn symmetric_weighted_degenerate_atom() {
        let values: Vec<f64> = (1..=20).map(|i| i as f64).collect();
        let mut weights = vec![0.0; 20];
        weights[4] = 1.0; // the value 5
        let ci = symmetric_cri(&values, Some(&weights), 0.1).unwrap();
        assert_eq!((ci.lower, ci.upper), (5.0, 5.0));
    }

    #[test]
    fn symmetric_rejects_insufficient_samples() {
        let v = [1.0, 2.0, 3.0];
        assert!(matches!(
            symmetric_cri(&v, None, 0.05),
            Err(Error::InsufficientSample(_))
        ));
    }

    #[test]
    fn hpd_tie_breaks_to_smallest_start() {
        let v: Vec<f64> = (1..=20).map(|i| i as f64).collect();
        let ci = hpd_cri(&v, None, 0.1).unwrap();
        assert_eq!((ci.lower, ci.upper), (1.0, 19.0));
    }

    #[test]
    fn hpd_weighted_uniform_reduces_to_unweighted() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for m in [50usize, 100, 137] {
            let values: Vec<f64> = (0..m).map(|_| rng.gen::<f64>().powi(2) * 10.0).collect();
            let weights = vec![1.0 / m as f64; m];
            for gamma in [0.05, 0.1] {
                let a = hpd_cri(&values, None, gamma).unwrap();
                let b = hpd_cri(&values, Some(&weights), gamma).unwrap();
                assert_eq!(a.lower.to_bits(), b.lower.to_bits());
                assert_eq!(a.upper.to_bits(), b.upper.to_bits());
            }
        }
    }

    #[test]
    fn hpd_weighted_point_mass_collapses() {
        let values: Vec<f64> = (1..=30).map(|i| i as f64).collect();
        let mut weights = vec![0.0; 30];
        weights[0] = 1.0;
        let ci = hpd_cri(&values, Some(&weights), 0.05).unwrap();
        assert_eq!((ci.lower, ci.upper), (1.0, 1.0));
    }

    #[test]
    fn point_estimate_trivial_cases() {
        let s = uniform_sample(&[3.5, 3.5, 3.5]);
        let rep = point_estimates(&s).unwrap();
        assert!((rep.mean(Parameter::Alpha) - 3.5).abs() < 1e-12);
        assert!(rep.variance(Parameter::Alpha).abs() < 1e-12);

        let mut s = uniform_sample(&[0.0, 1.0]);
        s.weights = vec![0.25, 0.75];
        s.restricted = true; // exercise the weighted path
        let rep = point_estimates(&s).unwrap();
        assert!((rep.mean(Parameter::Alpha) - 0.75).abs() < 1e-12);
    }

    #[test]
    fn uniform_weights_equal_plain_mean() {
        let values: Vec<f64> = (0..500).map(|i| (i as f64 * 0.37).sin()).collect();
        let s = uniform_sample(&values);
        let rep = point_estimates(&s).unwrap();
        let mean: f64 = values.iter().sum::<f64>() / values.len() as f64;
        assert!((rep.mean(Parameter::Alpha) - mean).abs() < 1e-12);
    }

    fn complete_data(counts: (usize, usize, usize)) -> CompetingRisksDataset {
        let mut obs = Vec::new();
        let mut t = 0.5;
        for (cause, k) in [
            (Cause::Both, counts.0),
            (Cause::First, counts.1),
            (Cause::Second, counts.2),
        ] {
            for _ in 0..k {
                obs.push(Observation { time: t, cause });
                t += 0.25;
            }
        }
        CompetingRisksDataset::new(obs, CensoringScheme::Complete, None).unwrap()
    }

    fn unit_prior() -> PriorSpec {
        PriorSpec::new(GdParams::new(1.0, 1.0, 1.0, 1.0, 1.0).unwrap(), 1.0, 1.0).unwrap()
    }

    #[test]
    fn closed_form_bf_matches_hand_arithmetic() {
        // n=3, one failure per cause, every hyperparameter 1:
        // BF = Gamma(4) Gamma(6) / (Gamma(4) Gamma(3)) = 60.
        let data = complete_data((1, 1, 1));
        let hypers = BfHypers::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let lbf = log_bayes_factor(&data, &unit_prior(), &hypers).unwrap();
        assert!((lbf - 60f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn log_space_bf_matches_direct_gamma_products() {
        let data = complete_data((2, 2, 2));
        let hypers = BfHypers::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let lbf = log_bayes_factor(&data, &unit_prior(), &hypers).unwrap();
        let direct = gamma(7.0) * gamma(9.0) * gamma(1.0).powi(3) * gamma(1.0) * gamma(1.0)
            / (gamma(3.0).powi(3) * gamma(7.0) * gamma(3.0) * gamma(1.0) * gamma(1.0));
        assert!((lbf - direct.ln()).abs() < 1e-10);
    }

    #[test]
    fn bf_is_invariant_to_time_unit() {
        let data = complete_data((3, 4, 5));
        let scaled: Vec<Observation> = data
            .observations()
            .iter()
            .map(|o| Observation {
                time: o.time / 365.0,
                cause: o.cause,
            })
            .collect();
        let scaled =
            CompetingRisksDataset::new(scaled, CensoringScheme::Complete, None).unwrap();
        let hypers = BfHypers::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let a = log_bayes_factor(&data, &unit_prior(), &hypers).unwrap();
        let b = log_bayes_factor(&scaled, &unit_prior(), &hypers).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn bf_rejects_unmatched_hypers_and_censored_data() {
        let data = complete_data((1, 2, 2));
        let hypers = BfHypers::new(2.0, 1.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            log_bayes_factor(&data, &unit_prior(), &hypers),
            Err(Error::HyperMismatch(_))
        ));

        let obs: Vec<Observation> = data.observations().to_vec();
        let censored = CompetingRisksDataset::new(
            obs,
            CensoringScheme::TypeI { tau: 100.0 },
            Some(8),
        )
        .unwrap();
        let matched = BfHypers::new(1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            log_bayes_factor(&censored, &unit_prior(), &matched),
            Err(Error::Scheme(_))
        ));
    }

    #[test]
    fn numeric_bf_agrees_with_closed_form_when_matched() {
        let data = complete_data((2, 3, 4));
        let hypers = BfHypers::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let closed = log_bayes_factor(&data, &unit_prior(), &hypers).unwrap();
        let numeric = log_bayes_factor_numeric(&data, &unit_prior(), &hypers).unwrap();
        assert!(
            (closed - numeric).abs() < 1e-6,
            "closed {closed} vs numeric {numeric}"
        );
    }

    #[test]
    fn fitted_cdf_basics() {
        let s = uniform_sample(&[1.5, 1.5]);
        let rep = point_estimates(&s).unwrap();
        assert_eq!(fitted_min_cdf(0.0, &rep).unwrap(), 0.0);
        assert!(fitted_min_cdf(-1.0, &rep).is_err());
        let mut last = 0.0;
        for i in 1..50 {
            let t = i as f64 * 0.1;
            let f = fitted_min_cdf(t, &rep).unwrap();
            assert!(f >= last && f <= 1.0);
            last = f;
        }
    }

    #[test]
    fn ks_single_observation_is_half() {
        let data = CompetingRisksDataset::new(
            vec![Observation { time: 2.0, cause: Cause::First }],
            CensoringScheme::Complete,
            None,
        )
        .unwrap();
        let r = ks_test(&data, |_| 0.5).unwrap();
        assert!((r.statistic - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ks_invariant_under_monotone_transform() {
        let data = complete_data((2, 3, 4));
        let cdf = |t: f64| min_lifetime_cdf(1.3, 0.4, t);
        let base = ks_test(&data, cdf).unwrap();
        let cubed: Vec<Observation> = data
            .observations()
            .iter()
            .map(|o| Observation {
                time: o.time.powi(3),
                cause: o.cause,
            })
            .collect();
        let cubed = CompetingRisksDataset::new(cubed, CensoringScheme::Complete, None).unwrap();
        let transformed = ks_test(&cubed, |t: f64| cdf(t.cbrt())).unwrap();
        assert!((base.statistic - transformed.statistic).abs() < 1e-12);
    }

    #[test]
    fn kolmogorov_p_known_value_and_monotonicity() {
        // Classical table: P(K > 0.5) ~ 0.9639.
        assert!((kolmogorov_p(0.5) - 0.9639).abs() < 1e-3);
        assert!(kolmogorov_p(1e-12) == 1.0);
        let mut last = 1.0;
        for i in 1..40 {
            let p = kolmogorov_p(i as f64 * 0.1);
            assert!(p <= last + 1e-15);
            last = p;
        }
        assert!(kolmogorov_p(4.0) < 1e-6);
    }

    #[test]
    fn pooled_fit_rate_is_exact_for_unit_example() {
        // Single observation t=1 with unit hypers: E[lambda*|alpha*] = 1 for
        // every alpha*, so the Rao-Blackwellized mean is exactly 1.
        let data = CompetingRisksDataset::new(
            vec![Observation { time: 1.0, cause: Cause::First }],
            CensoringScheme::Complete,
            None,
        )
        .unwrap();
        let hypers = BfHypers::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let fit = pooled_weibull_fit(
            &data,
            &hypers,
            AlphaSampleMethod::AdaptiveRejection,
            200,
            5,
            Parallelism::Sequential,
        )
        .unwrap();
        assert!((fit.lambda - 1.0).abs() < 1e-12, "{}", fit.lambda);
        assert!(fit.alpha > 0.0);
    }
}
