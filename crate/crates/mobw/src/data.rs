//! Competing-risks datasets: CSV ingestion, censoring-scheme descriptors and
//! the sufficient statistics every posterior computation consumes.
//!
//! A dataset records the observed failures `(t, cause)` plus how the
//! experiment was run (its [`CensoringScheme`] and the number of units on
//! test). All likelihood information is then captured by the counts
//! `(n*, n0, n1, n2)`, `Σ ln t` over observed failures, and the exposure
//! function `D(α) = Σ_j w_j t_j^α` whose term list is resolved once at
//! construction time.

use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::Rng;

use crate::distributions::Cause;
use crate::error::{Error, Result};
use crate::numeric::{exp_clamped, log_sum_exp};

/// One observed failure: a positive time and which cause produced it.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Observation {
    pub time: f64,
    pub cause: Cause,
}

/// How the experiment generating a dataset was terminated.
///
/// Scheme parameters are expressed in the same time unit as the analyzed
/// data (i.e. after any ingestion-time division).
#[derive(Clone, Debug, PartialEq)]
pub enum CensoringScheme {
    /// Every unit is observed until failure.
    Complete,
    /// Stop at a prefixed time `tau`; later failures are censored.
    TypeI { tau: f64 },
    /// Stop at the `r`-th failure.
    TypeII { r: usize },
    /// Stop at `min(t_(r), tau)`: whichever of the Type-II and Type-I rules
    /// binds first.
    HybridI { r: usize, tau: f64 },
    /// Stop at `max(t_(r), tau)`: run until both rules are satisfied.
    HybridII { r: usize, tau: f64 },
    /// Inspect at prefixed times `taus[0] < ... < taus[k-1]`; withdraw
    /// `removals[i]` random survivors at each of the first `k-1` epochs and
    /// everyone still on test at the last one.
    ProgressiveI { taus: Vec<f64>, removals: Vec<usize> },
    /// Withdraw `removals[i]` random survivors right after the `i`-th
    /// observed failure; `m + Σ removals = n`.
    ProgressiveII { removals: Vec<usize> },
}

impl CensoringScheme {
    /// Validates the scheme parameters that do not depend on a dataset.
    pub fn validate(&self) -> Result<()> {
        match self {
            CensoringScheme::Complete => Ok(()),
            CensoringScheme::TypeI { tau } => {
                Error::require_positive("tau", *tau).map(|_| ())
            }
            CensoringScheme::TypeII { r } => {
                if *r == 0 {
                    return Err(Error::Scheme("Type-II needs r >= 1".into()));
                }
                Ok(())
            }
            CensoringScheme::HybridI { r, tau } | CensoringScheme::HybridII { r, tau } => {
                if *r == 0 {
                    return Err(Error::Scheme("hybrid schemes need r >= 1".into()));
                }
                Error::require_positive("tau", *tau).map(|_| ())
            }
            CensoringScheme::ProgressiveI { taus, removals } => {
                if taus.is_empty() {
                    return Err(Error::Scheme("progressive Type-I needs at least one epoch".into()));
                }
                for &tau in taus {
                    Error::require_positive("tau", tau)?;
                }
                if taus.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Scheme(
                        "progressive Type-I epochs must be strictly increasing".into(),
                    ));
                }
                if removals.len() != taus.len() - 1 {
                    return Err(Error::Scheme(format!(
                        "progressive Type-I with {} epochs needs {} removal counts (the last \
                         epoch removes everyone left), got {}",
                        taus.len(),
                        taus.len() - 1,
                        removals.len()
                    )));
                }
                Ok(())
            }
            CensoringScheme::ProgressiveII { removals } => {
                if removals.is_empty() {
                    return Err(Error::Scheme(
                        "progressive Type-II needs at least one planned failure".into(),
                    ));
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for CensoringScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[f64]| {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join("+")
        };
        let join_usize = |xs: &[usize]| {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join("+")
        };
        match self {
            CensoringScheme::Complete => write!(f, "complete"),
            CensoringScheme::TypeI { tau } => write!(f, "type-i:tau={tau}"),
            CensoringScheme::TypeII { r } => write!(f, "type-ii:r={r}"),
            CensoringScheme::HybridI { r, tau } => write!(f, "hybrid-i:r={r},tau={tau}"),
            CensoringScheme::HybridII { r, tau } => write!(f, "hybrid-ii:r={r},tau={tau}"),
            CensoringScheme::ProgressiveI { taus, removals } => {
                write!(f, "progressive-i:taus={}", join(taus))?;
                if !removals.is_empty() {
                    write!(f, ",removals={}", join_usize(removals))?;
                }
                Ok(())
            }
            CensoringScheme::ProgressiveII { removals } => {
                write!(f, "progressive-ii:removals={}", join_usize(removals))
            }
        }
    }
}

/// One additive term of the exposure function: `weight * t^alpha` stored as
/// `(ln t, weight)`.
#[derive(Copy, Clone, Debug)]
struct ExposureTerm {
    log_time: f64,
    weight: f64,
}

/// The statistics the posterior actually depends on.
#[derive(Clone, Debug)]
pub struct SufficientStats {
    /// Observed failures.
    pub n_star: usize,
    /// Failures attributed to the common shock (cause 0).
    pub n0: usize,
    /// Failures from cause 1.
    pub n1: usize,
    /// Failures from cause 2.
    pub n2: usize,
    /// `Σ ln t` over observed failures.
    pub sum_log_time: f64,
    terms: Vec<ExposureTerm>,
}

impl SufficientStats {
    /// Exposure `D(α) = Σ_j w_j t_j^α`. Always positive for a non-degenerate
    /// dataset; saturates (instead of overflowing to infinity) for extreme
    /// `α`.
    pub fn exposure(&self, alpha: f64) -> Result<f64> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::Domain(format!("exposure needs alpha > 0, got {alpha}")));
        }
        Ok(self
            .terms
            .iter()
            .map(|t| t.weight * exp_clamped(alpha * t.log_time))
            .sum())
    }

    /// `ln(b + D(α))` evaluated in log space so it stays finite even where
    /// `D(α)` itself would overflow.
    pub(crate) fn log_b_plus_exposure(&self, b: f64, alpha: f64) -> f64 {
        let mut logs: Vec<f64> = Vec::with_capacity(self.terms.len() + 1);
        logs.push(b.ln());
        for t in &self.terms {
            if t.weight > 0.0 {
                logs.push(t.weight.ln() + alpha * t.log_time);
            }
        }
        log_sum_exp(&logs)
    }
}

/// An observed competing-risks dataset plus the design that produced it.
#[derive(Clone, Debug)]
pub struct CompetingRisksDataset {
    observations: Vec<Observation>,
    scheme: CensoringScheme,
    n: usize,
    stats: SufficientStats,
    early_termination: bool,
}

impl CompetingRisksDataset {
    /// Builds a dataset from observed failures.
    ///
    /// `n_total` is the number of units that went on test. It can be omitted
    /// for schemes where it is implied by the data (Complete, progressive
    /// Type-II, progressive Type-I with the final-epoch removal count
    /// derivable); Type-I/Type-II/hybrid data cannot reveal how many units
    /// never failed, so those schemes require it.
    pub fn new(
        observations: Vec<Observation>,
        scheme: CensoringScheme,
        n_total: Option<usize>,
    ) -> Result<Self> {
        scheme.validate()?;
        let mut obs = observations;
        for o in &obs {
            if !(o.time.is_finite() && o.time > 0.0) {
                return Err(Error::InvalidParameter {
                    name: "time",
                    value: o.time,
                    reason: "must be finite and strictly positive",
                });
            }
        }
        obs.sort_by(|a, b| a.time.partial_cmp(&b.time).expect("finite times"));

        let n = resolve_n_total(&scheme, &obs, n_total)?;
        let terms = exposure_terms(&scheme, &obs, n)?;
        Self::from_parts(obs, scheme, n, terms, false)
    }

    /// Shared tail of all constructors: counts, warnings, flags.
    fn from_parts(
        observations: Vec<Observation>,
        scheme: CensoringScheme,
        n: usize,
        terms: Vec<ExposureTerm>,
        early_termination: bool,
    ) -> Result<Self> {
        let n_star = observations.len();
        if n_star > n {
            return Err(Error::Scheme(format!(
                "observed {n_star} failures but only {n} units on test"
            )));
        }
        let mut counts = [0usize; 3];
        let mut sum_log_time = 0.0;
        for o in &observations {
            counts[o.cause.code() as usize] += 1;
            sum_log_time += o.time.ln();
        }
        if n_star == 0 {
            log::warn!("degenerate dataset: no observed failures");
        } else if counts.contains(&0) {
            log::warn!(
                "one or more causes unobserved (n0={}, n1={}, n2={}); posterior remains \
                 proper through the prior",
                counts[0],
                counts[1],
                counts[2]
            );
        }
        Ok(Self {
            observations,
            scheme,
            n,
            stats: SufficientStats {
                n_star,
                n0: counts[0],
                n1: counts[1],
                n2: counts[2],
                sum_log_time,
                terms,
            },
            early_termination,
        })
    }

    /// Reads a dataset from a `time,cause` CSV file (header row required),
    /// dividing every time by `time_divisor`.
    pub fn from_csv(
        path: impl AsRef<Path>,
        time_divisor: f64,
        scheme: CensoringScheme,
        n_total: Option<usize>,
    ) -> Result<Self> {
        Error::require_positive("time_divisor", time_divisor)?;
        let file = std::fs::File::open(path.as_ref())?;
        let reader = BufReader::new(file);
        let mut observations = Vec::new();
        let mut saw_header = false;
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if !saw_header {
                saw_header = true;
                let lowered = trimmed.to_ascii_lowercase();
                if lowered.split(',').map(str::trim).collect::<Vec<_>>() != ["time", "cause"] {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("expected header `time,cause`, got `{trimmed}`"),
                    });
                }
                continue;
            }
            let mut fields = trimmed.split(',').map(str::trim);
            let (time_str, cause_str) = match (fields.next(), fields.next(), fields.next()) {
                (Some(t), Some(c), None) => (t, c),
                _ => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("expected two comma-separated fields, got `{trimmed}`"),
                    })
                }
            };
            let time: f64 = time_str.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("cannot parse time `{time_str}`"),
            })?;
            let cause_code: u8 = cause_str.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("cannot parse cause `{cause_str}`"),
            })?;
            let cause = Cause::from_code(cause_code).map_err(|e| Error::Parse {
                line: line_no,
                message: e.to_string(),
            })?;
            if !(time.is_finite() && time > 0.0) {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("time must be positive, got {time}"),
                });
            }
            observations.push(Observation {
                time: time / time_divisor,
                cause,
            });
        }
        if observations.is_empty() {
            return Err(Error::InsufficientSample(
                "dataset file contains no observations".into(),
            ));
        }
        Self::new(observations, scheme, n_total)
    }

    /// Writes the dataset back out in the ingestion format (current time
    /// unit, full precision).
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut file = std::fs::File::create(path.as_ref())?;
        writeln!(file, "time,cause")?;
        for o in &self.observations {
            writeln!(file, "{},{}", o.time, o.cause.code())?;
        }
        Ok(())
    }

    /// Censors a complete sample the way an experimenter running `scheme`
    /// would have, returning what they would observe.
    ///
    /// The RNG drives the random withdrawals of the progressive schemes;
    /// the other schemes are deterministic truncations.
    pub fn apply_censoring<R: Rng + ?Sized>(
        complete: &[(f64, Cause)],
        scheme: CensoringScheme,
        rng: &mut R,
    ) -> Result<Self> {
        scheme.validate()?;
        let n = complete.len();
        if n == 0 {
            return Err(Error::InsufficientSample("empty complete sample".into()));
        }
        for &(t, _) in complete {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::InvalidParameter {
                    name: "time",
                    value: t,
                    reason: "must be finite and strictly positive",
                });
            }
        }
        let mut sorted: Vec<Observation> = complete
            .iter()
            .map(|&(time, cause)| Observation { time, cause })
            .collect();
        sorted.sort_by(|a, b| a.time.partial_cmp(&b.time).expect("finite times"));

        match &scheme {
            CensoringScheme::Complete
            | CensoringScheme::TypeI { .. }
            | CensoringScheme::TypeII { .. }
            | CensoringScheme::HybridI { .. }
            | CensoringScheme::HybridII { .. } => {
                let cut = match &scheme {
                    CensoringScheme::Complete => f64::INFINITY,
                    CensoringScheme::TypeI { tau } => *tau,
                    CensoringScheme::TypeII { r } => {
                        check_r(*r, n)?;
                        sorted[*r - 1].time
                    }
                    CensoringScheme::HybridI { r, tau } => {
                        check_r(*r, n)?;
                        sorted[*r - 1].time.min(*tau)
                    }
                    CensoringScheme::HybridII { r, tau } => {
                        check_r(*r, n)?;
                        sorted[*r - 1].time.max(*tau)
                    }
                    _ => unreachable!(),
                };
                let observations: Vec<Observation> =
                    sorted.into_iter().filter(|o| o.time <= cut).collect();
                let terms = exposure_terms(&scheme, &observations, n)?;
                Self::from_parts(observations, scheme, n, terms, false)
            }
            CensoringScheme::ProgressiveI { taus, removals } => {
                progressive_type_i(&sorted, scheme.clone(), taus, removals, rng)
            }
            CensoringScheme::ProgressiveII { removals } => {
                if removals.len() + removals.iter().sum::<usize>() != n {
                    return Err(Error::Scheme(format!(
                        "progressive Type-II needs m + Σ removals = n ({} + {} != {n})",
                        removals.len(),
                        removals.iter().sum::<usize>()
                    )));
                }
                progressive_type_ii(&sorted, scheme.clone(), removals, rng)
            }
        }
    }

    /// Observed failures, ascending in time.
    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn scheme(&self) -> &CensoringScheme {
        &self.scheme
    }

    /// Units put on test.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Cached counts, `Σ ln t` and exposure terms.
    pub fn stats(&self) -> &SufficientStats {
        &self.stats
    }

    /// `(n*, n0, n1, n2)`.
    pub fn counts(&self) -> (usize, usize, usize, usize) {
        (self.stats.n_star, self.stats.n0, self.stats.n1, self.stats.n2)
    }

    /// Convenience passthrough to [`SufficientStats::exposure`].
    pub fn exposure(&self, alpha: f64) -> Result<f64> {
        self.stats.exposure(alpha)
    }

    /// True when no failures were observed at all.
    pub fn is_degenerate(&self) -> bool {
        self.stats.n_star == 0
    }

    /// True when a progressive Type-I experiment ran out of survivors before
    /// its last planned inspection.
    pub fn early_termination(&self) -> bool {
        self.early_termination
    }
}

fn check_r(r: usize, n: usize) -> Result<()> {
    if r == 0 || r > n {
        return Err(Error::Scheme(format!("need 1 <= r <= n, got r={r} with n={n}")));
    }
    Ok(())
}

/// Derives the number of units on test when the caller did not supply it.
fn resolve_n_total(
    scheme: &CensoringScheme,
    obs: &[Observation],
    n_total: Option<usize>,
) -> Result<usize> {
    let n_star = obs.len();
    match scheme {
        CensoringScheme::Complete => {
            let n = n_total.unwrap_or(n_star);
            if n != n_star {
                return Err(Error::Scheme(format!(
                    "complete data must have n = n* ({n} != {n_star})"
                )));
            }
            Ok(n)
        }
        CensoringScheme::ProgressiveII { removals } => {
            let implied = n_star + removals.iter().sum::<usize>();
            if removals.len() != n_star {
                return Err(Error::Scheme(format!(
                    "progressive Type-II plans {} failures but the data has {n_star}",
                    removals.len()
                )));
            }
            let n = n_total.unwrap_or(implied);
            if n != implied {
                return Err(Error::Scheme(format!(
                    "progressive Type-II implies n = {implied}, got {n}"
                )));
            }
            Ok(n)
        }
        _ => n_total.ok_or_else(|| {
            Error::Scheme(format!(
                "scheme `{scheme}` cannot infer the number of units on test from observed \
                 failures alone; supply n_total"
            ))
        }),
    }
}

/// Builds the exposure term list for data observed under `scheme`.
///
/// For the truncation schemes this also cross-checks that the observations
/// are consistent with the claimed design (e.g. a Type-II file must contain
/// exactly `r` failures).
fn exposure_terms(
    scheme: &CensoringScheme,
    obs: &[Observation],
    n: usize,
) -> Result<Vec<ExposureTerm>> {
    let n_star = obs.len();
    let unit_terms = |obs: &[Observation]| {
        obs.iter()
            .map(|o| ExposureTerm {
                log_time: o.time.ln(),
                weight: 1.0,
            })
            .collect::<Vec<_>>()
    };
    let type_i_terms = |obs: &[Observation], tau: f64| -> Result<Vec<ExposureTerm>> {
        if let Some(last) = obs.last() {
            if last.time > tau {
                return Err(Error::Scheme(format!(
                    "observation at t={} exceeds the censoring time tau={tau}",
                    last.time
                )));
            }
        }
        let mut terms = unit_terms(obs);
        let censored = n - obs.len();
        if censored > 0 {
            terms.push(ExposureTerm {
                log_time: tau.ln(),
                weight: censored as f64,
            });
        }
        Ok(terms)
    };
    let type_ii_terms = |obs: &[Observation], r: usize| -> Result<Vec<ExposureTerm>> {
        if obs.len() != r {
            return Err(Error::Scheme(format!(
                "Type-II with r={r} must observe exactly r failures, got {}",
                obs.len()
            )));
        }
        let cut = obs[r - 1].time;
        let mut terms = unit_terms(obs);
        if n > r {
            terms.push(ExposureTerm {
                log_time: cut.ln(),
                weight: (n - r) as f64,
            });
        }
        Ok(terms)
    };

    match scheme {
        CensoringScheme::Complete => Ok(unit_terms(obs)),
        CensoringScheme::TypeI { tau } => type_i_terms(obs, *tau),
        CensoringScheme::TypeII { r } => {
            check_r(*r, n)?;
            type_ii_terms(obs, *r)
        }
        // Hybrid data reveal which rule bound: under Hybrid-I the experiment
        // saw the r-th failure iff it arrived before tau; under Hybrid-II it
        // always does, and tau only matters when it falls after t_(r).
        CensoringScheme::HybridI { r, tau } => {
            check_r(*r, n)?;
            if n_star >= *r {
                type_ii_terms(&obs[..*r], *r).and_then(|t| {
                    if n_star > *r {
                        Err(Error::Scheme(format!(
                            "Hybrid-I stops at the r-th failure; got {n_star} > r={r}"
                        )))
                    } else {
                        Ok(t)
                    }
                })
            } else {
                type_i_terms(obs, *tau)
            }
        }
        CensoringScheme::HybridII { r, tau } => {
            check_r(*r, n)?;
            if n_star < *r {
                return Err(Error::Scheme(format!(
                    "Hybrid-II observes at least r={r} failures, got {n_star}"
                )));
            }
            if obs[*r - 1].time >= *tau {
                type_ii_terms(obs, *r)
            } else {
                type_i_terms(obs, *tau)
            }
        }
        CensoringScheme::ProgressiveI { taus, removals } => {
            let planned: usize = removals.iter().sum();
            if n_star + planned > n {
                return Err(Error::Scheme(format!(
                    "progressive Type-I removals plus failures exceed n ({n_star} + {planned} > {n})"
                )));
            }
            let last_removal = n - n_star - planned;
            if let Some(last) = obs.last() {
                if last.time > *taus.last().expect("validated non-empty") {
                    return Err(Error::Scheme(format!(
                        "observation at t={} exceeds the final inspection time",
                        last.time
                    )));
                }
            }
            let mut terms = unit_terms(obs);
            for (tau, r) in taus
                .iter()
                .zip(removals.iter().copied().chain(std::iter::once(last_removal)))
            {
                if r > 0 {
                    terms.push(ExposureTerm {
                        log_time: tau.ln(),
                        weight: r as f64,
                    });
                }
            }
            Ok(terms)
        }
        CensoringScheme::ProgressiveII { removals } => {
            // resolve_n_total already forced removals.len() == n_star.
            Ok(obs
                .iter()
                .zip(removals)
                .map(|(o, &r)| ExposureTerm {
                    log_time: o.time.ln(),
                    weight: (r + 1) as f64,
                })
                .collect())
        }
    }
}

/// Simulates progressive Type-I censoring on a sorted complete sample.
fn progressive_type_i<R: Rng + ?Sized>(
    sorted: &[Observation],
    scheme: CensoringScheme,
    taus: &[f64],
    removals: &[usize],
    rng: &mut R,
) -> Result<CompetingRisksDataset> {
    let n = sorted.len();
    // Indices of units still on test, in time order.
    let mut alive: Vec<usize> = (0..n).collect();
    let mut observed: Vec<Observation> = Vec::new();
    let mut terms: Vec<ExposureTerm> = Vec::new();
    let mut early = false;

    let k = taus.len();
    for (i, &tau) in taus.iter().enumerate() {
        // Failures up to this inspection are observed.
        let mut still_alive = Vec::with_capacity(alive.len());
        for &idx in &alive {
            if sorted[idx].time <= tau {
                observed.push(sorted[idx]);
                terms.push(ExposureTerm {
                    log_time: sorted[idx].time.ln(),
                    weight: 1.0,
                });
            } else {
                still_alive.push(idx);
            }
        }
        alive = still_alive;

        let planned = if i + 1 < k { removals[i] } else { alive.len() };
        let actual = planned.min(alive.len());
        if actual > 0 {
            terms.push(ExposureTerm {
                log_time: tau.ln(),
                weight: actual as f64,
            });
        }
        // Withdraw `actual` random survivors (partial Fisher-Yates).
        for j in 0..actual {
            let pick = rng.gen_range(j..alive.len());
            alive.swap(j, pick);
        }
        alive.drain(..actual);

        if i + 1 < k && planned > actual {
            // Fewer survivors than the plan asked to remove: everyone is
            // gone and the experiment ends here.
            early = true;
            log::warn!(
                "progressive Type-I removal {} exceeded the {} survivors at tau={tau}; \
                 removed all and terminated early",
                planned,
                actual
            );
            break;
        }
        if alive.is_empty() && i + 1 < k {
            early = true;
            break;
        }
    }
    observed.sort_by(|a, b| a.time.partial_cmp(&b.time).expect("finite times"));
    CompetingRisksDataset::from_parts(observed, scheme, n, terms, early)
}

/// Simulates progressive Type-II censoring on a sorted complete sample.
fn progressive_type_ii<R: Rng + ?Sized>(
    sorted: &[Observation],
    scheme: CensoringScheme,
    removals: &[usize],
    rng: &mut R,
) -> Result<CompetingRisksDataset> {
    let n = sorted.len();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut observed = Vec::with_capacity(removals.len());
    let mut terms = Vec::with_capacity(removals.len());

    for &r in removals {
        // The earliest remaining failure is observed. `alive` stays sorted
        // by time because we only ever remove elements.
        let idx = alive.remove(0);
        observed.push(sorted[idx]);
        terms.push(ExposureTerm {
            log_time: sorted[idx].time.ln(),
            weight: (r + 1) as f64,
        });
        // Withdraw r random survivors.
        for j in 0..r {
            let pick = rng.gen_range(j..alive.len());
            alive.swap(j, pick);
        }
        alive.drain(..r);
        // m + Σ removals = n guarantees this never underflows.
    }
    CompetingRisksDataset::from_parts(observed, scheme, n, terms, false)
}
