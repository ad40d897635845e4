//! Posterior samplers for the dependent competing-risks model.
//!
//! The posterior factors exactly: the shape parameter's marginal density is
//! known up to a constant and is log-concave, and the three rate parameters
//! given the shape follow a gamma-Dirichlet law in closed form. Sampling is
//! therefore composition, not Markov chain simulation: draw the shape from
//! its marginal (adaptive rejection sampling by default, ratio-of-uniforms
//! as a fallback), then the rates from their conditional. Draws are exact
//! and independent.
//!
//! Under the order restriction `lambda1 < lambda2` the rate conditional is
//! no longer standard; draws come from an ordered proposal and carry
//! importance weights.
//!
//! Sampling is deterministic given a seed: draws are produced in fixed-size
//! chunks, each chunk's generator is derived from `(seed, stream, chunk)`,
//! so parallel and sequential execution yield bit-identical output.

mod ars;
mod rou;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::data::{CompetingRisksDataset, SufficientStats};
use crate::distributions::{GdParams, ScaleTriple};
use crate::error::{Error, Result};
use crate::exec::{derive_seed, map_indexed, streams, Parallelism, CHUNK};
use crate::numeric::{exp_clamped, find_positive_mode, kahan_sum, log_sum_exp};

use ars::Envelope;
use rou::RouSampler;

/// Fraction of the nominal sample size below which the effective sample size
/// of an importance-weighted sample triggers a warning.
const ESS_WARN_FRACTION: f64 = 0.05;

/// Prior specification: a gamma-Dirichlet law on the rate triple and a
/// gamma law (rate `c1`, shape `c2`) on the shape parameter.
#[derive(Clone, Debug)]
pub struct PriorSpec {
    gd: GdParams,
    c1: f64,
    c2: f64,
}

impl PriorSpec {
    pub fn new(gd: GdParams, c1: f64, c2: f64) -> Result<Self> {
        Error::require_positive("c1", c1)?;
        Error::require_positive("c2", c2)?;
        Ok(Self { gd, c1, c2 })
    }

    /// The diffuse default: near-zero gamma hyperparameters and a uniform
    /// Dirichlet split.
    pub fn noninformative() -> Self {
        Self {
            gd: GdParams::new(0.001, 0.001, 1.0, 1.0, 1.0).expect("valid constants"),
            c1: 0.001,
            c2: 0.001,
        }
    }

    pub fn gd(&self) -> &GdParams {
        &self.gd
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }
}

/// The marginal posterior of the shape parameter, known up to a constant.
///
/// Also exposes the closed-form conditional of the rates given the shape
/// and the ordered proposal used under the restriction.
#[derive(Clone, Debug)]
pub struct AlphaMarginal {
    prior: PriorSpec,
    stats: SufficientStats,
}

impl AlphaMarginal {
    pub fn new(prior: &PriorSpec, data: &CompetingRisksDataset) -> Result<Self> {
        if data.stats().n_star == 0 {
            return Err(Error::InsufficientSample(
                "the shape marginal needs at least one observed failure".into(),
            ));
        }
        Ok(Self {
            prior: prior.clone(),
            stats: data.stats().clone(),
        })
    }

    /// Builds the marginal directly from sufficient statistics; used for the
    /// cause-blind pooled fit, which shares this exact structure.
    pub(crate) fn from_stats(prior: PriorSpec, stats: SufficientStats) -> Result<Self> {
        if stats.n_star == 0 {
            return Err(Error::InsufficientSample(
                "the shape marginal needs at least one observed failure".into(),
            ));
        }
        Ok(Self { prior, stats })
    }

    /// Unnormalized log-density of the shape parameter's marginal posterior.
    pub fn log_density(&self, alpha: f64) -> Result<f64> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::Domain(format!(
                "shape marginal is defined for alpha > 0, got {alpha}"
            )));
        }
        Ok(self.log_density_unchecked(alpha))
    }

    pub(crate) fn log_density_unchecked(&self, alpha: f64) -> f64 {
        if !(alpha.is_finite() && alpha > 0.0) {
            return f64::NEG_INFINITY;
        }
        let n = self.stats.n_star as f64;
        let gd = &self.prior.gd;
        -self.prior.c1 * alpha + (n + self.prior.c2 - 1.0) * alpha.ln()
            - (gd.a() + n) * self.stats.log_b_plus_exposure(gd.b(), alpha)
            + (alpha - 1.0) * self.stats.sum_log_time
    }

    /// `b + D(alpha)`, saturated to stay finite.
    pub fn b_plus_exposure(&self, alpha: f64) -> f64 {
        exp_clamped(self.stats.log_b_plus_exposure(self.prior.gd.b(), alpha))
    }

    /// The closed-form gamma-Dirichlet conditional of the rates given the
    /// shape (no order restriction).
    pub fn conditional_scales(&self, alpha: f64) -> Result<GdParams> {
        let s = &self.stats;
        let gd = &self.prior.gd;
        GdParams::new(
            gd.a() + s.n_star as f64,
            self.b_plus_exposure(alpha),
            gd.a0() + s.n0 as f64,
            gd.a1() + s.n1 as f64,
            gd.a2() + s.n2 as f64,
        )
    }

    /// The ordered gamma-Dirichlet proposal used under `lambda1 < lambda2`;
    /// its importance weights are [`log_importance_weight`].
    pub fn proposal_scales(&self, alpha: f64) -> Result<GdParams> {
        let s = &self.stats;
        let gd = &self.prior.gd;
        let cross = (s.n1 + s.n2) as f64;
        GdParams::new(
            gd.a() + s.n_star as f64,
            self.b_plus_exposure(alpha),
            gd.a0() + 2.0 * s.n0 as f64,
            gd.a1() + cross,
            gd.a2() + cross,
        )
    }

    pub fn stats(&self) -> &SufficientStats {
        &self.stats
    }

    pub fn prior(&self) -> &PriorSpec {
        &self.prior
    }
}

/// Unnormalized log-density of the shape marginal; convenience wrapper.
pub fn log_alpha_marginal(
    prior: &PriorSpec,
    data: &CompetingRisksDataset,
    alpha: f64,
) -> Result<f64> {
    AlphaMarginal::new(prior, data)?.log_density(alpha)
}

/// Mode `(argmax, max)` of the shape marginal's log-density.
pub fn alpha_marginal_mode(marginal: &AlphaMarginal) -> Result<(f64, f64)> {
    find_positive_mode(|x| marginal.log_density_unchecked(x))
}

/// Which exact sampler draws the shape parameter.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum AlphaSampleMethod {
    /// Adaptive rejection sampling with secant envelopes (default).
    #[default]
    AdaptiveRejection,
    /// Mode-relocated ratio-of-uniforms.
    RatioOfUniforms,
}

#[derive(Clone, Debug)]
enum Engine {
    Ars(Envelope),
    Rou(RouSampler),
}

/// Reusable sampler for the shape marginal. Construction locates the mode
/// and builds the envelope (or bounding box) once; every chunk of draws
/// starts from that shared state, which keeps output independent of how
/// chunks are scheduled.
pub struct AlphaSampler {
    marginal: AlphaMarginal,
    engine: Engine,
}

impl AlphaSampler {
    pub fn new(marginal: AlphaMarginal, method: AlphaSampleMethod) -> Result<Self> {
        let engine = {
            let h = |x: f64| marginal.log_density_unchecked(x);
            let mode = find_positive_mode(h)?;
            match method {
                AlphaSampleMethod::AdaptiveRejection => Engine::Ars(Envelope::initial(h, mode)?),
                AlphaSampleMethod::RatioOfUniforms => Engine::Rou(RouSampler::new(h, mode)?),
            }
        };
        Ok(Self { marginal, engine })
    }

    /// Fills `out` with independent draws from the shape marginal.
    pub fn fill<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) -> Result<()> {
        let h = |x: f64| self.marginal.log_density_unchecked(x);
        match &self.engine {
            Engine::Ars(env) => {
                let mut env = env.clone();
                for slot in out {
                    *slot = env.sample(rng, h)?;
                }
            }
            Engine::Rou(rou) => {
                for slot in out {
                    *slot = rou.sample(rng, h)?;
                }
            }
        }
        Ok(())
    }

    pub fn marginal(&self) -> &AlphaMarginal {
        &self.marginal
    }
}

/// One draw from the joint posterior.
#[derive(Copy, Clone, Debug)]
pub struct PosteriorDraw {
    pub alpha: f64,
    pub scales: ScaleTriple,
}

/// A posterior sample with (possibly non-uniform) normalized weights.
#[derive(Clone, Debug)]
pub struct WeightedSample {
    pub draws: Vec<PosteriorDraw>,
    /// Normalized weights; sum to one.
    pub weights: Vec<f64>,
    /// Whether the sample targets the order-restricted posterior.
    pub restricted: bool,
}

impl WeightedSample {
    fn uniform(draws: Vec<PosteriorDraw>) -> Self {
        let m = draws.len();
        Self {
            draws,
            weights: vec![1.0 / m as f64; m],
            restricted: false,
        }
    }

    pub fn len(&self) -> usize {
        self.draws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    /// Effective sample size `1 / Σ w_i^2`; equals `len` for uniform weights.
    pub fn ess(&self) -> f64 {
        1.0 / kahan_sum(self.weights.iter().map(|w| w * w))
    }
}

/// Draws `m` independent shape values, chunk-deterministically.
pub fn sample_alpha(
    marginal: &AlphaMarginal,
    method: AlphaSampleMethod,
    m: usize,
    seed: u64,
    parallelism: Parallelism,
) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::InsufficientSample("requested zero draws".into()));
    }
    let sampler = AlphaSampler::new(marginal.clone(), method)?;
    let n_chunks = m.div_ceil(CHUNK);
    let chunks = map_indexed(parallelism, n_chunks, |ci| -> Result<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, streams::POSTERIOR, ci as u64));
        let len = CHUNK.min(m - ci * CHUNK);
        let mut out = vec![0.0; len];
        sampler.fill(&mut rng, &mut out)?;
        Ok(out)
    });
    let mut all = Vec::with_capacity(m);
    for chunk in chunks {
        all.extend(chunk?);
    }
    Ok(all)
}

/// Generic chunked composition sampler: draw the chunk's shapes, then each
/// draw's rates from `scales_for(alpha)`.
fn sample_composition(
    marginal: &AlphaMarginal,
    method: AlphaSampleMethod,
    m: usize,
    seed: u64,
    parallelism: Parallelism,
    ordered_proposal: bool,
) -> Result<Vec<PosteriorDraw>> {
    if m == 0 {
        return Err(Error::InsufficientSample("requested zero draws".into()));
    }
    let sampler = AlphaSampler::new(marginal.clone(), method)?;
    let n_chunks = m.div_ceil(CHUNK);
    let chunks = map_indexed(parallelism, n_chunks, |ci| -> Result<Vec<PosteriorDraw>> {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, streams::POSTERIOR, ci as u64));
        let len = CHUNK.min(m - ci * CHUNK);
        let mut alphas = vec![0.0; len];
        sampler.fill(&mut rng, &mut alphas)?;
        let mut draws = Vec::with_capacity(len);
        for &alpha in &alphas {
            let scales = if ordered_proposal {
                marginal.proposal_scales(alpha)?.sample_pogd(&mut rng)
            } else {
                marginal.conditional_scales(alpha)?.sample(&mut rng)
            };
            draws.push(PosteriorDraw { alpha, scales });
        }
        Ok(draws)
    });
    let mut all = Vec::with_capacity(m);
    for chunk in chunks {
        all.extend(chunk?);
    }
    Ok(all)
}

/// Exact sample from the unrestricted posterior; uniform weights.
pub fn sample_posterior_unrestricted(
    data: &CompetingRisksDataset,
    prior: &PriorSpec,
    method: AlphaSampleMethod,
    m: usize,
    seed: u64,
    parallelism: Parallelism,
) -> Result<WeightedSample> {
    let marginal = AlphaMarginal::new(prior, data)?;
    let draws = sample_composition(&marginal, method, m, seed, parallelism, false)?;
    Ok(WeightedSample::uniform(draws))
}

/// Log importance weight of a rate draw from the ordered proposal against
/// the order-restricted posterior:
/// `n* ln λ - n0 ln λ0 - n2 ln λ1 - n1 ln λ2` (note the crossed exponents;
/// the proposal pools the failure counts of the two ordered components).
pub fn log_importance_weight(stats: &SufficientStats, scales: &ScaleTriple) -> f64 {
    let mut lw = stats.n_star as f64 * scales.total().ln();
    if stats.n0 > 0 {
        lw -= stats.n0 as f64 * scales.lambda0.ln();
    }
    if stats.n2 > 0 {
        lw -= stats.n2 as f64 * scales.lambda1.ln();
    }
    if stats.n1 > 0 {
        lw -= stats.n1 as f64 * scales.lambda2.ln();
    }
    lw
}

/// `exp` of [`log_importance_weight`]; may overflow for extreme draws, which
/// is why the normalization works in log space.
pub fn importance_weight(stats: &SufficientStats, scales: &ScaleTriple) -> f64 {
    log_importance_weight(stats, scales).exp()
}

/// Importance sample from the order-restricted (`lambda1 < lambda2`)
/// posterior: ordered-proposal draws with self-normalized weights.
pub fn sample_posterior_restricted(
    data: &CompetingRisksDataset,
    prior: &PriorSpec,
    method: AlphaSampleMethod,
    m: usize,
    seed: u64,
    parallelism: Parallelism,
) -> Result<WeightedSample> {
    let marginal = AlphaMarginal::new(prior, data)?;
    let draws = sample_composition(&marginal, method, m, seed, parallelism, true)?;
    let log_w: Vec<f64> = draws
        .iter()
        .map(|d| log_importance_weight(&marginal.stats, &d.scales))
        .collect();
    let lse = log_sum_exp(&log_w);
    if !lse.is_finite() {
        return Err(Error::Domain(
            "importance weights are degenerate (all zero)".into(),
        ));
    }
    let mut weights: Vec<f64> = log_w.iter().map(|&lw| (lw - lse).exp()).collect();
    let total = kahan_sum(weights.iter().copied());
    for w in &mut weights {
        *w /= total;
    }
    let sample = WeightedSample {
        draws,
        weights,
        restricted: true,
    };
    let ess = sample.ess();
    if ess < ESS_WARN_FRACTION * m as f64 {
        log::warn!(
            "restricted-posterior importance sample is poor: effective size {:.1} of {} draws",
            ess,
            m
        );
    }
    Ok(sample)
}
