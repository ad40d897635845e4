//! Model distributions: the rate-parameterized Weibull, the Marshall-Olkin
//! bivariate Weibull (MOBW) it induces, and the Gamma-Dirichlet prior over
//! the three MOBW scales (plus its order-restricted variant).
//!
//! Everything density-like is computed and returned on the log scale; the
//! only way to get a probability out of this module is `exp` at the call
//! site. Survival exponents are saturated (see [`crate::numeric`]) so
//! log-densities stay finite over the whole supported parameter range.

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::numeric::{exp_clamped, log_sum_exp_pair};

/// Which latent cause produced an observed failure.
///
/// `Both` marks a simultaneous failure of the two components, i.e. the
/// common shock fired first.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Cause {
    Both,
    First,
    Second,
}

impl Cause {
    /// Encodes the cause as the conventional 0/1/2 label.
    pub fn code(self) -> u8 {
        match self {
            Cause::Both => 0,
            Cause::First => 1,
            Cause::Second => 2,
        }
    }

    /// Decodes a 0/1/2 label.
    pub fn from_code(code: u8) -> Result<Self> {
        match code {
            0 => Ok(Cause::Both),
            1 => Ok(Cause::First),
            2 => Ok(Cause::Second),
            _ => Err(Error::Domain(format!(
                "cause must be 0, 1 or 2, got {code}"
            ))),
        }
    }
}

/// Weibull distribution with shape `alpha` and *rate-style* scale `lambda`:
/// `S(t) = exp(-lambda * t^alpha)`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct WeibullParams {
    shape: f64,
    scale: f64,
}

impl WeibullParams {
    pub fn new(shape: f64, scale: f64) -> Result<Self> {
        Ok(Self {
            shape: Error::require_positive("shape", shape)?,
            scale: Error::require_positive("scale", scale)?,
        })
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `lambda * t^alpha`, the cumulative hazard, computed as
    /// `exp(ln lambda + alpha ln t)` with a saturated exponent.
    #[inline]
    fn cum_hazard(&self, t: f64) -> f64 {
        exp_clamped(self.scale.ln() + self.shape * t.ln())
    }

    /// Log-density `ln(alpha lambda t^(alpha-1)) - lambda t^alpha` at `t > 0`.
    pub fn log_pdf(&self, t: f64) -> Result<f64> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::Domain(format!(
                "Weibull density needs t > 0, got {t}"
            )));
        }
        Ok(self.shape.ln() + self.scale.ln() + (self.shape - 1.0) * t.ln() - self.cum_hazard(t))
    }

    /// Survival `exp(-lambda t^alpha)`; `S(0) = 1`.
    pub fn survival(&self, t: f64) -> Result<f64> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::Domain(format!(
                "Weibull survival needs t >= 0, got {t}"
            )));
        }
        if t == 0.0 {
            return Ok(1.0);
        }
        Ok((-self.cum_hazard(t)).exp())
    }

    /// Draws one lifetime by inverting the cumulative hazard of a unit
    /// exponential: `T = (E / lambda)^(1/alpha)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let e: f64 = Exp1.sample(rng);
        (e / self.scale).powf(1.0 / self.shape)
    }
}

/// Marshall-Olkin bivariate Weibull: three independent latent Weibull
/// lifetimes with common shape (`lambda0` for the shock, `lambda1`/`lambda2`
/// for the individual causes); component `i` fails at
/// `X_i = min(U_0, U_i)`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct MobwParams {
    shape: f64,
    lambda0: f64,
    lambda1: f64,
    lambda2: f64,
}

impl MobwParams {
    pub fn new(shape: f64, lambda0: f64, lambda1: f64, lambda2: f64) -> Result<Self> {
        Ok(Self {
            shape: Error::require_positive("shape", shape)?,
            lambda0: Error::require_positive("lambda0", lambda0)?,
            lambda1: Error::require_positive("lambda1", lambda1)?,
            lambda2: Error::require_positive("lambda2", lambda2)?,
        })
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn lambda2(&self) -> f64 {
        self.lambda2
    }

    /// Total rate `lambda0 + lambda1 + lambda2`.
    pub fn lambda_total(&self) -> f64 {
        self.lambda0 + self.lambda1 + self.lambda2
    }

    fn weibull(&self, scale: f64) -> WeibullParams {
        // Scales here are sums of validated positive scales, so this cannot
        // fail.
        WeibullParams::new(self.shape, scale).expect("positive scale")
    }

    /// Log of the joint survival `P(X1 > x1, X2 > x2)`.
    ///
    /// The maximum coordinate absorbs the shock rate:
    /// `S(x1,x2) = S_WE(x1; l1) S_WE(x2; l0+l2)` for `x1 < x2`, symmetric on
    /// the other side, and `S_WE(x; l0+l1+l2)` on the diagonal.
    pub fn log_survival(&self, x1: f64, x2: f64) -> Result<f64> {
        for (name, x) in [("x1", x1), ("x2", x2)] {
            if !(x.is_finite() && x >= 0.0) {
                return Err(Error::Domain(format!(
                    "MOBW survival needs {name} >= 0, got {x}"
                )));
            }
        }
        let h = |scale: f64, x: f64| {
            if x == 0.0 {
                0.0
            } else {
                exp_clamped(scale.ln() + self.shape * x.ln())
            }
        };
        Ok(if x1 < x2 {
            -h(self.lambda1, x1) - h(self.lambda0 + self.lambda2, x2)
        } else if x1 > x2 {
            -h(self.lambda0 + self.lambda1, x1) - h(self.lambda2, x2)
        } else {
            -h(self.lambda_total(), x1)
        })
    }

    /// Log joint density. Off the diagonal this is a product of two Weibull
    /// densities; exactly on the diagonal it is the singular component
    /// `(l0 / l) f_WE(x; alpha, l)` carried by the common shock.
    pub fn log_density(&self, x1: f64, x2: f64) -> Result<f64> {
        if x1 < x2 {
            Ok(self.weibull(self.lambda1).log_pdf(x1)?
                + self.weibull(self.lambda0 + self.lambda2).log_pdf(x2)?)
        } else if x1 > x2 {
            Ok(self.weibull(self.lambda0 + self.lambda1).log_pdf(x1)?
                + self.weibull(self.lambda2).log_pdf(x2)?)
        } else {
            let total = self.lambda_total();
            Ok((self.lambda0 / total).ln() + self.weibull(total).log_pdf(x1)?)
        }
    }

    /// Draws one competing-risks observation `(T, cause)` where
    /// `T = min(X1, X2)`.
    ///
    /// Works on the exponential scale `V_i = lambda_i U_i^alpha ~ Exp(1)`:
    /// the argmin is unchanged by the monotone transform. Exact floating
    /// ties with the shock are resolved as `Cause::Both`; they have measure
    /// zero and only the shock produces genuinely simultaneous failures.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, Cause) {
        let e0: f64 = Exp1.sample(rng);
        let e1: f64 = Exp1.sample(rng);
        let e2: f64 = Exp1.sample(rng);
        let v0 = e0 / self.lambda0;
        let v1 = e1 / self.lambda1;
        let v2 = e2 / self.lambda2;
        let (vmin, cause) = if v0 <= v1.min(v2) {
            (v0, Cause::Both)
        } else if v1 <= v2 {
            (v1, Cause::First)
        } else {
            (v2, Cause::Second)
        };
        (vmin.powf(1.0 / self.shape), cause)
    }
}

/// One positive scale vector `(lambda0, lambda1, lambda2)`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ScaleTriple {
    pub lambda0: f64,
    pub lambda1: f64,
    pub lambda2: f64,
}

impl ScaleTriple {
    pub fn new(lambda0: f64, lambda1: f64, lambda2: f64) -> Result<Self> {
        Ok(Self {
            lambda0: Error::require_positive("lambda0", lambda0)?,
            lambda1: Error::require_positive("lambda1", lambda1)?,
            lambda2: Error::require_positive("lambda2", lambda2)?,
        })
    }

    pub fn total(&self) -> f64 {
        self.lambda0 + self.lambda1 + self.lambda2
    }
}

/// Gamma-Dirichlet law over a scale triple: the total
/// `lambda ~ Gamma(a, rate b)` and the proportions
/// `(lambda_i / lambda) ~ Dirichlet(a0, a1, a2)`, independently.
///
/// With `a = a0 + a1 + a2` the three scales are independent
/// `Gamma(a_i, rate b)` variables. The order-restricted variant (`*_pogd`
/// methods) is the law of the same triple with the last two components
/// sorted so that `lambda1 <= lambda2`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct GdParams {
    a: f64,
    b: f64,
    a0: f64,
    a1: f64,
    a2: f64,
}

impl GdParams {
    pub fn new(a: f64, b: f64, a0: f64, a1: f64, a2: f64) -> Result<Self> {
        Ok(Self {
            a: Error::require_positive("a", a)?,
            b: Error::require_positive("b", b)?,
            a0: Error::require_positive("a0", a0)?,
            a1: Error::require_positive("a1", a1)?,
            a2: Error::require_positive("a2", a2)?,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn a2(&self) -> f64 {
        self.a2
    }

    /// `a0 + a1 + a2`.
    pub fn a_bar(&self) -> f64 {
        self.a0 + self.a1 + self.a2
    }

    /// Mean of each component: `E[lambda_i] = (a / b) * (a_i / a_bar)`.
    pub fn component_means(&self) -> [f64; 3] {
        let total = self.a / self.b;
        let abar = self.a_bar();
        [
            total * self.a0 / abar,
            total * self.a1 / abar,
            total * self.a2 / abar,
        ]
    }

    /// Draws a scale triple: total from a Gamma, split from a Dirichlet
    /// (three normalized Gammas).
    ///
    /// With very small shape hyperparameters a Gamma draw can underflow to
    /// zero in f64; such draws are rejected and redrawn so every returned
    /// component is strictly positive.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ScaleTriple {
        let total_dist = Gamma::new(self.a, 1.0 / self.b).expect("validated parameters");
        let g0 = Gamma::new(self.a0, 1.0).expect("validated parameters");
        let g1 = Gamma::new(self.a1, 1.0).expect("validated parameters");
        let g2 = Gamma::new(self.a2, 1.0).expect("validated parameters");
        loop {
            let total: f64 = total_dist.sample(rng);
            let w0: f64 = g0.sample(rng);
            let w1: f64 = g1.sample(rng);
            let w2: f64 = g2.sample(rng);
            let w = w0 + w1 + w2;
            let (l0, l1, l2) = (total * w0 / w, total * w1 / w, total * w2 / w);
            if l0 > 0.0 && l1 > 0.0 && l2 > 0.0 {
                return ScaleTriple {
                    lambda0: l0,
                    lambda1: l1,
                    lambda2: l2,
                };
            }
        }
    }

    /// Draws from the order-restricted variant by sorting a plain draw:
    /// swap `lambda1` and `lambda2` whenever `lambda1 > lambda2`.
    pub fn sample_pogd<R: Rng + ?Sized>(&self, rng: &mut R) -> ScaleTriple {
        let mut t = self.sample(rng);
        if t.lambda1 > t.lambda2 {
            std::mem::swap(&mut t.lambda1, &mut t.lambda2);
        }
        t
    }

    /// Shared log-pdf pieces: normalizing constant and the factors that do
    /// not involve `lambda1`/`lambda2` exponents.
    fn log_pdf_common(&self, t: &ScaleTriple) -> f64 {
        let abar = self.a_bar();
        let total = t.total();
        ln_gamma(abar) - ln_gamma(self.a)
            + (self.a - abar) * (self.b.ln() + total.ln())
            + (self.a0 + self.a1 + self.a2) * self.b.ln()
            - ln_gamma(self.a0)
            - ln_gamma(self.a1)
            - ln_gamma(self.a2)
            + (self.a0 - 1.0) * t.lambda0.ln()
            - self.b * total
    }

    /// Log-density of the Gamma-Dirichlet law at a scale triple.
    pub fn log_pdf(&self, t: &ScaleTriple) -> Result<f64> {
        ScaleTriple::new(t.lambda0, t.lambda1, t.lambda2)?;
        Ok(self.log_pdf_common(t)
            + (self.a1 - 1.0) * t.lambda1.ln()
            + (self.a2 - 1.0) * t.lambda2.ln())
    }

    /// Log-density of the order-restricted variant; zero density (`-inf`)
    /// when `lambda1 > lambda2`.
    ///
    /// On its support this is the symmetrized density
    /// `gd(l0, l1, l2) + gd(l0, l2, l1)`.
    pub fn pogd_log_pdf(&self, t: &ScaleTriple) -> Result<f64> {
        ScaleTriple::new(t.lambda0, t.lambda1, t.lambda2)?;
        if t.lambda1 > t.lambda2 {
            return Ok(f64::NEG_INFINITY);
        }
        let direct = (self.a1 - 1.0) * t.lambda1.ln() + (self.a2 - 1.0) * t.lambda2.ln();
        let swapped = (self.a1 - 1.0) * t.lambda2.ln() + (self.a2 - 1.0) * t.lambda1.ln();
        Ok(self.log_pdf_common(t) + log_sum_exp_pair(direct, swapped))
    }
}
