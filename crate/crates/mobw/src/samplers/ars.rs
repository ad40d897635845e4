//! Derivative-free adaptive rejection sampling for log-concave densities on
//! the positive half-line.
//!
//! The envelope is built from secant lines through evaluated points of the
//! log-density `h`: outside the span of the abscissae a chord through the two
//! nearest points bounds `h` from above, and between two abscissae the
//! extensions of the neighbouring chords do. The chord between two adjacent
//! abscissae bounds `h` from below and serves as the squeeze. Rejected
//! proposals are added to the abscissae, so the envelope tightens exactly
//! where it was loose; accepted draws are exact and mutually independent.

use rand::Rng;

use crate::error::{Error, Result};

/// Hard cap on stored abscissae; past this the envelope is close enough to
/// the target that further refinement buys nothing.
const MAX_POINTS: usize = 55;
/// Bail-out for a single draw; with a valid envelope the acceptance rate is
/// far too high for this to trigger.
const MAX_REJECTIONS: usize = 10_000;

/// A linear piece of the upper hull: `u(x) = slope * x + intercept` on
/// `[lo, hi]` (`hi` may be infinite when `slope < 0`).
#[derive(Copy, Clone, Debug)]
struct Segment {
    lo: f64,
    hi: f64,
    slope: f64,
    intercept: f64,
    log_mass: f64,
}

/// Piecewise-exponential envelope of a log-concave density on `(0, inf)`.
#[derive(Clone, Debug)]
pub(crate) struct Envelope {
    xs: Vec<f64>,
    hs: Vec<f64>,
    segments: Vec<Segment>,
}

/// `ln ∫_a^b exp(m x + c) dx`, with `b = inf` allowed when `m < 0`.
fn log_integral_exp_line(m: f64, c: f64, a: f64, b: f64) -> f64 {
    if b <= a {
        return f64::NEG_INFINITY;
    }
    if b.is_infinite() {
        debug_assert!(m < 0.0);
        return c + m * a - (-m).ln();
    }
    let s = m * (b - a);
    if s.abs() < 1e-10 {
        // (e^s - 1)/s = 1 + s/2 + O(s^2)
        c + m * a + (b - a).ln() + 0.5 * s
    } else if s > 0.0 {
        c + m * b + (-(-s).exp_m1()).ln() - m.ln()
    } else {
        c + m * a + (-s.exp_m1()).ln() - (-m).ln()
    }
}

/// Inverse CDF of the density proportional to `exp(m x)` on `[a, b]` at
/// probability `p`.
fn invert_exp_line(m: f64, a: f64, b: f64, p: f64) -> f64 {
    if b.is_infinite() {
        // Tail with negative slope: F^{-1}(p) = a + ln(1-p)/m.
        return a + (1.0 - p).ln() / m;
    }
    let s = m * (b - a);
    if s.abs() < 1e-10 {
        a + p * (b - a)
    } else if s > 0.0 {
        // a + ln(p e^s + 1 - p)/m, written to survive large s.
        a + (s + (p + (1.0 - p) * (-s).exp()).ln()) / m
    } else {
        a + (p * s.exp_m1()).ln_1p() / m
    }
}

fn line_through(x0: f64, h0: f64, x1: f64, h1: f64) -> (f64, f64) {
    let slope = (h1 - h0) / (x1 - x0);
    (slope, h0 - slope * x0)
}

impl Envelope {
    /// Builds the initial three-point envelope around a located mode.
    ///
    /// `mode` is `(argmax, max)` of `h`. The flanking points are pushed out
    /// until the log-density has dropped by at least one (or the left flank
    /// hits the floating-point floor, which still yields a valid hull).
    pub(crate) fn initial(
        h: impl Fn(f64) -> f64,
        mode: (f64, f64),
    ) -> Result<Self> {
        let (m, hm) = mode;
        if !(m.is_finite() && m > 0.0 && hm.is_finite()) {
            return Err(Error::ModeSearch(format!(
                "invalid mode location ({m}, {hm})"
            )));
        }

        // Left flank: shrink multiplicatively (doubling in log space) so even
        // targets that decay like a tiny power of x terminate quickly.
        let mut t: f64 = 0.7;
        let mut x_left = m * (-t).exp();
        let mut h_left = h(x_left);
        while hm - h_left < 1.0 && x_left > 1e-280 {
            t *= 2.0;
            x_left = m * (-t).exp();
            h_left = h(x_left);
        }
        if !h_left.is_finite() || h_left >= hm {
            return Err(Error::ModeSearch(
                "could not find a decreasing left flank".into(),
            ));
        }

        // Right flank: doubling steps away from the mode.
        let mut step = 0.5 * m.max(1.0);
        let mut x_right = m + step;
        let mut h_right = h(x_right);
        let mut tries = 0;
        while hm - h_right < 1.0 {
            tries += 1;
            if tries > 400 {
                return Err(Error::ModeSearch(
                    "log-density does not decay to the right of its mode".into(),
                ));
            }
            step *= 2.0;
            x_right = m + step;
            h_right = h(x_right);
        }
        if !h_right.is_finite() {
            return Err(Error::ModeSearch("right flank evaluated non-finite".into()));
        }

        let mut env = Envelope {
            xs: vec![x_left, m, x_right],
            hs: vec![h_left, hm, h_right],
            segments: Vec::new(),
        };
        env.rebuild()?;
        Ok(env)
    }

    fn chord(&self, i: usize, j: usize) -> (f64, f64) {
        line_through(self.xs[i], self.hs[i], self.xs[j], self.hs[j])
    }

    /// Recomputes the hull segments and their masses from the abscissae.
    /// On failure the previous hull is left untouched.
    fn rebuild(&mut self) -> Result<()> {
        let k = self.xs.len();
        debug_assert!(k >= 3);
        let mut segments: Vec<Segment> = Vec::with_capacity(k + 2);

        let mut push = |lo: f64, hi: f64, (slope, intercept): (f64, f64)| {
            if hi > lo {
                segments.push(Segment {
                    lo,
                    hi,
                    slope,
                    intercept,
                    log_mass: log_integral_exp_line(slope, intercept, lo, hi),
                });
            }
        };

        // Left tail (0, x_1]: the first chord, extended left, bounds h above.
        push(0.0, self.xs[0], self.chord(0, 1));

        // Interior intervals: the lower of the two neighbouring chords.
        for i in 0..k - 1 {
            let (lo, hi) = (self.xs[i], self.xs[i + 1]);
            let left = (i >= 1).then(|| self.chord(i - 1, i));
            let right = (i + 2 < k).then(|| self.chord(i + 1, i + 2));
            match (left, right) {
                (Some(l), Some(r)) => {
                    let cross = if l.0 != r.0 {
                        (r.1 - l.1) / (l.0 - r.0)
                    } else {
                        f64::NAN
                    };
                    if cross.is_finite() && cross > lo && cross < hi {
                        let l_lower_at_lo = l.0 * lo + l.1 <= r.0 * lo + r.1;
                        let (first, second) = if l_lower_at_lo { (l, r) } else { (r, l) };
                        push(lo, cross, first);
                        push(cross, hi, second);
                    } else {
                        let mid = 0.5 * (lo + hi);
                        let line = if l.0 * mid + l.1 <= r.0 * mid + r.1 { l } else { r };
                        push(lo, hi, line);
                    }
                }
                (Some(l), None) => push(lo, hi, l),
                (None, Some(r)) => push(lo, hi, r),
                (None, None) => unreachable!("k >= 3 covers every interval"),
            }
        }

        // Right tail [x_k, inf): the last chord must point down for the
        // envelope to have finite mass.
        let tail = self.chord(k - 2, k - 1);
        if tail.0 >= 0.0 {
            return Err(Error::ModeSearch(
                "envelope right tail is not decreasing".into(),
            ));
        }
        push(self.xs[k - 1], f64::INFINITY, tail);

        if segments.iter().all(|s| s.log_mass == f64::NEG_INFINITY) {
            return Err(Error::ModeSearch("envelope carries no mass".into()));
        }
        self.segments = segments;
        Ok(())
    }

    /// Lower (squeeze) bound on `h(x)`, available inside the abscissae span.
    fn squeeze_at(&self, x: f64) -> Option<f64> {
        let k = self.xs.len();
        if x <= self.xs[0] || x >= self.xs[k - 1] {
            return None;
        }
        let idx = self.xs.partition_point(|&v| v < x);
        let (slope, intercept) = self.chord(idx - 1, idx);
        Some(slope * x + intercept)
    }

    /// Adds an evaluated point, keeping the envelope valid; silently skips
    /// degenerate insertions (duplicates, non-finite values, points that
    /// would break tail integrability).
    fn insert(&mut self, x: f64, hx: f64) {
        if self.xs.len() >= MAX_POINTS || !hx.is_finite() || !x.is_finite() || x <= 0.0 {
            return;
        }
        let idx = self.xs.partition_point(|&v| v < x);
        let near = |other: f64| (x - other).abs() <= 1e-9 * (1.0 + x.abs());
        if idx < self.xs.len() && near(self.xs[idx]) {
            return;
        }
        if idx > 0 && near(self.xs[idx - 1]) {
            return;
        }
        // A new rightmost point must keep the tail chord decreasing.
        if idx == self.xs.len() && hx >= self.hs[self.xs.len() - 1] {
            return;
        }
        self.xs.insert(idx, x);
        self.hs.insert(idx, hx);
        if self.rebuild().is_err() {
            // Back out rather than sample from a broken hull.
            self.xs.remove(idx);
            self.hs.remove(idx);
            self.rebuild().expect("previous envelope was valid");
        }
    }

    /// One exact draw from the density proportional to `exp(h)`.
    pub(crate) fn sample<R: Rng + ?Sized>(
        &mut self,
        rng: &mut R,
        h: impl Fn(f64) -> f64,
    ) -> Result<f64> {
        for _ in 0..MAX_REJECTIONS {
            // Pick a segment, then a point inside it, from one uniform.
            let max_lm = self
                .segments
                .iter()
                .map(|s| s.log_mass)
                .fold(f64::NEG_INFINITY, f64::max);
            let weights: Vec<f64> = self
                .segments
                .iter()
                .map(|s| (s.log_mass - max_lm).exp())
                .collect();
            let total: f64 = weights.iter().sum();
            let mut target = rng.gen::<f64>() * total;
            let mut chosen = self.segments.len() - 1;
            let mut inner_p = 1.0 - f64::EPSILON;
            for (i, &w) in weights.iter().enumerate() {
                if target < w {
                    chosen = i;
                    inner_p = (target / w).min(1.0 - f64::EPSILON);
                    break;
                }
                target -= w;
            }
            let seg = self.segments[chosen];
            let x = invert_exp_line(seg.slope, seg.lo, seg.hi, inner_p);
            if !x.is_finite() || x <= 0.0 {
                continue;
            }
            let u_val = seg.slope * x + seg.intercept;
            let log_w = rng.gen::<f64>().ln();

            if let Some(l) = self.squeeze_at(x) {
                if log_w <= l - u_val {
                    return Ok(x);
                }
            }
            let hx = h(x);
            if log_w <= hx - u_val {
                return Ok(x);
            }
            // Rejected: spend the evaluation on a tighter envelope.
            self.insert(x, hx);
        }
        Err(Error::Domain(
            "adaptive rejection sampler exceeded its rejection budget".into(),
        ))
    }

    /// Total log-mass under the hull; used by tests to sanity-check builds.
    #[cfg(test)]
    fn log_total_mass(&self) -> f64 {
        let lms: Vec<f64> = self.segments.iter().map(|s| s.log_mass).collect();
        crate::numeric::log_sum_exp(&lms)
    }

    /// Upper-hull value at `x`, for validity checks in tests.
    #[cfg(test)]
    fn hull_at(&self, x: f64) -> f64 {
        for s in &self.segments {
            if x >= s.lo && (x <= s.hi || s.hi.is_infinite()) {
                return s.slope * x + s.intercept;
            }
        }
        f64::NEG_INFINITY
    }
}
