//! Small numeric helpers shared across modules: stable log-sum-exp,
//! saturating exponentials, a golden-section maximizer, mode location on the
//! positive half-line, compensated summation and adaptive quadrature.

use crate::error::{Error, Result};

/// Largest exponent fed to `exp` when the result participates in a
/// log-density. `exp(708)` is still finite in f64; anything larger would
/// produce `inf` and poison downstream arithmetic, so saturate instead.
pub(crate) const MAX_EXP: f64 = 708.0;

/// `exp(x)` saturated so the result stays finite (≈3e307 at the cap).
#[inline]
pub(crate) fn exp_clamped(x: f64) -> f64 {
    x.min(MAX_EXP).exp()
}

/// `ln(exp(a) + exp(b))` without overflow.
#[inline]
pub(crate) fn log_sum_exp_pair(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln Σ exp(x_i)` with the usual max shift. Empty input yields `-inf`.
pub(crate) fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    m + xs.iter().map(|&x| (x - m).exp()).sum::<f64>().ln()
}

/// Golden-section search for the maximum of a unimodal function on `[lo, hi]`.
///
/// Returns `(argmax, max)`. The bracket shrinks until its width drops below
/// `tol * (1 + |mid|)`, so `tol` acts as a relative tolerance away from zero.
pub(crate) fn golden_max(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol * (1.0 + 0.5 * (a.abs() + b.abs())) {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    (mid, f(mid))
}

/// Locates the mode of a unimodal function on `(0, inf)`.
///
/// A geometric scan brackets the maximum, then golden-section search refines
/// it. Fails if the maximum sits at the edge of the scanned range (roughly
/// `1e-9` to `1e9`), which for the densities handled here signals
/// pathological inputs rather than a real mode.
pub(crate) fn find_positive_mode(f: impl Fn(f64) -> f64) -> Result<(f64, f64)> {
    let grid: Vec<f64> = (-20..=40).map(|j| 1e-3 * f64::powi(2.0, j)).collect();
    let steps = grid.len();
    let vals: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let mut best = 0;
    for (j, &v) in vals.iter().enumerate() {
        if v > vals[best] {
            best = j;
        }
    }
    if !vals[best].is_finite() {
        return Err(Error::ModeSearch(
            "objective is nowhere finite on the scan grid".into(),
        ));
    }
    if best == 0 || best == steps - 1 {
        return Err(Error::ModeSearch(format!(
            "maximum at the edge of the scanned range (near {})",
            grid[best]
        )));
    }
    let (x, fx) = golden_max(&f, grid[best - 1], grid[best + 1], 1e-11);
    Ok((x, fx))
}

/// Kahan-compensated sum; keeps the error independent of length.
pub(crate) fn kahan_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for x in xs {
        let y = x - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute tolerance
/// `tol`. Depth-limited; inputs here are smooth unimodal integrands.
pub(crate) fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    recurse(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 50)
}
