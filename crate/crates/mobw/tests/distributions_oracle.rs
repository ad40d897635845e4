//! Oracle checks of the bivariate law and its building blocks against
//! first-principles quadrature and brute-force sampling.

mod support;

use mobw::distributions::{Cause, GdParams, MobwParams, WeibullParams};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use support::*;

const ALPHA: f64 = 1.7;
const L0: f64 = 0.4;
const L1: f64 = 0.7;
const L2: f64 = 0.9;

fn params() -> MobwParams {
    MobwParams::new(ALPHA, L0, L1, L2).unwrap()
}

/// Upper integration limit with survival below 1e-14 for the test params.
const T_MAX: f64 = 8.0;

#[test]
fn joint_density_normalizes_across_both_wedges_and_diagonal() {
    let p = params();
    // The density vanishes as either coordinate reaches 0 (shape > 1), so
    // quadrature endpoints can take the limit value directly.
    let f = |x1: f64, x2: f64| {
        if x1 <= 0.0 || x2 <= 0.0 {
            0.0
        } else {
            p.log_density(x1, x2).unwrap().exp()
        }
    };
    // Lower wedge x1 < x2: for fixed x2, integrate x1 over (0, x2). The
    // inner upper limit stays strictly inside the wedge so the quadrature
    // endpoint samples the wedge branch, not the singular diagonal.
    let inside = 1.0 - 1e-9;
    let lower = simpson(
        |x2| simpson(|x1| f(x1, x2), 0.0, x2 * inside, 400),
        0.0,
        T_MAX,
        400,
    );
    let upper = simpson(
        |x1| simpson(|x2| f(x1, x2), 0.0, x1 * inside, 400),
        0.0,
        T_MAX,
        400,
    );
    let diag = simpson(|x| f(x, x), 0.0, T_MAX, 4000);
    let total = lower + upper + diag;
    assert!(
        (total - 1.0).abs() < 1e-4,
        "wedges {lower} + {upper} + diagonal {diag} = {total}"
    );
    // The diagonal carries exactly the shock share of the mass.
    assert!((diag - L0 / (L0 + L1 + L2)).abs() < 1e-6, "diagonal mass {diag}");
}

#[test]
fn off_diagonal_density_is_mixed_derivative_of_survival() {
    let p = params();
    let h = 1e-4;
    for (x1, x2) in [(0.7, 1.3), (1.5, 0.6), (0.4, 0.9), (2.0, 0.3)] {
        let s = |u: f64, v: f64| p.log_survival(u, v).unwrap().exp();
        let mixed = (s(x1 + h, x2 + h) - s(x1 + h, x2 - h) - s(x1 - h, x2 + h)
            + s(x1 - h, x2 - h))
            / (4.0 * h * h);
        let f = p.log_density(x1, x2).unwrap().exp();
        assert!(
            (mixed - f).abs() < 1e-3 * f.max(1e-3),
            "at ({x1},{x2}): finite-difference {mixed} vs density {f}"
        );
    }
}

#[test]
fn survival_matches_first_principles_product() {
    let p = params();
    for (x1, x2) in [(0.5, 1.0), (1.0, 0.5), (0.8, 0.8), (0.0, 2.0), (3.0, 0.0)] {
        let s = p.log_survival(x1, x2).unwrap().exp();
        // P(U1>x1, U2>x2, U0>max) from the three independent latents.
        let direct = weib_sf(x1, ALPHA, L1) * weib_sf(x2, ALPHA, L2)
            * weib_sf(x1.max(x2), ALPHA, L0);
        assert!(
            (s - direct).abs() < 1e-12,
            "at ({x1},{x2}): {s} vs {direct}"
        );
    }
}

#[test]
fn min_cause_sub_densities_integrate_to_cause_shares() {
    // P(T in dt, cause j) = f_WE(t; l_j) * prod_{k != j} S_WE(t; l_k).
    let total = L0 + L1 + L2;
    for (lam_j, share) in [(L0, L0 / total), (L1, L1 / total), (L2, L2 / total)] {
        let g = |t: f64| weib_pdf(t, ALPHA, lam_j) * weib_sf(t, ALPHA, total - lam_j);
        let mass = simpson(g, 0.0, T_MAX, 8000);
        assert!((mass - share).abs() < 1e-6, "share {share} got {mass}");
    }
}

#[test]
fn sampled_minimum_is_weibull_and_causes_follow_rates() {
    let p = params();
    let total = L0 + L1 + L2;
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let m = 200_000;
    let mut times = Vec::with_capacity(m);
    let mut counts = [0usize; 3];
    let mut by_cause: [Vec<f64>; 3] = Default::default();
    for _ in 0..m {
        let (t, c) = p.sample(&mut rng);
        times.push(t);
        counts[c.code() as usize] += 1;
        by_cause[c.code() as usize].push(t);
    }
    let cdf = |t: f64| 1.0 - weib_sf(t, ALPHA, total);
    let d = ks_one_sample(&times, cdf);
    assert!(d < 0.005, "KS of minimum against pooled Weibull: {d}");

    for (j, share) in [L0 / total, L1 / total, L2 / total].into_iter().enumerate() {
        let freq = counts[j] as f64 / m as f64;
        let se = (share * (1.0 - share) / m as f64).sqrt();
        assert!(
            (freq - share).abs() < 4.0 * se,
            "cause {j}: frequency {freq} vs share {share}"
        );
        // The minimum and its cause are independent for this law, so each
        // conditional time sample follows the same pooled Weibull.
        let dj = ks_one_sample(&by_cause[j], cdf);
        assert!(dj < 0.012, "KS given cause {j}: {dj}");
    }
}

#[test]
fn gamma_dirichlet_sampler_matches_closed_form_moments() {
    // Deliberately a != a0+a1+a2 so the total and the split are coupled
    // through nothing but the construction.
    let g = GdParams::new(3.0, 2.0, 1.0, 2.0, 1.5).unwrap();
    let (a, b, abar) = (3.0, 2.0, 4.5);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let m = 200_000;
    let mut comps: [Vec<f64>; 3] = Default::default();
    for _ in 0..m {
        let s = g.sample(&mut rng);
        comps[0].push(s.lambda0);
        comps[1].push(s.lambda1);
        comps[2].push(s.lambda2);
    }
    for (j, aj) in [1.0, 2.0, 1.5].into_iter().enumerate() {
        let want_mean = (a / b) * (aj / abar);
        // E[lambda_j^2] = E[lambda^2] E[p_j^2].
        let want_second = (a * (a + 1.0) / (b * b)) * (aj * (aj + 1.0) / (abar * (abar + 1.0)));
        let want_var = want_second - want_mean * want_mean;
        let got_mean = mean(&comps[j]);
        let got_sd = sd(&comps[j]);
        let se = got_sd / (m as f64).sqrt();
        assert!(
            (got_mean - want_mean).abs() < 5.0 * se,
            "component {j}: mean {got_mean} vs {want_mean}"
        );
        assert!(
            (got_sd * got_sd - want_var).abs() < 0.02 * want_var,
            "component {j}: var {} vs {want_var}",
            got_sd * got_sd
        );
    }
}

#[test]
fn ordered_sampler_sorts_and_preserves_the_shock_component() {
    let g = GdParams::new(4.0, 2.0, 1.0, 2.0, 1.5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let m = 100_000;
    let mut plain0 = Vec::with_capacity(m);
    let mut ordered0 = Vec::with_capacity(m);
    let mut mins = Vec::with_capacity(m);
    let mut ordered1 = Vec::with_capacity(m);
    for _ in 0..m {
        let s = g.sample(&mut rng);
        plain0.push(s.lambda0);
        mins.push(s.lambda1.min(s.lambda2));
        let o = g.sample_pogd(&mut rng);
        assert!(o.lambda1 <= o.lambda2);
        ordered0.push(o.lambda0);
        ordered1.push(o.lambda1);
    }
    // Sorting the last two components must not disturb the first, and the
    // smaller component must be distributed as min(lambda1, lambda2).
    let d0 = ks_two_sample(&plain0, &ordered0);
    assert!(d0 < 0.01, "lambda0 marginal changed: KS {d0}");
    let d1 = ks_two_sample(&mins, &ordered1);
    assert!(d1 < 0.01, "ordered lambda1 vs min law: KS {d1}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn survival_is_monotone_and_bounded(
        alpha in 0.3f64..4.0,
        l0 in 0.1f64..3.0,
        l1 in 0.1f64..3.0,
        l2 in 0.1f64..3.0,
        x1 in 0.0f64..4.0,
        x2 in 0.0f64..4.0,
        step in 0.01f64..1.0,
    ) {
        let p = MobwParams::new(alpha, l0, l1, l2).unwrap();
        let s = p.log_survival(x1, x2).unwrap().exp();
        prop_assert!((0.0..=1.0).contains(&s));
        let s1 = p.log_survival(x1 + step, x2).unwrap().exp();
        let s2 = p.log_survival(x1, x2 + step).unwrap().exp();
        prop_assert!(s1 <= s + 1e-12);
        prop_assert!(s2 <= s + 1e-12);
    }

    #[test]
    fn weibull_survival_and_density_match_first_principles(
        alpha in 0.3f64..4.0,
        lam in 0.05f64..5.0,
        t in 0.0f64..6.0,
    ) {
        let w = WeibullParams::new(alpha, lam).unwrap();
        prop_assert!((w.survival(t).unwrap() - weib_sf(t, alpha, lam)).abs() < 1e-12);
        if t > 1e-3 {
            let f = w.log_pdf(t).unwrap().exp();
            prop_assert!((f - weib_pdf(t, alpha, lam)).abs() < 1e-9 * f.max(1.0));
        }
    }

    #[test]
    fn cause_codes_round_trip(code in 0u8..3) {
        let c = Cause::from_code(code).unwrap();
        prop_assert_eq!(c.code(), code);
    }
}
