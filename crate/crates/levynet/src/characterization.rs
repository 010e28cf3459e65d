//! Numerics for the martingale characterization of the branching exponent:
//! reversal/center jump densities with their exact fold identity, the
//! regularized jump integral `I(alpha)` evaluated by two independent
//! methods, root finding for the exponent where `I` vanishes, and a Monte
//! Carlo drift test for the truncated area process.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::levy_net::poisson_draw;
use crate::special::{incomplete_beta, integrate};
use crate::stats::Accumulator;

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(Error::parameter("alpha must lie in (1, 2)"));
    }
    Ok(())
}

/// Unnormalized density, in the jump size `a`, of the downward jumps made by
/// the time-reversed boundary-length process at level `c`:
/// `a^{-alpha-1} (1 - a/c)^{alpha-2}` on `0 < a < c`.
pub fn reversal_jump_density(alpha: f64, a: f64, c: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(c > 0.0) {
        return Err(Error::range("level c must be positive"));
    }
    if !(a > 0.0 && a < c) {
        return Err(Error::range("jump size must lie strictly inside (0, c)"));
    }
    Ok(a.powf(-alpha - 1.0) * (1.0 - a / c).powf(alpha - 2.0))
}

/// Unnormalized density of the folded (center-rooted) jump law on
/// `0 < a <= c/2`, with `b = c - a` the complementary part:
/// `a^{-alpha-1} (b/c)^{-alpha-1}`.
pub fn center_jump_density(alpha: f64, a: f64, c: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(c > 0.0) {
        return Err(Error::range("level c must be positive"));
    }
    if !(a > 0.0 && a <= c / 2.0) {
        return Err(Error::range("center jump size must lie in (0, c/2]"));
    }
    let b = c - a;
    Ok(a.powf(-alpha - 1.0) * (b / c).powf(-alpha - 1.0))
}

/// Residual of the exact fold identity: the two one-sided jump densities at
/// sizes `a` and `b = c - a`, folded onto `(0, c/2]`, equal the area weight
/// `(a/c)^{2 alpha - 1} + (b/c)^{2 alpha - 1}` times the center density.
pub fn fold_identity_check(alpha: f64, a: f64, c: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(c > 0.0 && a > 0.0 && a <= c / 2.0) {
        return Err(Error::range("fold identity needs 0 < a <= c/2"));
    }
    let b = c - a;
    let lhs = a.powf(-alpha - 1.0) * (b / c).powf(alpha - 2.0)
        + (a / c).powf(alpha - 2.0) * b.powf(-alpha - 1.0);
    let weight = (a / c).powf(2.0 * alpha - 1.0) + (b / c).powf(2.0 * alpha - 1.0);
    let rhs = weight * a.powf(-alpha - 1.0) * (b / c).powf(-alpha - 1.0);
    Ok((lhs - rhs).abs())
}

/// A downward jump from level `c` to level `lower` crosses the center of the
/// interval exactly when the lower endpoint sits below `c/2`.
pub fn is_big_jump(lower: f64, c: f64) -> bool {
    lower < c / 2.0
}

/// Probability-integral transform of an observed reversal jump of size `a`
/// from level `c`, conditioned on `a >= eps`: the conditional CDF value of
/// the normalized reversal density on `[eps, c)`. The tail mass
/// `int_w^1 u^{-alpha-1} (1-u)^{alpha-2} du` (with `w = a/c`) is an
/// incomplete beta with positive first parameter after reflection.
pub fn reversal_jump_pit(alpha: f64, a: f64, c: f64, eps: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(eps > 0.0 && eps < c) {
        return Err(Error::range("eps must lie in (0, c)"));
    }
    if !(a >= eps && a < c) {
        return Err(Error::range("jump size must lie in [eps, c)"));
    }
    let tail = |w: f64| incomplete_beta(alpha - 1.0, -alpha, 1.0 - w);
    let total = tail(eps / c)?;
    let above = tail(a / c)?;
    if !(total > 0.0) {
        return Err(Error::numeric("degenerate reversal-jump normalization"));
    }
    Ok((1.0 - above / total).clamp(0.0, 1.0))
}

/// Coefficients of the binomial series `(1 - x)^p = sum_k coeff[k] x^k`.
fn binomial_series(p: f64, terms: usize) -> Vec<f64> {
    let mut coeffs = Vec::with_capacity(terms);
    let mut a = 1.0;
    for k in 0..terms {
        coeffs.push(a);
        a *= (k as f64 - p) / (k as f64 + 1.0);
    }
    coeffs
}

const SERIES_TERMS: usize = 48;

/// Regularized integrand of the jump integral on `(0, 1/2]`:
/// `(x^{2a-1} + (1-x)^{2a-1} - 1) x^{-a-1} (1-x)^{-a-1} + (2a-1) x^{-a}`.
/// Near zero the counterterm cancels the leading singular part, so a series
/// form is used there for numerical stability.
pub fn regularized_integrand(alpha: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(x > 0.0 && x <= 0.5) {
        return Err(Error::range("integrand argument must lie in (0, 1/2]"));
    }
    if x > 1e-3 {
        let core = x.powf(2.0 * alpha - 1.0) + (1.0 - x).powf(2.0 * alpha - 1.0) - 1.0;
        return Ok(core * x.powf(-alpha - 1.0) * (1.0 - x).powf(-alpha - 1.0)
            + (2.0 * alpha - 1.0) * x.powf(-alpha));
    }
    // Split off the integrable singular factor, and expand the rest:
    // the k = 1 term of the series cancels the counterterm exactly.
    let lead = x.powf(alpha - 2.0) * (1.0 - x).powf(-alpha - 1.0);
    let upper = binomial_series(alpha - 2.0, SERIES_TERMS);
    let lower = binomial_series(-alpha - 1.0, SERIES_TERMS);
    let mut rest = 0.0;
    for k in (2..SERIES_TERMS).rev() {
        rest = rest * x + (upper[k] - lower[k]);
    }
    rest *= x * x * x.powf(-alpha - 1.0);
    Ok(lead + rest)
}

/// Exact series value of `int_0^delta` of the regularized integrand, valid
/// for small `delta` (both expansions converge fast for `delta <= 0.01`).
fn small_integral(alpha: f64, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta <= 0.01) {
        return Err(Error::range("series integral needs delta in (0, 0.01]"));
    }
    let upper = binomial_series(alpha - 2.0, SERIES_TERMS);
    let lower = binomial_series(-alpha - 1.0, SERIES_TERMS);
    let mut total = 0.0;
    for k in 0..SERIES_TERMS {
        // Singular-lead piece: x^{alpha-2+k} integrates in closed form.
        total += lower[k] * delta.powf(alpha - 1.0 + k as f64) / (alpha - 1.0 + k as f64);
        if k >= 2 {
            // Remainder piece: x^{k-alpha-1}, with k = 1 already cancelled
            // against the counterterm.
            total += (upper[k] - lower[k]) * delta.powf(k as f64 - alpha) / (k as f64 - alpha);
        }
    }
    Ok(total)
}

const QUAD_SPLIT: f64 = 5e-3;

/// The jump integral by regularized quadrature: analytic series on
/// `[0, 5e-3]` (where the endpoint singularity lives), adaptive quadrature
/// on `[5e-3, 1/2]`, plus the elementary tail
/// `(2 alpha - 1) int_{1/2}^inf x^{-alpha} dx`.
pub fn i_alpha_quadrature(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let head = small_integral(alpha, QUAD_SPLIT)?;
    let mid = integrate(
        |x| regularized_integrand(alpha, x).unwrap_or(f64::NAN),
        QUAD_SPLIT,
        0.5,
        1e-9,
    )?;
    let tail = (2.0 * alpha - 1.0) * 2.0f64.powf(alpha - 1.0) / (alpha - 1.0);
    Ok(head + mid + tail)
}

/// The jump integral in reduced closed form:
/// `-4^alpha / alpha - 2 B_{1/2}(-alpha, 1 - alpha)`, with the incomplete
/// beta analytically continued through its hypergeometric representation.
pub fn i_alpha_closed(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let beta = incomplete_beta(-alpha, 1.0 - alpha, 0.5)?;
    Ok(-4.0f64.powf(alpha) / alpha - 2.0 * beta)
}

/// The pre-simplification four-term form of the closed expression; its two
/// extra terms are `2^{alpha-1} (1 - 2 alpha) / (alpha - 1)` and
/// `(2 alpha - 1)` times the elementary tail integral, which cancel.
pub fn i_alpha_four_term(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let beta = incomplete_beta(-alpha, 1.0 - alpha, 0.5)?;
    let tail_integral = 2.0f64.powf(alpha - 1.0) / (alpha - 1.0);
    Ok(-4.0f64.powf(alpha) / alpha - 2.0 * beta
        + 2.0f64.powf(alpha - 1.0) * (1.0 - 2.0 * alpha) / (alpha - 1.0)
        + (2.0 * alpha - 1.0) * tail_integral)
}

/// Bisection root of a sign-changing evaluator on `[1.1, 1.9]`.
pub fn find_root_by<F: Fn(f64) -> Result<f64>>(f: F, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::parameter("tolerance must be positive"));
    }
    let mut lo = 1.1;
    let mut hi = 1.9;
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::numeric("no sign change over [1.1, 1.9]"));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Exponent at which the closed-form jump integral vanishes.
pub fn find_martingale_alpha(tol: f64) -> Result<f64> {
    find_root_by(i_alpha_closed, tol)
}

/// Result of the truncated-area drift experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DriftEstimate {
    pub alpha: f64,
    pub r: f64,
    pub eps: f64,
    pub n: u64,
    /// Monte Carlo mean of `(A_r - A_0) / r`, including the analytic
    /// correction for the jumps below the truncation `eps`.
    pub mean: f64,
    /// 99.7% confidence halfwidth of the mean.
    pub ci_halfwidth: f64,
    /// Analytic small-jump correction added to the raw Monte Carlo mean.
    pub correction: f64,
    /// Closed-form jump-integral value the drift should match.
    pub reference: f64,
}

/// Maximum compound-Poisson events allowed on one path.
const DRIFT_EVENT_CAP: u64 = 10_000;

/// Monte Carlo drift of the truncated area functional, frozen at state 1.
///
/// Each path draws the jumps of a Poisson process over time length `r` with
/// mark density `x^{-alpha-1} (1-x)^{-alpha-1}` on `[eps, 1/2]`, forms
/// `M = (1 + J + r C)_+` with `J` the negative jump sum and
/// `C = eps^{1-alpha}/(alpha-1)` the compensating drift, and reports
/// `A = M^{2 alpha - 1} + sum of |jump|^{2 alpha - 1}`. The mean of
/// `(A - 1)/r` estimates the jump integral once the analytic value of the
/// omitted sub-`eps` jumps is added back.
pub fn drift_estimate<R: Rng>(
    alpha: f64,
    r: f64,
    eps: f64,
    n: u64,
    rng: &mut R,
) -> Result<DriftEstimate> {
    check_alpha(alpha)?;
    if !(r > 0.0 && r <= 0.1) {
        return Err(Error::parameter("time length r must lie in (0, 0.1]"));
    }
    if !(eps > 0.0 && eps < 0.25) {
        return Err(Error::parameter("truncation eps must lie in (0, 0.25)"));
    }
    if n < 100 {
        return Err(Error::parameter("need at least 100 drift paths"));
    }
    // Mark density split: a pure power part x^{-alpha-1} (sampled by the
    // inverse CDF of y = x^{-alpha}, uniform on its range) and a bounded
    // excess x^{-alpha} g(x) with g(x) = ((1-x)^{-alpha-1} - 1)/x, sampled
    // by rejection from the x^{-alpha} proposal.
    let y_hi = eps.powf(-alpha);
    let y_lo = 2.0f64.powf(alpha);
    let lambda_power = (y_hi - y_lo) / alpha;
    let lambda_excess = integrate(
        |x| x.powf(-alpha - 1.0) * ((1.0 - x).powf(-alpha - 1.0) - 1.0),
        eps,
        0.5,
        1e-9,
    )?;
    let g_max = 2.0 * (2.0f64.powf(alpha + 1.0) - 1.0);
    let z_hi = eps.powf(1.0 - alpha);
    let z_lo = 2.0f64.powf(alpha - 1.0);
    let c_eps = eps.powf(1.0 - alpha) / (alpha - 1.0);
    let correction = small_integral(alpha, eps)?;
    let reference = i_alpha_closed(alpha)?;
    let weight = 2.0 * alpha - 1.0;

    let mut acc = Accumulator::default();
    for _ in 0..n {
        let n_power = poisson_draw(r * lambda_power, rng);
        let n_excess = poisson_draw(r * lambda_excess, rng);
        if n_power + n_excess > DRIFT_EVENT_CAP {
            return Err(Error::numeric("drift path exceeded the event cap"));
        }
        let mut jump_sum = 0.0;
        let mut area_sum = 0.0;
        for _ in 0..n_power {
            let y = y_lo + rng.gen::<f64>() * (y_hi - y_lo);
            let x = y.powf(-1.0 / alpha);
            jump_sum += x;
            // x^{2 alpha - 1} = y^{-2} / x, avoiding a second power call.
            area_sum += 1.0 / (y * y * x);
        }
        for _ in 0..n_excess {
            loop {
                let z = z_lo + rng.gen::<f64>() * (z_hi - z_lo);
                let x = z.powf(1.0 / (1.0 - alpha));
                let g = ((1.0 - x).powf(-alpha - 1.0) - 1.0) / x;
                if rng.gen::<f64>() * g_max < g {
                    jump_sum += x;
                    area_sum += x.powf(weight);
                    break;
                }
            }
        }
        let m = (1.0 - jump_sum + r * c_eps).max(0.0);
        let a_r = m.powf(weight) + area_sum;
        acc.push((a_r - 1.0) / r);
    }
    Ok(DriftEstimate {
        alpha,
        r,
        eps,
        n,
        mean: acc.mean() + correction,
        ci_halfwidth: acc.ci_halfwidth(0.997),
        correction,
        reference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::stream_rng;
    use crate::stats::ks_test;
    use rand::Rng;

    #[test]
    fn reversal_density_values_and_domain() {
        // At a = c/2 the density is (c/2)^{-alpha-1} 2^{2-alpha}.
        let v = reversal_jump_density(1.5, 1.0, 2.0).unwrap();
        assert!((v - 0.5f64.powf(-0.5)).abs() < 1e-14);
        // Blows up as the jump eats almost the whole level.
        let near = reversal_jump_density(1.5, 2.0 - 1e-9, 2.0).unwrap();
        assert!(near > 1e3);
        assert!(reversal_jump_density(1.5, 2.0, 2.0).is_err());
        assert!(reversal_jump_density(1.5, 0.0, 2.0).is_err());
        assert!(center_jump_density(1.5, 1.1, 2.0).is_err());
    }

    #[test]
    fn fold_identity_exact() {
        let mut rng = stream_rng(13, "fold", 0);
        for _ in 0..1000 {
            let alpha = 1.1 + 0.8 * rng.gen::<f64>();
            let c = 1.0 + rng.gen::<f64>();
            let a = c * (0.1 + 0.4 * rng.gen::<f64>());
            let residual = fold_identity_check(alpha, a, c).unwrap();
            assert!(residual < 1e-12, "residual {residual} at ({alpha},{a},{c})");
        }
        // Symmetric point: the two folded one-sided terms coincide.
        let alpha = 1.7f64;
        let c = 1.3f64;
        let a = c / 2.0;
        let term1 = a.powf(-alpha - 1.0) * ((c - a) / c).powf(alpha - 2.0);
        let term2 = (a / c).powf(alpha - 2.0) * (c - a).powf(-alpha - 1.0);
        assert!((term1 - term2).abs() < 1e-12 * term1);
    }

    #[test]
    fn big_jump_classifier() {
        assert!(is_big_jump(0.49, 1.0));
        assert!(!is_big_jump(0.5, 1.0));
        assert!(!is_big_jump(0.51, 1.0));
    }

    #[test]
    fn closed_form_root_and_monotonicity() {
        assert!(i_alpha_closed(1.5).unwrap().abs() < 1e-8);
        // Strictly monotone over a 17-point grid; with this sign convention
        // the integral decreases in alpha, crossing zero at 3/2.
        let mut prev = f64::INFINITY;
        for k in 0..17 {
            let alpha = 1.1 + 0.05 * k as f64;
            let v = i_alpha_closed(alpha).unwrap();
            assert!(v < prev, "not strictly monotone at {alpha}");
            // Four-term and reduced forms agree.
            let four = i_alpha_four_term(alpha).unwrap();
            assert!((four - v).abs() < 1e-9 * (1.0 + v.abs()));
            prev = v;
        }
        assert!(i_alpha_closed(1.25).unwrap() > 0.0);
        assert!(i_alpha_closed(1.75).unwrap() < 0.0);
    }

    #[test]
    fn quadrature_matches_closed_form() {
        for &alpha in &[1.15, 1.35, 1.5, 1.65, 1.85] {
            let q = i_alpha_quadrature(alpha).unwrap();
            let c = i_alpha_closed(alpha).unwrap();
            assert!(
                (q - c).abs() < 1e-6,
                "quadrature {q} vs closed {c} at {alpha}"
            );
        }
        assert!(i_alpha_quadrature(1.5).unwrap().abs() < 1e-6);
    }

    #[test]
    fn integrand_finite_after_regularization() {
        for &alpha in &[1.2, 1.5, 1.8] {
            let v = regularized_integrand(alpha, 1e-12).unwrap();
            assert!(v.is_finite());
            // Only the integrable singular exponents survive regularization;
            // the raw x^{-alpha-1} blow-up must be gone.
            let x: f64 = 1e-12;
            let bound = 1e3 * (x.powf(alpha - 2.0) + x.powf(1.0 - alpha));
            assert!(v.abs() < bound, "unregularized growth at {alpha}: {v}");
            // The series branch agrees with the direct formula evaluated at
            // the same point just below the switch.
            let x: f64 = 9.9e-4;
            let a = regularized_integrand(alpha, x).unwrap();
            let core =
                x.powf(2.0 * alpha - 1.0) + (1.0 - x).powf(2.0 * alpha - 1.0) - 1.0;
            let b = core * x.powf(-alpha - 1.0) * (1.0 - x).powf(-alpha - 1.0)
                + (2.0 * alpha - 1.0) * x.powf(-alpha);
            assert!((a - b).abs() < 1e-6 * (1.0 + a.abs()), "{a} vs {b}");
        }
    }

    #[test]
    fn martingale_root() {
        let root = find_martingale_alpha(1e-7).unwrap();
        assert!((root - 1.5).abs() < 1e-6, "closed-form root {root}");
        let quad_root = find_root_by(i_alpha_quadrature, 1e-6).unwrap();
        assert!((quad_root - root).abs() < 1e-5, "quadrature root {quad_root}");
        // Bracket endpoints have opposite signs.
        let lo = i_alpha_closed(1.1).unwrap();
        let hi = i_alpha_closed(1.9).unwrap();
        assert!(lo.signum() != hi.signum());
    }

    #[test]
    fn reversal_pit_is_uniform() {
        // Draw from the normalized reversal density on [eps, c) by rejection
        // (an independent sampler) and check the transform is Uniform[0,1].
        let alpha = 1.5f64;
        let c = 1.0f64;
        let eps = 0.3f64;
        let mut rng = stream_rng(13, "reversal-pit", 0);
        let mut pit = Vec::with_capacity(2000);
        while pit.len() < 2000 {
            // Proposal density proportional to (1-w)^{alpha-2} on [eps, 1),
            // sampled by inverting its CDF.
            let u: f64 = rng.gen();
            let w = 1.0 - (1.0 - eps) * (1.0 - u).powf(1.0 / (alpha - 1.0));
            let w = w.clamp(eps, 1.0 - 1e-12);
            let accept = (w / eps).powf(-alpha - 1.0);
            if rng.gen::<f64>() < accept {
                pit.push(reversal_jump_pit(alpha, w * c, c, eps).unwrap());
            }
        }
        assert_eq!(reversal_jump_pit(alpha, eps, c, eps).unwrap(), 0.0);
        assert!(reversal_jump_pit(alpha, c * (1.0 - 1e-12), c, eps).unwrap() > 0.999);
        let (_, p) = ks_test(&pit, |u| u.clamp(0.0, 1.0)).unwrap();
        assert!(p > 0.01, "reversal PIT p-value {p}");
    }

    #[test]
    fn drift_sign_small_ensemble() {
        let mut rng = stream_rng(13, "drift-unit", 0);
        let at_half = drift_estimate(1.5, 1e-2, 1e-3, 20_000, &mut rng).unwrap();
        assert!(
            at_half.mean.abs() < at_half.ci_halfwidth + 0.1,
            "drift at 3/2: {} +- {}",
            at_half.mean,
            at_half.ci_halfwidth
        );
        let mut rng = stream_rng(13, "drift-unit", 1);
        let low = drift_estimate(1.25, 1e-2, 1e-3, 20_000, &mut rng).unwrap();
        assert!(low.mean - low.ci_halfwidth > 0.0, "drift at 1.25: {}", low.mean);
        assert!(low.reference > 0.0);
        assert!((low.mean - low.reference).abs() < 3.0 * low.ci_halfwidth);
    }

    #[test]
    fn drift_stable_under_truncation_refinement() {
        let mut rng = stream_rng(13, "drift-eps", 0);
        let coarse = drift_estimate(1.5, 1e-2, 1e-3, 50_000, &mut rng).unwrap();
        let mut rng = stream_rng(13, "drift-eps", 1);
        let fine = drift_estimate(1.5, 1e-2, 5e-4, 50_000, &mut rng).unwrap();
        assert!(
            (coarse.mean - fine.mean).abs() < coarse.ci_halfwidth,
            "eps refinement moved the estimate: {} vs {}",
            coarse.mean,
            fine.mean
        );
    }
}
