//! Statistical machinery for the verification suites: Kolmogorov-Smirnov
//! tests, normal-approximation confidence intervals, Poisson dispersion,
//! and log-log rank-plot slope fits.

use crate::error::{Error, Result};

/// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} e^{-2 k^2 lambda^2}.
fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 1e-8 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let term = sign * (-2.0 * (k as f64).powi(2) * lambda * lambda).exp();
        sum += term;
        if term.abs() < 1e-12 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

fn ks_p_value(d: f64, n_eff: f64) -> f64 {
    // Stephens' small-sample correction to the asymptotic distribution.
    let sqrt_n = n_eff.sqrt();
    kolmogorov_q(d * (sqrt_n + 0.12 + 0.11 / sqrt_n))
}

/// One-sample KS test of `samples` against the CDF `cdf`.
///
/// Returns (D, p). Requires n >= 20 for the asymptotic p-value to be usable.
pub fn ks_test<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<(f64, f64)> {
    let n = samples.len();
    if n < 20 {
        return Err(Error::parameter(format!("ks_test needs n >= 20, got {n}")));
    }
    let mut xs = samples.to_vec();
    xs.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let nf = n as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        let hi = (i as f64 + 1.0) / nf - f;
        let lo = f - i as f64 / nf;
        d = d.max(hi).max(lo);
    }
    Ok((d, ks_p_value(d, nf)))
}

/// Two-sample KS test. Returns (D, p) with effective size n1*n2/(n1+n2).
pub fn two_sample_ks(a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
    if a.len() < 20 || b.len() < 20 {
        return Err(Error::parameter("two_sample_ks needs n >= 20 in each sample"));
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_unstable_by(|p, q| p.partial_cmp(q).unwrap());
    ys.sort_unstable_by(|p, q| p.partial_cmp(q).unwrap());
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let mut i = 0usize;
    let mut j = 0usize;
    let mut d: f64 = 0.0;
    while i < xs.len() && j < ys.len() {
        if xs[i] <= ys[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let n_eff = na * nb / (na + nb);
    Ok((d, ks_p_value(d, n_eff)))
}

/// z-quantiles for the confidence levels used in the suites.
fn z_for_level(level: f64) -> f64 {
    // Two-sided; the suites only use these fixed levels.
    if (level - 0.95).abs() < 1e-9 {
        1.959964
    } else if (level - 0.99).abs() < 1e-9 {
        2.575829
    } else if (level - 0.999).abs() < 1e-9 {
        3.290527
    } else {
        // Fallback: crude inverse via bisection of erf.
        inverse_normal_cdf(0.5 + level / 2.0)
    }
}

fn inverse_normal_cdf(p: f64) -> f64 {
    // Acklam's rational approximation; plenty for CI half-widths.
    let a = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    let b = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    let c = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    let d = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    let plow = 0.02425;
    if p < plow {
        let q = (-2.0 * p.ln()).sqrt();
        (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5])
            / ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0)
    } else if p <= 1.0 - plow {
        let q = p - 0.5;
        let r = q * q;
        (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q
            / (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0)
    } else {
        -inverse_normal_cdf(1.0 - p)
    }
}

/// Sample mean with a normal-approximation CI half-width at `level`.
pub fn mean_ci(samples: &[f64], level: f64) -> Result<(f64, f64)> {
    if samples.len() < 2 {
        return Err(Error::parameter("mean_ci needs n >= 2"));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok((mean, z_for_level(level) * (var / n).sqrt()))
}

/// Streaming mean/variance accumulator, so big ensembles need not be stored.
#[derive(Debug, Clone, Default)]
pub struct Accumulator {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Accumulator {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }
    pub fn merge(&mut self, other: &Accumulator) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = other.clone();
            return;
        }
        let n1 = self.n as f64;
        let n2 = other.n as f64;
        let d = other.mean - self.mean;
        let n = n1 + n2;
        self.mean += d * n2 / n;
        self.m2 += other.m2 + d * d * n1 * n2 / n;
        self.n += other.n;
    }
    pub fn count(&self) -> u64 {
        self.n
    }
    pub fn mean(&self) -> f64 {
        self.mean
    }
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n as f64 - 1.0)
        }
    }
    pub fn standard_error(&self) -> f64 {
        (self.variance() / self.n as f64).sqrt()
    }
    pub fn ci_halfwidth(&self, level: f64) -> f64 {
        z_for_level(level) * self.standard_error()
    }
}

/// Variance-to-mean ratio of integer counts (1.0 under a Poisson law).
pub fn poisson_dispersion(counts: &[u64]) -> Result<f64> {
    if counts.len() < 2 {
        return Err(Error::parameter("poisson_dispersion needs n >= 2"));
    }
    let n = counts.len() as f64;
    let mean = counts.iter().map(|&c| c as f64).sum::<f64>() / n;
    if mean == 0.0 {
        return Err(Error::DegenerateSample("all counts are zero".to_string()));
    }
    let var = counts
        .iter()
        .map(|&c| (c as f64 - mean).powi(2))
        .sum::<f64>()
        / (n - 1.0);
    Ok(var / mean)
}

/// Least-squares slope of log(rank) against log(value) over the samples whose
/// values lie in [lo, hi]. For a tail P[X > x] ~ x^s this estimates s.
pub fn rank_plot_slope(samples: &[f64], lo: f64, hi: f64) -> Result<f64> {
    let mut xs: Vec<f64> = samples.iter().copied().filter(|x| x.is_finite()).collect();
    xs.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap()); // descending
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for (i, &x) in xs.iter().enumerate() {
        if x >= lo && x <= hi {
            // rank i+1 = number of samples >= x
            pts.push((x.ln(), ((i + 1) as f64).ln()));
        }
    }
    if pts.len() < 10 {
        return Err(Error::DegenerateSample(format!(
            "only {} samples in the fit window",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateSample("zero variance in fit window".to_string()));
    }
    Ok(sxy / sxx)
}

/// Binomial standard error of a proportion estimate.
pub fn binomial_se(p_hat: f64, n: u64) -> f64 {
    (p_hat * (1.0 - p_hat) / n as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn ks_null_case_passes() {
        let mut rng = crate::seed::stream_rng(1, "ks-null", 0);
        let samples: Vec<f64> = (0..5000).map(|_| rng.gen::<f64>()).collect();
        let (d, p) = ks_test(&samples, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!((0.0..=1.0).contains(&d));
        assert!(p > 0.01, "null-case p = {p}");
    }

    #[test]
    fn ks_gross_mismatch_rejected() {
        // Uniform samples against a Frechet CDF exp(-x^-2).
        let mut rng = crate::seed::stream_rng(1, "ks-mismatch", 0);
        let samples: Vec<f64> = (0..10_000).map(|_| rng.gen::<f64>()).collect();
        let (_, p) = ks_test(&samples, |x: f64| {
            if x <= 0.0 {
                0.0
            } else {
                (-x.powi(-2)).exp()
            }
        })
        .unwrap();
        assert!(p < 1e-6, "gross mismatch p = {p}");
    }

    #[test]
    fn ks_rejects_tiny_samples() {
        assert!(ks_test(&[0.5; 5], |x| x).is_err());
    }

    #[test]
    fn two_sample_ks_null_case() {
        let mut rng = crate::seed::stream_rng(2, "ks2-null", 0);
        let a: Vec<f64> = (0..4000).map(|_| rng.gen::<f64>()).collect();
        let b: Vec<f64> = (0..4000).map(|_| rng.gen::<f64>()).collect();
        let (_, p) = two_sample_ks(&a, &b).unwrap();
        assert!(p > 0.01);
    }

    #[test]
    fn mean_ci_covers_true_mean() {
        let mut rng = crate::seed::stream_rng(3, "ci", 0);
        let samples: Vec<f64> = (0..20_000).map(|_| rng.gen::<f64>()).collect();
        let (mean, hw) = mean_ci(&samples, 0.999).unwrap();
        assert!((mean - 0.5).abs() < hw);
        assert!(hw > 0.0);
    }

    #[test]
    fn accumulator_matches_direct_computation() {
        let xs = [1.0, 2.0, 4.0, 8.0, 16.5];
        let mut acc = Accumulator::default();
        for &x in &xs {
            acc.push(x);
        }
        let (mean, _) = mean_ci(&xs, 0.95).unwrap();
        assert!((acc.mean() - mean).abs() < 1e-12);
        let mut a = Accumulator::default();
        let mut b = Accumulator::default();
        for &x in &xs[..2] {
            a.push(x);
        }
        for &x in &xs[2..] {
            b.push(x);
        }
        a.merge(&b);
        assert!((a.mean() - mean).abs() < 1e-12);
        assert!((a.variance() - acc.variance()).abs() < 1e-12);
    }

    #[test]
    fn dispersion_of_poisson_counts_near_one() {
        let mut rng = crate::seed::stream_rng(4, "disp", 0);
        // Poisson(9) via thinning a exponential race.
        let counts: Vec<u64> = (0..10_000)
            .map(|_| {
                let mut k = 0u64;
                let mut prod: f64 = rng.gen();
                let floor = (-9.0f64).exp();
                while prod > floor {
                    prod *= rng.gen::<f64>();
                    k += 1;
                }
                k
            })
            .collect();
        let r = poisson_dispersion(&counts).unwrap();
        assert!((0.9..=1.1).contains(&r), "dispersion {r}");
    }

    #[test]
    fn rank_slope_recovers_pareto_tail() {
        let mut rng = crate::seed::stream_rng(5, "slope", 0);
        let samples: Vec<f64> = (0..50_000)
            .map(|_| rng.gen::<f64>().powf(-2.0)) // P[X > x] = x^{-1/2}
            .collect();
        let s = rank_plot_slope(&samples, 10.0, 1e4).unwrap();
        assert!((s + 0.5).abs() < 0.05, "slope {s}");
    }
}
