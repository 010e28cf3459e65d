//! Continuous state branching processes with mechanism psi(lambda) =
//! lambda^alpha: Lamperti transform, closed-form Laplace/extinction
//! formulas, and the subordinator-ratio identity.

use crate::error::{Error, Result};
use crate::stable::{check_alpha, StablePath};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// A CSBP path: nonnegative values on an increasing grid, absorbing at 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsbpPath {
    pub alpha: f64,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    /// First time the value hit 0, if it did.
    pub absorption_time: Option<f64>,
    /// The generating Levy path, when the transform was applied to one.
    #[serde(skip)]
    pub source: Option<StablePath>,
}

impl CsbpPath {
    /// Value at time t (piecewise-constant, left rule); 0 after absorption.
    pub fn value_at(&self, t: f64) -> f64 {
        if let Some(a) = self.absorption_time {
            if t >= a {
                return 0.0;
            }
        }
        let idx = match self
            .times
            .binary_search_by(|probe| probe.partial_cmp(&t).unwrap())
        {
            Ok(i) => i,
            Err(0) => 0,
            Err(i) => i - 1,
        };
        self.values[idx]
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if self.times.len() != self.values.len() || self.times.is_empty() {
            return Err(Error::structure("times/values length mismatch"));
        }
        if self.values.iter().any(|&v| v < 0.0) {
            return Err(Error::structure("CSBP values must be nonnegative"));
        }
        // once 0, forever 0
        if let Some(first_zero) = self.values.iter().position(|&v| v == 0.0) {
            if self.values[first_zero..].iter().any(|&v| v != 0.0) {
                return Err(Error::structure("absorption at 0 must be absorbing"));
            }
        }
        Ok(())
    }
}

/// Lamperti transform of a gridded Levy path into a CSBP path.
///
/// CSBP time accumulates as d(kappa) = dt / X (left rule, exact for
/// piecewise-constant inputs); the path is absorbed at the first grid
/// point with value <= 0.
pub fn lamperti(levy: &StablePath) -> Result<CsbpPath> {
    if levy.values.is_empty() || levy.values[0] <= 0.0 {
        return Err(Error::parameter("lamperti needs a positive starting value"));
    }
    let mut times = vec![0.0];
    let mut values = vec![levy.values[0]];
    let mut kappa = 0.0;
    let mut absorption_time = None;
    for i in 1..levy.times.len() {
        let dt = levy.times[i] - levy.times[i - 1];
        kappa += dt / levy.values[i - 1];
        let v = levy.values[i];
        times.push(kappa);
        if v <= 0.0 {
            values.push(0.0);
            absorption_time = Some(kappa);
            break;
        }
        values.push(v);
    }
    Ok(CsbpPath {
        alpha: levy.alpha,
        times,
        values,
        absorption_time,
        source: Some(levy.clone()),
    })
}

/// Step-size control for the direct (streaming) CSBP sampler.
///
/// The underlying Levy increment at level x spans dt0 * x^alpha of Levy
/// time (the self-similar scale), the clock advances by the trapezoid rule
/// in 1/x, and levels below `floor` count as extinct (the residual CSBP
/// lifetime from the floor is O(floor^{alpha-1})).
#[derive(Debug, Clone, Copy)]
pub struct LampertiConfig {
    pub dt0: f64,
    pub floor: f64,
    pub max_steps: usize,
}

impl Default for LampertiConfig {
    fn default() -> Self {
        LampertiConfig {
            dt0: 5e-4,
            floor: 1e-6,
            max_steps: 100_000_000,
        }
    }
}

/// Values of one CSBP trajectory at the requested (sorted) times.
/// Extinct entries are 0. Seed-deterministic given the RNG state.
pub fn sample_csbp_values<R: Rng>(
    alpha: f64,
    y0: f64,
    ts: &[f64],
    cfg: &LampertiConfig,
    rng: &mut R,
) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    if y0 <= 0.0 {
        return Err(Error::parameter(format!("y0 must be positive, got {y0}")));
    }
    if ts.windows(2).any(|w| w[1] < w[0]) || ts.iter().any(|&t| t < 0.0) {
        return Err(Error::parameter("requested times must be sorted and nonnegative"));
    }
    let mut out = Vec::with_capacity(ts.len());
    let mut next = 0usize;
    while next < ts.len() && ts[next] == 0.0 {
        out.push(y0);
        next += 1;
    }
    if next == ts.len() {
        return Ok(out);
    }
    let t_last = *ts.last().unwrap();
    let mut x = y0;
    let mut t = 0.0; // CSBP time
    for _ in 0..cfg.max_steps {
        let dt_levy = cfg.dt0 * x.powf(alpha);
        let inc =
            dt_levy.powf(1.0 / alpha) * crate::stable::sample_stable_increment(alpha, 1.0, rng)?;
        let x_new = x + inc;
        if x_new <= cfg.floor {
            // Extinct: everything still pending reads 0.
            while next < ts.len() {
                out.push(0.0);
                next += 1;
            }
            return Ok(out);
        }
        let dt_csbp = dt_levy * 0.5 * (1.0 / x + 1.0 / x_new);
        let t_new = t + dt_csbp;
        while next < ts.len() && ts[next] <= t_new {
            out.push(x);
            next += 1;
        }
        if t_new > t_last {
            return Ok(out);
        }
        x = x_new;
        t = t_new;
    }
    Err(Error::BudgetExceeded {
        budget: cfg.max_steps,
        partial: None,
    })
}

/// Full CSBP trajectory up to t_max, decimated onto a uniform output grid.
pub fn sample_csbp_path<R: Rng>(
    alpha: f64,
    y0: f64,
    t_max: f64,
    out_dt: f64,
    cfg: &LampertiConfig,
    rng: &mut R,
) -> Result<CsbpPath> {
    if t_max <= 0.0 || out_dt <= 0.0 {
        return Err(Error::parameter("t_max and out_dt must be positive"));
    }
    let n = (t_max / out_dt).ceil() as usize;
    let ts: Vec<f64> = (0..=n).map(|k| (k as f64 * out_dt).min(t_max)).collect();
    let vals = sample_csbp_values(alpha, y0, &ts, cfg, rng)?;
    let absorption_time = vals
        .iter()
        .position(|&v| v == 0.0)
        .map(|i| ts[i]);
    Ok(CsbpPath {
        alpha,
        times: ts,
        values: vals,
        absorption_time,
        source: None,
    })
}

/// Closed-form Laplace functional: u_t(lambda) with
/// E[exp(-lambda Y_t) | Y_0 = y0] = exp(-y0 u_t(lambda)).
pub fn u_lambda(alpha: f64, lambda: f64, t: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if lambda <= 0.0 || t < 0.0 {
        return Err(Error::parameter(format!(
            "need lambda > 0 and t >= 0, got {lambda}, {t}"
        )));
    }
    Ok((lambda.powf(1.0 - alpha) + (alpha - 1.0) * t).powf(1.0 / (1.0 - alpha)))
}

/// P[extinction time > t | Y_0 = y0] = 1 - exp(-((alpha-1) t)^{1/(1-alpha)} y0).
pub fn extinction_tail(alpha: f64, y0: f64, t: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if y0 <= 0.0 || t <= 0.0 {
        return Err(Error::parameter(format!(
            "need y0, t > 0, got {y0}, {t}"
        )));
    }
    Ok(1.0 - extinction_cdf(alpha, y0, t)?)
}

/// P[extinction time <= t | Y_0 = y0] = exp(-((alpha-1) t)^{1/(1-alpha)} y0);
/// as a function of y0 at fixed t this is a Frechet-type profile.
pub fn extinction_cdf(alpha: f64, y0: f64, t: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if y0 <= 0.0 || t <= 0.0 {
        return Err(Error::parameter(format!("need y0, t > 0, got {y0}, {t}")));
    }
    Ok((-((alpha - 1.0) * t).powf(1.0 / (1.0 - alpha)) * y0).exp())
}

/// Monte Carlo check of the ratio identity E[A/(A+B)] = a/(a+b), where A, B
/// are independent CSBP values at time t started from masses a and b.
/// Fully-extinct pairs are discarded; the discard fraction is returned.
pub fn subordinator_ratio_estimate<R: Rng>(
    alpha: f64,
    a: f64,
    b: f64,
    t: f64,
    n: usize,
    cfg: &LampertiConfig,
    rng: &mut R,
) -> Result<RatioEstimate> {
    if a <= 0.0 || b <= 0.0 {
        return Err(Error::parameter(format!(
            "initial masses must be positive, got {a}, {b}"
        )));
    }
    if n < 2 {
        return Err(Error::parameter("need at least 2 samples"));
    }
    let ts = [t];
    let mut acc = crate::stats::Accumulator::default();
    let mut discarded = 0usize;
    for _ in 0..n {
        let ya = sample_csbp_values(alpha, a, &ts, cfg, rng)?[0];
        let yb = sample_csbp_values(alpha, b, &ts, cfg, rng)?[0];
        if ya + yb > 0.0 {
            acc.push(ya / (ya + yb));
        } else {
            discarded += 1;
        }
    }
    if acc.count() < 2 {
        return Err(Error::DegenerateSample(
            "all sampled pairs were extinct".to_string(),
        ));
    }
    Ok(RatioEstimate {
        mean: acc.mean(),
        ci_halfwidth: acc.ci_halfwidth(0.95),
        discard_fraction: discarded as f64 / n as f64,
    })
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RatioEstimate {
    pub mean: f64,
    pub ci_halfwidth: f64,
    pub discard_fraction: f64,
}
