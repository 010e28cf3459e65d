//! Spectrally positive alpha-stable Levy processes, alpha in (1, 2).
//!
//! Normalization: Laplace exponent psi(lambda) = lambda^alpha, i.e.
//! E[exp(-lambda X_t)] = exp(t lambda^alpha). The Levy measure is then
//! nu(dx) = C_alpha x^{-alpha-1} dx on (0, inf) with
//! C_alpha = alpha (alpha - 1) / Gamma(2 - alpha), and the process is a
//! martingale (jumps fully compensated by drift).

use crate::error::{Error, Result};
use crate::special::gamma;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Levy-measure prefactor C_alpha for psi(lambda) = lambda^alpha.
pub fn levy_prefactor(alpha: f64) -> f64 {
    alpha * (alpha - 1.0) / gamma(2.0 - alpha)
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(Error::parameter(format!(
            "alpha must lie in (1, 2), got {alpha}"
        )));
    }
    Ok(())
}

/// A sampled path of a spectrally positive stable process or excursion.
///
/// Piecewise values on a (not necessarily uniform) grid, plus explicit
/// records of every retained jump of size >= `truncation`. Paths built by
/// the exact-increment scheme keep no jump records and have truncation 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StablePath {
    pub alpha: f64,
    pub truncation: f64,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    /// (time, size) for each retained jump, time-ordered, sizes > 0
    /// on forward paths (negated by reversal).
    pub jumps: Vec<(f64, f64)>,
}

impl StablePath {
    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if self.times.len() != self.values.len() || self.times.is_empty() {
            return Err(Error::structure("times/values length mismatch"));
        }
        if self.times[0] != 0.0 {
            return Err(Error::structure("times must start at 0"));
        }
        if self.times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::structure("times must be strictly increasing"));
        }
        if self
            .jumps
            .iter()
            .any(|&(_, s)| s.abs() < self.truncation || s == 0.0)
        {
            return Err(Error::structure(
                "jump below the truncation threshold",
            ));
        }
        Ok(())
    }

    pub fn duration(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<StablePath> {
        let p: StablePath = serde_json::from_str(s)?;
        p.validate()?;
        Ok(p)
    }
}

/// One exact draw of X_dt under psi(lambda) = lambda^alpha.
///
/// Chambers-Mallows-Stuck transform for the totally skewed (beta = +1)
/// strictly stable law, rescaled so the Laplace transform comes out as
/// exp(dt lambda^alpha). Self-similar: scales as dt^{1/alpha}.
pub fn sample_stable_increment<R: Rng>(alpha: f64, dt: f64, rng: &mut R) -> Result<f64> {
    check_alpha(alpha)?;
    if dt <= 0.0 {
        return Err(Error::parameter(format!("dt must be positive, got {dt}")));
    }
    Ok(standard_increment(alpha, rng) * dt.powf(1.0 / alpha))
}

/// Unit-time draw, parameter checks skipped (hot loop).
fn standard_increment<R: Rng>(alpha: f64, rng: &mut R) -> f64 {
    // CMS with skew +1: S ~ stable in the S(alpha, beta, 1, 0; 1-param) sense,
    // then scale by (-cos(pi alpha / 2))^{1/alpha} to reach psi = lambda^alpha.
    let half_pi = PI / 2.0;
    let u: f64 = rng.gen_range(-half_pi..half_pi);
    let e: f64 = {
        let x: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        -x.ln()
    };
    let tan_term = (PI * alpha / 2.0).tan();
    let b = tan_term.atan() / alpha;
    let s = (1.0 + tan_term * tan_term).powf(0.5 / alpha);
    let raw = s * (alpha * (u + b)).sin() / u.cos().powf(1.0 / alpha)
        * ((u - alpha * (u + b)).cos() / e).powf((1.0 - alpha) / alpha);
    let c = (-(PI * alpha / 2.0).cos()).powf(1.0 / alpha);
    c * raw
}

/// Small-jump handling for the compound-Poisson path scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SmallJumps {
    /// Drop jumps below the truncation (bias O(eps^{2-alpha})).
    Drop,
    /// Replace them with a Gaussian of matched variance (default).
    MatchedGaussian,
}

/// Compound-Poisson-above-eps path on a uniform grid.
///
/// Jumps of size >= `eps_jump` arrive at rate C_alpha eps^{-alpha}/alpha
/// with Pareto sizes; the compensator drift -C_alpha eps^{1-alpha}/(alpha-1)
/// keeps the path a martingale; small jumps are handled per `small`.
pub fn sample_path_compound<R: Rng>(
    alpha: f64,
    t_max: f64,
    grid_dt: f64,
    eps_jump: f64,
    small: SmallJumps,
    start: f64,
    rng: &mut R,
) -> Result<StablePath> {
    check_alpha(alpha)?;
    if t_max <= 0.0 || grid_dt <= 0.0 || eps_jump <= 0.0 {
        return Err(Error::parameter(
            "t_max, grid_dt and eps_jump must be positive",
        ));
    }
    let c = levy_prefactor(alpha);
    let rate = c * eps_jump.powf(-alpha) / alpha;
    let drift = -c * eps_jump.powf(1.0 - alpha) / (alpha - 1.0);
    let small_sd = match small {
        SmallJumps::Drop => 0.0,
        SmallJumps::MatchedGaussian => (c * eps_jump.powf(2.0 - alpha) / (2.0 - alpha)).sqrt(),
    };
    let n = (t_max / grid_dt).ceil() as usize;
    let mut times = Vec::with_capacity(n + 1);
    let mut values = Vec::with_capacity(n + 1);
    let mut jumps = Vec::new();
    times.push(0.0);
    values.push(start);
    let mut x = start;
    // Next jump arrival, generated as an exponential race across the grid.
    let mut next_jump = exp_draw(rng) / rate;
    for k in 1..=n {
        let t0 = (k - 1) as f64 * grid_dt;
        let t1 = (k as f64 * grid_dt).min(t_max);
        let dt = t1 - t0;
        let mut dx = drift * dt;
        while next_jump <= t1 {
            let size = eps_jump * rng.gen_range(f64::MIN_POSITIVE..1.0f64).powf(-1.0 / alpha);
            jumps.push((next_jump, size));
            dx += size;
            next_jump += exp_draw(rng) / rate;
        }
        if small_sd > 0.0 {
            dx += small_sd * dt.sqrt() * gauss(rng);
        }
        x += dx;
        times.push(t1);
        values.push(x);
    }
    Ok(StablePath {
        alpha,
        truncation: eps_jump,
        times,
        values,
        jumps,
    })
}

/// Exact-increment path on a uniform grid (no jump records).
pub fn sample_path_exact<R: Rng>(
    alpha: f64,
    t_max: f64,
    grid_dt: f64,
    start: f64,
    rng: &mut R,
) -> Result<StablePath> {
    check_alpha(alpha)?;
    if t_max <= 0.0 || grid_dt <= 0.0 {
        return Err(Error::parameter("t_max and grid_dt must be positive"));
    }
    let n = (t_max / grid_dt).ceil() as usize;
    let scale = grid_dt.powf(1.0 / alpha);
    let mut times = Vec::with_capacity(n + 1);
    let mut values = Vec::with_capacity(n + 1);
    times.push(0.0);
    values.push(start);
    let mut x = start;
    for k in 1..=n {
        let t1 = (k as f64 * grid_dt).min(t_max);
        let dt = t1 - times[k - 1];
        let s = if (dt - grid_dt).abs() < 1e-15 * grid_dt {
            scale
        } else {
            dt.powf(1.0 / alpha)
        };
        x += s * standard_increment(alpha, rng);
        times.push(t1);
        values.push(x);
    }
    Ok(StablePath {
        alpha,
        truncation: 0.0,
        times,
        values,
        jumps: Vec::new(),
    })
}

fn exp_draw<R: Rng>(rng: &mut R) -> f64 {
    -rng.gen_range(f64::MIN_POSITIVE..1.0f64).ln()
}

pub(crate) fn gauss<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller; one deviate per call keeps the stream layout simple.
    let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let v: f64 = rng.gen_range(0.0..2.0 * PI);
    (-2.0 * u.ln()).sqrt() * v.cos()
}

/// Which boundary a first-passage excursion approximation hit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Boundary {
    /// First grid value <= 0 (the excursion "died").
    Bottom,
    /// First grid value >= the cap.
    Cap,
}

/// An excursion approximation: a first-passage path plus its exit flag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Excursion {
    pub path: StablePath,
    pub boundary: Boundary,
}

/// First-passage approximation to an excursion: start at `eps_start`,
/// exact increments on an adaptive grid, stop at the first grid time the
/// value leaves (0, stop_cap).
///
/// The step at level x scales like clamp(x, eps_start, cap)^alpha (the
/// process's own time scale), so the zero boundary stays resolvable - the
/// relative step stops shrinking below the start level, which shifts the
/// bottom barrier by O(grid_dt^{1/alpha} eps_start).
pub fn sample_excursion_approx<R: Rng>(
    alpha: f64,
    eps_start: f64,
    stop_cap: f64,
    grid_dt: f64,
    rng: &mut R,
) -> Result<Excursion> {
    sample_excursion_budgeted(alpha, eps_start, stop_cap, grid_dt, 5_000_000, rng)
}

pub fn sample_excursion_budgeted<R: Rng>(
    alpha: f64,
    eps_start: f64,
    stop_cap: f64,
    grid_dt: f64,
    budget: usize,
    rng: &mut R,
) -> Result<Excursion> {
    check_alpha(alpha)?;
    if !(eps_start > 0.0 && eps_start < stop_cap) {
        return Err(Error::parameter(format!(
            "need 0 < eps_start < stop_cap, got {eps_start}, {stop_cap}"
        )));
    }
    if grid_dt <= 0.0 {
        return Err(Error::parameter("grid_dt must be positive"));
    }
    let mut times = vec![0.0];
    let mut values = vec![eps_start];
    let mut x = eps_start;
    let mut t = 0.0;
    for _ in 0..budget {
        let dt = grid_dt * x.clamp(eps_start, stop_cap).powf(alpha);
        x += dt.powf(1.0 / alpha) * standard_increment(alpha, rng);
        t += dt;
        times.push(t);
        values.push(x);
        if x <= 0.0 || x >= stop_cap {
            let boundary = if x <= 0.0 {
                Boundary::Bottom
            } else {
                Boundary::Cap
            };
            return Ok(Excursion {
                path: StablePath {
                    alpha,
                    truncation: 0.0,
                    times,
                    values,
                    jumps: Vec::new(),
                },
                boundary,
            });
        }
    }
    Err(Error::BudgetExceeded {
        budget,
        partial: Some(Box::new(StablePath {
            alpha,
            truncation: 0.0,
            times,
            values,
            jumps: Vec::new(),
        })),
    })
}

/// Compound-Poisson variant of the excursion approximation, keeping jump
/// records (for reversal-law studies). Uniform grid of step `grid_dt`.
pub fn sample_excursion_with_jumps<R: Rng>(
    alpha: f64,
    eps_start: f64,
    stop_cap: f64,
    grid_dt: f64,
    eps_jump: f64,
    budget: usize,
    rng: &mut R,
) -> Result<Excursion> {
    check_alpha(alpha)?;
    if !(eps_start > 0.0 && eps_start < stop_cap) {
        return Err(Error::parameter(format!(
            "need 0 < eps_start < stop_cap, got {eps_start}, {stop_cap}"
        )));
    }
    let c = levy_prefactor(alpha);
    let rate = c * eps_jump.powf(-alpha) / alpha;
    let drift = -c * eps_jump.powf(1.0 - alpha) / (alpha - 1.0);
    let small_sd = (c * eps_jump.powf(2.0 - alpha) / (2.0 - alpha)).sqrt();
    let mut times = vec![0.0];
    let mut values = vec![eps_start];
    let mut jumps = Vec::new();
    let mut x = eps_start;
    let mut t = 0.0;
    let mut next_jump = exp_draw(rng) / rate;
    for _ in 0..budget {
        let t1 = t + grid_dt;
        let mut dx = drift * grid_dt + small_sd * grid_dt.sqrt() * gauss(rng);
        while next_jump <= t1 {
            let size = eps_jump * rng.gen_range(f64::MIN_POSITIVE..1.0f64).powf(-1.0 / alpha);
            jumps.push((next_jump, size));
            dx += size;
            next_jump += exp_draw(rng) / rate;
        }
        x += dx;
        t = t1;
        times.push(t);
        values.push(x);
        if x <= 0.0 || x >= stop_cap {
            let boundary = if x <= 0.0 {
                Boundary::Bottom
            } else {
                Boundary::Cap
            };
            return Ok(Excursion {
                path: StablePath {
                    alpha,
                    truncation: eps_jump,
                    times,
                    values,
                    jumps,
                },
                boundary,
            });
        }
    }
    Err(Error::BudgetExceeded {
        budget,
        partial: Some(Box::new(StablePath {
            alpha,
            truncation: eps_jump,
            times,
            values,
            jumps,
        })),
    })
}

/// Time-reverse a path: times reflect about the final time, values are
/// read backwards, and each upward jump becomes a downward jump at the
/// mirrored time. Exact involution.
pub fn reverse_path(path: &StablePath) -> StablePath {
    let total = *path.times.last().unwrap();
    let mut times: Vec<f64> = path.times.iter().rev().map(|&t| total - t).collect();
    // Reflection can leave tiny negative zero at the front; normalize.
    if let Some(first) = times.first_mut() {
        if *first == -0.0 {
            *first = 0.0;
        }
    }
    let values: Vec<f64> = path.values.iter().rev().copied().collect();
    let mut jumps: Vec<(f64, f64)> = path
        .jumps
        .iter()
        .rev()
        .map(|&(t, s)| (total - t, -s))
        .collect();
    for j in jumps.iter_mut() {
        if j.0 == -0.0 {
            j.0 = 0.0;
        }
    }
    StablePath {
        alpha: path.alpha,
        truncation: path.truncation,
        times,
        values,
        jumps,
    }
}

/// All recorded jumps with |size| >= threshold, in time order.
pub fn extract_jumps(path: &StablePath, threshold: f64) -> Result<Vec<(f64, f64)>> {
    if threshold < path.truncation {
        return Err(Error::parameter(format!(
            "threshold {threshold} below path truncation {}: those jumps were never resolved",
            path.truncation
        )));
    }
    Ok(path
        .jumps
        .iter()
        .copied()
        .filter(|&(_, s)| s.abs() >= threshold)
        .collect())
}
