//! The breadth-first net skeleton (boundary-length process Z plus
//! attachment points), geodesic-pair dynamics, coalescence counting, and
//! the Poisson-point-process merge-depth (slice) model.

use crate::csbp::{extinction_cdf, sample_csbp_values, LampertiConfig};
use crate::error::{Error, Result};
use crate::forest::{attachment_positions, ForestProfile};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// One jump of the boundary-length process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkeletonJump {
    pub t: f64,
    pub size: f64,
    /// Attachment position in [0, pre-jump boundary length].
    pub attach: f64,
}

/// Boundary-length skeleton of a net: the process Z with its jump records
/// and attachment positions. Per the correspondence theorem this data
/// determines the net, so it is all we ever materialize.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevyNetSkeleton {
    pub alpha: f64,
    pub z_times: Vec<f64>,
    pub z_values: Vec<f64>,
    pub jumps: Vec<SkeletonJump>,
    pub total_depth: f64,
}

impl LevyNetSkeleton {
    pub fn validate(&self) -> Result<()> {
        if self.z_times.len() != self.z_values.len() || self.z_times.is_empty() {
            return Err(Error::structure("z grid length mismatch"));
        }
        if self.z_values.iter().any(|&z| z < 0.0) {
            return Err(Error::structure("boundary lengths must be nonnegative"));
        }
        for j in &self.jumps {
            // pre-jump length = value at the last grid time strictly before t
            let idx = self.z_times.partition_point(|&t| t < j.t);
            let pre = if idx == 0 { 0.0 } else { self.z_values[idx - 1] };
            if j.attach < 0.0 || j.attach > pre {
                return Err(Error::structure(format!(
                    "attachment {} outside [0, {pre}]",
                    j.attach
                )));
            }
        }
        let sq: f64 = self.jumps.iter().map(|j| j.size * j.size).sum();
        if !sq.is_finite() {
            return Err(Error::structure("sum of squared jump sizes must be finite"));
        }
        Ok(())
    }

    pub fn to_json_line(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Line<'a> {
            alpha: f64,
            depth: f64,
            z: &'a [f64],
            jumps: Vec<JumpLine>,
        }
        #[derive(Serialize)]
        struct JumpLine {
            t: f64,
            size: f64,
            attach: f64,
        }
        let line = Line {
            alpha: self.alpha,
            depth: self.total_depth,
            z: &self.z_values,
            jumps: self
                .jumps
                .iter()
                .map(|j| JumpLine {
                    t: j.t,
                    size: j.size,
                    attach: j.attach,
                })
                .collect(),
        };
        Ok(serde_json::to_string(&line)?)
    }
}

/// Rescale a discrete forest profile into a net skeleton: generation sizes
/// divided by n^{1/alpha} become Z, depth divided by n^{1-1/alpha}, and
/// each macroscopic vertex (offspring >= threshold) becomes a jump at its
/// measured attachment fraction.
pub fn skeleton_from_profile(
    profile: &ForestProfile,
    jump_threshold: u64,
) -> Result<LevyNetSkeleton> {
    if profile.n == 0 {
        return Err(Error::structure("empty forest"));
    }
    let alpha = profile.alpha();
    let n = profile.n as f64;
    let len_scale = n.powf(1.0 / alpha);
    let depth_scale = n.powf(1.0 - 1.0 / alpha);
    let gens = profile.level_counts.len();
    let z_times: Vec<f64> = (0..gens).map(|g| g as f64 / depth_scale).collect();
    let z_values: Vec<f64> = profile
        .level_counts
        .iter()
        .map(|&c| c as f64 / len_scale)
        .collect();
    let mut jumps = Vec::new();
    for level in 0..gens as u64 {
        if profile.level_counts[level as usize] == 0 {
            continue;
        }
        let positions = attachment_positions(profile, level, jump_threshold)?;
        let mut pos_iter = positions.into_iter();
        for (k, &h) in profile.heights.iter().enumerate() {
            if h == level && profile.offspring_counts[k] >= jump_threshold {
                let frac = pos_iter.next().expect("position per big vertex");
                let pre = z_values[level as usize];
                jumps.push(SkeletonJump {
                    // the children of a level-h vertex sit at h+1
                    t: (level + 1) as f64 / depth_scale,
                    size: profile.offspring_counts[k] as f64 / len_scale,
                    attach: frac * pre,
                });
            }
        }
    }
    jumps.sort_by(|a, b| a.t.partial_cmp(&b.t).unwrap());
    Ok(LevyNetSkeleton {
        alpha,
        total_depth: gens as f64 / depth_scale,
        z_times,
        z_values,
        jumps,
    })
}

/// Two independent CSBPs tracking the boundary lengths on either side of a
/// geodesic pair; they merge when either side dies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicPair {
    pub times: Vec<f64>,
    pub a_values: Vec<f64>,
    pub b_values: Vec<f64>,
    /// First grid time either side hits 0, if within the grid.
    pub merge_time: Option<f64>,
}

impl GeodesicPair {
    /// Which side died first at the merge (false = A, true = B); None if
    /// no merge was detected on the grid, or if both sides died inside the
    /// same grid cell (order unresolvable at grid resolution).
    pub fn merge_side_b(&self) -> Option<bool> {
        let t = self.merge_time?;
        let idx = self.times.partition_point(|&s| s < t);
        match (self.a_values[idx] > 0.0, self.b_values[idx] > 0.0) {
            (true, false) => Some(true),
            (false, true) => Some(false),
            _ => None,
        }
    }
}

pub fn geodesic_pair<R: Rng>(
    alpha: f64,
    a0: f64,
    b0: f64,
    grid: &[f64],
    cfg: &LampertiConfig,
    rng: &mut R,
) -> Result<GeodesicPair> {
    if a0 <= 0.0 || b0 <= 0.0 {
        return Err(Error::parameter("a0 and b0 must be positive"));
    }
    let a_values = sample_csbp_values(alpha, a0, grid, cfg, rng)?;
    let b_values = sample_csbp_values(alpha, b0, grid, cfg, rng)?;
    let merge_time = grid
        .iter()
        .zip(a_values.iter().zip(&b_values))
        .find(|(_, (&a, &b))| a == 0.0 || b == 0.0)
        .map(|(&t, _)| t);
    Ok(GeodesicPair {
        times: grid.to_vec(),
        a_values,
        b_values,
        merge_time,
    })
}

/// Count the boundary blocks (of width delta) whose CSBPs survive to depth
/// eps, exactly as in the exponential-block construction: each block of
/// boundary length delta survives independently with probability
/// 1 - extinction_cdf(alpha, delta, eps), so the count over L/delta blocks
/// is binomial, converging to Poisson(L / m_eps) for delta << m_eps with
/// m_eps = ((alpha-1) eps)^{1/(alpha-1)}.
pub fn coalescence_count<R: Rng>(
    alpha: f64,
    boundary_length: f64,
    eps: f64,
    delta: f64,
    rng: &mut R,
) -> Result<u64> {
    if boundary_length <= 0.0 || eps <= 0.0 || delta <= 0.0 {
        return Err(Error::parameter("L, eps and delta must be positive"));
    }
    let m_eps = coalescence_mean_spacing(alpha, eps)?;
    if delta > 0.1 * m_eps {
        return Err(Error::Config(format!(
            "delta = {delta} is not small against m_eps = {m_eps}"
        )));
    }
    let blocks = (boundary_length / delta).round() as u64;
    let p_survive = 1.0 - extinction_cdf(alpha, delta, eps)?;
    let mut count = 0u64;
    for _ in 0..blocks {
        if rng.gen::<f64>() < p_survive {
            count += 1;
        }
    }
    Ok(count)
}

/// m_eps = ((alpha-1) eps)^{1/(alpha-1)}: mean boundary length per
/// surviving block at depth eps.
pub fn coalescence_mean_spacing(alpha: f64, eps: f64) -> Result<f64> {
    crate::stable::check_alpha(alpha)?;
    if eps <= 0.0 {
        return Err(Error::parameter("eps must be positive"));
    }
    Ok(((alpha - 1.0) * eps).powf(1.0 / (alpha - 1.0)))
}

/// A point process of (position, mark) pairs on [0,1] x (floor, inf) with
/// intensity ds x^{-1/beta - 1} dx, drawn once per surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlicePpp {
    pub beta: f64,
    pub floor: f64,
    pub points: Vec<(f64, f64)>,
}

/// Sample the marks above `floor`: N ~ Poisson(beta floor^{-1/beta}),
/// positions uniform, marks floor * U^{-beta} (inversion of the tail).
pub fn sample_slice_ppp<R: Rng>(beta: f64, floor: f64, rng: &mut R) -> Result<SlicePpp> {
    if beta <= 0.0 || floor <= 0.0 {
        return Err(Error::parameter("beta and floor must be positive"));
    }
    let mean = beta * floor.powf(-1.0 / beta);
    if mean > 1e7 {
        return Err(Error::parameter(format!(
            "floor {floor} gives {mean:.0} expected points; raise it"
        )));
    }
    let n = poisson_draw(mean, rng);
    let mut points = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let s: f64 = rng.gen();
        let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        points.push((s, floor * u.powf(-beta)));
    }
    points.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Ok(SlicePpp {
        beta,
        floor,
        points,
    })
}

pub(crate) fn poisson_draw<R: Rng>(mean: f64, rng: &mut R) -> u64 {
    if mean < 30.0 {
        let floor = (-mean).exp();
        let mut k = 0u64;
        let mut prod: f64 = rng.gen();
        while prod > floor {
            prod *= rng.gen::<f64>();
            k += 1;
        }
        k
    } else {
        // split recursively to keep the product above underflow
        poisson_draw(mean / 2.0, rng) + poisson_draw(mean - mean / 2.0, rng)
    }
}

/// Merge depth of the slice (a,b): the largest mark with position in
/// (a,b); 0 when a = b (by the degeneracy convention) or no point falls
/// inside.
pub fn slice_merge_depth(ppp: &SlicePpp, a: f64, b: f64) -> Result<f64> {
    if a > b {
        return Err(Error::range(format!("need a <= b, got {a} > {b}")));
    }
    if a == b {
        return Ok(0.0);
    }
    Ok(ppp
        .points
        .iter()
        .filter(|&&(s, _)| s > a && s < b)
        .map(|&(_, x)| x)
        .fold(0.0, f64::max))
}

/// Exact CDF of the full-interval merge depth d~(0,1):
/// P[d~ <= x] = exp(-beta x^{-1/beta}) for x above the sampling floor.
pub fn slice_depth_cdf(beta: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-beta * x.powf(-1.0 / beta)).exp()
    }
}
