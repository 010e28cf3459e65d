//! Critical Galton-Watson forests with heavy-tailed offspring: Lukasiewicz
//! walks, height processes, level profiles, and attachment positions. These
//! are the desk-scale discrete stand-ins for the stable excursion / height
//! process pair.

use crate::error::{Error, Result};
use crate::special::{gamma, zeta};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Critical offspring law: P[xi = k] = theta k^{-1-alpha} for k >= 1 with
/// theta = 1/zeta(alpha), and P[xi = 0] = 1 - zeta(alpha+1)/zeta(alpha),
/// so that E[xi] = 1 exactly. Tail index alpha makes the variance infinite
/// for every alpha in (1,2).
#[derive(Debug, Clone)]
pub struct OffspringLaw {
    pub alpha: f64,
    pub theta: f64,
    pub p0: f64,
    /// cumulative P[1 <= xi <= k] for k = 1..=table_len, offset by p0
    cum: Vec<f64>,
}

const TABLE_LEN: usize = 512;

impl OffspringLaw {
    pub fn new(alpha: f64) -> Result<OffspringLaw> {
        crate::stable::check_alpha(alpha)?;
        let theta = 1.0 / zeta(alpha)?;
        let p0 = 1.0 - zeta(alpha + 1.0)? / zeta(alpha)?;
        let mut cum = Vec::with_capacity(TABLE_LEN);
        let mut acc = p0;
        for k in 1..=TABLE_LEN {
            acc += theta * (k as f64).powf(-1.0 - alpha);
            cum.push(acc);
        }
        Ok(OffspringLaw { alpha, theta, p0, cum })
    }

    pub fn pmf(&self, k: u64) -> f64 {
        if k == 0 {
            self.p0
        } else {
            self.theta * (k as f64).powf(-1.0 - self.alpha)
        }
    }

    /// E[xi], summed directly with an Euler-Maclaurin tail; 1 by design.
    pub fn mean(&self) -> Result<f64> {
        // sum k * theta k^{-1-alpha} = theta * zeta(alpha)
        Ok(self.theta * zeta(self.alpha)?)
    }

    /// The tail index is alpha < 2, so the second moment diverges.
    pub fn variance_is_infinite(&self) -> bool {
        true
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> u64 {
        let u: f64 = rng.gen();
        if u < self.p0 {
            return 0;
        }
        if u < *self.cum.last().unwrap() {
            // binary search in the table
            let idx = self.cum.partition_point(|&c| c < u);
            return (idx + 1) as u64;
        }
        // Tail beyond the table: propose a continuous Pareto above K and
        // floor it, accepting with the exact discrete/continuous ratio.
        let kf = (TABLE_LEN + 1) as f64;
        let bound = (1.0 + 1.0 / kf).powf(1.0 + self.alpha);
        loop {
            let v: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            let y = kf * v.powf(-1.0 / self.alpha);
            let k = y.floor();
            let ratio = self.alpha * k.powf(-1.0 - self.alpha)
                / (k.powf(-self.alpha) - (k + 1.0).powf(-self.alpha));
            if rng.gen::<f64>() * bound <= ratio {
                return k as u64;
            }
        }
    }
}

/// A sampled plane forest in depth-first order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestProfile {
    pub alpha_milli: u32, // alpha * 1000, kept integral for Eq/hashing
    pub n: usize,
    pub roots: usize,
    pub offspring_counts: Vec<u64>,
    /// Lukasiewicz walk, length n+1, walk[0] = 0, final value -roots.
    pub walk: Vec<i64>,
    pub heights: Vec<u64>,
    pub level_counts: Vec<u64>,
}

impl ForestProfile {
    pub fn alpha(&self) -> f64 {
        self.alpha_milli as f64 / 1000.0
    }

    pub fn validate(&self) -> Result<()> {
        if self.walk.len() != self.n + 1
            || self.offspring_counts.len() != self.n
            || self.heights.len() != self.n
        {
            return Err(Error::structure("field length mismatch"));
        }
        if self.walk[0] != 0 {
            return Err(Error::structure("walk must start at 0"));
        }
        for k in 0..self.n {
            if self.walk[k + 1] - self.walk[k] != self.offspring_counts[k] as i64 - 1 {
                return Err(Error::structure("walk increment != offspring - 1"));
            }
        }
        if *self.walk.last().unwrap() != -(self.roots as i64) {
            return Err(Error::structure("walk must end at -roots"));
        }
        // the walk stays above -roots strictly before the end
        if self.walk[..self.n].iter().any(|&w| w <= -(self.roots as i64)) {
            return Err(Error::structure("walk hit -roots before the end"));
        }
        if self.level_counts.iter().sum::<u64>() != self.n as u64 {
            return Err(Error::structure("level counts must sum to n"));
        }
        Ok(())
    }
}

/// Height process of a Lukasiewicz walk: heights[k] = number of weak
/// record minima of the walk looking back from k. Amortized O(n) via the
/// ancestor stack of pending children.
pub fn height_process(walk: &[i64]) -> Result<Vec<u64>> {
    if walk.len() < 2 || walk[0] != 0 {
        return Err(Error::structure("walk must start at 0 and be nonempty"));
    }
    let n = walk.len() - 1;
    let mut heights = Vec::with_capacity(n);
    let mut stack: Vec<i64> = Vec::new();
    for k in 0..n {
        let c = walk[k + 1] - walk[k] + 1;
        if c < 0 {
            return Err(Error::structure("walk increment below -1"));
        }
        while stack.last() == Some(&0) {
            stack.pop();
        }
        heights.push(stack.len() as u64);
        if let Some(top) = stack.last_mut() {
            *top -= 1;
        }
        stack.push(c);
    }
    Ok(heights)
}

/// Brute-force quadratic record-count evaluation (test oracle).
pub fn height_process_brute(walk: &[i64]) -> Vec<u64> {
    let n = walk.len() - 1;
    let mut heights = Vec::with_capacity(n);
    for k in 0..n {
        let mut h = 0u64;
        for j in 0..k {
            let m = walk[j..=k].iter().min().unwrap();
            if walk[j] == *m {
                h += 1;
            }
        }
        heights.push(h);
    }
    heights
}

/// Generation sizes: level_counts[h] = #{k : heights[k] = h}.
pub fn level_profile(heights: &[u64]) -> Vec<u64> {
    let max = heights.iter().copied().max().unwrap_or(0) as usize;
    let mut counts = vec![0u64; max + 1];
    for &h in heights {
        counts[h as usize] += 1;
    }
    counts
}

/// Sample an m-root forest by running the Lukasiewicz walk until it hits
/// -m. Returns None if the total vertex count would exceed `cap`.
pub fn sample_forest<R: Rng>(
    law: &OffspringLaw,
    roots: usize,
    cap: usize,
    rng: &mut R,
) -> Result<Option<ForestProfile>> {
    if roots == 0 {
        return Err(Error::parameter("need at least one root"));
    }
    let mut walk = vec![0i64];
    let mut offspring = Vec::new();
    let target = -(roots as i64);
    let mut w = 0i64;
    while w > target {
        if offspring.len() >= cap {
            return Ok(None);
        }
        let c = law.sample(rng);
        offspring.push(c);
        w += c as i64 - 1;
        walk.push(w);
    }
    let heights = height_process(&walk)?;
    let level_counts = level_profile(&heights);
    let profile = ForestProfile {
        alpha_milli: (law.alpha * 1000.0).round() as u32,
        n: offspring.len(),
        roots,
        offspring_counts: offspring,
        walk,
        heights,
        level_counts,
    };
    Ok(Some(profile))
}

/// Size-conditioned forest by rejection: resample until the total vertex
/// count lands in [n, (1+delta) n].
pub fn sample_conditioned_forest<R: Rng>(
    law: &OffspringLaw,
    roots: usize,
    n: usize,
    delta: f64,
    rng: &mut R,
) -> Result<ForestProfile> {
    if delta <= 0.0 {
        return Err(Error::parameter("delta must be positive"));
    }
    let cap = ((1.0 + delta) * n as f64) as usize;
    for _ in 0..1_000_000 {
        if let Some(p) = sample_forest(law, roots, cap, rng)? {
            if p.n >= n {
                return Ok(p);
            }
        }
    }
    Err(Error::DegenerateSample(
        "size-conditioning rejection did not accept in 10^6 attempts".to_string(),
    ))
}

/// For every vertex at `level` with offspring >= `min_offspring`, the
/// fraction of level-`level` vertices strictly to its right in depth-first
/// order, normalized by the level size.
pub fn attachment_positions(
    profile: &ForestProfile,
    level: u64,
    min_offspring: u64,
) -> Result<Vec<f64>> {
    let total = profile
        .level_counts
        .get(level as usize)
        .copied()
        .unwrap_or(0);
    if total == 0 {
        return Err(Error::range(format!("no vertices at level {level}")));
    }
    let mut seen = 0u64; // vertices at this level encountered so far (DFS order)
    let mut out = Vec::new();
    for (k, &h) in profile.heights.iter().enumerate() {
        if h == level {
            if profile.offspring_counts[k] >= min_offspring {
                let right = total - 1 - seen;
                out.push(right as f64 / total as f64);
            }
            seen += 1;
        }
    }
    Ok(out)
}

/// Scaling constant of the offspring law's stable domain of attraction:
/// the centered walk over n steps, divided by (c_psi' n)^{1/alpha},
/// converges to the unit-normalized stable law. In the CSBP bridge below
/// the relevant combination is c_psi = theta Gamma(2-alpha)/(alpha(alpha-1)).
pub fn bridge_constant(alpha: f64) -> Result<f64> {
    crate::stable::check_alpha(alpha)?;
    let theta = 1.0 / zeta(alpha)?;
    Ok(theta * gamma(2.0 - alpha) / (alpha * (alpha - 1.0)))
}

/// Discrete-to-continuum bridge: for a forest with m roots, the rescaled
/// level profile G_g / m read at generation g = round(t m^{alpha-1} /
/// c_psi) approximates an alpha-stable CSBP at time t started from 1.
pub fn generation_for_time(alpha: f64, roots: usize, t: f64) -> Result<usize> {
    let c = bridge_constant(alpha)?;
    Ok((t * (roots as f64).powf(alpha - 1.0) / c).round() as usize)
}

/// Level-profile value rescaled to CSBP units at time t (0 if the forest
/// has died out by the corresponding generation).
pub fn rescaled_profile_value(profile: &ForestProfile, t: f64) -> Result<f64> {
    let g = generation_for_time(profile.alpha(), profile.roots, t)?;
    let count = profile.level_counts.get(g).copied().unwrap_or(0);
    Ok(count as f64 / profile.roots as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::stream_rng;
    use crate::stats::ks_test;

    #[test]
    fn offspring_law_constants_alpha_three_halves() {
        let law = OffspringLaw::new(1.5).unwrap();
        assert!((law.theta - 0.38279338399942656).abs() < 1e-10, "theta {}", law.theta);
        assert!((law.p0 - 0.48648755320481214).abs() < 1e-10, "p0 {}", law.p0);
        assert!((law.mean().unwrap() - 1.0).abs() < 1e-12);
        assert!(law.variance_is_infinite());
    }

    #[test]
    fn offspring_mean_is_one_by_truncated_series() {
        for &alpha in &[1.2, 1.5, 1.8] {
            let law = OffspringLaw::new(alpha).unwrap();
            // direct series with Euler-Maclaurin tail on k^{-alpha}
            let direct: f64 = (1..200_000u64)
                .map(|k| k as f64 * law.pmf(k))
                .sum::<f64>()
                + law.theta
                    * (200_000f64.powf(1.0 - alpha) / (alpha - 1.0)
                        + 0.5 * 200_000f64.powf(-alpha));
            assert!((direct - 1.0).abs() < 1e-9, "alpha={alpha}: {direct}");
        }
    }

    #[test]
    fn offspring_sampler_matches_pmf() {
        let law = OffspringLaw::new(1.5).unwrap();
        let mut rng = stream_rng(20, "offspring", 0);
        let n = 200_000;
        let mut counts = std::collections::HashMap::<u64, u64>::new();
        for _ in 0..n {
            *counts.entry(law.sample(&mut rng)).or_insert(0) += 1;
        }
        for k in [0u64, 1, 2, 3, 10] {
            let p_hat = *counts.get(&k).unwrap_or(&0) as f64 / n as f64;
            let p = law.pmf(k);
            let se = crate::stats::binomial_se(p, n as u64);
            assert!((p_hat - p).abs() < 4.0 * se, "k={k}: {p_hat} vs {p}");
        }
        // heavy tail reaches beyond the table occasionally
        assert!(counts.keys().any(|&k| k > TABLE_LEN as u64));
    }

    #[test]
    fn height_process_hand_cases() {
        // chain of 3: offspring [1,1,0]
        assert_eq!(height_process(&[0, 0, 0, -1]).unwrap(), vec![0, 1, 2]);
        // root with two leaves: offspring [2,0,0]
        assert_eq!(height_process(&[0, 1, 0, -1]).unwrap(), vec![0, 1, 1]);
        assert!(height_process(&[1, 0]).is_err());
        assert!(height_process(&[0, -2]).is_err());
    }

    #[test]
    fn height_process_matches_brute_force() {
        let law = OffspringLaw::new(1.5).unwrap();
        let mut rng = stream_rng(20, "brute", 0);
        let p = loop {
            if let Some(p) = sample_forest(&law, 3, 2000, &mut rng).unwrap() {
                if p.n >= 200 {
                    break p;
                }
            }
        };
        assert_eq!(height_process(&p.walk).unwrap(), height_process_brute(&p.walk));
    }

    #[test]
    fn level_profile_hand_cases() {
        assert_eq!(level_profile(&[0, 1, 2]), vec![1, 1, 1]);
        assert_eq!(level_profile(&[0, 1, 1]), vec![1, 2]);
    }

    #[test]
    fn forest_invariants_hold_per_sample() {
        let law = OffspringLaw::new(1.4).unwrap();
        let mut rng = stream_rng(20, "invariants", 0);
        let mut seen = 0;
        while seen < 20 {
            if let Some(p) = sample_forest(&law, 2, 50_000, &mut rng).unwrap() {
                p.validate().unwrap();
                // breadth-first consistency: next generation size equals the
                // offspring total of the current generation.
                let gens = p.level_counts.len();
                for h in 0..gens.saturating_sub(1) {
                    let total: u64 = p
                        .heights
                        .iter()
                        .zip(&p.offspring_counts)
                        .filter(|(&hh, _)| hh == h as u64)
                        .map(|(_, &c)| c)
                        .sum();
                    assert_eq!(total, p.level_counts[h + 1], "generation {h}");
                }
                seen += 1;
            }
        }
    }

    #[test]
    fn attachment_positions_hand_cases() {
        // 4 vertices at level 1 under a single root with 4 children; give
        // the rightmost child 5 grandchildren (leaves at level 2).
        let offspring: Vec<u64> = vec![4, 0, 0, 0, 5, 0, 0, 0, 0, 0];
        let mut walk = vec![0i64];
        for &c in &offspring {
            walk.push(walk.last().unwrap() + c as i64 - 1);
        }
        let heights = height_process(&walk).unwrap();
        let level_counts = level_profile(&heights);
        let p = ForestProfile {
            alpha_milli: 1500,
            n: offspring.len(),
            roots: 1,
            offspring_counts: offspring,
            walk,
            heights,
            level_counts,
        };
        p.validate().unwrap();
        // rightmost among 4 -> position 0
        assert_eq!(attachment_positions(&p, 1, 5).unwrap(), vec![0.0]);
        // the root is leftmost (and only) big vertex among 1 at level 0
        assert_eq!(attachment_positions(&p, 0, 4).unwrap(), vec![0.0]);
        assert!(attachment_positions(&p, 7, 1).is_err());

        // leftmost among 4: big vertex first -> 3/4
        let offspring: Vec<u64> = vec![4, 5, 0, 0, 0, 0, 0, 0, 0, 0];
        let mut walk = vec![0i64];
        for &c in &offspring {
            walk.push(walk.last().unwrap() + c as i64 - 1);
        }
        let heights = height_process(&walk).unwrap();
        let level_counts = level_profile(&heights);
        let p = ForestProfile {
            alpha_milli: 1500,
            n: offspring.len(),
            roots: 1,
            offspring_counts: offspring,
            walk,
            heights,
            level_counts,
        };
        assert_eq!(attachment_positions(&p, 1, 5).unwrap(), vec![0.75]);
    }

    #[test]
    fn attachment_positions_are_uniform_in_ensembles() {
        let law = OffspringLaw::new(1.5).unwrap();
        let mut rng = stream_rng(20, "uniform", 0);
        let n = 10_000usize;
        let roots = (n as f64).powf(1.0 / 1.5).round() as usize;
        let threshold = ((n as f64).powf(1.0 / 1.5) / 4.0).round() as u64;
        let mut pooled = Vec::new();
        for _ in 0..120 {
            let p = sample_conditioned_forest(&law, roots, n, 0.1, &mut rng).unwrap();
            for level in 0..p.level_counts.len() as u64 {
                if p.level_counts[level as usize] >= 8 {
                    pooled.extend(attachment_positions(&p, level, threshold).unwrap());
                }
            }
        }
        assert!(pooled.len() >= 100, "only {} pooled positions", pooled.len());
        let (_, pv) = ks_test(&pooled, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!(pv > 0.01, "uniformity KS p = {pv}");
    }

    #[test]
    fn max_height_scales_with_n() {
        // median max height ratio between n = 10^4 and 10^3 should be near
        // 10^{1-1/alpha} = 10^{1/3} (factor-2 tolerance).
        let law = OffspringLaw::new(1.5).unwrap();
        let mut med = Vec::new();
        for (i, &n) in [1000usize, 10_000].iter().enumerate() {
            let mut rng = stream_rng(20, "height-scaling", i as u64);
            let roots = (n as f64).powf(1.0 / 1.5).round() as usize;
            let mut maxima: Vec<u64> = (0..20)
                .map(|_| {
                    let p = sample_conditioned_forest(&law, roots, n, 0.1, &mut rng).unwrap();
                    *p.heights.iter().max().unwrap()
                })
                .collect();
            maxima.sort_unstable();
            med.push(maxima[maxima.len() / 2] as f64);
        }
        let ratio = med[1] / med[0];
        let target = 10f64.powf(1.0 - 1.0 / 1.5);
        assert!(
            ratio > target / 2.0 && ratio < target * 2.0,
            "ratio {ratio} vs {target}"
        );
    }

    #[test]
    fn unconditioned_profile_tracks_csbp_laplace() {
        // Rescaled level profile of an unconditioned m-root forest vs the
        // closed-form CSBP Laplace functional.
        let alpha = 1.5;
        let law = OffspringLaw::new(alpha).unwrap();
        let m = 400usize;
        let t = 0.4;
        let lambda = 1.0;
        let mut rng = stream_rng(20, "bridge", 0);
        let mut acc = crate::stats::Accumulator::default();
        for _ in 0..600 {
            // cap generously; unconditioned forests can be huge but the
            // cap only censors a vanishing fraction at these sizes
            if let Some(p) = sample_forest(&law, m, 3_000_000, &mut rng).unwrap() {
                let y = rescaled_profile_value(&p, t).unwrap();
                acc.push((-lambda * y).exp());
            }
        }
        assert!(acc.count() >= 550, "too many truncated forests");
        let expect = (-crate::csbp::u_lambda(alpha, lambda, t).unwrap()).exp();
        assert!(
            (acc.mean() - expect).abs() < 4.0 * acc.standard_error() + 0.01,
            "{} vs {expect} (se {})",
            acc.mean(),
            acc.standard_error()
        );
    }

    #[test]
    fn profile_json_round_trip() {
        let law = OffspringLaw::new(1.5).unwrap();
        let mut rng = stream_rng(20, "json", 0);
        let p = loop {
            if let Some(p) = sample_forest(&law, 2, 10_000, &mut rng).unwrap() {
                break p;
            }
        };
        let s = serde_json::to_string(&p).unwrap();
        let back: ForestProfile = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
