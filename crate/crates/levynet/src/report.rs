//! Verification harness: pre-registered statistical suites with JSON,
//! Markdown and CSV reporting.
//!
//! Every criterion reduces to a single normalized statistic: the worst
//! margin ratio over its sub-checks, where a margin of 1.0 is the pass
//! boundary. Sub-checks are either exact (margin 0 or 2), z-scores divided
//! by their allowance, absolute errors divided by their tolerance, or
//! p-values folded as `0.01 / p`. The `tolerance_scale` knob divides the
//! final statistic, so setting it to 0 forces every test to fail (a
//! self-check that the harness can fail) and values above 1 loosen all
//! thresholds uniformly.
//!
//! Seed hygiene: every criterion derives its RNG streams from the root
//! seed through a label unique to that criterion (recorded in the report),
//! so no two tests share a stream and reports are byte-identical across
//! reruns and across `jobs` settings.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::characterization::{
    drift_estimate, find_martingale_alpha, find_root_by, fold_identity_check, i_alpha_closed,
    i_alpha_quadrature, reversal_jump_pit,
};
use crate::csbp::{
    extinction_cdf, sample_csbp_values, subordinator_ratio_estimate, u_lambda, LampertiConfig,
};
use crate::error::{Error, Result};
use crate::forest::{
    attachment_positions, bridge_constant, generation_for_time, rescaled_profile_value,
    sample_conditioned_forest, OffspringLaw,
};
use crate::levy_net::{
    coalescence_count, coalescence_mean_spacing, sample_slice_ppp, slice_depth_cdf,
    slice_merge_depth,
};
use crate::seed::stream_rng;
use crate::snake::{
    lattice_excursion_length, metric_matrix, sample_discrete_snake, sample_gaussian_snake,
    SnakeSample,
};
use crate::stable::{sample_excursion_with_jumps, Boundary};
use crate::stats::{binomial_se, ks_test, poisson_dispersion, rank_plot_slope, two_sample_ks, Accumulator};

/// Pre-registered p-value floor for every distributional sub-check.
const P_MIN: f64 = 0.01;

/// Slack for sub-checks that are exact up to floating-point accumulation.
const EXACT_SLACK: f64 = 1e-9;

/// At most this many values are kept per test for CSV export.
const CSV_CAP: usize = 10_000;

/// Sample sizes and seeds for one verification run. Defaults reproduce the
/// registered acceptance configuration; a config file is a flat JSON
/// object overriding any subset of these fields.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub root_seed: u64,
    pub out_dir: Option<String>,
    pub jobs: usize,
    pub csbp_paths: usize,
    pub extinction_paths: usize,
    pub ratio_pairs: usize,
    pub slice_samples: usize,
    pub coalescence_runs: usize,
    pub forest_count: usize,
    pub forest_size: usize,
    pub additivity_chains: usize,
    pub snake_count: usize,
    pub snake_points: usize,
    pub drift_paths: u64,
    pub tail_walks: usize,
    pub reversal_excursions: usize,
    pub tolerance_scale: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            root_seed: 42,
            out_dir: None,
            jobs: 1,
            csbp_paths: 100_000,
            extinction_paths: 100_000,
            ratio_pairs: 5_000,
            slice_samples: 4_000,
            coalescence_runs: 10_000,
            forest_count: 2_000,
            forest_size: 100_000,
            additivity_chains: 1_000,
            snake_count: 100,
            snake_points: 512,
            drift_paths: 1_000_000,
            tail_walks: 40_000,
            reversal_excursions: 50_000,
            tolerance_scale: 1.0,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<RunConfig> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json_file(path: &Path) -> Result<RunConfig> {
        RunConfig::from_json(&fs::read_to_string(path)?)
    }

    /// Reject sample sizes too small for the statistics to mean anything.
    pub fn validate(&self) -> Result<()> {
        let minima: [(&str, usize, usize); 12] = [
            ("jobs", self.jobs, 1),
            ("csbp_paths", self.csbp_paths, 1_000),
            ("extinction_paths", self.extinction_paths, 1_000),
            ("ratio_pairs", self.ratio_pairs, 100),
            ("slice_samples", self.slice_samples, 400),
            ("coalescence_runs", self.coalescence_runs, 200),
            ("forest_count", self.forest_count, 20),
            ("forest_size", self.forest_size, 1_000),
            ("additivity_chains", self.additivity_chains, 100),
            ("snake_count", self.snake_count, 2),
            ("tail_walks", self.tail_walks, 1_000),
            ("reversal_excursions", self.reversal_excursions, 1_000),
        ];
        for (name, value, min) in minima {
            if value < min {
                return Err(Error::Config(format!("{name} = {value} is below the minimum {min}")));
            }
        }
        if self.drift_paths < 1_000 {
            return Err(Error::Config(format!(
                "drift_paths = {} is below the minimum 1000",
                self.drift_paths
            )));
        }
        if !(2..=4_096).contains(&self.snake_points) {
            return Err(Error::Config(format!(
                "snake_points = {} must lie in [2, 4096]",
                self.snake_points
            )));
        }
        if !self.tolerance_scale.is_finite() || self.tolerance_scale < 0.0 {
            return Err(Error::Config(format!(
                "tolerance_scale = {} must be finite and nonnegative",
                self.tolerance_scale
            )));
        }
        Ok(())
    }
}

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TestRecord {
    pub id: String,
    /// The verified property, in one sentence.
    pub property: String,
    /// Worst margin ratio over sub-checks, divided by `tolerance_scale`.
    pub statistic: f64,
    /// Always 1.0: the test passes iff `statistic <= threshold`.
    pub threshold: f64,
    /// Smallest p-value among distributional sub-checks, if any.
    pub p_value: Option<f64>,
    /// A representative confidence interval, if the test produces one.
    pub ci: Option<(f64, f64)>,
    pub seed: u64,
    /// RNG stream label family, unique per test within a run.
    pub stream: String,
    pub n: u64,
    pub passed: bool,
    pub runtime_ms: u128,
    /// One entry per sub-check: description and margin ratio.
    pub checks: Vec<String>,
    /// Raw values exported to `<id>.csv`, capped at 10^4 entries.
    #[serde(skip)]
    pub samples: Vec<f64>,
}

/// Sub-check accumulator; see the module docs for the margin convention.
#[derive(Default)]
struct Checks {
    items: Vec<(String, f64)>,
}

impl Checks {
    /// An error bounded by a tolerance: margin = |err| / tol.
    fn abs(&mut self, name: &str, err: f64, tol: f64) {
        let err = err.abs();
        self.items.push((format!("{name}: {err:.3e} (tol {tol:.1e})"), err / tol));
    }

    /// A z-score against an allowance in standard errors.
    fn z(&mut self, name: &str, z: f64, z_max: f64) {
        let z = z.abs();
        self.items.push((format!("{name}: z = {z:.2} (max {z_max})"), z / z_max));
    }

    /// A distributional p-value against the registered floor.
    fn p(&mut self, name: &str, p: f64) {
        self.items.push((
            format!("{name}: p = {p:.4} (floor {P_MIN})"),
            P_MIN / p.max(f64::MIN_POSITIVE),
        ));
    }

    /// A condition that must hold outright.
    fn exact(&mut self, name: &str, ok: bool) {
        self.items
            .push((format!("{name}: {}", if ok { "holds" } else { "VIOLATED" }), if ok { 0.0 } else { 2.0 }));
    }

    fn worst(&self) -> f64 {
        self.items.iter().map(|&(_, m)| m).fold(0.0, f64::max)
    }

    fn min_p(&self) -> Option<f64> {
        // Recover the smallest p among p-type items from the folded margin.
        self.items
            .iter()
            .filter(|(name, _)| name.contains("p = "))
            .map(|&(_, m)| P_MIN / m)
            .fold(None, |acc: Option<f64>, p| Some(acc.map_or(p, |a| a.min(p))))
    }

    fn into_record(
        self,
        id: &str,
        property: &str,
        stream: &str,
        cfg: &RunConfig,
        started: Instant,
        n: u64,
        ci: Option<(f64, f64)>,
        mut samples: Vec<f64>,
    ) -> TestRecord {
        let worst = self.worst();
        let statistic = if cfg.tolerance_scale > 0.0 {
            worst / cfg.tolerance_scale
        } else {
            f64::INFINITY
        };
        samples.truncate(CSV_CAP);
        TestRecord {
            id: id.to_string(),
            property: property.to_string(),
            statistic,
            threshold: 1.0,
            p_value: self.min_p(),
            ci,
            seed: cfg.root_seed,
            stream: stream.to_string(),
            n,
            passed: statistic <= 1.0,
            runtime_ms: started.elapsed().as_millis(),
            checks: self
                .items
                .into_iter()
                .map(|(name, m)| format!("{name}; margin {m:.3}"))
                .collect(),
            samples,
        }
    }
}

/// Run `blocks` independent work items, in order when `jobs <= 1` and on a
/// rayon pool otherwise. Each block must derive its own RNG stream from
/// its index, so the collected output is identical either way.
fn map_blocks<T, F>(jobs: usize, blocks: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    if jobs <= 1 {
        (0..blocks).map(f).collect()
    } else {
        use rayon::prelude::*;
        (0..blocks).into_par_iter().map(f).collect()
    }
}

// ---------------------------------------------------------------------------
// Criterion 1: jump-integral root and closed-form/quadrature agreement.
// ---------------------------------------------------------------------------

pub fn run_jump_integral(cfg: &RunConfig) -> Result<TestRecord> {
    let started = Instant::now();
    let mut checks = Checks::default();

    let root = find_martingale_alpha(1e-9)?;
    checks.abs("closed-form root offset from 3/2", root - 1.5, 1e-6);

    let grid: Vec<f64> = (0..17).map(|k| 1.1 + 0.05 * k as f64).collect();
    let mut closed_values = Vec::with_capacity(grid.len());
    let mut max_diff = 0.0f64;
    for &alpha in &grid {
        let c = i_alpha_closed(alpha)?;
        let q = i_alpha_quadrature(alpha)?;
        max_diff = max_diff.max((c - q).abs());
        closed_values.push(c);
    }
    checks.abs("closed vs quadrature, max over 17-point grid", max_diff, 1e-6);

    // The integral is strictly monotone in alpha; the observed direction on
    // this normalization is decreasing (positive below 3/2, negative above).
    let monotone = closed_values.windows(2).all(|w| w[1] < w[0]);
    checks.exact("strictly monotone (decreasing) across the grid", monotone);
    checks.exact(
        "sign change straddles 3/2",
        closed_values[0] > 0.0 && *closed_values.last().unwrap() < 0.0,
    );

    let quad_root = find_root_by(i_alpha_quadrature, 1e-8)?;
    checks.abs("quadrature root offset from 3/2", quad_root - 1.5, 1e-5);

    Ok(checks.into_record(
        "01-jump-integral",
        "martingale-exponent integral: closed form and quadrature agree, the root sits at 3/2, and the value is strictly monotone in alpha",
        "analytic (no RNG)",
        cfg,
        started,
        grid.len() as u64,
        None,
        closed_values,
    ))
}

// ---------------------------------------------------------------------------
// Criterion 2: fold identity between the two jump densities.
// ---------------------------------------------------------------------------

pub fn run_fold_identity(cfg: &RunConfig) -> Result<TestRecord> {
    let started = Instant::now();
    let mut rng = stream_rng(cfg.root_seed, "fold-identity", 0);
    let n = 1_000u64;
    let mut residuals = Vec::with_capacity(n as usize);
    let mut max_res = 0.0f64;
    for _ in 0..n {
        let alpha = 1.1 + 0.8 * rng.gen::<f64>();
        let c = 1.0 + rng.gen::<f64>();
        let a = c * (0.05 + 0.45 * rng.gen::<f64>());
        let r = fold_identity_check(alpha, a, c)?;
        max_res = max_res.max(r);
        residuals.push(r);
    }
    let mut checks = Checks::default();
    checks.abs("max fold residual over random (alpha, a, c)", max_res, 1e-12);
    Ok(checks.into_record(
        "02-fold-identity",
        "folding a small jump from one interval end onto the other maps the reversed-jump density onto the centered one exactly",
        "fold-identity",
        cfg,
        started,
        n,
        None,
        residuals,
    ))
}

// ---------------------------------------------------------------------------
// Criterion 3: CSBP Laplace transform across (lambda, t) cells.
// ---------------------------------------------------------------------------

const LAPLACE_LAMBDAS: [f64; 3] = [0.5, 1.0, 2.0];
const LAPLACE_TIMES: [f64; 2] = [0.5, 1.0];

pub fn run_csbp_laplace(cfg: &RunConfig) -> Result<TestRecord> {
    let started = Instant::now();
    let mut checks = Checks::default();
    let lamperti = LampertiConfig::default();
    let block_size = 1_000usize;
    let mut worst_ci = None;
    let mut worst_z = -1.0f64;
    let mut samples = Vec::new();

    for &alpha in &[1.3f64, 1.5] {
        let label = format!("csbp-laplace-{}", (alpha * 10.0) as u32);
        let blocks = cfg.csbp_paths.div_ceil(block_size) as u64;
        let outputs = map_blocks(cfg.jobs, blocks, |b| {
            let mut rng = stream_rng(cfg.root_seed, &label, b);
            let count = block_size.min(cfg.csbp_paths - b as usize * block_size);
            let mut accs = vec![Accumulator::default(); 6];
            let mut kept = Vec::new();
            for _ in 0..count {
                let ys = sample_csbp_values(alpha, 1.0, &LAPLACE_TIMES, &lamperti, &mut rng)?;
                for (ti, &y) in ys.iter().enumerate() {
                    for (li, &lambda) in LAPLACE_LAMBDAS.iter().enumerate() {
                        accs[ti * LAPLACE_LAMBDAS.len() + li].push((-lambda * y).exp());
                    }
                }
                if alpha == 1.5 && kept.len() < 50 {
                    kept.push(ys[1]);
                }
            }
            Ok((accs, kept))
        })?;
        let mut accs = vec![Accumulator::default(); 6];
        for (block_accs, kept) in outputs {
            for (acc, b) in accs.iter_mut().zip(&block_accs) {
                acc.merge(b);
            }
            if samples.len() < CSV_CAP {
                samples.extend(kept);
            }
        }
        for (ti, &t) in LAPLACE_TIMES.iter().enumerate() {
            for (li, &lambda) in LAPLACE_LAMBDAS.iter().enumerate() {
                let acc = &accs[ti * LAPLACE_LAMBDAS.len() + li];
                let target = (-u_lambda(alpha, lambda, t)?).exp();
                let z = (acc.mean() - target) / acc.standard_error();
                checks.z(
                    &format!("E[exp(-{lambda} Y_{t})] at alpha = {alpha} vs {target:.4}"),
                    z,
                    3.0,
                );
                if z.abs() > worst_z {
                    worst_z = z.abs();
                    let hw = acc.ci_halfwidth(0.95);
                    worst_ci = Some((acc.mean() - hw, acc.mean() + hw));
                }
            }
        }
    }

    Ok(checks.into_record(
        "03-csbp-laplace",
        "Lamperti-simulated branching paths reproduce the Laplace transform exp(-Y_0 u_t(lambda)) in every (lambda, t) cell",
        "csbp-laplace-{13,15}",
        cfg,
        started,
        2 * cfg.csbp_paths as u64,
        worst_ci,
        samples,
    ))
}

// ---------------------------------------------------------------------------
// Criterion 4: survival fraction and extinction-time law at alpha = 3/2.
// ---------------------------------------------------------------------------

pub fn run_extinction_law(cfg: &RunConfig) -> Result<TestRecord> {
    let started = Instant::now();
    let alpha = 1.5f64;
    let horizon = 2.0f64;
    let grid: Vec<f64> = (1..=2_000).map(|k| k as f64 * 1e-3).collect();
    let lamperti = LampertiConfig::default();
    let block_size = 500usize;
    let blocks = cfg.extinction_paths.div_ceil(block_size) as u64;

    let outputs = map_blocks(cfg.jobs, blocks, |b| {
        let mut rng = stream_rng(cfg.root_seed, "extinction", b);
        let count = block_size.min(cfg.extinction_paths - b as usize * block_size);
        let mut survivors = 0u64;
        let mut ext_times = Vec::new();
        for _ in 0..count {
            let ys = sample_csbp_values(alpha, 1.0, &grid, &lamperti, &mut rng)?;
            if *ys.last().unwrap() > 0.0 {
                survivors += 1;
            } else {
                let idx = ys.iter().position(|&y| y == 0.0).unwrap();
                ext_times.push(grid[idx]);
            }
        }
        Ok((survivors, ext_times))
    })?;

    let mut survivors = 0u64;
    let mut ext_times = Vec::new();
    for (s, ts) in outputs {
        survivors += s;
        ext_times.extend(ts);
    }

    let n = cfg.extinction_paths as u64;
    let p_hat = survivors as f64 / n as f64;
    let target = 1.0 - extinction_cdf(alpha, 1.0, horizon)?;
    let se = binomial_se(target, n);
    let mut checks = Checks::default();
    checks.z(&format!("survival fraction {p_hat:.4} vs 1 - 1/e"), (p_hat - target) / se, 3.0);

    let f2 = extinction_cdf(alpha, 1.0, horizon)?;
    let (_, p) = ks_test(&ext_times, |t| {
        extinction_cdf(alpha, 1.0, t).unwrap_or(0.0) / f2
    })?;
    checks.p("extinction times vs conditional closed-form CDF (KS)", p);

    let ci = Some((p_hat - 1.96 * se, p_hat + 1.96 * se));
    Ok(checks.into_record(
        "04-extinction-law",
        "branching-path extinction matches the closed-form law: survival probability 1 - 1/e at (alpha, Y_0, t) = (3/2, 1, 2) and the right extinction-time distribution",
        "extinction",
        cfg,
        started,
        n,
        ci,
        ext_times,
    ))
}

// ---------------------------------------------------------------------------
// Criterion 5: subordinator mass-split ratio a/(a+b).
// ---------------------------------------------------------------------------

pub fn run_subordinator_ratio(cfg: &RunConfig) -> Result<TestRecord> {
    let started = Instant::now();
    let lamperti = LampertiConfig::default();
    let mut checks = Checks::default();
    let mut ci = None;
    for (i, (a, b)) in [(1.0f64, 3.0f64), (1.0, 1.0)].into_iter().enumerate() {
        let mut rng = stream_rng(cfg.root_seed, "subordinator-ratio", i as u64);
        let est = subordinator_ratio_estimate(1.5, a, b, 1.0, cfg.ratio_pairs, &lamperti, &mut rng)?;
        let target = a / (a + b);
        let se = est.ci_halfwidth / 1.96;
        checks.z(
            &format!(
                "ratio at (a, b) = ({a}, {b}): {:.4} vs {target} (discard {:.3})",
                est.mean, est.discard_fraction
            ),
            (est.mean - target) / se,
            3.0,
        );
        if i == 0 {
            ci = Some((est.mean - est.ci_halfwidth, est.mean + est.ci_halfwidth));
        }
    }
    Ok(checks.into_record(
        "05-subordinator-ratio",
        "started from masses a and b, the surviving-mass fraction concentrates on a/(a+b)",
        "subordinator-ratio",
        cfg,
        started,
        2 * cfg.ratio_pairs as u64,
        ci,
        Vec::new(),
    ))
}

// ---------------------------------------------------------------------------
// Criterion 6: slice merge-depth law, composition and max-stability.
// ---------------------------------------------------------------------------

pub fn run_slice_depth(cfg: &RunConfig) -> Result<TestRecord> {
    let started = Instant::now();
    let mut checks = Checks::default();
    let mut samples = Vec::new();

    for (bi, &beta) in [0.5f64, 0.75].iter().enumerate() {
        let label = format!("slice-depth-{}", (beta * 100.0) as u32);
        let mut rng = stream_rng(cfg.root_seed, &label, 0);
        // Floor chosen so each point process holds about 300 points.
        let floor = (beta / 300.0).powf(beta);

        let mut depths = Vec::with_capacity(cfg.slice_samples);
        let mut composition_ok = true;
        for _ in 0..cfg.slice_samples {
            let ppp = sample_slice_ppp(beta, floor, &mut rng)?;
            let full = slice_merge_depth(&ppp, 0.0, 1.0)?;
            let (u, v) = (rng.gen::<f64>(), rng.gen::<f64>());
            let mid = u.min(v).max(1e-9);
            let left = slice_merge_depth(&ppp, 0.0, mid)?;
            let right = slice_merge_depth(&ppp, mid, 1.0)?;
            if left.max(right) != full {
                composition_ok = false;
            }
            depths.push(full);
        }
        let (_, p) = ks_test(&depths, |x| slice_depth_cdf(beta, x))?;
        checks.p(&format!("full-interval depth CDF at beta = {beta} (KS)"), p);
        checks.exact(
            &format!("max-composition identity on every sample, beta = {beta}"),
            composition_ok,
        );

        let stab_n = cfg.slice_samples / 4;
        let draw = |rng: &mut rand_chacha::ChaCha8Rng| -> Result<f64> {
            let ppp = sample_slice_ppp(beta, floor, rng)?;
            slice_merge_depth(&ppp, 0.0, 1.0)
        };
        let mut base = Vec::with_capacity(stab_n);
        for _ in 0..stab_n {
            base.push(draw(&mut rng)?);
        }
        for k in [2usize, 8] {
            let scale = (k as f64).powf(-beta);
            let mut maxes = Vec::with_capacity(stab_n);
            for _ in 0..stab_n {
                let mut m = 0.0f64;
                for _ in 0..k {
                    m = m.max(draw(&mut rng)?);
                }
                maxes.push(m * scale);
            }
            let (_, p) = two_sample_ks(&maxes, &base)?;
            checks.p(&format!("max-stability at beta = {beta}, k = {k} (two-sample KS)"), p);
        }
        if bi == 0 {
            samples = depths;
        }
    }

    Ok(checks.into_record(
        "06-slice-depth",
        "the interval merge-depth has the Frechet-type law exp(-beta x^(-1/beta)), composes under interval splits by max, and is max-stable",
        "slice-depth-{50,75}",
        cfg,
        started,
        2 * cfg.slice_samples as u64,
        None,
        samples,
    ))
}

// ---------------------------------------------------------------------------
// Criterion 7: Poisson coalescence counts.
// ---------------------------------------------------------------------------

pub fn run_coalescence_counts(cfg: &RunConfig) -> Result<TestRecord> {
    let started = Instant::now();
    let (alpha, boundary_length, eps) = (1.5f64, 1e-3f64, 1e-2f64);
    let m_eps = coalescence_mean_spacing(alpha, eps)?;
    let delta = 0.01 * m_eps;
    let target = boundary_length / m_eps;

    let mut rng = stream_rng(cfg.root_seed, "coalescence", 0);
    let mut counts = Vec::with_capacity(cfg.coalescence_runs);
    for _ in 0..cfg.coalescence_runs {
        counts.push(coalescence_count(alpha, boundary_length, eps, delta, &mut rng)?);
    }

    let dispersion = poisson_dispersion(&counts)?;
    let mean = counts.iter().sum::<u64>() as f64 / counts.len() as f64;
    let mut checks = Checks::default();
    checks.abs("dispersion ratio offset from 1", dispersion - 1.0, 0.1);
    checks.abs(
        &format!("relative mean offset from L/m_eps = {target}"),
        (mean - target) / target,
        0.05,
    );

    Ok(checks.into_record(
        "07-coalescence-counts",
        "the number of depth-eps surviving boundary blocks is Poisson with mean L/m_eps, m_eps = ((alpha-1) eps)^(1/(alpha-1))",
        "coalescence",
        cfg,
        started,
        cfg.coalescence_runs as u64,
        None,
        counts.iter().map(|&c| c as f64).collect(),
    ))
}

// ---------------------------------------------------------------------------
// Criterion 8: discrete forest / CSBP bridge.
// ---------------------------------------------------------------------------

const BRIDGE_CELLS: [(f64, f64); 3] = [(0.5, 0.3), (1.0, 0.3), (0.5, 0.6)];

/// Monte Carlo reference for the size-conditioned forest profiles: CSBP
/// values at t = 0.3 and 0.6, conditioned on the total integrated mass
/// falling in `window`. The size window of the forests maps onto exactly
/// this event (total progeny n_tot gives integrated mass c n_tot / m^alpha),
/// so the two ensembles must agree cell by cell; unconditioned transforms
/// would not, because the size window tilts the profile law by an amount
/// that does not vanish with more forests.
fn conditioned_csbp_reference(
    cfg: &RunConfig,
    alpha: f64,
    window: (f64, f64),
) -> Result<Vec<(f64, f64)>> {
    let lamperti = LampertiConfig::default();
    let t_max = 10.0f64;
    let dt = 2e-3f64;
    let grid: Vec<f64> = (1..=(t_max / dt) as usize).map(|k| k as f64 * dt).collect();
    let (i_early, i_late) = ((0.3 / dt) as usize - 1, (0.6 / dt) as usize - 1);
    let attempts = 30 * cfg.forest_count;
    let block_size = 200usize;
    let blocks = attempts.div_ceil(block_size) as u64;
    let outputs = map_blocks(cfg.jobs, blocks, |b| {
        let mut rng = stream_rng(cfg.root_seed, "bridge-reference", b);
        let count = block_size.min(attempts - b as usize * block_size);
        let mut accepted = Vec::new();
        let mut unresolved = 0u64;
        for _ in 0..count {
            let ys = sample_csbp_values(alpha, 1.0, &grid, &lamperti, &mut rng)?;
            let mut mass = 0.0;
            let mut prev = 1.0;
            let mut crossed_hi = false;
            let mut alive = true;
            for &y in &ys {
                mass += 0.5 * (prev + y) * dt;
                prev = y;
                if mass > window.1 {
                    crossed_hi = true;
                    break;
                }
                if y == 0.0 {
                    alive = false;
                    break;
                }
            }
            if crossed_hi {
                continue;
            }
            if alive {
                // Not extinct by t_max yet below the window's upper edge:
                // cannot classify. Must stay negligibly rare.
                unresolved += 1;
                continue;
            }
            if mass >= window.0 {
                accepted.push((ys[i_early], ys[i_late]));
            }
        }
        Ok((accepted, unresolved))
    })?;
    let mut accepted = Vec::new();
    let mut unresolved = 0u64;
    for (a, u) in outputs {
        accepted.extend(a);
        unresolved += u;
    }
    if unresolved as f64 > 0.01 * accepted.len().max(1) as f64 {
        return Err(Error::DegenerateSample(format!(
            "{unresolved} reference paths unresolved at t = {t_max} vs {} accepted",
            accepted.len()
        )));
    }
    if accepted.len() < 200 {
        return Err(Error::DegenerateSample(format!(
            "only {} conditioned reference paths accepted; raise forest_count",
            accepted.len()
        )));
    }
    Ok(accepted)
}

pub fn run_forest_bridge(cfg: &RunConfig) -> Result<TestRecord> {
    let started = Instant::now();
    let alpha = 1.5f64;
    let law = OffspringLaw::new(alpha)?;
    let n = cfg.forest_size;
    let roots = (n as f64).powf(1.0 / alpha).round() as usize;
    let level = generation_for_time(alpha, roots, 0.3)? as u64;

    let outputs = map_blocks(cfg.jobs, cfg.forest_count as u64, |i| {
        let mut rng = stream_rng(cfg.root_seed, "forest-bridge", i);
        let profile = sample_conditioned_forest(&law, roots, n, 0.1, &mut rng)?;
        let y_early = rescaled_profile_value(&profile, 0.3)?;
        let y_late = rescaled_profile_value(&profile, 0.6)?;
        let attach = attachment_positions(&profile, level, 20).unwrap_or_default();
        Ok((y_early, y_late, attach))
    })?;

    let mut accs = [Accumulator::default(), Accumulator::default(), Accumulator::default()];
    let mut attach_pool = Vec::new();
    let mut samples = Vec::new();
    for (y_early, y_late, attach) in outputs {
        for (ci, &(lambda, t)) in BRIDGE_CELLS.iter().enumerate() {
            let y = if t == 0.3 { y_early } else { y_late };
            accs[ci].push((-lambda * y).exp());
        }
        attach_pool.extend(attach);
        samples.push(y_early);
    }

    let mass_scale = bridge_constant(alpha)? * n as f64 / (roots as f64).powf(alpha);
    let reference = conditioned_csbp_reference(cfg, alpha, (mass_scale, 1.1 * mass_scale))?;
    let mut checks = Checks::default();
    for (ci, &(lambda, t)) in BRIDGE_CELLS.iter().enumerate() {
        let mut ref_acc = Accumulator::default();
        for &(y_early, y_late) in &reference {
            let y = if t == 0.3 { y_early } else { y_late };
            ref_acc.push((-lambda * y).exp());
        }
        let se = (accs[ci].standard_error().powi(2) + ref_acc.standard_error().powi(2)).sqrt();
        let z = (accs[ci].mean() - ref_acc.mean()) / se;
        checks.z(
            &format!(
                "conditioned-profile Laplace at (lambda, t) = ({lambda}, {t}): forest {:.4} vs {} conditioned continuum paths {:.4}",
                accs[ci].mean(),
                reference.len(),
                ref_acc.mean()
            ),
            z,
            5.0,
        );
    }

    if attach_pool.len() < 100 {
        return Err(Error::DegenerateSample(format!(
            "only {} attachment positions pooled; raise forest_count",
            attach_pool.len()
        )));
    }
    let (_, p) = ks_test(&attach_pool, |x| x.clamp(0.0, 1.0))?;
    checks.p(
        &format!("attachment positions uniform on [0,1], {} pooled (KS)", attach_pool.len()),
        p,
    );

    // Branching additivity on unconditioned population chains: a chain from
    // 2m ancestors must match the sum of two independent chains from m.
    let m0 = 512usize;
    let generations = 10usize;
    let evolve = |start: usize, rng: &mut rand_chacha::ChaCha8Rng| -> f64 {
        let mut z = start as u64;
        for _ in 0..generations {
            let mut next = 0u64;
            for _ in 0..z {
                next += law.sample(rng);
            }
            z = next;
        }
        z as f64
    };
    let mut rng = stream_rng(cfg.root_seed, "forest-additivity", 0);
    let mut doubled = Vec::with_capacity(cfg.additivity_chains);
    let mut summed = Vec::with_capacity(cfg.additivity_chains);
    for _ in 0..cfg.additivity_chains {
        doubled.push(evolve(2 * m0, &mut rng));
        summed.push(evolve(m0, &mut rng) + evolve(m0, &mut rng));
    }
    let (_, p) = two_sample_ks(&doubled, &summed)?;
    checks.p("population additivity, 2m-ancestor chain vs sum of two m-chains (KS)", p);

    Ok(checks.into_record(
        "08-forest-bridge",
        "size-conditioned heavy-tailed forests bridge to the branching diffusion: rescaled level profiles match its Laplace transform, attachment positions are uniform, and populations add",
        "forest-bridge / forest-additivity",
        cfg,
        started,
        cfg.forest_count as u64,
        None,
        samples,
    ))
}

// ---------------------------------------------------------------------------
// Criterion 9: snake metric invariants.
// ---------------------------------------------------------------------------

pub fn run_snake_metric(cfg: &RunConfig) -> Result<TestRecord> {
    let started = Instant::now();
    let tour = 4_096usize;

    let outputs = map_blocks(cfg.jobs, cfg.snake_count as u64, |i| {
        let mut rng = stream_rng(cfg.root_seed, "snake-metric", i);
        let sample: SnakeSample = if i % 2 == 0 {
            sample_discrete_snake(tour, &mut rng)?
        } else {
            sample_gaussian_snake(tour, &mut rng)?
        };
        let mm = metric_matrix(&sample, cfg.snake_points)?;
        let m = mm.point_times.len();
        let x_min = sample.x[sample.root_index];
        let root_pos = mm
            .point_times
            .iter()
            .position(|&t| t == sample.root_index)
            .ok_or_else(|| Error::structure("root time missing from metric points"))?;

        // Worst violation of each invariant over this sample's matrix.
        let mut asym = 0.0f64;
        let mut diag = 0.0f64;
        let mut closure_excess = 0.0f64;
        let mut cactus = 0.0f64;
        let mut root_err = 0.0f64;
        let mut negativity = 0.0f64;
        for a in 0..m {
            diag = diag.max(mm.d[a][a].abs());
            let x_a = sample.x[mm.point_times[a]];
            root_err = root_err.max((mm.d[root_pos][a] - (x_a - x_min)).abs());
            for b in 0..m {
                asym = asym.max((mm.d[a][b] - mm.d[b][a]).abs());
                closure_excess = closure_excess.max(mm.d[a][b] - mm.d_circ[a][b]);
                negativity = negativity.max(-mm.d[a][b]);
                let gap = (x_a - sample.x[mm.point_times[b]]).abs();
                cactus = cactus.max(gap - mm.d_circ[a][b]);
            }
        }
        let mut triangle = 0.0f64;
        for _ in 0..2_000 {
            let (a, b, c) = (rng.gen_range(0..m), rng.gen_range(0..m), rng.gen_range(0..m));
            triangle = triangle.max(mm.d[a][b] - mm.d[a][c] - mm.d[c][b]);
        }
        Ok([asym, diag, closure_excess, cactus, root_err, negativity, triangle])
    })?;

    let mut worst = [0.0f64; 7];
    for o in outputs {
        for (w, v) in worst.iter_mut().zip(o) {
            *w = w.max(v);
        }
    }
    let names = [
        "symmetry defect",
        "diagonal defect",
        "excess of d over the interval distance",
        "cactus lower-bound violation",
        "root-distance identity defect",
        "negativity of d",
        "triangle violation over sampled triples",
    ];
    let mut checks = Checks::default();
    for (name, w) in names.iter().zip(worst) {
        checks.abs(name, w, EXACT_SLACK);
    }

    Ok(checks.into_record(
        "09-snake-metric",
        "the snake pseudo-metric is a symmetric metric below the interval distance, above the label gap, with d(root, t) = X_t - min X",
        "snake-metric",
        cfg,
        started,
        (cfg.snake_count * cfg.snake_points) as u64,
        None,
        Vec::new(),
    ))
}

// ---------------------------------------------------------------------------
// Criterion 10: excursion-length tail exponent.
// ---------------------------------------------------------------------------

pub fn run_excursion_tail(cfg: &RunConfig) -> Result<TestRecord> {
    let started = Instant::now();
    let cap = 1usize << 20;
    let block_size = 1_000usize;
    let blocks = cfg.tail_walks.div_ceil(block_size) as u64;
    let outputs = map_blocks(cfg.jobs, blocks, |b| {
        let mut rng = stream_rng(cfg.root_seed, "excursion-tail", b);
        let count = block_size.min(cfg.tail_walks - b as usize * block_size);
        Ok((0..count)
            .map(|_| lattice_excursion_length(cap, &mut rng) as f64)
            .collect::<Vec<f64>>())
    })?;
    let lengths: Vec<f64> = outputs.into_iter().flatten().collect();
    let slope = rank_plot_slope(&lengths, 20.0, 2_000.0)?;
    let mut checks = Checks::default();
    checks.abs(&format!("rank-plot slope {slope:.4} offset from -1/2"), slope + 0.5, 0.1);
    Ok(checks.into_record(
        "10-excursion-tail",
        "unconditioned lifetime excursions have length tail exponent -1/2",
        "excursion-tail",
        cfg,
        started,
        cfg.tail_walks as u64,
        None,
        lengths,
    ))
}

// ---------------------------------------------------------------------------
// Criterion 11: drift sign of the truncated area functional.
// ---------------------------------------------------------------------------

pub fn run_area_drift(cfg: &RunConfig) -> Result<TestRecord> {
    let started = Instant::now();
    let (r, eps) = (1e-2f64, 1e-3f64);
    let mut checks = Checks::default();
    let mut ci = None;
    for (i, alpha) in [1.25f64, 1.5, 1.75].into_iter().enumerate() {
        let mut rng = stream_rng(cfg.root_seed, "area-drift", i as u64);
        let est = drift_estimate(alpha, r, eps, cfg.drift_paths, &mut rng)?;
        let lo = est.mean - est.ci_halfwidth;
        let hi = est.mean + est.ci_halfwidth;
        match alpha {
            a if a == 1.5 => {
                checks.abs(
                    &format!("drift at alpha = 3/2: {:.4} +- {:.4}, CI must contain 0", est.mean, est.ci_halfwidth),
                    est.mean,
                    est.ci_halfwidth,
                );
                ci = Some((lo, hi));
            }
            a if a < 1.5 => {
                let ok = lo > 0.0 && est.reference > 0.0;
                checks.exact(
                    &format!(
                        "drift at alpha = {alpha}: CI ({lo:.3}, {hi:.3}) excludes 0 on the side of the integral {:.3}",
                        est.reference
                    ),
                    ok,
                );
            }
            _ => {
                let ok = hi < 0.0 && est.reference < 0.0;
                checks.exact(
                    &format!(
                        "drift at alpha = {alpha}: CI ({lo:.3}, {hi:.3}) excludes 0 on the side of the integral {:.3}",
                        est.reference
                    ),
                    ok,
                );
            }
        }
    }
    Ok(checks.into_record(
        "11-area-drift",
        "the per-unit-time drift of the truncated area functional vanishes exactly at alpha = 3/2 and carries the sign of the jump integral elsewhere",
        "area-drift",
        cfg,
        started,
        3 * cfg.drift_paths,
        ci,
        Vec::new(),
    ))
}

// ---------------------------------------------------------------------------
// Criterion 12: reversed-excursion jump law.
// ---------------------------------------------------------------------------

/// Only jumps at least this large enter the reversal test.
const REVERSAL_A_MIN: f64 = 0.05;
/// Landing-level window for the test. The lower edge keeps the jump's
/// originating level well above the excursion's start level (occupation
/// below a few start levels is distorted by starting at eps_start instead
/// of 0+); the upper edge keeps it well below the stopping cap, whose
/// absorption depletes occupation at high levels.
const REVERSAL_C_MIN: f64 = 0.2;
const REVERSAL_C_MAX: f64 = 0.4;

pub fn run_reversal_law(cfg: &RunConfig) -> Result<TestRecord> {
    let started = Instant::now();
    let alpha = 1.5f64;
    let (eps_start, stop_cap, grid_dt, eps_jump) = (2e-3f64, 4.0f64, 1e-5f64, 1e-3f64);
    let budget = 600_000usize;
    let block_size = 500usize;
    let blocks = cfg.reversal_excursions.div_ceil(block_size) as u64;

    let outputs = map_blocks(cfg.jobs, blocks, |b| {
        let mut rng = stream_rng(cfg.root_seed, "reversal-law", b);
        let count = block_size.min(cfg.reversal_excursions - b as usize * block_size);
        let mut pits = Vec::new();
        let mut discarded = 0u64;
        for _ in 0..count {
            let exc = match sample_excursion_with_jumps(
                alpha, eps_start, stop_cap, grid_dt, eps_jump, budget, &mut rng,
            ) {
                Ok(e) if e.boundary == Boundary::Bottom => e,
                Ok(_) | Err(Error::BudgetExceeded { .. }) => {
                    discarded += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            for &(tj, size) in &exc.path.jumps {
                if size < REVERSAL_A_MIN {
                    continue;
                }
                // Landing level: first grid value at or after the jump. In
                // reversed time this is the level the process jumps down from.
                let idx = ((tj / grid_dt).ceil() as usize).min(exc.path.values.len() - 1);
                let c = exc.path.values[idx];
                if (REVERSAL_C_MIN..=REVERSAL_C_MAX).contains(&c) && c > size {
                    pits.push(reversal_jump_pit(alpha, size, c, REVERSAL_A_MIN)?);
                }
            }
        }
        Ok((pits, discarded))
    })?;

    let mut pits = Vec::new();
    let mut discarded = 0u64;
    for (p, d) in outputs {
        pits.extend(p);
        discarded += d;
    }
    if pits.len() < 500 {
        return Err(Error::DegenerateSample(format!(
            "only {} reversal jumps collected; raise reversal_excursions",
            pits.len()
        )));
    }

    let (_, p) = ks_test(&pits, |u| u.clamp(0.0, 1.0))?;
    let mut checks = Checks::default();
    checks.p(
        &format!(
            "conditional jump-law transform uniform over {} jumps ({} excursions discarded) (KS)",
            pits.len(),
            discarded
        ),
        p,
    );

    Ok(checks.into_record(
        "12-reversal-law",
        "down-jumps of the time-reversed excursion follow the density a^(-alpha-1) (1 - a/c)^(alpha-2) at each level c",
        "reversal-law",
        cfg,
        started,
        pits.len() as u64,
        None,
        pits,
    ))
}

// ---------------------------------------------------------------------------
// Suites and reports.
// ---------------------------------------------------------------------------

pub const SUITES: [&str; 8] = [
    "characterization",
    "drift",
    "csbp",
    "levynet",
    "slices",
    "coalescence",
    "snake",
    "all",
];

/// Criterion ids (1-based) belonging to a named suite.
pub fn suite_criteria(suite: &str) -> Result<Vec<u8>> {
    Ok(match suite {
        "characterization" => vec![1, 2],
        "drift" => vec![11],
        "csbp" => vec![3, 4, 5],
        "levynet" => vec![8, 12],
        "slices" => vec![6],
        "coalescence" => vec![7],
        "snake" => vec![9, 10],
        "all" => (1..=12).collect(),
        other => {
            return Err(Error::Config(format!(
                "unknown suite '{other}'; expected one of {SUITES:?}"
            )))
        }
    })
}

pub fn run_criterion(id: u8, cfg: &RunConfig) -> Result<TestRecord> {
    match id {
        1 => run_jump_integral(cfg),
        2 => run_fold_identity(cfg),
        3 => run_csbp_laplace(cfg),
        4 => run_extinction_law(cfg),
        5 => run_subordinator_ratio(cfg),
        6 => run_slice_depth(cfg),
        7 => run_coalescence_counts(cfg),
        8 => run_forest_bridge(cfg),
        9 => run_snake_metric(cfg),
        10 => run_excursion_tail(cfg),
        11 => run_area_drift(cfg),
        12 => run_reversal_law(cfg),
        other => Err(Error::Config(format!("unknown criterion id {other}"))),
    }
}

/// Properties acknowledged as out of reach at this scale, reported as
/// skipped rather than silently dropped.
fn skipped_entries() -> Vec<String> {
    vec![
        "hull-diameter tail constant: pinning the constant in the r^(4/3) tail needs surface ensembles far beyond this budget; only invariants of the hull boundary are tested".to_string(),
        "state-dependent center net over long horizons: the full interacting construction is not simulated; its ingredients are covered by the coalescence and slice tests".to_string(),
        "topological assertions: sphericity and 3-connectedness of limit surfaces are not decidable from finite metric matrices".to_string(),
    ]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub version: String,
    pub root_seed: u64,
    pub tolerance_scale: f64,
    pub records: Vec<TestRecord>,
    pub skipped: Vec<String>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.records.iter().all(|r| r.passed)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# Verification report: {}\n", self.suite);
        let _ = writeln!(
            out,
            "Root seed {}, tolerance scale {}, toolkit version {}.\n",
            self.root_seed, self.tolerance_scale, self.version
        );
        let _ = writeln!(out, "| test | statistic | threshold | min p | n | time (s) | result |");
        let _ = writeln!(out, "|---|---|---|---|---|---|---|");
        for r in &self.records {
            let p = r.p_value.map_or("-".to_string(), |p| format!("{p:.4}"));
            let _ = writeln!(
                out,
                "| {} | {:.4} | {} | {} | {} | {:.1} | {} |",
                r.id,
                r.statistic,
                r.threshold,
                p,
                r.n,
                r.runtime_ms as f64 / 1e3,
                if r.passed { "pass" } else { "FAIL" }
            );
        }
        let _ = writeln!(out, "\n## Details\n");
        for r in &self.records {
            let _ = writeln!(out, "### {}\n", r.id);
            let _ = writeln!(out, "{} (stream `{}`, seed {}).\n", r.property, r.stream, r.seed);
            for c in &r.checks {
                let _ = writeln!(out, "- {c}");
            }
            let _ = writeln!(out);
        }
        if !self.skipped.is_empty() {
            let _ = writeln!(out, "## Skipped (with reason)\n");
            for s in &self.skipped {
                let _ = writeln!(out, "- {s}");
            }
        }
        out
    }

    /// Write `report.json`, `report.md` and one CSV per test that kept
    /// samples into `dir` (created if missing).
    pub fn write_outputs(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("report.json"), self.to_json()?)?;
        fs::write(dir.join("report.md"), self.to_markdown())?;
        for r in &self.records {
            if r.samples.is_empty() {
                continue;
            }
            let mut csv = String::with_capacity(16 * r.samples.len() + 8);
            csv.push_str("value\n");
            for v in &r.samples {
                let _ = writeln!(csv, "{v}");
            }
            fs::write(dir.join(format!("{}.csv", r.id)), csv)?;
        }
        Ok(())
    }
}

/// Run a named suite under `cfg` and collect the report. Criteria run in
/// order; inner Monte Carlo loops fan out over `cfg.jobs` threads without
/// changing any sampled value.
pub fn run_suite(suite: &str, cfg: &RunConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let ids = suite_criteria(suite)?;
    let run_all = |cfg: &RunConfig| -> Result<Vec<TestRecord>> {
        ids.iter().map(|&id| run_criterion(id, cfg)).collect()
    };
    let records = if cfg.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        pool.install(|| run_all(cfg))?
    } else {
        run_all(cfg)?
    };
    Ok(VerificationReport {
        suite: suite.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        root_seed: cfg.root_seed,
        tolerance_scale: cfg.tolerance_scale,
        records,
        skipped: if suite == "all" { skipped_entries() } else { Vec::new() },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_defaults_and_overrides() {
        let cfg = RunConfig::default();
        assert_eq!(cfg.root_seed, 42);
        assert_eq!(cfg.jobs, 1);
        assert!(cfg.validate().is_ok());

        let cfg = RunConfig::from_json(r#"{"root_seed": 7, "snake_points": 16}"#).unwrap();
        assert_eq!(cfg.root_seed, 7);
        assert_eq!(cfg.snake_points, 16);
        assert_eq!(cfg.csbp_paths, 100_000);

        assert!(RunConfig::from_json(r#"{"snaek_points": 16}"#).is_err());
        assert!(RunConfig::from_json(r#"{"jobs": 0}"#).is_err());
        assert!(RunConfig::from_json(r#"{"tolerance_scale": -1.0}"#).is_err());
    }

    #[test]
    fn suite_names_resolve() {
        assert_eq!(suite_criteria("all").unwrap().len(), 12);
        assert_eq!(suite_criteria("csbp").unwrap(), vec![3, 4, 5]);
        assert_eq!(suite_criteria("snake").unwrap(), vec![9, 10]);
        assert!(suite_criteria("everything").is_err());
        let mut seen = std::collections::BTreeSet::new();
        for suite in SUITES.iter().filter(|&&s| s != "all") {
            seen.extend(suite_criteria(suite).unwrap());
        }
        assert_eq!(seen.len(), 12, "non-overlapping suites must cover all criteria");
    }

    #[test]
    fn fold_criterion_runs_and_is_deterministic() {
        let cfg = RunConfig::default();
        let a = run_fold_identity(&cfg).unwrap();
        let b = run_fold_identity(&cfg).unwrap();
        assert!(a.passed, "fold identity record: {:?}", a.checks);
        assert_eq!(a.statistic, b.statistic);
        assert_eq!(a.n, 1_000);
        assert_eq!(a.samples.len(), 1_000);
    }

    #[test]
    fn zero_tolerance_scale_fails_everything() {
        let cfg = RunConfig {
            tolerance_scale: 0.0,
            ..RunConfig::default()
        };
        let r = run_fold_identity(&cfg).unwrap();
        assert!(!r.passed);
        assert!(r.statistic.is_infinite());
    }

    #[test]
    fn margins_fold_pvalues_and_exact_checks() {
        let mut c = Checks::default();
        c.p("a p-check", 0.5);
        c.exact("an exact check", true);
        c.abs("an error", 2e-7, 1e-6);
        assert!((c.worst() - 0.2).abs() < 1e-12);
        assert_eq!(c.min_p(), Some(0.5));
        c.exact("a failing check", false);
        assert_eq!(c.worst(), 2.0);
    }

    #[test]
    fn report_serialization_and_outputs() {
        let cfg = RunConfig::default();
        let record = run_fold_identity(&cfg).unwrap();
        let report = VerificationReport {
            suite: "characterization".to_string(),
            version: "test".to_string(),
            root_seed: cfg.root_seed,
            tolerance_scale: cfg.tolerance_scale,
            records: vec![record],
            skipped: skipped_entries(),
        };
        assert!(report.all_passed());
        let json = report.to_json().unwrap();
        assert!(json.contains("02-fold-identity"));
        let md = report.to_markdown();
        assert!(md.contains("| 02-fold-identity |"));
        assert!(md.contains("Skipped"));

        let dir = std::env::temp_dir().join(format!("levynet-report-{}", std::process::id()));
        report.write_outputs(&dir).unwrap();
        assert!(dir.join("report.json").is_file());
        assert!(dir.join("report.md").is_file());
        let csv = fs::read_to_string(dir.join("02-fold-identity.csv")).unwrap();
        assert!(csv.starts_with("value\n"));
        assert_eq!(csv.lines().count(), 1_001);
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn unknown_criterion_id_is_a_config_error() {
        assert!(matches!(run_criterion(13, &RunConfig::default()), Err(Error::Config(_))));
    }

    #[test]
    fn cheap_criteria_pass_with_reduced_samples() {
        let cfg = RunConfig {
            coalescence_runs: 500,
            slice_samples: 400,
            ..RunConfig::default()
        };
        let r = run_jump_integral(&cfg).unwrap();
        assert!(r.passed, "jump integral: {:?}", r.checks);
        let r = run_coalescence_counts(&cfg).unwrap();
        assert!(r.passed, "coalescence: {:?}", r.checks);
        let r = run_slice_depth(&cfg).unwrap();
        assert!(r.passed, "slices: {:?}", r.checks);
    }
}
