//! The two point-process models behind the net construction: merge-depth
//! slices (a Poisson process of marked cut points on an interval) and
//! depth-eps coalescence counts along a boundary of length L.

use levynet::levy_net::{
    coalescence_count, coalescence_mean_spacing, sample_slice_ppp, slice_depth_cdf,
    slice_merge_depth,
};
use levynet::seed::stream_rng;
use levynet::stats::Accumulator;
use levynet::Result;

fn main() -> Result<()> {
    let mut rng = stream_rng(7, "example-slices", 0);

    // Merge depth of the full interval: its CDF is exp(-beta x^(-1/beta)).
    let beta = 0.75;
    let floor = 0.01;
    let ppp = sample_slice_ppp(beta, floor, &mut rng)?;
    let d = slice_merge_depth(&ppp, 0.0, 1.0)?;
    println!(
        "one slice draw at beta = {beta}: {} points above {floor}, depth {d:.4} (CDF there {:.4})",
        ppp.points.len(),
        slice_depth_cdf(beta, d)
    );

    // Depth composes under interval splits by taking the max.
    let (left, right) = (slice_merge_depth(&ppp, 0.0, 0.3)?, slice_merge_depth(&ppp, 0.3, 1.0)?);
    println!("  split at 0.3: max({left:.4}, {right:.4}) = {:.4}", left.max(right));

    // Coalescence: boundary blocks surviving to depth eps are Poisson with
    // mean L / m_eps.
    let (alpha, eps, boundary) = (1.5, 1e-2, 1e-3);
    let m_eps = coalescence_mean_spacing(alpha, eps)?;
    let delta = 0.01 * m_eps;
    let mut acc = Accumulator::default();
    for _ in 0..2_000 {
        acc.push(coalescence_count(alpha, boundary, eps, delta, &mut rng)? as f64);
    }
    println!(
        "coalescence counts at depth {eps}: mean {:.2} (target {:.2}), variance {:.2}",
        acc.mean(),
        boundary / m_eps,
        acc.variance()
    );
    Ok(())
}
