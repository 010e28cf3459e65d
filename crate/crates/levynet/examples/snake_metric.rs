//! Snake samples and the induced pseudo-metric: build a labelled tour,
//! close its interval distance, and demonstrate the root identity
//! d(root, t) = X_t - min X.

use levynet::seed::stream_rng;
use levynet::snake::{d_circ, metric_matrix, sample_gaussian_snake};
use levynet::Result;

fn main() -> Result<()> {
    let mut rng = stream_rng(7, "example-snake", 0);
    let sample = sample_gaussian_snake(2_048, &mut rng)?;
    println!(
        "gaussian snake on {} tour times, root (label minimum) at index {}",
        sample.n, sample.root_index
    );

    let mm = metric_matrix(&sample, 64)?;
    let root_pos = mm
        .point_times
        .iter()
        .position(|&t| t == sample.root_index)
        .expect("root is always a metric point");
    let x_min = sample.x[sample.root_index];

    println!("distances from the root (closed metric vs label gap):");
    for &j in &[1usize, 16, 32, 63] {
        let t = mm.point_times[j];
        println!(
            "  to tour time {t}: d = {:.4}, X_t - min X = {:.4}",
            mm.d[root_pos][j],
            sample.x[t] - x_min
        );
    }

    // The closure can only shrink the one-interval distance.
    let (i, j) = (5usize, 40usize);
    let direct = d_circ(&sample, mm.point_times[i], mm.point_times[j])?;
    println!(
        "pair check: interval distance {direct:.4} >= closed distance {:.4}",
        mm.d[i][j]
    );
    Ok(())
}
