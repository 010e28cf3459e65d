//! Continuous-state branching paths via the Lamperti time change: print a
//! short trajectory, then compare sampled extinction probabilities with
//! the closed-form law P[extinct by t] = exp(-((alpha-1) t)^(1/(1-alpha)) Y_0).

use levynet::csbp::{extinction_cdf, sample_csbp_path, sample_csbp_values, LampertiConfig};
use levynet::seed::stream_rng;
use levynet::Result;

fn main() -> Result<()> {
    let alpha = 1.5;
    let cfg = LampertiConfig::default();
    let mut rng = stream_rng(7, "example-csbp", 0);

    let path = sample_csbp_path(alpha, 1.0, 2.0, 0.25, &cfg, &mut rng)?;
    println!("one trajectory from Y_0 = 1, printed every 0.25 time units:");
    for (t, y) in path.times.iter().zip(&path.values) {
        println!("  t = {t:.2}  Y = {y:.4}");
    }
    match path.absorption_time {
        Some(t) => println!("  extinct at t = {t:.3}"),
        None => println!("  still alive at the horizon"),
    }

    let horizons = [0.5f64, 1.0, 2.0];
    let trials = 20_000;
    let mut extinct = [0u32; 3];
    for _ in 0..trials {
        let ys = sample_csbp_values(alpha, 1.0, &horizons, &cfg, &mut rng)?;
        for (count, &y) in extinct.iter_mut().zip(&ys) {
            if y == 0.0 {
                *count += 1;
            }
        }
    }
    println!("extinction probabilities over {trials} paths:");
    for (i, &t) in horizons.iter().enumerate() {
        println!(
            "  t = {t}: sampled {:.4}, exact {:.4}",
            extinct[i] as f64 / trials as f64,
            extinction_cdf(alpha, 1.0, t)?
        );
    }
    Ok(())
}
