//! Jump law of the time-reversed excursion: collect up-jumps of simulated
//! excursions, transform each size through the conditional CDF at its
//! landing level, and summarize how uniform the transforms look.

use levynet::characterization::reversal_jump_pit;
use levynet::seed::stream_rng;
use levynet::stable::{sample_excursion_with_jumps, Boundary};
use levynet::stats::ks_test;
use levynet::{Error, Result};

fn main() -> Result<()> {
    let alpha = 1.5;
    let a_min = 0.05;
    let mut rng = stream_rng(7, "example-reversal", 0);
    let mut pits = Vec::new();
    let mut excursions = 0u32;
    while pits.len() < 300 && excursions < 40_000 {
        excursions += 1;
        let exc = match sample_excursion_with_jumps(alpha, 2e-3, 4.0, 1e-5, 1e-3, 600_000, &mut rng)
        {
            Ok(e) if e.boundary == Boundary::Bottom => e,
            Ok(_) | Err(Error::BudgetExceeded { .. }) => continue,
            Err(e) => return Err(e),
        };
        for &(tj, size) in &exc.path.jumps {
            if size < a_min {
                continue;
            }
            let idx = ((tj / 1e-5).ceil() as usize).min(exc.path.values.len() - 1);
            let c = exc.path.values[idx];
            if (0.2..=0.4).contains(&c) && c > size {
                pits.push(reversal_jump_pit(alpha, size, c, a_min)?);
            }
        }
    }
    let (d, p) = ks_test(&pits, |u| u.clamp(0.0, 1.0))?;
    println!(
        "{} transformed jumps from {excursions} excursions: KS distance {d:.4}, p = {p:.3}",
        pits.len()
    );
    println!(
        "mean {:.3} (uniform: 0.5), min {:.3}, max {:.3}",
        pits.iter().sum::<f64>() / pits.len() as f64,
        pits.iter().cloned().fold(f64::INFINITY, f64::min),
        pits.iter().cloned().fold(0.0, f64::max)
    );
    Ok(())
}
