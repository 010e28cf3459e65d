//! Size-conditioned heavy-tailed forests: sample one, show its rescaled
//! level profile at a few times, and list where the macroscopic branch
//! points sit along their generation (they should look uniform).

use levynet::forest::{
    attachment_positions, generation_for_time, rescaled_profile_value, sample_conditioned_forest,
    OffspringLaw,
};
use levynet::seed::stream_rng;
use levynet::Result;

fn main() -> Result<()> {
    let alpha = 1.5;
    let n = 50_000;
    let law = OffspringLaw::new(alpha)?;
    let roots = (n as f64).powf(1.0 / alpha).round() as usize;
    let mut rng = stream_rng(7, "example-forest", 0);

    let profile = sample_conditioned_forest(&law, roots, n, 0.1, &mut rng)?;
    println!(
        "forest with {} roots, {} vertices, {} generations",
        profile.roots,
        profile.n,
        profile.level_counts.len()
    );

    println!("rescaled level profile (continuum time -> population):");
    for t in [0.1f64, 0.2, 0.3, 0.5] {
        let g = generation_for_time(alpha, roots, t)?;
        println!(
            "  t = {t}: generation {g}, Y = {:.4}",
            rescaled_profile_value(&profile, t)?
        );
    }

    let level = generation_for_time(alpha, roots, 0.2)? as u64;
    let positions = attachment_positions(&profile, level, 10)?;
    println!(
        "branch points with >= 10 offspring at generation {level}: {} found",
        positions.len()
    );
    for p in positions.iter().take(8) {
        println!("  relative position {p:.3}");
    }
    Ok(())
}
