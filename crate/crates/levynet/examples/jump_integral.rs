//! The jump integral I(alpha) that decides where the area functional is a
//! martingale: tabulate the closed form against adaptive quadrature and
//! locate its root in (1, 2).

use levynet::characterization::{
    find_martingale_alpha, find_root_by, i_alpha_closed, i_alpha_quadrature,
};
use levynet::Result;

fn main() -> Result<()> {
    println!("alpha    closed form      quadrature       difference");
    for k in 0..9 {
        let alpha = 1.1 + 0.1 * k as f64;
        let c = i_alpha_closed(alpha)?;
        let q = i_alpha_quadrature(alpha)?;
        println!("{alpha:.2}   {c:>14.8}   {q:>14.8}   {:>10.2e}", (c - q).abs());
    }
    println!(
        "root of the closed form: {:.9}",
        find_martingale_alpha(1e-9)?
    );
    println!(
        "root of the quadrature:  {:.9}",
        find_root_by(i_alpha_quadrature, 1e-8)?
    );
    Ok(())
}
