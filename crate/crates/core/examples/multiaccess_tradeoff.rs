//! Multiple-access tradeoff: piecewise-linear knots for `K_in <= K_out` and
//! the flat `2 (2 - varsigma)` curve for `K_in > K_out`.
//!
//! cargo run --example multiaccess_tradeoff

use cvqkd_manifold::manifold::{multiaccess_knots, tradeoff_multiaccess};

fn main() -> cvqkd_manifold::Result<()> {
    for (k_in, k_out) in [(2, 4), (3, 3), (4, 8)] {
        println!("K_in={k_in} K_out={k_out}: knots {:?}", multiaccess_knots(k_in, k_out));
    }
    println!("\n{:>8} {:>10} {:>10}", "varsigma", "2x4", "3x2");
    for q in 0..=10 {
        let s = q as f64 * 0.25;
        println!("{s:>8.2} {:>10.3} {:>10.3}", tradeoff_multiaccess(2, 4, s)?, tradeoff_multiaccess(3, 2, s)?);
    }
    Ok(())
}
