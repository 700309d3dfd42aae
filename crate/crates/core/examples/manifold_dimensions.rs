//! Dimension split of the manifold space for a 2-input, 4-output link:
//! `dim(M) + N_perp = K_in K_out` at every multiplexing ratio.
//!
//! cargo run --example manifold_dimensions

use cvqkd_manifold::manifold::{manifold_dims, perr_rank_outage};

fn main() -> cvqkd_manifold::Result<()> {
    let (k_in, k_out) = (2, 4);
    println!("{:>8} {:>8} {:>8} {:>8} {:>14}", "varsigma", "dim_M", "N_perp", "dim_S", "p_out@snr=10");
    for q in 0..=8 {
        let s = q as f64 * 0.25;
        let d = manifold_dims(k_in, k_out, s)?;
        println!(
            "{s:>8.2} {:>8.3} {:>8.3} {:>8.0} {:>14.4e}",
            d.dim_m,
            d.n_dim_perp,
            d.dim_s,
            perr_rank_outage(k_in, k_out, s, 10.0)?
        );
    }
    Ok(())
}
