//! Closed-form error probabilities against SNR for a single carrier and for
//! `l = 5, 10` Gaussian sub-channels at multiplexing ratio 0.6.
//!
//! cargo run --example error_probability_curves

use cvqkd_manifold::manifold::{perr_amqd, perr_single, OutageParams};

fn main() -> cvqkd_manifold::Result<()> {
    let varsigma = 0.6;
    println!("{:>7} {:>12} {:>12} {:>12}", "snr_db", "single", "l=5", "l=10");
    for db in (0..=30).step_by(3) {
        let snr = 10f64.powf(db as f64 / 10.0);
        let p = OutageParams::new(snr, varsigma);
        println!(
            "{db:>7} {:>12.4e} {:>12.4e} {:>12.4e}",
            perr_single(&p)?,
            perr_amqd(&p.with_subchannels(5))?,
            perr_amqd(&p.with_subchannels(10))?
        );
    }
    Ok(())
}
