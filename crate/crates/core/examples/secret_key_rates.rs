//! Per-sub-channel capacities, optimal attack noise and private rates for a
//! channel described in TOML.
//!
//! cargo run --example secret_key_rates [channel.toml]

use cvqkd_manifold::channel::ChannelModel;
use cvqkd_manifold::rates::{
    aggregate_secret_key_bound, fixed_secret_key_rate, rate_report, KeyRateConfig, SubchannelLoad, DEFAULT_SVD_GAIN,
};

fn main() -> cvqkd_manifold::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/channel.toml").to_string());
    let model = ChannelModel::load(&path)?;
    let mod_variance = 1.0;
    let reports = rate_report(&model, mod_variance, DEFAULT_SVD_GAIN)?;

    println!("{:>3} {:>8} {:>9} {:>9} {:>9} {:>10} {:>9} {:>9}", "i", "|T|^2", "N_i", "C", "C_svd", "sigma_N*", "P", "P_svd");
    for r in &reports {
        println!(
            "{:>3} {:>8.4} {:>9.4} {:>9.4} {:>9.4} {:>10.4} {:>9.4} {:>9.4}",
            r.index, r.transmittance_sq, r.excess_noise, r.capacity, r.svd_capacity, r.attack_noise, r.private_capacity, r.svd_private_capacity
        );
    }

    let loads: Vec<SubchannelLoad> = reports
        .iter()
        .map(|r| SubchannelLoad { mod_variance, fade_sq: r.transmittance_sq, attack_noise: r.attack_noise })
        .collect();
    let bound = aggregate_secret_key_bound(&loads)?;
    println!("aggregate bound {bound:.6} bits");
    let total_p: f64 = reports.iter().map(|r| r.private_capacity).sum();
    for varsigma in [0.25, 0.5, 0.75] {
        let cfg = KeyRateConfig::new(varsigma, reports.len(), total_p)?;
        println!("varsigma {varsigma}: fixed secret key rate {:.6} bits", fixed_secret_key_rate(&cfg));
    }
    Ok(())
}
