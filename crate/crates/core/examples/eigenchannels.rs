//! SVD eigenchannels of a transmittance matrix, their split around a
//! multiplexing rate, and the log-det rate computed two ways.
//!
//! cargo run --example eigenchannels [matrix.csv]

use cvqkd_manifold::manifold::{log_det_rate, log_det_rate_svd};
use cvqkd_manifold::singular_layer::{partition_singulars, reconstruct, svd_decompose, TransmittanceMatrix};

fn main() -> cvqkd_manifold::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/random4x3.csv").to_string());
    let m = TransmittanceMatrix::load_csv(&path)?;
    println!("K_out={} K_in={} n_min={}", m.k_out(), m.k_in(), m.n_min());

    let d = svd_decompose(&m)?;
    for (i, l) in d.lambdas().iter().enumerate() {
        println!("lambda_{i} = {l:.6}  (lambda^2 = {:.6})", l * l);
    }
    let recon = (reconstruct(&d).entries() - m.entries()).norm();
    println!("reconstruction error {recon:.2e}");

    let snr = 20.0;
    let part = partition_singulars(d.lambdas(), 1.5, snr)?;
    println!("rate 1.5 -> S0 = {:?}, S1 = {:?}", part.s0, part.s1);
    println!("S0 bounded by 1: {}, S1 bounded by 1/snr: {}", part.s0_bounded, part.s1_bounded);
    println!("log-det rate {:.6} bits, via eigenchannels {:.6} bits", log_det_rate(&m, snr)?, log_det_rate_svd(&m, snr)?);
    Ok(())
}
