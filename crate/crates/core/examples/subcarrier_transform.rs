//! Gaussian phase-space sampling, the unitary subcarrier transform and one
//! pass through faded Gaussian sub-channels.
//!
//! cargo run --example subcarrier_transform

use cvqkd_manifold::channel::{apply_channel, sample_faded_transmittances};
use cvqkd_manifold::phase_space::{dft, inverse_dft, sample_gaussian_vector};

fn main() -> cvqkd_manifold::Result<()> {
    let n = 8;
    let z = sample_gaussian_vector(n, 2.0, 7)?;
    let d = inverse_dft(&z);
    println!("|z|^2 = {:.6}, |d|^2 = {:.6}", z.norm_sqr(), d.norm_sqr());
    let back = dft(&d);
    let err: f64 = back.samples().iter().zip(z.samples()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    println!("round-trip max error {err:.2e}");

    let fades = sample_faded_transmittances(n, 1.0, 11)?;
    let y = apply_channel(&d, &fades, 0.05, 13)?;
    println!("{:>3} {:>10} {:>22} {:>22}", "i", "|F(T)|^2", "F(d)_i", "y_i");
    for (i, ((f, fd), yi)) in fades.iter().zip(back.samples()).zip(y.samples()).enumerate() {
        println!("{i:>3} {:>10.4} {:>22} {:>22}", f.fade_sq(), format!("{fd:.4}"), format!("{yi:.4}"));
    }
    Ok(())
}
