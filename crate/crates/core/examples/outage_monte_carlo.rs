//! Monte Carlo outage under Rayleigh fading, compared with the exact
//! probabilities, with the fitted diversity slope.
//!
//! cargo run --release --example outage_monte_carlo

use cvqkd_manifold::montecarlo::{default_secret_rate, estimate_mean_fade_outage, estimate_rate_outage, TrialConfig};

fn main() -> cvqkd_manifold::Result<()> {
    let grid = vec![10.0, 31.6, 100.0];
    for l in [1, 2] {
        let cfg = TrialConfig::new(l, 0.0, grid.clone(), 1_000_000, 2024)?;
        let est = estimate_mean_fade_outage(&cfg)?;
        println!("mean-fade outage, l={l}");
        let exact = est.analytic.clone().unwrap_or_default();
        for i in 0..grid.len() {
            println!(
                "  snr {:>6}: p_hat {:.5e} [{:.5e}, {:.5e}]  exact {:.5e}",
                grid[i], est.p_hat[i], est.ci_low[i], est.ci_high[i], exact[i]
            );
        }
        println!("  diversity {:.3} +- {:.3}", est.diversity(), est.slope_stderr);
    }

    let cfg = TrialConfig::new(2, 0.5, grid.clone(), 1_000_000, 2025)?;
    let est = estimate_rate_outage(&cfg, default_secret_rate)?;
    println!("rate outage, l=2, varsigma=0.5: p_hat {:?}, diversity {:.3}", est.p_hat, est.diversity());
    print!("\n{}", est.to_csv());
    Ok(())
}
