//! Single-carrier, multicarrier and g-scaled tradeoff curves.
//!
//! cargo run --example tradeoff_curves

use cvqkd_manifold::manifold::{CurveParams, TradeoffCurve, TradeoffKind};

fn main() -> cvqkd_manifold::Result<()> {
    let grid: Vec<f64> = (1..=10).map(|k| k as f64 * 0.1).collect();
    let curves = [
        ("single Z=1", TradeoffKind::Single, CurveParams::default()),
        ("single Z=2", TradeoffKind::Single, CurveParams { z: 2.0, ..Default::default() }),
        ("l=2", TradeoffKind::Multicarrier, CurveParams { l: 2, ..Default::default() }),
        ("l=5", TradeoffKind::Multicarrier, CurveParams { l: 5, ..Default::default() }),
        ("g=0.3", TradeoffKind::GScaled, CurveParams { g: 0.3, ..Default::default() }),
    ];
    print!("{:>8}", "varsigma");
    for (name, ..) in &curves {
        print!(" {name:>11}");
    }
    println!();
    let sampled: Vec<TradeoffCurve> = curves
        .iter()
        .map(|(_, kind, p)| TradeoffCurve::sample(*kind, *p, &grid))
        .collect::<cvqkd_manifold::Result<_>>()?;
    for (i, s) in grid.iter().enumerate() {
        print!("{s:>8.2}");
        for c in &sampled {
            print!(" {:>11.3}", c.points[i].1);
        }
        println!();
    }
    Ok(())
}
