//! Grid constellations, random permutations across sub-channels, product
//! distances and the worst-case pairwise error.
//!
//! cargo run --example permutation_constellation

use cvqkd_manifold::constellation::{
    build_constellation, diff_matrix, pairwise_error, pairwise_error_multiaccess, permute_constellation,
    product_distance, smallest_singular, worst_case_fades, worst_case_tail, CodewordPair, QArgument,
};

fn main() -> cvqkd_manifold::Result<()> {
    for s in 1..=6 {
        let k = build_constellation(s as f64)?;
        println!("S'={s}: {:>3} points, d_min={:.6}, d^2 2^S = {:.3}", k.cardinality(), k.min_distance(), k.min_distance().powi(2) * (s as f64).exp2());
    }

    let l = 3;
    let base = build_constellation(2.0)?;
    let pc = permute_constellation(&base, l, 42)?;
    println!("\npermutations for l={l}: {:?}", pc.permutations());

    // Codewords: symbol 0 and symbol 3 on every sub-channel.
    let (a, b): (Vec<_>, Vec<_>) = (0..l)
        .map(|i| {
            let pts = pc.subchannel(i).expect("sub-channel in range");
            (pts[0], pts[3])
        })
        .unzip();
    let pair = CodewordPair::new(a, b)?;
    let snr = 4.0;
    let diffs = pair.normalized_differences(snr)?;
    let pd = product_distance(&diffs, 1.0, 2.0)?;
    println!("product distance {:.6} (product bound {}, normalized bound {})", pd.value, pd.meets_product_bound, pd.meets_normalized_bound);

    let v_eve = diffs.iter().map(|d| d.norm_sqr()).fold(0.0, f64::max) * 2.0;
    let fades = worst_case_fades(v_eve, &diffs, snr)?;
    println!("worst-case fades {fades:.4?}");
    println!(
        "pairwise error at those fades {:.6e}, closed form {:.6e}",
        pairwise_error(&fades, &diffs, snr, 1.0)?,
        worst_case_tail(v_eve, &diffs)?
    );

    let m = diff_matrix(&pair, snr)?;
    let s = smallest_singular(&m, 2, 2.0)?;
    println!("\nsmallest singular {:.6}, bound met: {}", s.value, s.meets_bound);
    for arg in [QArgument::AsPrinted, QArgument::SquareRooted] {
        println!("multiple-access pairwise error ({arg:?}) {:.6e}", pairwise_error_multiaccess(s.value, 2, 2.0, arg)?);
    }
    Ok(())
}
