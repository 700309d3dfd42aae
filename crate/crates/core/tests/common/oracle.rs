// Independent numerical oracles shared by unit and integration tests.
// Nothing here calls into the library's SVD or eigen routines.
#![allow(dead_code, clippy::needless_range_loop)]

use num_complex::Complex64;

/// Eigenvalues (ascending) of a Hermitian matrix given row-major, via cyclic
/// Jacobi on the real symmetric embedding [[Re, -Im], [Im, Re]].
pub fn hermitian_eigenvalues(a: &[Vec<Complex64>]) -> Vec<f64> {
    let n = a.len();
    let m = 2 * n;
    let mut s = vec![vec![0.0f64; m]; m];
    for i in 0..n {
        for j in 0..n {
            s[i][j] = a[i][j].re;
            s[i + n][j + n] = a[i][j].re;
            s[i][j + n] = -a[i][j].im;
            s[i + n][j] = a[i][j].im;
        }
    }
    for _sweep in 0..100 {
        let off: f64 = (0..m)
            .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| s[i][j] * s[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                if s[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (s[q][q] - s[p][p]) / (2.0 * s[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..m {
                    let skp = s[k][p];
                    let skq = s[k][q];
                    s[k][p] = c * skp - sn * skq;
                    s[k][q] = sn * skp + c * skq;
                }
                for k in 0..m {
                    let spk = s[p][k];
                    let sqk = s[q][k];
                    s[p][k] = c * spk - sn * sqk;
                    s[q][k] = sn * spk + c * sqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..m).map(|i| s[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    // Every eigenvalue appears twice in the embedding.
    ev.chunks(2).map(|c| 0.5 * (c[0] + c[1])).collect()
}

/// Roots of the characteristic polynomial of a 2x2 Hermitian matrix, ascending.
pub fn eigen2_charpoly(a: [[Complex64; 2]; 2]) -> [f64; 2] {
    let tr = a[0][0].re + a[1][1].re;
    let det = (a[0][0] * a[1][1] - a[0][1] * a[1][0]).re;
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    [(tr - disc) / 2.0, (tr + disc) / 2.0]
}

/// `F F^dagger` for a row-major matrix.
pub fn gram_outer(f: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let rows = f.len();
    (0..rows)
        .map(|i| {
            (0..rows)
                .map(|j| f[i].iter().zip(&f[j]).map(|(a, b)| a * b.conj()).sum())
                .collect()
        })
        .collect()
}

/// `F^dagger F` for a row-major matrix.
pub fn gram_inner(f: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let cols = f[0].len();
    (0..cols)
        .map(|i| {
            (0..cols)
                .map(|j| f.iter().map(|row| row[i].conj() * row[j]).sum())
                .collect()
        })
        .collect()
}

/// Standard normal upper tail by composite Simpson integration of the density
/// on [x, x + 12].
pub fn normal_tail_quadrature(x: f64) -> f64 {
    let steps = 200_000;
    let (a, b) = (x, x + 12.0);
    let h = (b - a) / steps as f64;
    let pdf = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut sum = pdf(a) + pdf(b);
    for k in 1..steps {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * pdf(a + k as f64 * h);
    }
    sum * h / 3.0
}

/// Regularized lower incomplete gamma for integer shape via the Poisson sum.
pub fn gamma_cdf_integer(shape: u32, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..shape {
        term *= x / k as f64;
        sum += term;
    }
    1.0 - (-x).exp() * sum
}

/// `Pr(log2(1 + s x1) + log2(1 + s x2) < 2 r)` for independent unit-mean
/// exponential `x1, x2`, by Simpson integration over `x1`.
pub fn two_channel_rate_outage(snr: f64, rate: f64) -> f64 {
    let target = (2.0 * rate).exp2();
    let t = (target - 1.0) / snr;
    if t <= 0.0 {
        return 0.0;
    }
    let inner = |x: f64| {
        let t2 = ((target / (1.0 + snr * x)) - 1.0) / snr;
        (-x).exp() * (1.0 - (-t2.max(0.0)).exp())
    };
    let steps = 20_000;
    let h = t / steps as f64;
    let mut sum = inner(0.0) + inner(t);
    for k in 1..steps {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * inner(k as f64 * h);
    }
    sum * h / 3.0
}
