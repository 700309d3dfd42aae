//! Eigenchannel decomposition of the Fourier-domain transmittance matrix.
//!
//! `F(T)` is stored `K_out x K_in` (receivers by senders) with `K_in <= K_out`,
//! so `F F^dagger` is `K_out x K_out`. The factorization
//! `F = U_2 Gamma F_1^{-1}` carries the eigenchannels
//! `lambda_1 >= ... >= lambda_{n_min}` on the diagonal of `Gamma`.

use crate::error::{invalid, Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::path::Path;

pub type CMatrix = DMatrix<Complex64>;

#[derive(Debug, Clone, PartialEq)]
pub struct TransmittanceMatrix {
    entries: CMatrix,
}

impl TransmittanceMatrix {
    pub fn new(entries: CMatrix) -> Result<Self> {
        let (k_out, k_in) = entries.shape();
        if k_in == 0 {
            return Err(invalid("K_in must be >= 1"));
        }
        if k_in > k_out {
            return Err(invalid(format!("K_in ({k_in}) must not exceed K_out ({k_out})")));
        }
        Ok(Self { entries })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let k_out = rows.len();
        let k_in = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != k_in) {
            return Err(invalid("ragged matrix rows"));
        }
        Self::new(CMatrix::from_fn(k_out, k_in, |i, j| rows[i][j]))
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn k_in(&self) -> usize {
        self.entries.ncols()
    }

    pub fn k_out(&self) -> usize {
        self.entries.nrows()
    }

    pub fn n_min(&self) -> usize {
        self.k_in().min(self.k_out())
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Row-major CSV, each entry written as `re:im`.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split(',')
                .map(|cell| parse_entry(cell.trim()))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::Parse("matrix file has no rows".into()));
        }
        Self::from_rows(&rows)
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_csv_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.k_out() {
            let row: Vec<String> = (0..self.k_in())
                .map(|j| {
                    let z = self.entries[(i, j)];
                    format!("{:e}:{:e}", z.re, z.im)
                })
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

fn parse_entry(cell: &str) -> std::result::Result<Complex64, String> {
    let (re, im) = cell
        .split_once(':')
        .ok_or_else(|| format!("entry `{cell}` is not of the form re:im"))?;
    let re: f64 = re.trim().parse().map_err(|_| format!("bad real part in `{cell}`"))?;
    let im: f64 = im.trim().parse().map_err(|_| format!("bad imaginary part in `{cell}`"))?;
    Ok(Complex64::new(re, im))
}

/// `F = U_2 Gamma F_1^{-1}` with descending eigenchannels.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    u2: CMatrix,
    lambdas: Vec<f64>,
    f1_inv: CMatrix,
}

impl EigenDecomposition {
    /// `K_out x K_out` unitary.
    pub fn u2(&self) -> &CMatrix {
        &self.u2
    }

    /// Eigenchannels, non-increasing.
    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    /// `K_in x K_in` unitary.
    pub fn f1_inv(&self) -> &CMatrix {
        &self.f1_inv
    }

    pub fn n_min(&self) -> usize {
        self.lambdas.len()
    }

    pub fn from_parts(u2: CMatrix, lambdas: Vec<f64>, f1_inv: CMatrix) -> Result<Self> {
        if !u2.is_square() || !f1_inv.is_square() {
            return Err(invalid("unitary factors must be square"));
        }
        if lambdas.len() != u2.nrows().min(f1_inv.nrows()) {
            return Err(invalid("lambda count must equal min(K_in, K_out)"));
        }
        check_descending(&lambdas)?;
        if lambdas.iter().any(|&l| l < 0.0) {
            return Err(invalid("eigenchannels must be nonnegative"));
        }
        Ok(Self { u2, lambdas, f1_inv })
    }
}

pub fn svd_decompose(m: &TransmittanceMatrix) -> Result<EigenDecomposition> {
    if !m.is_finite() {
        return Err(invalid("matrix has non-finite entries"));
    }
    let (k_out, k_in) = m.entries.shape();
    let n_min = k_in.min(k_out);
    let svd = m.entries.clone().svd(true, true);
    let u_thin = svd.u.expect("U requested");
    let v_t = svd.v_t.expect("V^T requested");

    let mut order: Vec<usize> = (0..n_min).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let lambdas: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let u_sorted = CMatrix::from_fn(k_out, n_min, |r, c| u_thin[(r, order[c])]);
    let f1_inv = CMatrix::from_fn(n_min, k_in, |r, c| v_t[(order[r], c)]);

    let u2 = if n_min == k_out {
        u_sorted
    } else {
        complete_unitary(&u_sorted)
    };
    Ok(EigenDecomposition { u2, lambdas, f1_inv })
}

/// Extends orthonormal columns `u` (`n x k`) to an `n x n` unitary whose first
/// `k` columns are `u`.
fn complete_unitary(u: &CMatrix) -> CMatrix {
    let (n, k) = u.shape();
    let mut aug = CMatrix::zeros(n, k + n);
    aug.view_mut((0, 0), (n, k)).copy_from(u);
    aug.view_mut((0, k), (n, n)).fill_with_identity();
    let q = aug.qr().q();
    let mut out = q.clone();
    out.view_mut((0, 0), (n, k)).copy_from(u);
    out
}

/// `sum_i lambda_i U_2[:, i] F_1^{-1}[i, :]`.
pub fn reconstruct(d: &EigenDecomposition) -> TransmittanceMatrix {
    let (k_out, k_in) = (d.u2.nrows(), d.f1_inv.ncols());
    let mut m = CMatrix::zeros(k_out, k_in);
    for (i, &lambda) in d.lambdas.iter().enumerate() {
        m += d.u2.column(i) * d.f1_inv.row(i) * Complex64::new(lambda, 0.0);
    }
    TransmittanceMatrix { entries: m }
}

fn check_descending(lambdas: &[f64]) -> Result<()> {
    if lambdas.windows(2).any(|w| w[0] < w[1]) {
        return Err(invalid("singular values must be sorted in non-increasing order"));
    }
    Ok(())
}

/// Split of the eigenchannels around a multiplexing rate.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularPartition {
    /// The largest `ceil(rate)` eigenchannels.
    pub s0: Vec<f64>,
    pub s1: Vec<f64>,
    /// `max(s0) <= 1` (vacuously true when empty).
    pub s0_bounded: bool,
    /// `max(s1) <= 1 / snr`.
    pub s1_bounded: bool,
}

pub fn partition_singulars(lambdas: &[f64], multiplex_rate: f64, snr: f64) -> Result<SingularPartition> {
    check_descending(lambdas)?;
    if !(multiplex_rate >= 0.0) {
        return Err(invalid(format!("multiplex rate must be >= 0, got {multiplex_rate}")));
    }
    crate::error::ensure_positive("snr", snr)?;
    let split = multiplex_rate.ceil() as usize;
    if split > lambdas.len() {
        return Err(invalid(format!(
            "ceil(rate) = {split} exceeds the {} available eigenchannels",
            lambdas.len()
        )));
    }
    let (s0, s1) = lambdas.split_at(split);
    Ok(SingularPartition {
        s0_bounded: s0.iter().all(|&l| l <= 1.0),
        s1_bounded: s1.iter().all(|&l| l <= 1.0 / snr),
        s0: s0.to_vec(),
        s1: s1.to_vec(),
    })
}

/// Number of eigenchannels strictly above `threshold`.
pub fn rank_epsilon(lambdas: &[f64], threshold: f64) -> usize {
    lambdas.iter().filter(|&&l| l > threshold).count()
}
