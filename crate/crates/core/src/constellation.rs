//! Phase-space constellations, codeword distances and pairwise error
//! probabilities.
//!
//! A constellation at rate `S'` holds `2^{ceil(S')}` points on a rectangular
//! grid with equal spacing in both quadratures. The spacing is
//! `sqrt(q) 2^{-S'/2}`, so the minimum distance satisfies
//! `d^2 2^{S'} = q` (`q = 1` by default).

use crate::error::{ensure_positive, invalid, Error, Result};
use crate::rng::{streams, CounterStream};
use crate::singular_layer::CMatrix;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use statrs::function::erf::erfc;
use std::fmt::Write as _;

/// Largest supported rate per use.
pub const MAX_BITS: f64 = 16.0;

/// Gaussian tail `Q(x) = Pr(N(0, 1) > x)`.
pub fn gaussian_q(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(invalid(format!("Q(x) needs finite x, got {x}")));
    }
    Ok(0.5 * erfc(x / std::f64::consts::SQRT_2))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseConstellation {
    points: Vec<Complex64>,
    bits: f64,
    spacing: f64,
}

impl PhaseConstellation {
    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn bits(&self) -> f64 {
        self.bits
    }

    pub fn cardinality(&self) -> usize {
        self.points.len()
    }

    /// Grid spacing, equal to the minimum distance.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Minimum pairwise distance by exhaustive search.
    pub fn min_distance(&self) -> f64 {
        min_pairwise_distance(&self.points)
    }

    /// CSV with columns `index,re,im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,re,im\n");
        for (i, p) in self.points.iter().enumerate() {
            let _ = writeln!(out, "{i},{:.12e},{:.12e}", p.re, p.im);
        }
        out
    }
}

pub(crate) fn min_pairwise_distance(points: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.min((a - b).norm());
        }
    }
    best
}

pub fn build_constellation(bits: f64) -> Result<PhaseConstellation> {
    build_constellation_with_q(bits, 1.0)
}

pub fn build_constellation_with_q(bits: f64, q: f64) -> Result<PhaseConstellation> {
    if !(bits > 0.0 && bits <= MAX_BITS) {
        return Err(invalid(format!("rate must lie in (0, {MAX_BITS}], got {bits}")));
    }
    ensure_positive("q", q)?;
    let k = bits.ceil() as u32;
    let cols = 1usize << k.div_ceil(2);
    let rows = 1usize << (k / 2);
    let spacing = q.sqrt() * (-bits / 2.0).exp2();
    let cx = (cols as f64 - 1.0) / 2.0;
    let cy = (rows as f64 - 1.0) / 2.0;
    let points = (0..rows)
        .flat_map(|r| (0..cols).map(move |c| (r, c)))
        .map(|(r, c)| Complex64::new((c as f64 - cx) * spacing, (r as f64 - cy) * spacing))
        .collect();
    Ok(PhaseConstellation { points, bits, spacing })
}

/// Base constellation on sub-channel 1 and independent uniform permutations
/// of it on sub-channels `2..=l`.
#[derive(Debug, Clone, PartialEq)]
pub struct PermutationConstellation {
    base: PhaseConstellation,
    perms: Vec<Vec<usize>>,
    seed: u64,
}

impl PermutationConstellation {
    pub fn base(&self) -> &PhaseConstellation {
        &self.base
    }

    pub fn permutations(&self) -> &[Vec<usize>] {
        &self.perms
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn subchannels(&self) -> usize {
        self.perms.len() + 1
    }

    /// Points used on sub-channel `i` (0-based).
    pub fn subchannel(&self, i: usize) -> Result<Vec<Complex64>> {
        match i {
            0 => Ok(self.base.points.clone()),
            _ => {
                let perm = self
                    .perms
                    .get(i - 1)
                    .ok_or_else(|| invalid(format!("sub-channel {i} out of range")))?;
                Ok(perm.iter().map(|&j| self.base.points[j]).collect())
            }
        }
    }

    /// CSV with columns `subchannel,index,re,im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("subchannel,index,re,im\n");
        for s in 0..self.subchannels() {
            for (i, p) in self.subchannel(s).expect("in range").iter().enumerate() {
                let _ = writeln!(out, "{s},{i},{:.12e},{:.12e}", p.re, p.im);
            }
        }
        out
    }
}

pub fn permute_constellation(base: &PhaseConstellation, l: usize, seed: u64) -> Result<PermutationConstellation> {
    if l == 0 {
        return Err(invalid("l must be >= 1"));
    }
    let mut rng = CounterStream::new(seed, streams::PERMUTATION);
    let perms = (1..l)
        .map(|_| {
            let mut p: Vec<usize> = (0..base.cardinality()).collect();
            p.shuffle(rng.inner());
            p
        })
        .collect();
    Ok(PermutationConstellation { base: base.clone(), perms, seed })
}

/// Two private codewords of equal length.
#[derive(Debug, Clone, PartialEq)]
pub struct CodewordPair {
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
}

impl CodewordPair {
    pub fn new(a: Vec<Complex64>, b: Vec<Complex64>) -> Result<Self> {
        if a.is_empty() {
            return Err(invalid("codewords must have length >= 1"));
        }
        if a.len() != b.len() {
            return Err(Error::LengthMismatch { expected: a.len(), got: b.len() });
        }
        Ok(Self { a, b })
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// `(a_i - b_i) / sqrt(snr)` for every component.
    pub fn normalized_differences(&self, snr: f64) -> Result<Vec<Complex64>> {
        (0..self.len()).map(|i| normalized_difference(self, i, snr)).collect()
    }
}

/// `d_i = (p_A,i - p_B,i) / sqrt(snr)`.
pub fn normalized_difference(pair: &CodewordPair, index: usize, snr: f64) -> Result<Complex64> {
    ensure_positive("snr", snr)?;
    let (a, b) = pair
        .a
        .get(index)
        .zip(pair.b.get(index))
        .ok_or_else(|| invalid(format!("index {index} out of range for length {}", pair.len())))?;
    Ok((a - b) / snr.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductDistance {
    /// `prod_i |d_i|^2`.
    pub value: f64,
    /// `value > (c / (l 2^{S'}))^l`.
    pub meets_product_bound: bool,
    /// `value^{1/l} > c / (l! 2^{S'})`.
    pub meets_normalized_bound: bool,
    pub c: f64,
    pub bits: f64,
}

pub fn product_distance(diffs: &[Complex64], c: f64, bits: f64) -> Result<ProductDistance> {
    if diffs.is_empty() {
        return Err(invalid("need at least one difference"));
    }
    ensure_positive("c", c)?;
    if diffs.iter().any(|d| d.norm_sqr() == 0.0) {
        return Err(Error::Degenerate("zero component gives a zero product distance".into()));
    }
    let l = diffs.len() as f64;
    let value: f64 = diffs.iter().map(|d| d.norm_sqr()).product();
    let scale = bits.exp2();
    let log_l_fact: f64 = (1..=diffs.len()).map(|k| (k as f64).ln()).sum();
    Ok(ProductDistance {
        value,
        meets_product_bound: value > (c / (l * scale)).powf(l),
        meets_normalized_bound: value.powf(1.0 / l) > c / (log_l_fact.exp() * scale),
        c,
        bits,
    })
}

/// `Q(sqrt(sigma_w^2 / (2 sigma_N^2) sum_i |F(T_i)|^2 |d_i|^2))`.
pub fn pairwise_error(fades: &[f64], diffs: &[Complex64], mod_variance: f64, noise_variance: f64) -> Result<f64> {
    if fades.len() != diffs.len() {
        return Err(Error::LengthMismatch { expected: diffs.len(), got: fades.len() });
    }
    ensure_positive("mod_variance", mod_variance)?;
    ensure_positive("noise_variance", noise_variance)?;
    let energy: f64 = fades.iter().zip(diffs).map(|(f, d)| f * d.norm_sqr()).sum();
    gaussian_q((mod_variance / (2.0 * noise_variance) * energy).sqrt())
}

/// Smallest per-sub-channel fades Eve can force:
/// `|F(T_i)|^2 = (v_eve / |d_i|^2 - 1) / snr`.
pub fn worst_case_fades(v_eve: f64, diffs: &[Complex64], snr: f64) -> Result<Vec<f64>> {
    ensure_positive("v_eve", v_eve)?;
    ensure_positive("snr", snr)?;
    diffs
        .iter()
        .map(|d| {
            let d2 = d.norm_sqr();
            if d2 == 0.0 {
                return Err(Error::Degenerate("zero codeword difference".into()));
            }
            if v_eve < d2 {
                return Err(invalid(format!("v_eve = {v_eve} below |d|^2 = {d2} gives a negative fade")));
            }
            Ok((v_eve / d2 - 1.0) / snr)
        })
        .collect()
}

/// Closed-form worst case `Q(sqrt(1/2 sum_i (v_eve - |d_i|^2)))`.
pub fn worst_case_tail(v_eve: f64, diffs: &[Complex64]) -> Result<f64> {
    let s: f64 = diffs.iter().map(|d| v_eve - d.norm_sqr()).sum();
    if s < 0.0 {
        return Err(invalid("v_eve below the squared differences"));
    }
    gaussian_q((0.5 * s).sqrt())
}

/// Private codeword difference matrix: `(p_A - p_B) / sqrt(snr)` placed on
/// the diagonal of an `l x l` matrix, so its singular values are the
/// per-sub-channel `|d_i|`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffMatrix {
    entries: CMatrix,
    snr: f64,
}

impl DiffMatrix {
    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn snr(&self) -> f64 {
        self.snr
    }

    pub fn from_entries(entries: CMatrix, snr: f64) -> Result<Self> {
        ensure_positive("snr", snr)?;
        Ok(Self { entries, snr })
    }
}

pub fn diff_matrix(pair: &CodewordPair, snr: f64) -> Result<DiffMatrix> {
    if pair.a == pair.b {
        return Err(Error::Degenerate("identical codewords".into()));
    }
    let d = pair.normalized_differences(snr)?;
    Ok(DiffMatrix { entries: CMatrix::from_diagonal(&nalgebra::DVector::from_vec(d)), snr })
}

impl std::ops::Neg for DiffMatrix {
    type Output = DiffMatrix;
    fn neg(self) -> DiffMatrix {
        DiffMatrix { entries: -self.entries, snr: self.snr }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallestSingular {
    pub value: f64,
    /// `value^2 > 1 / (K_in 2^{S'})`.
    pub meets_bound: bool,
    pub k_in: usize,
    pub bits: f64,
}

fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn smallest_singular(d: &DiffMatrix, k_in: usize, bits: f64) -> Result<SmallestSingular> {
    if k_in == 0 {
        return Err(invalid("K_in must be >= 1"));
    }
    let value = singular_values(&d.entries).last().copied().unwrap_or(0.0);
    Ok(SmallestSingular {
        value,
        meets_bound: value * value > 1.0 / (k_in as f64 * bits.exp2()),
        k_in,
        bits,
    })
}

/// Double-exponent condition on the largest singular value of `M_j`:
/// `max_i lambda_i > c^{2^{n}} / (n^{2^{n}} 2^{S'/2})` with `n = n_min`.
/// Evaluated as printed; the growth of `2^{n}` in the exponent makes it a
/// curiosity for `n > 4`.
pub fn meets_max_singular_bound(d: &DiffMatrix, n_min: usize, c: f64, bits: f64) -> Result<bool> {
    if n_min == 0 {
        return Err(invalid("n_min must be >= 1"));
    }
    ensure_positive("c", c)?;
    let max = singular_values(&d.entries).first().copied().unwrap_or(0.0);
    let e = (n_min as f64).exp2();
    let log_bound = e * c.ln() - e * (n_min as f64).ln() - 0.5 * bits * std::f64::consts::LN_2;
    Ok(max.ln() > log_bound)
}

/// How the multiple-access pairwise error feeds its argument to `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QArgument {
    /// `Q(1/2 lambda^2 K_in (2^{S'} - 1))`.
    #[default]
    AsPrinted,
    /// `Q(sqrt(1/2 lambda^2 K_in (2^{S'} - 1)))`, matching the single-user forms.
    SquareRooted,
}

pub fn pairwise_error_multiaccess(lambda: f64, k_in: usize, bits: f64, arg: QArgument) -> Result<f64> {
    if !(lambda >= 0.0) {
        return Err(invalid(format!("lambda must be >= 0, got {lambda}")));
    }
    let x = 0.5 * lambda * lambda * k_in as f64 * (bits.exp2() - 1.0);
    match arg {
        QArgument::AsPrinted => gaussian_q(x),
        QArgument::SquareRooted => gaussian_q(x.sqrt()),
    }
}
