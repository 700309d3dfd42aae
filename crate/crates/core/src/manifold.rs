//! Error events, outage probabilities and diversity-multiplexing tradeoff
//! curves.
//!
//! Notation: `snr` is the private SVD-assisted SNR `(SNR')*`, `varsigma` the
//! degree-of-freedom (multiplexing) ratio, `l` the number of Gaussian
//! sub-channels and `Z >= 1` the constellation exponent. Power-law error
//! probabilities are clamped to `[0, 1]`.

use crate::error::{ensure_positive, invalid, Error, Result};
use crate::singular_layer::{svd_decompose, CMatrix, TransmittanceMatrix};
use num_complex::Complex64;
use statrs::function::gamma::gamma_lr;

/// Default constellation exponent.
pub const DEFAULT_Z: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageParams {
    pub snr: f64,
    pub multiplex_ratio: f64,
    pub l: usize,
    pub z_exponent: f64,
    pub g_scale: f64,
}

impl OutageParams {
    pub fn new(snr: f64, multiplex_ratio: f64) -> Self {
        Self { snr, multiplex_ratio, l: 1, z_exponent: DEFAULT_Z, g_scale: 0.0 }
    }

    pub fn with_subchannels(mut self, l: usize) -> Self {
        self.l = l;
        self
    }

    fn check(&self) -> Result<()> {
        if !(self.snr >= 1.0 && self.snr.is_finite()) {
            return Err(Error::OutOfDomain(format!("snr must be >= 1, got {}", self.snr)));
        }
        if !(0.0..=1.0).contains(&self.multiplex_ratio) {
            return Err(Error::OutOfDomain(format!(
                "multiplex ratio must lie in [0, 1], got {}",
                self.multiplex_ratio
            )));
        }
        if self.l == 0 {
            return Err(invalid("l must be >= 1"));
        }
        Ok(())
    }
}

fn clamp_probability(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}

/// Single-carrier `snr^{-(1 - varsigma)}`.
pub fn perr_single(p: &OutageParams) -> Result<f64> {
    p.check()?;
    Ok(clamp_probability(p.snr.powf(-(1.0 - p.multiplex_ratio))))
}

/// Multicarrier `snr^{-l (1 - varsigma)}`.
pub fn perr_amqd(p: &OutageParams) -> Result<f64> {
    p.check()?;
    Ok(clamp_probability(p.snr.powf(-(p.l as f64) * (1.0 - p.multiplex_ratio))))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chi2Outage {
    /// `epsilon^l / l!`, the small-argument integral of the density.
    pub approx: f64,
    /// Regularized lower incomplete gamma `P(l, epsilon)`.
    pub exact: f64,
}

/// Outage of the averaged fade below `epsilon` under the order-`l` gamma
/// density `x^{l-1} e^{-x} / (l-1)!`.
pub fn chi2_outage(l: usize, epsilon: f64) -> Result<Chi2Outage> {
    if l == 0 {
        return Err(invalid("l must be >= 1"));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(invalid(format!("epsilon must lie in (0, 1], got {epsilon}")));
    }
    let log_fact: f64 = (1..=l).map(|k| (k as f64).ln()).sum();
    Ok(Chi2Outage {
        approx: (l as f64 * epsilon.ln() - log_fact).exp(),
        exact: gamma_lr(l as f64, epsilon),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpOutage {
    /// `(2^{S'} - 1) / snr`.
    pub q_form: f64,
    /// `1 - exp(-(2^{S'} - 1) / snr)`.
    pub exp_form: f64,
}

pub fn perr_exponential_outage(secret_rate: f64, snr: f64) -> Result<ExpOutage> {
    ensure_positive("snr", snr)?;
    if !(secret_rate >= 0.0 && secret_rate.is_finite()) {
        return Err(invalid(format!("secret rate must be >= 0, got {secret_rate}")));
    }
    let x = secret_rate.exp2() - 1.0;
    let x = x / snr;
    Ok(ExpOutage { q_form: x, exp_form: -(-x).exp_m1() })
}

/// Least-squares slope (and its standard error) of `y` against `x`.
pub(crate) fn least_squares_slope(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let n = x.len();
    if n < 2 || n != y.len() {
        return Err(Error::Degenerate("need at least two paired points".into()));
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if !(sxx > 0.0) {
        return Err(Error::Degenerate("slope undefined: regressor has zero variance".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let stderr = if n > 2 {
        let icept = my - slope * mx;
        let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - icept - slope * a).powi(2)).sum();
        (rss / (nf - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok((slope, stderr))
}

/// Finite-SNR manifold exponent: slope of `-log2 p_err` against `log2 snr`.
///
/// The normalized private capacity grows like `log2 snr`, so this slope is
/// the finite-grid surrogate for the high-SNR limit.
pub fn manifold_exponent<F: Fn(f64) -> f64>(perr: F, snr_grid: &[f64]) -> Result<f64> {
    if snr_grid.len() < 3 {
        return Err(invalid("snr grid needs at least 3 points"));
    }
    if snr_grid.iter().any(|&s| !(s > 1.0)) {
        return Err(invalid("every snr on the grid must exceed 1"));
    }
    let mut xs = Vec::with_capacity(snr_grid.len());
    let mut ys = Vec::with_capacity(snr_grid.len());
    for &snr in snr_grid {
        let p = perr(snr);
        if !(p > 0.0) {
            return Err(Error::Degenerate(format!("p_err = {p} at snr = {snr}")));
        }
        xs.push(snr.log2());
        ys.push(-p.log2());
    }
    Ok(least_squares_slope(&xs, &ys)?.0)
}

fn check_ratio_unit(varsigma: f64, allow_zero: bool) -> Result<()> {
    let ok = if allow_zero { (0.0..=1.0).contains(&varsigma) } else { varsigma > 0.0 && varsigma <= 1.0 };
    if ok {
        Ok(())
    } else {
        Err(Error::OutOfDomain(format!("varsigma = {varsigma} outside the curve domain")))
    }
}

fn check_z(z: f64) -> Result<()> {
    if z >= 1.0 && z.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("Z must be >= 1, got {z}")))
    }
}

/// Single-carrier curve `f: delta = Z (1 - varsigma)`, `0 < varsigma <= 1`.
pub fn tradeoff_single(varsigma: f64, z: f64) -> Result<f64> {
    check_ratio_unit(varsigma, false)?;
    check_z(z)?;
    Ok(z * (1.0 - varsigma))
}

/// Multicarrier curve `h: delta = l Z (1 - varsigma)`.
pub fn tradeoff_multicarrier(varsigma: f64, z: f64, l: usize) -> Result<f64> {
    check_ratio_unit(varsigma, true)?;
    check_z(z)?;
    if l == 0 {
        return Err(invalid("l must be >= 1"));
    }
    Ok(l as f64 * z * (1.0 - varsigma))
}

/// `delta^g = Z (1 - varsigma) (1 - g)`.
pub fn tradeoff_g_scaled(varsigma: f64, z: f64, g: f64) -> Result<f64> {
    check_ratio_unit(varsigma, true)?;
    check_z(z)?;
    if !(0.0..1.0).contains(&g) {
        return Err(invalid(format!("g must lie in [0, 1), got {g}")));
    }
    Ok(z * (1.0 - varsigma) * (1.0 - g))
}

/// Dimension count of the manifold space. Fields are real because
/// `varsigma` may be fractional.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManifoldDims {
    pub dim_m: f64,
    pub n_dim_perp: f64,
    pub dim_s: f64,
}

fn check_k(k_in: usize, k_out: usize, varsigma: f64) -> Result<()> {
    if k_in == 0 || k_in > k_out {
        return Err(invalid(format!("need 1 <= K_in <= K_out, got K_in={k_in}, K_out={k_out}")));
    }
    if !(0.0..=k_in as f64).contains(&varsigma) {
        return Err(Error::OutOfDomain(format!("varsigma = {varsigma} outside [0, {k_in}]")));
    }
    Ok(())
}

pub fn manifold_dims(k_in: usize, k_out: usize, varsigma: f64) -> Result<ManifoldDims> {
    check_k(k_in, k_out, varsigma)?;
    let (ki, ko) = (k_in as f64, k_out as f64);
    Ok(ManifoldDims {
        dim_m: ki * varsigma + (ko - varsigma) * varsigma,
        n_dim_perp: (ki - varsigma) * (ko - varsigma),
        dim_s: ki * ko,
    })
}

/// Rank outage `snr^{-(K_in - varsigma)(K_out - varsigma)}`.
pub fn perr_rank_outage(k_in: usize, k_out: usize, varsigma: f64, snr: f64) -> Result<f64> {
    check_k(k_in, k_out, varsigma)?;
    if !(snr > 1.0 && snr.is_finite()) {
        return Err(Error::OutOfDomain(format!("snr must exceed 1, got {snr}")));
    }
    let exponent = manifold_dims(k_in, k_out, varsigma)?.n_dim_perp;
    Ok(clamp_probability(snr.powf(-exponent)))
}

/// Multiple-access tradeoff.
///
/// For `K_in > K_out` this is `2 (2 - varsigma)` clamped at zero, independent
/// of the dimensions. Otherwise it interpolates linearly between the knots
/// `(i, (K_in - i)(K_out - i))`, `i = 0..=n_min`, and is zero beyond the last.
pub fn tradeoff_multiaccess(k_in: usize, k_out: usize, varsigma: f64) -> Result<f64> {
    if k_in == 0 || k_out == 0 {
        return Err(invalid("K_in and K_out must be >= 1"));
    }
    if !(varsigma >= 0.0 && varsigma.is_finite()) {
        return Err(Error::OutOfDomain(format!("varsigma must be >= 0, got {varsigma}")));
    }
    if k_in > k_out {
        return Ok((2.0 * (2.0 - varsigma)).max(0.0));
    }
    let n_min = k_in.min(k_out);
    if varsigma >= n_min as f64 {
        return Ok(0.0);
    }
    let i = varsigma.floor() as usize;
    let knot = |i: usize| ((k_in - i) * (k_out - i)) as f64;
    let t = varsigma - i as f64;
    Ok(knot(i) + t * (knot(i + 1) - knot(i)))
}

/// Knots `(i, (K_in - i)(K_out - i))` of the `K_in <= K_out` curve.
pub fn multiaccess_knots(k_in: usize, k_out: usize) -> Vec<(f64, f64)> {
    (0..=k_in.min(k_out))
        .map(|i| (i as f64, (k_in.saturating_sub(i) * k_out.saturating_sub(i)) as f64))
        .collect()
}

/// Secret key rate left when `r` interfering sub-channels share the link with
/// `K_in` senders: `r S' / (r + K_in - 1)`.
pub fn interference_reduced_rate(secret_rate: f64, r: usize, k_in: usize) -> Result<f64> {
    if r == 0 || k_in == 0 {
        return Err(invalid("r and K_in must be >= 1"));
    }
    Ok(r as f64 * secret_rate / (r + k_in - 1) as f64)
}

/// Outage threshold `varsigma (r + K_in - 1) / r * P'` matching
/// [`interference_reduced_rate`].
pub fn interference_outage_threshold(varsigma: f64, r: usize, k_in: usize, private_capacity: f64) -> Result<f64> {
    if r == 0 || k_in == 0 {
        return Err(invalid("r and K_in must be >= 1"));
    }
    Ok(varsigma * (r + k_in - 1) as f64 / r as f64 * private_capacity)
}

/// `log2 det(I + (snr / K_in) F F^dagger)`.
pub fn log_det_rate(m: &TransmittanceMatrix, snr: f64) -> Result<f64> {
    if !m.is_finite() {
        return Err(invalid("matrix has non-finite entries"));
    }
    ensure_positive("snr", snr)?;
    let f = m.entries();
    let k_out = m.k_out();
    let scale = Complex64::new(snr / m.k_in() as f64, 0.0);
    let a: CMatrix = CMatrix::identity(k_out, k_out) + f * f.adjoint() * scale;
    Ok(a.determinant().re.log2())
}

/// Same rate through the eigenchannels: `sum_i log2(1 + (snr / K_in) lambda_i^2)`.
pub fn log_det_rate_svd(m: &TransmittanceMatrix, snr: f64) -> Result<f64> {
    ensure_positive("snr", snr)?;
    let d = svd_decompose(m)?;
    let g = snr / m.k_in() as f64;
    Ok(d.lambdas().iter().map(|l| (g * l * l).ln_1p()).sum::<f64>() / std::f64::consts::LN_2)
}

/// The analytic tradeoff families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TradeoffKind {
    Single,
    Multicarrier,
    GScaled,
    MultiaccessInGtOut,
    MultiaccessInLeOut,
    /// `delta = (K_in - varsigma)(K_out - varsigma)`, the orthogonal-complement
    /// dimension of the manifold space.
    OrthogonalComplement,
}

impl TradeoffKind {
    pub const ALL: [TradeoffKind; 6] = [
        TradeoffKind::Single,
        TradeoffKind::Multicarrier,
        TradeoffKind::GScaled,
        TradeoffKind::MultiaccessInGtOut,
        TradeoffKind::MultiaccessInLeOut,
        TradeoffKind::OrthogonalComplement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TradeoffKind::Single => "single",
            TradeoffKind::Multicarrier => "multicarrier",
            TradeoffKind::GScaled => "g_scaled",
            TradeoffKind::MultiaccessInGtOut => "multiaccess_in_gt_out",
            TradeoffKind::MultiaccessInLeOut => "multiaccess_in_le_out",
            TradeoffKind::OrthogonalComplement => "orthogonal_complement",
        }
    }
}

impl std::str::FromStr for TradeoffKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TradeoffKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| invalid(format!("unknown tradeoff kind `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveParams {
    pub z: f64,
    pub l: usize,
    pub g: f64,
    pub k_in: usize,
    pub k_out: usize,
}

impl Default for CurveParams {
    fn default() -> Self {
        Self { z: DEFAULT_Z, l: 1, g: 0.0, k_in: 2, k_out: 4 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffCurve {
    pub kind: TradeoffKind,
    pub params: CurveParams,
    pub points: Vec<(f64, f64)>,
}

impl TradeoffCurve {
    pub fn evaluate(kind: TradeoffKind, params: &CurveParams, varsigma: f64) -> Result<f64> {
        match kind {
            TradeoffKind::Single => tradeoff_single(varsigma, params.z),
            TradeoffKind::Multicarrier => tradeoff_multicarrier(varsigma, params.z, params.l),
            TradeoffKind::GScaled => tradeoff_g_scaled(varsigma, params.z, params.g),
            TradeoffKind::MultiaccessInGtOut => {
                if params.k_in <= params.k_out {
                    return Err(invalid("multiaccess_in_gt_out needs K_in > K_out"));
                }
                tradeoff_multiaccess(params.k_in, params.k_out, varsigma)
            }
            TradeoffKind::MultiaccessInLeOut => {
                if params.k_in > params.k_out {
                    return Err(invalid("multiaccess_in_le_out needs K_in <= K_out"));
                }
                tradeoff_multiaccess(params.k_in, params.k_out, varsigma)
            }
            TradeoffKind::OrthogonalComplement => {
                Ok(manifold_dims(params.k_in, params.k_out, varsigma)?.n_dim_perp)
            }
        }
    }

    pub fn sample(kind: TradeoffKind, params: CurveParams, grid: &[f64]) -> Result<Self> {
        let points = grid
            .iter()
            .map(|&s| Ok((s, Self::evaluate(kind, &params, s)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { kind, params, points })
    }
}
