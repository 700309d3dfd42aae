//! SNR variants, capacities, optimal-attack noise and secret key rates.
//!
//! Per-sub-channel capacities use the real-domain `1/2 log2(1 + SNR)` form.
//! The aggregate secret key bound sums `log2(1 + SNR)` with no `1/2`; from
//! that point on the analysis works with complex-domain rates, and both
//! forms are exposed.

use crate::channel::ChannelModel;
use crate::error::{ensure_positive, invalid, Error, Result};

/// Default `c` in `sigma_w''^2 = sigma_w^2 (1 + c)`.
pub const DEFAULT_SVD_GAIN: f64 = 1.0;

fn ensure_nonneg(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be finite and >= 0, got {v}")))
    }
}

/// The four SNR flavours of a sub-channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrSet {
    pub snr: f64,
    pub snr_svd: f64,
    pub snr_private: f64,
    pub snr_svd_private: f64,
}

impl SnrSet {
    pub fn new(mod_variance: f64, gain_c: f64, noise_variance: f64, attack_noise: f64) -> Result<Self> {
        ensure_positive("mod_variance", mod_variance)?;
        ensure_positive("gain_c", gain_c)?;
        ensure_positive("noise_variance", noise_variance)?;
        ensure_positive("attack_noise", attack_noise)?;
        let svd_var = svd_mod_variance(mod_variance, gain_c);
        Ok(Self {
            snr: mod_variance / noise_variance,
            snr_svd: svd_var / noise_variance,
            snr_private: mod_variance / attack_noise,
            snr_svd_private: svd_var / attack_noise,
        })
    }
}

/// `sigma_w''^2 = sigma_w^2 (1 + c)`.
pub fn svd_mod_variance(mod_variance: f64, gain_c: f64) -> f64 {
    mod_variance * (1.0 + gain_c)
}

/// `1/2 log2(1 + sigma_w^2 |F|^2 / sigma_N^2)`.
pub fn subchannel_capacity(mod_variance: f64, fade_sq: f64, noise_variance: f64) -> Result<f64> {
    ensure_positive("mod_variance", mod_variance)?;
    ensure_positive("noise_variance", noise_variance)?;
    ensure_nonneg("fade_sq", fade_sq)?;
    Ok(0.5 * (mod_variance * fade_sq / noise_variance).ln_1p() / std::f64::consts::LN_2)
}

/// Capacity with the SVD-boosted modulation variance.
pub fn svd_capacity(mod_variance: f64, gain_c: f64, fade_sq: f64, noise_variance: f64) -> Result<f64> {
    ensure_positive("gain_c", gain_c)?;
    ensure_positive("mod_variance", mod_variance)?;
    subchannel_capacity(svd_mod_variance(mod_variance, gain_c), fade_sq, noise_variance)
}

/// Noise variance seen under the optimal collective Gaussian attack.
///
/// The bracket `(m f + X)/(1 + X m f) - 1` factors as
/// `(1 - m f)(X - 1)/(1 + X m f)`; with `X >= 1` it is positive only when
/// `m f < 1` and `X > 1`. Anything else is reported as
/// [`Error::DegenerateRegime`].
pub fn optimal_attack_noise(mod_variance: f64, fade_sq: f64, sigma_x: f64) -> Result<f64> {
    ensure_positive("mod_variance", mod_variance)?;
    ensure_positive("fade_sq", fade_sq)?;
    ensure_positive("sigma_x", sigma_x)?;
    let mf = mod_variance * fade_sq;
    let bracket = (mf + sigma_x) / (1.0 + sigma_x * mf) - 1.0;
    if bracket > 0.0 {
        Ok(mod_variance / bracket)
    } else {
        Err(Error::DegenerateRegime { bracket })
    }
}

/// Real-domain private capacity `1/2 log2(1 + m f / sigma_N*^2)`.
pub fn private_capacity(mod_variance: f64, fade_sq: f64, attack_noise: f64) -> Result<f64> {
    ensure_positive("attack_noise", attack_noise)?;
    subchannel_capacity(mod_variance, fade_sq, attack_noise)
}

/// Complex-domain private rate `log2(1 + m f / sigma_N*^2)`.
pub fn private_capacity_complex(mod_variance: f64, fade_sq: f64, attack_noise: f64) -> Result<f64> {
    Ok(2.0 * private_capacity(mod_variance, fade_sq, attack_noise)?)
}

pub fn svd_private_capacity(mod_variance: f64, gain_c: f64, fade_sq: f64, attack_noise: f64) -> Result<f64> {
    ensure_positive("gain_c", gain_c)?;
    ensure_positive("mod_variance", mod_variance)?;
    private_capacity(svd_mod_variance(mod_variance, gain_c), fade_sq, attack_noise)
}

/// One sub-channel's contribution to the aggregate key bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubchannelLoad {
    pub mod_variance: f64,
    pub fade_sq: f64,
    pub attack_noise: f64,
}

/// `sum_l log2(1 + sigma_w,i^2 |F(T_i)|^2 / sigma_N*,i^2)`, complex-domain
/// (no `1/2`).
pub fn aggregate_secret_key_bound(loads: &[SubchannelLoad]) -> Result<f64> {
    if loads.is_empty() {
        return Err(invalid("at least one sub-channel is required"));
    }
    loads
        .iter()
        .map(|s| private_capacity_complex(s.mod_variance, s.fade_sq, s.attack_noise))
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeyRateConfig {
    multiplex_ratio: f64,
    n_min: usize,
    private_capacity: f64,
}

impl KeyRateConfig {
    pub fn new(multiplex_ratio: f64, n_min: usize, private_capacity: f64) -> Result<Self> {
        ensure_positive("multiplex_ratio", multiplex_ratio)?;
        if n_min == 0 {
            return Err(invalid("n_min must be >= 1"));
        }
        ensure_nonneg("private_capacity", private_capacity)?;
        Ok(Self { multiplex_ratio, n_min, private_capacity })
    }

    pub fn multiplex_ratio(&self) -> f64 {
        self.multiplex_ratio
    }

    pub fn n_min(&self) -> usize {
        self.n_min
    }

    pub fn private_capacity(&self) -> f64 {
        self.private_capacity
    }
}

/// `S'_k = (varsigma_k / n_min) P'`.
pub fn fixed_secret_key_rate(cfg: &KeyRateConfig) -> f64 {
    cfg.multiplex_ratio / cfg.n_min as f64 * cfg.private_capacity
}

/// Inverse of [`fixed_secret_key_rate`]: `varsigma_k = S'_k n_min / P'`.
pub fn multiplex_ratio_for_rate(secret_rate: f64, n_min: usize, private_capacity: f64) -> Result<f64> {
    ensure_positive("private_capacity", private_capacity)?;
    Ok(secret_rate * n_min as f64 / private_capacity)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeApprox {
    pub low_snr_bits: f64,
    pub high_snr_bits: f64,
}

/// Low-SNR `(sigma_w'^2/sigma_N*^2) log2 e` and high-SNR
/// `log2(sigma_w'^2/sigma_N*^2) + log2 max_i |F(T_i)|^2` approximations.
pub fn snr_regime_approximations(mod_variance: f64, fades: &[f64], attack_noise: f64) -> Result<RegimeApprox> {
    if fades.is_empty() {
        return Err(invalid("fades must be nonempty"));
    }
    ensure_positive("mod_variance", mod_variance)?;
    ensure_positive("attack_noise", attack_noise)?;
    let ratio = mod_variance / attack_noise;
    let max_fade = fades.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(RegimeApprox {
        low_snr_bits: ratio * std::f64::consts::LOG2_E,
        high_snr_bits: ratio.log2() + max_fade.log2(),
    })
}

/// `(1/l) sum_i log2(1 + snr |F(T_i)|^2)`.
pub fn mean_log_rate(snr: f64, fades: &[f64]) -> Result<f64> {
    if fades.is_empty() {
        return Err(invalid("fades must be nonempty"));
    }
    ensure_positive("snr", snr)?;
    Ok(fades.iter().map(|f| (snr * f).ln_1p()).sum::<f64>() / std::f64::consts::LN_2 / fades.len() as f64)
}

/// Rates of one active sub-channel of a [`ChannelModel`], using the
/// deterministic transmittance `|T_i|^2` as the fade.
#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub index: usize,
    pub transmittance_sq: f64,
    pub eve_transmittance_sq: f64,
    pub excess_noise: f64,
    pub sigma_x: f64,
    pub capacity: f64,
    pub svd_capacity: f64,
    pub attack_noise: f64,
    pub private_capacity: f64,
    pub svd_private_capacity: f64,
}

pub fn rate_report(model: &ChannelModel, mod_variance: f64, gain_c: f64) -> Result<Vec<RateReport>> {
    model
        .active()
        .iter()
        .enumerate()
        .map(|(index, sub)| {
            let fade = sub.transmittance_sq();
            let excess = sub.excess_noise()?;
            let sigma_x = model.sigma_x(index)?;
            let attack_noise = optimal_attack_noise(mod_variance, fade, sigma_x)?;
            Ok(RateReport {
                index,
                transmittance_sq: fade,
                eve_transmittance_sq: sub.eve_transmittance(),
                excess_noise: excess,
                sigma_x,
                capacity: subchannel_capacity(mod_variance, fade, sub.noise_variance())?,
                svd_capacity: svd_capacity(mod_variance, gain_c, fade, sub.noise_variance())?,
                attack_noise,
                private_capacity: private_capacity(mod_variance, fade, attack_noise)?,
                svd_private_capacity: svd_private_capacity(mod_variance, gain_c, fade, attack_noise)?,
            })
        })
        .collect()
}
