//! Gaussian sub-channel model.
//!
//! Each sub-channel has a complex transmittance `T_i` with equal position and
//! momentum components, `Re T_i = Im T_i in [0, 1/sqrt 2]`, so
//! `|T_i|^2 = 2 (Re T_i)^2 <= 1`. Eve's beam splitter has transmittance
//! `1 - |T_i|^2`, and her EPR variance `W_i` sets the excess noise.
//!
//! Channel models load from TOML:
//!
//! ```toml
//! vacuum_variance = 1.0   # optional, shot-noise units
//! active_count = 2        # optional, defaults to all sub-channels
//!
//! [[subchannel]]
//! re_t = 0.6
//! noise_var = 1.0
//! eve_w = 1.5
//! ```

use crate::error::{ensure_positive, invalid, Error, Result};
use crate::phase_space::{fourier_samples, SubcarrierVector};
use crate::rng::{streams, CounterStream};
use num_complex::Complex64;
use serde::Deserialize;
use std::f64::consts::FRAC_1_SQRT_2;
use std::path::Path;

/// Default vacuum (shot) noise variance.
pub const DEFAULT_VACUUM_VARIANCE: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubchannelParams {
    transmittance: Complex64,
    noise_variance: f64,
    eve_epr_variance: f64,
}

impl SubchannelParams {
    /// `re_t` is the common real/imaginary component of `T_i`.
    pub fn new(re_t: f64, noise_variance: f64, eve_epr_variance: f64) -> Result<Self> {
        if !(0.0..=FRAC_1_SQRT_2).contains(&re_t) {
            return Err(invalid(format!("re_t must lie in [0, 1/sqrt(2)], got {re_t}")));
        }
        ensure_positive("noise_variance", noise_variance)?;
        if !(eve_epr_variance >= 1.0 && eve_epr_variance.is_finite()) {
            return Err(invalid(format!("eve_w must be >= 1, got {eve_epr_variance}")));
        }
        Ok(Self {
            transmittance: Complex64::new(re_t, re_t),
            noise_variance,
            eve_epr_variance,
        })
    }

    pub fn transmittance(&self) -> Complex64 {
        self.transmittance
    }

    /// `|T_i|^2`, clamped at 1 against rounding of `2 (1/sqrt 2)^2`.
    pub fn transmittance_sq(&self) -> f64 {
        self.transmittance.norm_sqr().min(1.0)
    }

    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    pub fn eve_epr_variance(&self) -> f64 {
        self.eve_epr_variance
    }

    /// `|T_Eve,i|^2 = 1 - |T_i|^2`.
    pub fn eve_transmittance(&self) -> f64 {
        1.0 - self.transmittance_sq()
    }

    /// Excess noise `N_i` of this sub-channel.
    pub fn excess_noise(&self) -> Result<f64> {
        excess_noise(self.eve_epr_variance, self.eve_transmittance())
    }
}

/// `|T_Eve|^2 = 1 - |T|^2` from a raw transmittance.
pub fn eve_transmittance(transmittance_sq: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&transmittance_sq) {
        return Err(invalid(format!("|T|^2 must lie in [0, 1], got {transmittance_sq}")));
    }
    Ok(1.0 - transmittance_sq)
}

/// `N = (W - 1) t / (1 - t)` with `t = |T_Eve|^2`.
pub fn excess_noise(eve_w: f64, eve_trans_sq: f64) -> Result<f64> {
    if !(eve_w >= 1.0) {
        return Err(invalid(format!("W must be >= 1, got {eve_w}")));
    }
    if !(0.0..=1.0).contains(&eve_trans_sq) {
        return Err(invalid(format!("|T_Eve|^2 must lie in [0, 1], got {eve_trans_sq}")));
    }
    if eve_trans_sq == 1.0 {
        return Err(Error::Singularity("excess noise diverges at |T_Eve|^2 = 1".into()));
    }
    Ok((eve_w - 1.0) * eve_trans_sq / (1.0 - eve_trans_sq))
}

/// `sigma_X^2 = sigma_0^2 + N`.
pub fn total_noise_variance(vacuum_variance: f64, excess: f64) -> f64 {
    vacuum_variance + excess
}

/// `n` sub-channels of which the first `l` carry information.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelModel {
    subchannels: Vec<SubchannelParams>,
    active_count: usize,
    vacuum_variance: f64,
}

impl ChannelModel {
    pub fn new(subchannels: Vec<SubchannelParams>, active_count: usize) -> Result<Self> {
        if active_count == 0 || active_count > subchannels.len() {
            return Err(invalid(format!(
                "active_count must lie in [1, {}], got {active_count}",
                subchannels.len()
            )));
        }
        Ok(Self {
            subchannels,
            active_count,
            vacuum_variance: DEFAULT_VACUUM_VARIANCE,
        })
    }

    pub fn with_vacuum_variance(mut self, vacuum_variance: f64) -> Result<Self> {
        ensure_positive("vacuum_variance", vacuum_variance)?;
        self.vacuum_variance = vacuum_variance;
        Ok(self)
    }

    pub fn subchannels(&self) -> &[SubchannelParams] {
        &self.subchannels
    }

    /// The `l` sub-channels that enter rate and outage sums.
    pub fn active(&self) -> &[SubchannelParams] {
        &self.subchannels[..self.active_count]
    }

    pub fn len(&self) -> usize {
        self.subchannels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subchannels.is_empty()
    }

    pub fn active_count(&self) -> usize {
        self.active_count
    }

    pub fn vacuum_variance(&self) -> f64 {
        self.vacuum_variance
    }

    /// `sigma_X,i^2` for sub-channel `i`.
    pub fn sigma_x(&self, i: usize) -> Result<f64> {
        let sub = self
            .subchannels
            .get(i)
            .ok_or_else(|| invalid(format!("sub-channel index {i} out of range")))?;
        Ok(total_noise_variance(self.vacuum_variance, sub.excess_noise()?))
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: ChannelFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let subs = file
            .subchannel
            .iter()
            .map(|r| SubchannelParams::new(r.re_t, r.noise_var, r.eve_w))
            .collect::<Result<Vec<_>>>()?;
        let active = file.active_count.unwrap_or(subs.len());
        let model = Self::new(subs, active)?;
        match file.vacuum_variance {
            Some(v) => model.with_vacuum_variance(v),
            None => Ok(model),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelFile {
    vacuum_variance: Option<f64>,
    active_count: Option<usize>,
    subchannel: Vec<SubchannelRecord>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubchannelRecord {
    re_t: f64,
    noise_var: f64,
    eve_w: f64,
}

/// One draw of the Fourier-domain transmittance `F(T_i)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadedTransmittance {
    pub value: Complex64,
    pub variance: f64,
}

impl FadedTransmittance {
    pub fn fade_sq(&self) -> f64 {
        self.value.norm_sqr()
    }
}

/// `l` i.i.d. circular complex Gaussian fades; `|F(T_i)|^2` is exponential
/// with mean `variance`.
pub fn sample_faded_transmittances(l: usize, variance: f64, seed: u64) -> Result<Vec<FadedTransmittance>> {
    if l == 0 {
        return Err(invalid("l must be >= 1"));
    }
    ensure_positive("variance", variance)?;
    let mut rng = CounterStream::new(seed, streams::FADES);
    Ok((0..l)
        .map(|_| FadedTransmittance {
            value: rng.complex_normal(variance),
            variance,
        })
        .collect())
}

/// `y_i = F(T_i) F(d)_i + F(Delta)_i`, with `F(Delta)_i` circular Gaussian of
/// complex variance `2 noise_variance`.
pub fn apply_channel(
    d: &SubcarrierVector,
    fades: &[FadedTransmittance],
    noise_variance: f64,
    seed: u64,
) -> Result<SubcarrierVector> {
    if fades.len() != d.len() {
        return Err(Error::LengthMismatch { expected: d.len(), got: fades.len() });
    }
    ensure_positive("noise_variance", noise_variance)?;
    let mut rng = CounterStream::new(seed, streams::NOISE);
    let noise_var = 2.0 * noise_variance;
    let y: Vec<Complex64> = fourier_samples(d)
        .into_iter()
        .zip(fades)
        .map(|(fd, f)| f.value * fd + rng.complex_normal(noise_var))
        .collect();
    let mean_gain = fades.iter().map(FadedTransmittance::fade_sq).sum::<f64>() / fades.len() as f64;
    let variance = (mean_gain * d.variance() + noise_var).max(f64::MIN_POSITIVE);
    SubcarrierVector::new(y, variance)
}
