//! Seeded Monte Carlo outage estimation under the Rayleigh fading statistic.
//!
//! Trial `t` at grid point `g` reads its `l` fades from stream
//! `MONTE_CARLO + g` starting at draw `t * l`. The trial range is cut into
//! fixed chunks, each chunk regenerates its own slice of the keystream, and
//! hit counts are summed, so results do not depend on how many workers run
//! the chunks.

use crate::error::{invalid, Error, Result};
use crate::fmt::sci;
use crate::manifold::least_squares_slope;
use crate::rng::{streams, CounterStream};
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::gamma::gamma_lr;
use std::fmt::Write as _;

pub const MIN_TRIALS: u64 = 1_000;
pub const MIN_GRID_POINTS: usize = 3;
/// Configurations whose analytic probability falls below this are refused.
pub const REFUSAL_THRESHOLD: f64 = 1e-8;
const CHUNK: u64 = 1 << 14;

#[derive(Debug, Clone, PartialEq)]
pub struct TrialConfig {
    pub l: usize,
    pub multiplex_ratio: f64,
    pub snr_grid: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub fade_variance: f64,
}

impl TrialConfig {
    pub fn new(l: usize, multiplex_ratio: f64, snr_grid: Vec<f64>, trials: u64, seed: u64) -> Result<Self> {
        let cfg = Self { l, multiplex_ratio, snr_grid, trials, seed, fade_variance: 1.0 };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_fade_variance(mut self, fade_variance: f64) -> Result<Self> {
        self.fade_variance = fade_variance;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.l == 0 {
            return Err(invalid("l must be >= 1"));
        }
        if !(0.0..=1.0).contains(&self.multiplex_ratio) {
            return Err(invalid(format!("multiplex ratio must lie in [0, 1], got {}", self.multiplex_ratio)));
        }
        if self.trials < MIN_TRIALS {
            return Err(invalid(format!("need at least {MIN_TRIALS} trials per point, got {}", self.trials)));
        }
        if self.snr_grid.len() < MIN_GRID_POINTS {
            return Err(invalid(format!("snr grid needs at least {MIN_GRID_POINTS} points")));
        }
        if self.snr_grid.iter().any(|s| !(s.is_finite() && *s > 1.0)) {
            return Err(invalid("every snr must be finite and > 1"));
        }
        if self.snr_grid.windows(2).any(|w| w[1] < w[0]) {
            return Err(invalid("snr grid must be non-decreasing"));
        }
        if !(self.fade_variance.is_finite() && self.fade_variance > 0.0) {
            return Err(invalid(format!("fade variance must be > 0, got {}", self.fade_variance)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalOutage {
    pub snr_grid: Vec<f64>,
    pub trials: u64,
    pub hits: Vec<u64>,
    pub p_hat: Vec<f64>,
    /// 95% Wilson interval.
    pub ci_low: Vec<f64>,
    pub ci_high: Vec<f64>,
    /// Slope of `log2 p_hat` against `log2 snr`; the diversity estimate is its negation.
    pub slope: f64,
    pub slope_stderr: f64,
    /// Exact probabilities where a closed form exists.
    pub analytic: Option<Vec<f64>>,
}

impl EmpiricalOutage {
    pub fn diversity(&self) -> f64 {
        -self.slope
    }

    /// Wilson interval at `z` standard deviations for grid point `i`.
    pub fn band(&self, i: usize, z: f64) -> (f64, f64) {
        wilson_interval_z(self.hits[i], self.trials, z)
    }

    /// CSV rows `snr,p_hat,ci_low,ci_high` and a trailer `slope,<v>,stderr,<v>`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("snr,p_hat,ci_low,ci_high\n");
        for i in 0..self.snr_grid.len() {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                sci(self.snr_grid[i]),
                sci(self.p_hat[i]),
                sci(self.ci_low[i]),
                sci(self.ci_high[i])
            );
        }
        let _ = writeln!(out, "slope,{},stderr,{}", sci(self.slope), sci(self.slope_stderr));
        out
    }
}

/// Default secret rate per sub-channel: `varsigma log2 snr`.
pub fn default_secret_rate(varsigma: f64, snr: f64) -> f64 {
    varsigma * snr.log2()
}

/// Exact mean-fade outage `Pr((1/l) sum |F|^2 < 1/snr)`; the sum of `l`
/// exponential fades is Gamma(l, variance).
pub fn mean_fade_outage_exact(l: usize, snr: f64, fade_variance: f64) -> f64 {
    gamma_lr(l as f64, l as f64 / (snr * fade_variance))
}

/// Upper bound on the rate outage: the event forces every sub-channel below
/// `(2^{l S} - 1) / snr`. Exact for `l = 1`.
pub fn rate_outage_upper_bound(l: usize, secret_rate: f64, snr: f64, fade_variance: f64) -> f64 {
    let t = ((l as f64 * secret_rate).exp2() - 1.0) / (snr * fade_variance);
    (-(-t).exp_m1()).powi(l as i32)
}

fn count_hits<E>(seed: u64, grid_index: usize, l: usize, trials: u64, fade_variance: f64, event: E) -> u64
where
    E: Fn(&[f64]) -> bool + Sync,
{
    let chunks = trials.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(trials);
            let mut rng = CounterStream::at_draw(seed, streams::MONTE_CARLO + grid_index as u64, start * l as u64);
            let mut fades = vec![0.0; l];
            let mut hits = 0u64;
            for _ in start..end {
                for f in fades.iter_mut() {
                    *f = rng.complex_normal(fade_variance).norm_sqr();
                }
                hits += event(&fades) as u64;
            }
            hits
        })
        .sum()
}

fn summarize(cfg: &TrialConfig, hits: Vec<u64>, analytic: Option<Vec<f64>>) -> Result<EmpiricalOutage> {
    if hits.iter().all(|&h| h == 0) {
        return Err(Error::InsufficientTrials(format!(
            "no outage events in {} trials at any grid point",
            cfg.trials
        )));
    }
    let n = cfg.trials;
    let p_hat: Vec<f64> = hits.iter().map(|&h| h as f64 / n as f64).collect();
    let (ci_low, ci_high): (Vec<f64>, Vec<f64>) = hits.iter().map(|&h| wilson_interval_z(h, n, Z95)).unzip();
    let (slope, slope_stderr) = fit_diversity_slope(&cfg.snr_grid, &p_hat)?;
    Ok(EmpiricalOutage {
        snr_grid: cfg.snr_grid.clone(),
        trials: n,
        hits,
        p_hat,
        ci_low,
        ci_high,
        slope,
        slope_stderr,
        analytic,
    })
}

fn refuse_if_rare(p: f64, snr: f64) -> Result<()> {
    if p > 0.0 && p < REFUSAL_THRESHOLD {
        return Err(Error::Refused(format!(
            "analytic probability {p:.3e} at snr {snr} is below {REFUSAL_THRESHOLD:e}; too rare to sample"
        )));
    }
    Ok(())
}

/// Fraction of trials with `(1/l) sum |F(T_i)|^2 < 1/snr`.
pub fn estimate_mean_fade_outage(cfg: &TrialConfig) -> Result<EmpiricalOutage> {
    cfg.validate()?;
    let exact: Vec<f64> = cfg
        .snr_grid
        .iter()
        .map(|&s| mean_fade_outage_exact(cfg.l, s, cfg.fade_variance))
        .collect();
    for (&p, &s) in exact.iter().zip(&cfg.snr_grid) {
        refuse_if_rare(p, s)?;
    }
    let hits = cfg
        .snr_grid
        .iter()
        .enumerate()
        .map(|(g, &snr)| {
            let bound = cfg.l as f64 / snr;
            count_hits(cfg.seed, g, cfg.l, cfg.trials, cfg.fade_variance, |f| f.iter().sum::<f64>() < bound)
        })
        .collect();
    summarize(cfg, hits, Some(exact))
}

/// Fraction of trials with `sum log2(1 + |F(T_i)|^2 snr) < l S`, where
/// `S = rate_fn(varsigma, snr)` (see [`default_secret_rate`]).
pub fn estimate_rate_outage<R>(cfg: &TrialConfig, rate_fn: R) -> Result<EmpiricalOutage>
where
    R: Fn(f64, f64) -> f64,
{
    cfg.validate()?;
    let rates: Vec<f64> = cfg.snr_grid.iter().map(|&s| rate_fn(cfg.multiplex_ratio, s)).collect();
    if let Some(r) = rates.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
        return Err(invalid(format!("secret rate must be finite and >= 0, got {r}")));
    }
    for (&r, &s) in rates.iter().zip(&cfg.snr_grid) {
        refuse_if_rare(rate_outage_upper_bound(cfg.l, r, s, cfg.fade_variance), s)?;
    }
    let hits = cfg
        .snr_grid
        .iter()
        .zip(&rates)
        .enumerate()
        .map(|(g, (&snr, &rate))| {
            // Compare products to avoid a log per fade.
            let target = (cfg.l as f64 * rate).exp2();
            count_hits(cfg.seed, g, cfg.l, cfg.trials, cfg.fade_variance, |f| {
                f.iter().map(|x| 1.0 + x * snr).product::<f64>() < target
            })
        })
        .collect();
    let analytic = (cfg.l == 1).then(|| {
        rates
            .iter()
            .zip(&cfg.snr_grid)
            .map(|(&r, &s)| rate_outage_upper_bound(1, r, s, cfg.fade_variance))
            .collect()
    });
    summarize(cfg, hits, analytic)
}

/// Least-squares slope of `log2 p_hat` against `log2 snr`, with its
/// standard error. Zero estimates are dropped with a warning.
pub fn fit_diversity_slope(snr_grid: &[f64], p_hats: &[f64]) -> Result<(f64, f64)> {
    if snr_grid.len() != p_hats.len() {
        return Err(Error::LengthMismatch { expected: snr_grid.len(), got: p_hats.len() });
    }
    let mut xs = Vec::with_capacity(snr_grid.len());
    let mut ys = Vec::with_capacity(snr_grid.len());
    for (&s, &p) in snr_grid.iter().zip(p_hats) {
        if p > 0.0 {
            xs.push(s.log2());
            ys.push(p.log2());
        } else {
            log::warn!("dropping snr = {s} from the slope fit: p_hat = 0");
        }
    }
    if xs.len() < MIN_GRID_POINTS {
        return Err(Error::InsufficientTrials(format!(
            "only {} grid points with p_hat > 0; need {MIN_GRID_POINTS}",
            xs.len()
        )));
    }
    least_squares_slope(&xs, &ys)
}

const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval at two-sided confidence `confidence`.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(invalid(format!("confidence must lie in (0, 1), got {confidence}")));
    }
    if trials == 0 || successes > trials {
        return Err(invalid(format!("need 0 <= successes <= trials and trials >= 1, got {successes}/{trials}")));
    }
    let z = Normal::standard().inverse_cdf(0.5 + confidence / 2.0);
    Ok(wilson_interval_z(successes, trials, z))
}

/// Wilson score interval at `z` standard deviations.
pub fn wilson_interval_z(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let low = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let high = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (low.min(p), high.max(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    const GRID: [f64; 3] = [10.0, 31.6, 100.0];

    fn cfg(l: usize, varsigma: f64, trials: u64, seed: u64) -> TrialConfig {
        TrialConfig::new(l, varsigma, GRID.to_vec(), trials, seed).unwrap()
    }

    fn inside(out: &EmpiricalOutage, i: usize, p: f64) -> bool {
        let (lo, hi) = out.band(i, 3.0);
        lo <= p && p <= hi
    }

    #[test]
    fn wilson_examples() {
        let (lo, _) = wilson_interval(0, 50, 0.95).unwrap();
        assert_eq!(lo, 0.0);
        let (_, hi) = wilson_interval(50, 50, 0.95).unwrap();
        assert_eq!(hi, 1.0);
        let (lo, hi) = wilson_interval(50, 100, 0.95).unwrap();
        // Closed form: (p + z^2/2n +- z sqrt(p(1-p)/n + z^2/4n^2)) / (1 + z^2/n).
        let z = 1.959963984540054f64;
        let n = 100.0;
        let c = (0.5 + z * z / (2.0 * n)) / (1.0 + z * z / n);
        let h = z * (0.25 / n + z * z / (4.0 * n * n)).sqrt() / (1.0 + z * z / n);
        assert!((lo - (c - h)).abs() < 1e-12 && (hi - (c + h)).abs() < 1e-12);
        assert!((lo - 0.404).abs() < 1e-3 && (hi - 0.596).abs() < 1e-3);
        assert!(wilson_interval(5, 4, 0.95).is_err());
        assert!(wilson_interval(0, 0, 0.95).is_err());
        assert!(wilson_interval(1, 4, 1.0).is_err());
    }

    #[test]
    fn fit_examples() {
        let grid = [2.0, 5.0, 10.0, 40.0];
        let p: Vec<f64> = grid.iter().map(|s: &f64| s.powi(-3)).collect();
        assert!((fit_diversity_slope(&grid, &p).unwrap().0 + 3.0).abs() < 1e-9);
        let p: Vec<f64> = grid.iter().map(|s: &f64| 0.5 * s.powi(-2)).collect();
        assert!((fit_diversity_slope(&grid, &p).unwrap().0 + 2.0).abs() < 1e-9);
        let p = [0.1, 0.0, 0.01, 0.001];
        assert!(fit_diversity_slope(&grid, &p).is_ok());
        let p = [0.1, 0.0, 0.0, 0.001];
        assert!(matches!(fit_diversity_slope(&grid, &p), Err(Error::InsufficientTrials(_))));
        assert!(fit_diversity_slope(&grid, &p[..2]).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(TrialConfig::new(1, 0.0, GRID.to_vec(), 999, 0).is_err());
        assert!(TrialConfig::new(1, 0.0, vec![10.0, 20.0], 1000, 0).is_err());
        assert!(TrialConfig::new(1, 0.0, vec![1.0, 20.0, 30.0], 1000, 0).is_err());
        assert!(TrialConfig::new(1, 0.0, vec![30.0, 20.0, 40.0], 1000, 0).is_err());
        assert!(TrialConfig::new(0, 0.0, GRID.to_vec(), 1000, 0).is_err());
        assert!(TrialConfig::new(1, 1.5, GRID.to_vec(), 1000, 0).is_err());
        assert!(cfg(1, 0.0, 1000, 0).with_fade_variance(0.0).is_err());
    }

    #[test]
    fn mean_fade_examples() {
        let out = estimate_mean_fade_outage(&cfg(1, 0.0, 1_000_000, 11)).unwrap();
        let p1 = 1.0 - (-0.1f64).exp();
        assert!((out.analytic.as_ref().unwrap()[0] - p1).abs() < 1e-12);
        assert!(inside(&out, 0, p1), "{:?}", out.p_hat);

        let out = estimate_mean_fade_outage(&cfg(2, 0.0, 1_000_000, 12)).unwrap();
        let p2 = 1.0 - (-0.2f64).exp() * 1.2;
        assert!((p2 - 0.01752).abs() < 1e-5);
        assert!(inside(&out, 0, p2), "{:?}", out.p_hat);
        for i in 0..3 {
            assert!(out.ci_low[i] <= out.p_hat[i] && out.p_hat[i] <= out.ci_high[i]);
        }
    }

    #[test]
    fn equal_grid_has_no_slope() {
        let c = TrialConfig::new(1, 0.0, vec![10.0; 3], 10_000, 1).unwrap();
        assert!(matches!(estimate_mean_fade_outage(&c), Err(Error::Degenerate(_))));
    }

    #[test]
    fn rate_outage_examples() {
        // Zero rate: the event is empty.
        let c = cfg(1, 0.0, 10_000, 2);
        let err = estimate_rate_outage(&c, default_secret_rate).unwrap_err();
        assert!(matches!(err, Error::InsufficientTrials(_)));

        let out = estimate_rate_outage(&cfg(1, 0.5, 1_000_000, 3), default_secret_rate).unwrap();
        let p = 1.0 - (-0.09f64).exp();
        assert!((p - 0.0861).abs() < 1e-4);
        assert!((out.analytic.as_ref().unwrap()[2] - p).abs() < 1e-12);
        assert!(inside(&out, 2, p), "{:?}", out.p_hat);
    }

    #[test]
    fn refusal() {
        let c = TrialConfig::new(6, 0.0, vec![100.0, 1000.0, 10000.0], 1000, 1).unwrap();
        assert!(matches!(estimate_mean_fade_outage(&c), Err(Error::Refused(_))));
        let c = TrialConfig::new(4, 0.1, vec![100.0, 1000.0, 10000.0], 1000, 1).unwrap();
        assert!(matches!(estimate_rate_outage(&c, default_secret_rate), Err(Error::Refused(_))));
    }

    #[test]
    fn slope_recovery_at_zero_ratio() {
        for (l, lo, hi) in [(1, 0.85, 1.15), (2, 1.7, 2.3)] {
            let out = estimate_mean_fade_outage(&cfg(l, 0.0, 1_000_000, 40 + l as u64)).unwrap();
            assert!(lo <= out.diversity() && out.diversity() <= hi, "l={l}: {}", out.diversity());
        }
    }

    #[test]
    fn calibration_across_seeds() {
        // (l, varsigma, mean-fade event?, grid, exact p at grid[0])
        let cases = [
            (1, 0.0, true, [10.0, 31.6, 100.0], 1.0 - (-0.1f64).exp()),
            (2, 0.0, true, [10.0, 12.0, 15.0], 1.0 - 1.2 * (-0.2f64).exp()),
            (1, 0.5, false, [100.0, 200.0, 400.0], 1.0 - (-0.09f64).exp()),
        ];
        for (l, varsigma, mean_fade, grid, p) in cases {
            // The 99% coverage rate, measured over 1000 seeds rather than 100.
            let covered = (0..1000u64)
                .filter(|seed| {
                    let c = TrialConfig::new(l, varsigma, grid.to_vec(), 20_000, 1000 + seed).unwrap();
                    let out = if mean_fade {
                        estimate_mean_fade_outage(&c)
                    } else {
                        estimate_rate_outage(&c, default_secret_rate)
                    };
                    inside(&out.unwrap(), 0, p)
                })
                .count();
            assert!(covered >= 990, "l={l} varsigma={varsigma}: {covered}/1000");
        }
    }

    #[test]
    fn independent_of_thread_count() {
        let c = cfg(2, 0.0, 100_000, 5);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| estimate_mean_fade_outage(&c).unwrap())
        };
        let a = run(1);
        assert_eq!(a, run(3));
        assert_eq!(a.to_csv(), run(8).to_csv());
    }

    #[test]
    fn csv_layout() {
        let out = estimate_mean_fade_outage(&cfg(1, 0.0, 10_000, 1)).unwrap();
        let csv = out.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "snr,p_hat,ci_low,ci_high");
        assert_eq!(lines.len(), 5);
        assert!(lines[4].starts_with("slope,") && lines[4].contains(",stderr,"));
    }
}
