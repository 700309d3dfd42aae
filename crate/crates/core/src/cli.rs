//! Command-line front end.
//!
//! Every subcommand resolves its parameters from three layers: built-in
//! defaults, an optional `--config` file of `key = value` lines, and flags.
//! Later layers win. The resolved map is echoed as `#` comment lines at the
//! top of the CSV so every output file describes the run that produced it.

use crate::channel::ChannelModel;
use crate::constellation::{build_constellation_with_q, permute_constellation};
use crate::error::{Error, Result};
use crate::fmt::sci_digits as fmt_num;
use crate::manifold::{perr_amqd, perr_single, CurveParams, OutageParams, TradeoffCurve, TradeoffKind};
use crate::montecarlo::{default_secret_rate, estimate_mean_fade_outage, estimate_rate_outage, TrialConfig};
use crate::rates::rate_report;
use crate::singular_layer::{reconstruct, svd_decompose, TransmittanceMatrix};
use clap::{Args, Parser, Subcommand};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub const DEFAULT_PRECISION: usize = 9;

#[derive(Debug, Parser)]
#[command(name = "cvqkd-manifold", version, about = "Diversity-multiplexing analysis for multicarrier CVQKD")]
pub struct Cli {
    /// Flat `key = value` parameter file; flags override its entries.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Write the CSV here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Significant digits in numeric CSV fields.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    pub precision: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample an analytic tradeoff curve delta(varsigma).
    Tradeoff(TradeoffArgs),
    /// Closed-form error probabilities against SNR.
    Perr(PerrArgs),
    /// Monte Carlo outage estimates with a fitted diversity slope.
    Mc(McArgs),
    /// Eigenchannels of a transmittance matrix.
    Svd(SvdArgs),
    /// Per-sub-channel capacities and private rates of a channel file.
    Rates(RatesArgs),
    /// Permutation phase-space constellation points.
    Constellation(ConstellationArgs),
}

#[derive(Debug, Args)]
pub struct TradeoffArgs {
    /// single | multicarrier | g_scaled | multiaccess_in_gt_out | multiaccess_in_le_out | orthogonal_complement
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub z: Option<String>,
    #[arg(long)]
    pub l: Option<String>,
    #[arg(long)]
    pub g: Option<String>,
    #[arg(long)]
    pub k_in: Option<String>,
    #[arg(long)]
    pub k_out: Option<String>,
    /// `start:stop:step` or a comma-separated list.
    #[arg(long)]
    pub grid: Option<String>,
}

#[derive(Debug, Args)]
pub struct PerrArgs {
    #[arg(long)]
    pub snr_grid: Option<String>,
    /// db | linear
    #[arg(long)]
    pub snr_unit: Option<String>,
    #[arg(long)]
    pub varsigma: Option<String>,
    /// Comma-separated sub-channel counts.
    #[arg(long)]
    pub l: Option<String>,
    #[arg(long)]
    pub z: Option<String>,
}

#[derive(Debug, Args)]
pub struct McArgs {
    /// mean_fade | rate
    #[arg(long)]
    pub event: Option<String>,
    #[arg(long)]
    pub l: Option<String>,
    #[arg(long)]
    pub varsigma: Option<String>,
    #[arg(long)]
    pub snr_grid: Option<String>,
    #[arg(long)]
    pub snr_unit: Option<String>,
    #[arg(long)]
    pub trials: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub fade_variance: Option<String>,
    /// Worker threads; never changes the output.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SvdArgs {
    /// Row-major CSV of `re:im` entries.
    #[arg(long)]
    pub matrix: Option<String>,
}

#[derive(Debug, Args)]
pub struct RatesArgs {
    /// TOML channel description.
    #[arg(long)]
    pub channel: Option<String>,
    #[arg(long)]
    pub mod_variance: Option<String>,
    #[arg(long)]
    pub gain_c: Option<String>,
}

#[derive(Debug, Args)]
pub struct ConstellationArgs {
    #[arg(long)]
    pub bits: Option<String>,
    #[arg(long)]
    pub l: Option<String>,
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Tradeoff(_) => "tradeoff",
            Command::Perr(_) => "perr",
            Command::Mc(_) => "mc",
            Command::Svd(_) => "svd",
            Command::Rates(_) => "rates",
            Command::Constellation(_) => "constellation",
        }
    }

    /// Known keys with defaults; an empty default marks a required key.
    fn defaults(&self) -> &'static [(&'static str, &'static str)] {
        match self {
            Command::Tradeoff(_) => &[
                ("kind", "multicarrier"),
                ("z", "1"),
                ("l", "1"),
                ("g", "0"),
                ("k_in", "2"),
                ("k_out", "4"),
                ("grid", "auto"),
            ],
            Command::Perr(_) => &[
                ("snr_grid", "0:30:1"),
                ("snr_unit", "db"),
                ("varsigma", "0.6"),
                ("l", "5,10"),
                ("z", "1"),
            ],
            Command::Mc(_) => &[
                ("event", "mean_fade"),
                ("l", "1"),
                ("varsigma", "0"),
                ("snr_grid", "10,31.6,100"),
                ("snr_unit", "linear"),
                ("trials", "1000000"),
                ("seed", "0"),
                ("fade_variance", "1"),
            ],
            Command::Svd(_) => &[("matrix", "")],
            Command::Rates(_) => &[("channel", ""), ("mod_variance", "1"), ("gain_c", "1")],
            Command::Constellation(_) => &[("bits", "2"), ("l", "1"), ("q", "1"), ("seed", "0")],
        }
    }

    fn flags(&self) -> Vec<(&'static str, Option<&String>)> {
        match self {
            Command::Tradeoff(a) => vec![
                ("kind", a.kind.as_ref()),
                ("z", a.z.as_ref()),
                ("l", a.l.as_ref()),
                ("g", a.g.as_ref()),
                ("k_in", a.k_in.as_ref()),
                ("k_out", a.k_out.as_ref()),
                ("grid", a.grid.as_ref()),
            ],
            Command::Perr(a) => vec![
                ("snr_grid", a.snr_grid.as_ref()),
                ("snr_unit", a.snr_unit.as_ref()),
                ("varsigma", a.varsigma.as_ref()),
                ("l", a.l.as_ref()),
                ("z", a.z.as_ref()),
            ],
            Command::Mc(a) => vec![
                ("event", a.event.as_ref()),
                ("l", a.l.as_ref()),
                ("varsigma", a.varsigma.as_ref()),
                ("snr_grid", a.snr_grid.as_ref()),
                ("snr_unit", a.snr_unit.as_ref()),
                ("trials", a.trials.as_ref()),
                ("seed", a.seed.as_ref()),
                ("fade_variance", a.fade_variance.as_ref()),
            ],
            Command::Svd(a) => vec![("matrix", a.matrix.as_ref())],
            Command::Rates(a) => vec![
                ("channel", a.channel.as_ref()),
                ("mod_variance", a.mod_variance.as_ref()),
                ("gain_c", a.gain_c.as_ref()),
            ],
            Command::Constellation(a) => vec![
                ("bits", a.bits.as_ref()),
                ("l", a.l.as_ref()),
                ("q", a.q.as_ref()),
                ("seed", a.seed.as_ref()),
            ],
        }
    }
}

/// Resolved `key -> value` parameters of one run.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Params(BTreeMap<String, String>);

impl Params {
    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    fn raw(&self, key: &str) -> Result<&str> {
        match self.0.get(key).map(String::as_str) {
            Some("") | None => Err(Error::InvalidArgument(format!("missing required parameter `{key}`"))),
            Some(v) => Ok(v),
        }
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        let v = self.raw(key)?;
        v.parse()
            .map_err(|_| Error::InvalidArgument(format!("cannot parse `{key} = {v}`")))
    }

    fn list<T: std::str::FromStr>(&self, key: &str) -> Result<Vec<T>> {
        self.raw(key)?
            .split(',')
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("cannot parse `{s}` in `{key}`")))
            })
            .collect()
    }

    fn grid(&self, key: &str) -> Result<Vec<f64>> {
        parse_grid(self.raw(key)?)
    }
}

/// Parses `start:stop:step` (inclusive) or a comma-separated list.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidArgument(format!("bad grid `{text}`"));
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (a, b, h): (f64, f64, f64) = (
                start.trim().parse().map_err(|_| bad())?,
                stop.trim().parse().map_err(|_| bad())?,
                step.trim().parse().map_err(|_| bad())?,
            );
            if !(h > 0.0 && a.is_finite() && b.is_finite() && b >= a) {
                return Err(bad());
            }
            let n = ((b - a) / h + 1e-9).floor() as usize;
            Ok((0..=n).map(|k| a + k as f64 * h).collect())
        }
        [_] => text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect(),
        _ => Err(bad()),
    }
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("config line {}: expected `key = value`", n + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Merges defaults, config entries and flags, rejecting unknown keys.
pub fn resolve_params(cmd: &Command, config: &[(String, String)]) -> Result<Params> {
    let defaults = cmd.defaults();
    let mut map: BTreeMap<String, String> =
        defaults.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
    for (k, v) in config {
        if !map.contains_key(k) {
            let known: Vec<&str> = defaults.iter().map(|(k, _)| *k).collect();
            return Err(Error::InvalidArgument(format!(
                "unknown key `{k}` for `{}`; known keys: {}",
                cmd.name(),
                known.join(", ")
            )));
        }
        map.insert(k.clone(), v.clone());
    }
    for (k, v) in cmd.flags() {
        if let Some(v) = v {
            map.insert(k.to_string(), v.clone());
        }
    }
    Ok(Params(map))
}


fn header(cmd: &str, params: &Params) -> String {
    let mut out = format!("# {} {}\n# subcommand: {cmd}\n", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"));
    for (k, v) in params.iter() {
        let _ = writeln!(out, "# {k} = {v}");
    }
    out
}

fn snr_linear(params: &Params) -> Result<(Vec<f64>, Vec<f64>)> {
    let grid = params.grid("snr_grid")?;
    match params.raw("snr_unit")? {
        "db" => Ok((grid.iter().map(|d| 10f64.powf(d / 10.0)).collect(), grid)),
        "linear" => Ok((grid.clone(), grid.iter().map(|s| 10.0 * s.log10()).collect())),
        other => Err(Error::InvalidArgument(format!("snr_unit must be `db` or `linear`, got `{other}`"))),
    }
}

fn run_tradeoff(params: &Params, p: usize) -> Result<String> {
    let kind: TradeoffKind = params.raw("kind")?.parse()?;
    let cp = CurveParams {
        z: params.parse("z")?,
        l: params.parse("l")?,
        g: params.parse("g")?,
        k_in: params.parse("k_in")?,
        k_out: params.parse("k_out")?,
    };
    let grid = match params.raw("grid")? {
        "auto" => {
            let step = 0.25;
            let (start, stop) = match kind {
                TradeoffKind::Single => (step, 1.0),
                TradeoffKind::Multicarrier | TradeoffKind::GScaled => (0.0, 1.0),
                TradeoffKind::MultiaccessInGtOut => (0.0, 2.0),
                TradeoffKind::MultiaccessInLeOut | TradeoffKind::OrthogonalComplement => {
                    (0.0, cp.k_in.min(cp.k_out) as f64)
                }
            };
            parse_grid(&format!("{start}:{stop}:{step}"))?
        }
        g => parse_grid(g)?,
    };
    let curve = TradeoffCurve::sample(kind, cp, &grid)?;
    let mut out = String::from("varsigma,delta\n");
    for (s, d) in curve.points {
        let _ = writeln!(out, "{},{}", fmt_num(s, p), fmt_num(d, p));
    }
    Ok(out)
}

fn run_perr(params: &Params, p: usize) -> Result<String> {
    let (lin, db) = snr_linear(params)?;
    let varsigma: f64 = params.parse("varsigma")?;
    let ls: Vec<usize> = params.list("l")?;
    let z: f64 = params.parse("z")?;
    let mut out = String::from("snr_db,snr,p_single");
    for l in &ls {
        let _ = write!(out, ",p_amqd_l{l}");
    }
    out.push('\n');
    for (&snr, &d) in lin.iter().zip(&db) {
        let mut base = OutageParams::new(snr, varsigma);
        base.z_exponent = z;
        let _ = write!(out, "{},{},{}", fmt_num(d, p), fmt_num(snr, p), fmt_num(perr_single(&base)?, p));
        for &l in &ls {
            let _ = write!(out, ",{}", fmt_num(perr_amqd(&base.with_subchannels(l))?, p));
        }
        out.push('\n');
    }
    Ok(out)
}

fn run_mc(params: &Params, p: usize) -> Result<String> {
    let (lin, _) = snr_linear(params)?;
    let cfg = TrialConfig::new(
        params.parse("l")?,
        params.parse("varsigma")?,
        lin,
        params.parse("trials")?,
        params.parse("seed")?,
    )?
    .with_fade_variance(params.parse("fade_variance")?)?;
    let est = match params.raw("event")? {
        "mean_fade" => estimate_mean_fade_outage(&cfg)?,
        "rate" => estimate_rate_outage(&cfg, default_secret_rate)?,
        other => return Err(Error::InvalidArgument(format!("event must be `mean_fade` or `rate`, got `{other}`"))),
    };
    let mut out = String::from("snr,p_hat,ci_low,ci_high\n");
    for i in 0..est.snr_grid.len() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_num(est.snr_grid[i], p),
            fmt_num(est.p_hat[i], p),
            fmt_num(est.ci_low[i], p),
            fmt_num(est.ci_high[i], p)
        );
    }
    let _ = writeln!(out, "slope,{},stderr,{}", fmt_num(est.slope, p), fmt_num(est.slope_stderr, p));
    Ok(out)
}

fn run_svd(params: &Params, p: usize) -> Result<String> {
    let m = TransmittanceMatrix::load_csv(params.raw("matrix")?)?;
    let d = svd_decompose(&m)?;
    let err = (reconstruct(&d).entries() - m.entries()).norm();
    let mut out = String::from("index,lambda,lambda_sq\n");
    for (i, l) in d.lambdas().iter().enumerate() {
        let _ = writeln!(out, "{i},{},{}", fmt_num(*l, p), fmt_num(l * l, p));
    }
    let _ = writeln!(out, "reconstruction_error,{}", fmt_num(err, p));
    Ok(out)
}

fn run_rates(params: &Params, p: usize) -> Result<String> {
    let model = ChannelModel::load(params.raw("channel")?)?;
    let gain: f64 = params.parse("gain_c")?;
    let reports = rate_report(&model, params.parse("mod_variance")?, gain)?;
    let mut out = String::from(
        "index,transmittance_sq,eve_transmittance_sq,excess_noise,sigma_x,capacity,svd_capacity,attack_noise,private_capacity,svd_private_capacity\n",
    );
    for r in reports {
        let vals = [
            r.transmittance_sq,
            r.eve_transmittance_sq,
            r.excess_noise,
            r.sigma_x,
            r.capacity,
            r.svd_capacity,
            r.attack_noise,
            r.private_capacity,
            r.svd_private_capacity,
        ];
        let cells: Vec<String> = vals.iter().map(|v| fmt_num(*v, p)).collect();
        let _ = writeln!(out, "{},{}", r.index, cells.join(","));
    }
    Ok(out)
}

fn run_constellation(params: &Params, p: usize) -> Result<String> {
    let base = build_constellation_with_q(params.parse("bits")?, params.parse("q")?)?;
    let pc = permute_constellation(&base, params.parse("l")?, params.parse("seed")?)?;
    let mut out = String::from("subchannel,index,re,im\n");
    for s in 0..pc.subchannels() {
        for (i, z) in pc.subchannel(s)?.iter().enumerate() {
            let _ = writeln!(out, "{s},{i},{},{}", fmt_num(z.re, p), fmt_num(z.im, p));
        }
    }
    Ok(out)
}

/// Runs one invocation and returns the full CSV text, header included.
pub fn run(cli: &Cli) -> Result<String> {
    if cli.precision == 0 || cli.precision > 17 {
        return Err(Error::InvalidArgument(format!("precision must lie in 1..=17, got {}", cli.precision)));
    }
    let config = match &cli.config {
        Some(path) => parse_config(&read_config(path)?)?,
        None => Vec::new(),
    };
    let params = resolve_params(&cli.command, &config)?;
    let p = cli.precision;
    let body = match &cli.command {
        Command::Tradeoff(_) => run_tradeoff(&params, p)?,
        Command::Perr(_) => run_perr(&params, p)?,
        Command::Mc(a) => match a.threads {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
                .install(|| run_mc(&params, p))?,
            None => run_mc(&params, p)?,
        },
        Command::Svd(_) => run_svd(&params, p)?,
        Command::Rates(_) => run_rates(&params, p)?,
        Command::Constellation(_) => run_constellation(&params, p)?,
    };
    Ok(header(cli.command.name(), &params) + &body)
}

fn read_config(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read config {}: {e}", path.display())))
}

/// Process exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) => 1,
        Error::InvalidArgument(_) | Error::LengthMismatch { .. } | Error::Parse(_) => 2,
        Error::OutOfDomain(_) | Error::DegenerateRegime { .. } | Error::Singularity(_) | Error::Degenerate(_) => 3,
        Error::InsufficientTrials(_) => 4,
        Error::Refused(_) => 5,
    }
}

/// Parses `args`, runs, and writes the result; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = run(&cli).and_then(|text| match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
