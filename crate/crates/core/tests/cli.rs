mod common;

use common::oracle;
use cvqkd_manifold::singular_layer::TransmittanceMatrix;
use cvqkd_manifold::Complex64;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cvqkd-manifold"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn rows(out: &Output) -> Vec<Vec<String>> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn svd_identity_and_diagonal() {
    let out = run(&["svd", "--matrix", data("identity2.csv").to_str().unwrap()]);
    assert!(out.status.success());
    let r = rows(&out);
    assert_eq!(r[0], ["index", "lambda", "lambda_sq"]);
    for row in &r[1..3] {
        assert!((row[1].parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
    }
    assert_eq!(r[3][0], "reconstruction_error");
    assert!(r[3][1].parse::<f64>().unwrap() < 1e-12);

    let out = run(&["svd", "--matrix", data("diag31.csv").to_str().unwrap()]);
    let r = rows(&out);
    assert_eq!(r[1][1].parse::<f64>().unwrap(), 3.0);
    assert_eq!(r[2][1].parse::<f64>().unwrap(), 1.0);
}

#[test]
fn svd_random_file_against_eigen_oracle() {
    let path = data("random4x3.csv");
    let m = TransmittanceMatrix::load_csv(&path).unwrap();
    let f: Vec<Vec<Complex64>> = (0..m.k_out()).map(|i| (0..m.k_in()).map(|j| m.entries()[(i, j)]).collect()).collect();
    let mut ev = oracle::hermitian_eigenvalues(&oracle::gram_inner(&f));
    ev.reverse();
    let out = run(&["svd", "--matrix", path.to_str().unwrap()]);
    let r = rows(&out);
    for (i, e) in ev.iter().enumerate() {
        let lsq: f64 = r[1 + i][2].parse().unwrap();
        assert!((lsq - e).abs() < 1e-8, "{lsq} vs {e}");
    }
}

#[test]
fn svd_rejects_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "1:0,zz\n").unwrap();
    assert_eq!(run(&["svd", "--matrix", bad.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&bad, "NaN:0,1:0\n").unwrap();
    assert_ne!(run(&["svd", "--matrix", bad.to_str().unwrap()]).status.code(), Some(0));
    let missing = dir.path().join("missing.csv");
    assert_eq!(run(&["svd", "--matrix", missing.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn mc_repeat_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        let s = bin().args(["mc", "--trials", "50000", "--seed", "4", "-o"]).arg(p).status().unwrap();
        assert!(s.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn mc_single_channel_matches_exponential_cdf() {
    let out = run(&["mc", "--snr-grid", "10,31.6,100", "--trials", "1000000", "--seed", "8"]);
    assert!(out.status.success());
    let r = rows(&out);
    let lo: f64 = r[1][2].parse().unwrap();
    let hi: f64 = r[1][3].parse().unwrap();
    // 95% band widened to three standard errors.
    let p = 1.0 - (-0.1f64).exp();
    let half = 1.5 * (hi - lo);
    assert!((p - (lo + hi) / 2.0).abs() < half, "{lo} {hi}");
    assert_eq!(r.last().unwrap()[0], "slope");
}

#[test]
fn exit_codes() {
    let refused = run(&["mc", "--l", "6", "--snr-grid", "100,1000,10000", "--trials", "1000"]);
    assert_eq!(refused.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("refused"));
    assert_eq!(run(&["mc", "--event", "rate", "--trials", "1000"]).status.code(), Some(4));
    assert_eq!(run(&["perr", "--snr-grid", "0.5,2,4", "--snr-unit", "linear"]).status.code(), Some(3));
    assert_eq!(run(&["tradeoff", "--kind", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let ch = dir.path().join("ch.toml");
    // mod_variance * fade = 1 collapses the attack-noise bracket.
    std::fs::write(&ch, "[[subchannel]]\nre_t = 0.70710678118654757\nnoise_var = 1.0\neve_w = 2.0\n").unwrap();
    assert_eq!(run(&["rates", "--channel", ch.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# multicarrier curve\nkind = multicarrier\nl = 5\ngrid = 0:1:0.25\n").unwrap();
    let out = run(&["--config", cfg.to_str().unwrap(), "tradeoff"]);
    let d: Vec<f64> = rows(&out)[1..].iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(d, vec![5.0, 3.75, 2.5, 1.25, 0.0]);
    let out = run(&["--config", cfg.to_str().unwrap(), "tradeoff", "--l", "2"]);
    let d: Vec<f64> = rows(&out)[1..].iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(d, vec![2.0, 1.5, 1.0, 0.5, 0.0]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# l = 2\n") && text.contains("# kind = multicarrier\n"));

    std::fs::write(&cfg, "kind = single\nbogus = 1\n").unwrap();
    let out = run(&["--config", cfg.to_str().unwrap(), "tradeoff"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));
}

#[test]
fn rates_and_constellation_outputs() {
    let out = run(&["rates", "--channel", data("channel.toml").to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(rows(&out).len(), 1 + 3);

    let out = run(&["constellation", "--bits", "4", "--l", "3", "--seed", "1"]);
    let r = rows(&out);
    assert_eq!(r[0], ["subchannel", "index", "re", "im"]);
    assert_eq!(r.len(), 1 + 3 * 16);
}

#[test]
fn perr_columns() {
    let out = run(&["perr", "--snr-grid", "0:30:10", "--l", "5,10"]);
    let r = rows(&out);
    assert_eq!(r[0], ["snr_db", "snr", "p_single", "p_amqd_l5", "p_amqd_l10"]);
    let at10: Vec<f64> = r[2].iter().map(|x| x.parse().unwrap()).collect();
    assert!((at10[2] - 10f64.powf(-0.4)).abs() < 1e-8);
    assert!((at10[3] - 1e-2).abs() < 1e-10 && (at10[4] - 1e-4).abs() < 1e-12);
}
