//! End-to-end checks of the binary: config round trips, byte-identical
//! reruns, curve shape properties on small budgets, and exit codes.

use std::path::PathBuf;
use std::process::Command;

use risfbl_cli::commands::{cmd_rate_vs_d, cmd_rate_vs_n, cmd_snr_cdf};
use risfbl_cli::config::{parse_scenario, serialize_scenario};
use risfbl_cli::parse_modes;
use risfbl_core::{PhaseMode, ScenarioConfig};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_risfbl"))
}

fn temp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("risfbl_test_{}_{name}", std::process::id()));
    p
}

// -- config ---------------------------------------------------------------------

#[test]
fn config_round_trip_through_binary() {
    let path = temp_path("show_config.cfg");
    let output = binary()
        .args(["show-config", "--n-elements", "256", "--seed", "9"])
        .output()
        .expect("spawn");
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    let parsed = parse_scenario(&text).unwrap();
    assert_eq!(parsed.n_elements, 256);
    assert_eq!(parsed.seed, 9);
    // parse ∘ serialize ∘ parse is the identity
    assert_eq!(parse_scenario(&serialize_scenario(&parsed)).unwrap(), parsed);

    // flags win over the file
    std::fs::write(&path, &text).unwrap();
    let output = binary()
        .args(["show-config", "--config"])
        .arg(&path)
        .args(["--n-elements", "512"])
        .output()
        .expect("spawn");
    assert!(output.status.success());
    let overridden = parse_scenario(&String::from_utf8(output.stdout).unwrap()).unwrap();
    assert_eq!(overridden.n_elements, 512);
    assert_eq!(overridden.seed, 9);
    std::fs::remove_file(&path).ok();
}

#[test]
fn bad_config_exits_with_code_2() {
    let path = temp_path("broken.cfg");
    std::fs::write(&path, "[ris]\nn_elements = minus one\n").unwrap();
    let output = binary().args(["show-config", "--config"]).arg(&path).output().expect("spawn");
    assert_eq!(output.status.code(), Some(2));
    let err = String::from_utf8(output.stderr).unwrap();
    assert!(err.contains("line 2"), "diagnostic should carry the line: {err}");
    std::fs::remove_file(&path).ok();
}

// -- determinism ------------------------------------------------------------------

#[test]
fn snr_cdf_rerun_is_byte_identical() {
    let args = [
        "snr-cdf",
        "--n-elements",
        "16",
        "--samples",
        "400",
        "--seed",
        "77",
        "--direct-link",
        "false",
        "--modes",
        "perfect,1",
        "--grid-points",
        "64",
    ];
    let a = binary().args(args).output().expect("spawn");
    let b = binary().args(args).output().expect("spawn");
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let header = text.lines().next().unwrap();
    assert_eq!(header, "snr_db,cdf_perfect,cdf_b1,cdf_gamma_analytic");
    assert!(text.contains("# scenario_hash ="));
    assert!(text.contains("# seed = 77"));
}

#[test]
fn single_element_smoke_run() {
    // N = 1 runs end to end (the Gamma match is not asserted there).
    let out = binary()
        .args(["snr-cdf", "--n-elements", "1", "--samples", "50", "--grid-points", "16"])
        .output()
        .expect("spawn");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

// -- curve shapes -----------------------------------------------------------------

#[test]
fn rate_vs_n_curve_properties() {
    // Boosted transmit power keeps every point in the positive-rate regime,
    // where the monotonicity and quantizer-ordering claims apply (below it
    // the dispersion penalty grows like √SNR and the unclamped mean rate is
    // negative and non-monotone).
    let scenario = ScenarioConfig {
        direct_link: false,
        samples: 600,
        seed: 3,
        tx_power_mw: 200_000.0,
        ..Default::default()
    };
    let modes = parse_modes("perfect,1,2").unwrap();
    let out = cmd_rate_vs_n(&scenario, &[64, 256, 1024], &modes, 1).unwrap();
    let col = |name: &str| out.columns.iter().position(|c| c == name).unwrap();
    let exact = col("avg_rate_exact_bpcu");
    let lb = col("avg_rate_lb_bpcu");
    let r1 = col("shannon_r1_bpcu");
    let gap = col("fbl_gap_bpcu");
    let mc_p = col("mc_rate_perfect_bpcu");
    let mc_b1 = col("mc_rate_b1_bpcu");
    let mc_b2 = col("mc_rate_b2_bpcu");

    let mut last_exact = f64::NEG_INFINITY;
    let mut last_gap = f64::NEG_INFINITY;
    for row in &out.rows {
        // monotone in N; gap positive and growing; bound below exact
        assert!(row[exact] >= last_exact);
        assert!(row[gap] > 0.0 && row[gap] >= last_gap - 1e-12);
        assert!(row[lb] <= row[exact] + 1e-9);
        assert!((row[gap] - (row[r1] - row[exact])).abs() < 1e-12);
        // quantized Monte Carlo curves sit between each other and perfect
        assert!(row[mc_b2] <= row[mc_p] && row[mc_b1] <= row[mc_b2]);
        last_exact = row[exact];
        last_gap = row[gap];
    }

    // ascending N required
    assert!(cmd_rate_vs_n(&scenario, &[64, 16], &modes, 1).is_err());
    assert!(cmd_rate_vs_n(&scenario, &[], &modes, 1).is_err());
}

#[test]
fn rate_vs_d_shows_midpoint_dip() {
    let scenario = ScenarioConfig {
        n_elements: 128,
        samples: 400,
        seed: 5,
        ..Default::default()
    };
    let modes = vec![PhaseMode::Quantized(2)];
    let out = cmd_rate_vs_d(&scenario, &[5.0, 50.0, 95.0], &modes, 1).unwrap();
    let col = |name: &str| out.columns.iter().position(|c| c == name).unwrap();
    for variant in ["direct", "blocked"] {
        let exact = col(&format!("{variant}_avg_rate_exact_bpcu"));
        let (r5, r50, r95) = (out.rows[0][exact], out.rows[1][exact], out.rows[2][exact]);
        assert!(r50 < r5 && r50 < r95, "{variant}: {r5} {r50} {r95}");
        // endpoint symmetry of the geometry
        assert!((r5 - r95).abs() < 1e-6 * r5.abs());
    }
    // out-of-range placement is rejected
    assert!(cmd_rate_vs_d(&scenario, &[4.0], &modes, 1).is_err());
}

#[test]
fn snr_cdf_columns_are_distributions() {
    let scenario = ScenarioConfig {
        direct_link: false,
        n_elements: 64,
        samples: 500,
        seed: 11,
        ..Default::default()
    };
    let modes = parse_modes("perfect,2").unwrap();
    let out = cmd_snr_cdf(&scenario, &modes, 1, 128).unwrap();
    for c in 1..out.columns.len() {
        let mut last = 0.0f64;
        for row in &out.rows {
            let v = row[c];
            assert!((0.0..=1.0).contains(&v));
            assert!(v >= last - 1e-12, "column {} must be nondecreasing", out.columns[c]);
            last = v;
        }
    }
    // quantized CDF sits to the left of (≥) the perfect CDF at every grid
    // point: quantization only loses SNR.
    let perfect = out.columns.iter().position(|c| c == "cdf_perfect").unwrap();
    let b2 = out.columns.iter().position(|c| c == "cdf_b2").unwrap();
    for row in &out.rows {
        assert!(row[b2] >= row[perfect] - 1e-12);
    }
}

// -- validate exit codes ------------------------------------------------------------

#[test]
fn validate_negative_control_exits_one() {
    let out = binary()
        .args(["validate", "--samples", "600", "--negative-control"])
        .output()
        .expect("spawn");
    assert_eq!(out.status.code(), Some(1));
    let report = String::from_utf8(out.stdout).unwrap();
    assert!(report.contains("FAIL gamma-ks"), "{report}");
    assert!(report.contains("negative_control = true"));
}
