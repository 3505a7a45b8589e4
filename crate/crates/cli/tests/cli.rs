use std::process::{Command, Output};

fn betaedge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_betaedge"))
        .args(args)
        .arg("--quiet")
        .env_remove("BETAEDGE_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV, skipping metadata and the header.
fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

#[test]
fn single_particle_gaussian_density_is_the_weight() {
    let o = betaedge(&["density", "--ensemble", "gaussian", "--beta", "2", "--n", "1", "--scaling", "none", "--grid=-2:2:0.5"]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 9);
    for row in r {
        let exact = (-row[0] * row[0]).exp() / std::f64::consts::PI.sqrt();
        assert!((row[1] - exact).abs() < 1e-15 * exact.max(1.0));
    }
}

#[test]
fn csv_carries_the_full_configuration() {
    let o = betaedge(&["density", "--beta", "4", "--n", "3", "--grid=0:1:1", "--precision", "256"]);
    let text = stdout(&o);
    let config = text.lines().find_map(|l| l.strip_prefix("# config: ")).unwrap();
    let v: serde_json::Value = serde_json::from_str(config).unwrap();
    assert_eq!(v["beta"], 4);
    assert_eq!(v["n"], serde_json::json!([3]));
    assert_eq!(v["precision_bits"], 256);
    assert_eq!(v["backend"], "rational");
    assert!(text.starts_with("# betaedge "));
    assert!(text.lines().any(|l| l == "x,scaled_density"));
}

#[test]
fn exit_codes() {
    assert_eq!(betaedge(&["derivcheck", "--ensemble", "gaussian", "--beta", "2", "--n", "30"]).status.code(), Some(4));
    assert_eq!(betaedge(&["density", "--beta", "3", "--n", "5"]).status.code(), Some(2));
    assert_eq!(betaedge(&["density", "--ensemble", "laguerre", "--n", "5"]).status.code(), Some(2));
    assert_eq!(betaedge(&["density", "--n", "5", "--grid", "nonsense"]).status.code(), Some(2));
    assert_eq!(betaedge(&["correction", "--n", "5"]).status.code(), Some(2));
    assert_eq!(betaedge(&["density", "--bogus"]).status.code(), Some(2));
    assert_eq!(betaedge(&["reference", "--grid=0:0:1"]).status.code(), Some(0));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("job.conf");
    std::fs::write(&cfg, "# Laguerre job\nensemble = laguerre\na = 0.5\nbeta = 6\nn = 4\ngrid = 0:1:1\n").unwrap();
    let o = betaedge(&["density", "--config", cfg.to_str().unwrap(), "--beta", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("\"beta\":2"));
    assert!(text.contains("\"a\":\"0.5\""));
}

#[test]
fn precision_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_betaedge"))
        .args(["density", "--n", "2", "--grid=0:0:1", "--quiet"])
        .env("BETAEDGE_PRECISION", "192")
        .output()
        .unwrap();
    assert!(stdout(&o).contains("\"precision_bits\":192"));
}

#[test]
fn several_sizes_write_one_file_each() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig.csv");
    let o = betaedge(&["density", "--beta", "6", "--n", "3,4", "--grid=-1:0:1", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    for n in [3, 4] {
        let text = std::fs::read_to_string(dir.path().join(format!("fig_N{n}.csv"))).unwrap();
        assert!(text.contains(&format!("\"n\":{n}")));
        assert_eq!(rows(&text).len(), 2);
    }
}

#[test]
fn backends_agree() {
    let run = |backend: &str| {
        rows(&stdout(&betaedge(&[
            "density", "--beta", "4", "--n", "6", "--grid=-2:1:1", "--backend", backend, "--precision", "256",
        ])))
    };
    for (a, b) in run("rational").iter().zip(run("bigfloat")) {
        assert!((a[1] - b[1]).abs() <= 1e-14 * a[1].abs());
    }
}

#[test]
fn output_is_independent_of_the_worker_count() {
    let run = |jobs: &str| stdout(&betaedge(&["density", "--beta", "4", "--n", "5,7,9", "--grid=-1:1:1", "--jobs", jobs]));
    // Only the echoed worker count may differ.
    let one = run("1").replace("\"jobs\":1", "\"jobs\":_");
    assert_eq!(one, run("4").replace("\"jobs\":4", "\"jobs\":_"));
    assert_eq!(one.matches("# config:").count(), 3);
}

#[test]
fn json_output_parses() {
    let o = betaedge(&["reference", "--grid=-1:1:1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let t = &v["tables"][0];
    assert_eq!(t["columns"][3], "rho_limit");
    assert_eq!(t["rows"].as_array().unwrap().len(), 3);
    // Ai(0)
    assert!((t["rows"][1][1].as_f64().unwrap() - 0.355_028_053_887_817_2).abs() < 1e-15);
    assert_eq!(t["meta"]["alpha"], "10");
}

#[test]
fn monte_carlo_table_columns() {
    let o = betaedge(&["validate-mc", "--beta", "2", "--n", "8", "--samples", "400", "--bins", "12", "--seed", "7"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "bin_center,count,density_estimate,exact_density"));
    assert!(text.contains("# chi_square:") && text.contains("# ks:"));
    assert_eq!(rows(&text).len(), 12);
    let again = stdout(&betaedge(&["validate-mc", "--beta", "2", "--n", "8", "--samples", "400", "--bins", "12", "--seed", "7"]));
    assert_eq!(text, again);
}

#[test]
fn correction_reports_fits_and_the_closed_form() {
    let o = betaedge(&["correction", "--beta", "2", "--n", "10,12,14,16", "--grid=-1:0:1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("# successive_fit:") && text.contains("# limit_fit:"));
    let header = text.lines().find(|l| l.starts_with("x,")).unwrap();
    assert_eq!(header.split(',').count(), 1 + 3 + 4 + 1);
    assert!(header.ends_with("rho_correction"));
}
