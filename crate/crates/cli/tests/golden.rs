//! Serialized reports for fixed configs, compared byte for byte (timings
//! zeroed). Set `PPC_UPDATE_GOLDEN=1` to rewrite the files.

use std::fs;
use std::path::PathBuf;

use ppc_cli::{run_experiment, ExperimentConfig, RunOptions};

fn check(name: &str) {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let cfg = ExperimentConfig::load(dir.join(format!("{name}.toml"))).unwrap();
    let report = run_experiment(&cfg, RunOptions::default()).unwrap();
    let actual = report.without_timings().to_json().unwrap() + "\n";
    let path = dir.join(format!("{name}.json"));
    if std::env::var_os("PPC_UPDATE_GOLDEN").is_some() {
        fs::write(&path, &actual).unwrap();
    }
    let expected = fs::read_to_string(&path).unwrap();
    assert_eq!(actual, expected, "report for {name} changed");
}

#[test]
fn random_line_report() {
    check("random_line");
}

#[test]
fn halton_square_report() {
    check("halton_square");
}
