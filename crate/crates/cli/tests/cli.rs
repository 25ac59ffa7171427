use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gerbetool::config::COMMANDS;
use gerbetool::Scenario;

fn tool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gerbetool")).args(args).output().expect("gerbetool runs")
}

fn scenarios_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn write_config(dir: &tempfile::TempDir, body: &str) -> String {
    let path = dir.path().join("scenario.toml");
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn report(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

#[test]
fn schema_lists_all_commands() {
    let out = tool(&["schema"]);
    assert_eq!(out.status.code(), Some(0));
    let schema: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let commands: Vec<&str> = schema["commands"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert_eq!(commands, COMMANDS);
    assert!(schema["sections"]["fock"]["window"]["default"].is_number());
}

#[test]
fn every_example_scenario_validates() {
    let mut seen = 0;
    for entry in std::fs::read_dir(scenarios_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("toml") {
            continue;
        }
        let text = std::fs::read_to_string(&path).unwrap();
        let table: toml::Table = text.parse().unwrap();
        let command = table["command"].as_str().unwrap();
        Scenario::load(command, Some(&text), None).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        seen += 1;
    }
    assert!(seen >= 5);
}

#[test]
fn cocycle_on_trivial_holonomy() {
    let path = scenarios_dir().join("cocycle-trivial.toml");
    let out = tool(&["cocycle", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["status"], "pass");
    let delta = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "delta_triviality").unwrap();
    assert_eq!(delta["residual"], 0.0);
}

#[test]
fn moduli_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let o = tool(&["moduli", "--seed", "11", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let c = dir.path().join("c.json");
    tool(&["moduli", "--seed", "12", "--out", c.to_str().unwrap()]);
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
}

#[test]
fn timings_are_opt_in() {
    let plain = String::from_utf8(tool(&["spectrum"]).stdout).unwrap();
    assert!(!plain.contains("runtime_ms"));
    let timed = String::from_utf8(tool(&["spectrum", "--timings"]).stdout).unwrap();
    assert!(timed.contains("runtime_ms"));
}

#[test]
fn config_errors_exit_two_naming_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("[moduli]\nconjugationz = 3\n", "moduli.conjugationz"),
        ("[moduli]\nconjugations = \"many\"\n", "moduli.conjugations"),
        ("[moduli]\nconjugations = -1\n", "moduli.conjugations"),
        ("command = \"bogus\"\n", "command"),
        ("command = \"fock\"\n", "command"),
        ("colour = 3\n", "colour"),
    ];
    for (body, key) in cases {
        let path = write_config(&dir, body);
        let out = tool(&["moduli", "--config", &path]);
        assert_eq!(out.status.code(), Some(2), "{body}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{err}");
        assert!(err.contains(key), "{err} should name {key}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn semantic_errors_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("[pairing]\nrepresentation = \"spin\"\n", "pairing", "pairing.representation"),
        ("[pairing]\ngamma = [[9, 1]]\n", "pairing", "pairing.gamma"),
        ("[caloron]\npreset = \"nope\"\n", "caloron", "caloron.preset"),
        ("[fock]\nmu = \"1/4\"\n", "fock", "fock.mu"),
    ];
    for (body, command, key) in cases {
        let path = write_config(&dir, body);
        let out = tool(&[command, "--config", &path]);
        assert_eq!(out.status.code(), Some(2), "{body}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.contains(key), "{err} should name {key}");
    }
}

#[test]
fn failing_checks_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    // an unreachable order threshold
    let path = write_config(&dir, "[caloron]\nbase_points = 6\nmin_order = 50.0\n");
    let out = tool(&["caloron", "--config", &path]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["status"], "fail");
    // a commutator sweep wider than the window can certify
    let path = write_config(&dir, "[fock]\ncolors = 1\nwindow = 3\nmode_bound = 2\nmu = \"3/2\"\n");
    let out = tool(&["fock", "--config", &path]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    let sweep = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "commutator_sweep").unwrap();
    assert!(sweep["detail"]["error"].as_str().unwrap().contains("increase N"));
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    assert_eq!(tool(&["bogus"]).status.code(), Some(2));
}
