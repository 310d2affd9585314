use std::path::Path;
use std::process::Command;

use biharm_cli::config::{Format, RunConfig};
use biharm_cli::report::{render, Report, SCHEMA_VERSION};
use biharm_cli::run;
use biharm_core::registry::Registry;
use biharm_core::symcore::ParamScalar;
use serde_json::Value;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn call(args: &[&str], reg: Option<Registry>) -> Out {
    let mut o = Vec::new();
    let mut e = Vec::new();
    let mut argv = vec!["biharm"];
    argv.extend_from_slice(args);
    let code = run(argv, reg, &mut o, &mut e);
    Out {
        code,
        stdout: String::from_utf8(o).unwrap(),
        stderr: String::from_utf8(e).unwrap(),
    }
}

fn json(o: &Out) -> Value {
    serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", o.stdout))
}

/// A small `all` run: every suite, a few seconds.
const SMALL: &str = "\
# shrink every suite
n_max = 8
exponent_n_max = 6
exponent_grid = 3
coefficient_grid = 3
pd_n = 5..6
pd_grid = 10
samples = 4
sharp_dims = 5
sharp_iterations = 60
radial_cases = 6:2
radial_grid = 2x2
";

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

#[test]
fn no_arguments_is_a_usage_error() {
    let o = call(&[], None);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("Usage"), "{}", o.stderr);
    assert!(o.stdout.is_empty());
}

#[test]
fn unknown_flag_and_bad_values_exit_two() {
    assert_eq!(call(&["verify", "--bogus"], None).code, 2);
    assert_eq!(call(&["frobnicate"], None).code, 2);
    assert_eq!(call(&["radial", "--grid", "3by3"], None).code, 2);
    assert_eq!(call(&["scan-pd", "--n", "3..9"], None).code, 2);
    assert_eq!(call(&["verify", "--mode", "sideways"], None).code, 2);
    assert_eq!(call(&["verify", "--format", "yaml"], None).code, 2);
    let o = call(&["oracle", "--tol=-1"], None);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("tol"));
}

#[test]
fn help_and_version_exit_zero() {
    let o = call(&["--help"], None);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("scan-pd"));
    assert_eq!(call(&["--version"], None).code, 0);
}

#[test]
fn unknown_identity_is_a_failed_run_not_a_crash() {
    let o = call(&["verify", "--ids", "I99"], None);
    assert_eq!(o.code, 1);
    let v = json(&o);
    assert_eq!(v["status"], "fail");
    assert!(v["errors"][0].as_str().unwrap().contains("I99"));
}

#[test]
fn verified_subset_passes() {
    let o = call(&["verify", "--ids", "I1,I3,I6,I12"], None);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json(&o);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["identities"]["verified"], 4);
}

#[test]
fn mutated_identity_exits_one_with_its_residual() {
    let mut reg = Registry::printed();
    let bad = reg.get("I6").unwrap().perturbed(0, &ParamScalar::one());
    reg.replace(bad).unwrap();
    let o = call(&["verify", "--ids", "I6,I7"], Some(reg));
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("FAIL"));
    let v = json(&o);
    let reps = v["identities"]["reports"].as_array().unwrap();
    let i6 = reps.iter().find(|r| r["id"] == "I6").unwrap();
    assert_eq!(i6["status"], "residual");
    assert!(i6["residual_count"].as_u64().unwrap() > 0);
    assert!(!i6["residual_terms"].as_array().unwrap().is_empty());
    let i7 = reps.iter().find(|r| r["id"] == "I7").unwrap();
    assert_eq!(i7["status"], "verified_zero");
}

#[test]
fn full_catalog_reports_the_two_displayed_errata() {
    let o = call(&["verify"], None);
    assert_eq!(o.code, 1);
    let v = json(&o);
    assert_eq!(v["identities"]["verified"], 13);
    let failing: Vec<&str> = v["identities"]["reports"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["status"] != "verified_zero")
        .map(|r| r["id"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["I14", "I15"]);
    let combo = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "combination recovery")
        .unwrap();
    assert_eq!(combo["passed"], true);
}

#[test]
fn corrected_catalog_verifies_completely() {
    let o = call(
        &["verify", "--with-corrections", "--ids", "I14c,I15c"],
        None,
    );
    assert_eq!(o.code, 0, "{}", o.stdout);
}

#[test]
fn reproducible_reports_are_byte_identical() {
    let args = ["verify", "--ids", "I1,I2,I5", "--reproducible"];
    let a = call(&args, None);
    let b = call(&args, None);
    assert_eq!(a.stdout, b.stdout);
    assert!(a.stdout.contains("\"millis\": 0"));
    let args = ["oracle", "--samples", "20", "--dims", "5", "--reproducible"];
    assert_eq!(call(&args, None).stdout, call(&args, None).stdout);
}

#[test]
fn json_round_trips_through_a_generic_value() {
    let o = call(&["scan-pd", "--n", "5..7", "--grid", "25"], None);
    assert_eq!(o.code, 0);
    let v = json(&o);
    assert_eq!(v["schema_version"], SCHEMA_VERSION);
    assert_eq!(v["pd_scan"]["total_points"], 75);
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(again, v);
    // floats survive text exactly
    let min = v["pd_scan"]["min_lambda"].as_f64().unwrap();
    assert_eq!(
        again["pd_scan"]["min_lambda"].as_f64().unwrap().to_bits(),
        min.to_bits()
    );
}

#[test]
fn empty_report_is_a_valid_minimal_document() {
    let mut r = Report::new(RunConfig::default());
    r.finalize();
    assert!(r.passed());
    let v: Value = serde_json::from_str(&render(&r, Format::Json)).unwrap();
    assert_eq!(v["status"], "pass");
    assert_eq!(v["checks"], Value::Array(vec![]));
    for section in ["identities", "params", "pd_scan", "oracle", "radial"] {
        assert!(v.get(section).is_none(), "{section}");
    }
    let md = render(&r, Format::Markdown);
    assert!(md.starts_with("# biharm report"));
    assert!(!md.contains("## Notes"));
}

#[test]
fn markdown_carries_anchors_and_flags() {
    let o = call(&["verify", "--format", "markdown"], None);
    assert_eq!(o.code, 1);
    assert!(o.stdout.contains("| identity suite | FAIL |"));
    assert!(o.stdout.contains("master identity"));
    assert!(o.stdout.contains("divergence of uF_i"));
    let o = call(&["oracle", "--samples", "5", "--format", "markdown"], None);
    assert!(o.stdout.contains("below the cited 4/3"));
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "run.conf",
        "seed = 9\nsamples = 3 # tiny\ndims = 5\n\nsharp_dims = 5\n",
    );
    let o = call(&["oracle", "--config", &cfg, "--seed", "4"], None);
    let v = json(&o);
    assert_eq!(v["config"]["seed"], 4);
    assert_eq!(v["config"]["samples"], 3);
    assert_eq!(v["oracle"]["reports"][0]["evaluations"], 3 * 2);

    let broken = write(dir.path(), "bad.conf", "seed 9\n");
    let o = call(&["oracle", "--config", &broken], None);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("bad.conf:1"));
    let unknown = write(dir.path(), "unknown.conf", "colour = red\n");
    assert_eq!(call(&["oracle", "--config", &unknown], None).code, 2);
}

#[test]
fn out_is_written_atomically_and_stdout_stays_empty() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let p = path.display().to_string();
    let o = call(&["verify", "--ids", "I3", "--out", &p], None);
    assert_eq!(o.code, 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["status"], "pass");
    // only the report, no leftover temporary
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let missing = dir.path().join("nope/report.json").display().to_string();
    assert_eq!(
        call(&["verify", "--ids", "I3", "--out", &missing], None).code,
        2
    );
}

#[test]
fn all_runs_every_suite_without_stopping() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "small.conf", SMALL);
    let o = call(&["all", "--config", &cfg], None);
    // the identity errata fail early, the later suites still run
    assert_eq!(o.code, 1);
    let v = json(&o);
    for section in ["identities", "params", "pd_scan", "oracle", "radial"] {
        assert!(v.get(section).is_some(), "{section} missing");
    }
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(names.first(), Some(&"identity suite"));
    assert_eq!(names.last(), Some(&"radial scan n=6 alpha=2"));
}

#[test]
fn radial_dump_and_oracle_replay_files() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("traj");
    let t = traj.display().to_string();
    let o = call(
        &[
            "radial",
            "--n",
            "6",
            "--alpha",
            "2",
            "--grid",
            "2x3",
            "--dump-trajectories",
            &t,
        ],
        None,
    );
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json(&o);
    assert_eq!(v["radial"]["scans"][0]["total"], 6);
    assert_eq!(v["radial"]["scans"][0]["survived"], 0);
    assert_eq!(std::fs::read_dir(&traj).unwrap().count(), 6);

    let replay = dir.path().join("replay");
    let r = replay.display().to_string();
    let o = call(
        &[
            "oracle",
            "--samples",
            "3",
            "--dims",
            "5",
            "--replay-dir",
            &r,
        ],
        None,
    );
    assert_eq!(o.code, 1);
    let files: Vec<String> = std::fs::read_dir(&replay)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    assert_eq!(files.len(), 2, "{files:?}");
}

#[test]
fn binary_reads_the_config_path_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "env.conf", "format = markdown\n");
    let out = Command::new(env!("CARGO_BIN_EXE_biharm"))
        .args(["verify", "--ids", "I1"])
        .env(biharm_cli::CONFIG_ENV, &cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("# biharm report"));
    let out = Command::new(env!("CARGO_BIN_EXE_biharm")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
