use std::path::Path;

use serde_json::Value;

use moncomp_core::schemes::{LadderScheme, TableScheme};
use moncomp_core::{Point, PointSet, Sample};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = moncomp_cli::run(std::iter::once("moncomp").chain(args.iter().copied()), &mut out, &mut err);
    Run { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn run_in(dir: &Path, args: &[&str]) -> Run {
    let mut full = vec!["--out-dir", dir.to_str().unwrap()];
    full.extend_from_slice(args);
    run(&full)
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn without_meta(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("meta");
    v
}

#[test]
fn ladder_example() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_in(dir.path(), &["ladder", "--depth", "1", "--sample", "[[2,5],[1,7],[2,3]]"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rep = read_json(&dir.path().join("ladder.json"));
    assert_eq!(rep["result"]["compression"], serde_json::json!([[2, 5], [1, 7]]));
    assert_eq!(rep["result"]["covered"], true);
    assert_eq!(serde_json::from_str::<Value>(&r.stdout).unwrap()["result"], rep["result"]);
}

#[test]
fn ladder_accepts_bare_naturals() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_in(dir.path(), &["ladder", "--sample", "[3,1,4]"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rep = read_json(&dir.path().join("ladder.json"));
    assert_eq!(rep["result"]["compression"], serde_json::json!([[4]]));
}

#[test]
fn learn_example() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_in(
        dir.path(),
        &["--seed", "7", "learn", "--scheme", "omega", "--d", "1", "--m", "9", "--trials", "100000"],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let res = &read_json(&dir.path().join("learn.json"))["result"];
    let (mean, se) = (res["mean_regret"].as_f64().unwrap(), res["stderr"].as_f64().unwrap());
    assert_eq!(res["bound"], 0.1);
    assert_eq!(res["within_bound"], true);
    assert!(mean <= 0.1);
    // seed 7 lands 3.2 standard errors below the exact value 0.0574304985
    assert!((mean - 0.057_430_498_5).abs() <= 4.0 * se, "{mean} ± {se}");
    let csv = std::fs::read_to_string(dir.path().join("learn.csv")).unwrap();
    assert!(csv.starts_with("trial,regret\n0,"));
    assert_eq!(csv.lines().count(), 100_001);
    assert!(!csv.contains('\r'));
}

#[test]
fn learn_matches_closed_form_across_seeds() {
    let dir = tempfile::tempdir().unwrap();
    for seed in ["1", "2", "3"] {
        let r = run_in(dir.path(), &["--seed", seed, "learn", "--m", "9", "--trials", "100000"]);
        assert_eq!(r.code, 0);
        let res = &read_json(&dir.path().join("learn.json"))["result"];
        let (mean, se) = (res["mean_regret"].as_f64().unwrap(), res["stderr"].as_f64().unwrap());
        assert!((mean - 0.057_430_498_5).abs() <= 3.0 * se, "seed {seed}: {mean} ± {se}");
    }
}

#[test]
fn pqr_example() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_in(dir.path(), &["pqr", "--n", "5", "--p", "2", "--q", "1", "--r", "2", "--budget", "2"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let res = &read_json(&dir.path().join("pqr.json"))["result"];
    assert_eq!(res["verdict"], "infeasible");
    assert_eq!(res["counting_bound"], true);

    let r = run_in(dir.path(), &["pqr", "--n", "4", "--p", "2", "--q", "1", "--r", "2", "--budget", "3"]);
    assert_eq!(r.code, 0);
    let res = &read_json(&dir.path().join("pqr.json"))["result"];
    assert_eq!(res["verdict"], "feasible");
    assert_eq!(res["certificate"]["sigma"].as_array().unwrap().len(), 6);
}

#[test]
fn replay_is_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let r = run_in(a.path(), &["--seed", "42", "learn", "--m", "5", "--support", "20", "--trials", "3000"]);
    assert_eq!(r.code, 0);
    let report = a.path().join("learn.json");
    let r = run_in(b.path(), &["--config", report.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(without_meta(read_json(&report)), without_meta(read_json(&b.path().join("learn.json"))));
    assert_eq!(
        std::fs::read(a.path().join("learn.csv")).unwrap(),
        std::fs::read(b.path().join("learn.csv")).unwrap()
    );

    let other = tempfile::tempdir().unwrap();
    run_in(other.path(), &["--seed", "43", "learn", "--m", "5", "--support", "20", "--trials", "3000"]);
    assert_ne!(
        std::fs::read(a.path().join("learn.csv")).unwrap(),
        std::fs::read(other.path().join("learn.csv")).unwrap()
    );
}

#[test]
fn replay_every_monte_carlo_command() {
    let cmds: [&[&str]; 4] = [
        &["--seed", "5", "scaling", "--ms", "3,7", "--trials", "500"],
        &["--seed", "5", "lw-learn", "--random-dists", "3", "--trials", "50", "--pool", "40"],
        &["--seed", "5", "extract", "--samples", "200", "--sample", "[7,3,9,1]"],
        &["--seed", "5", "learn", "--scheme", "ladder", "--d", "2", "--support", "4", "--m", "6", "--trials", "300"],
    ];
    for args in cmds {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let r = run_in(a.path(), args);
        assert_eq!(r.code, 0, "{args:?}: {}", r.stderr);
        let name = std::fs::read_dir(a.path())
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .find(|n| n.ends_with(".json"))
            .unwrap();
        let r = run_in(b.path(), &["--config", a.path().join(&name).to_str().unwrap()]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        for entry in std::fs::read_dir(a.path()).unwrap() {
            let file = entry.unwrap().file_name();
            let (x, y) = (a.path().join(&file), b.path().join(&file));
            if name == file.to_str().unwrap() {
                assert_eq!(without_meta(read_json(&x)), without_meta(read_json(&y)));
            } else {
                assert_eq!(std::fs::read(&x).unwrap(), std::fs::read(&y).unwrap(), "{file:?}");
            }
        }
    }
}

#[test]
fn extract_trace() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_in(dir.path(), &["extract", "--d0", "3", "--m", "8", "--sample", "[7,3,9,1]"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let res = &read_json(&dir.path().join("extract.json"))["result"];
    assert_eq!(res["size_bound"], 5);
    assert_eq!(res["trace"]["compression"], serde_json::json!([[9]]));
    assert_eq!(res["trace"]["covered"], true);
    assert_eq!(res["all_covered"], true);
    assert!(res["largest_compression"].as_u64().unwrap() <= 5);
}

#[test]
fn lw_learn_derives_sample_size() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_in(dir.path(), &["lw-learn", "--trials", "20", "--random-dists", "2"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let res = &read_json(&dir.path().join("lw-learn.json"))["result"];
    assert_eq!(res["m"], 134);
    assert_eq!(res["distributions"].as_array().unwrap().len(), 2);
    assert_eq!(res["within_delta"], true);
}

#[test]
fn scaling_csv() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_in(dir.path(), &["--format", "csv", "scaling", "--ms", "4,9", "--trials", "200"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("m,mean_regret,stderr,bound\n4,"));
    assert_eq!(r.stdout.lines().count(), 3);
}

#[test]
fn validate_modes() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_in(dir.path(), &["validate", "--scheme", "ladder", "--d", "2", "--pool", "4", "--p", "3"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(read_json(&dir.path().join("validate.json"))["result"]["verdict"], "valid");

    // a table that forgets how to reconstruct
    let mut t = TableScheme::new(1);
    t.insert_sigma(Sample::nats(&[1, 2]), Sample::nats(&[2]), 0);
    let path = dir.path().join("bad.json");
    std::fs::write(&path, serde_json::to_string(&t).unwrap()).unwrap();
    let r = run_in(
        dir.path(),
        &["validate", "--scheme", "table", "--table", path.to_str().unwrap(), "--sample", "[1,2]"],
    );
    assert_eq!(r.code, 1);
    assert!(r.stderr.starts_with("ContractViolated"), "{}", r.stderr);
    assert_eq!(read_json(&dir.path().join("validate.json"))["result"]["verdict"], "invalid");
}

#[test]
fn transform_decrease_and_perfect() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_in(dir.path(), &["transform", "decrease", "--pool", "100", "--subpool", "10", "--k", "1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let res = &read_json(&dir.path().join("transform-decrease.json"))["result"];
    assert_eq!(res["fresh_point"], serde_json::json!([10]));
    assert_eq!(res["size_bound"], 0);
    let table: TableScheme =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("transform-decrease.scheme.json")).unwrap())
            .unwrap();
    let pool: PointSet = (0..10).map(Point::nat).collect();
    assert!(moncomp_core::schemes::exhaustive_validate(&table, &pool, 1, 100).unwrap().is_valid());

    let r = run_in(dir.path(), &["transform", "decrease", "--pool", "10", "--subpool", "10"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.starts_with("NoFreshElement"), "{}", r.stderr);

    let r = run_in(dir.path(), &["transform", "perfect", "--n", "6", "--p", "3", "--q", "1", "--r", "2", "--budget", "4"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let res = &read_json(&dir.path().join("transform-perfect.json"))["result"];
    assert_eq!(res["validation"]["verdict"], "valid");
    assert_eq!(res["size_bound"], 2);
    assert!(dir.path().join("transform-perfect.scheme.json").exists());

    let r = run_in(dir.path(), &["transform", "perfect", "--n", "6", "--p", "3", "--q", "1", "--r", "3", "--budget", "6"]);
    assert_eq!(r.code, 2, "{}", r.stderr);
}

#[test]
fn transform_uniformize_and_lift() {
    let dir = tempfile::tempdir().unwrap();
    let pool: PointSet = (0..8).map(Point::nat).collect();
    let mut members = Vec::new();
    for m in [1usize, 2, 4] {
        let samples: Vec<Sample> = (0..=m)
            .flat_map(|k| itertools::Itertools::combinations(pool.iter().cloned(), k).map(Sample))
            .collect();
        let t = TableScheme::tabulate(&LadderScheme::omega(), &samples).unwrap().with_max_input(m);
        let path = dir.path().join(format!("m{m}.json"));
        std::fs::write(&path, serde_json::to_string(&t).unwrap()).unwrap();
        members.push(format!("{m}={}", path.display()));
    }
    let mut args = vec!["transform", "uniformize", "--growth", "power", "--pool", "8", "--max-p", "4"];
    for m in &members {
        args.extend(["--member", m.as_str()]);
    }
    let r = run_in(dir.path(), &args);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let res = &read_json(&dir.path().join("transform-uniformize.json"))["result"];
    assert_eq!(res["validation"]["verdict"], "valid");
    assert_eq!(res["side_info_by_size"]["3"], serde_json::json!({"value": 2, "bits": 2}));

    let class = r#"{"kind":"extensional","pool":[[0],[1]],"concepts":[[[0]],[[1]]]}"#;
    let path = dir.path().join("class.json");
    std::fs::write(&path, class).unwrap();
    let r = run_in(dir.path(), &["transform", "lift", "--class-file", path.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let res = &read_json(&dir.path().join("transform-lift.json"))["result"];
    assert_eq!(res["vc_dimension"], res["lifted_vc_dimension"]);
    let lifted = read_json(&dir.path().join("transform-lift.class.json"));
    assert_eq!(lifted["concepts"], serde_json::json!([[[0, 1], [1, 0]], [[0, 0], [1, 1]]]));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_in(dir.path(), &[]);
    assert_eq!(r.code, 2);
    let r = run_in(dir.path(), &["learn", "--scheme", "omega", "--d", "2", "--m", "3"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("config error"));
    let r = run_in(dir.path(), &["ladder", "--sample", "[1,"]);
    assert_eq!(r.code, 2);
    let r = run_in(dir.path(), &["ladder", "--depth", "1", "--sample", "[[1,2],[3]]"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.starts_with("ArityMismatch"), "{}", r.stderr);
    let r = run_in(dir.path(), &["pqr", "--n", "30", "--p", "3", "--q", "1", "--r", "2", "--budget", "3", "--cap", "10"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.starts_with("CapExceeded"), "{}", r.stderr);
    let r = run_in(dir.path(), &["pqr", "--n", "5", "--p", "2", "--q", "3", "--r", "2", "--budget", "3"]);
    assert_eq!(r.code, 2);
    assert_eq!(run(&["--help"]).code, 0);
}

#[test]
fn config_errors_point_at_the_problem() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    std::fs::write(&path, "{\n  \"seed\": 1,\n  \"command\": \"learn\",\n  \"m\": \"nine\"\n}").unwrap();
    let r = run_in(dir.path(), &["--config", path.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line"), "{}", r.stderr);
    std::fs::write(&path, r#"{"seed": 1, "command": "nope"}"#).unwrap();
    assert_eq!(run_in(dir.path(), &["--config", path.to_str().unwrap()]).code, 2);
    std::fs::write(&path, r#"{"seed": 1, "command": "learn", "m": 3, "trails": 10}"#).unwrap();
    let r = run_in(dir.path(), &["--config", path.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("unknown field `trails`"), "{}", r.stderr);
    let missing = dir.path().join("missing.json");
    assert_eq!(run_in(dir.path(), &["--config", missing.to_str().unwrap()]).code, 2);
}

#[test]
fn config_file_drives_a_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    std::fs::write(&path, r#"{"seed": 3, "command": "pqr", "n": 4, "p": 2, "q": 1, "r": 2, "budget": 3}"#).unwrap();
    let r = run_in(dir.path(), &["--config", path.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rep = read_json(&dir.path().join("pqr.json"));
    assert_eq!(rep["config"]["seed"], 3);
    assert_eq!(rep["result"]["verdict"], "feasible");
}
