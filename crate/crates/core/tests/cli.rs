//! End-to-end runs of the `zerotalk` binary: golden JSON, text lines and
//! exit codes. Set `ZEROTALK_BLESS=1` to rewrite the golden files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use zerotalk::spec_file::load_source;
use zerotalk::Limits;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn zerotalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zerotalk"))
        .args(args)
        .env_remove("ZEROTALK_EXPANSION_LIMIT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn spec(name: &str) -> String {
    data(&format!("{name}.json")).to_str().unwrap().to_string()
}

fn golden(name: &str, args: &[&str]) {
    let out = zerotalk(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let path = data(&format!("golden/{name}.json"));
    let actual = stdout(&out);
    if std::env::var_os("ZEROTALK_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    assert_eq!(actual, expected, "golden {name}");
}

#[test]
fn golden_reports() {
    let e1 = spec("three_user");
    let e2 = spec("xor_triangle");
    let e3 = spec("two_user_linear");
    golden("jgk_three_user", &["--json", "jgk", &e1]);
    golden("jgk_xor_triangle", &["--json", "jgk", &e2]);
    golden("jgk_two_user_linear", &["--json", "jgk", &e3]);
    golden("jgk_common", &["--json", "jgk", &spec("common")]);
    golden("bound_three_user", &["--json", "bound", &e1, "--partition", "singletons", "--rate", "0"]);
    golden("bound_three_user_search", &["--json", "bound", &e1, "--search", "--rate", "0.25"]);
    golden("bound_two_user_linear", &["--json", "bound", &e3]);
    golden("oracle_xor_triangle", &["--json", "oracle", &e2]);
    golden("convert_two_user_linear", &["convert", &e3, "--to", "hypergraphical"]);
    golden("verify_three_user", &["--json", "verify", &e1]);
    golden("simulate_three_user", &["--json", "simulate", &e1, "--n", "1000", "--seed", "7"]);
}

#[test]
fn text_first_lines() {
    let first = |args: &[&str]| stdout(&zerotalk(args)).lines().next().unwrap_or_default().to_string();
    assert_eq!(first(&["jgk", &spec("three_user")]), "J_GK = 1.000000 bits; witness edges: {c}");
    assert_eq!(first(&["jgk", &spec("independent")]), "J_GK = 0.000000 bits; witness edges: {}");
    assert_eq!(first(&["jgk", &spec("two_user_linear")]), "J_GK = 1.000000 bits; witness basis: [1,1,0]^T");
}

#[test]
fn oracle_examples() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&zerotalk(&["--json", "oracle", &spec("xor_triangle")]))).unwrap();
    assert_eq!(v["oracle"]["bits"], 0.0);
    assert_eq!(v["oracle"]["components"], 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&zerotalk(&["--json", "oracle", &spec("common")]))).unwrap();
    assert_eq!(v["oracle"]["bits"], 1.5);
    assert_eq!(v["oracle"]["components"], 3);
}

#[test]
fn bound_all_global_is_entropy_of_common_part() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&zerotalk(&["--json", "bound", &spec("identical")]))).unwrap();
    let row = &v["bounds"]["rows"][0];
    assert_eq!(row["alpha"], "0");
    assert_eq!(row["bound_at_zero"], v["bounds"]["h_g_bits"]);
}

#[test]
fn simulate_deterministic_source_has_zero_rate() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&zerotalk(&["--json", "simulate", &spec("deterministic"), "--n", "200"]))).unwrap();
    assert_eq!(v["simulation"]["agreement"], true);
    assert_eq!(v["simulation"]["empirical_rate_bits"], 0.0);
}

#[test]
fn convert_to_file_round_trips() {
    let dir = std::env::temp_dir().join(format!("zerotalk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("converted.json");
    let o = zerotalk(&["convert", &spec("two_user_linear"), "--to", "hypergraphical", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let converted = load_source(&out).unwrap();
    let original = load_source(&data("two_user_linear.json")).unwrap();
    let l = Limits::default();
    let diff = converted.entropy_profile(&l).unwrap().max_abs_diff(&original.entropy_profile(&l).unwrap());
    assert!(diff.unwrap() <= 1e-9);
    assert_eq!(zerotalk(&["verify", out.to_str().unwrap()]).status.code(), Some(0));

    let identical = zerotalk(&["convert", &spec("identical")]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&identical)).unwrap();
    assert_eq!(v["edges"].as_array().unwrap().len(), 1);
    assert_eq!(v["edges"][0]["subset"], serde_json::json!([1, 2]));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn exit_codes() {
    let dir = std::env::temp_dir().join(format!("zerotalk-exit-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let write = |name: &str, body: &str| {
        let p = dir.join(name);
        std::fs::write(&p, body).unwrap();
        p.to_str().unwrap().to_string()
    };
    let broken = write("broken.json", "{\"model\": ");
    let unknown = write("unknown.json", r#"{"model":"quantum","users":2}"#);
    let not_prime = write("q4.json", r#"{"model":"finite_linear","q":4,"dim":1,"matrices":{"1":[[1]],"2":[[1]]}}"#);
    let bad_pmf = write(
        "pmf.json",
        r#"{"model":"hypergraphical","users":2,"edges":[{"name":"a","subset":[1,2],"pmf":["1/2","1/3"]}]}"#,
    );
    let bad_subset = write(
        "subset.json",
        r#"{"model":"hypergraphical","users":2,"edges":[{"name":"a","subset":[1,3],"uniform":2}]}"#,
    );

    let code = |args: &[&str]| zerotalk(args).status.code();
    assert_eq!(code(&["jgk", &broken]), Some(2));
    assert_eq!(code(&["jgk", &unknown]), Some(2));
    assert_eq!(code(&["jgk", "/nonexistent.json"]), Some(2));
    assert_eq!(code(&["jgk"]), Some(2));
    assert_eq!(code(&["jgk", &not_prime]), Some(3));
    assert_eq!(code(&["jgk", &bad_pmf]), Some(3));
    assert_eq!(code(&["jgk", &bad_subset]), Some(3));
    assert_eq!(code(&["bound", &spec("three_user"), "--partition", "1,2"]), Some(3));
    assert_eq!(code(&["bound", &spec("xor_triangle")]), Some(4));
    assert_eq!(code(&["bound", &spec("common")]), Some(4));
    assert_eq!(code(&["convert", &spec("xor_triangle")]), Some(4));
    assert_eq!(code(&["simulate", &spec("three_user"), "--n", "0"]), Some(3));

    let limited = Command::new(env!("CARGO_BIN_EXE_zerotalk"))
        .args(["oracle", &spec("three_user")])
        .env("ZEROTALK_EXPANSION_LIMIT", "7")
        .output()
        .unwrap();
    assert_eq!(limited.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&limited.stderr).contains("limit"));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn random_batch_passes() {
    let o = zerotalk(&["--json", "verify", "--random", "30", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verification"]["instances_passed"], 30);
}
