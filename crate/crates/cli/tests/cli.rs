use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_euler-selmer"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn analyze_example_one() {
    let path = fixture("example1.json");
    let out = run(&["analyze", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["chi"]["chi_sigma_exponent"], 3);
    assert_eq!(v["rho"]["exponent"], 0);
    assert_eq!(v["expected"]["matches"], true);
}

#[test]
fn text_and_json_agree() {
    let path = fixture("example1.json");
    let j = json(&run(&["analyze", path.to_str().unwrap(), "--format", "json"]));
    let t = String::from_utf8(run(&["analyze", path.to_str().unwrap()]).stdout).unwrap();
    let chi = format!("chi_Sigma = 7^{}", j["chi"]["chi_sigma_exponent"]);
    assert!(t.contains(&chi), "{t}");
    for row in j["audit"].as_array().unwrap() {
        assert!(t.contains(row["l_at_1"].as_str().unwrap()));
    }
}

#[test]
fn stdin_and_failing_hypothesis() {
    let text = std::fs::read_to_string(fixture("example1.json")).unwrap().replace("\"prime\": 7", "\"prime\": 3")
        .replace("\"torsion_p_override\": \"7\"", "\"torsion_p_override\": null");
    let mut child = bin()
        .args(["analyze", "-", "--format", "json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["hypotheses"][0]["id"], "p_at_least_5");
    assert_eq!(v["hypotheses"][0]["status"], "FAIL");
}

#[test]
fn malformed_request_exits_one_with_pointer() {
    let dir = std::env::temp_dir().join(format!("euler-selmer-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    let text = std::fs::read_to_string(fixture("example1.json")).unwrap().replace("\"selmer_finite\": true", "\"selmer_finite\": 5");
    std::fs::write(&path, text).unwrap();
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("/external/selmer_finite"), "{err}");
}

#[test]
fn small_subcommands() {
    let v = json(&run(&["splitting", "--prime", "2", "--conductor", "7", "--format", "json"]));
    assert_eq!((v["e"].as_u64(), v["f"].as_u64(), v["g"].as_u64()), (Some(1), Some(3), Some(2)));

    let v = json(&run(&["local", "--curve", "1,0,0,-1,-1", "--prime", "7", "--conductor", "7", "--format", "json"]));
    assert_eq!(v["data"]["kodaira"], "I0");
    assert_eq!(v["data"]["n_v"], "7");

    let v = json(&run(&["local", "--curve", "1,0,0,-1,-1", "--prime", "3", "--f", "6", "--e", "1", "--format", "json"]));
    assert_eq!(v["data"]["l_at_1"], "729/728");

    let v = json(&run(&["count", "--curve", "0,0,0,0,1", "--prime", "5", "--format", "json"]));
    assert_eq!(v["count"], "6");
    let v = json(&run(&["count", "--curve", "1,0,0,-1,-1", "--prime", "13", "--degree", "2", "--format", "json"]));
    assert_eq!(v["count"], "196");

    let v = json(&run(&["tau", "--curve", "0,0,0,0,1", "--prime", "5", "--conductor", "5", "--format", "json"]));
    assert_eq!(v["tau_p"], 4);

    let v = json(&run(&["coranks", "--conductor", "1", "--tau", "1", "--sigma-index", "48", "--format", "json"]));
    assert_eq!(v["predictions"]["global_h1"], 48);
    assert_eq!(v["predictions"]["local_sum"], 0);

    let v = json(&run(&["torsion", "--curve", "-1,2,2,0,0", "--prime", "7", "--format", "json"]));
    assert_eq!(v["lower"], "7");

    let out = run(&["count", "--curve", "1,0,0,-1,-1", "--prime", "7"]);
    assert_eq!(out.status.code(), Some(1));
}
