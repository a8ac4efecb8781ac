use std::process::{Command, Output};

fn tambarize(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tambarize")).args(args).output().unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn table_c2_is_the_burnside_ring() {
    let o = tambarize(&["table", "--group", "cyclic:2", "--functor", "trivial", "--level", "G"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["rank"], 2);
    assert_eq!(v["basis"], serde_json::json!(["[C2/e]", "[C2/C2]"]));
    assert_eq!(v["mul"][0][0], serde_json::json!([2, 0]));
}

#[test]
fn text_format_lists_products() {
    let o = tambarize(&["table", "--group", "cyclic:2", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let squashed = text.split_whitespace().collect::<Vec<_>>().join(" ");
    assert!(squashed.contains("[C2/e] * [C2/e] = 2[C2/e]"), "{text}");
}

#[test]
fn malformed_inputs_exit_two() {
    for args in [
        &["table", "--group", "cyclic:zero"][..],
        &["table", "--group", "cyclic:2", "--monoid", "frob"],
        &["table", "--group", "cyclic:2", "--functor", "nonsense"],
        &["table", "--group", "cyclic:2", "--level", "class:40"],
        &["table", "--group", "{\"not\": \"a group\"}"],
        &["frobnicate", "--group", "cyclic:2"],
        &["table"],
    ] {
        let o = tambarize(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn verify_and_marks_succeed() {
    let o = tambarize(&["verify", "--group", "cyclic:3", "--functor", "fixed_point", "--monoid", "bool", "--samples", "20"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["violations"], 0);
    let o = tambarize(&["marks", "--group", "symmetric:3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["violations"], 0);
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let args = ["crossed", "--group", "cyclic:2", "--monoid", "cyclic:2", "--samples", "10"];
    let direct = tambarize(&args);
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let o = tambarize(&with_out);
    assert_eq!(o.status.code(), direct.status.code());
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}
