//! The hand-written header must match the exported symbols and status codes.

use std::collections::BTreeSet;
use std::process::Command;

const HEADER: &str = include_str!("../include/tambarize.h");
const SOURCE: &str = include_str!("../src/lib.rs");

fn header_functions() -> BTreeSet<String> {
    let re = regex::Regex::new(r"\b(tz_[a-z_]+)\(").unwrap();
    re.captures_iter(HEADER).map(|c| c[1].to_string()).collect()
}

fn exported_functions() -> BTreeSet<String> {
    let re = regex::Regex::new(r#"extern "C" fn (tz_[a-z_]+)\("#).unwrap();
    re.captures_iter(SOURCE).map(|c| c[1].to_string()).collect()
}

#[test]
fn functions_match() {
    assert_eq!(header_functions(), exported_functions());
}

#[test]
fn status_codes_match() {
    let re = regex::Regex::new(r"#define (TZ_[A-Z0-9_]+) (-?\d+)").unwrap();
    let defined: Vec<(String, i32)> = re.captures_iter(HEADER).map(|c| (c[1].to_string(), c[2].parse().unwrap())).collect();
    let ours = [
        ("TZ_OK", tambarize_ffi::TZ_OK),
        ("TZ_VIOLATIONS", tambarize_ffi::TZ_VIOLATIONS),
        ("TZ_MALFORMED", tambarize_ffi::TZ_MALFORMED),
        ("TZ_FAILED", tambarize_ffi::TZ_FAILED),
        ("TZ_NULL_POINTER", tambarize_ffi::TZ_NULL_POINTER),
        ("TZ_INVALID_UTF8", tambarize_ffi::TZ_INVALID_UTF8),
        ("TZ_PANIC", tambarize_ffi::TZ_PANIC),
    ];
    assert_eq!(defined.len(), ours.len());
    for (name, value) in ours {
        assert!(defined.contains(&(name.to_string(), value)), "{name} = {value} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(probe) = Command::new("cc").arg("--version").output() else {
        eprintln!("no C compiler, skipping");
        return;
    };
    assert!(probe.status.success());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("probe.c");
    std::fs::write(&src, "#include \"tambarize.h\"\nint main(void) { return tz_last_error() != 0; }\n").unwrap();
    let out = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&src)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
