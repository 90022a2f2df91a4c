use std::path::PathBuf;
use std::process::Command;

use fibluc::cli::{emit_report, parse_certificate, run_pipeline, Format, PipelineConfig, ProofCertificate};
use fibluc::search::Verdict;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_fibluc"));
    c.env_remove("FIBLUC_WORKERS");
    c
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fibluc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn read(path: &PathBuf) -> ProofCertificate {
    parse_certificate(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn full_proof_round_trips() {
    let cert = run_pipeline(&PipelineConfig::default());
    assert_eq!(cert.verdict, Verdict::Verified);
    let stages: Vec<u8> = cert.stages.iter().map(|s| s.stage).collect();
    for s in 1..=9u8 {
        assert!(stages.contains(&s), "stage {s} missing");
    }
    for st in &cert.stages {
        if let Some(m) = st.report.numbers.get("manifest") {
            assert_eq!(m, "match", "stage {}", st.stage);
        }
    }
    let back = parse_certificate(&emit_report(&cert, Format::Json)).unwrap();
    assert_eq!(back, cert);
    assert!(emit_report(&cert, Format::Text).contains("verdict: verified"));
}

#[test]
fn binary_writes_certificate_and_exits_zero() {
    let out = tmp("prove.json");
    let st = bin().args(["prove", "--format", "json", "--out"]).arg(&out).output().unwrap();
    assert_eq!(st.status.code(), Some(0));
    let printed = parse_certificate(std::str::from_utf8(&st.stdout).unwrap()).unwrap();
    let written = read(&out);
    assert_eq!(printed, written);
    assert_eq!(written.verdict, Verdict::Verified);
    assert_eq!(written.number(5, "solutions"), Some("0"));
    assert_eq!(written.number(7, "x_cap_out"), Some("100"));
}

#[test]
fn reduced_caps_are_restricted() {
    let st = bin()
        .args(["search", "--n-cap", "60", "--x-cap", "12", "--format", "json", "--workers", "2"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0));
    let c = parse_certificate(std::str::from_utf8(&st.stdout).unwrap()).unwrap();
    assert_eq!(c.verdict, Verdict::VerifiedRestricted);
    assert!(c.stages.iter().all(|s| !s.report.numbers.contains_key("manifest")));
}

#[test]
fn resume_carries_earlier_stages() {
    let first = tmp("stage3.json");
    let st = bin().args(["prove", "--stage", "3", "--out"]).arg(&first).output().unwrap();
    assert_eq!(st.status.code(), Some(0));
    let second = tmp("stage4.json");
    let st = bin()
        .args(["prove", "--stage", "4", "--resume"])
        .arg(&first)
        .arg("--out")
        .arg(&second)
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0));
    let c = read(&second);
    assert_eq!(c.stages.iter().map(|s| s.stage).collect::<Vec<_>>(), vec![3, 4]);
    let x3 = c.number(3, "x_bound").unwrap();
    let input = &c.stage(4).next().unwrap().report.inputs["x_cap_in"];
    assert_eq!(input.as_str(), Some(x3));
}

#[test]
fn bad_arguments_exit_nonzero() {
    let st = bin().args(["prove", "--n-cap", "2"]).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
    let st = bin().args(["prove", "--resume", "/nonexistent/cert.json"]).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
    let st = bin().args(["frobnicate"]).output().unwrap();
    assert_ne!(st.status.code(), Some(0));
}

#[test]
fn subcommands_run() {
    for cmd in ["identities", "corollaries", "bounds", "reduce", "conjecture"] {
        let st = bin().args([cmd, "--format", "text"]).output().unwrap();
        assert_eq!(st.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&st.stdout));
        assert!(String::from_utf8_lossy(&st.stdout).contains("verdict:"));
    }
}

#[test]
fn workers_from_environment() {
    let st = bin().env("FIBLUC_WORKERS", "1").args(["search", "--n-cap", "30", "--x-cap", "6"]).output().unwrap();
    assert_eq!(st.status.code(), Some(0));
}
