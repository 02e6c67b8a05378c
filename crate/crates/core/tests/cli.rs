mod common;

use std::path::Path;
use std::process::Command as Process;

use clap::Parser;

use common::{corpus, random_ssm_source, read_corpus};
use ssm2sysml::cli::{run, Cli, Io, EXIT_DIAGNOSTICS, EXIT_FAILURE, EXIT_OK};

struct Outcome {
    code: u8,
    out: String,
    err: String,
}

fn invoke(args: &[&str]) -> Outcome {
    invoke_with_color(args, false)
}

fn invoke_with_color(args: &[&str], color: bool) -> Outcome {
    let cli = Cli::try_parse_from(std::iter::once("ssm2sysml").chain(args.iter().copied())).unwrap();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(
        cli,
        &mut Io {
            out: &mut out,
            err: &mut err,
            color,
        },
    );
    Outcome {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn compile_writes_the_golden_model_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let r = invoke(&["compile", p(&corpus("case_study.ssm")), "-o", p(dir.path()), "--report"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let text = std::fs::read_to_string(dir.path().join("Context.sysml")).unwrap();
    assert_eq!(text, read_corpus("golden/Context.sysml"));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("Context.report.json")).unwrap()).unwrap();
    let elements = report["elements"].as_array().unwrap();
    let roles: std::collections::BTreeSet<_> = elements.iter().filter_map(|e| e["role"].as_str()).collect();
    assert_eq!(roles.len(), 6);
    assert!(elements.iter().all(|e| e["line"].is_number() || e["line"].is_null()));
    assert_eq!(report["warnings"], serde_json::json!([]));
}

#[test]
fn compile_then_check_is_clean() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..15 {
        let src = dir.path().join(format!("in{seed}.ssm"));
        std::fs::write(&src, random_ssm_source(seed)).unwrap();
        let out = dir.path().join("out");
        let r = invoke(&["compile", p(&src), "-o", p(&out), "--state-pattern", "rd0", "--populate-view"]);
        assert_eq!(r.code, EXIT_OK, "{}", r.err);
        let model = out.join(format!("Ctx{seed}.sysml"));
        let r = invoke(&["check", p(&model)]);
        assert_eq!((r.code, r.out.as_str()), (EXIT_OK, ""), "seed {seed}");
    }
}

#[test]
fn compile_rejects_invalid_and_malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ssm");
    std::fs::write(&bad, read_corpus("case_study.ssm").replace("owner it", "owner nobody")).unwrap();
    let r = invoke(&["compile", p(&bad), "-o", p(dir.path())]);
    assert_eq!(r.code, EXIT_DIAGNOSTICS);
    assert!(r.err.contains("SSM-001"), "{}", r.err);
    assert!(!dir.path().join("Context.sysml").exists());

    let broken = dir.path().join("broken.ssm");
    std::fs::write(&broken, "context X { individual }").unwrap();
    let r = invoke(&["compile", p(&broken), "p", "-o", p(dir.path())]);
    assert_eq!(r.code, EXIT_FAILURE);
    assert!(r.err.contains("broken.ssm:1:"), "{}", r.err);
}

#[test]
fn check_reports_rule_violations() {
    let fail = corpus("rules/R-ACT-1/fail.sysml");
    let r = invoke(&["check", p(&fail)]);
    assert_eq!(r.code, EXIT_DIAGNOSTICS);
    assert_eq!(r.out.lines().count(), 1);
    assert!(r.out.contains("error[R-ACT-1]"), "{}", r.out);

    let r = invoke(&["check", p(&fail), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v[0]["rule"], "R-ACT-1");
    assert_eq!(v[0]["severity"], "error");
    assert!(v[0]["line"].as_u64().unwrap() > 0);

    let r = invoke(&["check", p(&fail), "--rules", "R-STK-1,R-IND-1"]);
    assert_eq!((r.code, r.out.as_str()), (EXIT_OK, ""));

    let r = invoke(&["check", p(&fail), "--rules", "R-NOPE-1"]);
    assert_eq!(r.code, EXIT_FAILURE);
    assert!(r.err.contains("R-NOPE-1"));
}

#[test]
fn warnings_alone_exit_zero() {
    let r = invoke(&["check", p(&corpus("rules/R-VIEW-1/fail.sysml"))]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains("warning[R-VIEW-1]"), "{}", r.out);
}

#[test]
fn worst_outcome_wins_and_files_keep_their_order() {
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.sysml");
    std::fs::write(&junk, "package {").unwrap();
    let act = corpus("rules/R-ACT-1/fail.sysml");
    let stk = corpus("rules/R-STK-1/fail.sysml");
    let r = invoke(&["check", p(&stk), p(&act)]);
    assert_eq!(r.code, EXIT_DIAGNOSTICS);
    let lines: Vec<_> = r.out.lines().collect();
    assert!(lines[0].contains("R-STK-1") && lines[1].contains("R-ACT-1"), "{lines:?}");
    let r = invoke(&["check", p(&act), p(&junk)]);
    assert_eq!(r.code, EXIT_FAILURE);
    assert!(r.out.contains("R-ACT-1"));
}

#[test]
fn color_follows_the_flag() {
    let fail = corpus("rules/R-ACT-1/fail.sysml");
    assert!(invoke_with_color(&["check", p(&fail)], true).out.contains("\x1b[31m"));
    assert!(!invoke_with_color(&["check", p(&fail)], false).out.contains('\x1b'));
}

#[test]
fn trace_lists_contributors() {
    let golden = corpus("golden/Context.sysml");
    let r = invoke(&["trace", p(&golden), "--from", "Context.resources", "--backward"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    for want in ["Context.resources", "Context.licenseManagement", "Context.it"] {
        assert!(r.out.lines().any(|l| l == want), "{want} missing from\n{}", r.out);
    }
    let r = invoke(&[
        "trace",
        p(&golden),
        "--from",
        "Context.resources",
        "--backward",
        "--kinds",
        "frames",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["query"], "trace Context.resources --backward");
    assert!(v["elements"].as_array().unwrap().len() >= 2);

    let r = invoke(&["trace", p(&golden), "--from", "Context.resources.ghost"]);
    assert_eq!(r.code, EXIT_FAILURE);
    assert!(r.err.contains("`Context.resources`"), "{}", r.err);

    let r = invoke(&["trace", p(&golden), "--from", "Context.it", "--kinds", "bogus"]);
    assert_eq!(r.code, EXIT_FAILURE);
    assert!(r.err.contains("typedBy"));
}

#[test]
fn view_renders_selected_elements() {
    let golden = corpus("golden/Context.sysml");
    let r = invoke(&["view", p(&golden), "License Allocation"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(r.out, "view Context.'License Allocation'\n0 elements\n");

    let dir = tempfile::tempdir().unwrap();
    let r = invoke(&["compile", p(&corpus("case_study.ssm")), "-o", p(dir.path()), "--populate-view"]);
    assert_eq!(r.code, EXIT_OK);
    let model = dir.path().join("Context.sysml");
    let r = invoke(&["view", p(&model), "License Allocation", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert!(!v["elements"].as_array().unwrap().is_empty());

    let r = invoke(&["view", p(&golden), "Context.it"]);
    assert_eq!(r.code, EXIT_FAILURE);
}

#[test]
fn explain_describes_rules() {
    let r = invoke(&["explain", "R-OWN-1"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.starts_with("R-OWN-1 (error):"));
    assert_eq!(invoke(&["explain", "R-XYZ-1"]).code, EXIT_FAILURE);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_ssm2sysml");
    let status = |args: &[&str]| Process::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["check", p(&corpus("golden/Context.sysml"))]), Some(0));
    assert_eq!(status(&["check", p(&corpus("rules/R-IND-1/fail.sysml"))]), Some(1));
    assert_eq!(status(&["check", "/nonexistent.sysml"]), Some(2));
    assert_eq!(status(&["frobnicate"]), Some(2));
}
