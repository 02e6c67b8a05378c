//! End-to-end acceptance criteria. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::Parser;
use sha2::{Digest, Sha256};

use common::{
    corpus, filter_law_holds, fixpoint_reach, golden, golden_filter, random_context, random_ssm_source, read_corpus,
    Coverage, PackageGen,
};
use ssm2sysml::cli::{run, Cli, Io, EXIT_OK};
use ssm2sysml::conformance::{check, rules};
use ssm2sysml::diagnostic::Severity;
use ssm2sysml::mapper::{map_context, map_context_with};
use ssm2sysml::ssm::{parse_ssm, validate_context};
use ssm2sysml::sysml::ast::{ActionForm, ConstraintKind, ElementKind, ElementTag, Package, RelationshipKind};
use ssm2sysml::sysml::expr::Literal;
use ssm2sysml::sysml::{emit, parse_sysml, validate_package, ModelIndex, Target};
use ssm2sysml::trace::{build_graph, reach, Direction};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const WORLDVIEW: &str = "Appropriate access should be given to new hires and license availability recorded";
const EC1_TEXT: &str = "New Hires shall be given access to tools necessary to perform their Job Role";
const EC2_TEXT: &str = "New hires shall be given access to a tool only when there is availability";

fn compile_case_study() -> Result<Package, String> {
    let ctx = parse_ssm(&read_corpus("case_study.ssm"), "case_study.ssm").map_err(|e| e.to_string())?;
    let diags = validate_context(&ctx);
    ensure!(diags.is_empty(), "case study invalid: {diags:?}");
    Ok(map_context(&ctx).map_err(|e| e.to_string())?.0)
}

fn named<'a>(idx: &ModelIndex<'a>, name: &str, tag: ElementTag) -> Result<usize, String> {
    let hits: Vec<usize> = idx
        .find_by_simple_name(name)
        .into_iter()
        .filter(|&i| idx.element(i).tag() == tag)
        .collect();
    ensure!(hits.len() == 1, "expected one {} `{name}`, found {}", tag.as_str(), hits.len());
    Ok(hits[0])
}

fn typed_by(idx: &ModelIndex<'_>, id: usize, def: &str) -> bool {
    idx.element(id)
        .relationships_of(RelationshipKind::Typing)
        .any(|r| matches!(idx.resolve_relationship(id, r), Some(Target::Element(t)) if idx.element(t).name_str() == Some(def)))
}

fn case_study() -> Outcome {
    let started = Instant::now();
    let model = compile_case_study()?;
    let idx = ModelIndex::new(&model);

    let mut roles = BTreeSet::new();
    for id in idx.ids() {
        if let ElementKind::MetadataApplication { definition, bindings } = &idx.element(id).kind {
            if definition.last().as_str() == "CATWOE" {
                for (_, v) in bindings {
                    if let Literal::Enum { literal, .. } = v {
                        roles.insert(literal.as_str().to_string());
                    }
                }
            }
        }
    }
    let want: BTreeSet<String> = ["Customer", "Actor", "Transformation", "Worldview", "Owner", "Environment"]
        .map(String::from)
        .into();
    ensure!(roles == want, "CATWOE tags {roles:?}");

    let ec1 = named(&idx, "EC1", ElementTag::RequirementDef)?;
    let ec2 = named(&idx, "EC2", ElementTag::RequirementDef)?;
    ensure!(idx.element(ec1).doc.as_deref() == Some(EC1_TEXT), "EC1 text");
    ensure!(idx.element(ec2).doc.as_deref() == Some(EC2_TEXT), "EC2 text");
    let requires: Vec<_> = idx
        .element(ec2)
        .kinded_constraints()
        .filter(|(k, _)| *k == ConstraintKind::Require)
        .collect();
    ensure!(requires.len() == 1, "EC2 has {} require constraints", requires.len());
    let refines: Vec<_> = idx
        .element(ec2)
        .relationships_of(RelationshipKind::Refines)
        .map(|r| idx.resolve_relationship(ec2, r))
        .collect();
    ensure!(refines == vec![Some(Target::Element(ec1))], "EC2 refines {refines:?}");

    let resources = named(&idx, "resources", ElementTag::ConcernUsage)?;
    ensure!(typed_by(&idx, resources, "OwnerConcern"), "resources is not an OwnerConcern");
    let vp = named(&idx, "licenseManagement", ElementTag::ViewpointUsage)?;
    ensure!(typed_by(&idx, vp, "ResourceAllocation"), "licenseManagement is not a ResourceAllocation");
    let rationale: Vec<_> = idx
        .element(vp)
        .metadata()
        .filter(|(d, _)| d.last().as_str() == "Rationale")
        .flat_map(|(_, b)| b.iter().filter(|(n, _)| n.as_str() == "text").map(|(_, v)| v.clone()))
        .collect();
    ensure!(
        rationale == vec![Literal::String(WORLDVIEW.into())],
        "rationale {rationale:?}"
    );
    named(&idx, "License Allocation", ElementTag::ViewUsage)?;

    let diags = check(&model);
    ensure!(diags.is_empty(), "check reported {diags:?}");
    let elapsed = started.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(())
}

fn kettle() -> Outcome {
    let text = read_corpus("kettle.sysml");
    let model = parse_sysml(&text, "kettle.sysml").map_err(|e| e.to_string())?;
    let idx = ModelIndex::new(&model);

    let mut performers: BTreeMap<String, String> = BTreeMap::new();
    for id in idx.ids() {
        if let ElementKind::ActionUsage(ActionForm::Perform { by: Some(by) }) = &idx.element(id).kind {
            performers.insert(idx.element(id).name_str().unwrap_or_default().into(), by.to_string());
        }
    }
    for a in ["turnOn", "pressButton", "turnOff"] {
        ensure!(performers.get(a).map(String::as_str) == Some("user"), "{a} not performed by user: {performers:?}");
    }
    let by_kettle = performers.values().filter(|b| *b == "kettle").count();
    ensure!(by_kettle == 1, "{by_kettle} kettle actions");

    let states = idx
        .ids()
        .filter(|&i| idx.element(i).tag() == ElementTag::StateUsage)
        .count();
    ensure!(states == 3, "{states} states");
    let full = idx
        .ids()
        .filter(|&i| {
            matches!(
                &idx.element(i).kind,
                ElementKind::TransitionUsage { trigger: Some(_), guard: Some(_), effect: Some(_), .. }
            )
        })
        .count();
    ensure!(full >= 1, "no transition with trigger, guard and effect");

    let once = emit(&model).map_err(|e| e.to_string())?;
    ensure!(once == text, "canonical emit differs from the fixture");
    let twice = emit(&parse_sysml(&once, "again").map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure!(twice == once, "second emit differs");
    let errors: Vec<_> = check(&model).into_iter().filter(|d| d.is_error()).collect();
    ensure!(errors.is_empty(), "errors {errors:?}");
    Ok(())
}

fn round_trip() -> Outcome {
    const N: u64 = 500;
    let mut cov = Coverage::default();
    for seed in 0..N {
        let m = PackageGen::new(seed).package();
        cov.add(&m);
        let text = emit(&m).map_err(|e| format!("seed {seed}: {e}"))?;
        let back = parse_sysml(&text, "gen").map_err(|e| format!("seed {seed}: {e}\n{text}"))?;
        ensure!(back == m, "seed {seed} does not round-trip:\n{text}");
    }
    ensure!(cov.is_complete(), "coverage incomplete: {cov:?}");
    Ok(())
}

fn rule_fixtures() -> Outcome {
    let all: Vec<_> = rules().collect();
    ensure!(all.len() == 10, "{} rules", all.len());
    for rule in all {
        let id = rule.id;
        let load = |kind: &str| -> Result<Package, String> {
            let rel = format!("rules/{id}/{kind}.sysml");
            let model = parse_sysml(&read_corpus(&rel), &rel).map_err(|e| e.to_string())?;
            let problems = validate_package(&model);
            ensure!(problems.is_empty(), "{rel} is malformed: {problems:?}");
            Ok(model)
        };
        let pass = check(&load("pass")?);
        ensure!(pass.is_empty(), "{id} pass fixture reports {pass:?}");
        let fail = check(&load("fail")?);
        let ids: BTreeSet<&str> = fail.iter().map(|d| d.rule_id.as_str()).collect();
        ensure!(ids == BTreeSet::from([id]), "{id} fail fixture reports {ids:?}");
    }
    Ok(())
}

fn mapper_consistency() -> Outcome {
    for seed in 0..100 {
        let (ctx, opts) = random_context(seed);
        let (pkg, _) = map_context_with(&ctx, &opts).map_err(|e| format!("seed {seed}: {e}"))?;
        let problems = validate_package(&pkg);
        ensure!(problems.is_empty(), "seed {seed} malformed: {problems:?}");
        let errors: Vec<_> = check(&pkg).into_iter().filter(|d| d.severity == Severity::Error).collect();
        ensure!(errors.is_empty(), "seed {seed}: {errors:?}");
    }
    Ok(())
}

fn traceability() -> Outcome {
    let model = compile_case_study()?;
    let g = build_graph(&model);
    let from = g.node("Context.resources").ok_or("no node Context.resources")?;
    let got: BTreeSet<usize> = reach(&g, "Context.resources", Direction::Backward, None)
        .map_err(|e| e.to_string())?
        .iter()
        .filter_map(|p| g.node(p))
        .collect();
    let want = fixpoint_reach(&g, from, true, None);
    ensure!(got == want, "reach {got:?} != oracle {want:?}");
    ensure!(want.len() > 1, "nothing reaches resources");

    let golden = golden();
    for seed in 0..200 {
        let f = golden_filter(&mut common::rng(seed), 4);
        filter_law_holds(&golden, &f).map_err(|e| format!("seed {seed}: {e}"))?;
    }
    Ok(())
}

fn compile_into(inputs: &[&Path], out: &Path) -> Outcome {
    let mut args = vec!["ssm2sysml".to_string(), "compile".into()];
    args.extend(inputs.iter().map(|p| p.display().to_string()));
    args.extend(["-o".into(), out.display().to_string(), "--report".into()]);
    let cli = Cli::try_parse_from(args).map_err(|e| e.to_string())?;
    let (mut stdout, mut stderr) = (Vec::new(), Vec::new());
    let code = run(cli, &mut Io { out: &mut stdout, err: &mut stderr, color: false });
    ensure!(code == EXIT_OK, "compile exited {code}: {}", String::from_utf8_lossy(&stderr));
    Ok(())
}

fn digests(dir: &Path) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        let bytes = std::fs::read(&path).map_err(|e| e.to_string())?;
        let hex: String = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
        out.insert(path.file_name().unwrap().to_string_lossy().into_owned(), hex);
    }
    Ok(out)
}

fn determinism() -> Outcome {
    let work = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut inputs = vec![corpus("case_study.ssm")];
    for seed in 0..10 {
        let p = work.path().join(format!("gen{seed}.ssm"));
        std::fs::write(&p, random_ssm_source(seed)).map_err(|e| e.to_string())?;
        inputs.push(p);
    }
    let inputs: Vec<&Path> = inputs.iter().map(|p| p.as_path()).collect();
    let (a, b) = (work.path().join("a"), work.path().join("b"));
    compile_into(&inputs, &a)?;
    compile_into(&inputs, &b)?;
    let (da, db) = (digests(&a)?, digests(&b)?);
    ensure!(da.len() == 2 * inputs.len(), "{} outputs for {} inputs", da.len(), inputs.len());
    ensure!(da == db, "outputs differ between runs");
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("case study compiles to a conformant model", case_study),
        ("kettle fixture round-trips and checks", kettle),
        ("500 generated models round-trip", round_trip),
        ("each rule has a passing and an isolating failing fixture", rule_fixtures),
        ("100 mapped contexts have no errors", mapper_consistency),
        ("reach matches the oracle and filter laws hold", traceability),
        ("compile is deterministic", determinism),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (n, (title, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(()) => println!("criterion {} ({title}): PASS", n + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {} ({title}): FAIL: {e}", n + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
