mod common;

use std::sync::Arc;

use proptest::prelude::*;

use common::{random_context, random_ssm_source, read_corpus};
use ssm2sysml::ssm::lexer::{tokenize, Tok};
use ssm2sysml::ssm::{format_ssm, parse_ssm, validate_context, SsmContext};
use ssm2sysml::sysml::expr::Expr;

/// Textual edits that each break validation.
fn break_source(src: &str, which: u8) -> String {
    match which % 5 {
        0 => src.replacen("\"Person p0\"", "\"\"", 1),
        1 => src.replace("worldview \"worldview of rd0\"", "worldview \"  \""),
        2 => src.replacen("customer ", "customer ghost ", 1),
        3 => src.replacen(
            "        worldview \"worldview of rd0\"",
            "        worldview \"worldview of rd0\"\n        environmental-constraint bad \"x\" require \"nowhere.x > 1\" refines bad",
            1,
        ),
        _ => src.replacen(
            "    root-definition rd0 {",
            "    conceptual-model nobody { activity z \"z\" by p0 }\n    root-definition rd0 {",
            1,
        ),
    }
}

fn dangling_refs(ctx: &SsmContext) -> Vec<String> {
    let mut out = Vec::new();
    let ind = |id: &str| ctx.individual(id).is_some();
    for rd in &ctx.root_definitions {
        for r in rd.customers.iter().chain(&rd.actors).chain([&rd.owner]) {
            if !ind(&r.id) {
                out.push(format!("{}: individual {}", rd.id, r.id));
            }
        }
        for ec in &rd.environmental_constraints {
            if let Some(r) = &ec.refines {
                if rd.constraint(&r.id).is_none() {
                    out.push(format!("{}: constraint {}", rd.id, r.id));
                }
            }
            if let Some(e) = &ec.expr {
                for p in e.paths() {
                    if !rd.parameters().any(|q| q.name == p[0].as_str()) {
                        out.push(format!("{}: path {}", rd.id, Expr::Path(p.to_vec())));
                    }
                }
            }
        }
    }
    for cm in &ctx.conceptual_models {
        if ctx.root_definition(&cm.root_definition.id).is_none() {
            out.push(format!("model for {}", cm.root_definition.id));
        }
        for a in &cm.activities {
            if !ind(&a.performed_by.id) {
                out.push(format!("performer {}", a.performed_by.id));
            }
        }
        let refs = cm
            .flows
            .iter()
            .flat_map(|f| [&f.from, &f.to])
            .chain(cm.monitors.iter().flat_map(|m| &m.controls));
        for r in refs {
            if cm.activity(&r.id).is_none() {
                out.push(format!("activity {}", r.id));
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn generated_contexts_are_valid(seed in any::<u64>()) {
        let (ctx, _) = random_context(seed);
        prop_assert_eq!(validate_context(&ctx), vec![]);
    }

    #[test]
    fn parse_inverts_format(seed in any::<u64>()) {
        let (ctx, _) = random_context(seed);
        let text = format_ssm(&ctx);
        prop_assert_eq!(parse_ssm(&text, "fmt.ssm").unwrap(), ctx);
    }

    #[test]
    fn valid_contexts_have_no_dangling_references(seed in any::<u64>()) {
        let (ctx, _) = random_context(seed);
        prop_assert_eq!(dangling_refs(&ctx), Vec::<String>::new());
    }

    #[test]
    fn validation_is_deterministic_and_ordered(seed in any::<u64>(), which in any::<u8>()) {
        let src = break_source(&random_ssm_source(seed), which);
        let ctx = parse_ssm(&src, "broken.ssm").unwrap();
        let first = validate_context(&ctx);
        prop_assert_eq!(&first, &validate_context(&ctx.clone()));
        let positions: Vec<_> = first
            .iter()
            .map(|d| d.span.as_ref().map(|s| (s.file.clone(), s.start_line, s.start_col)))
            .collect();
        let mut sorted = positions.clone();
        sorted.sort_by(|a, b| match (a, b) {
            (Some(x), Some(y)) => x.cmp(y),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => std::cmp::Ordering::Equal,
        });
        prop_assert_eq!(positions, sorted);
    }

    #[test]
    fn broken_contexts_are_reported(seed in any::<u64>(), which in any::<u8>()) {
        let src = break_source(&random_ssm_source(seed), which);
        let ctx = parse_ssm(&src, "broken.ssm").unwrap();
        prop_assert!(!validate_context(&ctx).is_empty(), "{}", src);
    }

    #[test]
    fn errors_point_at_or_after_a_deleted_token(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let src = random_ssm_source(seed);
        let toks = tokenize(&src, &Arc::from("t")).unwrap();
        let toks: Vec<_> = toks.into_iter().filter(|t| t.tok != Tok::Eof).collect();
        let t = &toks[pick.index(toks.len())];
        let lines: Vec<&str> = src.split('\n').collect();
        let mut mutated = String::new();
        for (i, line) in lines.iter().enumerate() {
            let ln = i as u32 + 1;
            if ln == t.span.start_line {
                let chars: Vec<char> = line.chars().collect();
                let a = t.span.start_col as usize - 1;
                let b = if t.span.end_line == ln { t.span.end_col as usize - 1 } else { chars.len() };
                mutated.extend(&chars[..a]);
                mutated.extend(&chars[b..]);
            } else {
                mutated.push_str(line);
            }
            if i + 1 < lines.len() {
                mutated.push('\n');
            }
        }
        if let Err(e) = parse_ssm(&mutated, "t") {
            prop_assert!(
                e.span.start() >= t.span.start(),
                "deleted {:?} at {:?}, error at {:?}: {}", t.tok, t.span.start(), e.span.start(), e
            );
        }
    }

    #[test]
    fn parser_survives_arbitrary_bytes(bytes in proptest::collection::vec(any::<u8>(), 0..400)) {
        let _ = parse_ssm(&String::from_utf8_lossy(&bytes), "fuzz");
    }

    #[test]
    fn parser_survives_truncation(seed in any::<u64>(), cut in any::<prop::sample::Index>()) {
        let src = random_ssm_source(seed);
        let chars: Vec<char> = src.chars().collect();
        let prefix: String = chars[..cut.index(chars.len())].iter().collect();
        let _ = parse_ssm(&prefix, "cut");
    }
}

#[test]
fn case_study_is_valid_and_formats_stably() {
    let src = read_corpus("case_study.ssm");
    let ctx = parse_ssm(&src, "case_study.ssm").unwrap();
    assert_eq!(validate_context(&ctx), vec![]);
    assert_eq!(ctx.individuals.len(), 3);
    assert_eq!(ctx.root_definitions[0].environmental_constraints.len(), 2);
    let text = format_ssm(&ctx);
    assert_eq!(format_ssm(&parse_ssm(&text, "f").unwrap()), text);
}
