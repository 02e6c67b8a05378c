//! Canonical `.ssm` formatter: 4-space indentation, LF, one declaration per line.

use std::fmt::Write as _;

use crate::sysml::ast::UpperBound;
use crate::sysml::expr::write_string_literal;

use super::model::*;

fn quoted(s: &str) -> String {
    let mut out = String::new();
    let _ = write_string_literal(&mut out, s);
    out
}

fn ids(refs: &[Ref], sep: &str) -> String {
    refs.iter().map(|r| r.id.as_str()).collect::<Vec<_>>().join(sep)
}

pub fn format_ssm(ctx: &SsmContext) -> String {
    let mut blocks: Vec<String> = Vec::new();

    if !ctx.individuals.is_empty() {
        let mut b = String::new();
        for i in &ctx.individuals {
            let _ = writeln!(
                b,
                "    individual {} : {} {}",
                i.id,
                i.definition_type,
                quoted(&i.display_name)
            );
        }
        blocks.push(b);
    }

    for pd in &ctx.part_defs {
        let mut b = String::new();
        if pd.attributes.is_empty() && pd.refs.is_empty() {
            let _ = writeln!(b, "    part-def {} {{}}", pd.name);
            blocks.push(b);
            continue;
        }
        let _ = writeln!(b, "    part-def {} {{", pd.name);
        for a in &pd.attributes {
            let _ = write!(b, "        attribute {} : {}", a.name, a.type_name);
            if let Some(v) = &a.value {
                let _ = write!(b, " = {}", quoted(&v.to_string()));
            }
            b.push('\n');
        }
        for r in &pd.refs {
            let _ = write!(b, "        ref {} : {}", r.name, r.type_name);
            if let Some(m) = &r.multiplicity {
                let upper = match m.upper {
                    UpperBound::Bounded(u) => u.to_string(),
                    UpperBound::Unbounded => "*".into(),
                };
                let _ = write!(b, " [{}..{upper}]", m.lower);
            }
            b.push('\n');
        }
        b.push_str("    }\n");
        blocks.push(b);
    }

    for rd in &ctx.root_definitions {
        let mut b = String::new();
        let _ = writeln!(b, "    root-definition {} {{", rd.id);
        let _ = writeln!(b, "        customer {}", ids(&rd.customers, " "));
        let _ = writeln!(b, "        actor {}", ids(&rd.actors, " "));
        let _ = writeln!(b, "        owner {}", rd.owner.id);
        let t = &rd.transformation;
        let _ = writeln!(b, "        transformation {} {{", quoted(&t.statement));
        let _ = writeln!(b, "            subject {} : {}", t.subject.name, t.subject.type_name);
        for p in &t.inputs {
            let _ = writeln!(b, "            input {} : {}", p.name, p.type_name);
        }
        for p in &t.outputs {
            let _ = writeln!(b, "            output {} : {}", p.name, p.type_name);
        }
        b.push_str("        }\n");
        let _ = writeln!(b, "        worldview {}", quoted(&rd.worldview));
        for ec in &rd.environmental_constraints {
            let _ = write!(b, "        environmental-constraint {} {}", ec.id, quoted(&ec.text));
            if let Some(e) = &ec.expr {
                let _ = write!(b, " {} {}", ec.kind.keyword(), quoted(&e.to_string()));
            }
            if let Some(r) = &ec.refines {
                let _ = write!(b, " refines {}", r.id);
            }
            b.push('\n');
        }
        b.push_str("    }\n");
        blocks.push(b);
    }

    for cm in &ctx.conceptual_models {
        let mut b = String::new();
        let _ = writeln!(b, "    conceptual-model {} {{", cm.root_definition.id);
        for a in &cm.activities {
            let _ = writeln!(b, "        activity {} {} by {}", a.id, quoted(&a.label), a.performed_by.id);
        }
        for f in &cm.flows {
            let _ = writeln!(b, "        flow {} -> {}", f.from.id, f.to.id);
        }
        for m in &cm.monitors {
            let _ = writeln!(b, "        monitor {} {} controls {}", m.id, quoted(&m.label), ids(&m.controls, ", "));
        }
        b.push_str("    }\n");
        blocks.push(b);
    }

    format!("context {} {{\n{}}}\n", ctx.name, blocks.join("\n"))
}
