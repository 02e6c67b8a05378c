//! Well-formedness checks that need name resolution.
//!
//! | id      | finding                                                      |
//! |---------|--------------------------------------------------------------|
//! | AST-001 | a reference does not resolve                                 |
//! | AST-002 | two members of one owner share a name                        |
//! | AST-003 | multiplicity lower bound exceeds upper bound                 |
//! | AST-004 | relationship kind not allowed on this element                |
//! | AST-005 | typing target is not a definition                            |
//! | AST-006 | metadata application names a non-metadata definition or an undeclared attribute |
//! | AST-007 | a view filter refers to an unknown metadata definition or type |

use std::collections::HashSet;

use crate::diagnostic::Diagnostic;

use super::ast::*;
use super::index::{ElementId, ModelIndex, Target};

pub fn validate_package(pkg: &Package) -> Vec<Diagnostic> {
    let idx = ModelIndex::new(pkg);
    validate_index(&idx)
}

pub fn validate_index(idx: &ModelIndex<'_>) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for id in idx.ids() {
        check_element(idx, id, &mut out);
    }
    out.sort_by(crate::diagnostic::cmp_by_position);
    out
}

fn diag(idx: &ModelIndex<'_>, id: ElementId, rule: &str, msg: String) -> Diagnostic {
    Diagnostic::error(rule, idx.path(id), idx.element(id).loc.span().cloned(), msg)
}

fn check_element(idx: &ModelIndex<'_>, id: ElementId, out: &mut Vec<Diagnostic>) {
    let e = idx.element(id);
    let tag = e.tag();

    let mut seen = HashSet::new();
    for &c in idx.children(id) {
        if let Some(n) = &idx.element(c).name {
            if !seen.insert(n.as_str()) {
                out.push(diag(idx, c, "AST-002", format!("duplicate member name `{n}` in `{}`", idx.path(id))));
            }
        }
    }

    if let Some(m) = &e.multiplicity {
        if !m.is_valid() {
            out.push(diag(idx, id, "AST-003", format!("multiplicity {m} has lower bound above upper bound")));
        }
    }

    for r in &e.relationships {
        let allowed = match r.kind {
            RelationshipKind::Typing => tag != ElementTag::Package,
            RelationshipKind::Subsetting | RelationshipKind::Redefinition | RelationshipKind::Binding => {
                !tag.is_definition() && tag != ElementTag::Package
            }
            _ => true,
        };
        if !allowed {
            out.push(diag(
                idx,
                id,
                "AST-004",
                format!("`{}` is not allowed on a {}", r.kind.token(), tag),
            ));
            continue;
        }
        match idx.resolve_relationship(id, r) {
            None => out.push(unresolved(idx, id, &r.target)),
            Some(Target::Element(t)) if r.kind == RelationshipKind::Typing => {
                let tt = idx.element(t).tag();
                if !tt.is_definition() {
                    out.push(diag(
                        idx,
                        id,
                        "AST-005",
                        format!("`{}` is a {tt}, not a definition", r.target),
                    ));
                }
            }
            _ => {}
        }
    }

    let scope = idx.statement_scope(id);
    let mut refs: Vec<(&QName, ElementId)> = Vec::new();
    match &e.kind {
        ElementKind::ActionUsage(ActionForm::Perform { by: Some(b) }) => refs.push((b, scope)),
        ElementKind::ActionUsage(ActionForm::Assign { target, .. }) => refs.push((target, scope)),
        ElementKind::ActionUsage(ActionForm::Send { signal, to }) => {
            refs.push((signal, scope));
            if let Some(t) = to {
                refs.push((t, scope));
            }
        }
        ElementKind::ActionUsage(ActionForm::Accept { signal }) => refs.push((signal, scope)),
        ElementKind::ActionUsage(ActionForm::Decide { branches }) => {
            refs.extend(branches.iter().map(|b| (&b.target, scope)));
        }
        ElementKind::Succession { first, then } => {
            refs.push((first, scope));
            refs.push((then, scope));
        }
        ElementKind::TransitionUsage {
            source,
            target,
            trigger,
            effect,
            ..
        } => {
            refs.push((source, scope));
            refs.push((target, scope));
            refs.extend(trigger.iter().map(|t| (t, scope)));
            refs.extend(effect.iter().map(|t| (t, scope)));
        }
        ElementKind::StateUsage { entry, do_action } => {
            refs.extend(entry.iter().map(|t| (t, id)));
            refs.extend(do_action.iter().map(|t| (t, id)));
        }
        ElementKind::MetadataApplication { definition, bindings } => {
            match idx.resolve(scope, definition) {
                None => out.push(unresolved(idx, id, definition)),
                Some(Target::Builtin(_)) => out.push(diag(
                    idx,
                    id,
                    "AST-006",
                    format!("`{definition}` is not a metadata definition"),
                )),
                Some(Target::Element(d)) => {
                    let def = idx.element(d);
                    if def.tag() != ElementTag::MetadataDef {
                        out.push(diag(
                            idx,
                            id,
                            "AST-006",
                            format!("`{definition}` is a {}, not a metadata definition", def.tag()),
                        ));
                    } else {
                        for (n, _) in bindings {
                            if idx.member(d, n).is_none() {
                                out.push(diag(
                                    idx,
                                    id,
                                    "AST-006",
                                    format!("metadata `{definition}` declares no attribute `{n}`"),
                                ));
                            }
                        }
                    }
                }
            }
        }
        ElementKind::ViewUsage { filters } => {
            for f in filters {
                check_filter(idx, id, f, out);
            }
        }
        _ => {}
    }
    for (q, sc) in refs {
        if idx.resolve(sc, q).is_none() {
            out.push(unresolved(idx, id, q));
        }
    }
}

fn unresolved(idx: &ModelIndex<'_>, id: ElementId, q: &QName) -> Diagnostic {
    diag(idx, id, "AST-001", format!("cannot resolve `{q}`"))
}

fn check_filter(idx: &ModelIndex<'_>, view: ElementId, f: &FilterExpr, out: &mut Vec<Diagnostic>) {
    match f {
        FilterExpr::Const(_) | FilterExpr::KindIs(_) => {}
        FilterExpr::HasMetadata(q) | FilterExpr::MetadataEquals { definition: q, .. } => {
            let ok = matches!(
                idx.resolve(view, q),
                Some(Target::Element(d)) if idx.element(d).tag() == ElementTag::MetadataDef
            );
            if !ok {
                out.push(diag(idx, view, "AST-007", format!("filter refers to unknown metadata definition `{q}`")));
            }
        }
        FilterExpr::TypedBy(q) => {
            if idx.resolve(view, q).is_none() {
                out.push(diag(idx, view, "AST-007", format!("filter refers to unknown type `{q}`")));
            }
        }
        FilterExpr::Not(a) => check_filter(idx, view, a, out),
        FilterExpr::And(a, b) | FilterExpr::Or(a, b) => {
            check_filter(idx, view, a, out);
            check_filter(idx, view, b, out);
        }
    }
}
