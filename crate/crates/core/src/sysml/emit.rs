//! Canonical textual rendering of a [`Package`].
//!
//! Output is deterministic: members in stored order, fixed indentation, LF
//! line endings and a trailing newline. Parsing the output yields a package
//! equal to the input.

use std::fmt::Write as _;

use thiserror::Error;

use super::ast::*;
use super::expr::{write_string_literal, Expr, Literal};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmitConfig {
    pub indent_width: usize,
}

impl Default for EmitConfig {
    fn default() -> Self {
        EmitConfig { indent_width: 4 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmitError {
    #[error("element `{path}` cannot be written in the textual subset: {reason}")]
    Unrepresentable { path: String, reason: String },
}

pub fn emit(pkg: &Package) -> Result<String, EmitError> {
    emit_with(pkg, &EmitConfig::default())
}

pub fn emit_with(pkg: &Package, config: &EmitConfig) -> Result<String, EmitError> {
    let root = pkg.name_str().unwrap_or("#0").to_string();
    if pkg.tag() != ElementTag::Package {
        return Err(unrep(&root, "the root element must be a package"));
    }
    if pkg.direction.is_some() || pkg.is_ref {
        return Err(unrep(&root, "the root package cannot carry a direction or `ref`"));
    }
    let mut w = Writer {
        out: String::new(),
        indent: config.indent_width,
    };
    w.element(pkg, 0, &root)?;
    Ok(w.out)
}

fn unrep(path: &str, reason: &str) -> EmitError {
    EmitError::Unrepresentable {
        path: path.to_string(),
        reason: reason.to_string(),
    }
}

struct Writer {
    out: String,
    indent: usize,
}

fn check_qname(q: &QName, path: &str) -> Result<(), EmitError> {
    if q.0.is_empty() {
        return Err(unrep(path, "empty qualified name"));
    }
    Ok(())
}

fn check_literal(l: &Literal, path: &str) -> Result<(), EmitError> {
    if let Literal::Real(r) = l {
        if !r.is_finite() || r.is_sign_negative() {
            return Err(unrep(path, "real literals must be finite and non-negative"));
        }
    }
    Ok(())
}

fn check_expr(e: &Expr, path: &str) -> Result<(), EmitError> {
    match e {
        Expr::Literal(l) => check_literal(l, path),
        Expr::Path(p) if p.is_empty() => Err(unrep(path, "empty path expression")),
        Expr::Path(_) => Ok(()),
        Expr::Unary(_, e) => check_expr(e, path),
        Expr::Binary(_, l, r) => {
            check_expr(l, path)?;
            check_expr(r, path)
        }
    }
}

fn check_filter(f: &FilterExpr, path: &str) -> Result<(), EmitError> {
    match f {
        FilterExpr::Const(_) | FilterExpr::KindIs(_) => Ok(()),
        FilterExpr::HasMetadata(q) | FilterExpr::TypedBy(q) => check_qname(q, path),
        FilterExpr::MetadataEquals { definition, value, .. } => {
            check_qname(definition, path)?;
            check_literal(value, path)
        }
        FilterExpr::Not(a) => check_filter(a, path),
        FilterExpr::And(a, b) | FilterExpr::Or(a, b) => {
            check_filter(a, path)?;
            check_filter(b, path)
        }
    }
}

fn filter_prec(f: &FilterExpr) -> u8 {
    match f {
        FilterExpr::Or(..) => 1,
        FilterExpr::And(..) => 2,
        FilterExpr::Not(_) => 3,
        _ => 4,
    }
}

pub(crate) fn write_filter(out: &mut String, f: &FilterExpr) {
    let child = |out: &mut String, c: &FilterExpr, paren: bool| {
        if paren {
            out.push('(');
            write_filter(out, c);
            out.push(')');
        } else {
            write_filter(out, c);
        }
    };
    match f {
        FilterExpr::Const(b) => {
            let _ = write!(out, "{b}");
        }
        FilterExpr::HasMetadata(q) => {
            let _ = write!(out, "@{q}");
        }
        FilterExpr::MetadataEquals {
            definition,
            attribute,
            value,
        } => {
            let _ = write!(out, "@{definition}::{attribute} == {value}");
        }
        FilterExpr::TypedBy(q) => {
            let _ = write!(out, "istype {q}");
        }
        FilterExpr::KindIs(t) => {
            let _ = write!(out, "kind {t}");
        }
        FilterExpr::Not(a) => {
            out.push_str("not ");
            child(out, a, filter_prec(a) < 3);
        }
        FilterExpr::And(a, b) => {
            child(out, a, filter_prec(a) < 2);
            out.push_str(" and ");
            child(out, b, filter_prec(b) <= 2);
        }
        FilterExpr::Or(a, b) => {
            child(out, a, filter_prec(a) < 1);
            out.push_str(" or ");
            child(out, b, filter_prec(b) <= 1);
        }
    }
}

impl std::fmt::Display for FilterExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut s = String::new();
        write_filter(&mut s, self);
        f.write_str(&s)
    }
}

fn member_path(parent: &str, m: &Element, index: usize) -> String {
    match &m.name {
        Some(n) => format!("{parent}.{}", n.as_str()),
        None => format!("{parent}.#{index}"),
    }
}

/// Whether the element would be rendered on more than one line.
fn has_body(e: &Element) -> bool {
    if e.tag().is_statement() {
        return false;
    }
    if let ElementKind::ActionUsage(
        ActionForm::Assign { .. } | ActionForm::Send { .. } | ActionForm::Accept { .. },
    ) = &e.kind
    {
        return false;
    }
    if let ElementKind::ActionUsage(ActionForm::Decide { branches }) = &e.kind {
        return !branches.is_empty();
    }
    match &e.kind {
        ElementKind::ConstraintExpr { .. } => false,
        ElementKind::EnumDef { literals } => e.doc.is_some() || !literals.is_empty(),
        ElementKind::ViewUsage { filters } if !filters.is_empty() => true,
        ElementKind::StateUsage { entry, do_action } if entry.is_some() || do_action.is_some() => true,
        _ => {
            e.doc.is_some()
                || !e.members.is_empty()
                || e.relationships.iter().any(|r| !r.kind.in_head())
        }
    }
}

impl Writer {
    fn pad(&mut self, depth: usize) {
        for _ in 0..depth * self.indent {
            self.out.push(' ');
        }
    }

    fn line(&mut self, depth: usize, text: &str) {
        self.pad(depth);
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn element(&mut self, e: &Element, depth: usize, path: &str) -> Result<(), EmitError> {
        for r in &e.relationships {
            check_qname(&r.target, path)?;
        }
        let tag = e.tag();
        if tag.is_statement() || is_simple_action(e) {
            return self.statement(e, depth, path);
        }
        match &e.kind {
            ElementKind::ConstraintExpr { kind, expr } => self.constraint(e, *kind, expr, depth, path),
            ElementKind::ActionUsage(ActionForm::Decide { branches }) => {
                self.decide(e, branches, depth, path)
            }
            _ => self.declaration(e, depth, path),
        }
    }

    fn reject_decorations(&self, e: &Element, path: &str, what: &str, allow_name: bool) -> Result<(), EmitError> {
        if !allow_name && e.name.is_some() {
            return Err(unrep(path, &format!("{what} cannot be named")));
        }
        if e.direction.is_some() || e.is_ref {
            return Err(unrep(path, &format!("{what} cannot carry a direction or `ref`")));
        }
        if !e.relationships.is_empty() {
            return Err(unrep(path, &format!("{what} cannot carry relationships")));
        }
        if e.multiplicity.is_some() {
            return Err(unrep(path, &format!("{what} cannot carry a multiplicity")));
        }
        if e.doc.is_some() {
            return Err(unrep(path, &format!("{what} cannot carry documentation")));
        }
        if !e.members.is_empty() {
            return Err(unrep(path, &format!("{what} cannot own members")));
        }
        Ok(())
    }

    fn statement(&mut self, e: &Element, depth: usize, path: &str) -> Result<(), EmitError> {
        let mut s = String::new();
        match &e.kind {
            ElementKind::TransitionUsage {
                source,
                target,
                trigger,
                guard,
                effect,
            } => {
                self.reject_decorations(e, path, "a transition", true)?;
                s.push_str("transition ");
                if let Some(n) = &e.name {
                    let _ = write!(s, "{n} ");
                }
                check_qname(source, path)?;
                check_qname(target, path)?;
                let _ = write!(s, "first {source}");
                if let Some(t) = trigger {
                    check_qname(t, path)?;
                    let _ = write!(s, " accept {t}");
                }
                if let Some(g) = guard {
                    check_expr(g, path)?;
                    let _ = write!(s, " if {g}");
                }
                if let Some(d) = effect {
                    check_qname(d, path)?;
                    let _ = write!(s, " do {d}");
                }
                let _ = write!(s, " then {target};");
            }
            ElementKind::Succession { first, then } => {
                self.reject_decorations(e, path, "a succession", false)?;
                check_qname(first, path)?;
                check_qname(then, path)?;
                let _ = write!(s, "first {first} then {then};");
            }
            ElementKind::Comment { text } => {
                self.reject_decorations(e, path, "a comment", true)?;
                s.push_str("comment ");
                if let Some(n) = &e.name {
                    let _ = write!(s, "{n} ");
                }
                let _ = write_string_literal(&mut s, text);
                s.push(';');
            }
            ElementKind::MetadataApplication { definition, bindings } => {
                self.reject_decorations(e, path, "a metadata application", false)?;
                check_qname(definition, path)?;
                let _ = write!(s, "@{definition}");
                if bindings.is_empty() {
                    s.push(';');
                } else {
                    s.push_str(" {");
                    for (n, v) in bindings {
                        check_literal(v, path)?;
                        let _ = write!(s, " {n} = {v};");
                    }
                    s.push_str(" }");
                }
            }
            ElementKind::ActionUsage(ActionForm::Assign { target, value }) => {
                self.reject_decorations(e, path, "an assign action", false)?;
                check_qname(target, path)?;
                check_expr(value, path)?;
                let _ = write!(s, "assign {target} := {value};");
            }
            ElementKind::ActionUsage(ActionForm::Send { signal, to }) => {
                self.reject_decorations(e, path, "a send action", false)?;
                check_qname(signal, path)?;
                let _ = write!(s, "send {signal}");
                if let Some(t) = to {
                    check_qname(t, path)?;
                    let _ = write!(s, " to {t}");
                }
                s.push(';');
            }
            ElementKind::ActionUsage(ActionForm::Accept { signal }) => {
                self.reject_decorations(e, path, "an accept action", false)?;
                check_qname(signal, path)?;
                let _ = write!(s, "accept {signal};");
            }
            _ => unreachable!("not a statement kind"),
        }
        self.line(depth, &s);
        Ok(())
    }

    fn constraint(
        &mut self,
        e: &Element,
        kind: Option<ConstraintKind>,
        expr: &Expr,
        depth: usize,
        path: &str,
    ) -> Result<(), EmitError> {
        if e.direction.is_some() || e.is_ref || e.multiplicity.is_some() || e.doc.is_some() || !e.members.is_empty() {
            return Err(unrep(
                path,
                "a constraint carries only a name, head relationships and its expression",
            ));
        }
        let mut s = String::new();
        if let Some(k) = kind {
            let _ = write!(s, "{} ", k.keyword());
        }
        s.push_str("constraint");
        if let Some(n) = &e.name {
            let _ = write!(s, " {n}");
        }
        for r in &e.relationships {
            if !r.kind.in_head() || r.kind == RelationshipKind::Binding {
                return Err(unrep(path, "a constraint only accepts `:`, `:>` and `:>>`"));
            }
            let _ = write!(s, " {} {}", r.kind.token(), r.target);
        }
        check_expr(expr, path)?;
        let _ = write!(s, " {{ {expr} }}");
        self.line(depth, &s);
        Ok(())
    }

    fn decide(&mut self, e: &Element, branches: &[DecisionBranch], depth: usize, path: &str) -> Result<(), EmitError> {
        self.reject_decorations(e, path, "a decision", true)?;
        let mut head = String::from("decide");
        if let Some(n) = &e.name {
            let _ = write!(head, " {n}");
        }
        if branches.is_empty() {
            head.push(';');
            self.line(depth, &head);
            return Ok(());
        }
        head.push_str(" {");
        self.line(depth, &head);
        for b in branches {
            check_qname(&b.target, path)?;
            let s = match &b.guard {
                Some(g) => {
                    check_expr(g, path)?;
                    format!("if {g} then {};", b.target)
                }
                None => format!("else {};", b.target),
            };
            self.line(depth + 1, &s);
        }
        self.line(depth, "}");
        Ok(())
    }

    fn declaration(&mut self, e: &Element, depth: usize, path: &str) -> Result<(), EmitError> {
        let tag = e.tag();
        let mut s = String::new();
        if let Some(d) = e.direction {
            let _ = write!(s, "{} ", d.keyword());
        }
        if e.is_ref {
            s.push_str("ref ");
        }
        s.push_str(keyword_of(&e.kind));
        if let Some(n) = &e.name {
            let _ = write!(s, " {n}");
        }

        let mut seen_body_rel = false;
        for r in &e.relationships {
            if r.kind.in_head() {
                if seen_body_rel {
                    return Err(unrep(path, "head relationships must precede body relationships"));
                }
                if r.kind == RelationshipKind::Binding && tag == ElementTag::AttributeUsage {
                    return Err(unrep(path, "attributes bind values with `= expr`, not a binding relationship"));
                }
                let _ = write!(s, " {} {}", r.kind.token(), r.target);
            } else {
                seen_body_rel = true;
            }
        }
        if let Some(m) = &e.multiplicity {
            let _ = write!(s, " {m}");
        }
        if let ElementKind::AttributeUsage { value: Some(v) } = &e.kind {
            check_expr(v, path)?;
            let _ = write!(s, " = {v}");
        }
        if let ElementKind::ActionUsage(ActionForm::Perform { by: Some(b) }) = &e.kind {
            check_qname(b, path)?;
            let _ = write!(s, " by {b}");
        }

        if let ElementKind::EnumDef { literals } = &e.kind {
            if e.relationships.iter().any(|r| !r.kind.in_head()) || !e.members.is_empty() {
                return Err(unrep(path, "an enumeration body holds only `doc` and `enum` literals"));
            }
            if !has_body(e) {
                s.push(';');
                self.line(depth, &s);
                return Ok(());
            }
            s.push_str(" {");
            self.line(depth, &s);
            if let Some(d) = &e.doc {
                self.doc(depth + 1, d);
            }
            for l in literals {
                self.line(depth + 1, &format!("enum {l};"));
            }
            self.line(depth, "}");
            return Ok(());
        }

        if !has_body(e) {
            s.push(';');
            self.line(depth, &s);
            return Ok(());
        }
        s.push_str(" {");
        self.line(depth, &s);
        let inner = depth + 1;
        if let Some(d) = &e.doc {
            self.doc(inner, d);
        }
        if let ElementKind::StateUsage { entry, do_action } = &e.kind {
            if let Some(q) = entry {
                check_qname(q, path)?;
                self.line(inner, &format!("entry {q};"));
            }
            if let Some(q) = do_action {
                check_qname(q, path)?;
                self.line(inner, &format!("do {q};"));
            }
        }
        for r in e.relationships.iter().filter(|r| !r.kind.in_head()) {
            self.line(inner, &format!("{} {};", r.kind.token(), r.target));
        }
        if let ElementKind::ViewUsage { filters } = &e.kind {
            for f in filters {
                check_filter(f, path)?;
                let mut t = String::from("filter ");
                write_filter(&mut t, f);
                t.push(';');
                self.line(inner, &t);
            }
        }
        let spaced = tag == ElementTag::Package;
        let mut prev_multi = false;
        for (i, m) in e.members.iter().enumerate() {
            let multi = has_body(m);
            if spaced && i > 0 && (multi || prev_multi) {
                self.out.push('\n');
            }
            self.element(m, inner, &member_path(path, m, i))?;
            prev_multi = multi;
        }
        self.line(depth, "}");
        Ok(())
    }

    fn doc(&mut self, depth: usize, text: &str) {
        let mut s = String::from("doc ");
        let _ = write_string_literal(&mut s, text);
        s.push(';');
        self.line(depth, &s);
    }
}

fn is_simple_action(e: &Element) -> bool {
    matches!(
        &e.kind,
        ElementKind::ActionUsage(ActionForm::Assign { .. } | ActionForm::Send { .. } | ActionForm::Accept { .. })
    )
}

fn keyword_of(kind: &ElementKind) -> &'static str {
    match kind {
        ElementKind::Package => "package",
        ElementKind::MetadataDef => "metadata def",
        ElementKind::EnumDef { .. } => "enum def",
        ElementKind::AttributeDef => "attribute def",
        ElementKind::AttributeUsage { .. } => "attribute",
        ElementKind::IndividualDef => "individual def",
        ElementKind::IndividualOccurrence => "individual",
        ElementKind::PartDef => "part def",
        ElementKind::PartUsage => "part",
        ElementKind::ItemDef => "item def",
        ElementKind::ItemUsage => "item",
        ElementKind::RequirementDef => "requirement def",
        ElementKind::RequirementUsage => "requirement",
        ElementKind::ConcernDef => "concern def",
        ElementKind::ConcernUsage => "concern",
        ElementKind::StakeholderUsage => "stakeholder",
        ElementKind::ViewpointDef => "viewpoint def",
        ElementKind::ViewpointUsage => "viewpoint",
        ElementKind::ViewUsage { .. } => "view",
        ElementKind::UseCaseDef => "use case def",
        ElementKind::UseCaseUsage => "use case",
        ElementKind::ActorUsage => "actor",
        ElementKind::SubjectUsage => "subject",
        ElementKind::ActionUsage(ActionForm::Perform { .. }) => "perform action",
        ElementKind::ActionUsage(_) => "action",
        ElementKind::StateUsage { .. } => "state",
        ElementKind::ConstraintExpr { .. }
        | ElementKind::TransitionUsage { .. }
        | ElementKind::Succession { .. }
        | ElementKind::Comment { .. }
        | ElementKind::MetadataApplication { .. } => unreachable!("written as statements"),
    }
}

/// Renders a single expression; exposed for reports and diagnostics.
pub fn expr_text(e: &Expr) -> String {
    e.to_string()
}
