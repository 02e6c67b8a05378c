//! Recursive-descent parser for the SysML v2 textual subset.
//!
//! The accepted grammar is documented in `docs/sysml-subset.md`; it is exactly
//! the language produced by [`super::emit`].

use std::sync::Arc;

use thiserror::Error;

use crate::parse_error::ParseError;
use crate::span::SourceSpan;

use super::ast::*;
use super::expr::{BinaryOp, Expr, Literal, UnaryOp};
use super::lexer::{is_reserved, tokenize, Tok, Token, UNSUPPORTED_KEYWORDS};

const MAX_DEPTH: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SysmlParseError {
    #[error("{0}")]
    Syntax(ParseError),
    #[error("{span}: error: unsupported construct `{keyword}`: it is a SysML v2 keyword outside the supported subset")]
    UnsupportedConstruct { keyword: String, span: SourceSpan },
}

impl SysmlParseError {
    pub fn span(&self) -> &SourceSpan {
        match self {
            SysmlParseError::Syntax(e) => &e.span,
            SysmlParseError::UnsupportedConstruct { span, .. } => span,
        }
    }
}

impl From<ParseError> for SysmlParseError {
    fn from(e: ParseError) -> Self {
        SysmlParseError::Syntax(e)
    }
}

type PResult<T> = Result<T, SysmlParseError>;

/// Parses a `.sysml` source holding exactly one top-level package.
pub fn parse_sysml(source: &str, file_name: &str) -> PResult<Package> {
    let file: Arc<str> = Arc::from(file_name);
    let toks = tokenize(source, &file)?;
    let mut p = Parser { toks, pos: 0, depth: 0 };
    if !p.at_word("package") {
        return Err(p.unexpected(&["`package`"]));
    }
    let pkg = p.member(ElementTag::Package)?;
    let pkg = match pkg {
        Member::Element(e) => e,
        _ => unreachable!("package keyword yields an element"),
    };
    p.expect_eof()?;
    Ok(pkg)
}

/// Parses a standalone expression (e.g. the text of an SSM constraint).
pub fn parse_expr_text(text: &str, file_name: &str) -> PResult<Expr> {
    let file: Arc<str> = Arc::from(file_name);
    let toks = tokenize(text, &file)?;
    let mut p = Parser { toks, pos: 0, depth: 0 };
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

/// Parses a standalone filter expression, e.g. `@CATWOE and kind ActionUsage`.
pub fn parse_filter_text(text: &str) -> PResult<FilterExpr> {
    let file: Arc<str> = Arc::from("<filter>");
    let toks = tokenize(text, &file)?;
    let mut p = Parser { toks, pos: 0, depth: 0 };
    let e = p.filter()?;
    p.expect_eof()?;
    Ok(e)
}

pub(crate) fn parse_qname_text(text: &str) -> Option<QName> {
    let file: Arc<str> = Arc::from("<name>");
    let toks = tokenize(text, &file).ok()?;
    let mut p = Parser { toks, pos: 0, depth: 0 };
    let q = p.qname().ok()?;
    p.expect_eof().ok()?;
    Some(q)
}

// Short-lived; boxing the element would only add an allocation per member.
#[allow(clippy::large_enum_variant)]
enum Member {
    Element(Element),
    Doc(String, SourceSpan),
    Rel(Relationship),
    Filter(FilterExpr),
    Entry(QName, SourceSpan),
    Do(QName, SourceSpan),
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    depth: usize,
}

fn decl_keywords() -> &'static str {
    "package, metadata def, enum def, attribute def, attribute, individual def, individual, \
     part def, part, ref, item def, item, requirement def, requirement, constraint, \
     require constraint, assume constraint, assert constraint, concern def, concern, \
     stakeholder, viewpoint def, viewpoint, view, expose, filter, use case def, use case, \
     subject, actor, objective, action, perform action, state, transition, accept, send, \
     assign, first, decide, doc, comment, frame, satisfy, refines, @metadata"
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(&self.peek().tok, Tok::Word(x) if x == w)
    }

    fn at_sym(&self, s: &str) -> bool {
        matches!(&self.peek().tok, Tok::Sym(x) if *x == s)
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if self.at_word(w) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.at_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, expected: &[&str]) -> SysmlParseError {
        let t = self.peek();
        ParseError::expected(t.span.clone(), expected, t.tok.describe()).into()
    }

    fn expect_word(&mut self, w: &str) -> PResult<SourceSpan> {
        if self.at_word(w) {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&[&format!("`{w}`")]))
        }
    }

    fn expect_sym(&mut self, s: &str) -> PResult<SourceSpan> {
        if self.at_sym(s) {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&[&format!("`{s}`")]))
        }
    }

    fn expect_eof(&mut self) -> PResult<()> {
        if matches!(self.peek().tok, Tok::Eof) {
            Ok(())
        } else {
            Err(self.unexpected(&["end of input"]))
        }
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            let t = self.peek();
            return Err(ParseError::new(
                t.span.clone(),
                vec![],
                t.tok.describe(),
                "nesting too deep",
            )
            .into());
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    fn at_name(&self) -> bool {
        match &self.peek().tok {
            Tok::Word(w) => !is_reserved(w),
            Tok::Quoted(_) => true,
            _ => false,
        }
    }

    fn name(&mut self) -> PResult<Name> {
        match &self.peek().tok {
            Tok::Word(w) if !is_reserved(w) => {
                let n = Name::new(w.clone());
                self.bump();
                Ok(n)
            }
            Tok::Quoted(q) => {
                let n = Name::new(q.clone());
                self.bump();
                Ok(n)
            }
            _ => Err(self.unexpected(&["name"])),
        }
    }

    fn qname(&mut self) -> PResult<QName> {
        let mut segs = vec![self.name()?];
        while self.at_sym(".") {
            self.bump();
            segs.push(self.name()?);
        }
        Ok(QName(segs))
    }

    fn qname_spanned(&mut self) -> PResult<(QName, SourceSpan)> {
        let start = self.peek().span.clone();
        let q = self.qname()?;
        let end = self.toks[self.pos.saturating_sub(1)].span.clone();
        Ok((q, start.to(&end)))
    }

    fn string(&mut self) -> PResult<String> {
        match &self.peek().tok {
            Tok::Str(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected(&["string literal"])),
        }
    }

    fn span_from(&self, start: &SourceSpan) -> SourceSpan {
        let end = &self.toks[self.pos.saturating_sub(1)].span;
        start.to(end)
    }

    // ---------------------------------------------------------------------
    // members
    // ---------------------------------------------------------------------

    fn member(&mut self, owner: ElementTag) -> PResult<Member> {
        self.enter()?;
        let r = self.member_inner(owner);
        self.leave();
        r
    }

    fn member_inner(&mut self, owner: ElementTag) -> PResult<Member> {
        let start = self.peek().span.clone();
        if self.eat_sym("@") {
            return self.metadata_application(start).map(Member::Element);
        }
        let word = match &self.peek().tok {
            Tok::Word(w) => w.clone(),
            _ => return Err(self.unexpected(&["member declaration"])),
        };
        match word.as_str() {
            "doc" => {
                self.bump();
                let text = self.string()?;
                self.expect_sym(";")?;
                Ok(Member::Doc(text, self.span_from(&start)))
            }
            "comment" => {
                self.bump();
                let name = if self.at_name() { Some(self.name()?) } else { None };
                let text = self.string()?;
                self.expect_sym(";")?;
                let mut e = Element::new(ElementKind::Comment { text });
                e.name = name;
                e.loc = self.span_from(&start).into();
                Ok(Member::Element(e))
            }
            "refines" | "frame" | "satisfy" | "expose" | "objective" => {
                self.bump();
                let kind = match word.as_str() {
                    "refines" => RelationshipKind::Refines,
                    "frame" => RelationshipKind::Frames,
                    "satisfy" => RelationshipKind::Satisfies,
                    "expose" => RelationshipKind::Exposes,
                    _ => RelationshipKind::References,
                };
                let (target, _) = self.qname_spanned()?;
                self.expect_sym(";")?;
                Ok(Member::Rel(Relationship {
                    kind,
                    target,
                    loc: self.span_from(&start).into(),
                }))
            }
            "filter" => {
                if owner != ElementTag::ViewUsage {
                    return Err(ParseError::new(
                        start,
                        vec![],
                        "`filter`",
                        "`filter` is only allowed in a view body",
                    )
                    .into());
                }
                self.bump();
                let f = self.filter()?;
                self.expect_sym(";")?;
                Ok(Member::Filter(f))
            }
            "entry" | "do" if owner == ElementTag::StateUsage => {
                self.bump();
                let q = self.qname()?;
                self.expect_sym(";")?;
                let sp = self.span_from(&start);
                Ok(if word == "entry" {
                    Member::Entry(q, sp)
                } else {
                    Member::Do(q, sp)
                })
            }
            "first" => {
                self.bump();
                let first = self.qname()?;
                self.expect_word("then")?;
                let then = self.qname()?;
                self.expect_sym(";")?;
                let mut e = Element::new(ElementKind::Succession { first, then });
                e.loc = self.span_from(&start).into();
                Ok(Member::Element(e))
            }
            "transition" => self.transition(start).map(Member::Element),
            "assign" => {
                self.bump();
                let target = self.qname()?;
                self.expect_sym(":=")?;
                let value = self.expr()?;
                self.expect_sym(";")?;
                let mut e = Element::new(ElementKind::ActionUsage(ActionForm::Assign { target, value }));
                e.loc = self.span_from(&start).into();
                Ok(Member::Element(e))
            }
            "send" => {
                self.bump();
                let signal = self.qname()?;
                let to = if self.eat_word("to") { Some(self.qname()?) } else { None };
                self.expect_sym(";")?;
                let mut e = Element::new(ElementKind::ActionUsage(ActionForm::Send { signal, to }));
                e.loc = self.span_from(&start).into();
                Ok(Member::Element(e))
            }
            "accept" => {
                self.bump();
                let signal = self.qname()?;
                self.expect_sym(";")?;
                let mut e = Element::new(ElementKind::ActionUsage(ActionForm::Accept { signal }));
                e.loc = self.span_from(&start).into();
                Ok(Member::Element(e))
            }
            "decide" => self.decide(start).map(Member::Element),
            "require" | "assume" | "assert" | "constraint" => {
                self.constraint(start).map(Member::Element)
            }
            "in" | "out" | "inout" | "ref" | "package" | "metadata" | "enum" | "attribute"
            | "individual" | "part" | "item" | "requirement" | "concern" | "stakeholder"
            | "viewpoint" | "view" | "use" | "actor" | "subject" | "action" | "perform"
            | "state" => self.declaration(start).map(Member::Element),
            w if UNSUPPORTED_KEYWORDS.contains(&w) => Err(SysmlParseError::UnsupportedConstruct {
                keyword: w.to_string(),
                span: start,
            }),
            w => Err(ParseError::new(
                start,
                vec!["member declaration".into()],
                format!("`{w}`"),
                format!("unknown keyword `{w}`; the supported subset is: {}", decl_keywords()),
            )
            .into()),
        }
    }

    fn metadata_application(&mut self, start: SourceSpan) -> PResult<Element> {
        let definition = self.qname()?;
        let mut bindings = Vec::new();
        if !self.eat_sym(";") {
            self.expect_sym("{")?;
            while !self.eat_sym("}") {
                let n = self.name()?;
                self.expect_sym("=")?;
                let v = self.literal()?;
                self.expect_sym(";")?;
                bindings.push((n, v));
            }
        }
        let mut e = Element::new(ElementKind::MetadataApplication { definition, bindings });
        e.loc = self.span_from(&start).into();
        Ok(e)
    }

    fn transition(&mut self, start: SourceSpan) -> PResult<Element> {
        self.expect_word("transition")?;
        let name = if self.at_name() { Some(self.name()?) } else { None };
        self.expect_word("first")?;
        let source = self.qname()?;
        let trigger = if self.eat_word("accept") { Some(self.qname()?) } else { None };
        let guard = if self.eat_word("if") { Some(self.expr()?) } else { None };
        let effect = if self.eat_word("do") { Some(self.qname()?) } else { None };
        self.expect_word("then")?;
        let target = self.qname()?;
        self.expect_sym(";")?;
        let mut e = Element::new(ElementKind::TransitionUsage {
            source,
            target,
            trigger,
            guard,
            effect,
        });
        e.name = name;
        e.loc = self.span_from(&start).into();
        Ok(e)
    }

    fn decide(&mut self, start: SourceSpan) -> PResult<Element> {
        self.expect_word("decide")?;
        let name = if self.at_name() { Some(self.name()?) } else { None };
        let mut branches = Vec::new();
        if !self.eat_sym(";") {
            self.expect_sym("{")?;
            loop {
                if self.eat_sym("}") {
                    break;
                }
                if self.eat_word("if") {
                    let guard = self.expr()?;
                    self.expect_word("then")?;
                    let target = self.qname()?;
                    self.expect_sym(";")?;
                    branches.push(DecisionBranch {
                        guard: Some(guard),
                        target,
                    });
                } else if self.eat_word("else") {
                    let target = self.qname()?;
                    self.expect_sym(";")?;
                    branches.push(DecisionBranch { guard: None, target });
                } else {
                    return Err(self.unexpected(&["`if`", "`else`", "`}`"]));
                }
            }
        }
        let mut e = Element::new(ElementKind::ActionUsage(ActionForm::Decide { branches }));
        e.name = name;
        e.loc = self.span_from(&start).into();
        Ok(e)
    }

    fn constraint(&mut self, start: SourceSpan) -> PResult<Element> {
        let kind = if self.eat_word("require") {
            Some(ConstraintKind::Require)
        } else if self.eat_word("assume") {
            Some(ConstraintKind::Assume)
        } else if self.eat_word("assert") {
            Some(ConstraintKind::Assert)
        } else {
            None
        };
        self.expect_word("constraint")?;
        let name = if self.at_name() { Some(self.name()?) } else { None };
        let rels = self.head_relationships(false)?;
        self.expect_sym("{")?;
        let expr = self.expr()?;
        self.expect_sym("}")?;
        let mut e = Element::new(ElementKind::ConstraintExpr { kind, expr });
        e.name = name;
        e.relationships = rels;
        e.loc = self.span_from(&start).into();
        Ok(e)
    }

    fn head_relationships(&mut self, allow_binding: bool) -> PResult<Vec<Relationship>> {
        let mut rels = Vec::new();
        loop {
            let start = self.peek().span.clone();
            let kind = if self.at_sym(":>>") {
                RelationshipKind::Redefinition
            } else if self.at_sym(":>") {
                RelationshipKind::Subsetting
            } else if self.at_sym(":") {
                RelationshipKind::Typing
            } else if allow_binding && self.at_sym("=") {
                RelationshipKind::Binding
            } else {
                break;
            };
            self.bump();
            let target = self.qname()?;
            rels.push(Relationship {
                kind,
                target,
                loc: self.span_from(&start).into(),
            });
        }
        Ok(rels)
    }

    fn multiplicity(&mut self) -> PResult<Multiplicity> {
        self.expect_sym("[")?;
        let bound = |p: &mut Parser| -> PResult<UpperBound> {
            if p.eat_sym("*") {
                return Ok(UpperBound::Unbounded);
            }
            match p.peek().tok {
                Tok::Int(i) => {
                    p.bump();
                    Ok(UpperBound::Bounded(i))
                }
                _ => Err(p.unexpected(&["integer", "`*`"])),
            }
        };
        let first = bound(self)?;
        let m = if self.eat_sym("..") {
            let lower = match first {
                UpperBound::Bounded(l) => l,
                UpperBound::Unbounded => {
                    return Err(self.unexpected(&["integer lower bound"]));
                }
            };
            Multiplicity::new(lower, bound(self)?)
        } else {
            match first {
                UpperBound::Bounded(n) => Multiplicity::new(n, UpperBound::Bounded(n)),
                UpperBound::Unbounded => Multiplicity::new(0, UpperBound::Unbounded),
            }
        };
        self.expect_sym("]")?;
        Ok(m)
    }

    fn declaration(&mut self, start: SourceSpan) -> PResult<Element> {
        let direction = if self.eat_word("in") {
            Some(Direction::In)
        } else if self.eat_word("out") {
            Some(Direction::Out)
        } else if self.eat_word("inout") {
            Some(Direction::InOut)
        } else {
            None
        };
        let is_ref = self.eat_word("ref");

        let kw = match &self.peek().tok {
            Tok::Word(w) => w.clone(),
            _ => return Err(self.unexpected(&["declaration keyword"])),
        };
        let kw_span = self.peek().span.clone();
        self.bump();
        let has_def = |p: &mut Parser| p.eat_word("def");
        let kind = match kw.as_str() {
            "package" => ElementKind::Package,
            "metadata" => {
                self.expect_word("def")?;
                ElementKind::MetadataDef
            }
            "enum" => {
                self.expect_word("def")?;
                ElementKind::EnumDef { literals: vec![] }
            }
            "attribute" => {
                if has_def(self) {
                    ElementKind::AttributeDef
                } else {
                    ElementKind::AttributeUsage { value: None }
                }
            }
            "individual" => {
                if has_def(self) {
                    ElementKind::IndividualDef
                } else {
                    ElementKind::IndividualOccurrence
                }
            }
            "part" => {
                if has_def(self) {
                    ElementKind::PartDef
                } else {
                    ElementKind::PartUsage
                }
            }
            "item" => {
                if has_def(self) {
                    ElementKind::ItemDef
                } else {
                    ElementKind::ItemUsage
                }
            }
            "requirement" => {
                if has_def(self) {
                    ElementKind::RequirementDef
                } else {
                    ElementKind::RequirementUsage
                }
            }
            "concern" => {
                if has_def(self) {
                    ElementKind::ConcernDef
                } else {
                    ElementKind::ConcernUsage
                }
            }
            "viewpoint" => {
                if has_def(self) {
                    ElementKind::ViewpointDef
                } else {
                    ElementKind::ViewpointUsage
                }
            }
            "view" => {
                if self.at_word("def") {
                    return Err(SysmlParseError::UnsupportedConstruct {
                        keyword: "view def".into(),
                        span: self.peek().span.clone(),
                    });
                }
                ElementKind::ViewUsage { filters: vec![] }
            }
            "use" => {
                self.expect_word("case")?;
                if has_def(self) {
                    ElementKind::UseCaseDef
                } else {
                    ElementKind::UseCaseUsage
                }
            }
            "stakeholder" => ElementKind::StakeholderUsage,
            "actor" => ElementKind::ActorUsage,
            "subject" => ElementKind::SubjectUsage,
            "action" => ElementKind::ActionUsage(ActionForm::Plain),
            "perform" => {
                self.expect_word("action")?;
                ElementKind::ActionUsage(ActionForm::Perform { by: None })
            }
            "state" => ElementKind::StateUsage {
                entry: None,
                do_action: None,
            },
            other if UNSUPPORTED_KEYWORDS.contains(&other) => {
                return Err(SysmlParseError::UnsupportedConstruct {
                    keyword: other.to_string(),
                    span: kw_span,
                })
            }
            _ => {
                return Err(ParseError::expected(kw_span, &["declaration keyword"], format!("`{kw}`")).into())
            }
        };

        let tag = kind.tag();
        let mut e = Element::new(kind);
        e.direction = direction;
        e.is_ref = is_ref;
        if self.at_name() {
            e.name = Some(self.name()?);
        }
        let is_attr = tag == ElementTag::AttributeUsage;
        e.relationships = self.head_relationships(!is_attr)?;
        if self.at_sym("[") {
            e.multiplicity = Some(self.multiplicity()?);
        }
        if is_attr && self.eat_sym("=") {
            let v = self.expr()?;
            e.kind = ElementKind::AttributeUsage { value: Some(v) };
        }
        if let ElementKind::ActionUsage(ActionForm::Perform { by }) = &mut e.kind {
            if self.eat_word("by") {
                *by = Some(self.qname()?);
            }
        }

        if self.eat_sym(";") {
            e.loc = self.span_from(&start).into();
            return Ok(e);
        }
        self.expect_sym("{")?;
        if tag == ElementTag::EnumDef {
            self.enum_body(&mut e)?;
        } else {
            self.body(&mut e)?;
        }
        e.loc = self.span_from(&start).into();
        Ok(e)
    }

    fn enum_body(&mut self, e: &mut Element) -> PResult<()> {
        let mut literals = Vec::new();
        loop {
            if self.eat_sym("}") {
                break;
            }
            if self.at_word("doc") {
                let start = self.bump().span;
                let text = self.string()?;
                self.expect_sym(";")?;
                set_doc(e, text, self.span_from(&start))?;
                continue;
            }
            if !self.eat_word("enum") {
                return Err(self.unexpected(&["`enum`", "`doc`", "`}`"]));
            }
            literals.push(self.name()?);
            self.expect_sym(";")?;
        }
        e.kind = ElementKind::EnumDef { literals };
        Ok(())
    }

    fn body(&mut self, e: &mut Element) -> PResult<()> {
        let owner = e.tag();
        let mut body_rels = Vec::new();
        loop {
            if self.eat_sym("}") {
                break;
            }
            if matches!(self.peek().tok, Tok::Eof) {
                return Err(self.unexpected(&["`}`"]));
            }
            match self.member(owner)? {
                Member::Element(m) => e.members.push(m),
                Member::Doc(text, sp) => set_doc(e, text, sp)?,
                Member::Rel(r) => body_rels.push(r),
                Member::Filter(f) => {
                    if let ElementKind::ViewUsage { filters } = &mut e.kind {
                        filters.push(f);
                    }
                }
                Member::Entry(q, sp) => set_state_slot(e, true, q, sp)?,
                Member::Do(q, sp) => set_state_slot(e, false, q, sp)?,
            }
        }
        e.relationships.extend(body_rels);
        Ok(())
    }

    // ---------------------------------------------------------------------
    // expressions
    // ---------------------------------------------------------------------

    pub(crate) fn expr(&mut self) -> PResult<Expr> {
        self.enter()?;
        let r = self.expr_or();
        self.leave();
        r
    }

    fn expr_or(&mut self) -> PResult<Expr> {
        let mut l = self.expr_and()?;
        while self.eat_word("or") {
            let r = self.expr_and()?;
            l = Expr::binary(BinaryOp::Or, l, r);
        }
        Ok(l)
    }

    fn expr_and(&mut self) -> PResult<Expr> {
        let mut l = self.expr_not()?;
        while self.eat_word("and") {
            let r = self.expr_not()?;
            l = Expr::binary(BinaryOp::And, l, r);
        }
        Ok(l)
    }

    fn expr_not(&mut self) -> PResult<Expr> {
        if self.eat_word("not") {
            self.enter()?;
            let e = self.expr_not();
            self.leave();
            return Ok(Expr::Unary(UnaryOp::Not, Box::new(e?)));
        }
        self.expr_cmp()
    }

    fn expr_cmp(&mut self) -> PResult<Expr> {
        let mut l = self.expr_add()?;
        loop {
            let op = match &self.peek().tok {
                Tok::Sym("==") => BinaryOp::Eq,
                Tok::Sym("!=") => BinaryOp::Ne,
                Tok::Sym("<") => BinaryOp::Lt,
                Tok::Sym("<=") => BinaryOp::Le,
                Tok::Sym(">") => BinaryOp::Gt,
                Tok::Sym(">=") => BinaryOp::Ge,
                _ => break,
            };
            self.bump();
            let r = self.expr_add()?;
            l = Expr::binary(op, l, r);
        }
        Ok(l)
    }

    fn expr_add(&mut self) -> PResult<Expr> {
        let mut l = self.expr_mul()?;
        loop {
            let op = match &self.peek().tok {
                Tok::Sym("+") => BinaryOp::Add,
                Tok::Sym("-") => BinaryOp::Sub,
                _ => break,
            };
            self.bump();
            let r = self.expr_mul()?;
            l = Expr::binary(op, l, r);
        }
        Ok(l)
    }

    fn expr_mul(&mut self) -> PResult<Expr> {
        let mut l = self.expr_unary()?;
        loop {
            let op = match &self.peek().tok {
                Tok::Sym("*") => BinaryOp::Mul,
                Tok::Sym("/") => BinaryOp::Div,
                _ => break,
            };
            self.bump();
            let r = self.expr_unary()?;
            l = Expr::binary(op, l, r);
        }
        Ok(l)
    }

    fn expr_unary(&mut self) -> PResult<Expr> {
        if self.eat_sym("-") {
            self.enter()?;
            let e = self.expr_unary();
            self.leave();
            return Ok(Expr::Unary(UnaryOp::Neg, Box::new(e?)));
        }
        self.expr_primary()
    }

    fn expr_primary(&mut self) -> PResult<Expr> {
        if self.eat_sym("(") {
            let e = self.expr()?;
            self.expect_sym(")")?;
            return Ok(e);
        }
        match &self.peek().tok {
            Tok::Int(_) | Tok::Real(_) | Tok::Str(_) => self.literal().map(Expr::Literal),
            Tok::Word(w) if w == "true" || w == "false" => self.literal().map(Expr::Literal),
            _ if self.at_name() => {
                if matches!(self.peek_at(1), Tok::Sym("::")) {
                    return self.literal().map(Expr::Literal);
                }
                let mut segs = vec![self.name()?];
                while self.eat_sym(".") {
                    segs.push(self.name()?);
                }
                Ok(Expr::Path(segs))
            }
            _ => Err(self.unexpected(&["expression"])),
        }
    }

    fn literal(&mut self) -> PResult<Literal> {
        let lit = match &self.peek().tok {
            Tok::Int(i) => Literal::Int(*i),
            Tok::Real(r) => Literal::Real(*r),
            Tok::Str(s) => Literal::String(s.clone()),
            Tok::Word(w) if w == "true" => Literal::Bool(true),
            Tok::Word(w) if w == "false" => Literal::Bool(false),
            _ if self.at_name() => {
                let ty = self.name()?;
                self.expect_sym("::")?;
                let literal = self.name()?;
                return Ok(Literal::Enum { ty, literal });
            }
            _ => return Err(self.unexpected(&["literal"])),
        };
        self.bump();
        Ok(lit)
    }

    // ---------------------------------------------------------------------
    // filters
    // ---------------------------------------------------------------------

    fn filter(&mut self) -> PResult<FilterExpr> {
        self.enter()?;
        let r = self.filter_or();
        self.leave();
        r
    }

    fn filter_or(&mut self) -> PResult<FilterExpr> {
        let mut l = self.filter_and()?;
        while self.eat_word("or") {
            let r = self.filter_and()?;
            l = FilterExpr::or(l, r);
        }
        Ok(l)
    }

    fn filter_and(&mut self) -> PResult<FilterExpr> {
        let mut l = self.filter_not()?;
        while self.eat_word("and") {
            let r = self.filter_not()?;
            l = FilterExpr::and(l, r);
        }
        Ok(l)
    }

    fn filter_not(&mut self) -> PResult<FilterExpr> {
        if self.eat_word("not") {
            self.enter()?;
            let f = self.filter_not();
            self.leave();
            return Ok(FilterExpr::not(f?));
        }
        self.filter_atom()
    }

    fn filter_atom(&mut self) -> PResult<FilterExpr> {
        if self.eat_sym("(") {
            let f = self.filter()?;
            self.expect_sym(")")?;
            return Ok(f);
        }
        if self.eat_word("true") {
            return Ok(FilterExpr::Const(true));
        }
        if self.eat_word("false") {
            return Ok(FilterExpr::Const(false));
        }
        if self.eat_word("istype") {
            return Ok(FilterExpr::TypedBy(self.qname()?));
        }
        if self.eat_word("kind") {
            let t = self.peek().clone();
            let Tok::Word(w) = &t.tok else {
                return Err(self.unexpected(&["element kind"]));
            };
            let Some(tag) = ElementTag::from_name(w) else {
                return Err(self.unexpected(&["element kind"]));
            };
            self.bump();
            return Ok(FilterExpr::KindIs(tag));
        }
        if self.eat_sym("@") {
            let definition = self.qname()?;
            if self.eat_sym("::") {
                let attribute = self.name()?;
                self.expect_sym("==")?;
                let value = self.literal()?;
                return Ok(FilterExpr::MetadataEquals {
                    definition,
                    attribute,
                    value,
                });
            }
            return Ok(FilterExpr::HasMetadata(definition));
        }
        Err(self.unexpected(&["`@`", "`istype`", "`kind`", "`not`", "`(`", "`true`", "`false`"]))
    }
}

fn set_doc(e: &mut Element, text: String, span: SourceSpan) -> PResult<()> {
    if e.doc.is_some() {
        return Err(ParseError::new(span, vec![], "`doc`", "element has more than one `doc`").into());
    }
    e.doc = Some(text);
    Ok(())
}

fn set_state_slot(e: &mut Element, is_entry: bool, q: QName, span: SourceSpan) -> PResult<()> {
    if let ElementKind::StateUsage { entry, do_action } = &mut e.kind {
        let slot = if is_entry { entry } else { do_action };
        if slot.is_some() {
            let kw = if is_entry { "`entry`" } else { "`do`" };
            return Err(ParseError::new(span, vec![], kw, "state declares this behaviour twice").into());
        }
        *slot = Some(q);
    }
    Ok(())
}
