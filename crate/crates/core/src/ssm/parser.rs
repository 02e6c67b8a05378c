//! Recursive-descent parser for `.ssm` files.

use std::collections::HashSet;
use std::sync::Arc;

use crate::parse_error::ParseError;
use crate::span::{Loc, SourceSpan};
use crate::sysml::ast::{ConstraintKind, Multiplicity, UpperBound};
use crate::sysml::expr::Expr;
use crate::sysml::parser::{parse_expr_text, SysmlParseError};

use super::lexer::{is_keyword, tokenize, Tok, Token};
use super::model::*;

/// Type given to an individual declared without `: Type`.
pub const DEFAULT_INDIVIDUAL_TYPE: &str = "Person";

pub fn parse_ssm(source: &str, file_name: &str) -> Result<SsmContext, ParseError> {
    let file: Arc<str> = Arc::from(file_name);
    let toks = tokenize(source, &file)?;
    let mut p = Parser { toks, pos: 0 };
    let ctx = p.context()?;
    p.expect_eof()?;
    Ok(ctx)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn prev_span(&self) -> SourceSpan {
        self.toks[self.pos.saturating_sub(1)].span.clone()
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(&self.peek().tok, Tok::Word(x) if x == w)
    }

    fn at_sym(&self, s: &str) -> bool {
        matches!(&self.peek().tok, Tok::Sym(x) if *x == s)
    }

    fn at_ident(&self) -> bool {
        matches!(&self.peek().tok, Tok::Word(w) if !is_keyword(w))
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.at_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn err(&self, expected: &[&str]) -> ParseError {
        let t = self.peek();
        ParseError::expected(t.span.clone(), expected, t.tok.describe())
    }

    fn expect_word(&mut self, w: &str) -> Result<SourceSpan, ParseError> {
        if self.at_word(w) {
            Ok(self.bump().span)
        } else {
            Err(self.err(&[&format!("`{w}`")]))
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.err(&[&format!("`{s}`")]))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if matches!(self.peek().tok, Tok::Eof) {
            Ok(())
        } else {
            Err(self.err(&["end of input"]))
        }
    }

    fn ident(&mut self) -> Result<(String, SourceSpan), ParseError> {
        match &self.peek().tok {
            Tok::Word(w) if !is_keyword(w) => {
                let w = w.clone();
                Ok((w, self.bump().span))
            }
            _ => Err(self.err(&["identifier"])),
        }
    }

    fn reference(&mut self) -> Result<Ref, ParseError> {
        let (id, span) = self.ident()?;
        Ok(Ref { id, loc: span.into() })
    }

    fn string(&mut self) -> Result<String, ParseError> {
        match &self.peek().tok {
            Tok::Str(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.err(&["string literal"])),
        }
    }

    /// A string literal holding an expression, parsed with the SysML
    /// expression grammar. Errors are relocated into this file.
    fn expr_string(&mut self) -> Result<Expr, ParseError> {
        let tok = self.peek().clone();
        let text = self.string()?;
        parse_expr_text(&text, "<expr>").map_err(|e| {
            let inner = match e {
                SysmlParseError::Syntax(pe) => pe,
                SysmlParseError::UnsupportedConstruct { keyword, span } => ParseError::new(
                    span,
                    vec![],
                    keyword.clone(),
                    format!("`{keyword}` is not allowed in an expression"),
                ),
            };
            let (l, c) = inner.span.start();
            let (bl, bc) = tok.content_start;
            let at = if l == 1 { (bl, bc + c - 1) } else { (bl + l - 1, c) };
            ParseError::new(
                SourceSpan::new(tok.span.file.clone(), at, at),
                inner.expected,
                inner.found,
                format!("in expression: {}", inner.message),
            )
        })
    }

    fn skip_semis(&mut self) {
        while self.eat_sym(";") {}
    }

    fn context(&mut self) -> Result<SsmContext, ParseError> {
        let start = self.expect_word("context")?;
        let (name, _) = self.ident()?;
        self.expect_sym("{")?;
        let mut ctx = SsmContext::new(name);
        let mut top_ids: HashSet<String> = HashSet::new();
        let mut cm_targets: HashSet<String> = HashSet::new();
        let dup = |span: SourceSpan, id: &str| {
            ParseError::new(span, vec![], format!("`{id}`"), format!("duplicate top-level id `{id}`"))
        };
        loop {
            self.skip_semis();
            if self.eat_sym("}") {
                break;
            }
            let t = self.peek().clone();
            match &t.tok {
                Tok::Word(w) if w == "individual" => {
                    let ind = self.individual()?;
                    if !top_ids.insert(ind.id.clone()) {
                        return Err(dup(ind.loc.span().cloned().unwrap_or(t.span), &ind.id));
                    }
                    ctx.individuals.push(ind);
                }
                Tok::Word(w) if w == "part-def" => {
                    let pd = self.part_def()?;
                    if !top_ids.insert(pd.name.clone()) {
                        return Err(dup(t.span, &pd.name));
                    }
                    ctx.part_defs.push(pd);
                }
                Tok::Word(w) if w == "root-definition" => {
                    let rd = self.root_definition()?;
                    if !top_ids.insert(rd.id.clone()) {
                        return Err(dup(t.span, &rd.id));
                    }
                    ctx.root_definitions.push(rd);
                }
                Tok::Word(w) if w == "conceptual-model" => {
                    let cm = self.conceptual_model()?;
                    if !cm_targets.insert(cm.root_definition.id.clone()) {
                        return Err(ParseError::new(
                            t.span,
                            vec![],
                            format!("`{}`", cm.root_definition.id),
                            format!("duplicate conceptual model for `{}`", cm.root_definition.id),
                        ));
                    }
                    ctx.conceptual_models.push(cm);
                }
                _ => {
                    return Err(self.err(&[
                        "`individual`",
                        "`part-def`",
                        "`root-definition`",
                        "`conceptual-model`",
                        "`}`",
                    ]))
                }
            }
        }
        ctx.loc = start.to(&self.prev_span()).into();
        Ok(ctx)
    }

    fn individual(&mut self) -> Result<Individual, ParseError> {
        let start = self.expect_word("individual")?;
        let (id, _) = self.ident()?;
        let definition_type = if self.eat_sym(":") {
            self.ident()?.0
        } else if matches!(self.peek().tok, Tok::Str(_)) {
            DEFAULT_INDIVIDUAL_TYPE.to_string()
        } else {
            return Err(self.err(&["`:`", "string literal"]));
        };
        let display_name = self.string()?;
        Ok(Individual {
            id,
            display_name,
            definition_type,
            loc: start.to(&self.prev_span()).into(),
        })
    }

    fn part_def(&mut self) -> Result<PartDefDecl, ParseError> {
        let start = self.expect_word("part-def")?;
        let (name, _) = self.ident()?;
        let mut pd = PartDefDecl {
            name,
            attributes: Vec::new(),
            refs: Vec::new(),
            loc: Loc::NONE,
        };
        self.expect_sym("{")?;
        loop {
            self.skip_semis();
            if self.eat_sym("}") {
                break;
            }
            let fstart = self.peek().span.clone();
            if self.at_word("attribute") {
                self.bump();
                let (n, _) = self.ident()?;
                self.expect_sym(":")?;
                let (ty, _) = self.ident()?;
                let value = if self.eat_sym("=") { Some(self.expr_string()?) } else { None };
                pd.attributes.push(AttributeDecl {
                    name: n,
                    type_name: ty,
                    value,
                    loc: fstart.to(&self.prev_span()).into(),
                });
            } else if self.at_word("ref") {
                self.bump();
                let (n, _) = self.ident()?;
                self.expect_sym(":")?;
                let (ty, _) = self.ident()?;
                let multiplicity = if self.eat_sym("[") {
                    let lower = self.int()?;
                    self.expect_sym("..")?;
                    let upper = if self.eat_sym("*") {
                        UpperBound::Unbounded
                    } else {
                        UpperBound::Bounded(self.int()?)
                    };
                    self.expect_sym("]")?;
                    Some(Multiplicity::new(lower, upper))
                } else {
                    None
                };
                pd.refs.push(RefDecl {
                    name: n,
                    type_name: ty,
                    multiplicity,
                    loc: fstart.to(&self.prev_span()).into(),
                });
            } else {
                return Err(self.err(&["`attribute`", "`ref`", "`}`"]));
            }
        }
        pd.loc = start.to(&self.prev_span()).into();
        Ok(pd)
    }

    fn int(&mut self) -> Result<u64, ParseError> {
        match self.peek().tok {
            Tok::Int(i) => {
                self.bump();
                Ok(i)
            }
            _ => Err(self.err(&["integer"])),
        }
    }

    fn id_list(&mut self) -> Result<Vec<Ref>, ParseError> {
        let mut out = vec![self.reference()?];
        loop {
            if self.eat_sym(",") || self.at_ident() {
                out.push(self.reference()?);
            } else {
                return Ok(out);
            }
        }
    }

    fn missing(&self, what: &str, in_what: &str) -> ParseError {
        let t = &self.toks[self.pos.saturating_sub(1)];
        ParseError::new(
            t.span.clone(),
            vec![format!("`{what}`")],
            "`}`",
            format!("{in_what} is missing its `{what}` clause"),
        )
    }

    fn twice(&self, span: SourceSpan, what: &str) -> ParseError {
        ParseError::new(span, vec![], format!("`{what}`"), format!("`{what}` given more than once"))
    }

    fn root_definition(&mut self) -> Result<RootDefinition, ParseError> {
        let start = self.expect_word("root-definition")?;
        let (id, _) = self.ident()?;
        self.expect_sym("{")?;
        let mut customers: Option<Vec<Ref>> = None;
        let mut actors: Option<Vec<Ref>> = None;
        let mut owner: Option<Ref> = None;
        let mut transformation: Option<Transformation> = None;
        let mut worldview: Option<String> = None;
        let mut ecs = Vec::new();
        loop {
            self.skip_semis();
            if self.eat_sym("}") {
                break;
            }
            let kw_span = self.peek().span.clone();
            let kw = match &self.peek().tok {
                Tok::Word(w) => w.clone(),
                _ => String::new(),
            };
            match kw.as_str() {
                "customer" => {
                    self.bump();
                    let list = self.id_list()?;
                    customers.get_or_insert_with(Vec::new).extend(list);
                }
                "actor" => {
                    self.bump();
                    let list = self.id_list()?;
                    actors.get_or_insert_with(Vec::new).extend(list);
                }
                "owner" => {
                    self.bump();
                    if owner.is_some() {
                        return Err(self.twice(kw_span, "owner"));
                    }
                    owner = Some(self.reference()?);
                }
                "transformation" => {
                    if transformation.is_some() {
                        return Err(self.twice(kw_span, "transformation"));
                    }
                    transformation = Some(self.transformation()?);
                }
                "worldview" => {
                    self.bump();
                    if worldview.is_some() {
                        return Err(self.twice(kw_span, "worldview"));
                    }
                    worldview = Some(self.string()?);
                }
                "environmental-constraint" => ecs.push(self.env_constraint()?),
                _ => {
                    return Err(self.err(&[
                        "`customer`",
                        "`actor`",
                        "`owner`",
                        "`transformation`",
                        "`worldview`",
                        "`environmental-constraint`",
                        "`}`",
                    ]))
                }
            }
        }
        let what = format!("root definition `{id}`");
        Ok(RootDefinition {
            customers: customers.ok_or_else(|| self.missing("customer", &what))?,
            actors: actors.ok_or_else(|| self.missing("actor", &what))?,
            owner: owner.ok_or_else(|| self.missing("owner", &what))?,
            transformation: transformation.ok_or_else(|| self.missing("transformation", &what))?,
            worldview: worldview.ok_or_else(|| self.missing("worldview", &what))?,
            environmental_constraints: ecs,
            loc: start.to(&self.prev_span()).into(),
            id,
        })
    }

    fn param(&mut self) -> Result<Param, ParseError> {
        let (name, start) = self.ident()?;
        self.expect_sym(":")?;
        let (type_name, _) = self.ident()?;
        Ok(Param {
            name,
            type_name,
            loc: start.to(&self.prev_span()).into(),
        })
    }

    fn transformation(&mut self) -> Result<Transformation, ParseError> {
        let start = self.expect_word("transformation")?;
        let statement = self.string()?;
        self.expect_sym("{")?;
        let mut subject = None;
        let mut inputs = Vec::new();
        let mut outputs = Vec::new();
        loop {
            self.skip_semis();
            if self.eat_sym("}") {
                break;
            }
            let kw_span = self.peek().span.clone();
            if self.at_word("subject") {
                self.bump();
                if subject.is_some() {
                    return Err(self.twice(kw_span, "subject"));
                }
                subject = Some(self.param()?);
            } else if self.at_word("input") {
                self.bump();
                inputs.push(self.param()?);
            } else if self.at_word("output") {
                self.bump();
                outputs.push(self.param()?);
            } else {
                return Err(self.err(&["`subject`", "`input`", "`output`", "`}`"]));
            }
        }
        Ok(Transformation {
            subject: subject.ok_or_else(|| self.missing("subject", "transformation"))?,
            statement,
            inputs,
            outputs,
            loc: start.to(&self.prev_span()).into(),
        })
    }

    fn env_constraint(&mut self) -> Result<EnvConstraint, ParseError> {
        let start = self.expect_word("environmental-constraint")?;
        let (id, _) = self.ident()?;
        let text = self.string()?;
        let mut kind = ConstraintKind::Require;
        let mut expr = None;
        for (kw, k) in [
            ("require", ConstraintKind::Require),
            ("assume", ConstraintKind::Assume),
            ("assert", ConstraintKind::Assert),
        ] {
            if self.at_word(kw) {
                self.bump();
                kind = k;
                expr = Some(self.expr_string()?);
                break;
            }
        }
        let refines = if self.at_word("refines") {
            self.bump();
            Some(self.reference()?)
        } else {
            None
        };
        Ok(EnvConstraint {
            id,
            text,
            kind,
            expr,
            refines,
            loc: start.to(&self.prev_span()).into(),
        })
    }

    fn conceptual_model(&mut self) -> Result<ConceptualModel, ParseError> {
        let start = self.expect_word("conceptual-model")?;
        let root_definition = self.reference()?;
        self.expect_sym("{")?;
        let mut cm = ConceptualModel {
            root_definition,
            activities: Vec::new(),
            flows: Vec::new(),
            monitors: Vec::new(),
            loc: Loc::NONE,
        };
        loop {
            self.skip_semis();
            if self.eat_sym("}") {
                break;
            }
            let s = self.peek().span.clone();
            if self.at_word("activity") {
                self.bump();
                let (id, _) = self.ident()?;
                let label = self.string()?;
                self.expect_word("by")?;
                let performed_by = self.reference()?;
                cm.activities.push(Activity {
                    id,
                    label,
                    performed_by,
                    loc: s.to(&self.prev_span()).into(),
                });
            } else if self.at_word("flow") {
                self.bump();
                let from = self.reference()?;
                self.expect_sym("->")?;
                let to = self.reference()?;
                cm.flows.push(Flow {
                    from,
                    to,
                    loc: s.to(&self.prev_span()).into(),
                });
            } else if self.at_word("monitor") {
                self.bump();
                let (id, _) = self.ident()?;
                let label = self.string()?;
                self.expect_word("controls")?;
                let mut controls = vec![self.reference()?];
                while self.eat_sym(",") {
                    controls.push(self.reference()?);
                }
                cm.monitors.push(MonitorLink {
                    id,
                    label,
                    controls,
                    loc: s.to(&self.prev_span()).into(),
                });
            } else {
                return Err(self.err(&["`activity`", "`flow`", "`monitor`", "`}`"]));
            }
        }
        cm.loc = start.to(&self.prev_span()).into();
        Ok(cm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_context() {
        let c = parse_ssm("context P { }", "t.ssm").unwrap();
        assert_eq!(c, SsmContext::new("P"));
    }

    #[test]
    fn missing_display_name_expects_string() {
        let e = parse_ssm("context P { individual x }", "t.ssm").unwrap_err();
        assert!(e.expected.contains(&"string literal".to_string()), "{e}");
        assert_eq!(e.found, "`}`");
        assert_eq!(e.span.start(), (1, 26));
    }

    #[test]
    fn empty_file_is_an_error() {
        let e = parse_ssm("", "t.ssm").unwrap_err();
        assert_eq!(e.found, "end of input");
    }

    #[test]
    fn duplicate_top_level_id() {
        let src = "context P { individual a : E \"A\" part-def a { } }";
        let e = parse_ssm(src, "t.ssm").unwrap_err();
        assert!(e.message.contains("duplicate top-level id"), "{e}");
    }

    #[test]
    fn expression_error_is_located_inside_the_string() {
        let src = "context P {\n    part-def L { attribute a : Integer = \"x + \" }\n}";
        let e = parse_ssm(src, "t.ssm").unwrap_err();
        assert_eq!(e.span.start_line, 2);
        assert!(e.span.start_col > 40, "{e}");
        assert!(e.message.starts_with("in expression"));
    }

    #[test]
    fn root_definition_requires_owner() {
        let src = r#"context P {
    root-definition r {
        customer a
        actor a
        transformation "t" { subject s : S }
        worldview "w"
    }
}"#;
        let e = parse_ssm(src, "t.ssm").unwrap_err();
        assert!(e.message.contains("`owner`"), "{e}");
    }
}
