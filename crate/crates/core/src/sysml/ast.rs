//! Typed AST for the supported SysML v2 textual subset.
//!
//! Every node is an [`Element`]: a set of fields common to declarations
//! (name, relationships, multiplicity, documentation, owned members) plus an
//! [`ElementKind`] carrying the variant-specific payload. The set of kinds is
//! closed; anything outside it is rejected by the parser.

use std::fmt;

use crate::span::Loc;

use super::expr::{Expr, Literal};
use super::lexer::is_reserved;

/// A simple or unrestricted (quoted) name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(pub String);

impl Name {
    pub fn new(s: impl Into<String>) -> Self {
        Name(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// True when the name must be written as `'...'`.
    pub fn needs_quotes(&self) -> bool {
        let mut chars = self.0.chars();
        let Some(first) = chars.next() else {
            return true;
        };
        if !(first.is_ascii_alphabetic() || first == '_') {
            return true;
        }
        if !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return true;
        }
        is_reserved(&self.0)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.needs_quotes() {
            f.write_str("'")?;
            for c in self.0.chars() {
                match c {
                    '\'' => f.write_str("\\'")?,
                    '\\' => f.write_str("\\\\")?,
                    c => write!(f, "{c}")?,
                }
            }
            f.write_str("'")
        } else {
            f.write_str(&self.0)
        }
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name(s.to_string())
    }
}

/// Dot-separated qualified name, e.g. `Context.transformationSystem.roleA`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QName(pub Vec<Name>);

impl QName {
    pub fn new(segments: Vec<Name>) -> Self {
        assert!(!segments.is_empty(), "qualified name needs a segment");
        QName(segments)
    }

    pub fn simple(name: impl Into<String>) -> Self {
        QName(vec![Name::new(name)])
    }

    /// Parses `a.b.'c d'` style paths. Returns `None` on malformed input.
    pub fn parse(text: &str) -> Option<QName> {
        super::parser::parse_qname_text(text)
    }

    pub fn segments(&self) -> &[Name] {
        &self.0
    }

    pub fn last(&self) -> &Name {
        self.0.last().expect("nonempty")
    }

    pub fn child(&self, name: impl Into<String>) -> QName {
        let mut v = self.0.clone();
        v.push(Name::new(name));
        QName(v)
    }
}

impl fmt::Display for QName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

impl From<&str> for QName {
    fn from(s: &str) -> Self {
        QName(s.split('.').map(Name::from).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationshipKind {
    /// `: T`
    Typing,
    /// `:> x`
    Subsetting,
    /// `:>> x`
    Redefinition,
    /// `= x` on non-attribute usages
    Binding,
    /// `refines x;`
    Refines,
    /// `frame x;`
    Frames,
    /// `satisfy x;`
    Satisfies,
    /// `expose x;`
    Exposes,
    /// `objective x;`
    References,
}

impl RelationshipKind {
    pub const ALL: [RelationshipKind; 9] = [
        RelationshipKind::Typing,
        RelationshipKind::Subsetting,
        RelationshipKind::Redefinition,
        RelationshipKind::Binding,
        RelationshipKind::Refines,
        RelationshipKind::Frames,
        RelationshipKind::Satisfies,
        RelationshipKind::Exposes,
        RelationshipKind::References,
    ];

    /// Written in the declaration head (before the body) rather than as a body statement.
    pub fn in_head(self) -> bool {
        matches!(
            self,
            RelationshipKind::Typing
                | RelationshipKind::Subsetting
                | RelationshipKind::Redefinition
                | RelationshipKind::Binding
        )
    }

    pub fn token(self) -> &'static str {
        match self {
            RelationshipKind::Typing => ":",
            RelationshipKind::Subsetting => ":>",
            RelationshipKind::Redefinition => ":>>",
            RelationshipKind::Binding => "=",
            RelationshipKind::Refines => "refines",
            RelationshipKind::Frames => "frame",
            RelationshipKind::Satisfies => "satisfy",
            RelationshipKind::Exposes => "expose",
            RelationshipKind::References => "objective",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relationship {
    pub kind: RelationshipKind,
    pub target: QName,
    pub loc: Loc,
}

impl Relationship {
    pub fn new(kind: RelationshipKind, target: impl Into<QName>) -> Self {
        Relationship {
            kind,
            target: target.into(),
            loc: Loc::NONE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UpperBound {
    Bounded(u64),
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Multiplicity {
    pub lower: u64,
    pub upper: UpperBound,
}

impl Multiplicity {
    pub fn new(lower: u64, upper: UpperBound) -> Self {
        Multiplicity { lower, upper }
    }

    pub fn optional() -> Self {
        Multiplicity::new(0, UpperBound::Bounded(1))
    }

    pub fn is_valid(&self) -> bool {
        match self.upper {
            UpperBound::Bounded(u) => self.lower <= u,
            UpperBound::Unbounded => true,
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.upper {
            UpperBound::Bounded(u) if u == self.lower => write!(f, "[{u}]"),
            UpperBound::Bounded(u) => write!(f, "[{}..{u}]", self.lower),
            UpperBound::Unbounded => write!(f, "[{}..*]", self.lower),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    In,
    Out,
    InOut,
}

impl Direction {
    pub fn keyword(self) -> &'static str {
        match self {
            Direction::In => "in",
            Direction::Out => "out",
            Direction::InOut => "inout",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstraintKind {
    Require,
    Assume,
    Assert,
}

impl ConstraintKind {
    pub fn keyword(self) -> &'static str {
        match self {
            ConstraintKind::Require => "require",
            ConstraintKind::Assume => "assume",
            ConstraintKind::Assert => "assert",
        }
    }
}

/// Boolean filter over elements, used by views and by queries.
#[derive(Debug, Clone, PartialEq)]
pub enum FilterExpr {
    /// `true` / `false`
    Const(bool),
    /// `@Def`: the element carries (directly or by inheritance) a metadata of `Def`.
    HasMetadata(QName),
    /// `@Def::attr == literal`
    MetadataEquals {
        definition: QName,
        attribute: Name,
        value: Literal,
    },
    /// `istype T`
    TypedBy(QName),
    /// `kind PartUsage`
    KindIs(ElementTag),
    Not(Box<FilterExpr>),
    And(Box<FilterExpr>, Box<FilterExpr>),
    Or(Box<FilterExpr>, Box<FilterExpr>),
}

impl FilterExpr {
    pub fn and(a: FilterExpr, b: FilterExpr) -> Self {
        FilterExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: FilterExpr, b: FilterExpr) -> Self {
        FilterExpr::Or(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: FilterExpr) -> Self {
        FilterExpr::Not(Box::new(a))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionBranch {
    /// `None` for the `else` branch.
    pub guard: Option<Expr>,
    pub target: QName,
}

/// The flavours of action node supported inside use cases and actions.
#[derive(Debug, Clone, PartialEq)]
pub enum ActionForm {
    /// `action a { ... }`
    Plain,
    /// `perform action a by actor { ... }`
    Perform { by: Option<QName> },
    /// `assign target := value;`
    Assign { target: QName, value: Expr },
    /// `send Signal to target;`
    Send { signal: QName, to: Option<QName> },
    /// `accept Signal;`
    Accept { signal: QName },
    /// `decide d { if guard then a; else b; }`
    Decide { branches: Vec<DecisionBranch> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum ElementKind {
    Package,
    MetadataDef,
    EnumDef { literals: Vec<Name> },
    AttributeDef,
    AttributeUsage { value: Option<Expr> },
    IndividualDef,
    IndividualOccurrence,
    PartDef,
    PartUsage,
    ItemDef,
    ItemUsage,
    RequirementDef,
    RequirementUsage,
    ConstraintExpr { kind: Option<ConstraintKind>, expr: Expr },
    ConcernDef,
    ConcernUsage,
    StakeholderUsage,
    ViewpointDef,
    ViewpointUsage,
    ViewUsage { filters: Vec<FilterExpr> },
    UseCaseDef,
    UseCaseUsage,
    ActorUsage,
    SubjectUsage,
    ActionUsage(ActionForm),
    StateUsage { entry: Option<QName>, do_action: Option<QName> },
    TransitionUsage {
        source: QName,
        target: QName,
        trigger: Option<QName>,
        guard: Option<Expr>,
        effect: Option<QName>,
    },
    Succession { first: QName, then: QName },
    Comment { text: String },
    MetadataApplication { definition: QName, bindings: Vec<(Name, Literal)> },
}

/// Payload-free discriminant of [`ElementKind`], used by filters and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementTag {
    Package,
    MetadataDef,
    EnumDef,
    AttributeDef,
    AttributeUsage,
    IndividualDef,
    IndividualOccurrence,
    PartDef,
    PartUsage,
    ItemDef,
    ItemUsage,
    RequirementDef,
    RequirementUsage,
    ConstraintExpr,
    ConcernDef,
    ConcernUsage,
    StakeholderUsage,
    ViewpointDef,
    ViewpointUsage,
    ViewUsage,
    UseCaseDef,
    UseCaseUsage,
    ActorUsage,
    SubjectUsage,
    ActionUsage,
    StateUsage,
    TransitionUsage,
    Succession,
    Comment,
    MetadataApplication,
}

impl ElementTag {
    pub const ALL: [ElementTag; 30] = [
        ElementTag::Package,
        ElementTag::MetadataDef,
        ElementTag::EnumDef,
        ElementTag::AttributeDef,
        ElementTag::AttributeUsage,
        ElementTag::IndividualDef,
        ElementTag::IndividualOccurrence,
        ElementTag::PartDef,
        ElementTag::PartUsage,
        ElementTag::ItemDef,
        ElementTag::ItemUsage,
        ElementTag::RequirementDef,
        ElementTag::RequirementUsage,
        ElementTag::ConstraintExpr,
        ElementTag::ConcernDef,
        ElementTag::ConcernUsage,
        ElementTag::StakeholderUsage,
        ElementTag::ViewpointDef,
        ElementTag::ViewpointUsage,
        ElementTag::ViewUsage,
        ElementTag::UseCaseDef,
        ElementTag::UseCaseUsage,
        ElementTag::ActorUsage,
        ElementTag::SubjectUsage,
        ElementTag::ActionUsage,
        ElementTag::StateUsage,
        ElementTag::TransitionUsage,
        ElementTag::Succession,
        ElementTag::Comment,
        ElementTag::MetadataApplication,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ElementTag::Package => "Package",
            ElementTag::MetadataDef => "MetadataDef",
            ElementTag::EnumDef => "EnumDef",
            ElementTag::AttributeDef => "AttributeDef",
            ElementTag::AttributeUsage => "AttributeUsage",
            ElementTag::IndividualDef => "IndividualDef",
            ElementTag::IndividualOccurrence => "IndividualOccurrence",
            ElementTag::PartDef => "PartDef",
            ElementTag::PartUsage => "PartUsage",
            ElementTag::ItemDef => "ItemDef",
            ElementTag::ItemUsage => "ItemUsage",
            ElementTag::RequirementDef => "RequirementDef",
            ElementTag::RequirementUsage => "RequirementUsage",
            ElementTag::ConstraintExpr => "ConstraintExpr",
            ElementTag::ConcernDef => "ConcernDef",
            ElementTag::ConcernUsage => "ConcernUsage",
            ElementTag::StakeholderUsage => "StakeholderUsage",
            ElementTag::ViewpointDef => "ViewpointDef",
            ElementTag::ViewpointUsage => "ViewpointUsage",
            ElementTag::ViewUsage => "ViewUsage",
            ElementTag::UseCaseDef => "UseCaseDef",
            ElementTag::UseCaseUsage => "UseCaseUsage",
            ElementTag::ActorUsage => "ActorUsage",
            ElementTag::SubjectUsage => "SubjectUsage",
            ElementTag::ActionUsage => "ActionUsage",
            ElementTag::StateUsage => "StateUsage",
            ElementTag::TransitionUsage => "TransitionUsage",
            ElementTag::Succession => "Succession",
            ElementTag::Comment => "Comment",
            ElementTag::MetadataApplication => "MetadataApplication",
        }
    }

    pub fn from_name(s: &str) -> Option<ElementTag> {
        ElementTag::ALL.iter().copied().find(|t| t.as_str() == s)
    }

    /// Definitions as opposed to usages. Packages are neither.
    pub fn is_definition(self) -> bool {
        matches!(
            self,
            ElementTag::MetadataDef
                | ElementTag::EnumDef
                | ElementTag::AttributeDef
                | ElementTag::IndividualDef
                | ElementTag::PartDef
                | ElementTag::ItemDef
                | ElementTag::RequirementDef
                | ElementTag::ConcernDef
                | ElementTag::ViewpointDef
                | ElementTag::UseCaseDef
        )
    }

    /// Kinds written as standalone statements: they only carry their payload
    /// (and, for some, a name), never relationships, bodies or multiplicities.
    pub fn is_statement(self) -> bool {
        matches!(
            self,
            ElementTag::TransitionUsage
                | ElementTag::Succession
                | ElementTag::Comment
                | ElementTag::MetadataApplication
        )
    }

    pub fn is_requirement(self) -> bool {
        matches!(self, ElementTag::RequirementDef | ElementTag::RequirementUsage)
    }

    pub fn is_use_case(self) -> bool {
        matches!(self, ElementTag::UseCaseDef | ElementTag::UseCaseUsage)
    }
}

impl fmt::Display for ElementTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl ElementKind {
    pub fn tag(&self) -> ElementTag {
        match self {
            ElementKind::Package => ElementTag::Package,
            ElementKind::MetadataDef => ElementTag::MetadataDef,
            ElementKind::EnumDef { .. } => ElementTag::EnumDef,
            ElementKind::AttributeDef => ElementTag::AttributeDef,
            ElementKind::AttributeUsage { .. } => ElementTag::AttributeUsage,
            ElementKind::IndividualDef => ElementTag::IndividualDef,
            ElementKind::IndividualOccurrence => ElementTag::IndividualOccurrence,
            ElementKind::PartDef => ElementTag::PartDef,
            ElementKind::PartUsage => ElementTag::PartUsage,
            ElementKind::ItemDef => ElementTag::ItemDef,
            ElementKind::ItemUsage => ElementTag::ItemUsage,
            ElementKind::RequirementDef => ElementTag::RequirementDef,
            ElementKind::RequirementUsage => ElementTag::RequirementUsage,
            ElementKind::ConstraintExpr { .. } => ElementTag::ConstraintExpr,
            ElementKind::ConcernDef => ElementTag::ConcernDef,
            ElementKind::ConcernUsage => ElementTag::ConcernUsage,
            ElementKind::StakeholderUsage => ElementTag::StakeholderUsage,
            ElementKind::ViewpointDef => ElementTag::ViewpointDef,
            ElementKind::ViewpointUsage => ElementTag::ViewpointUsage,
            ElementKind::ViewUsage { .. } => ElementTag::ViewUsage,
            ElementKind::UseCaseDef => ElementTag::UseCaseDef,
            ElementKind::UseCaseUsage => ElementTag::UseCaseUsage,
            ElementKind::ActorUsage => ElementTag::ActorUsage,
            ElementKind::SubjectUsage => ElementTag::SubjectUsage,
            ElementKind::ActionUsage(_) => ElementTag::ActionUsage,
            ElementKind::StateUsage { .. } => ElementTag::StateUsage,
            ElementKind::TransitionUsage { .. } => ElementTag::TransitionUsage,
            ElementKind::Succession { .. } => ElementTag::Succession,
            ElementKind::Comment { .. } => ElementTag::Comment,
            ElementKind::MetadataApplication { .. } => ElementTag::MetadataApplication,
        }
    }
}

/// One model element.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub kind: ElementKind,
    pub name: Option<Name>,
    pub direction: Option<Direction>,
    /// `ref part`, `ref item`, ...
    pub is_ref: bool,
    /// Head relationships (`:`, `:>`, `:>>`, `=`) come first, then body ones,
    /// each group in written order.
    pub relationships: Vec<Relationship>,
    pub multiplicity: Option<Multiplicity>,
    pub doc: Option<String>,
    pub members: Vec<Element>,
    pub loc: Loc,
}

/// The root container of a model.
pub type Package = Element;

impl Element {
    pub fn new(kind: ElementKind) -> Self {
        Element {
            kind,
            name: None,
            direction: None,
            is_ref: false,
            relationships: Vec::new(),
            multiplicity: None,
            doc: None,
            members: Vec::new(),
            loc: Loc::NONE,
        }
    }

    pub fn named(kind: ElementKind, name: impl Into<String>) -> Self {
        let mut e = Element::new(kind);
        e.name = Some(Name::new(name));
        e
    }

    pub fn package(name: impl Into<String>) -> Package {
        Element::named(ElementKind::Package, name)
    }

    pub fn tag(&self) -> ElementTag {
        self.kind.tag()
    }

    pub fn name_str(&self) -> Option<&str> {
        self.name.as_ref().map(|n| n.as_str())
    }

    // builder helpers used by the mapper and tests

    pub fn with_rel(mut self, kind: RelationshipKind, target: impl Into<QName>) -> Self {
        self.relationships.push(Relationship::new(kind, target));
        self
    }

    pub fn typed(self, target: impl Into<QName>) -> Self {
        self.with_rel(RelationshipKind::Typing, target)
    }

    pub fn subsets(self, target: impl Into<QName>) -> Self {
        self.with_rel(RelationshipKind::Subsetting, target)
    }

    pub fn with_member(mut self, member: Element) -> Self {
        self.members.push(member);
        self
    }

    pub fn with_doc(mut self, doc: impl Into<String>) -> Self {
        self.doc = Some(doc.into());
        self
    }

    pub fn with_multiplicity(mut self, m: Multiplicity) -> Self {
        self.multiplicity = Some(m);
        self
    }

    pub fn as_ref_usage(mut self) -> Self {
        self.is_ref = true;
        self
    }

    pub fn with_direction(mut self, d: Direction) -> Self {
        self.direction = Some(d);
        self
    }

    pub fn relationships_of(&self, kind: RelationshipKind) -> impl Iterator<Item = &Relationship> {
        self.relationships.iter().filter(move |r| r.kind == kind)
    }

    pub fn member_named(&self, name: &str) -> Option<&Element> {
        self.members.iter().find(|m| m.name_str() == Some(name))
    }

    /// Metadata applications owned directly by this element.
    pub fn metadata(&self) -> impl Iterator<Item = (&QName, &[(Name, Literal)])> {
        self.members.iter().filter_map(|m| match &m.kind {
            ElementKind::MetadataApplication {
                definition,
                bindings,
            } => Some((definition, bindings.as_slice())),
            _ => None,
        })
    }

    /// Constraint members carrying a require/assume/assert kind.
    pub fn kinded_constraints(&self) -> impl Iterator<Item = (ConstraintKind, &Expr)> {
        self.members.iter().filter_map(|m| match &m.kind {
            ElementKind::ConstraintExpr {
                kind: Some(k),
                expr,
            } => Some((*k, expr)),
            _ => None,
        })
    }

    /// Every qualified name this element refers to, each paired with `true`
    /// when it resolves inside the element itself and `false` when it
    /// resolves in the owner.
    pub fn references_mut(&mut self) -> Vec<(&mut QName, bool)> {
        let mut out: Vec<(&mut QName, bool)> = self
            .relationships
            .iter_mut()
            .map(|r| {
                let own = !r.kind.in_head();
                (&mut r.target, own)
            })
            .collect();
        match &mut self.kind {
            ElementKind::ActionUsage(form) => match form {
                ActionForm::Plain => {}
                ActionForm::Perform { by } => out.extend(by.iter_mut().map(|q| (q, false))),
                ActionForm::Assign { target, .. } => out.push((target, false)),
                ActionForm::Send { signal, to } => {
                    out.push((signal, false));
                    out.extend(to.iter_mut().map(|q| (q, false)));
                }
                ActionForm::Accept { signal } => out.push((signal, false)),
                ActionForm::Decide { branches } => out.extend(branches.iter_mut().map(|b| (&mut b.target, false))),
            },
            ElementKind::StateUsage { entry, do_action } => {
                out.extend(entry.iter_mut().map(|q| (q, true)));
                out.extend(do_action.iter_mut().map(|q| (q, true)));
            }
            ElementKind::TransitionUsage {
                source,
                target,
                trigger,
                effect,
                ..
            } => {
                out.push((source, false));
                out.push((target, false));
                out.extend(trigger.iter_mut().map(|q| (q, false)));
                out.extend(effect.iter_mut().map(|q| (q, false)));
            }
            ElementKind::Succession { first, then } => {
                out.push((first, false));
                out.push((then, false));
            }
            ElementKind::MetadataApplication { definition, .. } => out.push((definition, false)),
            _ => {}
        }
        out
    }

    /// Total number of elements in this subtree, including `self`.
    pub fn size(&self) -> usize {
        1 + self.members.iter().map(Element::size).sum::<usize>()
    }

    /// Clears every location in the subtree. Equality ignores locations
    /// anyway; this is for debug output comparisons.
    pub fn strip_locations(&mut self) {
        self.loc = Loc::NONE;
        for r in &mut self.relationships {
            r.loc = Loc::NONE;
        }
        for m in &mut self.members {
            m.strip_locations();
        }
    }
}

/// Builds `@Def { attr = value; ... }`.
pub fn metadata_application(definition: impl Into<QName>, bindings: Vec<(&str, Literal)>) -> Element {
    Element::new(ElementKind::MetadataApplication {
        definition: definition.into(),
        bindings: bindings
            .into_iter()
            .map(|(n, v)| (Name::new(n), v))
            .collect(),
    })
}
