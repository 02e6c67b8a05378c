use std::fmt;

use serde::Serialize;

use crate::span::{Loc, SourceSpan};
use crate::sysml::ast::{ConstraintKind, Multiplicity};
use crate::sysml::expr::Expr;

/// The six CATWOE elements, in their canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CatwoeRole {
    Customer,
    Actor,
    Transformation,
    Worldview,
    Owner,
    Environment,
}

impl CatwoeRole {
    pub const ALL: [CatwoeRole; 6] = [
        CatwoeRole::Customer,
        CatwoeRole::Actor,
        CatwoeRole::Transformation,
        CatwoeRole::Worldview,
        CatwoeRole::Owner,
        CatwoeRole::Environment,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CatwoeRole::Customer => "Customer",
            CatwoeRole::Actor => "Actor",
            CatwoeRole::Transformation => "Transformation",
            CatwoeRole::Worldview => "Worldview",
            CatwoeRole::Owner => "Owner",
            CatwoeRole::Environment => "Environment",
        }
    }

    pub fn from_name(s: &str) -> Option<CatwoeRole> {
        CatwoeRole::ALL.into_iter().find(|r| r.as_str() == s)
    }
}

impl fmt::Display for CatwoeRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An identifier reference together with where it was written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ref {
    pub id: String,
    pub loc: Loc,
}

impl Ref {
    pub fn new(id: impl Into<String>) -> Self {
        Ref {
            id: id.into(),
            loc: Loc::NONE,
        }
    }

    pub fn span(&self) -> Option<&SourceSpan> {
        self.loc.span()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Individual {
    pub id: String,
    pub display_name: String,
    pub definition_type: String,
    pub loc: Loc,
}

/// `name : Type` as used for subjects, inputs and outputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub type_name: String,
    pub loc: Loc,
}

impl Param {
    pub fn new(name: impl Into<String>, type_name: impl Into<String>) -> Self {
        Param {
            name: name.into(),
            type_name: type_name.into(),
            loc: Loc::NONE,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transformation {
    pub statement: String,
    pub subject: Param,
    pub inputs: Vec<Param>,
    pub outputs: Vec<Param>,
    pub loc: Loc,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvConstraint {
    pub id: String,
    pub text: String,
    /// Defaults to `require`; only meaningful together with `expr`.
    pub kind: ConstraintKind,
    pub expr: Option<Expr>,
    pub refines: Option<Ref>,
    pub loc: Loc,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootDefinition {
    pub id: String,
    pub customers: Vec<Ref>,
    pub actors: Vec<Ref>,
    pub owner: Ref,
    pub transformation: Transformation,
    pub worldview: String,
    pub environmental_constraints: Vec<EnvConstraint>,
    pub loc: Loc,
}

impl RootDefinition {
    /// Subject, inputs and outputs, in that order.
    pub fn parameters(&self) -> impl Iterator<Item = &Param> {
        std::iter::once(&self.transformation.subject)
            .chain(&self.transformation.inputs)
            .chain(&self.transformation.outputs)
    }

    pub fn constraint(&self, id: &str) -> Option<&EnvConstraint> {
        self.environmental_constraints.iter().find(|c| c.id == id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Activity {
    pub id: String,
    pub label: String,
    pub performed_by: Ref,
    pub loc: Loc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flow {
    pub from: Ref,
    pub to: Ref,
    pub loc: Loc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonitorLink {
    pub id: String,
    pub label: String,
    pub controls: Vec<Ref>,
    pub loc: Loc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptualModel {
    pub root_definition: Ref,
    pub activities: Vec<Activity>,
    pub flows: Vec<Flow>,
    pub monitors: Vec<MonitorLink>,
    pub loc: Loc,
}

impl ConceptualModel {
    pub fn activity(&self, id: &str) -> Option<&Activity> {
        self.activities.iter().find(|a| a.id == id)
    }
}

/// `attribute name : Type [= "expr"]` inside a `part-def`.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeDecl {
    pub name: String,
    pub type_name: String,
    pub value: Option<Expr>,
    pub loc: Loc,
}

/// `ref name : Type [lo..hi]` inside a `part-def`.
#[derive(Debug, Clone, PartialEq)]
pub struct RefDecl {
    pub name: String,
    pub type_name: String,
    pub multiplicity: Option<Multiplicity>,
    pub loc: Loc,
}

/// A system element type used by subjects, inputs and outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct PartDefDecl {
    pub name: String,
    pub attributes: Vec<AttributeDecl>,
    pub refs: Vec<RefDecl>,
    pub loc: Loc,
}

impl PartDefDecl {
    pub fn feature_type(&self, name: &str) -> Option<&str> {
        self.attributes
            .iter()
            .find(|a| a.name == name)
            .map(|a| a.type_name.as_str())
            .or_else(|| self.refs.iter().find(|r| r.name == name).map(|r| r.type_name.as_str()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SsmContext {
    pub name: String,
    pub individuals: Vec<Individual>,
    pub part_defs: Vec<PartDefDecl>,
    pub root_definitions: Vec<RootDefinition>,
    pub conceptual_models: Vec<ConceptualModel>,
    pub loc: Loc,
}

impl SsmContext {
    pub fn new(name: impl Into<String>) -> Self {
        SsmContext {
            name: name.into(),
            individuals: Vec::new(),
            part_defs: Vec::new(),
            root_definitions: Vec::new(),
            conceptual_models: Vec::new(),
            loc: Loc::NONE,
        }
    }

    pub fn individual(&self, id: &str) -> Option<&Individual> {
        self.individuals.iter().find(|i| i.id == id)
    }

    pub fn part_def(&self, name: &str) -> Option<&PartDefDecl> {
        self.part_defs.iter().find(|p| p.name == name)
    }

    pub fn root_definition(&self, id: &str) -> Option<&RootDefinition> {
        self.root_definitions.iter().find(|r| r.id == id)
    }

    pub fn conceptual_model_for(&self, rd_id: &str) -> Option<&ConceptualModel> {
        self.conceptual_models.iter().find(|c| c.root_definition.id == rd_id)
    }
}
