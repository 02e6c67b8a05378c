//! Filter evaluation and view rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Value};
use thiserror::Error;

use crate::sysml::ast::{ElementKind, ElementTag, FilterExpr, Name, Package, QName, RelationshipKind};
use crate::sysml::expr::Literal;
use crate::sysml::index::{ElementId, ModelIndex, Target};

use super::TraceError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FilterError {
    #[error("`{0}` does not name a metadata definition")]
    UnknownMetadataDef(String),
    #[error("`{0}` does not name a type")]
    UnknownType(String),
    #[error(transparent)]
    Unknown(#[from] TraceError),
    #[error("`{0}` is not a view")]
    NotAView(String),
}

/// A filter with every name resolved.
enum Compiled {
    Const(bool),
    Has(ElementId),
    Equals(ElementId, Name, Literal),
    Typed(Target),
    Kind(ElementTag),
    Not(Box<Compiled>),
    And(Box<Compiled>, Box<Compiled>),
    Or(Box<Compiled>, Box<Compiled>),
}

fn compile(idx: &ModelIndex<'_>, scope: ElementId, f: &FilterExpr) -> Result<Compiled, FilterError> {
    let metadata_def = |q: &QName| match idx.resolve(scope, q) {
        Some(Target::Element(d)) if idx.element(d).tag() == ElementTag::MetadataDef => Ok(d),
        _ => Err(FilterError::UnknownMetadataDef(q.to_string())),
    };
    Ok(match f {
        FilterExpr::Const(b) => Compiled::Const(*b),
        FilterExpr::HasMetadata(q) => Compiled::Has(metadata_def(q)?),
        FilterExpr::MetadataEquals {
            definition,
            attribute,
            value,
        } => Compiled::Equals(metadata_def(definition)?, attribute.clone(), value.clone()),
        FilterExpr::TypedBy(q) => {
            Compiled::Typed(idx.resolve(scope, q).ok_or_else(|| FilterError::UnknownType(q.to_string()))?)
        }
        FilterExpr::KindIs(t) => Compiled::Kind(*t),
        FilterExpr::Not(a) => Compiled::Not(Box::new(compile(idx, scope, a)?)),
        FilterExpr::And(a, b) => Compiled::And(Box::new(compile(idx, scope, a)?), Box::new(compile(idx, scope, b)?)),
        FilterExpr::Or(a, b) => Compiled::Or(Box::new(compile(idx, scope, a)?), Box::new(compile(idx, scope, b)?)),
    })
}

fn typed_by(idx: &ModelIndex<'_>, id: ElementId, target: Target) -> bool {
    match target {
        Target::Element(t) => idx.type_closure(id).contains(&t),
        Target::Builtin(_) => std::iter::once(id).chain(idx.type_closure(id)).any(|e| {
            idx.element(e)
                .relationships_of(RelationshipKind::Typing)
                .any(|r| idx.resolve_relationship(e, r) == Some(target))
        }),
    }
}

fn matches(idx: &ModelIndex<'_>, id: ElementId, f: &Compiled) -> bool {
    match f {
        Compiled::Const(b) => *b,
        Compiled::Has(d) => idx.effective_metadata(id).iter().any(|t| t.resolved == Some(*d)),
        Compiled::Equals(d, attr, v) => idx
            .effective_metadata(id)
            .iter()
            .any(|t| t.resolved == Some(*d) && t.binding(attr.as_str()) == Some(v)),
        Compiled::Typed(t) => typed_by(idx, id, *t),
        Compiled::Kind(k) => idx.element(id).tag() == *k,
        Compiled::Not(a) => !matches(idx, id, a),
        Compiled::And(a, b) => matches(idx, id, a) && matches(idx, id, b),
        Compiled::Or(a, b) => matches(idx, id, a) || matches(idx, id, b),
    }
}

/// Paths of all elements satisfying `expr`, in document order. Names in the
/// filter resolve from the package.
pub fn evaluate_filter(model: &Package, expr: &FilterExpr) -> Result<Vec<String>, FilterError> {
    let idx = ModelIndex::new(model);
    let f = compile(&idx, 0, expr)?;
    Ok(idx
        .ids()
        .filter(|&i| matches(&idx, i, &f))
        .map(|i| idx.path(i).to_string())
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViewResult {
    pub view: String,
    /// Document order.
    pub elements: Vec<String>,
    /// Header, element count, then paths grouped by element kind.
    pub report: String,
}

impl ViewResult {
    pub fn to_json(&self) -> Value {
        json!({ "query": format!("view {}", self.view), "elements": self.elements })
    }
}

fn find_view(idx: &ModelIndex<'_>, name: &str) -> Result<ElementId, FilterError> {
    let id = match idx.find(name) {
        Some(id) => id,
        None => match idx.find_by_simple_name(name).as_slice() {
            [id] => *id,
            _ => {
                let prefix = QName::parse(name)
                    .and_then(|q| idx.longest_prefix(&q))
                    .map(|(_, id)| idx.path(id).to_string())
                    .unwrap_or_default();
                return Err(TraceError::UnknownElement {
                    name: name.to_string(),
                    prefix,
                }
                .into());
            }
        },
    };
    if idx.element(id).tag() != ElementTag::ViewUsage {
        return Err(FilterError::NotAView(idx.path(id).to_string()));
    }
    Ok(id)
}

/// The union of the view's exposed subtrees, keeping the elements that pass
/// every filter of the view. `view` is a qualified name or a unique simple name.
pub fn render_view(model: &Package, view: &str) -> Result<ViewResult, FilterError> {
    let idx = ModelIndex::new(model);
    let v = find_view(&idx, view)?;
    let ElementKind::ViewUsage { filters } = &idx.element(v).kind else {
        unreachable!("find_view returns views only");
    };
    let compiled = filters
        .iter()
        .map(|f| compile(&idx, v, f))
        .collect::<Result<Vec<_>, _>>()?;
    let mut exposed = vec![false; idx.len()];
    for r in idx.element(v).relationships_of(RelationshipKind::Exposes) {
        if let Some(Target::Element(t)) = idx.resolve_relationship(v, r) {
            for s in idx.subtree(t) {
                exposed[s] = true;
            }
        }
    }
    let ids: Vec<ElementId> = idx
        .ids()
        .filter(|&i| exposed[i] && compiled.iter().all(|f| matches(&idx, i, f)))
        .collect();

    let view_path = idx.path(v).to_string();
    let mut groups: BTreeMap<ElementTag, Vec<&str>> = BTreeMap::new();
    for &i in &ids {
        groups.entry(idx.element(i).tag()).or_default().push(idx.path(i));
    }
    let mut report = format!("view {view_path}\n{} elements\n", ids.len());
    for (tag, paths) in groups {
        let _ = writeln!(report, "{}:", tag.as_str());
        for p in paths {
            let _ = writeln!(report, "  {p}");
        }
    }
    Ok(ViewResult {
        view: view_path,
        elements: ids.iter().map(|&i| idx.path(i).to_string()).collect(),
        report,
    })
}
