//! Traceability graph over a model, reachability queries, filters and views.
//!
//! An edge `a -> b` reads "a contributes to b": a definition to its usages,
//! a general feature to the one subsetting or redefining it, a framing
//! requirement or viewpoint to its concern, a view to the viewpoint it
//! satisfies, an exposed element to its view, a use case to its objective
//! requirement, an actor to what it performs, a subject or stakeholder to its
//! owner, and a refining requirement to the refined one.

mod filter;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::sysml::ast::{ActionForm, ElementKind, ElementTag, Package, QName, RelationshipKind};
use crate::sysml::index::{ModelIndex, Target};

pub use filter::{evaluate_filter, render_view, FilterError, ViewResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    Frames,
    Satisfies,
    Subsets,
    Redefines,
    TypedBy,
    ObjectiveOf,
    Performs,
    SubjectOf,
    Refines,
    Exposes,
    Binds,
    StakeholderOf,
}

impl EdgeKind {
    pub const ALL: [EdgeKind; 12] = [
        EdgeKind::Frames,
        EdgeKind::Satisfies,
        EdgeKind::Subsets,
        EdgeKind::Redefines,
        EdgeKind::TypedBy,
        EdgeKind::ObjectiveOf,
        EdgeKind::Performs,
        EdgeKind::SubjectOf,
        EdgeKind::Refines,
        EdgeKind::Exposes,
        EdgeKind::Binds,
        EdgeKind::StakeholderOf,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::Frames => "frames",
            EdgeKind::Satisfies => "satisfies",
            EdgeKind::Subsets => "subsets",
            EdgeKind::Redefines => "redefines",
            EdgeKind::TypedBy => "typedBy",
            EdgeKind::ObjectiveOf => "objectiveOf",
            EdgeKind::Performs => "performs",
            EdgeKind::SubjectOf => "subjectOf",
            EdgeKind::Refines => "refines",
            EdgeKind::Exposes => "exposes",
            EdgeKind::Binds => "binds",
            EdgeKind::StakeholderOf => "stakeholderOf",
        }
    }

    pub fn from_name(s: &str) -> Option<EdgeKind> {
        EdgeKind::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("unknown element `{name}`; longest resolvable prefix is `{prefix}`")]
    UnknownElement { name: String, prefix: String },
}

/// Nodes are element paths in document order; edges follow the order in
/// which relationships appear in the model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceGraph {
    nodes: Vec<String>,
    edges: Vec<Edge>,
    forward: Vec<Vec<usize>>,
    backward: Vec<Vec<usize>>,
    by_path: HashMap<String, usize>,
}

impl TraceGraph {
    /// Panics if an edge endpoint is out of range.
    pub fn from_parts(nodes: Vec<String>, edges: Vec<Edge>) -> Self {
        let mut forward = vec![Vec::new(); nodes.len()];
        let mut backward = vec![Vec::new(); nodes.len()];
        for (i, e) in edges.iter().enumerate() {
            assert!(e.from < nodes.len() && e.to < nodes.len(), "edge {e:?} out of range");
            forward[e.from].push(i);
            backward[e.to].push(i);
        }
        let by_path = nodes.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        TraceGraph {
            nodes,
            edges,
            forward,
            backward,
            by_path,
        }
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node(&self, path: &str) -> Option<usize> {
        self.by_path.get(path).copied()
    }

    /// Edges as `(from path, to path, kind)`, for comparing graphs.
    pub fn labelled_edges(&self) -> Vec<(&str, &str, EdgeKind)> {
        self.edges
            .iter()
            .map(|e| (self.nodes[e.from].as_str(), self.nodes[e.to].as_str(), e.kind))
            .collect()
    }

    fn unknown(&self, name: &str) -> TraceError {
        let mut prefix = String::new();
        if let Some(q) = QName::parse(name) {
            let segs = q.segments();
            for n in 1..=segs.len() {
                let cand = QName(segs[..n].to_vec()).to_string();
                if self.by_path.contains_key(&cand) {
                    prefix = cand;
                } else {
                    break;
                }
            }
        }
        TraceError::UnknownElement {
            name: name.to_string(),
            prefix,
        }
    }
}

pub fn build_graph(model: &Package) -> TraceGraph {
    let idx = ModelIndex::new(model);
    let nodes = idx.ids().map(|i| idx.path(i).to_string()).collect();
    TraceGraph::from_parts(nodes, model_edges(&idx))
}

fn model_edges(idx: &ModelIndex<'_>) -> Vec<Edge> {
    let mut edges = Vec::new();
    let mut push = |from, to, kind| edges.push(Edge { from, to, kind });
    for id in idx.ids() {
        let e = idx.element(id);
        for r in &e.relationships {
            let Some(Target::Element(t)) = idx.resolve_relationship(id, r) else {
                continue;
            };
            match r.kind {
                RelationshipKind::Typing => push(t, id, EdgeKind::TypedBy),
                RelationshipKind::Subsetting => push(t, id, EdgeKind::Subsets),
                RelationshipKind::Redefinition => push(t, id, EdgeKind::Redefines),
                RelationshipKind::Binding => push(t, id, EdgeKind::Binds),
                RelationshipKind::Frames => push(id, t, EdgeKind::Frames),
                RelationshipKind::Satisfies => push(id, t, EdgeKind::Satisfies),
                RelationshipKind::Refines => push(id, t, EdgeKind::Refines),
                RelationshipKind::Exposes => push(t, id, EdgeKind::Exposes),
                RelationshipKind::References => push(id, t, EdgeKind::ObjectiveOf),
            }
        }
        if let ElementKind::ActionUsage(ActionForm::Perform { by: Some(by) }) = &e.kind {
            if let Some(Target::Element(actor)) = idx.resolve(idx.statement_scope(id), by) {
                push(actor, id, EdgeKind::Performs);
            }
        }
        let Some(parent) = idx.parent(id) else {
            continue;
        };
        let parent_tag = idx.element(parent).tag();
        match e.tag() {
            ElementTag::SubjectUsage => push(id, parent, EdgeKind::SubjectOf),
            ElementTag::StakeholderUsage => push(id, parent, EdgeKind::StakeholderOf),
            ElementTag::ActorUsage if matches!(parent_tag, ElementTag::UseCaseUsage | ElementTag::UseCaseDef) => {
                push(id, parent, EdgeKind::Performs)
            }
            _ => {}
        }
    }
    edges
}

/// Paths reachable from `from` along edges of the permitted kinds (all
/// kinds when `kinds` is `None`), including `from`, in node order.
pub fn reach(
    graph: &TraceGraph,
    from: &str,
    direction: Direction,
    kinds: Option<&BTreeSet<EdgeKind>>,
) -> Result<Vec<String>, TraceError> {
    let start = graph.node(from).ok_or_else(|| graph.unknown(from))?;
    let mut seen = vec![false; graph.nodes.len()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(n) = queue.pop_front() {
        let adjacent = match direction {
            Direction::Forward => &graph.forward[n],
            Direction::Backward => &graph.backward[n],
        };
        for &ei in adjacent {
            let e = graph.edges[ei];
            if kinds.is_some_and(|k| !k.contains(&e.kind)) {
                continue;
            }
            let next = match direction {
                Direction::Forward => e.to,
                Direction::Backward => e.from,
            };
            if !seen[next] {
                seen[next] = true;
                queue.push_back(next);
            }
        }
    }
    Ok(graph
        .nodes
        .iter()
        .zip(seen)
        .filter(|(_, s)| *s)
        .map(|(p, _)| p.clone())
        .collect())
}

/// `{query, elements:[...]}`
pub fn query_json(query: &str, elements: &[String]) -> Value {
    json!({ "query": query, "elements": elements })
}
