//! Flattened, read-only view of a package with name resolution.
//!
//! Elements are numbered in pre-order (document order); id `0` is the root
//! package. Names resolve lexically, innermost scope first, where a scope's
//! visible names are its own named members plus those it inherits through
//! `:`, `:>` and `:>>`. A path whose first segment is the root package name
//! is absolute. The scalar types `String`, `Boolean`, `Integer`, `Real` and
//! `Natural` are always visible.

use std::collections::HashMap;

use super::ast::*;
use super::expr::Literal;

pub type ElementId = usize;

pub const BUILTIN_TYPES: &[&str] = &["String", "Boolean", "Integer", "Real", "Natural"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    Element(ElementId),
    Builtin(&'static str),
}

impl Target {
    pub fn element(self) -> Option<ElementId> {
        match self {
            Target::Element(id) => Some(id),
            Target::Builtin(_) => None,
        }
    }
}

/// A metadata application visible on an element, directly or by typing.
#[derive(Debug, Clone, Copy)]
pub struct MetaTag<'a> {
    pub definition: &'a QName,
    pub resolved: Option<ElementId>,
    pub bindings: &'a [(Name, Literal)],
    /// The element that owns the application.
    pub owner: ElementId,
}

impl MetaTag<'_> {
    pub fn binding(&self, attr: &str) -> Option<&Literal> {
        self.bindings.iter().find(|(n, _)| n.as_str() == attr).map(|(_, v)| v)
    }
}

struct Node<'a> {
    element: &'a Element,
    parent: Option<ElementId>,
    children: Vec<ElementId>,
    path: String,
}

pub struct ModelIndex<'a> {
    nodes: Vec<Node<'a>>,
    by_path: HashMap<String, ElementId>,
}

const MAX_RESOLVE_DEPTH: usize = 64;

impl<'a> ModelIndex<'a> {
    pub fn new(root: &'a Package) -> Self {
        let mut idx = ModelIndex {
            nodes: Vec::with_capacity(root.size()),
            by_path: HashMap::new(),
        };
        let root_path = segment(root, 0);
        idx.add(root, None, root_path);
        let by_path = idx
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.path.clone(), i))
            .collect();
        idx.by_path = by_path;
        idx
    }

    fn add(&mut self, e: &'a Element, parent: Option<ElementId>, path: String) -> ElementId {
        let id = self.nodes.len();
        self.nodes.push(Node {
            element: e,
            parent,
            children: Vec::with_capacity(e.members.len()),
            path: path.clone(),
        });
        for (i, m) in e.members.iter().enumerate() {
            let child_path = format!("{path}.{}", segment(m, i));
            let cid = self.add(m, Some(id), child_path);
            self.nodes[id].children.push(cid);
        }
        id
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn ids(&self) -> std::ops::Range<ElementId> {
        0..self.nodes.len()
    }

    pub fn element(&self, id: ElementId) -> &'a Element {
        self.nodes[id].element
    }

    pub fn parent(&self, id: ElementId) -> Option<ElementId> {
        self.nodes[id].parent
    }

    pub fn children(&self, id: ElementId) -> &[ElementId] {
        &self.nodes[id].children
    }

    /// Display path, e.g. `Context.'License Allocation'` or `P.a.#2`.
    pub fn path(&self, id: ElementId) -> &str {
        &self.nodes[id].path
    }

    pub fn ancestors(&self, id: ElementId) -> impl Iterator<Item = ElementId> + '_ {
        std::iter::successors(self.parent(id), move |&p| self.parent(p))
    }

    /// All ids in the subtree rooted at `id`, in document order.
    pub fn subtree(&self, id: ElementId) -> Vec<ElementId> {
        let mut out = vec![id];
        let mut i = 0;
        // pre-order ids of a subtree are contiguous
        let end = self.subtree_end(id);
        while id + 1 + i < end {
            out.push(id + 1 + i);
            i += 1;
        }
        out
    }

    fn subtree_end(&self, id: ElementId) -> ElementId {
        let mut cur = id;
        while let Some(&last) = self.nodes[cur].children.last() {
            cur = last;
        }
        cur + 1
    }

    /// Finds an element by display path or by qualified name text.
    pub fn find(&self, text: &str) -> Option<ElementId> {
        if let Some(&id) = self.by_path.get(text) {
            return Some(id);
        }
        let q = QName::parse(text)?;
        self.lookup(&q)
    }

    /// Resolves an absolute qualified name (first segment = root name),
    /// falling back to a name relative to the root package.
    pub fn lookup(&self, q: &QName) -> Option<ElementId> {
        let segs = q.segments();
        let root = self.element(0);
        let (start, rest) = if root.name.as_ref() == Some(&segs[0]) {
            (0, &segs[1..])
        } else {
            (0, segs)
        };
        let mut cur = start;
        for s in rest {
            cur = self.member(cur, s)?;
        }
        Some(cur)
    }

    /// Length of the longest prefix of `q` that resolves, and the element
    /// it resolves to.
    pub fn longest_prefix(&self, q: &QName) -> Option<(usize, ElementId)> {
        let segs = q.segments();
        let mut best = None;
        for n in 1..=segs.len() {
            match self.lookup(&QName(segs[..n].to_vec())) {
                Some(id) => best = Some((n, id)),
                None => break,
            }
        }
        best
    }

    /// Named member visible in `owner`, own members first, then inherited.
    pub fn member(&self, owner: ElementId, name: &Name) -> Option<ElementId> {
        let mut guard = Vec::new();
        self.member_guarded(owner, name, &mut guard)
    }

    fn member_guarded(&self, owner: ElementId, name: &Name, guard: &mut Vec<ElementId>) -> Option<ElementId> {
        if guard.contains(&owner) || guard.len() > MAX_RESOLVE_DEPTH {
            return None;
        }
        if let Some(&c) = self.nodes[owner]
            .children
            .iter()
            .find(|&&c| self.element(c).name.as_ref() == Some(name))
        {
            return Some(c);
        }
        guard.push(owner);
        let scope = self.parent(owner).unwrap_or(owner);
        let mut found = None;
        for r in &self.element(owner).relationships {
            if !matches!(
                r.kind,
                RelationshipKind::Typing | RelationshipKind::Subsetting | RelationshipKind::Redefinition
            ) {
                continue;
            }
            if let Some(Target::Element(t)) = self.resolve_guarded(scope, &r.target, guard) {
                if let Some(m) = self.member_guarded(t, name, guard) {
                    found = Some(m);
                    break;
                }
            }
        }
        guard.pop();
        found
    }

    /// Resolves `q` as seen from inside `scope`.
    pub fn resolve(&self, scope: ElementId, q: &QName) -> Option<Target> {
        let mut guard = Vec::new();
        self.resolve_guarded(scope, q, &mut guard)
    }

    fn resolve_guarded(&self, scope: ElementId, q: &QName, guard: &mut Vec<ElementId>) -> Option<Target> {
        let segs = q.segments();
        let first = segs.first()?;
        let mut found = None;
        let mut s = Some(scope);
        while let Some(sc) = s {
            if let Some(m) = self.member_guarded(sc, first, guard) {
                found = Some(m);
                break;
            }
            s = self.parent(sc);
        }
        if found.is_none() && self.element(0).name.as_ref() == Some(first) {
            found = Some(0);
        }
        let Some(mut cur) = found else {
            if segs.len() == 1 {
                return BUILTIN_TYPES
                    .iter()
                    .find(|b| **b == first.as_str())
                    .map(|b| Target::Builtin(b));
            }
            return None;
        };
        for seg in &segs[1..] {
            cur = self.member_guarded(cur, seg, guard)?;
        }
        Some(Target::Element(cur))
    }

    /// Scope in which a relationship of `id` is resolved: head relationships
    /// (`:`, `:>`, `:>>`, `=`) resolve in the owner, body ones inside the
    /// element itself.
    pub fn relationship_scope(&self, id: ElementId, kind: RelationshipKind) -> ElementId {
        if kind.in_head() {
            self.parent(id).unwrap_or(id)
        } else {
            id
        }
    }

    pub fn resolve_relationship(&self, id: ElementId, r: &Relationship) -> Option<Target> {
        self.resolve(self.relationship_scope(id, r.kind), &r.target)
    }

    /// Scope for names used inside a statement-like element (successions,
    /// transitions, `by` clauses): its owner.
    pub fn statement_scope(&self, id: ElementId) -> ElementId {
        self.parent(id).unwrap_or(id)
    }

    /// Definitions reached through typing, transitively, nearest first.
    pub fn type_closure(&self, id: ElementId) -> Vec<ElementId> {
        let mut out: Vec<ElementId> = Vec::new();
        let mut stack = vec![id];
        while let Some(cur) = stack.pop() {
            for r in self.element(cur).relationships_of(RelationshipKind::Typing) {
                if let Some(Target::Element(t)) = self.resolve_relationship(cur, r) {
                    if t != id && !out.contains(&t) {
                        out.push(t);
                        stack.push(t);
                    }
                }
            }
        }
        out
    }

    /// True when `id` is (transitively) typed by `def`, or is `def` itself.
    pub fn is_typed_by(&self, id: ElementId, def: ElementId) -> bool {
        id == def || self.type_closure(id).contains(&def)
    }

    fn direct_tags(&self, id: ElementId, out: &mut Vec<MetaTag<'a>>) {
        for &c in self.children(id) {
            if let ElementKind::MetadataApplication { definition, bindings } = &self.element(c).kind {
                out.push(MetaTag {
                    definition,
                    resolved: self.resolve(id, definition).and_then(Target::element),
                    bindings,
                    owner: id,
                });
            }
        }
    }

    /// Metadata applied to the element directly, then inherited from its
    /// definitions through typing. Metadata applications themselves carry none.
    pub fn effective_metadata(&self, id: ElementId) -> Vec<MetaTag<'a>> {
        let mut out = Vec::new();
        if self.element(id).tag() == ElementTag::MetadataApplication {
            return out;
        }
        self.direct_tags(id, &mut out);
        for t in self.type_closure(id) {
            self.direct_tags(t, &mut out);
        }
        out
    }

    /// Does `tag` refer to the metadata definition named by `def` (already
    /// resolved to `def_id` when possible)?
    pub fn tag_matches(&self, tag: &MetaTag<'_>, def: &QName, def_id: Option<ElementId>) -> bool {
        match (tag.resolved, def_id) {
            (Some(a), Some(b)) => a == b,
            _ => tag.definition == def || tag.definition.last() == def.last() && def.segments().len() == 1,
        }
    }

    /// Nearest enclosing package (or the element itself if it is one).
    pub fn enclosing_package(&self, id: ElementId) -> ElementId {
        std::iter::once(id)
            .chain(self.ancestors(id))
            .find(|&a| self.element(a).tag() == ElementTag::Package)
            .unwrap_or(0)
    }

    /// Pre-order id of the first element with the given display path suffix
    /// as its simple name; used by tests and the CLI for short names.
    pub fn find_by_simple_name(&self, name: &str) -> Vec<ElementId> {
        self.ids()
            .filter(|&i| self.element(i).name_str() == Some(name))
            .collect()
    }
}

fn segment(e: &Element, index: usize) -> String {
    match &e.name {
        Some(n) => n.to_string(),
        None => format!("#{index}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sysml::parser::parse_sysml;

    const SRC: &str = "package Context {
    individual def Employee { attribute name : String; }
    individual it : Employee { attribute :>> name = \"IT\"; }
    part def Role;
    part transformationSystem {
        part roleA : Role;
        use case uc {
            subject s :> Context.transformationSystem.roleA;
            actor a :> it;
        }
    }
    view 'License Allocation';
}";

    #[test]
    fn resolves_lexically_and_absolutely() {
        let p = parse_sysml(SRC, "t").unwrap();
        let idx = ModelIndex::new(&p);
        let it = idx.find("Context.it").unwrap();
        let redef = idx.children(it)[0];
        let r = &idx.element(redef).relationships[0];
        let target = idx.resolve_relationship(redef, r).unwrap().element().unwrap();
        assert_eq!(idx.path(target), "Context.Employee.name");

        let actor = idx.find("Context.transformationSystem.uc.a").unwrap();
        let r = &idx.element(actor).relationships[0];
        assert_eq!(idx.resolve_relationship(actor, r), Some(Target::Element(it)));
        let string_attr = idx.find("Context.Employee.name").unwrap();
        let r = &idx.element(string_attr).relationships[0];
        assert_eq!(idx.resolve_relationship(string_attr, r), Some(Target::Builtin("String")));
    }

    #[test]
    fn quoted_paths_and_prefixes() {
        let p = parse_sysml(SRC, "t").unwrap();
        let idx = ModelIndex::new(&p);
        assert!(idx.find("Context.'License Allocation'").is_some());
        let q = QName::from("Context.transformationSystem.nope.deeper");
        let (n, id) = idx.longest_prefix(&q).unwrap();
        assert_eq!(n, 2);
        assert_eq!(idx.path(id), "Context.transformationSystem");
    }

    #[test]
    fn subtree_is_contiguous() {
        let p = parse_sysml(SRC, "t").unwrap();
        let idx = ModelIndex::new(&p);
        let ts = idx.find("Context.transformationSystem").unwrap();
        let sub: Vec<_> = idx.subtree(ts).iter().map(|&i| idx.path(i).to_string()).collect();
        assert_eq!(sub.len(), 5);
        assert!(sub.iter().all(|s| s.starts_with("Context.transformationSystem")));
        assert_eq!(idx.subtree(0).len(), idx.len());
    }

    #[test]
    fn typing_cycles_terminate() {
        let p = parse_sysml("package P { part def A : B; part def B : A; part x : A; }", "t").unwrap();
        let idx = ModelIndex::new(&p);
        let x = idx.find("P.x").unwrap();
        assert!(idx.member(x, &Name::new("zzz")).is_none());
        assert_eq!(idx.type_closure(x).len(), 2);
    }
}
