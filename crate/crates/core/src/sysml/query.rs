//! Path lookup and traversal over a package tree, without lexical scoping
//! or inheritance.

use thiserror::Error;

use super::ast::*;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("no element `{path}`; longest resolvable prefix is `{prefix}`")]
    NotFound { path: String, prefix: String },
    #[error("name `{name}` is declared more than once in `{namespace}`")]
    AmbiguousName { name: String, namespace: String },
}

/// Follows `path` through nested namespaces. The first segment may name the
/// package itself; otherwise the path is taken relative to it.
pub fn resolve<'a>(model: &'a Package, path: &str) -> Result<&'a Element, ResolveError> {
    let root_name = model.name.as_ref().map(Name::to_string).unwrap_or_default();
    let not_found = |prefix: String| ResolveError::NotFound {
        path: path.to_string(),
        prefix,
    };
    let q = QName::parse(path).ok_or_else(|| not_found(String::new()))?;
    let segs = q.segments();
    let rest = if model.name.as_ref() == Some(&segs[0]) {
        &segs[1..]
    } else {
        segs
    };
    let mut cur = model;
    let mut prefix = root_name;
    for seg in rest {
        let mut hits = cur.members.iter().filter(|m| m.name.as_ref() == Some(seg));
        let Some(hit) = hits.next() else {
            return Err(not_found(prefix));
        };
        if hits.next().is_some() {
            return Err(ResolveError::AmbiguousName {
                name: seg.to_string(),
                namespace: prefix,
            });
        }
        prefix = format!("{prefix}.{seg}");
        cur = hit;
    }
    Ok(cur)
}

/// Depth-first, document-order traversal. The visitor receives each element
/// and its depth (the package is at depth 0).
pub fn walk<'a>(model: &'a Package, visitor: &mut dyn FnMut(&'a Element, usize)) {
    fn go<'a>(e: &'a Element, depth: usize, visitor: &mut dyn FnMut(&'a Element, usize)) {
        visitor(e, depth);
        for m in &e.members {
            go(m, depth + 1, visitor);
        }
    }
    go(model, 0, visitor);
}
