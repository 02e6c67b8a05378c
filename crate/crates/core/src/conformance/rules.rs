//! The rule bodies. Each takes the indexed model and returns its findings.

use std::collections::BTreeSet;

use crate::diagnostic::Diagnostic;
use crate::ssm::model::CatwoeRole;
use crate::sysml::ast::{ElementKind, ElementTag, RelationshipKind};
use crate::sysml::expr::Literal;
use crate::sysml::index::{ElementId, MetaTag, ModelIndex, Target};

use super::Rule;

pub struct Ctx<'i, 'a> {
    pub idx: &'i ModelIndex<'a>,
}

impl<'i, 'a> Ctx<'i, 'a> {
    pub fn new(idx: &'i ModelIndex<'a>) -> Self {
        Ctx { idx }
    }

    fn ids_with(&self, tags: &[ElementTag]) -> impl Iterator<Item = ElementId> + '_ {
        let tags = tags.to_vec();
        self.idx.ids().filter(move |&i| tags.contains(&self.idx.element(i).tag()))
    }

    fn tag_of(&self, id: ElementId) -> ElementTag {
        self.idx.element(id).tag()
    }

    fn diag(&self, rule: &Rule, id: ElementId, problem: impl std::fmt::Display) -> Diagnostic {
        let path = self.idx.path(id);
        Diagnostic::new(
            rule.id,
            rule.severity,
            path,
            self.idx.element(id).loc.span().cloned(),
            format!("{}: `{path}` {problem}", rule.title),
        )
    }

    /// Resolved targets of the element's relationships of one kind.
    fn targets(&self, id: ElementId, kind: RelationshipKind) -> Vec<ElementId> {
        self.idx
            .element(id)
            .relationships_of(kind)
            .filter_map(|r| self.idx.resolve_relationship(id, r).and_then(Target::element))
            .collect()
    }

    fn children_with(&self, id: ElementId, tag: ElementTag) -> Vec<ElementId> {
        self.idx
            .children(id)
            .iter()
            .copied()
            .filter(|&c| self.tag_of(c) == tag)
            .collect()
    }

    fn direct_roles(&self, id: ElementId) -> BTreeSet<CatwoeRole> {
        self.idx
            .children(id)
            .iter()
            .filter_map(|&c| role_of_application(&self.idx.element(c).kind))
            .collect()
    }

    fn effective_roles(&self, id: ElementId) -> BTreeSet<CatwoeRole> {
        self.idx.effective_metadata(id).iter().filter_map(role_of_tag).collect()
    }

    fn in_use_case(&self, id: ElementId) -> bool {
        self.idx
            .ancestors(id)
            .any(|a| matches!(self.tag_of(a), ElementTag::UseCaseUsage | ElementTag::UseCaseDef))
    }

    fn subsets_occurrence(&self, id: ElementId, outside_use_cases: bool) -> bool {
        self.targets(id, RelationshipKind::Subsetting).into_iter().any(|t| {
            self.tag_of(t) == ElementTag::IndividualOccurrence && !(outside_use_cases && self.in_use_case(t))
        })
    }

    /// What a subject stands for: the end of its chain of first subsetting
    /// targets, or itself when it subsets nothing.
    fn subject_referent(&self, subject: ElementId) -> ElementId {
        let mut cur = subject;
        let mut seen = vec![subject];
        while let Some(&next) = self.targets(cur, RelationshipKind::Subsetting).first() {
            if seen.contains(&next) {
                break;
            }
            seen.push(next);
            cur = next;
        }
        cur
    }

    fn transformation_use_cases(&self) -> Vec<ElementId> {
        self.ids_with(&[ElementTag::UseCaseUsage])
            .filter(|&u| self.effective_roles(u).contains(&CatwoeRole::Transformation))
            .collect()
    }
}

fn role_from_binding(bindings: &[(crate::sysml::ast::Name, Literal)]) -> Option<CatwoeRole> {
    bindings.iter().find_map(|(n, v)| match v {
        Literal::Enum { literal, .. } if n.as_str() == "element" => CatwoeRole::from_name(literal.as_str()),
        _ => None,
    })
}

fn role_of_application(kind: &ElementKind) -> Option<CatwoeRole> {
    match kind {
        ElementKind::MetadataApplication { bindings, .. } => role_from_binding(bindings),
        _ => None,
    }
}

fn role_of_tag(tag: &MetaTag<'_>) -> Option<CatwoeRole> {
    role_from_binding(tag.bindings)
}

pub fn actor_subsets_occurrence(c: &Ctx<'_, '_>, rule: &Rule) -> Vec<Diagnostic> {
    c.ids_with(&[ElementTag::ActorUsage])
        .filter(|&a| c.in_use_case(a) && !c.subsets_occurrence(a, true))
        .map(|a| c.diag(rule, a, "does not subset an individual occurrence declared outside any use case"))
        .collect()
}

pub fn stakeholder_subsets_occurrence(c: &Ctx<'_, '_>, rule: &Rule) -> Vec<Diagnostic> {
    c.ids_with(&[ElementTag::StakeholderUsage])
        .filter(|&s| !c.subsets_occurrence(s, false))
        .map(|s| c.diag(rule, s, "does not subset an individual occurrence"))
        .collect()
}

pub fn environment_has_constraint(c: &Ctx<'_, '_>, rule: &Rule) -> Vec<Diagnostic> {
    let env_defs: BTreeSet<ElementId> = c
        .idx
        .ids()
        .filter(|&d| c.direct_roles(d).contains(&CatwoeRole::Environment))
        .collect();
    c.ids_with(&[ElementTag::RequirementDef, ElementTag::RequirementUsage])
        .filter(|&r| c.idx.type_closure(r).iter().any(|t| env_defs.contains(t)))
        .filter(|&r| {
            !c.idx.children(r).iter().any(|&k| {
                matches!(
                    c.idx.element(k).kind,
                    ElementKind::ConstraintExpr { kind: Some(_), .. }
                )
            })
        })
        .map(|r| c.diag(rule, r, "has no require, assume or assert constraint"))
        .collect()
}

pub fn worldview_has_rationale(c: &Ctx<'_, '_>, rule: &Rule) -> Vec<Diagnostic> {
    c.ids_with(&[ElementTag::ViewpointUsage])
        .filter(|&v| c.effective_roles(v).contains(&CatwoeRole::Worldview))
        .filter(|&v| {
            !c.idx.children(v).iter().any(|&k| match &c.idx.element(k).kind {
                ElementKind::MetadataApplication { definition, bindings } => {
                    definition.last().as_str() == "Rationale"
                        && bindings
                            .iter()
                            .any(|(n, l)| n.as_str() == "text" && matches!(l, Literal::String(s) if !s.trim().is_empty()))
                }
                _ => false,
            })
        })
        .map(|v| c.diag(rule, v, "has no Rationale metadata with nonempty text"))
        .collect()
}

pub fn transformation_use_case(c: &Ctx<'_, '_>, rule: &Rule) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for u in c.transformation_use_cases() {
        let subjects = c.children_with(u, ElementTag::SubjectUsage).len();
        if subjects != 1 {
            out.push(c.diag(rule, u, format!("declares {subjects} subjects; exactly one is required")));
        }
        let objectives = c
            .targets(u, RelationshipKind::References)
            .into_iter()
            .filter(|&t| matches!(c.tag_of(t), ElementTag::RequirementDef | ElementTag::RequirementUsage))
            .count();
        if objectives == 0 {
            out.push(c.diag(rule, u, "has no objective referencing a requirement"));
        }
    }
    out
}

pub fn concern_subject_matches(c: &Ctx<'_, '_>, rule: &Rule) -> Vec<Diagnostic> {
    let use_case_subjects: BTreeSet<ElementId> = c
        .transformation_use_cases()
        .into_iter()
        .flat_map(|u| c.children_with(u, ElementTag::SubjectUsage))
        .map(|s| c.subject_referent(s))
        .collect();
    let mut out = Vec::new();
    for concern in c.ids_with(&[ElementTag::ConcernUsage]) {
        match c.children_with(concern, ElementTag::SubjectUsage).first() {
            None => out.push(c.diag(rule, concern, "has no subject")),
            Some(&s) => {
                let referent = c.subject_referent(s);
                if !use_case_subjects.contains(&referent) {
                    out.push(c.diag(
                        rule,
                        concern,
                        format!(
                            "has subject `{}`, which is not the subject of any Transformation use case",
                            c.idx.path(referent)
                        ),
                    ));
                }
            }
        }
    }
    out
}

pub fn view_chain(c: &Ctx<'_, '_>, rule: &Rule) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for v in c.ids_with(&[ElementTag::ViewUsage]) {
        let ok = c
            .targets(v, RelationshipKind::Satisfies)
            .into_iter()
            .any(|t| matches!(c.tag_of(t), ElementTag::ViewpointUsage | ElementTag::ViewpointDef));
        if !ok {
            out.push(c.diag(rule, v, "satisfies no viewpoint"));
        }
    }
    for vp in c.ids_with(&[ElementTag::ViewpointUsage]) {
        let ok = c
            .targets(vp, RelationshipKind::Frames)
            .into_iter()
            .any(|t| matches!(c.tag_of(t), ElementTag::ConcernUsage | ElementTag::ConcernDef));
        if !ok {
            out.push(c.diag(rule, vp, "frames no concern"));
        }
    }
    out
}

pub fn occurrence_is_typed(c: &Ctx<'_, '_>, rule: &Rule) -> Vec<Diagnostic> {
    c.ids_with(&[ElementTag::IndividualOccurrence])
        .filter(|&o| {
            !c.idx
                .type_closure(o)
                .into_iter()
                .any(|t| c.tag_of(t) == ElementTag::IndividualDef)
        })
        .map(|o| c.diag(rule, o, "is not typed by an individual definition"))
        .collect()
}

/// A transformation package is the nearest package enclosing a
/// Transformation-tagged use case, or a package tagged Transformation itself.
pub fn all_roles_tagged(c: &Ctx<'_, '_>, rule: &Rule) -> Vec<Diagnostic> {
    let mut packages: BTreeSet<ElementId> = c
        .ids_with(&[ElementTag::UseCaseUsage, ElementTag::UseCaseDef])
        .filter(|&u| c.effective_roles(u).contains(&CatwoeRole::Transformation))
        .map(|u| c.idx.enclosing_package(u))
        .collect();
    packages.extend(
        c.ids_with(&[ElementTag::Package])
            .filter(|&p| c.direct_roles(p).contains(&CatwoeRole::Transformation)),
    );
    let mut out = Vec::new();
    for p in packages {
        let present: BTreeSet<CatwoeRole> = c
            .ids_with(&[ElementTag::MetadataApplication])
            .filter(|&m| c.idx.enclosing_package(m) == p)
            .filter_map(|m| role_of_application(&c.idx.element(m).kind))
            .collect();
        let missing: Vec<&str> = CatwoeRole::ALL
            .iter()
            .filter(|r| !present.contains(r))
            .map(|r| r.as_str())
            .collect();
        if !missing.is_empty() {
            out.push(c.diag(rule, p, format!("has no element tagged {}", missing.join(", "))));
        }
    }
    out
}

pub fn owner_is_stakeholder(c: &Ctx<'_, '_>, rule: &Rule) -> Vec<Diagnostic> {
    let subsetted: BTreeSet<ElementId> = c
        .ids_with(&[ElementTag::StakeholderUsage])
        .flat_map(|s| c.targets(s, RelationshipKind::Subsetting))
        .collect();
    c.ids_with(&[ElementTag::IndividualOccurrence])
        .filter(|&o| c.direct_roles(o).contains(&CatwoeRole::Owner) && !subsetted.contains(&o))
        .map(|o| c.diag(rule, o, "is tagged Owner but no stakeholder usage subsets it"))
        .collect()
}
