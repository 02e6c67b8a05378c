//! Structural lint rules for CATWOE-mapped SysML models.

mod rules;

use thiserror::Error;

use crate::diagnostic::{Diagnostic, Severity};
use crate::sysml::ast::Package;
use crate::sysml::index::ModelIndex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rule {
    pub id: &'static str,
    /// Short name used at the start of every diagnostic message.
    pub title: &'static str,
    pub severity: Severity,
    pub description: &'static str,
    /// The framework pattern the rule enforces.
    pub anchor: &'static str,
}

type RuleFn = fn(&rules::Ctx<'_, '_>, &Rule) -> Vec<Diagnostic>;

const W: Severity = Severity::Warning;
const E: Severity = Severity::Error;

const REGISTRY: &[(Rule, RuleFn)] = &[
    (
        Rule {
            id: "R-ACT-1",
            title: "actor pattern",
            severity: E,
            description: "Every actor usage inside a use case subsets an individual occurrence declared outside any use case.",
            anchor: "CATWOE Actor: local actor usage subsets (:>) the package-level individual occurrence",
        },
        rules::actor_subsets_occurrence,
    ),
    (
        Rule {
            id: "R-STK-1",
            title: "stakeholder pattern",
            severity: E,
            description: "Every stakeholder usage subsets an individual occurrence.",
            anchor: "CATWOE Customer and Owner: stakeholder usage subsets the individual occurrence",
        },
        rules::stakeholder_subsets_occurrence,
    ),
    (
        Rule {
            id: "R-ENV-1",
            title: "environmental constraint",
            severity: E,
            description: "Every requirement typed by the Environment-tagged definition carries at least one require, assume or assert constraint.",
            anchor: "CATWOE Environmental Constraint: requirement with description and formal constraint",
        },
        rules::environment_has_constraint,
    ),
    (
        Rule {
            id: "R-WVW-1",
            title: "worldview rationale",
            severity: E,
            description: "Every Worldview-tagged viewpoint usage carries Rationale metadata with nonempty text.",
            anchor: "CATWOE Worldview: viewpoint with the worldview as Rationale metadata",
        },
        rules::worldview_has_rationale,
    ),
    (
        Rule {
            id: "R-TRF-1",
            title: "transformation use case",
            severity: E,
            description: "Every Transformation-tagged use case usage declares exactly one subject and an objective referencing at least one requirement.",
            anchor: "CATWOE Transformation: use case with subject and objective requirement",
        },
        rules::transformation_use_case,
    ),
    (
        Rule {
            id: "R-SUB-1",
            title: "shared subject",
            severity: E,
            description: "Every concern's subject refers to the same element as the subject of a Transformation-tagged use case.",
            anchor: "Concern and use case share one subject",
        },
        rules::concern_subject_matches,
    ),
    (
        Rule {
            id: "R-VIEW-1",
            title: "view chain",
            severity: W,
            description: "Every view satisfies at least one viewpoint, and every viewpoint usage frames at least one concern.",
            anchor: "View satisfies viewpoint, viewpoint frames concern",
        },
        rules::view_chain,
    ),
    (
        Rule {
            id: "R-IND-1",
            title: "individual typing",
            severity: E,
            description: "Every individual occurrence is typed by an individual definition.",
            anchor: "Individuals: occurrences defined by an individual definition",
        },
        rules::occurrence_is_typed,
    ),
    (
        Rule {
            id: "R-CAT-1",
            title: "CATWOE coverage",
            severity: W,
            description: "Within a transformation package, all six CATWOE roles appear as metadata tags.",
            anchor: "CATWOE metadata: every element of the mnemonic is modelled and tagged",
        },
        rules::all_roles_tagged,
    ),
    (
        Rule {
            id: "R-OWN-1",
            title: "owner stakeholder",
            severity: E,
            description: "Every Owner-tagged individual occurrence is subsetted by at least one stakeholder usage.",
            anchor: "CATWOE Owner: modelled as a stakeholder of the owner concern",
        },
        rules::owner_is_stakeholder,
    ),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown rule `{0}`")]
pub struct UnknownRule(pub String);

pub fn rules() -> impl Iterator<Item = &'static Rule> {
    REGISTRY.iter().map(|(r, _)| r)
}

pub fn rule(id: &str) -> Result<&'static Rule, UnknownRule> {
    rules().find(|r| r.id == id).ok_or_else(|| UnknownRule(id.to_string()))
}

/// Description and anchor of a rule, one per line.
pub fn explain(id: &str) -> Result<String, UnknownRule> {
    let r = rule(id)?;
    Ok(format!("{} ({}): {}\nPattern: {}", r.id, r.severity, r.description, r.anchor))
}

/// Runs every rule. The result is ordered by element path, then rule id.
pub fn check(model: &Package) -> Vec<Diagnostic> {
    run(model, |_| true)
}

/// Runs only the listed rules.
pub fn check_only(model: &Package, ids: &[&str]) -> Result<Vec<Diagnostic>, UnknownRule> {
    for id in ids {
        rule(id)?;
    }
    Ok(run(model, |r| ids.contains(&r.id)))
}

fn run(model: &Package, select: impl Fn(&Rule) -> bool) -> Vec<Diagnostic> {
    let idx = ModelIndex::new(model);
    let ctx = rules::Ctx::new(&idx);
    let mut out: Vec<Diagnostic> = REGISTRY
        .iter()
        .filter(|(r, _)| select(r))
        .flat_map(|(r, f)| f(&ctx, r))
        .collect();
    out.sort_by(|a, b| {
        (&a.element_path, &a.rule_id, &a.message).cmp(&(&b.element_path, &b.rule_id, &b.message))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapper::map_context;
    use crate::ssm::parse_ssm;
    use crate::sysml::ast::Element;
    use crate::sysml::parse_sysml;

    #[test]
    fn registry_ids_are_unique() {
        let mut ids: Vec<_> = rules().map(|r| r.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), 10);
    }

    #[test]
    fn explain_known_and_unknown() {
        let text = explain("R-ACT-1").unwrap();
        assert!(text.contains("subset"));
        assert!(text.contains(rule("R-ACT-1").unwrap().anchor));
        assert_eq!(explain("R-XXX-9"), Err(UnknownRule("R-XXX-9".into())));
        assert!(rules().all(|r| !explain(r.id).unwrap().is_empty()));
    }

    #[test]
    fn empty_package_is_clean() {
        assert_eq!(check(&Element::package("P")), vec![]);
    }

    #[test]
    fn empty_tagged_package_misses_roles() {
        let src = "package P {
    enum def CatwoeElement { enum Customer; enum Actor; enum Transformation; enum Worldview; enum Owner; enum Environment; }
    metadata def CATWOE { attribute element : CatwoeElement; }
    package T { @CATWOE { element = CatwoeElement::Transformation; } }
}";
        let d = check(&parse_sysml(src, "t").unwrap());
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].rule_id, "R-CAT-1");
        assert_eq!(d[0].element_path, "P.T");
    }

    #[test]
    fn mapped_small_context_is_clean() {
        let ctx = parse_ssm(
            "context P {
    individual a : E \"A\"
    root-definition r {
        customer a; actor a; owner a
        transformation \"t\" { subject s : S }
        worldview \"w\"
        environmental-constraint e \"x\" assert \"true\"
    }
    conceptual-model r { activity x \"X\" by a }
}",
            "t",
        )
        .unwrap();
        let (pkg, _) = map_context(&ctx).unwrap();
        assert_eq!(check(&pkg), vec![]);
    }

    #[test]
    fn check_only_filters_and_rejects_unknown() {
        let p = parse_sysml("package P { part def E; individual x : E; }", "t").unwrap();
        assert_eq!(check(&p).len(), 1);
        assert_eq!(check_only(&p, &["R-ACT-1"]).unwrap(), vec![]);
        assert!(check_only(&p, &["R-NOPE-1"]).is_err());
    }
}
