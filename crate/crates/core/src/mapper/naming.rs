//! Names the mapper gives to generated elements.

use std::collections::BTreeSet;

use crate::ssm::model::{RootDefinition, SsmContext};
use crate::sysml::index::BUILTIN_TYPES;

/// Names of generated scaffolding and structure. The defaults reproduce the
/// license-allocation case study; with more than one root definition the
/// per-definition names get a `_<rdId>` suffix (the view gets ` <rdId>`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingOptions {
    pub role_enum: String,
    pub metadata_def: String,
    pub rationale_def: String,
    pub individual_name_attribute: String,
    pub environment_def: String,
    pub owner_concern_def: String,
    pub owner_concern: String,
    pub customer_concern_def: String,
    pub customer_concern: String,
    pub viewpoint_def: String,
    pub viewpoint: String,
    pub view: String,
    pub use_case_base: String,
    pub system_part: String,
    /// Give the view an `expose` of the transformation part and a CATWOE filter.
    pub populate_view: bool,
    /// Root definitions whose subject is modelled with states.
    pub state_pattern: BTreeSet<String>,
}

impl Default for MappingOptions {
    fn default() -> Self {
        MappingOptions {
            role_enum: "CatwoeElement".into(),
            metadata_def: "CATWOE".into(),
            rationale_def: "Rationale".into(),
            individual_name_attribute: "name".into(),
            environment_def: "EnvironmentalConstraints".into(),
            owner_concern_def: "OwnerConcern".into(),
            owner_concern: "resources".into(),
            customer_concern_def: "CustomerConcern".into(),
            customer_concern: "customerConcern".into(),
            viewpoint_def: "ResourceAllocation".into(),
            viewpoint: "licenseManagement".into(),
            view: "License Allocation".into(),
            use_case_base: "CATWOE_Transformation".into(),
            system_part: "transformationSystem".into(),
            populate_view: false,
            state_pattern: BTreeSet::new(),
        }
    }
}

pub fn upper_first(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

pub fn lower_first(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_lowercase().chain(c).collect(),
        None => String::new(),
    }
}

pub fn is_builtin(ty: &str) -> bool {
    BUILTIN_TYPES.contains(&ty)
}

/// Names generated for one root definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RdNames {
    pub use_case_def: String,
    pub use_case: String,
    pub owner_concern: String,
    pub customer_concern: String,
    pub viewpoint: String,
    pub view: String,
    pub system_part: String,
    /// `(ssm id, requirement name)` per environmental constraint.
    pub requirements: Vec<(String, String)>,
    /// Stand-in objective when the root definition has no environmental constraints.
    pub fallback_objective: Option<String>,
}

impl RdNames {
    pub fn requirement(&self, ec_id: &str) -> Option<&str> {
        self.requirements
            .iter()
            .find(|(id, _)| id == ec_id)
            .map(|(_, n)| n.as_str())
    }

    pub fn objectives(&self) -> Vec<&str> {
        match &self.fallback_objective {
            Some(o) => vec![o.as_str()],
            None => self.requirements.iter().map(|(_, n)| n.as_str()).collect(),
        }
    }
}

pub fn rd_names(ctx: &SsmContext, rd: &RootDefinition, opts: &MappingOptions) -> RdNames {
    let multi = ctx.root_definitions.len() > 1;
    let sfx = |base: &str| {
        if multi {
            format!("{base}_{}", rd.id)
        } else {
            base.to_string()
        }
    };
    RdNames {
        use_case_def: upper_first(&rd.id),
        use_case: rd.id.clone(),
        owner_concern: sfx(&opts.owner_concern),
        customer_concern: sfx(&opts.customer_concern),
        viewpoint: sfx(&opts.viewpoint),
        view: if multi {
            format!("{} {}", opts.view, rd.id)
        } else {
            opts.view.clone()
        },
        system_part: sfx(&opts.system_part),
        requirements: rd
            .environmental_constraints
            .iter()
            .map(|ec| {
                let n = if multi {
                    format!("{}_{}", rd.id, ec.id)
                } else {
                    ec.id.clone()
                };
                (ec.id.clone(), n)
            })
            .collect(),
        fallback_objective: rd
            .environmental_constraints
            .is_empty()
            .then(|| format!("{}Objective", rd.id)),
    }
}

/// Types referenced by the context that are neither declared part
/// definitions nor scalars; the mapper declares them. The flag is true when
/// the type is used for a part (subject, input, output, reference) rather
/// than only for attributes.
pub fn implied_types(ctx: &SsmContext) -> Vec<(String, bool)> {
    let mut out: Vec<(String, bool)> = Vec::new();
    let individual_types: BTreeSet<&str> = ctx.individuals.iter().map(|i| i.definition_type.as_str()).collect();
    let mut note = |ty: &str, is_part: bool| {
        if is_builtin(ty) || ctx.part_def(ty).is_some() || individual_types.contains(ty) {
            return;
        }
        match out.iter_mut().find(|(t, _)| t == ty) {
            Some(entry) => entry.1 |= is_part,
            None => out.push((ty.to_string(), is_part)),
        }
    };
    for pd in &ctx.part_defs {
        for a in &pd.attributes {
            note(&a.type_name, false);
        }
        for r in &pd.refs {
            note(&r.type_name, true);
        }
    }
    for rd in &ctx.root_definitions {
        for p in rd.parameters() {
            note(&p.type_name, true);
        }
    }
    out
}

/// Every name the mapper places directly in the package, with what it names.
pub fn package_names(ctx: &SsmContext, opts: &MappingOptions) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = Vec::new();
    let mut push = |n: &str, what: String| out.push((n.to_string(), what));
    push(&opts.role_enum, "the CATWOE role enumeration".into());
    push(&opts.metadata_def, "the CATWOE metadata definition".into());
    push(&opts.rationale_def, "the rationale metadata definition".into());
    let mut seen_types = BTreeSet::new();
    for i in &ctx.individuals {
        if seen_types.insert(i.definition_type.as_str()) {
            push(&i.definition_type, format!("individual definition `{}`", i.definition_type));
        }
    }
    for i in &ctx.individuals {
        push(&i.id, format!("individual `{}`", i.id));
    }
    for pd in &ctx.part_defs {
        push(&pd.name, format!("part definition `{}`", pd.name));
        push(&lower_first(&pd.name), format!("part usage of `{}`", pd.name));
    }
    for (t, _) in implied_types(ctx) {
        push(&t, format!("implied definition `{t}`"));
    }
    if !ctx.root_definitions.is_empty() {
        push(&opts.environment_def, "the environmental constraint definition".into());
        push(&opts.owner_concern_def, "the owner concern definition".into());
        push(&opts.customer_concern_def, "the customer concern definition".into());
        push(&opts.viewpoint_def, "the viewpoint definition".into());
        push(&opts.use_case_base, "the transformation use case base".into());
    }
    for rd in &ctx.root_definitions {
        let n = rd_names(ctx, rd, opts);
        let of = |w: &str| format!("{w} of root definition `{}`", rd.id);
        for (id, name) in &n.requirements {
            push(name, format!("requirement for `{id}`"));
        }
        if let Some(o) = &n.fallback_objective {
            push(o, of("objective requirement"));
        }
        push(&n.owner_concern, of("owner concern"));
        push(&n.customer_concern, of("customer concern"));
        push(&n.viewpoint, of("viewpoint"));
        push(&n.view, of("view"));
        push(&n.system_part, of("transformation part"));
        push(&n.use_case_def, of("use case definition"));
    }
    out
}

/// Names declared inside the generated use case usage for `rd`.
pub fn use_case_names(ctx: &SsmContext, rd: &RootDefinition) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = Vec::new();
    for p in rd.parameters() {
        out.push((p.name.clone(), format!("parameter `{}`", p.name)));
    }
    let mut actors = BTreeSet::new();
    for a in &rd.actors {
        if actors.insert(a.id.as_str()) {
            out.push((a.id.clone(), format!("actor `{}`", a.id)));
        }
    }
    if let Some(cm) = ctx.conceptual_model_for(&rd.id) {
        for a in &cm.activities {
            out.push((a.id.clone(), format!("activity `{}`", a.id)));
        }
        for m in &cm.monitors {
            out.push((m.id.clone(), format!("monitor `{}`", m.id)));
        }
    }
    out
}
