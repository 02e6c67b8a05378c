//! Translation of a validated SSM context into a SysML package.
//!
//! The package is laid out in a fixed order: CATWOE scaffolding, individuals,
//! system structure, environmental-constraint requirements, concerns and
//! stakeholders, viewpoints and views, use cases, and one enclosing
//! transformation part per root definition. References are built fully
//! qualified and shortened at the end to the shortest suffix that still
//! resolves to the same element.

pub mod naming;
pub mod topo;

use std::collections::BTreeSet;

use serde_json::{json, Value};
use thiserror::Error;

use crate::diagnostic::{cmp_by_position, Diagnostic};
use crate::span::{Loc, SourceSpan};
use crate::ssm::model::*;
use crate::ssm::validate::validate_with;
use crate::sysml::ast::*;
use crate::sysml::expr::Literal;
use crate::sysml::index::{ModelIndex, Target};

pub use naming::{lower_first, upper_first, MappingOptions, RdNames};

#[derive(Debug, Error)]
pub enum MappingError {
    #[error("context `{context}` is not valid ({} error(s)); run validation first", .diagnostics.len())]
    InvalidContext {
        context: String,
        diagnostics: Vec<Diagnostic>,
    },
    #[error("conceptual model for `{0}` has cyclic flows")]
    CyclicFlows(String),
}

/// Where a generated element came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub element_path: String,
    pub span: Option<SourceSpan>,
    /// The CATWOE element this SysML element realises, if any.
    pub role: Option<CatwoeRole>,
    /// Root definition the entry belongs to; `None` for shared elements.
    pub root_definition: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MappingReport {
    pub element_provenance: Vec<Provenance>,
    pub warnings: Vec<Diagnostic>,
}

impl MappingReport {
    /// Entries that realise a CATWOE element of root definition `rd`.
    pub fn roles_for<'a>(&'a self, rd: &'a str) -> impl Iterator<Item = &'a Provenance> {
        self.element_provenance
            .iter()
            .filter(move |p| p.role.is_some() && p.root_definition.as_deref() == Some(rd))
    }

    pub fn to_json(&self, fallback_file: &str) -> Value {
        let elements: Vec<Value> = self
            .element_provenance
            .iter()
            .map(|p| {
                json!({
                    "element": p.element_path,
                    "file": p.span.as_ref().map(|s| s.file.to_string()),
                    "line": p.span.as_ref().map(|s| s.start_line),
                    "col": p.span.as_ref().map(|s| s.start_col),
                    "role": p.role.map(|r| r.as_str()),
                    "rootDefinition": p.root_definition,
                })
            })
            .collect();
        let warnings: Vec<Value> = self.warnings.iter().map(|d| d.to_json(fallback_file)).collect();
        json!({ "elements": elements, "warnings": warnings })
    }
}

/// Maps `ctx` with the default options.
pub fn map_context(ctx: &SsmContext) -> Result<(Package, MappingReport), MappingError> {
    map_context_with(ctx, &MappingOptions::default())
}

pub fn map_context_with(ctx: &SsmContext, opts: &MappingOptions) -> Result<(Package, MappingReport), MappingError> {
    let errors: Vec<Diagnostic> = validate_with(ctx, opts).into_iter().filter(Diagnostic::is_error).collect();
    if !errors.is_empty() {
        return Err(MappingError::InvalidContext {
            context: ctx.name.clone(),
            diagnostics: errors,
        });
    }
    let mut m = Mapper {
        ctx,
        opts,
        names: ctx
            .root_definitions
            .iter()
            .map(|rd| naming::rd_names(ctx, rd, opts))
            .collect(),
        report: MappingReport::default(),
    };
    let mut pkg = Element::package(ctx.name.clone());
    pkg.loc = ctx.loc.clone();
    pkg.members.extend(m.scaffolding());
    pkg.members.extend(map_individuals(ctx, opts));
    m.note_individuals();
    pkg.members.extend(m.structure());
    if !ctx.root_definitions.is_empty() {
        pkg.members.push(m.env_definition());
        for (i, rd) in ctx.root_definitions.iter().enumerate() {
            pkg.members.extend(m.map_environmental_constraints(rd, i));
        }
        pkg.members.push(Element::named(ElementKind::ConcernDef, opts.owner_concern_def.clone()));
        pkg.members.push(Element::named(ElementKind::ConcernDef, opts.customer_concern_def.clone()));
        for (i, rd) in ctx.root_definitions.iter().enumerate() {
            pkg.members.push(m.map_owner_concern(rd, i));
            pkg.members.push(m.map_customer(rd, i));
        }
        pkg.members.push(
            Element::named(ElementKind::ViewpointDef, opts.viewpoint_def.clone())
                .with_member(m.tag(CatwoeRole::Worldview)),
        );
        for (i, rd) in ctx.root_definitions.iter().enumerate() {
            pkg.members.extend(m.map_worldview(rd, i));
        }
        pkg.members.push(Element::named(ElementKind::UseCaseDef, opts.use_case_base.clone()));
        for (i, rd) in ctx.root_definitions.iter().enumerate() {
            pkg.members.push(m.use_case_def(rd, i));
        }
        for (i, rd) in ctx.root_definitions.iter().enumerate() {
            pkg.members.push(m.map_transformation(rd, i)?);
        }
    }
    shorten_references(&mut pkg);
    let mut report = m.report;
    report.warnings.sort_by(cmp_by_position);
    Ok((pkg, report))
}

/// One individual definition per distinct definition type, each with the
/// name attribute, then one occurrence per individual redefining it and
/// tagged with every role the individual plays.
pub fn map_individuals(ctx: &SsmContext, opts: &MappingOptions) -> Vec<Element> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for i in &ctx.individuals {
        if seen.insert(i.definition_type.as_str()) {
            out.push(
                Element::named(ElementKind::IndividualDef, i.definition_type.clone()).with_member(
                    Element::named(ElementKind::AttributeUsage { value: None }, opts.individual_name_attribute.clone())
                        .typed("String"),
                ),
            );
        }
    }
    for i in &ctx.individuals {
        let mut occ = Element::named(ElementKind::IndividualOccurrence, i.id.clone())
            .typed(QName::new(vec![Name::new(&ctx.name), Name::new(&i.definition_type)]));
        occ.loc = i.loc.clone();
        for role in roles_of(ctx, &i.id) {
            occ.members.push(catwoe_tag(ctx, opts, role));
        }
        let mut name_attr = Element::new(ElementKind::AttributeUsage {
            value: Some(crate::sysml::expr::Expr::Literal(Literal::String(i.display_name.clone()))),
        })
        .with_rel(
            RelationshipKind::Redefinition,
            QName::new(vec![
                Name::new(&ctx.name),
                Name::new(&i.definition_type),
                Name::new(&opts.individual_name_attribute),
            ]),
        );
        name_attr.loc = i.loc.clone();
        occ.members.push(name_attr);
        out.push(occ);
    }
    out
}

/// Roles an individual plays across all root definitions, in CATWOE order.
fn roles_of(ctx: &SsmContext, id: &str) -> BTreeSet<CatwoeRole> {
    let mut roles = BTreeSet::new();
    for rd in &ctx.root_definitions {
        if rd.customers.iter().any(|c| c.id == id) {
            roles.insert(CatwoeRole::Customer);
        }
        if rd.actors.iter().any(|a| a.id == id) {
            roles.insert(CatwoeRole::Actor);
        }
        if rd.owner.id == id {
            roles.insert(CatwoeRole::Owner);
        }
    }
    roles
}

fn catwoe_tag(ctx: &SsmContext, opts: &MappingOptions, role: CatwoeRole) -> Element {
    metadata_application(
        QName::new(vec![Name::new(&ctx.name), Name::new(&opts.metadata_def)]),
        vec![("element", Literal::enum_value(&opts.role_enum, role.as_str()))],
    )
}

struct Mapper<'a> {
    ctx: &'a SsmContext,
    opts: &'a MappingOptions,
    names: Vec<RdNames>,
    report: MappingReport,
}

impl<'a> Mapper<'a> {
    /// Absolute name: the package name followed by `segs`.
    fn abs(&self, segs: &[&str]) -> QName {
        let mut v = vec![Name::new(&self.ctx.name)];
        v.extend(segs.iter().map(|s| Name::new(*s)));
        QName::new(v)
    }

    fn type_ref(&self, ty: &str) -> QName {
        if naming::is_builtin(ty) {
            QName::simple(ty)
        } else {
            self.abs(&[ty])
        }
    }

    fn tag(&self, role: CatwoeRole) -> Element {
        catwoe_tag(self.ctx, self.opts, role)
    }

    fn provenance(&mut self, segs: &[&str], loc: &Loc, role: Option<CatwoeRole>, rd: Option<&str>) {
        self.report.element_provenance.push(Provenance {
            element_path: self.abs(segs).to_string(),
            span: loc.span().cloned(),
            role,
            root_definition: rd.map(str::to_string),
        });
    }

    fn warn(&mut self, rule: &str, path: &[&str], loc: &Loc, msg: String) {
        let p = self.abs(path).to_string();
        self.report.warnings.push(Diagnostic::warning(rule, p, loc.span().cloned(), msg));
    }

    fn scaffolding(&self) -> Vec<Element> {
        let o = self.opts;
        vec![
            Element::named(
                ElementKind::EnumDef {
                    literals: CatwoeRole::ALL.iter().map(|r| Name::new(r.as_str())).collect(),
                },
                o.role_enum.clone(),
            ),
            Element::named(ElementKind::MetadataDef, o.metadata_def.clone()).with_member(
                Element::named(ElementKind::AttributeUsage { value: None }, "element").typed(self.abs(&[&o.role_enum])),
            ),
            Element::named(ElementKind::MetadataDef, o.rationale_def.clone())
                .with_member(Element::named(ElementKind::AttributeUsage { value: None }, "text").typed("String")),
        ]
    }

    fn note_individuals(&mut self) {
        let mut seen: Vec<(&str, &str)> = Vec::new();
        for i in &self.ctx.individuals {
            self.provenance(&[&i.id], &i.loc, None, None);
            if let Some((other, _)) = seen.iter().find(|(_, n)| *n == i.display_name) {
                let msg = format!(
                    "individuals `{other}` and `{}` share the display name \"{}\"",
                    i.id, i.display_name
                );
                self.warn("W-DUPNAME", &[&i.id], &i.loc, msg);
            }
            seen.push((&i.id, &i.display_name));
        }
    }

    /// Part definitions, implied definitions, and one package-level part
    /// usage per declared part definition.
    fn structure(&mut self) -> Vec<Element> {
        let mut out = Vec::new();
        for pd in &self.ctx.part_defs {
            let mut def = Element::named(ElementKind::PartDef, pd.name.clone());
            def.loc = pd.loc.clone();
            for a in &pd.attributes {
                let mut attr =
                    Element::named(ElementKind::AttributeUsage { value: a.value.clone() }, a.name.clone())
                        .typed(self.type_ref(&a.type_name));
                attr.loc = a.loc.clone();
                def.members.push(attr);
            }
            for r in &pd.refs {
                let mut part = Element::named(ElementKind::PartUsage, r.name.clone())
                    .as_ref_usage()
                    .typed(self.type_ref(&r.type_name));
                part.multiplicity = r.multiplicity;
                part.loc = r.loc.clone();
                def.members.push(part);
            }
            out.push(def);
            self.provenance(&[&pd.name], &pd.loc, None, None);
        }
        for (t, is_part) in naming::implied_types(self.ctx) {
            let kind = if is_part {
                ElementKind::PartDef
            } else {
                ElementKind::AttributeDef
            };
            out.push(Element::named(kind, t));
        }
        for pd in &self.ctx.part_defs {
            let usage_name = lower_first(&pd.name);
            let mut usage = Element::named(ElementKind::PartUsage, usage_name.clone()).typed(self.abs(&[&pd.name]));
            usage.loc = pd.loc.clone();
            for r in &pd.refs {
                if self.ctx.part_def(&r.type_name).is_none() {
                    continue;
                }
                usage.members.push(
                    Element::new(ElementKind::PartUsage)
                        .as_ref_usage()
                        .with_rel(RelationshipKind::Redefinition, self.abs(&[&pd.name, &r.name]))
                        .with_rel(RelationshipKind::Binding, self.abs(&[&lower_first(&r.type_name)])),
                );
            }
            out.push(usage);
            self.provenance(&[&usage_name], &pd.loc, None, None);
        }
        out
    }

    fn env_definition(&mut self) -> Element {
        let o = self.opts;
        let def = Element::named(ElementKind::RequirementDef, o.environment_def.clone())
            .with_member(self.tag(CatwoeRole::Environment));
        // realises Environment for root definitions without constraints of their own
        for rd in &self.ctx.root_definitions {
            if rd.environmental_constraints.is_empty() {
                self.provenance(&[&o.environment_def], &rd.loc, Some(CatwoeRole::Environment), Some(&rd.id));
            }
        }
        def
    }

    /// One requirement definition per environmental constraint, typed by the
    /// shared Environment-tagged definition, framing both concerns. A root
    /// definition without constraints gets a stand-in objective requirement.
    fn map_environmental_constraints(&mut self, rd: &RootDefinition, i: usize) -> Vec<Element> {
        let n = self.names[i].clone();
        let frames = [self.abs(&[&n.owner_concern]), self.abs(&[&n.customer_concern])];
        let mut out = Vec::new();
        for ec in &rd.environmental_constraints {
            let name = n.requirement(&ec.id).unwrap_or(&ec.id).to_string();
            let mut req = Element::named(ElementKind::RequirementDef, name.clone())
                .typed(self.abs(&[&self.opts.environment_def]))
                .with_doc(ec.text.clone());
            req.loc = ec.loc.clone();
            if let Some(r) = &ec.refines {
                let target = n.requirement(&r.id).unwrap_or(&r.id).to_string();
                req = req.with_rel(RelationshipKind::Refines, self.abs(&[&target]));
            }
            for f in &frames {
                req = req.with_rel(RelationshipKind::Frames, f.clone());
            }
            match &ec.expr {
                Some(e) => req.members.push(Element::new(ElementKind::ConstraintExpr {
                    kind: Some(ec.kind),
                    expr: e.clone(),
                })),
                None => self.warn(
                    "W-NOEXPR",
                    &[&name],
                    &ec.loc,
                    format!("environmental constraint `{}` has no formal expression", ec.id),
                ),
            }
            self.provenance(&[&name], &ec.loc, Some(CatwoeRole::Environment), Some(&rd.id));
            out.push(req);
        }
        if let Some(obj) = &n.fallback_objective {
            let mut req = Element::named(ElementKind::RequirementDef, obj.clone()).with_doc(rd.transformation.statement.clone());
            for f in &frames {
                req = req.with_rel(RelationshipKind::Frames, f.clone());
            }
            out.push(req);
            self.provenance(&[obj], &rd.transformation.loc, None, Some(&rd.id));
            self.warn(
                "W-NOENV",
                &[obj],
                &rd.loc,
                format!("root definition `{}` has no environmental constraints; objective `{obj}` stands in", rd.id),
            );
        }
        out
    }

    fn concern_subject(&self, rd: &RootDefinition, n: &RdNames) -> Element {
        let s = &rd.transformation.subject;
        let mut e = Element::named(ElementKind::SubjectUsage, s.name.clone())
            .typed(self.type_ref(&s.type_name))
            .subsets(self.abs(&[&n.system_part, &s.name]));
        e.loc = s.loc.clone();
        e
    }

    /// Owner concern with the owner as stakeholder.
    fn map_owner_concern(&mut self, rd: &RootDefinition, i: usize) -> Element {
        let n = self.names[i].clone();
        let mut concern = Element::named(ElementKind::ConcernUsage, n.owner_concern.clone())
            .typed(self.abs(&[&self.opts.owner_concern_def]))
            .with_member(self.concern_subject(rd, &n));
        let mut stakeholder = Element::named(ElementKind::StakeholderUsage, rd.owner.id.clone())
            .subsets(self.abs(&[&rd.owner.id]))
            .with_member(self.tag(CatwoeRole::Owner));
        stakeholder.loc = rd.owner.loc.clone();
        concern.members.push(stakeholder);
        self.provenance(&[&n.owner_concern, &rd.owner.id], &rd.owner.loc, Some(CatwoeRole::Owner), Some(&rd.id));
        concern
    }

    /// Customer concern with one stakeholder per customer.
    pub fn map_customer(&mut self, rd: &RootDefinition, i: usize) -> Element {
        let n = self.names[i].clone();
        let mut concern = Element::named(ElementKind::ConcernUsage, n.customer_concern.clone())
            .typed(self.abs(&[&self.opts.customer_concern_def]))
            .with_member(self.concern_subject(rd, &n));
        let mut seen = BTreeSet::new();
        for c in &rd.customers {
            if !seen.insert(c.id.as_str()) {
                continue;
            }
            let mut stakeholder = Element::named(ElementKind::StakeholderUsage, c.id.clone())
                .subsets(self.abs(&[&c.id]))
                .with_member(self.tag(CatwoeRole::Customer));
            stakeholder.loc = c.loc.clone();
            concern.members.push(stakeholder);
            self.provenance(&[&n.customer_concern, &c.id], &c.loc, Some(CatwoeRole::Customer), Some(&rd.id));
        }
        concern
    }

    /// Viewpoint carrying the worldview as rationale, and the view satisfying it.
    fn map_worldview(&mut self, rd: &RootDefinition, i: usize) -> Vec<Element> {
        let n = self.names[i].clone();
        let o = self.opts;
        let mut vp = Element::named(ElementKind::ViewpointUsage, n.viewpoint.clone())
            .typed(self.abs(&[&o.viewpoint_def]))
            .with_rel(RelationshipKind::Frames, self.abs(&[&n.owner_concern]))
            .with_member(metadata_application(
                self.abs(&[&o.rationale_def]),
                vec![("text", Literal::String(rd.worldview.clone()))],
            ));
        vp.loc = rd.loc.clone();
        self.provenance(&[&n.viewpoint], &rd.loc, Some(CatwoeRole::Worldview), Some(&rd.id));

        let filters = if o.populate_view {
            vec![FilterExpr::HasMetadata(QName::simple(o.metadata_def.clone()))]
        } else {
            Vec::new()
        };
        let mut view = Element::named(ElementKind::ViewUsage { filters }, n.view.clone())
            .with_rel(RelationshipKind::Satisfies, self.abs(&[&n.viewpoint]));
        if o.populate_view {
            view = view.with_rel(RelationshipKind::Exposes, self.abs(&[&n.system_part]));
        }
        self.provenance(&[&n.view], &rd.loc, None, Some(&rd.id));
        vec![vp, view]
    }

    fn use_case_def(&mut self, rd: &RootDefinition, i: usize) -> Element {
        let n = self.names[i].clone();
        let t = &rd.transformation;
        let mut def = Element::named(ElementKind::UseCaseDef, n.use_case_def.clone())
            .typed(self.abs(&[&self.opts.use_case_base]))
            .with_doc(t.statement.clone())
            .with_member(self.tag(CatwoeRole::Transformation))
            .with_member(Element::named(ElementKind::SubjectUsage, t.subject.name.clone()).typed(self.type_ref(&t.subject.type_name)));
        def.loc = t.loc.clone();
        self.provenance(&[&n.use_case_def], &t.loc, None, Some(&rd.id));
        def
    }

    /// The enclosing transformation part: the subject part and the use case
    /// usage with actors, objectives, parameters and the conceptual model.
    fn map_transformation(&mut self, rd: &RootDefinition, i: usize) -> Result<Element, MappingError> {
        let n = self.names[i].clone();
        let t = &rd.transformation;
        let cm = self.ctx.conceptual_model_for(&rd.id);
        let order = match cm {
            Some(cm) => {
                let idx = |id: &str| cm.activities.iter().position(|a| a.id == id);
                let edges: Vec<(usize, usize)> = cm
                    .flows
                    .iter()
                    .filter_map(|f| Some((idx(&f.from.id)?, idx(&f.to.id)?)))
                    .collect();
                topo::topo_order(cm.activities.len(), &edges).ok_or_else(|| MappingError::CyclicFlows(rd.id.clone()))?
            }
            None => {
                self.warn(
                    "W-NOCM",
                    &[&n.system_part, &n.use_case],
                    &rd.loc,
                    format!("root definition `{}` has no conceptual model; the use case has no actions", rd.id),
                );
                Vec::new()
            }
        };

        let mut subject_part =
            Element::named(ElementKind::PartUsage, t.subject.name.clone()).typed(self.type_ref(&t.subject.type_name));
        subject_part.loc = t.subject.loc.clone();
        if let (Some(cm), true) = (cm, self.opts.state_pattern.contains(&rd.id)) {
            subject_part.members.extend(self.state_pattern(cm, &order, &n, &t.subject.name));
        }
        self.provenance(&[&n.system_part, &t.subject.name], &t.subject.loc, None, Some(&rd.id));

        let mut uc = self.map_actor_pattern(rd, &n);
        for obj in n.objectives() {
            uc = uc.with_rel(RelationshipKind::References, self.abs(&[obj]));
        }
        for (p, dir) in t
            .inputs
            .iter()
            .map(|p| (p, Direction::In))
            .chain(t.outputs.iter().map(|p| (p, Direction::Out)))
        {
            let mut e = if naming::is_builtin(&p.type_name) {
                Element::named(ElementKind::AttributeUsage { value: None }, p.name.clone())
            } else {
                Element::named(ElementKind::PartUsage, p.name.clone()).as_ref_usage()
            }
            .with_direction(dir)
            .typed(self.type_ref(&p.type_name));
            e.loc = p.loc.clone();
            uc.members.push(e);
            self.provenance(&[&n.system_part, &n.use_case, &p.name], &p.loc, None, Some(&rd.id));
        }
        if let Some(cm) = cm {
            uc.members.extend(self.map_conceptual_model(rd, cm, &order, &n));
        }

        let mut part = Element::named(ElementKind::PartUsage, n.system_part.clone());
        part.loc = rd.loc.clone();
        part.members.push(subject_part);
        part.members.push(uc);
        self.provenance(&[&n.system_part], &rd.loc, None, Some(&rd.id));
        Ok(part)
    }

    /// Use case usage with its subject and one actor usage per CATWOE actor,
    /// each subsetting the package-level occurrence.
    fn map_actor_pattern(&mut self, rd: &RootDefinition, n: &RdNames) -> Element {
        let t = &rd.transformation;
        let mut uc = Element::named(ElementKind::UseCaseUsage, n.use_case.clone()).typed(self.abs(&[&n.use_case_def]));
        uc.loc = t.loc.clone();
        self.provenance(
            &[&n.system_part, &n.use_case],
            &t.loc,
            Some(CatwoeRole::Transformation),
            Some(&rd.id),
        );
        let mut subject = Element::named(ElementKind::SubjectUsage, t.subject.name.clone())
            .typed(self.type_ref(&t.subject.type_name))
            .subsets(self.abs(&[&n.system_part, &t.subject.name]));
        subject.loc = t.subject.loc.clone();
        uc.members.push(subject);
        let mut seen = BTreeSet::new();
        for a in &rd.actors {
            if !seen.insert(a.id.as_str()) {
                continue;
            }
            let mut actor = Element::named(ElementKind::ActorUsage, a.id.clone())
                .subsets(self.abs(&[&a.id]))
                .with_member(self.tag(CatwoeRole::Actor));
            actor.loc = a.loc.clone();
            uc.members.push(actor);
            self.provenance(&[&n.system_part, &n.use_case, &a.id], &a.loc, Some(CatwoeRole::Actor), Some(&rd.id));
        }
        uc
    }

    /// Perform actions in topological order, one succession per flow, and
    /// a placeholder action per monitor.
    fn map_conceptual_model(&mut self, rd: &RootDefinition, cm: &ConceptualModel, order: &[usize], n: &RdNames) -> Vec<Element> {
        let mut out = Vec::new();
        let in_uc = |id: &str| self.abs(&[&n.system_part, &n.use_case, id]);
        for &i in order {
            let a = &cm.activities[i];
            let performer = a.performed_by.id.as_str();
            let by = if rd.actors.iter().any(|x| x.id == performer) {
                in_uc(performer)
            } else {
                self.abs(&[performer])
            };
            let mut action = Element::named(ElementKind::ActionUsage(ActionForm::Perform { by: Some(by) }), a.id.clone())
                .with_doc(a.label.clone());
            action.loc = a.loc.clone();
            out.push(action);
        }
        let pos = |id: &str| {
            cm.activities
                .iter()
                .position(|a| a.id == id)
                .and_then(|i| order.iter().position(|&o| o == i))
                .unwrap_or(usize::MAX)
        };
        let mut flows: Vec<&Flow> = cm.flows.iter().collect();
        flows.sort_by_key(|f| (pos(&f.from.id), pos(&f.to.id)));
        for f in flows {
            let mut s = Element::new(ElementKind::Succession {
                first: in_uc(&f.from.id),
                then: in_uc(&f.to.id),
            });
            s.loc = f.loc.clone();
            out.push(s);
        }
        for m in &cm.monitors {
            let controls: Vec<&str> = m.controls.iter().map(|c| c.id.as_str()).collect();
            let mut action = Element::named(ElementKind::ActionUsage(ActionForm::Plain), m.id.clone())
                .with_doc(m.label.clone())
                .with_member(Element::new(ElementKind::Comment {
                    text: format!("monitor and control: {}", controls.join(", ")),
                }));
            action.loc = m.loc.clone();
            out.push(action);
        }
        for a in &cm.activities {
            self.provenance(&[&n.system_part, &n.use_case, &a.id], &a.loc, None, Some(&rd.id));
        }
        for m in &cm.monitors {
            self.provenance(&[&n.system_part, &n.use_case, &m.id], &m.loc, None, Some(&rd.id));
        }
        out
    }

    /// States for the subject: `idle`, then one state per activity in flow
    /// order, chained by transitions whose effect is the activity's action.
    fn state_pattern(&self, cm: &ConceptualModel, order: &[usize], n: &RdNames, subject: &str) -> Vec<Element> {
        let state = |name: &str| self.abs(&[&n.system_part, subject, name]);
        let mut names = vec!["idle".to_string()];
        names.extend(order.iter().map(|&i| format!("{}Done", cm.activities[i].id)));
        let mut out: Vec<Element> = names
            .iter()
            .map(|s| {
                Element::named(
                    ElementKind::StateUsage {
                        entry: None,
                        do_action: None,
                    },
                    s.clone(),
                )
            })
            .collect();
        for (k, &i) in order.iter().enumerate() {
            out.push(Element::new(ElementKind::TransitionUsage {
                source: state(&names[k]),
                target: state(&names[k + 1]),
                trigger: None,
                guard: None,
                effect: Some(self.abs(&[&n.system_part, &n.use_case, &cm.activities[i].id])),
            }));
        }
        out
    }
}

/// Rewrites every reference in `pkg` to the shortest suffix of its qualified
/// name that resolves, from the same place, to the same element.
pub fn shorten_references(pkg: &mut Package) {
    let snapshot = pkg.clone();
    let idx = ModelIndex::new(&snapshot);
    let mut replacements: Vec<Vec<QName>> = Vec::with_capacity(idx.len());
    for id in idx.ids() {
        let mut e = idx.element(id).clone();
        let mut out = Vec::new();
        for (q, own) in e.references_mut() {
            let scope = if own { id } else { idx.statement_scope(id) };
            out.push(shortest(&idx, scope, q));
        }
        replacements.push(out);
    }
    let mut next = 0;
    apply(pkg, &replacements, &mut next);
}

fn shortest(idx: &ModelIndex<'_>, scope: usize, q: &QName) -> QName {
    let Some(target) = idx.resolve(scope, q) else {
        return q.clone();
    };
    let segs = q.segments();
    for k in 1..segs.len() {
        let cand = QName::new(segs[segs.len() - k..].to_vec());
        if idx.resolve(scope, &cand) == Some(target) {
            return cand;
        }
    }
    if let Target::Builtin(_) = target {
        return q.clone();
    }
    q.clone()
}

fn apply(e: &mut Element, replacements: &[Vec<QName>], next: &mut usize) {
    let mine = &replacements[*next];
    *next += 1;
    for ((q, _), new) in e.references_mut().into_iter().zip(mine) {
        *q = new.clone();
    }
    for m in &mut e.members {
        apply(m, replacements, next);
    }
}
