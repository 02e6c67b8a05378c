//! Seeded generators shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ssm2sysml::mapper::MappingOptions;
use ssm2sysml::ssm::{parse_ssm, SsmContext};
use ssm2sysml::sysml::ast::*;
use ssm2sysml::sysml::expr::{BinaryOp, Expr, Literal, UnaryOp};
use ssm2sysml::sysml::parse_sysml;
use ssm2sysml::trace::{evaluate_filter, EdgeKind, TraceGraph};

pub fn corpus(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(rel)
}

pub fn read_corpus(rel: &str) -> String {
    std::fs::read_to_string(corpus(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// SysML packages
// ---------------------------------------------------------------------------

const PLAIN_NAMES: &[&str] = &[
    "a", "b", "x1", "_tmp", "Engine", "kettle", "roleA_NewHire", "flow", "port", "Def", "z_9",
];
const ODD_NAMES: &[&str] = &[
    "License Allocation",
    "it's",
    "back\\slash",
    "part",
    "use",
    "1st",
    "ünïcode",
    "dash-ed",
];
const STRINGS: &[&str] = &["", "plain", "with \"quotes\"", "back\\slash", "two\nlines", "ünï ☕", "a;b{c}"];

/// Random models in the textual subset. Every element kind, relationship
/// kind, action form and filter form is reachable; the shapes respect what
/// the canonical text can express, so `emit` never fails on them.
pub struct PackageGen {
    pub rng: ChaCha8Rng,
    pub max_depth: usize,
}

impl PackageGen {
    pub fn new(seed: u64) -> Self {
        PackageGen {
            rng: rng(seed),
            max_depth: 3,
        }
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn name(&mut self) -> Name {
        let pool = if self.chance(0.2) { ODD_NAMES } else { PLAIN_NAMES };
        Name::new(*pool.choose(&mut self.rng).unwrap())
    }

    pub fn qname(&mut self) -> QName {
        let n = self.rng.gen_range(1..=3);
        QName((0..n).map(|_| self.name()).collect())
    }

    fn string(&mut self) -> String {
        STRINGS.choose(&mut self.rng).unwrap().to_string()
    }

    pub fn literal(&mut self) -> Literal {
        match self.rng.gen_range(0..5) {
            0 => Literal::Bool(self.rng.gen()),
            1 => Literal::Int(if self.chance(0.1) { u64::MAX } else { self.rng.gen_range(0..1000) }),
            2 => Literal::Real(match self.rng.gen_range(0..3) {
                0 => self.rng.gen_range(0..4000) as f64 / 4.0,
                1 => 1e300,
                _ => 1.5e-9,
            }),
            3 => Literal::String(self.string()),
            _ => Literal::Enum {
                ty: self.name(),
                literal: self.name(),
            },
        }
    }

    pub fn expr(&mut self, depth: usize) -> Expr {
        let leaf = depth == 0 || self.chance(0.35);
        if leaf {
            return if self.chance(0.5) {
                Expr::Literal(self.literal())
            } else {
                Expr::Path(self.qname().0)
            };
        }
        if self.chance(0.25) {
            let op = if self.chance(0.5) { UnaryOp::Neg } else { UnaryOp::Not };
            return Expr::Unary(op, Box::new(self.expr(depth - 1)));
        }
        let op = *BinaryOp::ALL.choose(&mut self.rng).unwrap();
        Expr::binary(op, self.expr(depth - 1), self.expr(depth - 1))
    }

    pub fn filter(&mut self, depth: usize) -> FilterExpr {
        if depth == 0 || self.chance(0.4) {
            return match self.rng.gen_range(0..5) {
                0 => FilterExpr::Const(self.rng.gen()),
                1 => FilterExpr::HasMetadata(self.qname()),
                2 => FilterExpr::MetadataEquals {
                    definition: self.qname(),
                    attribute: self.name(),
                    value: self.literal(),
                },
                3 => FilterExpr::TypedBy(self.qname()),
                _ => FilterExpr::KindIs(*ElementTag::ALL.choose(&mut self.rng).unwrap()),
            };
        }
        match self.rng.gen_range(0..3) {
            0 => FilterExpr::not(self.filter(depth - 1)),
            1 => FilterExpr::and(self.filter(depth - 1), self.filter(depth - 1)),
            _ => FilterExpr::or(self.filter(depth - 1), self.filter(depth - 1)),
        }
    }

    fn opt_name(&mut self, p: f64) -> Option<Name> {
        self.chance(p).then(|| self.name())
    }

    fn multiplicity(&mut self) -> Multiplicity {
        let lower = self.rng.gen_range(0..4);
        if self.chance(0.3) {
            Multiplicity::new(lower, UpperBound::Unbounded)
        } else {
            Multiplicity::new(lower, UpperBound::Bounded(lower + self.rng.gen_range(0..3)))
        }
    }

    fn relationships(&mut self, head: &[RelationshipKind], body: bool) -> Vec<Relationship> {
        let mut out = Vec::new();
        for _ in 0..self.rng.gen_range(0..3) {
            if let Some(&k) = head.choose(&mut self.rng) {
                out.push(Relationship::new(k, self.qname()));
            }
        }
        if body {
            const BODY: [RelationshipKind; 5] = [
                RelationshipKind::Refines,
                RelationshipKind::Frames,
                RelationshipKind::Satisfies,
                RelationshipKind::Exposes,
                RelationshipKind::References,
            ];
            for _ in 0..self.rng.gen_range(0..3) {
                let k = *BODY.choose(&mut self.rng).unwrap();
                out.push(Relationship::new(k, self.qname()));
            }
        }
        out
    }

    pub fn package(&mut self) -> Package {
        let mut p = Element::package(self.name().0);
        p.doc = self.chance(0.2).then(|| self.string());
        p.members = self.members(0);
        p
    }

    fn members(&mut self, depth: usize) -> Vec<Element> {
        if depth >= self.max_depth {
            return Vec::new();
        }
        let n = self.rng.gen_range(0..=5);
        (0..n).map(|_| self.element(depth + 1)).collect()
    }

    pub fn element(&mut self, depth: usize) -> Element {
        let tag = *ElementTag::ALL.choose(&mut self.rng).unwrap();
        match tag {
            ElementTag::TransitionUsage => {
                let mut e = Element::new(ElementKind::TransitionUsage {
                    source: self.qname(),
                    target: self.qname(),
                    trigger: self.chance(0.5).then(|| self.qname()),
                    guard: self.chance(0.5).then(|| self.expr(3)),
                    effect: self.chance(0.5).then(|| self.qname()),
                });
                e.name = self.opt_name(0.3);
                e
            }
            ElementTag::Succession => Element::new(ElementKind::Succession {
                first: self.qname(),
                then: self.qname(),
            }),
            ElementTag::Comment => {
                let mut e = Element::new(ElementKind::Comment { text: self.string() });
                e.name = self.opt_name(0.3);
                e
            }
            ElementTag::MetadataApplication => {
                let n = self.rng.gen_range(0..3);
                Element::new(ElementKind::MetadataApplication {
                    definition: self.qname(),
                    bindings: (0..n).map(|_| (self.name(), self.literal())).collect(),
                })
            }
            ElementTag::ConstraintExpr => {
                let kind = [
                    None,
                    Some(ConstraintKind::Require),
                    Some(ConstraintKind::Assume),
                    Some(ConstraintKind::Assert),
                ]
                .choose(&mut self.rng)
                .copied()
                .unwrap();
                let mut e = Element::new(ElementKind::ConstraintExpr { kind, expr: self.expr(4) });
                e.name = self.opt_name(0.5);
                e.relationships = self.relationships(
                    &[
                        RelationshipKind::Typing,
                        RelationshipKind::Subsetting,
                        RelationshipKind::Redefinition,
                    ],
                    false,
                );
                e
            }
            ElementTag::ActionUsage => self.action(depth),
            _ => self.declaration(tag, depth),
        }
    }

    fn action(&mut self, depth: usize) -> Element {
        match self.rng.gen_range(0..6) {
            0 => Element::new(ElementKind::ActionUsage(ActionForm::Assign {
                target: self.qname(),
                value: self.expr(3),
            })),
            1 => Element::new(ElementKind::ActionUsage(ActionForm::Send {
                signal: self.qname(),
                to: self.chance(0.5).then(|| self.qname()),
            })),
            2 => Element::new(ElementKind::ActionUsage(ActionForm::Accept { signal: self.qname() })),
            3 => {
                let n = self.rng.gen_range(0..4);
                let branches = (0..n)
                    .map(|_| DecisionBranch {
                        guard: self.chance(0.7).then(|| self.expr(2)),
                        target: self.qname(),
                    })
                    .collect();
                let mut e = Element::new(ElementKind::ActionUsage(ActionForm::Decide { branches }));
                e.name = self.opt_name(0.5);
                e
            }
            4 => self.decorate(ElementKind::ActionUsage(ActionForm::Plain), depth),
            _ => {
                let by = self.chance(0.6).then(|| self.qname());
                self.decorate(ElementKind::ActionUsage(ActionForm::Perform { by }), depth)
            }
        }
    }

    fn declaration(&mut self, tag: ElementTag, depth: usize) -> Element {
        let kind = match tag {
            ElementTag::Package => ElementKind::Package,
            ElementTag::MetadataDef => ElementKind::MetadataDef,
            ElementTag::EnumDef => {
                let n = self.rng.gen_range(0..4);
                ElementKind::EnumDef {
                    literals: (0..n).map(|_| self.name()).collect(),
                }
            }
            ElementTag::AttributeDef => ElementKind::AttributeDef,
            ElementTag::AttributeUsage => ElementKind::AttributeUsage {
                value: self.chance(0.5).then(|| self.expr(4)),
            },
            ElementTag::IndividualDef => ElementKind::IndividualDef,
            ElementTag::IndividualOccurrence => ElementKind::IndividualOccurrence,
            ElementTag::PartDef => ElementKind::PartDef,
            ElementTag::PartUsage => ElementKind::PartUsage,
            ElementTag::ItemDef => ElementKind::ItemDef,
            ElementTag::ItemUsage => ElementKind::ItemUsage,
            ElementTag::RequirementDef => ElementKind::RequirementDef,
            ElementTag::RequirementUsage => ElementKind::RequirementUsage,
            ElementTag::ConcernDef => ElementKind::ConcernDef,
            ElementTag::ConcernUsage => ElementKind::ConcernUsage,
            ElementTag::StakeholderUsage => ElementKind::StakeholderUsage,
            ElementTag::ViewpointDef => ElementKind::ViewpointDef,
            ElementTag::ViewpointUsage => ElementKind::ViewpointUsage,
            ElementTag::ViewUsage => {
                let n = self.rng.gen_range(0..3);
                ElementKind::ViewUsage {
                    filters: (0..n).map(|_| self.filter(3)).collect(),
                }
            }
            ElementTag::UseCaseDef => ElementKind::UseCaseDef,
            ElementTag::UseCaseUsage => ElementKind::UseCaseUsage,
            ElementTag::ActorUsage => ElementKind::ActorUsage,
            ElementTag::SubjectUsage => ElementKind::SubjectUsage,
            ElementTag::StateUsage => ElementKind::StateUsage {
                entry: self.chance(0.4).then(|| self.qname()),
                do_action: self.chance(0.4).then(|| self.qname()),
            },
            other => unreachable!("{other} is generated elsewhere"),
        };
        self.decorate(kind, depth)
    }

    /// Name, direction, `ref`, relationships, multiplicity, doc and members
    /// around a declaration payload.
    fn decorate(&mut self, kind: ElementKind, depth: usize) -> Element {
        let tag = kind.tag();
        let mut e = Element::new(kind);
        e.name = self.opt_name(0.85);
        if self.chance(0.15) {
            e.direction = [Direction::In, Direction::Out, Direction::InOut].choose(&mut self.rng).copied();
        }
        e.is_ref = self.chance(0.15);
        let head: &[RelationshipKind] = if tag == ElementTag::AttributeUsage {
            &[
                RelationshipKind::Typing,
                RelationshipKind::Subsetting,
                RelationshipKind::Redefinition,
            ]
        } else {
            &[
                RelationshipKind::Typing,
                RelationshipKind::Subsetting,
                RelationshipKind::Redefinition,
                RelationshipKind::Binding,
            ]
        };
        let is_enum = tag == ElementTag::EnumDef;
        e.relationships = self.relationships(head, !is_enum);
        e.multiplicity = self.chance(0.2).then(|| self.multiplicity());
        e.doc = self.chance(0.2).then(|| self.string());
        if !is_enum {
            e.members = self.members(depth);
        }
        e
    }
}

/// Element tags, relationship kinds and action forms present in a model.
#[derive(Debug, Default)]
pub struct Coverage {
    pub tags: BTreeSet<ElementTag>,
    pub relationships: BTreeSet<RelationshipKind>,
    pub action_forms: BTreeSet<&'static str>,
}

impl Coverage {
    pub fn add(&mut self, e: &Element) {
        self.tags.insert(e.tag());
        self.relationships.extend(e.relationships.iter().map(|r| r.kind));
        if let ElementKind::ActionUsage(f) = &e.kind {
            self.action_forms.insert(match f {
                ActionForm::Plain => "plain",
                ActionForm::Perform { .. } => "perform",
                ActionForm::Assign { .. } => "assign",
                ActionForm::Send { .. } => "send",
                ActionForm::Accept { .. } => "accept",
                ActionForm::Decide { .. } => "decide",
            });
        }
        for m in &e.members {
            self.add(m);
        }
    }

    pub fn is_complete(&self) -> bool {
        self.tags.len() == ElementTag::ALL.len()
            && self.relationships.len() == RelationshipKind::ALL.len()
            && self.action_forms.len() == 6
    }
}

// ---------------------------------------------------------------------------
// SSM contexts
// ---------------------------------------------------------------------------

const INDIVIDUAL_TYPES: &[&str] = &["Employee", "Person", "Team"];
const SCALARS: &[&str] = &["Integer", "Real", "Boolean", "String"];

struct PartDefSpec {
    name: String,
    /// `(name, type)`; scalar attributes first, then references.
    attributes: Vec<(String, String)>,
    refs: Vec<(String, String)>,
}

/// Generates `.ssm` source for a context that passes validation. Names use
/// disjoint prefixes so that nothing the mapper derives can collide.
pub fn random_ssm_source(seed: u64) -> String {
    let mut rng = rng(seed);
    let mut s = String::new();
    let _ = writeln!(s, "context Ctx{seed} {{");

    let n_ind = rng.gen_range(1..=5);
    let individuals: Vec<String> = (0..n_ind).map(|i| format!("p{i}")).collect();
    for id in &individuals {
        let ty = INDIVIDUAL_TYPES.choose(&mut rng).unwrap();
        let _ = writeln!(s, "    individual {id} : {ty} \"Person {id}\"");
    }

    let n_pd = rng.gen_range(0..=3);
    let mut pds: Vec<PartDefSpec> = Vec::new();
    for i in 0..n_pd {
        let mut pd = PartDefSpec {
            name: format!("Widget{i}"),
            attributes: Vec::new(),
            refs: Vec::new(),
        };
        for a in 0..rng.gen_range(1..=3) {
            pd.attributes
                .push((format!("attr{a}"), SCALARS.choose(&mut rng).unwrap().to_string()));
        }
        if i > 0 && rng.gen_bool(0.5) {
            pd.refs.push(("link".into(), format!("Widget{}", rng.gen_range(0..i))));
        }
        if rng.gen_bool(0.3) {
            pd.refs.push(("thing".into(), "Gadget".into()));
        }
        let _ = writeln!(s, "    part-def {} {{", pd.name);
        for (n, t) in &pd.attributes {
            let derived = t == "Integer" && n != "attr0" && pd.attributes[0].1 == "Integer" && rng.gen_bool(0.5);
            if derived {
                let _ = writeln!(s, "        attribute {n} : {t} = \"attr0 + 1\"");
            } else {
                let _ = writeln!(s, "        attribute {n} : {t}");
            }
        }
        for (n, t) in &pd.refs {
            let mult = ["", " [0..1]", " [1..*]", " [2..2]"].choose(&mut rng).unwrap();
            let _ = writeln!(s, "        ref {n} : {t}{mult}");
        }
        let _ = writeln!(s, "    }}");
        pds.push(pd);
    }
    let param_types: Vec<String> = pds
        .iter()
        .map(|p| p.name.clone())
        .chain(["Thing0".to_string(), "Thing1".to_string()])
        .collect();

    let n_rd = rng.gen_range(1..=3);
    for r in 0..n_rd {
        let rd = format!("rd{r}");
        let subset = |rng: &mut ChaCha8Rng| {
            let k = rng.gen_range(1..=individuals.len());
            let mut v: Vec<&String> = individuals.choose_multiple(rng, k).collect();
            v.sort();
            v.into_iter().cloned().collect::<Vec<_>>()
        };
        let customers = subset(&mut rng);
        let actors = subset(&mut rng);
        let owner = individuals.choose(&mut rng).unwrap().clone();
        let _ = writeln!(s, "    root-definition {rd} {{");
        let _ = writeln!(s, "        customer {}", customers.join(" "));
        let _ = writeln!(s, "        actor {}", actors.join(" "));
        let _ = writeln!(s, "        owner {owner}");

        let mut params: Vec<(String, String)> = vec![(format!("subj{r}"), param_types.choose(&mut rng).unwrap().clone())];
        let _ = writeln!(s, "        transformation \"transform things {r}\" {{");
        let _ = writeln!(s, "            subject {} : {}", params[0].0, params[0].1);
        for i in 0..rng.gen_range(0..=2) {
            let p = (format!("in{r}_{i}"), param_types.choose(&mut rng).unwrap().clone());
            let _ = writeln!(s, "            input {} : {}", p.0, p.1);
            params.push(p);
        }
        for i in 0..rng.gen_range(0..=2) {
            let p = (format!("out{r}_{i}"), param_types.choose(&mut rng).unwrap().clone());
            let _ = writeln!(s, "            output {} : {}", p.0, p.1);
            params.push(p);
        }
        let _ = writeln!(s, "        }}");
        let _ = writeln!(s, "        worldview \"worldview of {rd}\"");

        let n_ec = rng.gen_range(0..=3);
        for e in 0..n_ec {
            let kind = ["require", "assume", "assert"].choose(&mut rng).unwrap();
            let expr = ec_expr(&mut rng, &params, &pds);
            let refines = if e > 0 && rng.gen_bool(0.5) {
                format!(" refines ec{}", rng.gen_range(0..e))
            } else {
                String::new()
            };
            let _ = writeln!(s, "        environmental-constraint ec{e} \"constraint {e}\" {kind} \"{expr}\"{refines}");
        }
        let _ = writeln!(s, "    }}");

        if rng.gen_bool(0.8) {
            let mut performers = actors.clone();
            performers.push(owner.clone());
            let n_act = rng.gen_range(1..=5);
            let _ = writeln!(s, "    conceptual-model {rd} {{");
            for a in 0..n_act {
                let by = performers.choose(&mut rng).unwrap();
                let _ = writeln!(s, "        activity act{r}_{a} \"step {a}\" by {by}");
            }
            for a in 0..n_act {
                for b in a + 1..n_act {
                    if rng.gen_bool(0.35) {
                        let _ = writeln!(s, "        flow act{r}_{a} -> act{r}_{b}");
                    }
                }
            }
            for m in 0..rng.gen_range(0..=2) {
                let k = rng.gen_range(1..=n_act);
                let mut ctl: Vec<usize> = (0..n_act).collect::<Vec<_>>().choose_multiple(&mut rng, k).copied().collect();
                ctl.sort();
                let ctl: Vec<String> = ctl.iter().map(|a| format!("act{r}_{a}")).collect();
                let _ = writeln!(s, "        monitor mon{r}_{m} \"watch {m}\" controls {}", ctl.join(", "));
            }
            let _ = writeln!(s, "    }}");
        }
    }
    s.push_str("}\n");
    s
}

/// A formal expression over the root definition's parameters that resolves
/// through the declared part definitions.
fn ec_expr(rng: &mut ChaCha8Rng, params: &[(String, String)], pds: &[PartDefSpec]) -> String {
    let mut paths: Vec<(String, String)> = Vec::new();
    for (p, ty) in params {
        if let Some(pd) = pds.iter().find(|d| &d.name == ty) {
            for (a, t) in &pd.attributes {
                paths.push((format!("{p}.{a}"), t.clone()));
            }
            for (r, t) in &pd.refs {
                if let Some(target) = pds.iter().find(|d| &d.name == t) {
                    for (a, at) in &target.attributes {
                        paths.push((format!("{p}.{r}.{a}"), at.clone()));
                    }
                }
            }
        }
    }
    let Some((path, ty)) = paths.choose(rng).cloned() else {
        return ["true", "1 < 2", "not false"].choose(rng).unwrap().to_string();
    };
    match ty.as_str() {
        "Integer" => format!("{path} >= {}", rng.gen_range(0..10)),
        "Real" => format!("{path} * 2.5 < 100.0"),
        "Boolean" => format!("{path} or not {path}"),
        _ => format!("{path} != \\\"\\\""),
    }
}

/// A valid context plus mapping options that turn on the state pattern for
/// some root definitions with a conceptual model.
pub fn random_context(seed: u64) -> (SsmContext, MappingOptions) {
    let src = random_ssm_source(seed);
    let ctx = parse_ssm(&src, &format!("gen{seed}.ssm")).unwrap_or_else(|e| panic!("{e}\n{src}"));
    let mut r = rng(seed ^ 0x5eed);
    let mut opts = MappingOptions::default();
    for cm in &ctx.conceptual_models {
        if r.gen_bool(0.3) {
            opts.state_pattern.insert(cm.root_definition.id.clone());
        }
    }
    (ctx, opts)
}

// ---------------------------------------------------------------------------
// Traceability oracles over the golden model
// ---------------------------------------------------------------------------

pub fn golden() -> Package {
    parse_sysml(&read_corpus("golden/Context.sysml"), "Context.sysml").unwrap()
}

/// Reachability by repeated relaxation over the edge list until nothing
/// changes. Shares no code with the queue-based search.
pub fn fixpoint_reach(graph: &TraceGraph, from: usize, backward: bool, kinds: Option<&BTreeSet<EdgeKind>>) -> BTreeSet<usize> {
    let mut set = BTreeSet::from([from]);
    loop {
        let before = set.len();
        for e in graph.edges() {
            if kinds.is_some_and(|k| !k.contains(&e.kind)) {
                continue;
            }
            let (src, dst) = if backward { (e.to, e.from) } else { (e.from, e.to) };
            if set.contains(&src) {
                set.insert(dst);
            }
        }
        if set.len() == before {
            return set;
        }
    }
}

/// Filters whose names all resolve in the golden model.
pub fn golden_filter(rng: &mut ChaCha8Rng, depth: usize) -> FilterExpr {
    const ROLES: [&str; 6] = ["Customer", "Actor", "Transformation", "Worldview", "Owner", "Environment"];
    const TYPES: [&str; 10] = [
        "Employee",
        "Role",
        "Tool",
        "License",
        "OwnerConcern",
        "CustomerConcern",
        "ResourceAllocation",
        "EnvironmentalConstraints",
        "String",
        "Integer",
    ];
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..6) {
            0 => FilterExpr::Const(rng.gen()),
            1 => FilterExpr::HasMetadata(QName::simple(if rng.gen_bool(0.7) { "CATWOE" } else { "Rationale" })),
            2 | 3 => FilterExpr::MetadataEquals {
                definition: QName::simple("CATWOE"),
                attribute: Name::new("element"),
                value: Literal::enum_value("CatwoeElement", ROLES.choose(rng).unwrap()),
            },
            4 => FilterExpr::TypedBy(QName::simple(*TYPES.choose(rng).unwrap())),
            _ => FilterExpr::KindIs(*ElementTag::ALL.choose(rng).unwrap()),
        };
    }
    match rng.gen_range(0..3) {
        0 => FilterExpr::not(golden_filter(rng, depth - 1)),
        1 => FilterExpr::and(golden_filter(rng, depth - 1), golden_filter(rng, depth - 1)),
        _ => FilterExpr::or(golden_filter(rng, depth - 1), golden_filter(rng, depth - 1)),
    }
}

pub fn set(v: Vec<String>) -> BTreeSet<String> {
    v.into_iter().collect()
}

/// Checks the and/or/not laws for `f`'s top-level connective against the
/// evaluation of its operands.
pub fn filter_law_holds(model: &Package, f: &FilterExpr) -> Result<(), String> {
    let eval = |f: &FilterExpr| evaluate_filter(model, f).map(set).map_err(|e| e.to_string());
    let all = eval(&FilterExpr::Const(true))?;
    let got = eval(f)?;
    let want = match f {
        FilterExpr::And(a, b) => eval(a)?.intersection(&eval(b)?).cloned().collect(),
        FilterExpr::Or(a, b) => eval(a)?.union(&eval(b)?).cloned().collect(),
        FilterExpr::Not(a) => all.difference(&eval(a)?).cloned().collect(),
        _ => return Ok(()),
    };
    if got == want {
        Ok(())
    } else {
        Err(format!("law fails for `{f}`"))
    }
}
