//! Referential-integrity and well-formedness checks on a parsed context.
//!
//! | id      | finding                                                   |
//! |---------|-----------------------------------------------------------|
//! | SSM-001 | reference to an undeclared individual                     |
//! | SSM-002 | any other dangling reference (constraint, activity, root definition, expression path) |
//! | SSM-003 | conceptual-model flows form a cycle                       |
//! | SSM-004 | an activity is performed by someone who is neither an actor nor the owner |
//! | SSM-005 | empty text or empty role list                             |
//! | SSM-006 | duplicate id within one root definition, model or part-def |
//! | SSM-007 | `refines` chain forms a cycle                             |
//! | SSM-008 | two generated elements would share a name, or one would shadow a scalar type or the package |
//! | SSM-009 | reference multiplicity with lower bound above upper bound |

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::diagnostic::{cmp_by_position, Diagnostic};
use crate::mapper::naming::{is_builtin, package_names, use_case_names, MappingOptions};
use crate::span::Loc;
use crate::sysml::expr::Expr;

use super::model::*;

pub fn validate_context(ctx: &SsmContext) -> Vec<Diagnostic> {
    validate_with(ctx, &MappingOptions::default())
}

pub fn validate_with(ctx: &SsmContext, opts: &MappingOptions) -> Vec<Diagnostic> {
    let mut v = Validator { ctx, out: Vec::new() };
    v.individuals();
    v.part_defs();
    for rd in &ctx.root_definitions {
        v.root_definition(rd);
    }
    for cm in &ctx.conceptual_models {
        v.conceptual_model(cm);
    }
    v.collisions(opts);
    let mut out = v.out;
    out.sort_by(cmp_by_position);
    out
}

struct Validator<'a> {
    ctx: &'a SsmContext,
    out: Vec<Diagnostic>,
}

impl<'a> Validator<'a> {
    fn push(&mut self, rule: &str, path: String, loc: &Loc, msg: String) {
        self.out.push(Diagnostic::error(rule, path, loc.span().cloned(), msg));
    }

    fn path(&self, parts: &[&str]) -> String {
        let mut s = self.ctx.name.clone();
        for p in parts {
            s.push('.');
            s.push_str(p);
        }
        s
    }

    fn nonempty(&mut self, text: &str, what: &str, path: String, loc: &Loc) {
        if text.trim().is_empty() {
            self.push("SSM-005", path, loc, format!("{what} is empty"));
        }
    }

    fn individuals(&mut self) {
        for i in &self.ctx.individuals {
            let p = self.path(&[&i.id]);
            self.nonempty(&i.display_name, &format!("display name of `{}`", i.id), p.clone(), &i.loc);
            self.nonempty(&i.definition_type, &format!("definition type of `{}`", i.id), p, &i.loc);
        }
    }

    fn part_defs(&mut self) {
        for pd in &self.ctx.part_defs {
            let mut seen = HashSet::new();
            for (name, loc) in pd
                .attributes
                .iter()
                .map(|a| (&a.name, &a.loc))
                .chain(pd.refs.iter().map(|r| (&r.name, &r.loc)))
            {
                if !seen.insert(name.as_str()) {
                    let p = self.path(&[&pd.name, name]);
                    self.push("SSM-006", p, loc, format!("part-def `{}` declares `{name}` twice", pd.name));
                }
            }
            for r in &pd.refs {
                if let Some(m) = &r.multiplicity {
                    if !m.is_valid() {
                        let p = self.path(&[&pd.name, &r.name]);
                        self.push("SSM-009", p, &r.loc, format!("multiplicity {m} has lower bound above upper bound"));
                    }
                }
            }
            for a in &pd.attributes {
                if let Some(e) = &a.value {
                    let p = self.path(&[&pd.name, &a.name]);
                    self.expression_paths(e, &p, &a.loc, |first| pd.feature_type(first).map(str::to_string));
                }
            }
        }
    }

    fn individual_ref(&mut self, r: &Ref, path: &str, role: &str) {
        if self.ctx.individual(&r.id).is_none() {
            self.push(
                "SSM-001",
                path.to_string(),
                &r.loc,
                format!("{role} `{}` is not a declared individual", r.id),
            );
        }
    }

    /// Checks every path in `e`: the first segment through `first`, the rest
    /// through the features of declared part definitions.
    fn expression_paths(&mut self, e: &Expr, path: &str, loc: &Loc, first: impl Fn(&str) -> Option<String>) {
        for segs in e.paths() {
            let text = segs.iter().map(|n| n.as_str()).collect::<Vec<_>>().join(".");
            let Some(mut ty) = first(segs[0].as_str()) else {
                self.push(
                    "SSM-002",
                    path.to_string(),
                    loc,
                    format!("expression refers to unknown `{}` in `{text}`", segs[0].as_str()),
                );
                continue;
            };
            for seg in &segs[1..] {
                let next = self
                    .ctx
                    .part_def(&ty)
                    .and_then(|pd| pd.feature_type(seg.as_str()))
                    .map(str::to_string);
                match next {
                    Some(t) => ty = t,
                    None => {
                        self.push(
                            "SSM-002",
                            path.to_string(),
                            loc,
                            format!("`{ty}` has no feature `{}` (in `{text}`)", seg.as_str()),
                        );
                        break;
                    }
                }
            }
        }
    }

    fn root_definition(&mut self, rd: &'a RootDefinition) {
        let rp = self.path(&[&rd.id]);
        if rd.customers.is_empty() {
            self.push("SSM-005", rp.clone(), &rd.loc, format!("root definition `{}` has no customer", rd.id));
        }
        if rd.actors.is_empty() {
            self.push("SSM-005", rp.clone(), &rd.loc, format!("root definition `{}` has no actor", rd.id));
        }
        for c in &rd.customers {
            self.individual_ref(c, &rp, "customer");
        }
        for a in &rd.actors {
            self.individual_ref(a, &rp, "actor");
        }
        self.individual_ref(&rd.owner, &rp, "owner");
        self.nonempty(&rd.worldview, "worldview", rp.clone(), &rd.loc);
        let t = &rd.transformation;
        self.nonempty(&t.statement, "transformation statement", rp.clone(), &t.loc);
        self.nonempty(&t.subject.name, "subject name", rp.clone(), &t.subject.loc);
        self.nonempty(&t.subject.type_name, "subject type", rp.clone(), &t.subject.loc);

        let mut params = HashSet::new();
        for p in rd.parameters() {
            if !params.insert(p.name.as_str()) {
                self.push(
                    "SSM-006",
                    format!("{rp}.{}", p.name),
                    &p.loc,
                    format!("transformation declares `{}` twice", p.name),
                );
            }
        }

        let mut ec_ids = HashSet::new();
        for ec in &rd.environmental_constraints {
            let ep = format!("{rp}.{}", ec.id);
            if !ec_ids.insert(ec.id.as_str()) {
                self.push("SSM-006", ep.clone(), &ec.loc, format!("environmental constraint `{}` declared twice", ec.id));
            }
            self.nonempty(&ec.text, &format!("text of `{}`", ec.id), ep.clone(), &ec.loc);
            if let Some(r) = &ec.refines {
                if rd.constraint(&r.id).is_none() {
                    self.push(
                        "SSM-002",
                        ep.clone(),
                        &r.loc,
                        format!("`{}` refines unknown environmental constraint `{}`", ec.id, r.id),
                    );
                }
            }
            if let Some(e) = &ec.expr {
                self.expression_paths(e, &ep, &ec.loc, |first| {
                    rd.parameters().find(|p| p.name == first).map(|p| p.type_name.clone())
                });
            }
        }

        // refinement cycles: follow each chain once
        let next: HashMap<&str, &str> = rd
            .environmental_constraints
            .iter()
            .filter_map(|ec| ec.refines.as_ref().map(|r| (ec.id.as_str(), r.id.as_str())))
            .collect();
        let mut reported: HashSet<&str> = HashSet::new();
        for ec in &rd.environmental_constraints {
            let mut chain = vec![ec.id.as_str()];
            let mut cur = ec.id.as_str();
            while let Some(&n) = next.get(cur) {
                if let Some(pos) = chain.iter().position(|c| *c == n) {
                    let cycle = &chain[pos..];
                    if cycle.contains(&ec.id.as_str()) && cycle.iter().all(|c| !reported.contains(c)) {
                        reported.extend(cycle.iter().copied());
                        let mut text: Vec<&str> = cycle.to_vec();
                        text.push(n);
                        self.push(
                            "SSM-007",
                            format!("{rp}.{}", ec.id),
                            &ec.loc,
                            format!("refinement cycle {}", text.join(" -> ")),
                        );
                    }
                    break;
                }
                chain.push(n);
                cur = n;
            }
        }
    }

    fn conceptual_model(&mut self, cm: &'a ConceptualModel) {
        let rd = self.ctx.root_definition(&cm.root_definition.id);
        let cp = self.path(&[&cm.root_definition.id, "model"]);
        if rd.is_none() {
            self.push(
                "SSM-002",
                cp.clone(),
                &cm.root_definition.loc,
                format!("conceptual model for unknown root definition `{}`", cm.root_definition.id),
            );
        }
        let mut ids = HashSet::new();
        for (id, loc) in cm
            .activities
            .iter()
            .map(|a| (&a.id, &a.loc))
            .chain(cm.monitors.iter().map(|m| (&m.id, &m.loc)))
        {
            if !ids.insert(id.as_str()) {
                self.push("SSM-006", format!("{cp}.{id}"), loc, format!("`{id}` declared twice in the conceptual model"));
            }
        }
        for a in &cm.activities {
            let ap = format!("{cp}.{}", a.id);
            self.nonempty(&a.label, &format!("label of `{}`", a.id), ap.clone(), &a.loc);
            self.individual_ref(&a.performed_by, &ap, "performer");
            if let Some(rd) = rd {
                let ok = rd.owner.id == a.performed_by.id || rd.actors.iter().any(|x| x.id == a.performed_by.id);
                if !ok && self.ctx.individual(&a.performed_by.id).is_some() {
                    self.push(
                        "SSM-004",
                        ap,
                        &a.performed_by.loc,
                        format!(
                            "`{}` performs `{}` but is neither an actor nor the owner of `{}`",
                            a.performed_by.id, a.id, rd.id
                        ),
                    );
                }
            }
        }
        for f in &cm.flows {
            for end in [&f.from, &f.to] {
                if cm.activity(&end.id).is_none() {
                    self.push("SSM-002", cp.clone(), &end.loc, format!("flow endpoint `{}` is not an activity", end.id));
                }
            }
        }
        for m in &cm.monitors {
            let mp = format!("{cp}.{}", m.id);
            self.nonempty(&m.label, &format!("label of `{}`", m.id), mp.clone(), &m.loc);
            for c in &m.controls {
                if cm.activity(&c.id).is_none() {
                    self.push("SSM-002", mp.clone(), &c.loc, format!("monitor controls unknown activity `{}`", c.id));
                }
            }
        }
        if let Some(cycle) = flow_cycle(cm) {
            let first = cm.flows.iter().find(|f| f.from.id == cycle[0]).map(|f| &f.loc).unwrap_or(&cm.loc);
            self.push("SSM-003", cp, first, format!("activity flows form a cycle {}", cycle.join(" -> ")));
        }
    }

    fn collisions(&mut self, opts: &MappingOptions) {
        let ctx_loc = self.ctx.loc.clone();
        let mut seen: BTreeMap<String, String> = BTreeMap::new();
        let reserved = |n: &str| is_builtin(n) || n == self.ctx.name;
        let mut found = Vec::new();
        for (name, what) in package_names(self.ctx, opts) {
            if reserved(&name) {
                found.push((name.clone(), format!("{what} would be named `{name}`, which is reserved")));
            } else if let Some(prev) = seen.get(&name) {
                found.push((name.clone(), format!("{what} and {prev} would both be named `{name}`")));
            } else {
                seen.insert(name, what);
            }
        }
        for rd in &self.ctx.root_definitions {
            let mut local: BTreeMap<String, String> = BTreeMap::new();
            for (name, what) in use_case_names(self.ctx, rd) {
                if let Some(prev) = local.get(&name) {
                    // same-kind duplicates are SSM-006 findings
                    if name_kind(&what) == name_kind(prev) {
                        continue;
                    }
                    found.push((
                        format!("{}.{name}", rd.id),
                        format!("{what} and {prev} would both be named `{name}` in use case `{}`", rd.id),
                    ));
                } else {
                    local.insert(name, what);
                }
            }
            if rd.transformation.subject.name == rd.id {
                found.push((
                    rd.id.clone(),
                    format!("subject `{}` and the use case of `{}` would share a name", rd.id, rd.id),
                ));
            }
            let mut stake = HashSet::new();
            for c in &rd.customers {
                if c.id == rd.transformation.subject.name && stake.insert(c.id.as_str()) {
                    found.push((
                        rd.id.clone(),
                        format!("customer `{}` and the subject would share a name in the customer concern", c.id),
                    ));
                }
            }
            if rd.owner.id == rd.transformation.subject.name {
                found.push((
                    rd.id.clone(),
                    format!("owner `{}` and the subject would share a name in the owner concern", rd.owner.id),
                ));
            }
        }
        for (name, msg) in found {
            let p = self.path(&[&name]);
            self.push("SSM-008", p, &ctx_loc, msg);
        }
    }
}

fn name_kind(what: &str) -> &str {
    match what.split(' ').next().unwrap_or("") {
        "activity" | "monitor" => "cm",
        k => k,
    }
}

/// First cycle in the flow graph, as activity ids with the start repeated at the end.
fn flow_cycle(cm: &ConceptualModel) -> Option<Vec<String>> {
    let ids: Vec<&str> = cm.activities.iter().map(|a| a.id.as_str()).collect();
    let mut succ: HashMap<&str, Vec<&str>> = HashMap::new();
    for f in &cm.flows {
        succ.entry(f.from.id.as_str()).or_default().push(f.to.id.as_str());
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state: HashMap<&str, u8> = HashMap::new();
    fn dfs<'a>(
        n: &'a str,
        succ: &HashMap<&'a str, Vec<&'a str>>,
        state: &mut HashMap<&'a str, u8>,
        stack: &mut Vec<&'a str>,
    ) -> Option<Vec<String>> {
        state.insert(n, 1);
        stack.push(n);
        for &m in succ.get(n).map(Vec::as_slice).unwrap_or(&[]) {
            match state.get(m).copied().unwrap_or(0) {
                1 => {
                    let pos = stack.iter().position(|s| *s == m).unwrap_or(0);
                    let mut cyc: Vec<String> = stack[pos..].iter().map(|s| s.to_string()).collect();
                    cyc.push(m.to_string());
                    return Some(cyc);
                }
                0 => {
                    if let Some(c) = dfs(m, succ, state, stack) {
                        return Some(c);
                    }
                }
                _ => {}
            }
        }
        stack.pop();
        state.insert(n, 2);
        None
    }
    let mut starts: Vec<&str> = ids.clone();
    starts.extend(cm.flows.iter().map(|f| f.from.id.as_str()));
    for s in starts {
        if state.get(s).copied().unwrap_or(0) == 0 {
            let mut stack = Vec::new();
            if let Some(c) = dfs(s, &succ, &mut state, &mut stack) {
                return Some(c);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ssm::parser::parse_ssm;

    const BASE: &str = r#"context P {
    individual a : E "A"
    individual b : E "B"
    part-def S { attribute n : Integer }
    root-definition r {
        customer a
        actor a
        owner b
        transformation "t" { subject s : S }
        worldview "w"
        environmental-constraint e1 "x" require "s.n > 0"
    }
    conceptual-model r {
        activity x1 "X1" by a
        activity x2 "X2" by b
        flow x1 -> x2
    }
}"#;

    fn rules(src: &str) -> Vec<String> {
        validate_context(&parse_ssm(src, "t").unwrap())
            .into_iter()
            .map(|d| d.rule_id)
            .collect()
    }

    #[test]
    fn base_is_valid() {
        assert_eq!(rules(BASE), Vec::<String>::new());
    }

    #[test]
    fn unknown_actor() {
        let d = validate_context(&parse_ssm(&BASE.replace("actor a", "actor a bob"), "t").unwrap());
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].rule_id, "SSM-001");
        assert_eq!(d[0].span.as_ref().unwrap().start(), (7, 17));
    }

    #[test]
    fn flow_cycle_is_reported_once() {
        let src = BASE.replace("flow x1 -> x2", "flow x1 -> x2\n        flow x2 -> x1");
        let d = validate_context(&parse_ssm(&src, "t").unwrap());
        assert_eq!(d.len(), 1, "{d:?}");
        assert_eq!(d[0].rule_id, "SSM-003");
        assert!(d[0].message.contains("x1 -> x2 -> x1"));
    }

    #[test]
    fn each_rule() {
        assert_eq!(rules(&BASE.replace("s.n > 0", "s.m > 0")), ["SSM-002"]);
        assert_eq!(rules(&BASE.replace("by b", "by ghost")), ["SSM-001"]);
        assert_eq!(rules(&BASE.replace("owner b", "owner a")), ["SSM-004"]);
        assert_eq!(rules(&BASE.replace("worldview \"w\"", "worldview \" \"")), ["SSM-005"]);
        assert_eq!(rules(&BASE.replace("activity x2", "activity x1")).first().map(String::as_str), Some("SSM-006"));
        assert_eq!(
            rules(&BASE.replace("require \"s.n > 0\"", "refines e1")),
            ["SSM-007"]
        );
        assert_eq!(rules(&BASE.replace("individual b", "individual resources").replace("owner b", "owner resources").replace("by b", "by resources")), ["SSM-008"]);
    }
}
