//! The machine-readable report and its text rendering. Text is produced from
//! the same document as JSON, so the two formats cannot disagree.

use std::collections::BTreeSet;
use std::fmt::Write;

use mdag::dsep::PathWitness;
use mdag::validity::{Enumeration, Reason, SelfMissingnessPattern, SubsampleOption};
use mdag::{MDag, NodeId, StrategyReport, Verdict};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct GraphSummary {
    pub name: String,
    pub outcome: String,
    pub exposure: String,
    pub covariates: Vec<String>,
    pub auxiliaries: Vec<String>,
    pub complete: Vec<String>,
    pub incomplete: Vec<String>,
    pub unmeasured: Vec<String>,
    pub edges: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct PathNode {
    pub name: String,
    /// `chain`, `fork` or `collider`; absent for the two endpoints.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub junction: Option<&'static str>,
    /// `open` or `blocked`; absent for the two endpoints.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<&'static str>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub from: String,
    pub to: String,
    pub path: String,
    pub open: bool,
    pub nodes: Vec<PathNode>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReasonDoc {
    pub kind: &'static str,
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CraDoc {
    pub status: &'static str,
    pub reasons: Vec<ReasonDoc>,
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FullMiDoc {
    pub status: &'static str,
    pub phi: Vec<String>,
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WarningDoc {
    pub flag: bool,
    pub pattern: Vec<String>,
    pub description: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct OptionDoc {
    pub q: Vec<String>,
    pub p: Vec<String>,
    pub status: &'static str,
    pub inclusion_ok: bool,
    pub zmar_ok: bool,
    pub annotations: Vec<&'static str>,
    pub reasons: Vec<ReasonDoc>,
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub graph_summary: GraphSummary,
    pub has_unbiased_strategy: bool,
    pub cra: CraDoc,
    pub full_mi: FullMiDoc,
    pub warning: WarningDoc,
    pub eligible_q: Vec<String>,
    pub enumeration: &'static str,
    pub options: Vec<OptionDoc>,
    pub notes: Vec<String>,
}

/// A report on one subsample only.
#[derive(Debug, Clone, Serialize)]
pub struct SubsampleDocument {
    pub graph_summary: GraphSummary,
    pub option: OptionDoc,
}

fn names(g: &MDag, set: &BTreeSet<NodeId>) -> Vec<String> {
    let mut v: Vec<String> = set.iter().map(|&n| g.node_name(n)).collect();
    v.sort();
    v
}

pub fn summary(g: &MDag) -> GraphSummary {
    let list = |ids: &[NodeId]| ids.iter().map(|&n| g.node_name(n)).collect();
    GraphSummary {
        name: g.name().to_string(),
        outcome: g.node_name(g.outcome()),
        exposure: g.node_name(g.exposure()),
        covariates: list(g.covariates()),
        auxiliaries: list(g.auxiliaries()),
        complete: names(g, &g.complete_variables()),
        incomplete: names(g, &g.incomplete_variables()),
        unmeasured: names(g, &g.unmeasured_variables()),
        edges: g.edge_count(),
    }
}

pub fn witness(g: &MDag, w: &PathWitness) -> Witness {
    let name = |v: NodeId| g.node_name(v);
    let mut nodes = vec![PathNode { name: name(w.source()), junction: None, state: None }];
    for inner in &w.inner {
        nodes.push(PathNode {
            name: name(inner.node),
            junction: Some(inner.junction.as_str()),
            state: Some(if inner.open { "open" } else { "blocked" }),
        });
    }
    nodes.push(PathNode { name: name(w.target()), junction: None, state: None });
    Witness { from: name(w.source()), to: name(w.target()), path: w.render(name), open: w.open, nodes }
}

fn reason(g: &MDag, r: &Reason) -> ReasonDoc {
    let kind = match r.kind {
        mdag::validity::ReasonKind::OutcomeDependentSelection => "outcome_dependent_selection",
        mdag::validity::ReasonKind::MnarInducing => "mnar_inducing",
        mdag::validity::ReasonKind::SubsampleNotZMar => "subsample_not_z_mar",
    };
    ReasonDoc { kind, from: g.node_name(r.from), to: g.node_name(r.to) }
}

fn witnesses(g: &MDag, v: &Verdict) -> Vec<Witness> {
    v.witnesses().map(|w| witness(g, w)).collect()
}

pub fn option(g: &MDag, o: &SubsampleOption) -> OptionDoc {
    OptionDoc {
        q: names(g, &o.spec.q),
        p: names(g, &o.spec.p),
        status: o.verdict.status.as_str(),
        inclusion_ok: o.inclusion_ok,
        zmar_ok: o.zmar_ok,
        annotations: o.annotations.iter().map(|a| a.as_str()).collect(),
        reasons: o.verdict.reasons.iter().map(|r| reason(g, r)).collect(),
        witnesses: witnesses(g, &o.verdict),
    }
}

pub fn document(g: &MDag, r: &StrategyReport) -> ReportDocument {
    let pattern = r
        .warning
        .patterns
        .iter()
        .map(|p| match p {
            SelfMissingnessPattern::DirectCause => "direct_cause".to_string(),
            SelfMissingnessPattern::UnmeasuredCommonCause { cause } => {
                format!("unmeasured_common_cause({})", g.node_name(*cause))
            }
        })
        .collect();
    ReportDocument {
        graph_summary: summary(g),
        has_unbiased_strategy: r.has_unbiased_strategy(),
        cra: CraDoc {
            status: r.cra.status.as_str(),
            reasons: r.cra.reasons.iter().map(|x| reason(g, x)).collect(),
            witnesses: witnesses(g, &r.cra),
        },
        full_mi: FullMiDoc { status: r.full_mi.status.as_str(), phi: names(g, &r.phi), witnesses: witnesses(g, &r.full_mi) },
        warning: WarningDoc { flag: r.warning.flagged, pattern, description: r.warning.description.clone() },
        eligible_q: names(g, &r.eligible_q),
        enumeration: match r.enumeration {
            Enumeration::Exhaustive => "exhaustive",
            Enumeration::Skipped { .. } => "skipped",
        },
        options: r.options.iter().map(|o| option(g, o)).collect(),
        notes: r.notes.clone(),
    }
}

fn set(v: &[String]) -> String {
    format!("{{{}}}", v.join(", "))
}

fn push_witnesses(out: &mut String, ws: &[Witness]) {
    for w in ws {
        let _ = writeln!(out, "    {} ({})", w.path, if w.open { "open" } else { "blocked" });
    }
}

fn push_summary(out: &mut String, s: &GraphSummary) {
    let _ = writeln!(out, "graph {}", s.name);
    let mut model = format!("{} ~ {}", s.outcome, s.exposure);
    for c in &s.covariates {
        let _ = write!(model, " + {c}");
    }
    let _ = writeln!(out, "  analysis model: {model}");
    if !s.auxiliaries.is_empty() {
        let _ = writeln!(out, "  auxiliaries: {}", s.auxiliaries.join(", "));
    }
    let _ = writeln!(out, "  complete: {}", set(&s.complete));
    let _ = writeln!(out, "  incomplete: {}", set(&s.incomplete));
    if !s.unmeasured.is_empty() {
        let _ = writeln!(out, "  unmeasured: {}", set(&s.unmeasured));
    }
}

fn push_option(out: &mut String, o: &OptionDoc) {
    let mut line = format!("Q = {}, impute P = {}: {}", set(&o.q), set(&o.p), o.status);
    if !o.annotations.is_empty() {
        let _ = write!(line, " [{}]", o.annotations.join(", "));
    }
    let _ = writeln!(out, "  {line}");
    let _ = writeln!(
        out,
        "    inclusion check: {}; z-MAR check: {}",
        if o.inclusion_ok { "pass" } else { "fail" },
        if o.zmar_ok { "pass" } else { "fail" }
    );
    for r in &o.reasons {
        let _ = writeln!(out, "    {}: {} to {}", r.kind, r.from, r.to);
    }
    push_witnesses(out, &o.witnesses);
}

pub fn text(d: &ReportDocument) -> String {
    let mut out = String::new();
    push_summary(&mut out, &d.graph_summary);
    let _ = writeln!(out, "\ncomplete records analysis: {}", d.cra.status);
    push_witnesses(&mut out, &d.cra.witnesses);
    let _ = writeln!(out, "full-sample MI: {}", d.full_mi.status);
    let _ = writeln!(out, "  phi = {}", set(&d.full_mi.phi));
    push_witnesses(&mut out, &d.full_mi.witnesses);
    if d.warning.flag {
        let _ = writeln!(out, "warning: {} ({})", d.warning.description, d.warning.pattern.join(", "));
    }
    let _ = writeln!(out, "\neligible Q: {}", set(&d.eligible_q));
    let _ = writeln!(out, "subsample options ({}):", d.enumeration);
    for o in &d.options {
        push_option(&mut out, o);
    }
    let _ = writeln!(
        out,
        "\nunbiased strategy available: {}",
        if d.has_unbiased_strategy { "yes" } else { "no" }
    );
    if !d.notes.is_empty() {
        let _ = writeln!(out, "notes:");
        for n in &d.notes {
            let _ = writeln!(out, "  - {n}");
        }
    }
    out
}

pub fn subsample_text(d: &SubsampleDocument) -> String {
    let mut out = String::new();
    push_summary(&mut out, &d.graph_summary);
    out.push('\n');
    push_option(&mut out, &d.option);
    out
}
