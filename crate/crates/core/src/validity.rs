//! Deciding whether complete records analysis, multiple imputation of the full
//! sample, or multiple imputation within a subsample estimates the
//! exposure-outcome coefficient without bias.
//!
//! Notation used throughout:
//!
//! * `Y` outcome, `X` exposure, `W` covariates, `A` auxiliaries;
//! * `Z` the complete variables, `M` the measured incomplete variables;
//! * `R_J` the response indicator of `J ∈ M`.
//!
//! **Full sample.** `Φ` is the set of `V ∈ M` d-connected to some `R_J` given
//! `Z`. Imputing the full sample is unbiased iff `Φ` is empty.
//!
//! **Complete records.** Unbiased iff `Y` is d-separated from every indicator
//! of an incomplete analysis-model variable given `{X} ∪ W`.
//!
//! **Subsample.** Choose `Q ⊆ M` to restrict on (observed) and impute
//! `P = M \ Q`. Two checks must pass:
//!
//! 1. inclusion: `Y ⫫ R_J | {X} ∪ W` for every `J ∈ Q`;
//! 2. z-MAR within the subsample: `V ⫫ R_K | Z ∪ Q ∪ R_Q` for all `V, K ∈ P`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::dsep::{self, PathWitness};
use crate::graph::{MDag, NodeId, Role, Status};

/// Default upper bound on `|M|` for exhaustive subsample enumeration.
pub const DEFAULT_MAX_INCOMPLETE: usize = 16;

/// Fixed disclaimer attached to every ranked option list.
pub const RANKING_DISCLAIMER: &str = "Option ranking is advisory: subsample sizes depend on the data and cannot be read from the graph.";

const ALT_CONDITION_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidityError {
    #[error("unknown node {0}")]
    UnknownNode(usize),
    #[error("`{name}` is {status}; only measured incomplete variables can be restricted on")]
    NotIncomplete { name: String, status: Status },
    #[error("{count} measured incomplete variables exceeds the enumeration limit of {limit}")]
    LimitExceeded { count: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    Unbiased,
    PossiblyBiased,
}

impl VerdictStatus {
    pub fn is_unbiased(self) -> bool {
        self == VerdictStatus::Unbiased
    }

    pub fn as_str(self) -> &'static str {
        match self {
            VerdictStatus::Unbiased => "unbiased",
            VerdictStatus::PossiblyBiased => "possibly_biased",
        }
    }
}

impl fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Why a strategy may be biased.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReasonKind {
    /// The outcome is d-connected to a response indicator given `{X} ∪ W`
    /// (complete records analysis, or subsample inclusion check).
    OutcomeDependentSelection,
    /// A measured incomplete variable is d-connected to a response indicator
    /// given the complete variables (member of `Φ`).
    MnarInducing,
    /// Within the subsample, a variable to be imputed is d-connected to the
    /// response indicator of a variable to be imputed.
    SubsampleNotZMar,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reason {
    pub kind: ReasonKind,
    pub from: NodeId,
    pub to: NodeId,
    pub witnesses: Vec<PathWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub reasons: Vec<Reason>,
}

impl Verdict {
    fn from_reasons(reasons: Vec<Reason>) -> Self {
        let status = if reasons.is_empty() { VerdictStatus::Unbiased } else { VerdictStatus::PossiblyBiased };
        Verdict { status, reasons }
    }

    pub fn is_unbiased(&self) -> bool {
        self.status.is_unbiased()
    }

    pub fn witnesses(&self) -> impl Iterator<Item = &PathWitness> {
        self.reasons.iter().flat_map(|r| r.witnesses.iter())
    }
}

/// The variables restricted on (`q`) and imputed (`p`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsampleSpec {
    pub q: BTreeSet<NodeId>,
    pub p: BTreeSet<NodeId>,
}

impl SubsampleSpec {
    pub fn new(g: &MDag, q: BTreeSet<NodeId>) -> Self {
        let p = g.incomplete_variables().difference(&q).copied().collect();
        SubsampleSpec { q, p }
    }

    /// `Z ∪ Q ∪ {R_J : J ∈ Q}`.
    pub fn conditioning_set(&self, g: &MDag) -> BTreeSet<NodeId> {
        let mut c = g.complete_variables();
        for &j in &self.q {
            c.insert(j);
            c.extend(g.indicator_of(j));
        }
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Annotation {
    /// The subsample is the complete-records sample: every incomplete
    /// analysis-model variable is restricted on.
    CraEquivalent,
    /// Only the outcome is imputed and there are no auxiliaries, so nothing is
    /// gained over complete records analysis.
    NoEfficiencyGainVsCra,
    /// A strictly smaller restriction is also unbiased and keeps more rows.
    Dominated,
}

impl Annotation {
    pub fn as_str(self) -> &'static str {
        match self {
            Annotation::CraEquivalent => "cra_equivalent",
            Annotation::NoEfficiencyGainVsCra => "no_efficiency_gain_vs_cra",
            Annotation::Dominated => "dominated",
        }
    }
}

/// One evaluated subsample strategy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsampleOption {
    pub spec: SubsampleSpec,
    pub verdict: Verdict,
    /// Check 1: restricting on `Q` does not select on the outcome.
    pub inclusion_ok: bool,
    /// Check 2: the data are z-MAR within the subsample.
    pub zmar_ok: bool,
    pub annotations: Vec<Annotation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SelfMissingnessPattern {
    /// `Y -> R_Y`
    DirectCause,
    /// `Y <- U -> R_Y` with `U` unmeasured.
    UnmeasuredCommonCause { cause: NodeId },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelfMissingnessWarning {
    pub flagged: bool,
    pub patterns: Vec<SelfMissingnessPattern>,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum Enumeration {
    Exhaustive,
    /// Too many incomplete variables; only the full-sample option was evaluated.
    Skipped { count: usize, limit: usize },
}

/// Everything [`analyze`] concludes about one graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrategyReport {
    pub cra: Verdict,
    pub full_mi: Verdict,
    pub phi: BTreeSet<NodeId>,
    pub warning: SelfMissingnessWarning,
    pub eligible_q: BTreeSet<NodeId>,
    pub options: Vec<SubsampleOption>,
    pub enumeration: Enumeration,
    pub notes: Vec<String>,
}

impl StrategyReport {
    /// True if complete records, full-sample MI or some subsample MI is unbiased.
    pub fn has_unbiased_strategy(&self) -> bool {
        self.cra.is_unbiased() || self.full_mi.is_unbiased() || self.options.iter().any(|o| o.verdict.is_unbiased())
    }

    /// Unbiased options in rank order.
    pub fn unbiased_options(&self) -> impl Iterator<Item = &SubsampleOption> {
        self.options.iter().filter(|o| o.verdict.is_unbiased())
    }

    pub fn option_for(&self, q: &BTreeSet<NodeId>) -> Option<&SubsampleOption> {
        self.options.iter().find(|o| &o.spec.q == q)
    }
}

fn dsep(g: &MDag, a: &BTreeSet<NodeId>, b: &BTreeSet<NodeId>, c: &BTreeSet<NodeId>) -> bool {
    dsep::d_separated(g.digraph(), a, b, c).expect("ids come from the graph and sides are disjoint")
}

fn witness(g: &MDag, a: NodeId, b: NodeId, c: &BTreeSet<NodeId>) -> Option<PathWitness> {
    dsep::shortest_open_path(g.digraph(), a, b, c).expect("ids come from the graph")
}

/// Builds a path-based reason if `a` and `b` are d-connected given `c`.
fn connected_reason(g: &MDag, kind: ReasonKind, a: NodeId, b: NodeId, c: &BTreeSet<NodeId>) -> Option<Reason> {
    witness(g, a, b, c).map(|w| Reason { kind, from: a, to: b, witnesses: vec![w] })
}

fn indicators_of<'a>(g: &'a MDag, vars: impl IntoIterator<Item = &'a NodeId> + 'a) -> impl Iterator<Item = NodeId> + 'a {
    vars.into_iter().filter_map(|&v| g.indicator_of(v))
}

/// `Φ`: measured incomplete variables d-connected to some indicator given `Z`.
pub fn compute_phi(g: &MDag) -> BTreeSet<NodeId> {
    let z = g.complete_variables();
    let all_r: BTreeSet<NodeId> = g.indicators().collect();
    if all_r.is_empty() {
        return BTreeSet::new();
    }
    g.incomplete_variables()
        .into_iter()
        .filter(|&v| !dsep(g, &[v].into(), &all_r, &z))
        .collect()
}

/// Full-sample MI; `Φ` is returned alongside.
pub fn full_mi_verdict(g: &MDag) -> (Verdict, BTreeSet<NodeId>) {
    let phi = compute_phi(g);
    let z = g.complete_variables();
    let reasons = phi
        .iter()
        .map(|&v| {
            // witness: the shortest open path to any indicator
            let best = g
                .indicators()
                .filter_map(|r| witness(g, v, r, &z).map(|w| (r, w)))
                .min_by_key(|(_, w)| w.len())
                .expect("members of phi are d-connected to some indicator");
            Reason { kind: ReasonKind::MnarInducing, from: v, to: best.0, witnesses: vec![best.1] }
        })
        .collect();
    (Verdict::from_reasons(reasons), phi)
}

/// Complete records analysis.
pub fn cra_verdict(g: &MDag) -> Verdict {
    let y = g.outcome();
    let given = g.adjustment_set();
    let analysis_vars: Vec<NodeId> =
        g.variables().filter(|(_, v)| v.role.in_analysis_model()).map(|(id, _)| id).collect();
    let reasons = indicators_of(g, &analysis_vars)
        .filter_map(|r| connected_reason(g, ReasonKind::OutcomeDependentSelection, y, r, &given))
        .collect();
    Verdict::from_reasons(reasons)
}

/// Measured incomplete `J` whose indicator is independent of `Y` given `{X} ∪ W`.
pub fn eligible_q(g: &MDag) -> BTreeSet<NodeId> {
    let y = g.outcome();
    let given = g.adjustment_set();
    g.incomplete_variables()
        .into_iter()
        .filter(|&j| {
            let r = g.indicator_of(j).expect("incomplete variables own an indicator");
            dsep(g, &[y].into(), &[r].into(), &given)
        })
        .collect()
}

fn check_q(g: &MDag, q: &BTreeSet<NodeId>) -> Result<(), ValidityError> {
    for &j in q {
        if !g.contains(j) {
            return Err(ValidityError::UnknownNode(j.index()));
        }
        match g.status(j) {
            Some(Status::Incomplete) => {}
            Some(status) => return Err(ValidityError::NotIncomplete { name: g.node_name(j), status }),
            // indicators have no status
            None => return Err(ValidityError::NotIncomplete { name: g.node_name(j), status: Status::Complete }),
        }
    }
    Ok(())
}

fn evaluate(g: &MDag, q: BTreeSet<NodeId>) -> SubsampleOption {
    let y = g.outcome();
    let spec = SubsampleSpec::new(g, q);

    let adjust = g.adjustment_set();
    let inclusion: Vec<Reason> = indicators_of(g, &spec.q)
        .filter_map(|r| connected_reason(g, ReasonKind::OutcomeDependentSelection, y, r, &adjust))
        .collect();

    let c = spec.conditioning_set(g);
    let mut zmar = Vec::new();
    for &v in &spec.p {
        for r in indicators_of(g, &spec.p) {
            zmar.extend(connected_reason(g, ReasonKind::SubsampleNotZMar, v, r, &c));
        }
    }

    let inclusion_ok = inclusion.is_empty();
    let zmar_ok = zmar.is_empty();
    let reasons = inclusion.into_iter().chain(zmar).collect();
    SubsampleOption { spec, verdict: Verdict::from_reasons(reasons), inclusion_ok, zmar_ok, annotations: Vec::new() }
}

/// Both subsample checks for restricting on `q`.
pub fn subsample_verdict(g: &MDag, q: &BTreeSet<NodeId>) -> Result<SubsampleOption, ValidityError> {
    check_q(g, q)?;
    let mut opt = evaluate(g, q.clone());
    opt.annotations = static_annotations(g, &opt.spec);
    Ok(opt)
}

fn static_annotations(g: &MDag, spec: &SubsampleSpec) -> Vec<Annotation> {
    let mut out = Vec::new();
    let cra_sample = g
        .variables()
        .filter(|(_, v)| v.role.in_analysis_model() && v.status == Status::Incomplete)
        .all(|(id, _)| spec.q.contains(&id));
    if cra_sample && !spec.q.is_empty() {
        out.push(Annotation::CraEquivalent);
    }
    if g.auxiliaries().is_empty() && spec.p.len() == 1 && spec.p.contains(&g.outcome()) {
        out.push(Annotation::NoEfficiencyGainVsCra);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerateOptions {
    pub max_incomplete: usize,
    /// Also evaluate restrictions that fail the inclusion check.
    pub include_ineligible: bool,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { max_incomplete: DEFAULT_MAX_INCOMPLETE, include_ineligible: false }
    }
}

fn subsets(base: &[NodeId]) -> impl Iterator<Item = BTreeSet<NodeId>> + '_ {
    (0u64..1 << base.len()).map(move |mask| {
        base.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect()
    })
}

fn rank_key(g: &MDag, o: &SubsampleOption) -> (bool, usize, Vec<String>) {
    (!o.verdict.is_unbiased(), o.spec.q.len(), g.names(&o.spec.q))
}

/// Evaluates every restriction `Q ⊆ eligible_q(g)` (or every `Q ⊆ M` on
/// request) and ranks them: unbiased first, then by `|Q|`, then by name.
pub fn enumerate_subsamples(g: &MDag, opts: EnumerateOptions) -> Result<Vec<SubsampleOption>, ValidityError> {
    let m = g.incomplete_variables();
    if m.len() > opts.max_incomplete {
        return Err(ValidityError::LimitExceeded { count: m.len(), limit: opts.max_incomplete });
    }
    let base: Vec<NodeId> = if opts.include_ineligible { m.into_iter().collect() } else { eligible_q(g).into_iter().collect() };
    let mut options: Vec<SubsampleOption> = subsets(&base)
        .map(|q| {
            let mut o = evaluate(g, q);
            o.annotations = static_annotations(g, &o.spec);
            o
        })
        .collect();

    let unbiased: Vec<BTreeSet<NodeId>> =
        options.iter().filter(|o| o.verdict.is_unbiased()).map(|o| o.spec.q.clone()).collect();
    for o in options.iter_mut().filter(|o| o.verdict.is_unbiased()) {
        if unbiased.iter().any(|q| q.len() < o.spec.q.len() && q.is_subset(&o.spec.q)) {
            o.annotations.push(Annotation::Dominated);
        }
    }
    options.sort_by_cached_key(|o| rank_key(g, o));
    Ok(options)
}

/// Flags the two outcome self-missingness patterns: `Y -> R_Y`, or an
/// unmeasured `U` with `U -> Y` and `U -> R_Y`.
pub fn y_self_missingness_warning(g: &MDag) -> SelfMissingnessWarning {
    let y = g.outcome();
    let mut patterns = Vec::new();
    if let Some(ry) = g.indicator_of(y) {
        if g.has_edge(y, ry) {
            patterns.push(SelfMissingnessPattern::DirectCause);
        }
        for u in g.unmeasured_variables() {
            if g.has_edge(u, y) && g.has_edge(u, ry) {
                patterns.push(SelfMissingnessPattern::UnmeasuredCommonCause { cause: u });
            }
        }
    }
    let yname = g.node_name(y);
    let description = if patterns.is_empty() {
        format!("no direct or unmeasured-common-cause dependence of R_{yname} on {yname}")
    } else {
        let parts: Vec<String> = patterns
            .iter()
            .map(|p| match p {
                SelfMissingnessPattern::DirectCause => format!("{yname} directly causes its own missingness"),
                SelfMissingnessPattern::UnmeasuredCommonCause { cause } => {
                    format!("unmeasured {} causes both {yname} and R_{yname}", g.node_name(*cause))
                }
            })
            .collect();
        format!(
            "{}; complete records analysis and MI in any subsample will typically be biased for a linear regression coefficient",
            parts.join("; ")
        )
    };
    SelfMissingnessWarning { flagged: !patterns.is_empty(), patterns, description }
}

/// Restrictions where the inclusion condition stated over complete
/// variables and `Q` disagrees with the one stated over `{X} ∪ W`.
fn inclusion_condition_disagreements(g: &MDag) -> Vec<BTreeSet<NodeId>> {
    let m: Vec<NodeId> = g.incomplete_variables().into_iter().collect();
    if m.len() > ALT_CONDITION_LIMIT {
        return Vec::new();
    }
    let y = g.outcome();
    let adjust = g.adjustment_set();
    let z = g.complete_variables();
    subsets(&m)
        .filter(|q| !q.is_empty())
        .filter(|q| {
            let rq: BTreeSet<NodeId> = indicators_of(g, q).collect();
            let formal = dsep(g, &[y].into(), &rq, &adjust);
            let mut c: BTreeSet<NodeId> = z.union(q).copied().collect();
            c.remove(&y);
            let alt = dsep(g, &[y].into(), &rq, &c);
            formal != alt
        })
        .collect()
}

/// The full report for one graph.
pub fn analyze(g: &MDag) -> StrategyReport {
    analyze_with(g, EnumerateOptions::default())
}

pub fn analyze_with(g: &MDag, opts: EnumerateOptions) -> StrategyReport {
    let cra = cra_verdict(g);
    let (full_mi, phi) = full_mi_verdict(g);
    let warning = y_self_missingness_warning(g);
    let eligible = eligible_q(g);
    let (options, enumeration) = match enumerate_subsamples(g, opts) {
        Ok(o) => (o, Enumeration::Exhaustive),
        Err(ValidityError::LimitExceeded { count, limit }) => {
            let mut full = evaluate(g, BTreeSet::new());
            full.annotations = static_annotations(g, &full.spec);
            (vec![full], Enumeration::Skipped { count, limit })
        }
        Err(e) => unreachable!("enumeration only fails on the limit: {e}"),
    };

    let mut notes = vec![RANKING_DISCLAIMER.to_string()];
    if let Enumeration::Skipped { count, limit } = enumeration {
        notes.push(format!(
            "{count} incomplete variables exceed the enumeration limit of {limit}; evaluate specific restrictions individually"
        ));
    }
    if !options.iter().any(|o| o.verdict.is_unbiased()) {
        notes.push(
            "No full-sample or subsample imputation is unbiased under this graph; further auxiliary variables that block the listed paths may change this."
                .to_string(),
        );
    }
    let disagreements = inclusion_condition_disagreements(g);
    if !disagreements.is_empty() {
        let shown: Vec<String> =
            disagreements.iter().take(5).map(|q| format!("{{{}}}", g.names(q).join(", "))).collect();
        let more = if disagreements.len() > 5 { format!(" and {} more", disagreements.len() - 5) } else { String::new() };
        notes.push(format!(
            "Conditioning the inclusion check on complete variables and Q instead of the analysis-model covariates gives a different answer for Q = {}{more}; the analysis-model form is used.",
            shown.join(", ")
        ));
    }
    if warning.flagged {
        notes.push(format!("Outcome self-missingness: {}.", warning.description));
    }

    StrategyReport { cra, full_mi, phi, warning, eligible_q: eligible, options, enumeration, notes }
}

/// Variables that belong in the imputation model: analysis variables and auxiliaries.
pub fn imputation_model(g: &MDag) -> BTreeSet<NodeId> {
    g.variables().filter(|(_, v)| v.role != Role::Other).map(|(id, _)| id).collect()
}
