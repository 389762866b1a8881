//! The m-DAG data model.
//!
//! An [`MDag`] is a causal DAG over substantive variables, augmented with one
//! response indicator `R_J` for every measured incomplete variable `J`.
//! Indicators are synthesized by [`MDag::build`]; callers only ever refer to
//! them through their owner's name.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Completeness of a substantive variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Complete,
    Incomplete,
    Unmeasured,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Complete => "complete",
            Status::Incomplete => "incomplete",
            Status::Unmeasured => "unmeasured",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What a variable is used for in the analysis and imputation models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Exposure,
    Outcome,
    Covariate,
    Auxiliary,
    /// Unmeasured causes. Never conditioned on, never imputed.
    Other,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Exposure => "exposure",
            Role::Outcome => "outcome",
            Role::Covariate => "covariate",
            Role::Auxiliary => "auxiliary",
            Role::Other => "other",
        }
    }

    /// Exposure, outcome or covariate.
    pub fn in_analysis_model(self) -> bool {
        matches!(self, Role::Exposure | Role::Outcome | Role::Covariate)
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Handle to a node of a [`Digraph`] or [`MDag`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(usize);

impl NodeId {
    pub const fn new(index: usize) -> Self {
        NodeId(index)
    }

    pub const fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Variable,
    Indicator { owner: NodeId },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown node {0}")]
    UnknownNode(usize),
    #[error("edge {0} -> {1} refers to a node outside the graph")]
    EdgeOutOfRange(usize, usize),
    #[error("self-edge on node {0}")]
    SelfEdge(usize),
    #[error("graph contains a cycle through nodes {0:?}")]
    Cycle(Vec<usize>),
}

/// A plain directed acyclic graph on nodes `0..n`.
///
/// This is the structure the d-separation engine walks. It carries no names
/// or roles, so arbitrary DAGs can be checked against oracles without
/// building a full [`MDag`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    parents: Vec<Vec<NodeId>>,
    children: Vec<Vec<NodeId>>,
}

impl Digraph {
    /// Builds a DAG. Duplicate edges are collapsed; cycles and self-edges are
    /// rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut parents = vec![BTreeSet::new(); n];
        let mut children = vec![BTreeSet::new(); n];
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(GraphError::EdgeOutOfRange(a, b));
            }
            if a == b {
                return Err(GraphError::SelfEdge(a));
            }
            children[a].insert(NodeId(b));
            parents[b].insert(NodeId(a));
        }
        let g = Digraph {
            parents: parents.into_iter().map(|s| s.into_iter().collect()).collect(),
            children: children.into_iter().map(|s| s.into_iter().collect()).collect(),
        };
        if let Some(cycle) = g.find_cycle() {
            return Err(GraphError::Cycle(cycle.into_iter().map(NodeId::index).collect()));
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.parents.len()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v.0 < self.parents.len()
    }

    fn check(&self, v: NodeId) -> Result<(), GraphError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(GraphError::UnknownNode(v.0))
        }
    }

    /// Parents in ascending id order. Panics on an out-of-range id.
    pub fn parents_of(&self, v: NodeId) -> &[NodeId] {
        &self.parents[v.0]
    }

    /// Children in ascending id order. Panics on an out-of-range id.
    pub fn children_of(&self, v: NodeId) -> &[NodeId] {
        &self.children[v.0]
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.contains(a) && self.children[a.0].binary_search(&b).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.children
            .iter()
            .enumerate()
            .flat_map(|(a, cs)| cs.iter().map(move |&b| (NodeId(a), b)))
    }

    pub fn edge_count(&self) -> usize {
        self.children.iter().map(Vec::len).sum()
    }

    pub fn ancestors(&self, v: NodeId) -> Result<BTreeSet<NodeId>, GraphError> {
        self.check(v)?;
        Ok(self.closure(std::iter::once(v), |g, u| g.parents_of(u), false))
    }

    pub fn descendants(&self, v: NodeId) -> Result<BTreeSet<NodeId>, GraphError> {
        self.check(v)?;
        Ok(self.closure(std::iter::once(v), |g, u| g.children_of(u), false))
    }

    /// Every node in `set` together with all of its ancestors.
    pub fn ancestral_closure(&self, set: &BTreeSet<NodeId>) -> BTreeSet<NodeId> {
        self.closure(set.iter().copied(), |g, u| g.parents_of(u), true)
    }

    fn closure<'a, F>(&'a self, seeds: impl Iterator<Item = NodeId>, step: F, keep_seeds: bool) -> BTreeSet<NodeId>
    where
        F: Fn(&'a Self, NodeId) -> &'a [NodeId],
    {
        let mut seen = BTreeSet::new();
        let mut queue: VecDeque<NodeId> = VecDeque::new();
        let seeds: Vec<NodeId> = seeds.collect();
        for &s in &seeds {
            if keep_seeds {
                seen.insert(s);
            }
            queue.push_back(s);
        }
        while let Some(u) = queue.pop_front() {
            for &w in step(self, u) {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        if !keep_seeds {
            // a seed can only be re-reached through a cycle, which is excluded
            for s in seeds {
                seen.remove(&s);
            }
        }
        seen
    }

    /// Kahn's algorithm, always releasing the smallest ready id first.
    pub fn topological_order(&self) -> Vec<NodeId> {
        let n = self.node_count();
        let mut indegree: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut ready: BTreeSet<NodeId> = (0..n).filter(|&i| indegree[i] == 0).map(NodeId).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(u) = ready.pop_first() {
            order.push(u);
            for &c in &self.children[u.0] {
                indegree[c.0] -= 1;
                if indegree[c.0] == 0 {
                    ready.insert(c);
                }
            }
        }
        order
    }

    fn find_cycle(&self) -> Option<Vec<NodeId>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Active,
            Done,
        }
        let n = self.node_count();
        let mut mark = vec![Mark::New; n];
        for root in 0..n {
            if mark[root] != Mark::New {
                continue;
            }
            // (node, next child index)
            let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
            mark[root] = Mark::Active;
            while let Some(&mut (u, ref mut next)) = stack.last_mut() {
                if let Some(&c) = self.children[u].get(*next) {
                    *next += 1;
                    match mark[c.0] {
                        Mark::New => {
                            mark[c.0] = Mark::Active;
                            stack.push((c.0, 0));
                        }
                        Mark::Active => {
                            let start = stack.iter().position(|&(v, _)| v == c.0).unwrap_or(0);
                            return Some(stack[start..].iter().map(|&(v, _)| NodeId(v)).collect());
                        }
                        Mark::Done => {}
                    }
                } else {
                    mark[u] = Mark::Done;
                    stack.pop();
                }
            }
        }
        None
    }
}

/// A variable declaration as handed to [`MDag::build`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableDecl {
    pub name: String,
    pub status: Status,
    /// Optional annotation; must agree with the role implied by the analysis.
    pub role: Option<Role>,
}

impl VariableDecl {
    pub fn new(name: impl Into<String>, status: Status) -> Self {
        VariableDecl { name: name.into(), status, role: None }
    }

    pub fn with_role(mut self, role: Role) -> Self {
        self.role = Some(role);
        self
    }
}

/// One end of a declared edge: a variable, or the response indicator of one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Endpoint {
    Variable(String),
    Indicator(String),
}

impl Endpoint {
    pub fn var(name: impl Into<String>) -> Self {
        Endpoint::Variable(name.into())
    }

    pub fn indicator(owner: impl Into<String>) -> Self {
        Endpoint::Indicator(owner.into())
    }

    pub fn name(&self) -> &str {
        match self {
            Endpoint::Variable(n) | Endpoint::Indicator(n) => n,
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Variable(n) => f.write_str(n),
            Endpoint::Indicator(n) => write!(f, "R[{n}]"),
        }
    }
}

/// The target: regression of `outcome` on `exposure` adjusted for
/// `covariates`, with `auxiliaries` added to the imputation models.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AnalysisSpec {
    pub exposure: String,
    pub outcome: String,
    pub covariates: Vec<String>,
    pub auxiliaries: Vec<String>,
}

impl AnalysisSpec {
    pub fn new(outcome: impl Into<String>, exposure: impl Into<String>) -> Self {
        AnalysisSpec { exposure: exposure.into(), outcome: outcome.into(), ..Default::default() }
    }

    pub fn covariates<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.covariates = names.into_iter().map(Into::into).collect();
        self
    }

    pub fn auxiliaries<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.auxiliaries = names.into_iter().map(Into::into).collect();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("variable name must not be empty")]
    EmptyName,
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("`{0}` is complete and has no response indicator")]
    IndicatorOfComplete(String),
    #[error("`{0}` is unmeasured and has no response indicator")]
    IndicatorOfUnmeasured(String),
    #[error("response indicators are sinks: edge {from} -> {to} leaves R[{}]", from.name())]
    EdgeFromIndicator { from: Endpoint, to: Endpoint },
    #[error("self-edge on {0}")]
    SelfEdge(Endpoint),
    #[error("duplicate edge {from} -> {to}")]
    DuplicateEdge { from: Endpoint, to: Endpoint },
    #[error("cycle detected: {}", .0.join(" -> "))]
    Cycle(Vec<String>),
    #[error("analysis has no exposure")]
    MissingExposure,
    #[error("analysis has no outcome")]
    MissingOutcome,
    #[error("`{name}` is used as both {first} and {second}")]
    OverlappingRoles { name: String, first: Role, second: Role },
    #[error("`{name}` is annotated as {declared} but the analysis makes it {inferred}")]
    RoleConflict { name: String, declared: Role, inferred: Role },
    #[error("`{name}` is unmeasured and cannot be the {role}")]
    UnmeasuredInModel { name: String, role: Role },
    #[error("measured variable `{0}` is neither in the analysis model nor an auxiliary")]
    MeasuredWithoutRole(String),
}

/// Which declaration a [`BuildError`] should be blamed on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Culprit {
    Variable(String),
    Edge(Endpoint, Endpoint),
    Analysis,
}

impl BuildError {
    pub fn culprit(&self) -> Culprit {
        use BuildError::*;
        match self {
            EmptyName | MissingExposure | MissingOutcome | OverlappingRoles { .. } => Culprit::Analysis,
            DuplicateVariable(n) | MeasuredWithoutRole(n) => Culprit::Variable(n.clone()),
            RoleConflict { name, .. } | UnmeasuredInModel { name, .. } => Culprit::Variable(name.clone()),
            // unknown names can come from edges or the analysis line; the
            // front end knows which and reports that statement instead
            UnknownVariable(_) => Culprit::Analysis,
            IndicatorOfComplete(n) | IndicatorOfUnmeasured(n) => Culprit::Variable(n.clone()),
            EdgeFromIndicator { from, to } | DuplicateEdge { from, to } => Culprit::Edge(from.clone(), to.clone()),
            SelfEdge(e) => Culprit::Edge(e.clone(), e.clone()),
            // indicators are sinks, so a cycle only runs through variables
            Cycle(names) => {
                let a = Endpoint::var(names.first().cloned().unwrap_or_default());
                let b = names.get(1).map(Endpoint::var).unwrap_or_else(|| a.clone());
                Culprit::Edge(a, b)
            }
        }
    }
}

/// A substantive variable of an [`MDag`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub role: Role,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Analysis {
    exposure: NodeId,
    outcome: NodeId,
    covariates: Vec<NodeId>,
    auxiliaries: Vec<NodeId>,
}

/// An immutable, validated m-DAG.
///
/// Node ids are canonical: variables are numbered in name order, followed by
/// the response indicators in the order of their owners. Two graphs built from
/// the same declarations in any order therefore compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MDag {
    name: String,
    variables: Vec<Variable>,
    /// Indicator node of each variable, if it has one.
    indicator: Vec<Option<NodeId>>,
    /// Owner of each indicator, indexed by `id - variables.len()`.
    owners: Vec<NodeId>,
    graph: Digraph,
    analysis: Analysis,
}

impl MDag {
    /// Validates declarations and synthesizes response indicators.
    pub fn build(
        name: impl Into<String>,
        variables: Vec<VariableDecl>,
        edges: Vec<(Endpoint, Endpoint)>,
        analysis: AnalysisSpec,
    ) -> Result<MDag, BuildError> {
        let mut decls = variables;
        for d in &decls {
            if d.name.is_empty() {
                return Err(BuildError::EmptyName);
            }
        }
        decls.sort_by(|a, b| a.name.cmp(&b.name));
        for w in decls.windows(2) {
            if w[0].name == w[1].name {
                return Err(BuildError::DuplicateVariable(w[1].name.clone()));
            }
        }
        let index: BTreeMap<&str, usize> = decls.iter().enumerate().map(|(i, d)| (d.name.as_str(), i)).collect();
        let lookup = |n: &str| index.get(n).copied().ok_or_else(|| BuildError::UnknownVariable(n.to_string()));

        // roles implied by the analysis
        if analysis.exposure.is_empty() {
            return Err(BuildError::MissingExposure);
        }
        if analysis.outcome.is_empty() {
            return Err(BuildError::MissingOutcome);
        }
        let mut inferred: BTreeMap<usize, Role> = BTreeMap::new();
        let assignments = std::iter::once((&analysis.outcome, Role::Outcome))
            .chain(std::iter::once((&analysis.exposure, Role::Exposure)))
            .chain(analysis.covariates.iter().map(|c| (c, Role::Covariate)))
            .chain(analysis.auxiliaries.iter().map(|a| (a, Role::Auxiliary)));
        for (n, role) in assignments {
            let i = lookup(n)?;
            if let Some(&first) = inferred.get(&i) {
                return Err(BuildError::OverlappingRoles { name: n.clone(), first, second: role });
            }
            inferred.insert(i, role);
        }

        let mut vars = Vec::with_capacity(decls.len());
        for (i, d) in decls.iter().enumerate() {
            let role = inferred.get(&i).copied().unwrap_or(Role::Other);
            if let Some(declared) = d.role {
                if declared != role {
                    return Err(BuildError::RoleConflict { name: d.name.clone(), declared, inferred: role });
                }
            }
            match (d.status, role) {
                (Status::Unmeasured, Role::Other) => {}
                (Status::Unmeasured, role) => {
                    return Err(BuildError::UnmeasuredInModel { name: d.name.clone(), role });
                }
                (_, Role::Other) => return Err(BuildError::MeasuredWithoutRole(d.name.clone())),
                _ => {}
            }
            vars.push(Variable { name: d.name.clone(), role, status: d.status });
        }

        let nv = vars.len();
        let mut indicator = vec![None; nv];
        let mut owners = Vec::new();
        for (i, v) in vars.iter().enumerate() {
            if v.status == Status::Incomplete {
                indicator[i] = Some(NodeId(nv + owners.len()));
                owners.push(NodeId(i));
            }
        }

        let resolve = |e: &Endpoint| -> Result<NodeId, BuildError> {
            match e {
                Endpoint::Variable(n) => lookup(n).map(NodeId),
                Endpoint::Indicator(n) => {
                    let i = lookup(n)?;
                    match vars[i].status {
                        Status::Complete => Err(BuildError::IndicatorOfComplete(n.clone())),
                        Status::Unmeasured => Err(BuildError::IndicatorOfUnmeasured(n.clone())),
                        Status::Incomplete => Ok(indicator[i].expect("incomplete variables own an indicator")),
                    }
                }
            }
        };

        let mut seen = BTreeSet::new();
        let mut pairs = Vec::with_capacity(edges.len());
        for (from, to) in &edges {
            let a = resolve(from)?;
            let b = resolve(to)?;
            if matches!(from, Endpoint::Indicator(_)) {
                return Err(BuildError::EdgeFromIndicator { from: from.clone(), to: to.clone() });
            }
            if a == b {
                return Err(BuildError::SelfEdge(from.clone()));
            }
            if !seen.insert((a, b)) {
                return Err(BuildError::DuplicateEdge { from: from.clone(), to: to.clone() });
            }
            pairs.push((a.0, b.0));
        }

        let total = nv + owners.len();
        let node_name = |id: usize| -> String {
            if id < nv {
                vars[id].name.clone()
            } else {
                format!("R_{}", vars[owners[id - nv].0].name)
            }
        };
        let graph = Digraph::new(total, pairs).map_err(|e| match e {
            GraphError::Cycle(ids) => {
                let mut names: Vec<String> = ids.into_iter().map(node_name).collect();
                if let Some(first) = names.first().cloned() {
                    names.push(first);
                }
                BuildError::Cycle(names)
            }
            other => unreachable!("edges were validated before construction: {other}"),
        })?;

        let id_of = |n: &String| NodeId(index[n.as_str()]);
        let analysis = Analysis {
            exposure: id_of(&analysis.exposure),
            outcome: id_of(&analysis.outcome),
            covariates: analysis.covariates.iter().map(id_of).collect(),
            auxiliaries: analysis.auxiliaries.iter().map(id_of).collect(),
        };

        Ok(MDag { name: name.into(), variables: vars, indicator, owners, graph, analysis })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn digraph(&self) -> &Digraph {
        &self.graph
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn variable_count(&self) -> usize {
        self.variables.len()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.graph.contains(v)
    }

    /// All substantive variables, in id order.
    pub fn variables(&self) -> impl Iterator<Item = (NodeId, &Variable)> + '_ {
        self.variables.iter().enumerate().map(|(i, v)| (NodeId(i), v))
    }

    /// All node ids: variables then indicators.
    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.node_count()).map(NodeId)
    }

    pub fn variable(&self, v: NodeId) -> Option<&Variable> {
        self.variables.get(v.0)
    }

    pub fn kind(&self, v: NodeId) -> Option<NodeKind> {
        if v.0 < self.variables.len() {
            Some(NodeKind::Variable)
        } else {
            self.owners.get(v.0 - self.variables.len()).map(|&owner| NodeKind::Indicator { owner })
        }
    }

    pub fn is_indicator(&self, v: NodeId) -> bool {
        matches!(self.kind(v), Some(NodeKind::Indicator { .. }))
    }

    /// Display name: the variable name, or `R_<owner>` for an indicator.
    pub fn node_name(&self, v: NodeId) -> String {
        match self.kind(v) {
            Some(NodeKind::Variable) => self.variables[v.0].name.clone(),
            Some(NodeKind::Indicator { owner }) => format!("R_{}", self.variables[owner.0].name),
            None => format!("#{}", v.0),
        }
    }

    /// Looks up a variable by name.
    pub fn variable_id(&self, name: &str) -> Option<NodeId> {
        self.variables
            .binary_search_by(|v| v.name.as_str().cmp(name))
            .ok()
            .map(NodeId)
    }

    /// Resolves `X`, `R[X]`, `M[X]` or `R_X` to a node. A variable literally
    /// named `R_X` wins over the indicator spelling.
    pub fn resolve(&self, text: &str) -> Option<NodeId> {
        let text = text.trim();
        if let Some(id) = self.variable_id(text) {
            return Some(id);
        }
        let owner = text
            .strip_prefix("R[")
            .or_else(|| text.strip_prefix("M["))
            .and_then(|s| s.strip_suffix(']'))
            .or_else(|| text.strip_prefix("R_"))?;
        self.variable_id(owner.trim()).and_then(|o| self.indicator_of(o))
    }

    pub fn status(&self, v: NodeId) -> Option<Status> {
        self.variable(v).map(|x| x.status)
    }

    pub fn role(&self, v: NodeId) -> Option<Role> {
        self.variable(v).map(|x| x.role)
    }

    pub fn indicator_of(&self, v: NodeId) -> Option<NodeId> {
        self.indicator.get(v.0).copied().flatten()
    }

    /// All response indicators, in owner order.
    pub fn indicators(&self) -> impl Iterator<Item = NodeId> + '_ {
        (self.variables.len()..self.node_count()).map(NodeId)
    }

    pub fn exposure(&self) -> NodeId {
        self.analysis.exposure
    }

    pub fn outcome(&self) -> NodeId {
        self.analysis.outcome
    }

    /// Covariates in declaration order.
    pub fn covariates(&self) -> &[NodeId] {
        &self.analysis.covariates
    }

    /// Auxiliaries in declaration order.
    pub fn auxiliaries(&self) -> &[NodeId] {
        &self.analysis.auxiliaries
    }

    /// The analysis-model covariates including the exposure: `{X} ∪ W`.
    pub fn adjustment_set(&self) -> BTreeSet<NodeId> {
        std::iter::once(self.analysis.exposure).chain(self.analysis.covariates.iter().copied()).collect()
    }

    fn variables_where(&self, pred: impl Fn(&Variable) -> bool) -> BTreeSet<NodeId> {
        self.variables().filter(|(_, v)| pred(v)).map(|(id, _)| id).collect()
    }

    pub fn complete_variables(&self) -> BTreeSet<NodeId> {
        self.variables_where(|v| v.status == Status::Complete)
    }

    /// Measured incomplete variables: exactly those with an indicator.
    pub fn incomplete_variables(&self) -> BTreeSet<NodeId> {
        self.variables_where(|v| v.status == Status::Incomplete)
    }

    pub fn unmeasured_variables(&self) -> BTreeSet<NodeId> {
        self.variables_where(|v| v.status == Status::Unmeasured)
    }

    /// Edges in (source id, target id) order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.graph.edges()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.graph.has_edge(a, b)
    }

    /// The declaration-level spelling of a node.
    pub fn endpoint(&self, v: NodeId) -> Endpoint {
        match self.kind(v) {
            Some(NodeKind::Indicator { owner }) => Endpoint::Indicator(self.variables[owner.0].name.clone()),
            _ => Endpoint::Variable(self.node_name(v)),
        }
    }

    /// The inputs that rebuild this graph.
    pub fn declarations(&self) -> (Vec<VariableDecl>, Vec<(Endpoint, Endpoint)>, AnalysisSpec) {
        let vars = self
            .variables
            .iter()
            .map(|v| VariableDecl { name: v.name.clone(), status: v.status, role: Some(v.role) })
            .collect();
        let edges = self.edges().map(|(a, b)| (self.endpoint(a), self.endpoint(b))).collect();
        let name = |id: &NodeId| self.variables[id.0].name.clone();
        let analysis = AnalysisSpec {
            exposure: name(&self.analysis.exposure),
            outcome: name(&self.analysis.outcome),
            covariates: self.analysis.covariates.iter().map(name).collect(),
            auxiliaries: self.analysis.auxiliaries.iter().map(name).collect(),
        };
        (vars, edges, analysis)
    }

    pub fn parents(&self, v: NodeId) -> Result<BTreeSet<NodeId>, GraphError> {
        self.graph.check(v)?;
        Ok(self.graph.parents_of(v).iter().copied().collect())
    }

    pub fn children(&self, v: NodeId) -> Result<BTreeSet<NodeId>, GraphError> {
        self.graph.check(v)?;
        Ok(self.graph.children_of(v).iter().copied().collect())
    }

    pub fn ancestors(&self, v: NodeId) -> Result<BTreeSet<NodeId>, GraphError> {
        self.graph.ancestors(v)
    }

    pub fn descendants(&self, v: NodeId) -> Result<BTreeSet<NodeId>, GraphError> {
        self.graph.descendants(v)
    }

    pub fn topological_order(&self) -> Vec<NodeId> {
        self.graph.topological_order()
    }

    /// Sorted display names of a node set.
    pub fn names<'a>(&self, set: impl IntoIterator<Item = &'a NodeId>) -> Vec<String> {
        let mut v: Vec<String> = set.into_iter().map(|&id| self.node_name(id)).collect();
        v.sort();
        v
    }
}
