//! d-separation.
//!
//! The boolean query is a reachability sweep over (node, direction) states in
//! the style of Bayes-ball; it never enumerates paths. Path witnesses come from
//! a separate bounded depth-first enumerator, so truncating witnesses can never
//! change a verdict.
//!
//! A node that is itself in the conditioning set is treated as separated from
//! everything.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Digraph, NodeId};

/// Default cap on the number of witnesses [`open_paths`] returns.
pub const DEFAULT_MAX_PATHS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DsepError {
    #[error("unknown node {0}")]
    UnknownNode(usize),
    #[error("node {0} appears on both sides of the query")]
    Overlap(usize),
}

fn check_all<'a>(g: &Digraph, nodes: impl IntoIterator<Item = &'a NodeId>) -> Result<(), DsepError> {
    for &v in nodes {
        if !g.contains(v) {
            return Err(DsepError::UnknownNode(v.index()));
        }
    }
    Ok(())
}

/// True when no node of `a` is d-connected to any node of `b` given `given`.
pub fn d_separated(
    g: &Digraph,
    a: &BTreeSet<NodeId>,
    b: &BTreeSet<NodeId>,
    given: &BTreeSet<NodeId>,
) -> Result<bool, DsepError> {
    check_all(g, a.iter().chain(b).chain(given))?;
    if let Some(v) = a.intersection(b).next() {
        return Err(DsepError::Overlap(v.index()));
    }
    let reach = reachable(g, a, given);
    Ok(b.iter().all(|v| !reach.contains(v)))
}

/// Every node d-connected to some node of `sources` given `given`.
///
/// Sources and conditioned nodes are never in the result.
pub fn reachable(g: &Digraph, sources: &BTreeSet<NodeId>, given: &BTreeSet<NodeId>) -> BTreeSet<NodeId> {
    let n = g.node_count();
    let mut in_given = vec![false; n];
    for v in given {
        in_given[v.index()] = true;
    }
    // a collider passes the ball iff it is an ancestor of (or in) `given`
    let mut opens_collider = vec![false; n];
    for v in g.ancestral_closure(given) {
        opens_collider[v.index()] = true;
    }

    // state bit 0: arrived from a child (travelling up)
    // state bit 1: arrived from a parent (travelling down)
    const UP: u8 = 1;
    const DOWN: u8 = 2;
    let mut visited = vec![0u8; n];
    let mut stack: Vec<(NodeId, u8)> = Vec::new();
    for &s in sources {
        if !in_given[s.index()] {
            stack.push((s, UP));
        }
    }
    let mut out = BTreeSet::new();
    while let Some((v, dir)) = stack.pop() {
        let i = v.index();
        if visited[i] & dir != 0 {
            continue;
        }
        visited[i] |= dir;
        if !in_given[i] {
            out.insert(v);
        }
        if dir == UP {
            if in_given[i] {
                continue;
            }
            stack.extend(g.parents_of(v).iter().map(|&p| (p, UP)));
            stack.extend(g.children_of(v).iter().map(|&c| (c, DOWN)));
        } else {
            if !in_given[i] {
                stack.extend(g.children_of(v).iter().map(|&c| (c, DOWN)));
            }
            if opens_collider[i] {
                stack.extend(g.parents_of(v).iter().map(|&p| (p, UP)));
            }
        }
    }
    for s in sources {
        out.remove(s);
    }
    out
}

/// Orientation of the edge between consecutive path nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Link {
    /// `nodes[i] -> nodes[i + 1]`
    Forward,
    /// `nodes[i] <- nodes[i + 1]`
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Junction {
    Chain,
    Fork,
    Collider,
}

impl Junction {
    fn of(before: Link, after: Link) -> Junction {
        match (before, after) {
            (Link::Forward, Link::Backward) => Junction::Collider,
            (Link::Backward, Link::Forward) => Junction::Fork,
            _ => Junction::Chain,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Junction::Chain => "chain",
            Junction::Fork => "fork",
            Junction::Collider => "collider",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InnerNode {
    pub node: NodeId,
    pub junction: Junction,
    pub open: bool,
}

/// A simple path with each inner node classified and marked open or blocked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathWitness {
    pub nodes: Vec<NodeId>,
    pub links: Vec<Link>,
    pub inner: Vec<InnerNode>,
    pub open: bool,
}

impl PathWitness {
    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn source(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn target(&self) -> NodeId {
        *self.nodes.last().expect("paths have at least two nodes")
    }

    /// Renders the path as `A -> B <- C`, naming nodes with `name`.
    pub fn render(&self, name: impl Fn(NodeId) -> String) -> String {
        let mut s = name(self.nodes[0]);
        for (link, &v) in self.links.iter().zip(&self.nodes[1..]) {
            s.push_str(match link {
                Link::Forward => " -> ",
                Link::Backward => " <- ",
            });
            s.push_str(&name(v));
        }
        s
    }
}

impl fmt::Display for PathWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(|v| v.index().to_string()))
    }
}

/// Classifies every inner node of the path `nodes` under `given`.
///
/// Returns `None` if `nodes` is not a simple path of `g` (fewer than two
/// nodes, a repeated node, or non-adjacent neighbours).
pub fn annotate(g: &Digraph, nodes: &[NodeId], given: &BTreeSet<NodeId>) -> Option<PathWitness> {
    if nodes.len() < 2 || nodes.iter().any(|&v| !g.contains(v)) {
        return None;
    }
    let distinct: BTreeSet<_> = nodes.iter().collect();
    if distinct.len() != nodes.len() {
        return None;
    }
    let mut links = Vec::with_capacity(nodes.len() - 1);
    for w in nodes.windows(2) {
        links.push(if g.has_edge(w[0], w[1]) {
            Link::Forward
        } else if g.has_edge(w[1], w[0]) {
            Link::Backward
        } else {
            return None;
        });
    }
    let opens = g.ancestral_closure(given);
    let inner: Vec<InnerNode> = (1..nodes.len() - 1)
        .map(|i| {
            let junction = Junction::of(links[i - 1], links[i]);
            let v = nodes[i];
            let open = match junction {
                Junction::Collider => opens.contains(&v),
                _ => !given.contains(&v),
            };
            InnerNode { node: v, junction, open }
        })
        .collect();
    let open = inner.iter().all(|n| n.open) && !given.contains(&nodes[0]) && !given.contains(nodes.last()?);
    Some(PathWitness { nodes: nodes.to_vec(), links, inner, open })
}

/// Open paths between two nodes, in depth-first discovery order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OpenPaths {
    pub paths: Vec<PathWitness>,
    /// More open paths exist beyond `paths`.
    pub truncated: bool,
}

/// All simple open paths from `a` to `b` given `given`, up to `max_paths`.
///
/// The list is empty exactly when `a` and `b` are d-separated.
pub fn open_paths(
    g: &Digraph,
    a: NodeId,
    b: NodeId,
    given: &BTreeSet<NodeId>,
    max_paths: usize,
) -> Result<OpenPaths, DsepError> {
    check_all(g, [a, b].iter().chain(given))?;
    if a == b {
        return Err(DsepError::Overlap(a.index()));
    }
    let mut search = PathSearch::new(g, a, b, given, usize::MAX);
    search.run(max_paths);
    Ok(OpenPaths { paths: search.found, truncated: search.truncated })
}

/// The shortest open path from `a` to `b`, if any. Ties go to the path found
/// first by the depth-first order of [`open_paths`].
pub fn shortest_open_path(
    g: &Digraph,
    a: NodeId,
    b: NodeId,
    given: &BTreeSet<NodeId>,
) -> Result<Option<PathWitness>, DsepError> {
    check_all(g, [a, b].iter().chain(given))?;
    if a == b {
        return Err(DsepError::Overlap(a.index()));
    }
    if d_separated(g, &[a].into(), &[b].into(), given)? {
        return Ok(None);
    }
    for max_len in 1..g.node_count() {
        let mut search = PathSearch::new(g, a, b, given, max_len);
        search.run(1);
        if let Some(p) = search.found.pop() {
            return Ok(Some(p));
        }
    }
    unreachable!("d-connected nodes always have an open simple path")
}

struct PathSearch<'g> {
    g: &'g Digraph,
    target: NodeId,
    given: Vec<bool>,
    opens_collider: Vec<bool>,
    max_len: usize,
    on_path: Vec<bool>,
    nodes: Vec<NodeId>,
    links: Vec<Link>,
    found: Vec<PathWitness>,
    truncated: bool,
}

impl<'g> PathSearch<'g> {
    fn new(g: &'g Digraph, a: NodeId, b: NodeId, given: &BTreeSet<NodeId>, max_len: usize) -> Self {
        let n = g.node_count();
        let mut in_given = vec![false; n];
        for v in given {
            in_given[v.index()] = true;
        }
        let mut opens_collider = vec![false; n];
        for v in g.ancestral_closure(given) {
            opens_collider[v.index()] = true;
        }
        let mut on_path = vec![false; n];
        on_path[a.index()] = true;
        PathSearch {
            g,
            target: b,
            given: in_given,
            opens_collider,
            max_len,
            on_path,
            nodes: vec![a],
            links: Vec::new(),
            found: Vec::new(),
            truncated: false,
        }
    }

    fn run(&mut self, max_paths: usize) {
        let a = self.nodes[0];
        if self.given[a.index()] || self.given[self.target.index()] {
            return;
        }
        self.extend(max_paths);
    }

    fn inner_open(&self, v: NodeId, junction: Junction) -> bool {
        match junction {
            Junction::Collider => self.opens_collider[v.index()],
            _ => !self.given[v.index()],
        }
    }

    /// Returns false once the search should stop.
    fn extend(&mut self, max_paths: usize) -> bool {
        if self.links.len() >= self.max_len {
            return true;
        }
        let v = *self.nodes.last().expect("path is never empty");
        // merge parents and children in id order for a stable traversal
        let mut next: Vec<(NodeId, Link)> = self
            .g
            .parents_of(v)
            .iter()
            .map(|&p| (p, Link::Backward))
            .chain(self.g.children_of(v).iter().map(|&c| (c, Link::Forward)))
            .collect();
        next.sort_by_key(|&(w, _)| w);

        for (w, link) in next {
            if self.on_path[w.index()] {
                continue;
            }
            // v becomes an inner node once we step past it
            if let Some(&before) = self.links.last() {
                if !self.inner_open(v, Junction::of(before, link)) {
                    continue;
                }
            }
            self.nodes.push(w);
            self.links.push(link);
            let keep_going = if w == self.target {
                if self.found.len() == max_paths {
                    self.truncated = true;
                    false
                } else {
                    let p = self.witness();
                    self.found.push(p);
                    true
                }
            } else {
                self.on_path[w.index()] = true;
                let r = self.extend(max_paths);
                self.on_path[w.index()] = false;
                r
            };
            self.nodes.pop();
            self.links.pop();
            if !keep_going {
                return false;
            }
        }
        true
    }

    fn witness(&self) -> PathWitness {
        let inner = (1..self.nodes.len() - 1)
            .map(|i| {
                let junction = Junction::of(self.links[i - 1], self.links[i]);
                InnerNode { node: self.nodes[i], junction, open: true }
            })
            .collect();
        PathWitness { nodes: self.nodes.clone(), links: self.links.clone(), inner, open: true }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[usize]) -> BTreeSet<NodeId> {
        v.iter().map(|&i| NodeId::new(i)).collect()
    }

    #[test]
    fn chain_rule() {
        // 0 -> 1 -> 2
        let g = Digraph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert!(d_separated(&g, &ids(&[0]), &ids(&[2]), &ids(&[1])).unwrap());
        assert!(!d_separated(&g, &ids(&[0]), &ids(&[2]), &ids(&[])).unwrap());
    }

    #[test]
    fn collider_rule() {
        // 0 -> 1 <- 2, 1 -> 3
        let g = Digraph::new(4, [(0, 1), (2, 1), (1, 3)]).unwrap();
        assert!(d_separated(&g, &ids(&[0]), &ids(&[2]), &ids(&[])).unwrap());
        assert!(!d_separated(&g, &ids(&[0]), &ids(&[2]), &ids(&[1])).unwrap());
        // conditioning on a descendant of the collider opens it too
        assert!(!d_separated(&g, &ids(&[0]), &ids(&[2]), &ids(&[3])).unwrap());
    }

    #[test]
    fn conditioned_endpoint_is_separated() {
        let g = Digraph::new(2, [(0, 1)]).unwrap();
        assert!(d_separated(&g, &ids(&[0]), &ids(&[1]), &ids(&[0])).unwrap());
        assert!(d_separated(&g, &ids(&[0]), &ids(&[1]), &ids(&[1])).unwrap());
        assert!(open_paths(&g, NodeId::new(0), NodeId::new(1), &ids(&[1]), 8).unwrap().paths.is_empty());
    }

    #[test]
    fn errors() {
        let g = Digraph::new(2, [(0, 1)]).unwrap();
        assert_eq!(d_separated(&g, &ids(&[0]), &ids(&[5]), &ids(&[])), Err(DsepError::UnknownNode(5)));
        assert_eq!(d_separated(&g, &ids(&[0]), &ids(&[0]), &ids(&[])), Err(DsepError::Overlap(0)));
        assert!(open_paths(&g, NodeId::new(0), NodeId::new(0), &ids(&[]), 8).is_err());
    }

    #[test]
    fn disconnected_nodes_have_no_paths() {
        let g = Digraph::new(3, [(0, 1)]).unwrap();
        let r = open_paths(&g, NodeId::new(0), NodeId::new(2), &ids(&[]), 8).unwrap();
        assert!(r.paths.is_empty());
        assert!(!r.truncated);
    }

    #[test]
    fn witness_annotations() {
        // 0 <- 1 -> 2 : fork through 1
        let g = Digraph::new(3, [(1, 0), (1, 2)]).unwrap();
        let r = open_paths(&g, NodeId::new(0), NodeId::new(2), &ids(&[]), 8).unwrap();
        assert_eq!(r.paths.len(), 1);
        let p = &r.paths[0];
        assert_eq!(p.links, [Link::Backward, Link::Forward]);
        assert_eq!(p.inner, [InnerNode { node: NodeId::new(1), junction: Junction::Fork, open: true }]);
        assert_eq!(p.to_string(), "0 <- 1 -> 2");
    }

    #[test]
    fn truncation_is_flagged() {
        // four parallel two-step routes from 0 to 5
        let g = Digraph::new(6, [(0, 1), (0, 2), (0, 3), (0, 4), (1, 5), (2, 5), (3, 5), (4, 5)]).unwrap();
        let r = open_paths(&g, NodeId::new(0), NodeId::new(5), &ids(&[]), 2).unwrap();
        assert_eq!(r.paths.len(), 2);
        assert!(r.truncated);
        let all = open_paths(&g, NodeId::new(0), NodeId::new(5), &ids(&[]), 4).unwrap();
        assert_eq!(all.paths.len(), 4);
        assert!(!all.truncated);
    }

    #[test]
    fn shortest_prefers_fewer_edges() {
        // long route 0->1->2->3 and short route 0->3
        let g = Digraph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let p = shortest_open_path(&g, NodeId::new(0), NodeId::new(3), &ids(&[])).unwrap().unwrap();
        assert_eq!(p.nodes, ids(&[0, 3]).into_iter().collect::<Vec<_>>());
        assert!(shortest_open_path(&g, NodeId::new(0), NodeId::new(3), &ids(&[0])).unwrap().is_none());
    }

    #[test]
    fn annotate_rejects_non_paths() {
        let g = Digraph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert!(annotate(&g, &[NodeId::new(0), NodeId::new(2)], &ids(&[])).is_none());
        assert!(annotate(&g, &[NodeId::new(0)], &ids(&[])).is_none());
        let p = annotate(&g, &[NodeId::new(0), NodeId::new(1), NodeId::new(2)], &ids(&[1])).unwrap();
        assert!(!p.open);
        assert_eq!(p.inner[0].junction, Junction::Chain);
    }
}
