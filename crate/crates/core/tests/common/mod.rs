#![allow(dead_code)]

use mdag::graph::{Digraph, NodeId};
use mdag::{AnalysisSpec, Endpoint, MDag, Status, VariableDecl};
use rand::seq::SliceRandom;
use rand::Rng;

/// A random DAG on `n` nodes: edges follow a shuffled order, each present
/// with probability `p`.
pub fn random_digraph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Digraph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                edges.push((order[i], order[j]));
            }
        }
    }
    Digraph::new(n, edges).expect("edges follow a topological order")
}

/// Each node independently with probability `p`.
pub fn random_subset<R: Rng>(rng: &mut R, n: usize, p: f64) -> Vec<NodeId> {
    (0..n).filter(|_| rng.random_bool(p)).map(NodeId::new).collect()
}

/// A random valid m-DAG with `nv` substantive variables.
///
/// The first two measured variables (in declaration order) are the outcome
/// and exposure; other measured variables are covariates or auxiliaries.
pub fn random_mdag<R: Rng>(rng: &mut R, nv: usize, p_edge: f64, p_ind: f64) -> MDag {
    assert!(nv >= 2);
    let names: Vec<String> = (0..nv).map(|i| format!("V{i}")).collect();
    let mut statuses: Vec<Status> = (0..nv)
        .map(|_| match rng.random_range(0..10) {
            0..=2 => Status::Complete,
            3..=7 => Status::Incomplete,
            _ => Status::Unmeasured,
        })
        .collect();
    for s in statuses.iter_mut().take(2) {
        if *s == Status::Unmeasured {
            *s = Status::Incomplete;
        }
    }
    let decls: Vec<VariableDecl> =
        names.iter().zip(&statuses).map(|(n, &s)| VariableDecl::new(n.clone(), s)).collect();

    let mut covariates = Vec::new();
    let mut auxiliaries = Vec::new();
    for i in 2..nv {
        if statuses[i] != Status::Unmeasured {
            if rng.random_bool(0.6) {
                covariates.push(names[i].clone());
            } else {
                auxiliaries.push(names[i].clone());
            }
        }
    }
    let analysis = AnalysisSpec::new(names[0].clone(), names[1].clone())
        .covariates(covariates)
        .auxiliaries(auxiliaries);

    let mut order: Vec<usize> = (0..nv).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 0..nv {
        for j in i + 1..nv {
            if rng.random_bool(p_edge) {
                edges.push((Endpoint::var(&names[order[i]]), Endpoint::var(&names[order[j]])));
            }
        }
    }
    for (j, owner) in names.iter().enumerate() {
        if statuses[j] != Status::Incomplete {
            continue;
        }
        for from in &names {
            if rng.random_bool(p_ind) {
                edges.push((Endpoint::var(from), Endpoint::indicator(owner)));
            }
        }
    }
    MDag::build("random", decls, edges, analysis).expect("generator only emits valid graphs")
}

/// Brute-force d-separation: enumerates every simple path between `a` and
/// `b` in the skeleton and applies the blocking rules node by node.
///
/// Shares nothing with the library beyond the edge list.
pub fn oracle_d_separated(g: &Digraph, a: &[NodeId], b: &[NodeId], given: &[NodeId]) -> bool {
    let n = g.node_count();
    let mut adj = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        adj[u.index()][v.index()] = true;
    }
    let in_given: Vec<bool> = (0..n).map(|v| given.iter().any(|c| c.index() == v)).collect();
    if a.iter().chain(b).any(|v| in_given[v.index()]) {
        return true;
    }

    // collider v is open iff v or a descendant of v is conditioned on
    let mut opens_collider = vec![false; n];
    for (v, slot) in opens_collider.iter_mut().enumerate() {
        let mut seen = vec![false; n];
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            if seen[u] {
                continue;
            }
            seen[u] = true;
            if in_given[u] {
                *slot = true;
                break;
            }
            stack.extend((0..n).filter(|&w| adj[u][w]));
        }
    }

    let targets: Vec<bool> = (0..n).map(|v| b.iter().any(|t| t.index() == v)).collect();
    fn walk(
        path: &mut Vec<usize>,
        adj: &[Vec<bool>],
        targets: &[bool],
        in_given: &[bool],
        opens_collider: &[bool],
    ) -> bool {
        let n = adj.len();
        let last = *path.last().unwrap();
        if path.len() >= 2 && targets[last] {
            let open = path.windows(3).all(|w| {
                let (p, v, q) = (w[0], w[1], w[2]);
                if adj[p][v] && adj[q][v] {
                    opens_collider[v]
                } else {
                    !in_given[v]
                }
            });
            if open {
                return true;
            }
        }
        for next in 0..n {
            if (adj[last][next] || adj[next][last]) && !path.contains(&next) {
                path.push(next);
                let found = walk(path, adj, targets, in_given, opens_collider);
                path.pop();
                if found {
                    return true;
                }
            }
        }
        false
    }

    for s in a {
        let mut path = vec![s.index()];
        if walk(&mut path, &adj, &targets, &in_given, &opens_collider) {
            return false;
        }
    }
    true
}

/// The blocking rules applied literally to one node sequence.
pub fn oracle_path_open(g: &Digraph, nodes: &[NodeId], given: &[NodeId]) -> bool {
    nodes.windows(3).all(|w| {
        let (p, v, q) = (w[0], w[1], w[2]);
        if g.has_edge(p, v) && g.has_edge(q, v) {
            let mut below = g.descendants(v).unwrap();
            below.insert(v);
            given.iter().any(|c| below.contains(c))
        } else {
            !given.contains(&v)
        }
    })
}
