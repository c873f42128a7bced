use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Root,
    Branch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoadNode {
    pub x: f64,
    pub y: f64,
    pub kind: NodeKind,
}

/// Planar road network. Edges are undirected index pairs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RoadGraph {
    pub nodes: Vec<RoadNode>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    nodes: Vec<[f64; 2]>,
    edges: Vec<[usize; 2]>,
}

impl RoadGraph {
    pub fn from_roots(points: impl IntoIterator<Item = (f64, f64)>) -> Self {
        Self {
            nodes: points
                .into_iter()
                .map(|(x, y)| RoadNode { x, y, kind: NodeKind::Root })
                .collect(),
            edges: Vec::new(),
        }
    }

    pub fn add_node(&mut self, x: f64, y: f64, parent: usize) -> usize {
        let id = self.nodes.len();
        self.nodes.push(RoadNode { x, y, kind: NodeKind::Branch });
        self.edges.push((parent, id));
        id
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.nodes.len()];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    /// True when every node can be reached from some root node.
    pub fn all_reachable_from_roots(&self) -> bool {
        let n = self.nodes.len();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| self.nodes[i].kind == NodeKind::Root).collect();
        for &r in &queue {
            seen[r] = true;
        }
        while let Some(i) = queue.pop_front() {
            for &j in &adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Endpoint indices are valid and no edge is a self-loop.
    pub fn is_well_formed(&self) -> bool {
        let n = self.nodes.len();
        self.edges.iter().all(|&(a, b)| a < n && b < n && a != b)
    }

    /// `{ "nodes": [[x, y], ...], "edges": [[i, j], ...] }`
    pub fn to_json(&self) -> String {
        let doc = GraphDoc {
            nodes: self.nodes.iter().map(|n| [n.x, n.y]).collect(),
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
        };
        serde_json::to_string(&doc).expect("plain numeric document")
    }
}
