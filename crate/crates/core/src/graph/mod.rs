//! Simple undirected graphs with a canonical edge orientation.
//!
//! Vertices are numbered `1..=n`. Every stored edge `(u, v)` has `u < v` and the
//! edge list is sorted lexicographically; the position of an edge in that list
//! is its index for shift assignments.

mod format;

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub use format::{parse_graph, GraphFile};

/// Vertex label, 1-based.
pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphFile", into = "GraphFile")]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    bipartition: Option<[Vec<Vertex>; 2]>,
}

impl Graph {
    /// Builds a simple graph, orienting every edge as `u < v` and sorting the edge list.
    ///
    /// Self-loops, duplicate edges, out-of-range vertices, and a bipartition
    /// that does not split the vertex set with every edge crossing are rejected.
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
        bipartition: Option<[Vec<Vertex>; 2]>,
    ) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            for v in [a, b] {
                if v == 0 || v > n {
                    return Err(Error::InvalidGraph(format!("vertex {v} outside 1..={n}")));
                }
            }
            let e = (a.min(b), a.max(b));
            if !set.insert(e) {
                return Err(Error::InvalidGraph(format!("duplicate edge {{{}, {}}}", e.0, e.1)));
            }
        }
        let edges: Vec<_> = set.into_iter().collect();
        let bipartition = match bipartition {
            None => None,
            Some([mut left, mut right]) => {
                left.sort_unstable();
                right.sort_unstable();
                let mut side = vec![None; n + 1];
                for (class, members) in [&left, &right].into_iter().enumerate() {
                    for &v in members {
                        if v == 0 || v > n {
                            return Err(Error::InvalidGraph(format!(
                                "bipartition vertex {v} outside 1..={n}"
                            )));
                        }
                        if side[v].replace(class).is_some() {
                            return Err(Error::InvalidGraph(format!(
                                "vertex {v} listed twice in bipartition"
                            )));
                        }
                    }
                }
                if let Some(v) = (1..=n).find(|&v| side[v].is_none()) {
                    return Err(Error::InvalidGraph(format!("vertex {v} missing from bipartition")));
                }
                if let Some(&(u, v)) = edges.iter().find(|(u, v)| side[*u] == side[*v]) {
                    return Err(Error::InvalidGraph(format!(
                        "edge {{{u}, {v}}} does not cross the bipartition"
                    )));
                }
                Some([left, right])
            }
        };
        Ok(Self { n, edges, bipartition })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Sorted edge list, each edge oriented `u < v`.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn bipartition(&self) -> Option<&[Vec<Vertex>; 2]> {
        self.bipartition.as_ref()
    }

    /// Index of edge `{u, v}` in the canonical edge order.
    pub fn edge_index(&self, u: Vertex, v: Vertex) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    /// Adjacency lists indexed by vertex (slot 0 unused).
    pub fn adjacency_lists(&self) -> Vec<Vec<Vertex>> {
        let mut adj = vec![Vec::new(); self.n + 1];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n + 1];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg.remove(0);
        deg
    }

    /// SHA-256 over the vertex count and canonical edge list, hex encoded.
    pub fn content_hash(&self) -> String {
        let mut text = format!("n {}\n", self.n);
        for &(u, v) in &self.edges {
            text.push_str(&format!("{u} {v}\n"));
        }
        content_digest(text.as_bytes())
    }

    /// Two-coloring by breadth-first search, or `None` if an odd cycle exists.
    /// Colour 0 always contains the smallest vertex of each component.
    pub fn two_coloring(&self) -> Option<[Vec<Vertex>; 2]> {
        let adj = self.adjacency_lists();
        let mut color = vec![usize::MAX; self.n + 1];
        for start in 1..=self.n {
            if color[start] != usize::MAX {
                continue;
            }
            color[start] = 0;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if color[v] == usize::MAX {
                        color[v] = 1 - color[u];
                        queue.push_back(v);
                    } else if color[v] == color[u] {
                        return None;
                    }
                }
            }
        }
        let mut classes = [Vec::new(), Vec::new()];
        for v in 1..=self.n {
            classes[color[v]].push(v);
        }
        Some(classes)
    }

    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let adj = self.adjacency_lists();
        let mut seen = vec![false; self.n + 1];
        seen[1] = true;
        let mut stack = vec![1];
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    /// Same graph with the bipartition replaced by a freshly computed two-coloring.
    pub fn with_computed_bipartition(&self) -> Result<Self> {
        let classes = self.two_coloring().ok_or(Error::NotBipartite)?;
        Ok(Self { bipartition: Some(classes), ..self.clone() })
    }

    /// Vertex-disjoint union; the second graph's vertices are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(u, v)| (u + off, v + off)));
        let bipartition = match (&self.bipartition, &other.bipartition) {
            (Some([a0, a1]), Some([b0, b1])) => Some([
                a0.iter().copied().chain(b0.iter().map(|v| v + off)).collect(),
                a1.iter().copied().chain(b1.iter().map(|v| v + off)).collect(),
            ]),
            _ => None,
        };
        Graph::new(self.n + other.n, edges, bipartition).expect("union of simple graphs is simple")
    }
}

/// Hex SHA-256 of arbitrary bytes; used for artifact names.
pub fn content_digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// `K_{d,d}` with classes `{1..d}` and `{d+1..2d}`.
pub fn complete_bipartite(d: usize) -> Result<Graph> {
    if d == 0 {
        return Err(Error::InvalidDegree(d));
    }
    complete_bipartite_mn(d, d)
}

/// `K_{a,b}` with classes `{1..a}` and `{a+1..a+b}`.
pub fn complete_bipartite_mn(a: usize, b: usize) -> Result<Graph> {
    if a == 0 || b == 0 {
        return Err(Error::InvalidDegree(0));
    }
    let edges = (1..=a).flat_map(|u| (a + 1..=a + b).map(move |v| (u, v)));
    Graph::new(a + b, edges, Some([(1..=a).collect(), (a + 1..=a + b).collect()]))
}

/// Path on `n` vertices `1 - 2 - ... - n`.
pub fn path(n: usize) -> Result<Graph> {
    Graph::new(n, (1..n).map(|v| (v, v + 1)), None)
}

/// Cycle on `n >= 3` vertices.
pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidGraph(format!("cycle needs at least 3 vertices, got {n}")));
    }
    Graph::new(n, (1..n).map(|v| (v, v + 1)).chain([(1, n)]), None)
}

/// Star with centre 1 and `leaves` leaves.
pub fn star(leaves: usize) -> Result<Graph> {
    Graph::new(leaves + 1, (2..=leaves + 1).map(|v| (1, v)), None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub is_regular: bool,
    /// Present exactly when `is_regular` holds.
    pub degree: Option<usize>,
    pub is_bipartite: bool,
    pub is_connected: bool,
}

/// Structural facts about `g`. Bipartiteness is recomputed, never read from the stored partition.
pub fn validate(g: &Graph) -> RegularityReport {
    let degrees = g.degrees();
    let degree = match degrees.split_first() {
        Some((&d, rest)) if rest.iter().all(|&x| x == d) => Some(d),
        None => Some(0),
        _ => None,
    };
    RegularityReport {
        is_regular: degree.is_some(),
        degree,
        is_bipartite: g.two_coloring().is_some(),
        is_connected: g.is_connected(),
    }
}
