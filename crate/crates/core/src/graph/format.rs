//! JSON and plain-text edge-list encodings of [`Graph`].

use serde::{Deserialize, Serialize};

use super::{Graph, Vertex};
use crate::error::{Error, Result};

/// Wire form: `{"n": int, "edges": [[u, v], ...], "bipartition": [[...], [...]] | null}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[Vertex; 2]>,
    #[serde(default)]
    pub bipartition: Option<[Vec<Vertex>; 2]>,
}

impl TryFrom<GraphFile> for Graph {
    type Error = Error;

    fn try_from(f: GraphFile) -> Result<Self> {
        Graph::new(f.n, f.edges.into_iter().map(|[u, v]| (u, v)), f.bipartition)
    }
}

impl From<Graph> for GraphFile {
    fn from(g: Graph) -> Self {
        GraphFile {
            n: g.n,
            edges: g.edges.iter().map(|&(u, v)| [u, v]).collect(),
            bipartition: g.bipartition,
        }
    }
}

impl Graph {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// `n m` header followed by one `u v` line per edge.
    pub fn to_edgelist(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.m());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn from_edgelist(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty edge list".into()))?;
        let [n, m] = parse_pair(header)?;
        let edges = lines.map(|l| parse_pair(l).map(|[u, v]| (u, v))).collect::<Result<Vec<_>>>()?;
        if edges.len() != m {
            return Err(Error::Parse(format!("header declares {m} edges, found {}", edges.len())));
        }
        Graph::new(n, edges, None)
    }
}

fn parse_pair(line: &str) -> Result<[usize; 2]> {
    let mut it = line.split_whitespace().map(|t| {
        t.parse::<usize>().map_err(|e| Error::Parse(format!("bad integer {t:?}: {e}")))
    });
    match (it.next(), it.next(), it.next()) {
        (Some(a), Some(b), None) => Ok([a?, b?]),
        _ => Err(Error::Parse(format!("expected two integers, got {line:?}"))),
    }
}

/// Parses either encoding, choosing JSON when the text starts with `{`.
pub fn parse_graph(text: &str) -> Result<Graph> {
    if text.trim_start().starts_with('{') {
        Graph::from_json(text)
    } else {
        Graph::from_edgelist(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_bipartite, cycle};
    use proptest::prelude::*;

    #[test]
    fn json_shape() {
        let g = complete_bipartite(1).unwrap();
        assert_eq!(g.to_json(), r#"{"n":2,"edges":[[1,2]],"bipartition":[[1],[2]]}"#);
        let c = cycle(3).unwrap();
        assert_eq!(c.to_json(), r#"{"n":3,"edges":[[1,2],[1,3],[2,3]],"bipartition":null}"#);
    }

    #[test]
    fn json_without_bipartition_key() {
        let g = Graph::from_json(r#"{"n":3,"edges":[[2,1],[3,2]]}"#).unwrap();
        assert_eq!(g.edges(), &[(1, 2), (2, 3)]);
    }

    #[test]
    fn multigraph_rejected_at_parse() {
        assert!(Graph::from_json(r#"{"n":2,"edges":[[1,2],[2,1]]}"#).is_err());
        assert!(Graph::from_edgelist("2 2\n1 2\n1 2\n").is_err());
    }

    #[test]
    fn edgelist_parsing() {
        let g = parse_graph("# square\n4 4\n1 2\n2 3\n3 4\n4 1\n").unwrap();
        assert_eq!(g, cycle(4).unwrap());
        assert!(parse_graph("4 3\n1 2\n").is_err());
        assert!(parse_graph("4 1\n1 2 3\n").is_err());
        assert_eq!(parse_graph(&g.to_edgelist()).unwrap(), g);
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..9).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> =
                (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))).collect();
            let len = pairs.len();
            (Just(n), proptest::collection::vec(any::<bool>(), len), Just(pairs))
        })
        .prop_map(|(n, keep, pairs)| {
            let edges = pairs.into_iter().zip(keep).filter(|(_, k)| *k).map(|(e, _)| e);
            let g = Graph::new(n, edges, None).unwrap();
            g.with_computed_bipartition().unwrap_or(g)
        })
    }

    proptest! {
        #[test]
        fn json_round_trip(g in arb_graph()) {
            let back = Graph::from_json(&g.to_json()).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(back.bipartition(), g.bipartition());
        }
    }
}
