//! Graph files: JSON `{"num_vertices": V, "edges": [{"u", "v", "w"?}]}` or a
//! plain edge list with one `u v [w]` per line and `#` comments.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeRecord {
    u: usize,
    v: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    w: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphRecord {
    num_vertices: usize,
    edges: Vec<EdgeRecord>,
}

/// Missing weights default to 1 when any edge carries one; a graph with no
/// weights at all is unweighted.
fn assemble(num_vertices: usize, records: Vec<(usize, usize, Option<f64>)>) -> Result<Graph> {
    let edges: Vec<_> = records.iter().map(|&(u, v, _)| (u, v)).collect();
    let weights = records
        .iter()
        .any(|r| r.2.is_some())
        .then(|| records.iter().map(|r| r.2.unwrap_or(1.0)).collect());
    Graph::new(num_vertices, &edges, weights)
}

pub fn parse_json(text: &str) -> Result<Graph> {
    let rec: GraphRecord = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    assemble(rec.num_vertices, rec.edges.into_iter().map(|e| (e.u, e.v, e.w)).collect())
}

/// Edge list; the vertex count is one more than the largest endpoint.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut records = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(Error::Parse {
                line,
                message: format!("expected `u v [w]`, found {:?}", content),
            });
        }
        let vertex = |s: &str| {
            s.parse::<usize>().map_err(|_| Error::Parse {
                line,
                message: format!("{s:?} is not a vertex index"),
            })
        };
        let u = vertex(fields[0])?;
        let v = vertex(fields[1])?;
        let w = match fields.get(2) {
            Some(s) => Some(s.parse::<f64>().map_err(|_| Error::Parse {
                line,
                message: format!("{s:?} is not a weight"),
            })?),
            None => None,
        };
        records.push((u, v, w));
    }
    let n = records.iter().map(|&(u, v, _)| u.max(v) + 1).max().ok_or(Error::Parse {
        line: 0,
        message: "no edges".into(),
    })?;
    assemble(n, records)
}

/// JSON when the first non-blank character is `{`, edge list otherwise.
pub fn parse_graph(text: &str) -> Result<Graph> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_edge_list(text)
    }
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph> {
    parse_graph(&std::fs::read_to_string(path)?)
}

pub fn graph_to_json(g: &Graph) -> Result<String> {
    let rec = GraphRecord {
        num_vertices: g.num_vertices(),
        edges: g
            .edges()
            .iter()
            .enumerate()
            .map(|(k, &(u, v))| EdgeRecord {
                u,
                v,
                w: g.weights().map(|w| w[k]),
            })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&rec)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn json_round_trip() {
        for g in [fixtures::complete(4), fixtures::weighted_paw()] {
            let back = parse_graph(&graph_to_json(&g).unwrap()).unwrap();
            assert_eq!(back.edges(), g.edges());
            assert_eq!(back.weights(), g.weights());
        }
    }

    #[test]
    fn edge_list_with_comments() {
        let g = parse_graph("# triangle\n0 1\n1 2 # second\n\n2 0\n").unwrap();
        assert_eq!(g.num_vertices(), 3);
        assert_eq!(g.num_edges(), 3);
        assert!(!g.is_weighted());
        let g = parse_graph("0 1 2.5\n1 2\n").unwrap();
        assert_eq!(g.weights(), Some(&[2.5, 1.0][..]));
    }

    #[test]
    fn malformed_line_is_named() {
        match parse_graph("0 1\n1 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match parse_graph("0 1\n\n1 2 3 4\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn json_errors() {
        assert!(matches!(parse_graph("{\"num_vertices\": 2,\n \"edges\": [}"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(
            parse_graph(r#"{"num_vertices": 2, "edges": [{"u": 1, "v": 1}]}"#),
            Err(Error::SelfLoop { .. })
        ));
        assert!(matches!(
            parse_graph(r#"{"num_vertices": 2, "edges": [{"u": 0, "v": 1, "w": -1}]}"#),
            Err(Error::NonPositiveWeight { .. })
        ));
    }
}
