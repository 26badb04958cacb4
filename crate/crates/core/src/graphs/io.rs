//! DIMACS edge lists and the `{"n": .., "edges": [[i, j], ..]}` JSON form.
//! Both use 1-based node numbers.

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::ParseError;

#[derive(Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        Self {
            n: g.n(),
            edges: g.edges().map(|(a, b)| [a + 1, b + 1]).collect(),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = ParseError;

    fn try_from(j: GraphJson) -> Result<Self, ParseError> {
        let mut edges = Vec::with_capacity(j.edges.len());
        for [a, b] in j.edges {
            if a == 0 || b == 0 {
                return Err(ParseError::Graph("node numbers are 1-based".into()));
            }
            edges.push((a - 1, b - 1));
        }
        Graph::new(j.n, edges).map_err(|e| ParseError::Graph(e.to_string()))
    }
}

pub fn to_json(g: &Graph) -> String {
    serde_json::to_string(&GraphJson::from(g)).expect("serializable")
}

pub fn from_json(s: &str) -> Result<Graph, ParseError> {
    let j: GraphJson = serde_json::from_str(s)?;
    Graph::try_from(j)
}

pub fn to_dimacs(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.n(), g.num_edges());
    for (a, b) in g.edges() {
        out.push_str(&format!("e {} {}\n", a + 1, b + 1));
    }
    out
}

pub fn from_dimacs(s: &str) -> Result<Graph, ParseError> {
    let mut n = None;
    let mut edges = Vec::new();
    for (lineno, line) in s.lines().enumerate() {
        let bad = |what: &str| ParseError::Graph(format!("line {}: {what}", lineno + 1));
        let mut tok = line.split_whitespace();
        match tok.next() {
            None | Some("c") => {}
            Some("p") => {
                // format word: "edge" or "col"
                tok.next().ok_or_else(|| bad("missing format"))?;
                let count = tok.next().ok_or_else(|| bad("missing node count"))?;
                n = Some(count.parse::<usize>().map_err(|_| bad("bad node count"))?);
            }
            Some("e") => {
                let mut num = || -> Result<usize, ParseError> {
                    tok.next()
                        .and_then(|t| t.parse::<usize>().ok())
                        .filter(|&v| v > 0)
                        .ok_or_else(|| bad("bad edge endpoint"))
                };
                let a = num()?;
                let b = num()?;
                edges.push((a - 1, b - 1));
            }
            Some(other) => return Err(bad(&format!("unknown record {other:?}"))),
        }
    }
    let n = n.ok_or_else(|| ParseError::Graph("missing problem line".into()))?;
    Graph::new(n, edges).map_err(|e| ParseError::Graph(e.to_string()))
}

/// Sniffs JSON versus DIMACS.
pub fn parse_any(s: &str) -> Result<Graph, ParseError> {
    if s.trim_start().starts_with('{') {
        from_json(s)
    } else {
        from_dimacs(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_formats_round_trip() {
        let g = Graph::petersen();
        assert_eq!(from_json(&to_json(&g)).unwrap(), g);
        assert_eq!(from_dimacs(&to_dimacs(&g)).unwrap(), g);
        assert_eq!(parse_any(&to_json(&g)).unwrap(), g);
        assert!(to_json(&Graph::complete(2)).contains("[[1,2]]"));
    }

    #[test]
    fn malformed_inputs() {
        assert!(from_json(r#"{"n":2,"edges":[[0,1]]}"#).is_err());
        assert!(from_json(r#"{"n":2,"edges":[[1,3]]}"#).is_err());
        assert!(from_dimacs("e 1 2\n").is_err());
        assert!(from_dimacs("p edge 3 1\ne 1 x\n").is_err());
        assert_eq!(from_dimacs("c hi\np edge 3 1\ne 3 1\n").unwrap().num_edges(), 1);
    }
}
