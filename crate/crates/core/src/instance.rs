//! GTSP instances and their line-oriented text format.
//!
//! ```text
//! # comment
//! gtsp <n> <m> <W|->
//! u v w        (m lines, 0 <= u < v < n)
//! ```
//!
//! `-` in the header selects optimization mode. Blank lines and everything
//! after a `#` are ignored.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{GraphError, Weight, WeightedGraph};

/// A graph plus an optional budget `W`. With a budget the instance asks for
/// a tour of weight at most `W`; without one it asks for a minimum tour.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GtspInstance {
    pub graph: WeightedGraph,
    pub budget: Option<Weight>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing header line `gtsp <n> <m> <W|->`")]
    MissingHeader,
    #[error("expected {expected} edge lines, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("line {line}: {source}")]
    Graph {
        line: usize,
        #[source]
        source: GraphError,
    },
}

impl GtspInstance {
    pub fn optimization(graph: WeightedGraph) -> Self {
        Self {
            graph,
            budget: None,
        }
    }

    pub fn decision(graph: WeightedGraph, budget: Weight) -> Self {
        Self {
            graph,
            budget: Some(budget),
        }
    }

    pub fn is_decision(&self) -> bool {
        self.budget.is_some()
    }

    pub fn to_text(&self) -> String {
        let g = &self.graph;
        let mut out = String::new();
        let budget = self
            .budget
            .map_or_else(|| "-".to_string(), |w| w.to_string());
        writeln!(
            out,
            "gtsp {} {} {}",
            g.vertex_count(),
            g.edge_count(),
            budget
        )
        .unwrap();
        for &(u, v, w) in g.edges() {
            writeln!(out, "{u} {v} {w}").unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parse_lines(content_lines(text))
    }
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn number<T: std::str::FromStr>(line: usize, token: &str, what: &str) -> Result<T, ParseError> {
    token
        .parse()
        .map_err(|_| syntax(line, format!("invalid {what} `{token}`")))
}

/// Parses an instance from already comment-stripped lines. Used directly by
/// the kernel metadata reader, which embeds an instance.
pub(crate) fn parse_lines<'a>(
    mut lines: impl Iterator<Item = (usize, &'a str)>,
) -> Result<GtspInstance, ParseError> {
    let (hline, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 4 || tokens[0] != "gtsp" {
        return Err(syntax(hline, "expected `gtsp <n> <m> <W|->`"));
    }
    let n: usize = number(hline, tokens[1], "vertex count")?;
    let m: usize = number(hline, tokens[2], "edge count")?;
    let budget = match tokens[3] {
        "-" => None,
        t => Some(number::<Weight>(hline, t, "budget")?),
    };

    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::with_capacity(m);
    for (line, text) in lines.by_ref() {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() != 3 {
            return Err(syntax(line, "expected edge line `u v w`"));
        }
        let u: usize = number(line, tokens[0], "vertex")?;
        let v: usize = number(line, tokens[1], "vertex")?;
        let w: Weight = number(line, tokens[2], "weight")?;
        if u >= v || v >= n {
            return Err(syntax(
                line,
                format!("edge `{u} {v}` must satisfy 0 <= u < v < {n}"),
            ));
        }
        if !seen.insert((u, v)) {
            return Err(ParseError::Graph {
                line,
                source: GraphError::DuplicateEdge(u, v),
            });
        }
        edges.push((u, v, w));
        if edges.len() > m {
            return Err(ParseError::EdgeCount {
                expected: m,
                found: edges.len(),
            });
        }
    }
    if edges.len() != m {
        return Err(ParseError::EdgeCount {
            expected: m,
            found: edges.len(),
        });
    }
    let graph = WeightedGraph::new(n, edges).map_err(|source| ParseError::Graph {
        line: hline,
        source,
    })?;
    Ok(GtspInstance { graph, budget })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_write() {
        let text = "# a path\ngtsp 3 2 -\n0 1 1\n1 2 4 # heavy\n\n";
        let inst = GtspInstance::parse(text).unwrap();
        assert_eq!(inst.budget, None);
        assert_eq!(inst.graph.edges(), &[(0, 1, 1), (1, 2, 4)]);
        assert_eq!(inst.to_text(), "gtsp 3 2 -\n0 1 1\n1 2 4\n");

        let inst = GtspInstance::parse("gtsp 2 1 10\n0 1 3\n").unwrap();
        assert_eq!(inst.budget, Some(10));
        assert_eq!(GtspInstance::parse(&inst.to_text()).unwrap(), inst);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = GtspInstance::parse("gtsp 3 2 -\n0 1 1\n1 x 2\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 3, .. }), "{err}");

        let err = GtspInstance::parse("gtsp 3 2 -\n0 1 1\n1 0 1\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 3, .. }));

        let err = GtspInstance::parse("gtsp 3 2 -\n0 1 1\n0 1 2\n").unwrap_err();
        assert!(matches!(
            err,
            ParseError::Graph {
                line: 3,
                source: GraphError::DuplicateEdge(0, 1)
            }
        ));

        assert_eq!(
            GtspInstance::parse("gtsp 3 2 -\n0 1 1\n"),
            Err(ParseError::EdgeCount {
                expected: 2,
                found: 1
            })
        );
        assert!(matches!(
            GtspInstance::parse("gtsp 3 1 -\n0 1 1\n1 2 1\n"),
            Err(ParseError::EdgeCount { .. })
        ));
        assert_eq!(
            GtspInstance::parse("# nothing\n"),
            Err(ParseError::MissingHeader)
        );
        assert!(GtspInstance::parse("tsp 1 0 -\n").is_err());
        assert!(GtspInstance::parse("gtsp 2 1 -\n0 2 1\n").is_err());
    }
}
