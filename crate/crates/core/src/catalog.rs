//! Named graph specifications (`name:params` strings) and the catalogue of
//! small fixtures used by the exhaustive path checks.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{self, Graph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSpec {
    K2,
    Path(usize),
    Cycle(usize),
    Complete(usize),
    Star(usize),
    Diamonds { m: usize, k: usize, l: usize },
    EdgeList(PathBuf),
}

impl GraphSpec {
    pub fn build(&self) -> Result<Graph> {
        match self {
            GraphSpec::K2 => Ok(graph::k2()),
            GraphSpec::Path(n) => graph::path_graph(*n),
            GraphSpec::Cycle(n) => graph::cycle_graph(*n),
            GraphSpec::Complete(n) => graph::complete_graph(*n),
            GraphSpec::Star(n) => graph::star(*n),
            GraphSpec::Diamonds { m, k, l } => graph::string_of_diamonds(*m, *k, *l),
            GraphSpec::EdgeList(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                Graph::parse_edge_list(&text)
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GraphSpec::K2 => "k2",
            GraphSpec::Path(_) => "path",
            GraphSpec::Cycle(_) => "cycle",
            GraphSpec::Complete(_) => "complete",
            GraphSpec::Star(_) => "star",
            GraphSpec::Diamonds { .. } => "diamonds",
            GraphSpec::EdgeList(_) => "edgelist",
        }
    }

    /// Parameters as a comma-free string for CSV output.
    pub fn params(&self) -> String {
        match self {
            GraphSpec::K2 => String::new(),
            GraphSpec::Path(n) | GraphSpec::Cycle(n) | GraphSpec::Complete(n) | GraphSpec::Star(n) => {
                format!("n={n}")
            }
            GraphSpec::Diamonds { m, k, l } => format!("m={m} k={k} l={l}"),
            GraphSpec::EdgeList(p) => p.display().to_string(),
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::K2 => write!(f, "k2"),
            GraphSpec::Path(n) => write!(f, "path:{n}"),
            GraphSpec::Cycle(n) => write!(f, "cycle:{n}"),
            GraphSpec::Complete(n) => write!(f, "complete:{n}"),
            GraphSpec::Star(n) => write!(f, "star:{n}"),
            GraphSpec::Diamonds { m, k, l } => write!(f, "diamonds:{m},{k},{l}"),
            GraphSpec::EdgeList(p) => write!(f, "edgelist:{}", p.display()),
        }
    }
}

impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::ParameterOutOfRange(format!("graph spec {s:?}: {msg}"));
        let (name, rest) = match s.split_once(':') {
            Some((name, rest)) => (name.trim(), rest.trim()),
            None => (s.trim(), ""),
        };
        if name == "edgelist" {
            if rest.is_empty() {
                return Err(bad("missing file path".into()));
            }
            return Ok(GraphSpec::EdgeList(PathBuf::from(rest)));
        }
        let params: Vec<usize> = if rest.is_empty() {
            Vec::new()
        } else {
            rest.split(',')
                .map(|p| p.trim().parse::<usize>().map_err(|_| bad(format!("{p:?} is not an integer"))))
                .collect::<Result<_>>()?
        };
        let one = |params: &[usize]| match params {
            [n] => Ok(*n),
            _ => Err(bad(format!("expected one parameter, got {}", params.len()))),
        };
        match name {
            "k2" if params.is_empty() => Ok(GraphSpec::K2),
            "path" => Ok(GraphSpec::Path(one(&params)?)),
            "cycle" => Ok(GraphSpec::Cycle(one(&params)?)),
            "complete" => Ok(GraphSpec::Complete(one(&params)?)),
            "star" => Ok(GraphSpec::Star(one(&params)?)),
            "diamonds" => match params[..] {
                [m, k] => Ok(GraphSpec::Diamonds { m, k, l: 0 }),
                [m, k, l] => Ok(GraphSpec::Diamonds { m, k, l }),
                _ => Err(bad("expected m,k[,l]".into())),
            },
            _ => Err(bad("unknown generator (k2|path|cycle|complete|star|diamonds|edgelist)".into())),
        }
    }
}

/// Every small fixture used by the exhaustive path-counting checks: paths,
/// cycles and stars on up to 12 vertices, complete graphs on up to 10, and
/// all strings of diamonds with at most 12 vertices.
///
/// Complete graphs stop at 10 vertices: `K_11` has more Hamiltonian paths
/// than the default enumeration cap.
pub fn small_fixtures() -> Vec<GraphSpec> {
    let mut out = vec![GraphSpec::K2];
    for n in 3..=12 {
        out.push(GraphSpec::Path(n));
        out.push(GraphSpec::Star(n));
        out.push(GraphSpec::Cycle(n));
    }
    for n in 3..=10 {
        out.push(GraphSpec::Complete(n));
    }
    for m in 1..=5 {
        for k in 2..=11 {
            for l in 0..=11 {
                if m * (k + 1) + l < 12 {
                    out.push(GraphSpec::Diamonds { m, k, l });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for s in ["k2", "path:5", "cycle:8", "complete:4", "star:100", "diamonds:3,4,5", "edgelist:foo.txt"] {
            let spec: GraphSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert_eq!("diamonds:2,3".parse::<GraphSpec>().unwrap(), GraphSpec::Diamonds { m: 2, k: 3, l: 0 });
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "star", "star:x", "star:1,2", "diamonds:1", "wheel:5", "edgelist:", "k2:3"] {
            assert!(s.parse::<GraphSpec>().is_err(), "{s}");
        }
    }

    #[test]
    fn fixtures_are_small_and_valid() {
        let fixtures = small_fixtures();
        assert!(fixtures.len() > 50);
        for f in fixtures {
            let g = f.build().unwrap();
            assert!(g.n() <= 12, "{f}");
        }
    }
}
