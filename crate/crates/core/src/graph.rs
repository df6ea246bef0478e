//! Immutable simple undirected graphs and the fixture generators used by the
//! experiments.
//!
//! Adjacency is stored in compressed sparse row form: the neighbours of `u`
//! occupy `targets[offsets[u]..offsets[u + 1]]`, sorted ascending. Each slot in
//! `targets` is a *directed edge id*; per-ordered-pair quantities (clock
//! weights, coupling variables) are stored in arrays indexed by it.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

/// Dense vertex index in `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId(i as u32)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    // reverse[e] is the id of the opposite orientation of directed edge e
    reverse: Vec<usize>,
}

impl Graph {
    /// Builds a graph from unordered pairs, rejecting anything that is not a
    /// connected simple graph on at least two vertices.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n < 2 {
            return Err(Error::ParameterOutOfRange(format!(
                "a graph needs at least 2 vertices, got {n}"
            )));
        }
        if n > u32::MAX as usize {
            return Err(Error::ParameterOutOfRange(format!("too many vertices: {n}")));
        }
        let mut pairs = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::OutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            pairs.push((u.min(v), u.max(v)));
        }
        pairs.sort_unstable();
        if let Some(w) = pairs.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }

        let mut degree = vec![0usize; n];
        for &(u, v) in &pairs {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0u32; offsets[n]];
        for &(u, v) in &pairs {
            targets[fill[u]] = v as u32;
            fill[u] += 1;
            targets[fill[v]] = u as u32;
            fill[v] += 1;
        }
        for u in 0..n {
            targets[offsets[u]..offsets[u + 1]].sort_unstable();
        }
        let mut reverse = vec![0usize; targets.len()];
        for u in 0..n {
            for e in offsets[u]..offsets[u + 1] {
                let v = targets[e] as usize;
                let slice = &targets[offsets[v]..offsets[v + 1]];
                let j = slice
                    .binary_search(&(u as u32))
                    .expect("adjacency is symmetric by construction");
                reverse[e] = offsets[v] + j;
            }
        }
        let g = Graph { offsets, targets, reverse };

        let reached = g.bfs_distances(VertexId(0)).iter().filter(|d| d.is_some()).count();
        if reached != n {
            return Err(Error::Disconnected { reached, n });
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    /// Number of directed edge slots, `2 |E|`.
    #[inline]
    pub fn directed_edge_count(&self) -> usize {
        self.targets.len()
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|u| self.degree(u)).collect()
    }

    #[inline]
    pub fn neighbours(&self, u: usize) -> &[u32] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    /// Directed edge ids leaving `u`, aligned with `neighbours(u)`.
    #[inline]
    pub fn edge_ids(&self, u: usize) -> std::ops::Range<usize> {
        self.offsets[u]..self.offsets[u + 1]
    }

    #[inline]
    pub fn target(&self, e: usize) -> usize {
        self.targets[e] as usize
    }

    #[inline]
    pub fn reverse_edge(&self, e: usize) -> usize {
        self.reverse[e]
    }

    /// Id of the directed edge `u -> v`, if the two are adjacent.
    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        if u >= self.n() || v >= self.n() {
            return None;
        }
        self.neighbours(u)
            .binary_search(&(v as u32))
            .ok()
            .map(|j| self.offsets[u] + j)
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.edge_id(u, v).is_some()
    }

    /// Iterates `(source, target, edge id)` over all directed edges in id order.
    pub fn directed_edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| self.edge_ids(u).map(move |e| (u, self.target(e), e)))
    }

    /// Unordered edges with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.directed_edges()
            .filter(|&(u, v, _)| u < v)
            .map(|(u, v, _)| (u, v))
            .collect()
    }

    pub fn check_vertex(&self, s: VertexId) -> Result<()> {
        if s.index() >= self.n() {
            Err(Error::OutOfRange { vertex: s.index(), n: self.n() })
        } else {
            Ok(())
        }
    }

    /// Unweighted hop distances from `s`; `None` for unreachable vertices
    /// (which cannot happen for a validated graph).
    pub fn bfs_distances(&self, s: VertexId) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.n()];
        let mut queue = VecDeque::new();
        dist[s.index()] = Some(0);
        queue.push_back(s.index());
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for &v in self.neighbours(u) {
                let v = v as usize;
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Largest hop distance from `s`.
    pub fn eccentricity(&self, s: VertexId) -> u32 {
        self.bfs_distances(s).into_iter().map(|d| d.unwrap_or(u32::MAX)).max().unwrap_or(0)
    }

    /// Parses the edge-list text format: a header line `n m` followed by `m`
    /// lines `u v` with 0-based endpoints. Blank lines and lines starting with
    /// `#` are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing header line \"n m\"".into(),
        })?;
        let (n, m) = parse_pair(hline, header)?;
        let mut edges = Vec::with_capacity(m);
        for (line, l) in lines {
            edges.push(parse_pair(line, l)?);
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: hline,
                message: format!("header declares {m} edges but {} were given", edges.len()),
            });
        }
        Graph::from_edges(n, &edges)
    }

    pub fn to_edge_list(&self) -> String {
        let edges = self.edges();
        let mut out = format!("{} {}\n", self.n(), edges.len());
        for (u, v) in edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize)> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(Error::Parse {
            line,
            message: format!("expected two integers, found {} fields", fields.len()),
        });
    }
    let parse = |f: &str, which: &str| {
        f.parse::<usize>().map_err(|_| Error::Parse {
            line,
            message: format!("{which} field {f:?} is not a nonnegative integer"),
        })
    };
    Ok((parse(fields[0], "first")?, parse(fields[1], "second")?))
}

/// Vertex layout of a string of diamonds: hubs `v_0..=v_m` first, then the
/// `k` midpoints of each diamond diamond-by-diamond, then the `l` pendant
/// leaves attached to `v_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiamondLayout {
    pub m: usize,
    pub k: usize,
    pub l: usize,
}

impl DiamondLayout {
    pub fn new(m: usize, k: usize, l: usize) -> Result<Self> {
        if m < 1 || k < 2 {
            return Err(Error::ParameterOutOfRange(format!(
                "string of diamonds needs m >= 1 and k >= 2, got m={m}, k={k}"
            )));
        }
        Ok(DiamondLayout { m, k, l })
    }

    pub fn vertex_count(&self) -> usize {
        self.m * (self.k + 1) + self.l + 1
    }

    pub fn edge_count(&self) -> usize {
        2 * self.k * self.m + self.l
    }

    pub fn hub(&self, i: usize) -> VertexId {
        assert!(i <= self.m);
        VertexId::from(i)
    }

    /// `j`-th midpoint of the diamond between `v_i` and `v_{i+1}`.
    pub fn midpoint(&self, i: usize, j: usize) -> VertexId {
        assert!(i < self.m && j < self.k);
        VertexId::from(self.m + 1 + i * self.k + j)
    }

    pub fn leaf(&self, j: usize) -> VertexId {
        assert!(j < self.l);
        VertexId::from(self.m + 1 + self.m * self.k + j)
    }

    pub fn build(&self) -> Result<Graph> {
        let mut edges = Vec::with_capacity(self.edge_count());
        for i in 0..self.m {
            for j in 0..self.k {
                let mid = self.midpoint(i, j).index();
                edges.push((i, mid));
                edges.push((mid, i + 1));
            }
        }
        for j in 0..self.l {
            edges.push((self.m, self.leaf(j).index()));
        }
        Graph::from_edges(self.vertex_count(), &edges)
    }
}

/// The string of diamonds `S_{m,k,l}`; see [`DiamondLayout`] for vertex ids.
pub fn string_of_diamonds(m: usize, k: usize, l: usize) -> Result<Graph> {
    DiamondLayout::new(m, k, l)?.build()
}

/// Star on `n` vertices with centre 0.
pub fn star(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::ParameterOutOfRange(format!("star needs n >= 2, got {n}")));
    }
    let edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
    Graph::from_edges(n, &edges)
}

pub fn path_graph(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::ParameterOutOfRange(format!("path needs n >= 2, got {n}")));
    }
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    Graph::from_edges(n, &edges)
}

pub fn cycle_graph(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::ParameterOutOfRange(format!("cycle needs n >= 3, got {n}")));
    }
    let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
    Graph::from_edges(n, &edges)
}

pub fn complete_graph(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::ParameterOutOfRange(format!("complete graph needs n >= 2, got {n}")));
    }
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, &edges)
}

/// The single-edge graph `K_2`.
pub fn k2() -> Graph {
    path_graph(2).expect("K2 is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(g.degrees(), vec![1, 1]);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn rejects_bad_edge_lists() {
        assert_eq!(Graph::from_edges(3, &[(0, 1), (0, 1)]), Err(Error::DuplicateEdge(0, 1)));
        assert_eq!(Graph::from_edges(3, &[(0, 1), (1, 0), (1, 2)]), Err(Error::DuplicateEdge(0, 1)));
        assert!(matches!(
            Graph::from_edges(4, &[(0, 1), (2, 3)]),
            Err(Error::Disconnected { reached: 2, n: 4 })
        ));
        assert_eq!(Graph::from_edges(3, &[(0, 0), (1, 2)]), Err(Error::SelfLoop(0)));
        assert_eq!(Graph::from_edges(3, &[(0, 3)]), Err(Error::OutOfRange { vertex: 3, n: 3 }));
        assert!(matches!(Graph::from_edges(1, &[]), Err(Error::ParameterOutOfRange(_))));
    }

    #[test]
    fn diamond_sizes() {
        let g = string_of_diamonds(3, 4, 5).unwrap();
        assert_eq!((g.n(), g.edge_count()), (21, 29));

        let g = string_of_diamonds(1, 2, 0).unwrap();
        assert_eq!((g.n(), g.edge_count()), (4, 4));
        assert_eq!(g.degrees(), vec![2, 2, 2, 2]);
        assert_eq!(g.eccentricity(VertexId(0)), 2);

        let layout = DiamondLayout::new(2, 2, 3).unwrap();
        let g = layout.build().unwrap();
        assert_eq!((g.n(), g.edge_count()), (10, 11));
        assert_eq!(g.degree(layout.hub(2).index()), 5);
        assert_eq!(g.degree(layout.hub(1).index()), 4);
        assert_eq!(g.degree(layout.leaf(2).index()), 1);
        assert_eq!(g.degree(layout.midpoint(1, 0).index()), 2);

        assert!(string_of_diamonds(0, 2, 0).is_err());
        assert!(string_of_diamonds(1, 1, 0).is_err());
    }

    #[test]
    fn small_fixtures() {
        assert_eq!(star(2).unwrap().edge_count(), 1);
        assert_eq!(star(5).unwrap().degrees(), vec![4, 1, 1, 1, 1]);
        assert_eq!(star(3).unwrap().degrees(), vec![2, 1, 1]);
        assert!(cycle_graph(5).unwrap().degrees().iter().all(|&d| d == 2));
        assert!(complete_graph(4).unwrap().degrees().iter().all(|&d| d == 3));
        assert_eq!(path_graph(3).unwrap().degrees(), vec![1, 2, 1]);
        assert!(cycle_graph(2).is_err());
        assert!(star(1).is_err());
    }

    #[test]
    fn bfs() {
        let layout = DiamondLayout::new(3, 4, 0).unwrap();
        let g = layout.build().unwrap();
        let d = g.bfs_distances(layout.hub(0));
        assert_eq!(d[layout.hub(3).index()], Some(6));
        assert_eq!(d[0], Some(0));

        let g = star(5).unwrap();
        let d = g.bfs_distances(VertexId(2));
        assert_eq!(d, vec![Some(1), Some(2), Some(0), Some(2), Some(2)]);
    }

    #[test]
    fn reverse_edges() {
        let g = string_of_diamonds(2, 3, 2).unwrap();
        for (u, v, e) in g.directed_edges() {
            let r = g.reverse_edge(e);
            assert_eq!(g.target(r), u);
            assert_eq!(g.edge_id(v, u), Some(r));
        }
    }

    #[test]
    fn edge_list_text() {
        let g = Graph::parse_edge_list("3 2\n0 1\n\n1 2\n").unwrap();
        assert_eq!(g.degrees(), vec![1, 2, 1]);
        assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);

        match Graph::parse_edge_list("3 2\n0 1\n1 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(Graph::parse_edge_list("3 3\n0 1\n1 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(Graph::parse_edge_list("4 2\n0 1\n2 3\n"), Err(Error::Disconnected { .. })));
    }
}
