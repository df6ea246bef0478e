//! Exhaustive checks of the path-counting argument that bounds how far a
//! rumour can travel in unit time: `Q`-values of simple paths, their
//! decomposition into degree segments, the walk-sum identity, and the bound
//! `Σ_{|γ|=L} Q(γ) <= (8en/L)^{L/2+1}`.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

pub const DEFAULT_CAP: u64 = 10_000_000;

/// A simple path `γ_0, …, γ_L` given as a directed vertex sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimplePath {
    vertices: Vec<VertexId>,
}

impl SimplePath {
    /// Validates distinctness and adjacency of consecutive vertices.
    pub fn new(g: &Graph, vertices: Vec<VertexId>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::ParameterOutOfRange("empty path".into()));
        }
        let mut seen = vec![false; g.n()];
        for v in &vertices {
            g.check_vertex(*v)?;
            if std::mem::replace(&mut seen[v.index()], true) {
                return Err(Error::ParameterOutOfRange(format!("vertex {v} repeats")));
            }
        }
        if let Some(w) = vertices.windows(2).find(|w| !g.is_adjacent(w[0].index(), w[1].index())) {
            return Err(Error::ParameterOutOfRange(format!("{} and {} are not adjacent", w[0], w[1])));
        }
        Ok(SimplePath { vertices })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn degree_sequence(&self, g: &Graph) -> Vec<usize> {
        self.vertices.iter().map(|v| g.degree(v.index())).collect()
    }

    /// Sub-path covering vertex positions `from..=to`.
    pub fn slice(&self, from: usize, to: usize) -> SimplePath {
        SimplePath { vertices: self.vertices[from..=to].to_vec() }
    }
}

/// Visits every simple path with exactly `len` edges as a directed vertex
/// sequence (each undirected path is seen once per orientation). Returns the
/// number of paths, or `CapExceeded` as soon as more than `cap` are found.
pub fn for_each_simple_path<F>(g: &Graph, len: usize, cap: u64, mut visit: F) -> Result<u64>
where
    F: FnMut(&[u32]),
{
    check_length(g, len)?;
    let counter = AtomicU64::new(0);
    for root in 0..g.n() {
        paths_from_root(g, root, len, cap, &counter, &mut visit)?;
    }
    Ok(counter.into_inner())
}

fn check_length(g: &Graph, len: usize) -> Result<()> {
    if len == 0 || len >= g.n() {
        return Err(Error::ParameterOutOfRange(format!(
            "path length must satisfy 1 <= L < n = {}, got {len}",
            g.n()
        )));
    }
    Ok(())
}

fn paths_from_root<F: FnMut(&[u32])>(
    g: &Graph,
    root: usize,
    len: usize,
    cap: u64,
    counter: &AtomicU64,
    visit: &mut F,
) -> Result<()> {
    let mut on_path = vec![false; g.n()];
    let mut path = Vec::with_capacity(len + 1);
    // stack of next-neighbour cursors, one per vertex on the path
    let mut cursor = Vec::with_capacity(len + 1);
    path.push(root as u32);
    on_path[root] = true;
    cursor.push(0usize);
    while let Some(&top) = path.last() {
        let depth = path.len() - 1;
        if depth == len {
            if counter.fetch_add(1, Ordering::Relaxed) >= cap {
                return Err(Error::CapExceeded(cap));
            }
            visit(&path);
        } else {
            let nbrs = g.neighbours(top as usize);
            let c = cursor.last_mut().unwrap();
            while *c < nbrs.len() && on_path[nbrs[*c] as usize] {
                *c += 1;
            }
            if *c < nbrs.len() {
                let next = nbrs[*c];
                *c += 1;
                path.push(next);
                on_path[next as usize] = true;
                cursor.push(0);
                continue;
            }
        }
        on_path[top as usize] = false;
        path.pop();
        cursor.pop();
    }
    Ok(())
}

/// Collects all simple paths with `len` edges (both orientations).
pub fn enumerate_simple_paths(g: &Graph, len: usize, cap: u64) -> Result<Vec<SimplePath>> {
    let mut out = Vec::new();
    for_each_simple_path(g, len, cap, |p| {
        out.push(SimplePath { vertices: p.iter().map(|&v| VertexId(v)).collect() });
    })?;
    Ok(out)
}

/// `Q` of a degree sequence: `Π_i 1 / min(d_{i-1}, d_i)`.
pub fn q_from_degrees(degrees: &[usize]) -> f64 {
    degrees
        .windows(2)
        .map(|w| 1.0 / w[0].min(w[1]) as f64)
        .product()
}

pub fn q_value(g: &Graph, p: &SimplePath) -> f64 {
    q_from_degrees(&p.degree_sequence(g))
}

fn q_raw(g: &Graph, p: &[u32]) -> f64 {
    p.windows(2)
        .map(|w| 1.0 / g.degree(w[0] as usize).min(g.degree(w[1] as usize)) as f64)
        .product()
}

/// One segment of a degree sequence, by positions: it runs from `start` to
/// `end` and has its local minimum at `center`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub start: usize,
    pub center: usize,
    pub end: usize,
}

impl Segment {
    /// Edges before the centre.
    pub fn ell_minus(&self) -> usize {
        self.center - self.start
    }

    /// Edges after the centre.
    pub fn ell_plus(&self) -> usize {
        self.end - self.center
    }
}

/// Segment type `(x, ℓ⁻, ℓ⁺)` with the centre given as a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SegmentType {
    pub center: VertexId,
    pub ell_minus: usize,
    pub ell_plus: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub segments: Vec<Segment>,
    /// Set when two consecutive degrees are equal; tie handling then relies
    /// on the asymmetric extremum convention below.
    pub has_plateau: bool,
}

impl Decomposition {
    /// `(position of centre, ℓ⁻, ℓ⁺)` for each segment.
    pub fn types(&self) -> Vec<(usize, usize, usize)> {
        self.segments.iter().map(|s| (s.center, s.ell_minus(), s.ell_plus())).collect()
    }
}

/// Local minimum at `i`: `d[i-1] > d[i] <= d[i+1]`; comparisons against
/// positions outside the sequence always hold.
pub fn is_local_min(d: &[usize], i: usize) -> bool {
    (i == 0 || d[i - 1] > d[i]) && (i + 1 == d.len() || d[i] <= d[i + 1])
}

/// Local maximum at `i`: `d[i-1] <= d[i] > d[i+1]`, same boundary convention.
pub fn is_local_max(d: &[usize], i: usize) -> bool {
    (i == 0 || d[i - 1] <= d[i]) && (i + 1 == d.len() || d[i] > d[i + 1])
}

/// Splits a degree sequence into segments that start and end at local maxima
/// (or at the ends of the sequence). Within each segment the degrees strictly
/// decrease to the unique local minimum and then weakly increase.
pub fn segment_decompose(degrees: &[usize]) -> Result<Decomposition> {
    if degrees.is_empty() {
        return Err(Error::ParameterOutOfRange("empty degree sequence".into()));
    }
    let last = degrees.len() - 1;
    let has_plateau = degrees.windows(2).any(|w| w[0] == w[1]);
    if last == 0 {
        return Ok(Decomposition {
            segments: vec![Segment { start: 0, center: 0, end: 0 }],
            has_plateau,
        });
    }
    let mut bounds = vec![0];
    bounds.extend((1..last).filter(|&i| is_local_max(degrees, i)));
    bounds.push(last);
    let segments = bounds
        .windows(2)
        .map(|w| {
            let (start, end) = (w[0], w[1]);
            let center = (start..=end)
                .find(|&i| is_local_min(degrees, i))
                .expect("every segment contains a local minimum");
            Segment { start, center, end }
        })
        .collect();
    Ok(Decomposition { segments, has_plateau })
}

impl SimplePath {
    pub fn decompose(&self, g: &Graph) -> Result<Decomposition> {
        segment_decompose(&self.degree_sequence(g))
    }

    pub fn segment_types(&self, g: &Graph) -> Result<Vec<SegmentType>> {
        Ok(self
            .decompose(g)?
            .segments
            .iter()
            .map(|s| SegmentType {
                center: self.vertices[s.center],
                ell_minus: s.ell_minus(),
                ell_plus: s.ell_plus(),
            })
            .collect())
    }
}

/// Sum over all walks `v_0..v_ℓ` with `v_{ℓ⁻} = x` of
/// `Π_{i=1}^{ℓ⁻} 1/deg(v_i) · Π_{i=ℓ⁻}^{ℓ-1} 1/deg(v_i)`, by explicit
/// enumeration. The value is 1 for every graph and type.
pub fn walk_sum(g: &Graph, x: VertexId, ell_minus: usize, ell_plus: usize, cap: u64) -> Result<f64> {
    g.check_vertex(x)?;
    // Walking outward from x in each direction, the factor at each step is
    // 1/deg of the vertex being left, so the sum factorises into two halves.
    let (back, n_back) = walk_half(g, x.index(), ell_minus, cap)?;
    let (fwd, n_fwd) = walk_half(g, x.index(), ell_plus, cap)?;
    if n_back.saturating_mul(n_fwd) > cap {
        return Err(Error::CapExceeded(cap));
    }
    Ok(back * fwd)
}

fn walk_half(g: &Graph, from: usize, steps: usize, cap: u64) -> Result<(f64, u64)> {
    if steps == 0 {
        return Ok((1.0, 1));
    }
    let w = 1.0 / g.degree(from) as f64;
    let mut acc = PairwiseSum::default();
    let mut count = 0u64;
    for &v in g.neighbours(from) {
        let (sum, c) = walk_half(g, v as usize, steps - 1, cap)?;
        acc.add(w * sum);
        count += c;
        if count > cap {
            return Err(Error::CapExceeded(cap));
        }
    }
    Ok((acc.total(), count))
}

/// Sum of `Q(σ)` over simple paths σ that are segments of type
/// `(x, ℓ⁻, ℓ⁺)`: strictly decreasing degrees into `x`, weakly increasing
/// after it.
pub fn segment_type_q_sum(g: &Graph, x: VertexId, ell_minus: usize, ell_plus: usize) -> Result<f64> {
    g.check_vertex(x)?;
    let mut on_path = vec![false; g.n()];
    on_path[x.index()] = true;
    let mut acc = PairwiseSum::default();
    // grow the part before x (walking backwards, degrees strictly increase),
    // then the part after x (degrees weakly increase)
    #[allow(clippy::too_many_arguments)]
    fn before(
        g: &Graph,
        at: usize,
        left: usize,
        prod: f64,
        x: usize,
        ell_plus: usize,
        on_path: &mut [bool],
        acc: &mut PairwiseSum,
    ) {
        if left == 0 {
            after(g, x, ell_plus, prod, on_path, acc);
            return;
        }
        for &v in g.neighbours(at) {
            let v = v as usize;
            if on_path[v] || g.degree(v) <= g.degree(at) {
                continue;
            }
            on_path[v] = true;
            before(g, v, left - 1, prod / g.degree(at) as f64, x, ell_plus, on_path, acc);
            on_path[v] = false;
        }
    }
    fn after(g: &Graph, at: usize, left: usize, prod: f64, on_path: &mut [bool], acc: &mut PairwiseSum) {
        if left == 0 {
            acc.add(prod);
            return;
        }
        for &v in g.neighbours(at) {
            let v = v as usize;
            if on_path[v] || g.degree(v) < g.degree(at) {
                continue;
            }
            on_path[v] = true;
            after(g, v, left - 1, prod / g.degree(at) as f64, on_path, acc);
            on_path[v] = false;
        }
    }
    before(g, x.index(), ell_minus, 1.0, x.index(), ell_plus, &mut on_path, &mut acc);
    Ok(acc.total())
}

/// `(8en/L)^{L/2+1}` with a real exponent.
pub fn q_sum_bound(n: usize, len: usize) -> f64 {
    let (n, l) = (n as f64, len as f64);
    (8.0 * std::f64::consts::E * n / l).powf(l / 2.0 + 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QSumRow {
    #[serde(rename = "L")]
    pub len: usize,
    pub num_paths: u64,
    pub sum_q: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Exact `Σ_{|γ|=L} Q(γ)` by enumeration, compared with the bound.
pub fn sum_q_over_length(g: &Graph, len: usize, cap: u64) -> Result<QSumRow> {
    check_length(g, len)?;
    let counter = AtomicU64::new(0);
    let per_root = |root: usize| -> Result<PairwiseSum> {
        let mut acc = PairwiseSum::default();
        paths_from_root(g, root, len, cap, &counter, &mut |p| acc.add(q_raw(g, p)))?;
        Ok(acc)
    };
    let parts: Vec<Result<PairwiseSum>> = {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            (0..g.n()).into_par_iter().map(per_root).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            (0..g.n()).map(per_root).collect()
        }
    };
    let mut total = PairwiseSum::default();
    for p in parts {
        total.add(p?.total());
    }
    let sum_q = total.total();
    let bound = q_sum_bound(g.n(), len);
    Ok(QSumRow {
        len,
        num_paths: counter.into_inner(),
        sum_q,
        bound,
        holds: sum_q <= bound,
    })
}

/// Both sides of the traversal-probability inequality for path `p` over a
/// time window `t`:
/// `exact = t^L/L! · Π (1/deg(γ_{i-1}) + 1/deg(γ_i))` and
/// `q_form = (2et/L)^L · Q(γ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraversalBound {
    pub exact_form: f64,
    pub q_form: f64,
}

pub fn traversal_probability_bound(g: &Graph, p: &SimplePath, t: f64) -> Result<TraversalBound> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::ParameterOutOfRange(format!("time window must be positive, got {t}")));
    }
    let d = p.degree_sequence(g);
    let l = p.len();
    let mut exact = 1.0;
    for (i, w) in d.windows(2).enumerate() {
        // t^L / L! accumulated factor by factor to avoid overflow
        exact *= t / (i + 1) as f64 * (1.0 / w[0] as f64 + 1.0 / w[1] as f64);
    }
    let q_form = if l == 0 {
        1.0
    } else {
        (2.0 * std::f64::consts::E * t / l as f64).powi(l as i32) * q_from_degrees(&d)
    };
    Ok(TraversalBound { exact_form: exact, q_form })
}

/// Cascade summation: blocks of equal size are combined pairwise, keeping
/// the rounding error logarithmic in the number of terms.
#[derive(Debug, Clone, Default)]
pub struct PairwiseSum {
    block: f64,
    block_len: u32,
    // (level, partial sum); levels strictly decrease from bottom to top
    stack: Vec<(u32, f64)>,
}

impl PairwiseSum {
    const BLOCK: u32 = 64;

    pub fn add(&mut self, x: f64) {
        self.block += x;
        self.block_len += 1;
        if self.block_len == Self::BLOCK {
            let mut carry = (0u32, self.block);
            self.block = 0.0;
            self.block_len = 0;
            while let Some(&(level, s)) = self.stack.last() {
                if level != carry.0 {
                    break;
                }
                self.stack.pop();
                carry = (level + 1, s + carry.1);
            }
            self.stack.push(carry);
        }
    }

    pub fn total(&self) -> f64 {
        self.stack.iter().rev().fold(self.block, |acc, &(_, s)| acc + s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle_graph, k2, path_graph, star};

    #[test]
    fn enumeration_counts() {
        let g = cycle_graph(5).unwrap();
        assert_eq!(enumerate_simple_paths(&g, 2, DEFAULT_CAP).unwrap().len(), 10);
        assert_eq!(enumerate_simple_paths(&k2(), 1, DEFAULT_CAP).unwrap().len(), 2);
        // path_graph(3) has only two edges; L = 3 is not < n so it is rejected,
        // and L = 2 has the two orientations of the whole path
        let p3 = path_graph(3).unwrap();
        assert!(enumerate_simple_paths(&p3, 3, DEFAULT_CAP).is_err());
        assert_eq!(enumerate_simple_paths(&p3, 2, DEFAULT_CAP).unwrap().len(), 2);
        let p4 = path_graph(4).unwrap();
        assert_eq!(enumerate_simple_paths(&p4, 3, DEFAULT_CAP).unwrap().len(), 2);
    }

    #[test]
    fn enumeration_cap_is_an_error() {
        let g = cycle_graph(5).unwrap();
        assert_eq!(for_each_simple_path(&g, 2, 9, |_| {}), Err(Error::CapExceeded(9)));
        assert_eq!(for_each_simple_path(&g, 2, 10, |_| {}), Ok(10));
        assert_eq!(sum_q_over_length(&g, 2, 9), Err(Error::CapExceeded(9)));
    }

    #[test]
    fn q_of_worked_degree_sequence() {
        assert!((q_from_degrees(&[5, 5, 7, 3, 4, 4, 2, 5]) * 3600.0 - 1.0).abs() < 1e-14);
        let g = k2();
        let p = SimplePath::new(&g, vec![VertexId(0), VertexId(1)]).unwrap();
        assert_eq!(q_value(&g, &p), 1.0);
    }

    #[test]
    fn decomposition_of_worked_example() {
        let d = segment_decompose(&[5, 5, 7, 3, 4, 4, 2, 5]).unwrap();
        assert_eq!(d.types(), vec![(0, 0, 2), (3, 1, 2), (6, 1, 1)]);
        assert!(d.has_plateau);
    }

    #[test]
    fn decomposition_edge_cases() {
        let d = segment_decompose(&[1, 2, 3]).unwrap();
        assert_eq!(d.types(), vec![(0, 0, 2)]);
        assert!(!d.has_plateau);
        let d = segment_decompose(&[4, 4, 4]).unwrap();
        assert_eq!(d.types(), vec![(0, 0, 2)]);
        assert!(d.has_plateau);
        let d = segment_decompose(&[3, 2, 1]).unwrap();
        assert_eq!(d.types(), vec![(2, 2, 0)]);
        let d = segment_decompose(&[3, 1, 3, 1]).unwrap();
        assert_eq!(d.types(), vec![(1, 1, 1), (3, 1, 0)]);
        assert_eq!(segment_decompose(&[7]).unwrap().types(), vec![(0, 0, 0)]);
        assert!(segment_decompose(&[]).is_err());
    }

    #[test]
    fn walk_sums() {
        let g = star(5).unwrap();
        assert_eq!(walk_sum(&g, VertexId(0), 0, 0, DEFAULT_CAP).unwrap(), 1.0);
        assert!((walk_sum(&g, VertexId(0), 1, 0, DEFAULT_CAP).unwrap() - 1.0).abs() < 1e-15);
        let c = cycle_graph(6).unwrap();
        for x in 0..6 {
            assert!((walk_sum(&c, VertexId(x), 2, 2, DEFAULT_CAP).unwrap() - 1.0).abs() < 1e-15);
        }
        assert_eq!(walk_sum(&c, VertexId(0), 2, 2, 3), Err(Error::CapExceeded(3)));
    }

    #[test]
    fn q_sum_rows() {
        let row = sum_q_over_length(&cycle_graph(5).unwrap(), 2, DEFAULT_CAP).unwrap();
        assert_eq!(row.num_paths, 10);
        assert!((row.sum_q - 2.5).abs() < 1e-15);
        assert!((row.bound - (8.0 * std::f64::consts::E * 2.5).powi(2)).abs() < 1e-9);
        assert!(row.holds);

        let row = sum_q_over_length(&k2(), 1, DEFAULT_CAP).unwrap();
        assert_eq!((row.num_paths, row.sum_q), (2, 2.0));
        assert!((row.bound - (16.0 * std::f64::consts::E).powf(1.5)).abs() < 1e-9);
        assert!(row.holds);
    }

    #[test]
    fn traversal_bound_on_k2() {
        let g = k2();
        let p = SimplePath::new(&g, vec![VertexId(0), VertexId(1)]).unwrap();
        let b = traversal_probability_bound(&g, &p, 1.0).unwrap();
        assert_eq!(b.exact_form, 2.0);
        assert!((b.q_form - 2.0 * std::f64::consts::E).abs() < 1e-15);
        assert!(b.exact_form <= b.q_form);
        assert!(traversal_probability_bound(&g, &p, 0.0).is_err());
        let tiny = traversal_probability_bound(&g, &p, 1e-12).unwrap();
        assert!(tiny.exact_form < 1e-11 && tiny.q_form < 1e-10);
    }

    #[test]
    fn path_validation() {
        let g = path_graph(4).unwrap();
        assert!(SimplePath::new(&g, vec![VertexId(0), VertexId(2)]).is_err());
        assert!(SimplePath::new(&g, vec![VertexId(0), VertexId(1), VertexId(0)]).is_err());
        assert!(SimplePath::new(&g, vec![VertexId(0), VertexId(9)]).is_err());
        let p = SimplePath::new(&g, vec![VertexId(3), VertexId(2), VertexId(1)]).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.degree_sequence(&g), vec![1, 2, 2]);
    }

    #[test]
    fn pairwise_sum_matches_exact_integers() {
        let mut acc = PairwiseSum::default();
        for i in 0..100_000u64 {
            acc.add(i as f64);
        }
        assert_eq!(acc.total(), (100_000u64 * 99_999 / 2) as f64);
    }
}
