//! Single-source shortest paths over symmetric per-edge weights.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::Add;

use crate::graph::Graph;

struct Entry<W> {
    dist: W,
    vertex: usize,
}

impl<W: PartialOrd> PartialEq for Entry<W> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<W: PartialOrd> Eq for Entry<W> {}

impl<W: PartialOrd> PartialOrd for Entry<W> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<W: PartialOrd> Ord for Entry<W> {
    // min-heap on distance
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .partial_cmp(&self.dist)
            .expect("weights are never NaN")
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

/// Dijkstra from `s` with nonnegative weight `weight(e)` on directed edge `e`.
/// Returns the distance to every vertex (the graph is connected).
pub(crate) fn dijkstra<W, F>(g: &Graph, s: usize, weight: F) -> Vec<W>
where
    W: Copy + PartialOrd + Add<Output = W> + Default,
    F: Fn(usize) -> W,
{
    let n = g.n();
    let mut dist: Vec<Option<W>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[s] = Some(W::default());
    heap.push(Entry { dist: W::default(), vertex: s });
    while let Some(Entry { dist: d, vertex: u }) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for e in g.edge_ids(u) {
            let v = g.target(e);
            if done[v] {
                continue;
            }
            let cand = d + weight(e);
            if dist[v].is_none_or(|cur| cand < cur) {
                dist[v] = Some(cand);
                heap.push(Entry { dist: cand, vertex: v });
            }
        }
    }
    dist.into_iter().map(|d| d.expect("graph is connected")).collect()
}
