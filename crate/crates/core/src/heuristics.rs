//! Constructive heuristics, the swap-based local search, and the multi-start
//! driver that produces the initial incumbent for the exact solver.
//!
//! All constructions hand out labels `1, 2, ..., n` in increasing order and
//! never revise a label. While a labeling is partial, an unlabeled neighbor
//! is treated as carrying label `n - 1` when measuring the antibandwidth a
//! vertex would get.

use rayon::prelude::*;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::{antibandwidth, bfs_layers, Graph, Labeling};

/// Tie weight for the score-guided ordering.
pub const EPSILON: f64 = 0.0001;

const UNLABELED: usize = 0;

/// Optional per-vertex, per-label guidance for [`incumbent_guided_heuristic`],
/// e.g. values of a fractional relaxation.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelScores {
    n: usize,
    values: Vec<f64>,
}

impl LabelScores {
    /// `values[v * n + (l - 1)]` is the score of giving label `l` to `v`.
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::InvalidArgument(format!(
                "expected {} scores, got {}",
                n * n,
                values.len()
            )));
        }
        Ok(LabelScores { n, values })
    }

    pub fn get(&self, v: usize, label: usize) -> f64 {
        self.values[v * self.n + label - 1]
    }
}

/// Partial labeling shared by the constructive heuristics.
#[derive(Debug, Clone)]
pub struct HeuristicState<'a> {
    g: &'a Graph,
    /// Current acceptance bound.
    pub bound: usize,
    /// Label per vertex, 0 while unlabeled.
    labels: Vec<usize>,
    /// Neighbors of each vertex that are still unlabeled.
    unlabeled_degree: Vec<usize>,
}

impl<'a> HeuristicState<'a> {
    pub fn new(g: &'a Graph, bound: usize) -> Self {
        HeuristicState {
            g,
            bound,
            labels: vec![UNLABELED; g.n()],
            unlabeled_degree: (0..g.n()).map(|v| g.degree(v)).collect(),
        }
    }

    pub fn is_labeled(&self, v: usize) -> bool {
        self.labels[v] != UNLABELED
    }

    pub fn unlabeled_degree(&self, v: usize) -> usize {
        self.unlabeled_degree[v]
    }

    pub fn assign(&mut self, v: usize, label: usize) {
        debug_assert!(!self.is_labeled(v));
        self.labels[v] = label;
        for &u in self.g.neighbors(v) {
            self.unlabeled_degree[u] -= 1;
        }
    }

    /// Antibandwidth `v` would have with `label`; `usize::MAX` without neighbors.
    pub fn resulting_antibandwidth(&self, v: usize, label: usize) -> usize {
        let placeholder = self.g.n().saturating_sub(1);
        self.g
            .neighbors(v)
            .iter()
            .map(|&u| {
                let other = if self.labels[u] == UNLABELED { placeholder } else { self.labels[u] };
                label.abs_diff(other)
            })
            .min()
            .unwrap_or(usize::MAX)
    }

    /// Largest unlabeled degree among unlabeled neighbors of `v`.
    pub fn max_neighbor_unlabeled_degree(&self, v: usize) -> usize {
        self.g
            .neighbors(v)
            .iter()
            .filter(|&&u| !self.is_labeled(u))
            .map(|&u| self.unlabeled_degree[u])
            .max()
            .unwrap_or(0)
    }

    /// Tie-break key: unlabeled degree, then neighbor unlabeled degree, both
    /// descending, then smallest index.
    fn tie_key(&self, v: usize) -> (usize, usize, std::cmp::Reverse<usize>) {
        (
            self.unlabeled_degree[v],
            self.max_neighbor_unlabeled_degree(v),
            std::cmp::Reverse(v),
        )
    }

    fn into_labeling(self) -> Labeling {
        Labeling::new(self.labels).expect("heuristic assigns every label once")
    }
}

/// Layered construction: label 1 goes to `root`, then labels are handed out
/// in alternating passes over the even and the odd BFS layers. A vertex
/// adjacent to one labeled in the current pass waits for a later pass.
pub fn bfs_layer_heuristic(g: &Graph, root: usize) -> Result<Labeling> {
    let layers = bfs_layers(g, root)?;
    let n = g.n();
    let mut st = HeuristicState::new(g, 0);
    st.assign(root, 1);
    let mut next = 2;
    let mut marked = BitSet::new(n);
    'passes: while next <= n {
        for parity in [0, 1] {
            marked.clear();
            for layer in layers.layers.iter().skip(parity).step_by(2) {
                loop {
                    let pick = layer
                        .iter()
                        .copied()
                        .filter(|&v| !st.is_labeled(v) && !marked.contains(v))
                        .max_by_key(|&v| {
                            let (a, b, c) = st.tie_key(v);
                            (st.resulting_antibandwidth(v, next), a, b, c)
                        });
                    let Some(v) = pick else { break };
                    st.assign(v, next);
                    for &u in g.neighbors(v) {
                        marked.insert(u);
                    }
                    next += 1;
                    if next > n {
                        break 'passes;
                    }
                }
            }
        }
    }
    Ok(st.into_labeling())
}

/// Bound-guided construction: each label goes to an unlabeled vertex whose
/// resulting antibandwidth reaches the bound, which starts at `initial_bound`
/// and drops only when no vertex qualifies.
pub fn bound_guided_heuristic(g: &Graph, root: usize, initial_bound: usize) -> Result<Labeling> {
    if !g.is_connected() {
        bfs_layers(g, root)?;
    }
    if root >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: root + 1, n: g.n() });
    }
    let n = g.n();
    let mut st = HeuristicState::new(g, initial_bound);
    st.assign(root, 1);
    let mut scores = vec![0; n];
    for label in 2..=n {
        let mut best_score = 0;
        for v in (0..n).filter(|&v| !st.is_labeled(v)) {
            scores[v] = st.resulting_antibandwidth(v, label);
            best_score = best_score.max(scores[v]);
        }
        st.bound = st.bound.min(best_score);
        let v = (0..n)
            .filter(|&v| !st.is_labeled(v) && scores[v] >= st.bound)
            .max_by_key(|&v| st.tie_key(v))
            .expect("some vertex reaches the lowered bound");
        st.assign(v, label);
    }
    Ok(st.into_labeling())
}

/// Incumbent-guided construction: the bound starts one above `incumbent`;
/// for each label the unlabeled vertices are scanned in descending
/// `(score + ε) · degree` order and the first one reaching the bound wins.
/// Without scores the order is by degree.
pub fn incumbent_guided_heuristic(g: &Graph, incumbent: usize, scores: Option<&LabelScores>) -> Labeling {
    let n = g.n();
    let mut st = HeuristicState::new(g, incumbent + 1);
    let mut unlabeled: Vec<usize> = (0..n).collect();
    let mut weights = vec![0.0f64; n];
    for label in 1..=n {
        for &v in &unlabeled {
            let s = scores.map_or(0.0, |s| s.get(v, label));
            weights[v] = (s + EPSILON) * g.degree(v) as f64;
        }
        unlabeled.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
        let pos = match unlabeled
            .iter()
            .position(|&v| st.resulting_antibandwidth(v, label) >= st.bound)
        {
            Some(p) => p,
            None => {
                let reachable = unlabeled
                    .iter()
                    .map(|&v| st.resulting_antibandwidth(v, label))
                    .max()
                    .unwrap();
                st.bound = reachable;
                unlabeled
                    .iter()
                    .position(|&v| st.resulting_antibandwidth(v, label) >= st.bound)
                    .unwrap()
            }
        };
        let v = unlabeled.remove(pos);
        st.assign(v, label);
    }
    st.into_labeling()
}

/// Antibandwidth of `v` if it carried `label` and `partner` (whose label
/// `v` takes) carried `partner_label`.
fn antibandwidth_after_swap(g: &Graph, f: &Labeling, v: usize, label: usize, partner: usize, partner_label: usize) -> usize {
    g.neighbors(v)
        .iter()
        .map(|&u| {
            let other = if u == partner { partner_label } else { f.label(u) };
            label.abs_diff(other)
        })
        .min()
        .unwrap_or(usize::MAX)
}

/// Swap value: the smaller antibandwidth of the two vertices after they
/// exchange labels.
fn swap_value(g: &Graph, f: &Labeling, a: usize, b: usize) -> usize {
    let (la, lb) = (f.label(a), f.label(b));
    antibandwidth_after_swap(g, f, a, lb, b, la).min(antibandwidth_after_swap(g, f, b, la, a, lb))
}

/// Edges whose label difference equals the labeling's antibandwidth.
pub fn min_edges(g: &Graph, f: &Labeling) -> Vec<(usize, usize)> {
    let Ok(ab) = antibandwidth(g, f) else { return Vec::new() };
    g.edges()
        .iter()
        .copied()
        .filter(|&(u, v)| f.label(u).abs_diff(f.label(v)) == ab)
        .collect()
}

/// Repeatedly repairs the minimum-bandwidth edges by label swaps. For each
/// such edge, every swap of one endpoint with another vertex is evaluated
/// and the one maximizing the smaller of the two swapped vertices'
/// antibandwidths is applied if that value exceeds the current
/// antibandwidth. Stops when a full round applies no swap.
pub fn local_search(g: &Graph, f: &Labeling) -> Labeling {
    let mut f = f.clone();
    let n = g.n();
    loop {
        let Ok(ab) = antibandwidth(g, &f) else { return f };
        let mut improved = false;
        for (i, j) in min_edges(g, &f) {
            if f.label(i).abs_diff(f.label(j)) != ab {
                continue;
            }
            let mut best: Option<(usize, usize, usize)> = None;
            for a in [i, j] {
                for p in (0..n).filter(|&p| p != i && p != j) {
                    let value = swap_value(g, &f, a, p);
                    if value > ab && best.is_none_or(|(bv, _, _)| value > bv) {
                        best = Some((value, a, p));
                    }
                }
            }
            if let Some((_, a, p)) = best {
                f.swap(a, p);
                improved = true;
            }
        }
        if !improved {
            return f;
        }
    }
}

/// Runs both starting heuristics from every root, improves each result with
/// [`local_search`], and returns the best labeling (earliest on ties).
/// Stops early once a labeling reaches `upper_bound`.
pub fn multi_start(g: &Graph, upper_bound: usize) -> Result<Labeling> {
    if !g.is_connected() {
        bfs_layers(g, 0)?;
    }
    if g.m() == 0 {
        return Ok(Labeling::identity(g.n()));
    }
    let chunk = rayon::current_num_threads().max(1) * 2;
    let roots: Vec<usize> = (0..g.n()).collect();
    let mut best: Option<(usize, Labeling)> = None;
    for batch in roots.chunks(chunk) {
        let results: Vec<Result<[(usize, Labeling); 2]>> = batch
            .par_iter()
            .map(|&root| {
                let a = local_search(g, &bfs_layer_heuristic(g, root)?);
                let b = local_search(g, &bound_guided_heuristic(g, root, upper_bound)?);
                Ok([(antibandwidth(g, &a)?, a), (antibandwidth(g, &b)?, b)])
            })
            .collect();
        for pair in results {
            for (ab, f) in pair? {
                if best.as_ref().is_none_or(|(b, _)| ab > *b) {
                    best = Some((ab, f));
                }
            }
        }
        if best.as_ref().is_some_and(|(b, _)| *b >= upper_bound) {
            break;
        }
    }
    Ok(best.expect("at least one root").1)
}
