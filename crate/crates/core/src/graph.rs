//! Undirected simple graphs, vertex labelings and the quantities measured on them.
//!
//! Vertices are `0..n` internally. Labels are `1..=n`, matching instance files
//! and reports.

use std::collections::VecDeque;

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// Counts of entries dropped while building a graph from raw input.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildReport {
    pub self_loops: usize,
    pub duplicates: usize,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adjacency: Vec<Vec<usize>>,
    adj_bits: Vec<BitSet>,
    edges: Vec<(usize, usize)>,
    max_degree: usize,
    min_degree: usize,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("m", &self.edges.len())
            .field("edges", &self.edges)
            .finish()
    }
}

impl Graph {
    /// Builds a graph, dropping self-loops and duplicate (including mirrored)
    /// edges. Endpoints are 0-based.
    pub fn build<I>(n: usize, edges: I) -> Result<(Graph, BuildReport)>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut report = BuildReport::default();
        let mut adj_bits = vec![BitSet::new(n); n];
        let mut list = Vec::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x + 1, n });
                }
            }
            if u == v {
                report.self_loops += 1;
                continue;
            }
            if adj_bits[u].contains(v) {
                report.duplicates += 1;
                continue;
            }
            adj_bits[u].insert(v);
            adj_bits[v].insert(u);
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        let adjacency: Vec<Vec<usize>> = adj_bits.iter().map(|b| b.iter().collect()).collect();
        let max_degree = adjacency.iter().map(Vec::len).max().unwrap_or(0);
        let min_degree = adjacency.iter().map(Vec::len).min().unwrap_or(0);
        Ok((
            Graph {
                n,
                adjacency,
                adj_bits,
                edges: list,
                max_degree,
                min_degree,
            },
            report,
        ))
    }

    /// Strict constructor: self-loops are an error, duplicates are merged.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let edges: Vec<_> = edges.into_iter().collect();
        if let Some(&(u, _)) = edges.iter().find(|(u, v)| u == v) {
            return Err(Error::SelfLoop(u + 1));
        }
        Graph::build(n, edges).map(|(g, _)| g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    #[inline]
    pub fn neighbor_set(&self, v: usize) -> &BitSet {
        &self.adj_bits[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj_bits[u].contains(v)
    }

    /// Edges as `(i, i')` pairs with `i < i'`, sorted.
    #[inline]
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn min_degree(&self) -> usize {
        self.min_degree
    }

    /// The vertex of maximum degree with the smallest index.
    pub fn max_degree_vertex(&self) -> Option<usize> {
        (0..self.n).find(|&v| self.degree(v) == self.max_degree)
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.reachable_from(0).len() == self.n
    }

    fn reachable_from(&self, root: usize) -> BitSet {
        let mut seen = BitSet::new(self.n);
        let mut stack = vec![root];
        seen.insert(root);
        while let Some(v) = stack.pop() {
            for &u in &self.adjacency[v] {
                if !seen.contains(u) {
                    seen.insert(u);
                    stack.push(u);
                }
            }
        }
        seen
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut assigned = BitSet::new(self.n);
        let mut out = Vec::new();
        for v in 0..self.n {
            if assigned.contains(v) {
                continue;
            }
            let comp = self.reachable_from(v);
            assigned.union_with(&comp);
            out.push(comp.iter().collect());
        }
        out
    }

    /// Subgraph induced by `vertices`; vertex `vertices[k]` becomes `k`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (k, &v) in vertices.iter().enumerate() {
            index[v] = k;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]));
        Graph::build(vertices.len(), edges)
            .expect("induced subgraph of a valid graph")
            .0
    }
}

/// A bijection from vertices to labels `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Labeling(Vec<usize>);

impl Labeling {
    pub fn new(labels: Vec<usize>) -> Result<Labeling> {
        let n = labels.len();
        let mut seen = vec![false; n + 1];
        for (v, &l) in labels.iter().enumerate() {
            if l == 0 || l > n {
                return Err(Error::NotBijection {
                    n,
                    reason: format!("vertex {} has label {}", v + 1, l),
                });
            }
            if std::mem::replace(&mut seen[l], true) {
                return Err(Error::NotBijection {
                    n,
                    reason: format!("label {l} used twice"),
                });
            }
        }
        Ok(Labeling(labels))
    }

    pub fn identity(n: usize) -> Labeling {
        Labeling((1..=n).collect())
    }

    /// Builds the labeling that gives label `k + 1` to `order[k]`.
    pub fn from_order(order: &[usize]) -> Result<Labeling> {
        let n = order.len();
        let mut labels = vec![0; n];
        for (k, &v) in order.iter().enumerate() {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v + 1, n });
            }
            labels[v] = k + 1;
        }
        Labeling::new(labels)
    }

    #[inline]
    pub fn label(&self, v: usize) -> usize {
        self.0[v]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    /// `n + 1 - f(i)`: the mirror labeling with the same antibandwidth.
    pub fn reversed(&self) -> Labeling {
        let n = self.0.len();
        Labeling(self.0.iter().map(|&l| n + 1 - l).collect())
    }

    /// `order[k]` is the vertex carrying label `k + 1`.
    pub fn vertex_order(&self) -> Vec<usize> {
        let mut order = vec![0; self.0.len()];
        for (v, &l) in self.0.iter().enumerate() {
            order[l - 1] = v;
        }
        order
    }

    pub(crate) fn swap(&mut self, a: usize, b: usize) {
        self.0.swap(a, b);
    }
}

/// Breadth-first layering of a connected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerPartition {
    pub root: usize,
    pub layer: Vec<usize>,
    pub layers: Vec<Vec<usize>>,
}

pub fn label_distance(a: usize, b: usize) -> usize {
    a.abs_diff(b)
}

pub fn label_set_distance(a: usize, set: &[usize]) -> Result<usize> {
    set.iter()
        .map(|&b| a.abs_diff(b))
        .min()
        .ok_or(Error::EmptyLabelSet)
}

/// Minimum label difference between `v` and its neighbors; `None` when `v`
/// has no neighbors (the minimum over an empty set).
pub fn vertex_antibandwidth(g: &Graph, f: &Labeling, v: usize) -> Option<usize> {
    let lv = f.label(v);
    g.neighbors(v).iter().map(|&u| lv.abs_diff(f.label(u))).min()
}

pub fn antibandwidth(g: &Graph, f: &Labeling) -> Result<usize> {
    g.edges()
        .iter()
        .map(|&(u, v)| f.label(u).abs_diff(f.label(v)))
        .min()
        .ok_or(Error::Edgeless)
}

pub fn bfs_layers(g: &Graph, root: usize) -> Result<LayerPartition> {
    let n = g.n();
    if root >= n {
        return Err(Error::VertexOutOfRange { vertex: root + 1, n });
    }
    let mut layer = vec![usize::MAX; n];
    layer[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &u in g.neighbors(v) {
            if layer[u] == usize::MAX {
                layer[u] = layer[v] + 1;
                queue.push_back(u);
            }
        }
    }
    let unreached: Vec<usize> = (0..n).filter(|&v| layer[v] == usize::MAX).map(|v| v + 1).collect();
    if !unreached.is_empty() {
        return Err(Error::Disconnected { unreached });
    }
    let depth = layer.iter().copied().max().unwrap_or(0);
    let mut layers = vec![Vec::new(); depth + 1];
    for v in 0..n {
        layers[layer[v]].push(v);
    }
    Ok(LayerPartition { root, layer, layers })
}

/// Small graph families used by tests, examples and the CLI.
pub mod families {
    use super::Graph;

    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).unwrap()
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::from_edges(n, edges).unwrap()
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let edges = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)));
        Graph::from_edges(a + b, edges).unwrap()
    }

    /// `rows x cols` grid, vertices numbered row-major.
    pub fn grid(rows: usize, cols: usize) -> Graph {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    edges.push((v, v + 1));
                }
                if r + 1 < rows {
                    edges.push((v, v + cols));
                }
            }
        }
        Graph::from_edges(rows * cols, edges).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::families::*;
    use super::*;
    use proptest::prelude::*;

    // A..I row-major on the 3x3 grid.
    const FIG1_LABELS: [usize; 9] = [5, 1, 6, 2, 7, 3, 8, 4, 9];

    #[test]
    fn grid_degrees() {
        let g = grid(3, 3);
        assert_eq!((g.n(), g.m()), (9, 12));
        assert_eq!(g.max_degree(), 4);
        assert_eq!(g.min_degree(), 2);
        assert_eq!(g.max_degree_vertex(), Some(4));
        assert_eq!(g.degree(4), 4);
        assert_eq!(g.degree(0), 2);
    }

    #[test]
    fn build_drops_loops_and_duplicates() {
        let (g, rep) = Graph::build(3, [(0, 1), (1, 0), (2, 2), (1, 2)]).unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(rep, BuildReport { self_loops: 1, duplicates: 1 });
        assert_eq!(Graph::from_edges(2, [(1, 1)]), Err(Error::SelfLoop(2)));
        assert!(matches!(
            Graph::from_edges(2, [(0, 2)]),
            Err(Error::VertexOutOfRange { vertex: 3, n: 2 })
        ));
    }

    #[test]
    fn connectivity() {
        assert!(grid(3, 3).is_connected());
        let two_edges = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!two_edges.is_connected());
        assert_eq!(two_edges.components(), vec![vec![0, 1], vec![2, 3]]);
        assert!(Graph::from_edges(1, []).unwrap().is_connected());
    }

    #[test]
    fn fig1_labeling_values() {
        let g = grid(3, 3);
        let f = Labeling::new(FIG1_LABELS.to_vec()).unwrap();
        // vertex C is index 2
        assert_eq!(vertex_antibandwidth(&g, &f, 2), Some(3));
        assert_eq!(antibandwidth(&g, &f), Ok(3));
        assert_eq!(antibandwidth(&g, &Labeling::identity(9)), Ok(1));
    }

    #[test]
    fn path_p4_labeling() {
        let g = path(4);
        let f = Labeling::new(vec![3, 1, 4, 2]).unwrap();
        assert_eq!(antibandwidth(&g, &f), Ok(2));
        let k2 = path(2);
        let f = Labeling::identity(2);
        assert_eq!(vertex_antibandwidth(&k2, &f, 0), Some(1));
        assert_eq!(vertex_antibandwidth(&k2, &f, 1), Some(1));
    }

    #[test]
    fn isolated_vertex_and_edgeless() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        let f = Labeling::identity(3);
        assert_eq!(vertex_antibandwidth(&g, &f, 2), None);
        assert_eq!(antibandwidth(&g, &f), Ok(1));
        let e = Graph::from_edges(3, []).unwrap();
        assert_eq!(antibandwidth(&e, &f), Err(Error::Edgeless));
    }

    #[test]
    fn labeling_rejects_non_bijections() {
        assert!(Labeling::new(vec![1, 1]).is_err());
        assert!(Labeling::new(vec![0, 1]).is_err());
        assert!(Labeling::new(vec![1, 3]).is_err());
        let f = Labeling::from_order(&[2, 0, 1]).unwrap();
        assert_eq!(f.as_slice(), &[2, 3, 1]);
        assert_eq!(f.vertex_order(), vec![2, 0, 1]);
    }

    #[test]
    fn bfs_layers_on_grid() {
        let g = grid(3, 3);
        let lp = bfs_layers(&g, 0).unwrap();
        assert_eq!(
            lp.layers,
            vec![vec![0], vec![1, 3], vec![2, 4, 6], vec![5, 7], vec![8]]
        );
        let s = bfs_layers(&star(4), 0).unwrap();
        assert_eq!(s.layers.iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 4]);
        let p = bfs_layers(&path(3), 1).unwrap();
        assert_eq!(p.layers.iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 2]);
        let d = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            bfs_layers(&d, 0),
            Err(Error::Disconnected { unreached: vec![3, 4] })
        );
    }

    #[test]
    fn distances() {
        assert_eq!(label_distance(6, 3), 3);
        assert_eq!(label_set_distance(5, &[5]), Ok(0));
        assert_eq!(label_set_distance(1, &[3, 7, 9]), Ok(2));
        assert_eq!(label_set_distance(1, &[]), Err(Error::EmptyLabelSet));
    }

    fn arb_graph_and_labeling() -> impl Strategy<Value = (Graph, Labeling)> {
        (2usize..12).prop_flat_map(|n| {
            let pairs = prop::collection::vec((0..n, 0..n), 1..(n * 2));
            let perm = Just((1..=n).collect::<Vec<_>>()).prop_shuffle();
            (pairs, perm).prop_map(move |(pairs, perm)| {
                let mut edges: Vec<_> = pairs.into_iter().filter(|(u, v)| u != v).collect();
                if edges.is_empty() {
                    edges.push((0, 1));
                }
                (Graph::build(n, edges).unwrap().0, Labeling::new(perm).unwrap())
            })
        })
    }

    proptest! {
        #[test]
        fn graph_invariants((g, f) in arb_graph_and_labeling()) {
            let degree_sum: usize = (0..g.n()).map(|v| g.degree(v)).sum();
            prop_assert_eq!(degree_sum, 2 * g.m());
            for &(u, v) in g.edges() {
                prop_assert!(u < v);
                prop_assert!(g.neighbors(u).contains(&v) && g.neighbors(v).contains(&u));
            }
            for v in 0..g.n() {
                prop_assert!(g.min_degree() <= g.degree(v) && g.degree(v) <= g.max_degree());
            }
            let ab = antibandwidth(&g, &f).unwrap();
            prop_assert!(ab >= 1);
            prop_assert_eq!(ab, antibandwidth(&g, &f.reversed()).unwrap());
            let via_vertices = (0..g.n()).filter_map(|v| vertex_antibandwidth(&g, &f, v)).min().unwrap();
            prop_assert_eq!(ab, via_vertices);
            for v in 0..g.n() {
                if let Some(x) = vertex_antibandwidth(&g, &f, v) {
                    prop_assert!(x >= ab);
                }
            }
        }
    }
}
