//! Upper bounds on the antibandwidth from order, size, degrees, stability
//! number and chromatic number.

use std::time::Duration;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::npsolvers::{chromatic_number, max_stable_set, DEFAULT_SUBSOLVER_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundsConfig {
    pub subsolver_time_limit: Duration,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        BoundsConfig {
            subsolver_time_limit: DEFAULT_SUBSOLVER_LIMIT,
        }
    }
}

/// A bound that comes from an NP-hard sub-solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundEntry {
    pub value: usize,
    /// The underlying stable set / coloring problem was solved to optimality.
    pub optimal: bool,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsReport {
    pub degree: usize,
    pub size: usize,
    pub stability: BoundEntry,
    pub coloring: BoundEntry,
    pub best: usize,
    /// `false` when the graph is disconnected; the degree and size entries
    /// then use the forms that stay valid without connectivity.
    pub connected: bool,
}

fn require_bound_input(g: &Graph) -> Result<()> {
    if g.m() == 0 {
        return Err(Error::Edgeless);
    }
    if !g.is_connected() {
        return Err(Error::BoundNeedsConnectivity);
    }
    Ok(())
}

fn degree_formula(g: &Graph) -> usize {
    let n = g.n();
    let hub = n - g.max_degree();
    // the (n - Δ⁻ + 1) / 2 term needs every vertex to have a neighbor
    if g.min_degree() == 0 {
        hub
    } else {
        hub.min((n - g.min_degree()).div_ceil(2))
    }
}

/// `min(⌊(n − Δ⁻ + 1)/2⌋, n − Δ⁺)`.
pub fn degree_bound(g: &Graph) -> Result<usize> {
    require_bound_input(g)?;
    Ok(degree_formula(g))
}

/// Smallest `q` with `(2q + 1)² ≥ 8m + 1`, i.e. `⌈(√(8m+1) − 1)/2⌉`.
fn ceil_half_root(m: usize) -> usize {
    let target = 8 * m as u128 + 1;
    let mut q = ((((target as f64).sqrt()) - 1.0) / 2.0).ceil().max(0.0) as u128;
    while q > 0 && (2 * (q - 1) + 1).pow(2) >= target {
        q -= 1;
    }
    while (2 * q + 1).pow(2) < target {
        q += 1;
    }
    q as usize
}

/// `⌊n − (√(8m+1) − 1)/2⌋`, computed exactly in integers.
pub fn size_bound(g: &Graph) -> Result<usize> {
    require_bound_input(g)?;
    Ok(g.n() - ceil_half_root(g.m()))
}

/// `α(G)` or, on timeout, the best proven upper bound on it.
pub fn stability_bound(g: &Graph, time_limit: Duration) -> BoundEntry {
    let r = max_stable_set(g, time_limit);
    BoundEntry {
        value: r.upper_value,
        optimal: r.optimal,
        elapsed: r.elapsed,
    }
}

/// `⌊(n − 1)/(χ − 1)⌋` with the best proven lower bound on `χ`.
pub fn coloring_bound(g: &Graph, time_limit: Duration) -> Result<BoundEntry> {
    if g.m() == 0 {
        return Err(Error::Edgeless);
    }
    let r = chromatic_number(g, time_limit);
    debug_assert!(r.lower_value >= 2);
    Ok(BoundEntry {
        value: (g.n() - 1) / (r.lower_value - 1),
        optimal: r.optimal,
        elapsed: r.elapsed,
    })
}

/// Computes all four bounds; the stability and coloring sub-solves run in parallel.
pub fn best_upper_bound(g: &Graph, config: &BoundsConfig) -> Result<BoundsReport> {
    if g.m() == 0 {
        return Err(Error::Edgeless);
    }
    let connected = g.is_connected();
    let limit = config.subsolver_time_limit;
    let (stability, coloring) = rayon::join(|| stability_bound(g, limit), || coloring_bound(g, limit));
    let coloring = coloring?;
    let degree = degree_formula(g);
    let size = g.n() - ceil_half_root(g.m());
    let best = degree.min(size).min(stability.value).min(coloring.value);
    Ok(BoundsReport {
        degree,
        size,
        stability,
        coloring,
        best,
        connected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use crate::graph::{antibandwidth, Labeling};
    use itertools::Itertools;
    use proptest::prelude::*;

    const LIMIT: Duration = Duration::from_secs(10);

    fn brute_ab(g: &Graph) -> usize {
        (1..=g.n())
            .permutations(g.n())
            .map(|p| antibandwidth(g, &Labeling::new(p).unwrap()).unwrap())
            .max()
            .unwrap()
    }

    /// A graph with the given order, size and degree extremes is enough for
    /// the closed-form bounds.
    fn graph_with(n: usize, m: usize) -> Graph {
        let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (v - 1, v)).collect();
        'outer: for gap in 2..n {
            for u in 0..n - gap {
                if edges.len() == m {
                    break 'outer;
                }
                edges.push((u, u + gap));
            }
        }
        assert_eq!(edges.len(), m);
        Graph::from_edges(n, edges).unwrap()
    }

    #[test]
    fn size_bound_table_values() {
        // (n, m, bound) for instances of the standard benchmark set
        for (n, m, want) in [(30, 103, 16), (32, 90, 19), (420, 3720, 334), (715, 2975, 638), (2, 1, 1)] {
            assert_eq!(size_bound(&graph_with(n, m)).unwrap(), want, "n={n} m={m}");
        }
    }

    #[test]
    fn size_bound_at_perfect_squares() {
        // 8m + 1 is a perfect square for triangular m = q(q+1)/2
        for q in 1..200usize {
            let m = q * (q + 1) / 2;
            assert_eq!(ceil_half_root(m), q);
            assert_eq!(ceil_half_root(m + 1), q + 1);
        }
    }

    #[test]
    fn complete_graph_bounds() {
        for n in 2..8 {
            let g = complete(n);
            assert_eq!(degree_bound(&g), Ok(1));
            let r = best_upper_bound(&g, &BoundsConfig::default()).unwrap();
            assert_eq!(r.best, 1);
            assert_eq!(r.stability.value, 1);
        }
    }

    #[test]
    fn bipartite_coloring_bound() {
        let g = grid(3, 4);
        assert_eq!(coloring_bound(&g, LIMIT).unwrap().value, 11);
        let g = complete_bipartite(3, 3);
        assert_eq!(coloring_bound(&g, LIMIT).unwrap().value, 5);
    }

    #[test]
    fn input_errors() {
        let disconnected = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(degree_bound(&disconnected), Err(Error::BoundNeedsConnectivity));
        assert_eq!(size_bound(&disconnected), Err(Error::BoundNeedsConnectivity));
        let edgeless = Graph::from_edges(3, []).unwrap();
        assert_eq!(coloring_bound(&edgeless, LIMIT), Err(Error::Edgeless));
        assert_eq!(best_upper_bound(&edgeless, &BoundsConfig::default()), Err(Error::Edgeless));
    }

    #[test]
    fn disconnected_report_stays_sound() {
        // two disjoint edges admit labels (1,3),(2,4): antibandwidth 2
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let r = best_upper_bound(&g, &BoundsConfig::default()).unwrap();
        assert!(!r.connected);
        assert!(r.best >= brute_ab(&g));
        // an edge plus isolated vertices: labels 1 and n
        let g = Graph::from_edges(5, [(0, 1)]).unwrap();
        let r = best_upper_bound(&g, &BoundsConfig::default()).unwrap();
        assert_eq!(brute_ab(&g), 4);
        assert!(r.best >= 4);
    }

    fn arb_connected(max_n: usize) -> impl Strategy<Value = Graph> {
        (2..=max_n).prop_flat_map(|n| {
            let parents = (1..n).map(|v| 0..v).collect::<Vec<_>>();
            let extra = prop::collection::vec((0..n, 0..n), 0..n * 2);
            (parents, extra).prop_map(move |(parents, extra)| {
                let mut edges: Vec<_> = parents.into_iter().enumerate().map(|(i, p)| (p, i + 1)).collect();
                edges.extend(extra.into_iter().filter(|(a, b)| a != b));
                Graph::build(n, edges).unwrap().0
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(120))]
        #[test]
        fn bounds_are_sound(g in arb_connected(8)) {
            let ab = brute_ab(&g);
            let r = best_upper_bound(&g, &BoundsConfig::default()).unwrap();
            prop_assert!(r.connected);
            prop_assert!(r.degree >= ab && r.size >= ab && r.stability.value >= ab && r.coloring.value >= ab);
            prop_assert_eq!(r.best, r.degree.min(r.size).min(r.stability.value).min(r.coloring.value));
            prop_assert!(r.best >= 1);
        }

        #[test]
        fn size_bound_inequality(n in 2usize..2000, frac in 0.0f64..1.0) {
            let max_m = n * (n - 1) / 2;
            let m = ((max_m as f64 * frac) as usize).clamp(1, max_m);
            let k = n - ceil_half_root(m);
            // n - k - 1 < (√(8m+1) - 1)/2 <= n - k, checked in integers
            let q = (n - k) as u128;
            let t = 8 * m as u128 + 1;
            prop_assert!((2 * q + 1).pow(2) >= t);
            prop_assert!((2 * q - 1).pow(2) < t);
            prop_assert!(k >= 1);
        }
    }
}
