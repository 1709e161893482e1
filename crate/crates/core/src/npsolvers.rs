//! Anytime solvers for maximum stable set and minimum coloring.
//!
//! Both return an [`NpResult`] whose `lower_value..=upper_value` interval is
//! valid even when the time limit stops the search early, which is all the
//! stability and coloring bounds need.

use std::time::{Duration, Instant};

use crate::bitset::BitSet;
use crate::graph::Graph;

pub const DEFAULT_SUBSOLVER_LIMIT: Duration = Duration::from_secs(10);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NpKind {
    StableSet,
    Coloring,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Vertices of a stable set, ascending.
    StableSet(Vec<usize>),
    /// Color of each vertex, colors numbered from 0.
    Coloring(Vec<usize>),
}

#[derive(Debug, Clone)]
pub struct NpResult {
    pub kind: NpKind,
    pub lower_value: usize,
    pub upper_value: usize,
    pub certificate: Certificate,
    pub optimal: bool,
    pub elapsed: Duration,
}

/// Greedy clique: start from each vertex, repeatedly add the candidate of
/// highest degree. Returns the largest clique found.
pub fn greedy_clique(g: &Graph) -> Vec<usize> {
    let mut best: Vec<usize> = Vec::new();
    for start in 0..g.n() {
        let mut clique = vec![start];
        let mut cand = g.neighbor_set(start).clone();
        while let Some(u) = cand.iter().max_by_key(|&u| (g.degree(u), std::cmp::Reverse(u))) {
            clique.push(u);
            cand.intersect_with(g.neighbor_set(u));
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best.sort_unstable();
    best
}

fn first_free_color(g: &Graph, v: usize, color: &[usize], scratch: &mut Vec<bool>) -> usize {
    scratch.clear();
    scratch.resize(g.degree(v) + 1, false);
    for &u in g.neighbors(v) {
        if color[u] < scratch.len() {
            scratch[color[u]] = true;
        }
    }
    scratch.iter().position(|&used| !used).unwrap()
}

/// Sequential coloring in descending-degree order (ties by index), each
/// vertex taking the smallest feasible color.
pub fn greedy_coloring(g: &Graph) -> NpResult {
    let start = Instant::now();
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut color = vec![usize::MAX; g.n()];
    let mut scratch = Vec::new();
    for &v in &order {
        color[v] = first_free_color(g, v, &color, &mut scratch);
    }
    let used = color.iter().map(|&c| c + 1).max().unwrap_or(0);
    let lower = greedy_clique(g).len();
    NpResult {
        kind: NpKind::Coloring,
        lower_value: lower,
        upper_value: used,
        certificate: Certificate::Coloring(color),
        optimal: lower == used,
        elapsed: start.elapsed(),
    }
}

// ---------------------------------------------------------------------------
// Stable set

struct MisSearch<'a> {
    g: &'a Graph,
    deadline: Instant,
    nodes: u64,
    timed_out: bool,
}

struct SubResult {
    set: Vec<usize>,
    ub: usize,
}

impl MisSearch<'_> {
    fn out_of_time(&mut self) -> bool {
        if !self.timed_out {
            self.nodes += 1;
            if self.nodes.is_multiple_of(256) && Instant::now() >= self.deadline {
                self.timed_out = true;
            }
        }
        self.timed_out
    }

    fn deg(&self, v: usize, cand: &BitSet) -> usize {
        self.g.neighbor_set(v).intersection_len(cand)
    }

    /// Degree-0/1 and domination reductions; forced vertices move to `taken`.
    fn reduce(&self, cand: &mut BitSet, taken: &mut Vec<usize>) {
        let mut changed = true;
        while changed {
            changed = false;
            let verts: Vec<usize> = cand.iter().collect();
            for &v in &verts {
                if !cand.contains(v) {
                    continue;
                }
                match self.deg(v, cand) {
                    0 => {
                        cand.remove(v);
                        taken.push(v);
                        changed = true;
                    }
                    1 => {
                        let u = self.g.neighbor_set(v).iter().find(|&u| cand.contains(u)).unwrap();
                        cand.remove(v);
                        cand.remove(u);
                        taken.push(v);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if changed {
                continue;
            }
            // N[v] ⊆ N[u] within cand: some maximum stable set avoids u.
            for &v in &verts {
                if !cand.contains(v) {
                    continue;
                }
                let mut closed_v = self.g.neighbor_set(v).clone();
                closed_v.intersect_with(cand);
                closed_v.insert(v);
                let dominated = closed_v.iter().filter(|&u| u != v).find(|&u| {
                    let mut closed_u = self.g.neighbor_set(u).clone();
                    closed_u.insert(u);
                    closed_v.is_subset(&closed_u)
                });
                if let Some(u) = dominated {
                    cand.remove(u);
                    changed = true;
                }
            }
        }
    }

    fn components(&self, cand: &BitSet) -> Vec<BitSet> {
        let mut left = cand.clone();
        let mut out = Vec::new();
        while let Some(s) = left.min() {
            let mut comp = BitSet::new(cand.capacity());
            let mut stack = vec![s];
            comp.insert(s);
            left.remove(s);
            while let Some(v) = stack.pop() {
                let mut next = self.g.neighbor_set(v).clone();
                next.intersect_with(&left);
                for u in next.iter() {
                    left.remove(u);
                    comp.insert(u);
                    stack.push(u);
                }
            }
            out.push(comp);
        }
        out
    }

    /// Number of cliques in a greedy clique cover of `cand`; bounds α from above.
    fn clique_cover(&self, cand: &BitSet) -> usize {
        let mut verts: Vec<usize> = cand.iter().collect();
        verts.sort_by_key(|&v| (self.deg(v, cand), v));
        let mut commons: Vec<BitSet> = Vec::new();
        for v in verts {
            match commons.iter_mut().find(|c| c.contains(v)) {
                Some(c) => c.intersect_with(self.g.neighbor_set(v)),
                None => {
                    let mut c = self.g.neighbor_set(v).clone();
                    c.intersect_with(cand);
                    commons.push(c);
                }
            }
        }
        commons.len()
    }

    fn greedy(&self, cand: &BitSet) -> Vec<usize> {
        let mut left = cand.clone();
        let mut set = Vec::new();
        while !left.is_empty() {
            let v = left.iter().min_by_key(|&v| (self.deg(v, &left), v)).unwrap();
            set.push(v);
            left.remove(v);
            left.difference_with(self.g.neighbor_set(v));
        }
        set
    }

    /// Solves α(G[cand]) for solutions larger than `need`. The returned set is
    /// always stable; it is maximum whenever α > need and time did not run out.
    /// `ub` is always a valid upper bound on α(G[cand]).
    fn solve(&mut self, mut cand: BitSet, need: isize) -> SubResult {
        let mut forced = Vec::new();
        self.reduce(&mut cand, &mut forced);
        let f = forced.len();
        if cand.is_empty() {
            return SubResult { set: forced, ub: f };
        }
        let comps = self.components(&cand);
        if comps.len() > 1 {
            let mut bounds: Vec<usize> = comps.iter().map(|c| self.clique_cover(c)).collect();
            let mut set = forced;
            for (i, comp) in comps.into_iter().enumerate() {
                let rest: usize = bounds.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, b)| b).sum();
                let sub = self.solve(comp, need - f as isize - rest as isize);
                bounds[i] = sub.ub.min(bounds[i]);
                set.extend(sub.set);
            }
            return SubResult { set, ub: f + bounds.iter().sum::<usize>() };
        }

        let bound = self.clique_cover(&cand);
        if (f + bound) as isize <= need || self.out_of_time() {
            let mut set = forced;
            set.extend(self.greedy(&cand));
            return SubResult { set, ub: f + bound };
        }
        let v = cand
            .iter()
            .max_by_key(|&v| (self.deg(v, &cand), std::cmp::Reverse(v)))
            .unwrap();
        let local_need = need - f as isize;

        let mut take = cand.clone();
        take.difference_with(self.g.neighbor_set(v));
        take.remove(v);
        let a = self.solve(take, local_need - 1);
        let mut best = a.set;
        best.push(v);
        let mut ub = a.ub + 1;
        if best.len() < bound {
            let mut skip = cand;
            skip.remove(v);
            let b = self.solve(skip, local_need.max(best.len() as isize));
            if b.set.len() > best.len() {
                best = b.set;
            }
            ub = ub.max(b.ub);
        }
        let mut set = forced;
        set.extend(best);
        SubResult { set, ub: f + ub.min(bound) }
    }
}

/// Maximum stable set by branch-and-bound with reductions, component
/// splitting and a clique-cover bound.
pub fn max_stable_set(g: &Graph, time_limit: Duration) -> NpResult {
    let start = Instant::now();
    let mut search = MisSearch {
        g,
        deadline: start + time_limit,
        nodes: 0,
        timed_out: false,
    };
    let all = BitSet::full(g.n());
    let greedy = search.greedy(&all);
    let sub = search.solve(all, greedy.len() as isize - 1);
    let mut set = if sub.set.len() >= greedy.len() { sub.set } else { greedy };
    set.sort_unstable();
    let lower = set.len();
    let upper = if search.timed_out { sub.ub.max(lower) } else { lower };
    NpResult {
        kind: NpKind::StableSet,
        lower_value: lower,
        upper_value: upper,
        certificate: Certificate::StableSet(set),
        optimal: lower == upper,
        elapsed: start.elapsed(),
    }
}

// ---------------------------------------------------------------------------
// Coloring

struct ColorSearch<'a> {
    g: &'a Graph,
    color: Vec<usize>,
    // neighbor_colors[v][c]: how many neighbors of v have color c
    neighbor_colors: Vec<Vec<u32>>,
    saturation: Vec<usize>,
    uncolored_degree: Vec<usize>,
    best: Vec<usize>,
    best_count: usize,
    lower: usize,
    deadline: Instant,
    nodes: u64,
    timed_out: bool,
}

const UNCOLORED: usize = usize::MAX;

impl ColorSearch<'_> {
    fn assign(&mut self, v: usize, c: usize) {
        self.color[v] = c;
        for &u in self.g.neighbors(v) {
            let slot = &mut self.neighbor_colors[u][c];
            if *slot == 0 {
                self.saturation[u] += 1;
            }
            *slot += 1;
            self.uncolored_degree[u] -= 1;
        }
    }

    fn unassign(&mut self, v: usize) {
        let c = self.color[v];
        self.color[v] = UNCOLORED;
        for &u in self.g.neighbors(v) {
            let slot = &mut self.neighbor_colors[u][c];
            *slot -= 1;
            if *slot == 0 {
                self.saturation[u] -= 1;
            }
            self.uncolored_degree[u] += 1;
        }
    }

    fn pick(&self) -> Option<usize> {
        (0..self.g.n())
            .filter(|&v| self.color[v] == UNCOLORED)
            .max_by_key(|&v| (self.saturation[v], self.uncolored_degree[v], std::cmp::Reverse(v)))
    }

    fn search(&mut self, used: usize) {
        if self.best_count == self.lower || self.timed_out {
            return;
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) && Instant::now() >= self.deadline {
            self.timed_out = true;
            return;
        }
        let Some(v) = self.pick() else {
            self.best_count = used;
            self.best = self.color.clone();
            return;
        };
        if self.saturation[v] >= self.best_count - 1 {
            return;
        }
        for c in 0..=used {
            if c + 1 >= self.best_count || self.best_count == self.lower || self.timed_out {
                break;
            }
            if self.neighbor_colors[v][c] > 0 {
                continue;
            }
            self.assign(v, c);
            self.search(used.max(c + 1));
            self.unassign(v);
        }
    }
}

/// Exact coloring by DSATUR branch-and-bound, seeded with the greedy
/// coloring as incumbent and a greedy clique as lower bound.
pub fn chromatic_number(g: &Graph, time_limit: Duration) -> NpResult {
    let start = Instant::now();
    let n = g.n();
    let greedy = greedy_coloring(g);
    let Certificate::Coloring(initial) = greedy.certificate else { unreachable!() };
    let clique = greedy_clique(g);
    let lower = clique.len().max(usize::from(n > 0));
    let mut search = ColorSearch {
        g,
        color: vec![UNCOLORED; n],
        neighbor_colors: vec![vec![0; greedy.upper_value + 1]; n],
        saturation: vec![0; n],
        uncolored_degree: (0..n).map(|v| g.degree(v)).collect(),
        best: initial,
        best_count: greedy.upper_value,
        lower,
        deadline: start + time_limit,
        nodes: 0,
        timed_out: false,
    };
    if search.best_count > lower {
        for (c, &v) in clique.iter().enumerate() {
            search.assign(v, c);
        }
        search.search(clique.len());
    }
    let upper = search.best_count;
    let lower = if search.timed_out { lower } else { upper };
    NpResult {
        kind: NpKind::Coloring,
        lower_value: lower,
        upper_value: upper,
        certificate: Certificate::Coloring(search.best),
        optimal: lower == upper,
        elapsed: start.elapsed(),
    }
}
