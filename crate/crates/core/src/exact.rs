//! Exact solver. The decision question "is there a labeling with
//! antibandwidth at least `t`?" is answered by a depth-first search over
//! per-vertex label domains with constraint propagation; [`solve`] raises `t`
//! from the heuristic incumbent until the search fails or the upper bound is
//! met.

use std::cmp::Reverse;
use std::time::{Duration, Instant};

use crate::bitset::BitSet;
use crate::bounds::{best_upper_bound, BoundsConfig, BoundsReport};
use crate::error::{Error, Result};
use crate::graph::{antibandwidth, Graph, Labeling};
use crate::heuristics::multi_start;
use crate::npsolvers::DEFAULT_SUBSOLVER_LIMIT;

pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(1800);

/// Largest order accepted by [`brute_force`].
pub const BRUTE_FORCE_MAX_N: usize = 10;

/// Returned by propagation when the current partial assignment cannot be
/// extended to a labeling with antibandwidth at least `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Conflict;

type Propagation = std::result::Result<(), Conflict>;

/// Cliques of size at least 3 covering every edge that lies in a triangle.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CliqueCatalog {
    cliques: Vec<Vec<usize>>,
}

impl CliqueCatalog {
    /// Greedy maximal-clique growth from each edge not covered yet.
    pub fn build(g: &Graph) -> Self {
        let n = g.n();
        let mut covered: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
        let mut cliques = Vec::new();
        for &(u, v) in g.edges() {
            if covered[u].contains(v) {
                continue;
            }
            let mut cand = g.neighbor_set(u).clone();
            cand.intersect_with(g.neighbor_set(v));
            if cand.is_empty() {
                continue;
            }
            let mut clique = vec![u, v];
            while let Some(w) = cand.iter().max_by_key(|&w| {
                // prefer vertices that cover new edges
                let fresh = clique.iter().filter(|&&c| !covered[c].contains(w)).count();
                (fresh, g.degree(w), Reverse(w))
            }) {
                clique.push(w);
                cand.intersect_with(g.neighbor_set(w));
            }
            for (i, &a) in clique.iter().enumerate() {
                for &b in &clique[i + 1..] {
                    covered[a].insert(b);
                    covered[b].insert(a);
                }
            }
            clique.sort_unstable();
            cliques.push(clique);
        }
        CliqueCatalog { cliques }
    }

    pub fn cliques(&self) -> &[Vec<usize>] {
        &self.cliques
    }

    pub fn largest(&self) -> usize {
        self.cliques.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Partial assignment plus the labels each vertex may still take.
#[derive(Debug, Clone)]
pub struct SearchState {
    t: usize,
    n: usize,
    /// Allowed labels per vertex; bit `l` stands for label `l`.
    domains: Vec<BitSet>,
    /// 0 while unassigned.
    labels: Vec<usize>,
    assigned: Vec<(usize, usize)>,
    used: BitSet,
    pending: Vec<(usize, usize)>,
}

impl SearchState {
    pub fn new(g: &Graph, t: usize) -> Self {
        let n = g.n();
        let mut all = BitSet::new(n + 1);
        all.insert_range(1, n + 1);
        SearchState {
            t,
            n,
            domains: vec![all; n],
            labels: vec![0; n],
            assigned: Vec::new(),
            used: BitSet::new(n + 1),
            pending: Vec::new(),
        }
    }

    pub fn target(&self) -> usize {
        self.t
    }

    pub fn domain(&self, v: usize) -> &BitSet {
        &self.domains[v]
    }

    pub fn label(&self, v: usize) -> Option<usize> {
        (self.labels[v] != 0).then_some(self.labels[v])
    }

    /// Decisions and forced assignments in the order they were made.
    pub fn assigned(&self) -> &[(usize, usize)] {
        &self.assigned
    }

    pub fn is_complete(&self) -> bool {
        self.assigned.len() == self.n
    }

    pub fn labeling(&self) -> Option<Labeling> {
        self.is_complete().then(|| Labeling::new(self.labels.clone()).expect("complete assignment"))
    }

    /// Assigns `label` to `v` and propagates to a fixpoint.
    pub fn propagate(&mut self, g: &Graph, catalog: &CliqueCatalog, v: usize, label: usize) -> Propagation {
        if !self.domains[v].contains(label) {
            return Err(Conflict);
        }
        self.pending.push((v, label));
        self.fixpoint(g, catalog)
    }

    /// Forbids `label` for `v` and propagates.
    pub fn exclude(&mut self, g: &Graph, catalog: &CliqueCatalog, v: usize, label: usize) -> Propagation {
        self.domains[v].remove(label);
        self.fixpoint(g, catalog)
    }

    /// Restricts `v` to labels in `lo..=hi` and propagates.
    pub fn restrict(&mut self, g: &Graph, catalog: &CliqueCatalog, v: usize, lo: usize, hi: usize) -> Propagation {
        let d = &mut self.domains[v];
        d.remove_range(0, lo);
        d.remove_range(hi + 1, self.n + 1);
        self.fixpoint(g, catalog)
    }

    fn apply_pending(&mut self, g: &Graph) -> Propagation {
        let t = self.t;
        while let Some((v, l)) = self.pending.pop() {
            if self.labels[v] == l {
                continue;
            }
            if self.labels[v] != 0 || self.used.contains(l) || !self.domains[v].contains(l) {
                return Err(Conflict);
            }
            self.labels[v] = l;
            self.used.insert(l);
            self.assigned.push((v, l));
            self.domains[v].clear();
            self.domains[v].insert(l);
            for u in 0..self.n {
                if self.labels[u] == 0 {
                    self.domains[u].remove(l);
                }
            }
            for &w in g.neighbors(v) {
                if self.labels[w] != 0 {
                    if self.labels[w].abs_diff(l) < t {
                        return Err(Conflict);
                    }
                } else {
                    self.domains[w].remove_range(l.saturating_sub(t - 1), l + t);
                }
            }
        }
        Ok(())
    }

    /// Runs every propagation rule until nothing changes.
    pub fn fixpoint(&mut self, g: &Graph, catalog: &CliqueCatalog) -> Propagation {
        let t = self.t;
        loop {
            self.apply_pending(g)?;
            let mut changed = false;

            // a label of u needs some label of each neighbor at distance >= t
            for u in 0..self.n {
                if self.labels[u] != 0 {
                    continue;
                }
                for &w in g.neighbors(u) {
                    if self.labels[w] != 0 {
                        continue;
                    }
                    let (Some(lo_w), Some(hi_w)) = (self.domains[w].min(), self.domains[w].max()) else {
                        return Err(Conflict);
                    };
                    let lo = (hi_w + 1).saturating_sub(t);
                    let hi = lo_w + t;
                    if lo < hi && self.domains[u].count_range(lo, hi) > 0 {
                        self.domains[u].remove_range(lo, hi);
                        changed = true;
                    }
                }
            }

            // empty and singleton domains; labels with one or no candidate
            let mut once = BitSet::new(self.n + 1);
            let mut twice = BitSet::new(self.n + 1);
            for u in 0..self.n {
                if self.labels[u] != 0 {
                    continue;
                }
                let d = &self.domains[u];
                match d.len() {
                    0 => return Err(Conflict),
                    1 => self.pending.push((u, d.min().expect("non-empty"))),
                    _ => {}
                }
                let mut both = once.clone();
                both.intersect_with(d);
                twice.union_with(&both);
                once.union_with(d);
            }
            for l in 1..=self.n {
                if self.used.contains(l) {
                    continue;
                }
                if !once.contains(l) {
                    return Err(Conflict);
                }
                if !twice.contains(l) {
                    let u = (0..self.n)
                        .find(|&u| self.labels[u] == 0 && self.domains[u].contains(l))
                        .expect("label has a candidate");
                    self.pending.push((u, l));
                }
            }
            if changed || !self.pending.is_empty() {
                continue;
            }
            if self.hall_intervals()? {
                continue;
            }
            self.clique_windows(catalog)?;
            return Ok(());
        }
    }

    /// Vertices whose domains lie inside `[a, b]` need as many free labels
    /// there; a saturated interval is closed to every other vertex.
    fn hall_intervals(&mut self) -> std::result::Result<bool, Conflict> {
        let mut spans: Vec<(usize, usize)> = (0..self.n)
            .filter(|&u| self.labels[u] == 0)
            .map(|u| (self.domains[u].min().unwrap(), self.domains[u].max().unwrap()))
            .collect();
        if spans.is_empty() {
            return Ok(false);
        }
        spans.sort_unstable_by_key(|&(lo, hi)| (hi, lo));
        let mut free_prefix = vec![0usize; self.n + 1];
        for l in 1..=self.n {
            free_prefix[l] = free_prefix[l - 1] + usize::from(!self.used.contains(l));
        }
        let mut starts: Vec<usize> = spans.iter().map(|s| s.0).collect();
        starts.sort_unstable();
        starts.dedup();
        let mut saturated = Vec::new();
        for &a in &starts {
            let mut count = 0;
            for (i, &(lo, hi)) in spans.iter().enumerate() {
                if lo < a {
                    continue;
                }
                count += 1;
                if spans.get(i + 1).is_some_and(|s| s.1 == hi) {
                    continue;
                }
                let capacity = free_prefix[hi] - free_prefix[a - 1];
                if count > capacity {
                    return Err(Conflict);
                }
                if count == capacity {
                    saturated.push((a, hi));
                }
            }
        }
        let mut changed = false;
        for (a, b) in saturated {
            for u in 0..self.n {
                if self.labels[u] != 0 {
                    continue;
                }
                let d = &mut self.domains[u];
                let inside = d.min().unwrap() >= a && d.max().unwrap() <= b;
                if !inside && d.count_range(a, b + 1) > 0 {
                    d.remove_range(a, b + 1);
                    changed = true;
                }
            }
        }
        Ok(changed)
    }

    /// Members of a clique need pairwise distance `t`, so at most
    /// `⌊(b − a)/t⌋ + 1` of them fit into labels `[a, b]`.
    fn clique_windows(&self, catalog: &CliqueCatalog) -> Propagation {
        let t = self.t;
        let mut spans = Vec::new();
        for clique in catalog.cliques() {
            spans.clear();
            spans.extend(
                clique
                    .iter()
                    .map(|&u| (self.domains[u].min().unwrap(), self.domains[u].max().unwrap())),
            );
            spans.sort_unstable_by_key(|&(lo, hi)| (hi, lo));
            for &(a, _) in spans.iter() {
                let mut count = 0;
                for &(lo, hi) in spans.iter() {
                    if lo >= a {
                        count += 1;
                        if count > (hi - a) / t + 1 {
                            return Err(Conflict);
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Unassigned vertex to branch on: highest degree, then fewest remaining
/// labels, then smallest index. `None` once every vertex is assigned.
pub fn select_branch_vertex(g: &Graph, state: &SearchState) -> Option<usize> {
    (0..g.n())
        .filter(|&v| state.labels[v] == 0 && state.domains[v].len() > 1)
        .max_by_key(|&v| (g.degree(v), Reverse(state.domains[v].len()), Reverse(v)))
}

/// Label tried first on the branching vertex; the sibling branch forbids it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ValueOrder {
    /// Whichever end of the domain lies closer to label 1 or label n.
    #[default]
    ExtremesFirst,
    /// The largest remaining label.
    Largest,
}

impl ValueOrder {
    fn pick(self, domain: &BitSet, n: usize) -> usize {
        let (lo, hi) = (domain.min().unwrap(), domain.max().unwrap());
        match self {
            ValueOrder::Largest => hi,
            ValueOrder::ExtremesFirst if lo - 1 <= n - hi => lo,
            ValueOrder::ExtremesFirst => hi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecideConfig {
    pub time_limit: Duration,
    pub node_limit: Option<u64>,
    /// Restrict a maximum-degree vertex to the lower half of the labels.
    pub symmetry_breaking: bool,
    pub value_order: ValueOrder,
}

impl Default for DecideConfig {
    fn default() -> Self {
        DecideConfig {
            time_limit: DEFAULT_TIME_LIMIT,
            node_limit: None,
            symmetry_breaking: true,
            value_order: ValueOrder::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Feasible(Labeling),
    Infeasible,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecideReport {
    pub decision: Decision,
    pub nodes: u64,
    pub elapsed: Duration,
}

/// Is there a labeling with antibandwidth at least `t`?
pub fn decide(g: &Graph, t: usize, config: &DecideConfig) -> Result<DecideReport> {
    let catalog = CliqueCatalog::build(g);
    decide_with(g, &catalog, t, config)
}

pub fn decide_with(g: &Graph, catalog: &CliqueCatalog, t: usize, config: &DecideConfig) -> Result<DecideReport> {
    let n = g.n();
    if g.m() == 0 {
        return Err(Error::Edgeless);
    }
    if t < 1 || t > n - 1 {
        return Err(Error::OutOfRange { value: t, lo: 1, hi: n - 1 });
    }
    let start = Instant::now();
    let report = |decision, nodes| DecideReport {
        decision,
        nodes,
        elapsed: start.elapsed(),
    };
    if t == 1 {
        return Ok(report(Decision::Feasible(Labeling::identity(n)), 0));
    }

    let mut root = SearchState::new(g, t);
    let mut ok = Ok(());
    if config.symmetry_breaking {
        let hub = g.max_degree_vertex().expect("non-empty graph");
        ok = root.restrict(g, catalog, hub, 1, n.div_ceil(2));
    }
    if ok.is_ok() {
        ok = root.fixpoint(g, catalog);
    }
    if ok.is_err() {
        return Ok(report(Decision::Infeasible, 1));
    }

    let mut nodes = 0u64;
    let mut stack = vec![root];
    while let Some(state) = stack.pop() {
        nodes += 1;
        if config.node_limit.is_some_and(|lim| nodes > lim)
            || (nodes.is_multiple_of(64) && start.elapsed() >= config.time_limit)
        {
            return Ok(report(Decision::Unknown, nodes));
        }
        let Some(v) = select_branch_vertex(g, &state) else {
            let f = state.labeling().expect("no branching vertex means complete");
            debug_assert!(antibandwidth(g, &f)? >= t);
            return Ok(report(Decision::Feasible(f), nodes));
        };
        let label = config.value_order.pick(&state.domains[v], n);
        let mut without = state.clone();
        if without.exclude(g, catalog, v, label).is_ok() {
            stack.push(without);
        }
        let mut with = state;
        if with.propagate(g, catalog, v, label).is_ok() {
            stack.push(with);
        }
    }
    Ok(report(Decision::Infeasible, nodes))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Feasible,
    Unknown,
    InfeasibleInput,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Optimal => "optimal",
            Status::Feasible => "feasible",
            Status::Unknown => "unknown",
            Status::InfeasibleInput => "infeasible_input",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Feasible,
    Infeasible,
    Unknown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Iteration {
    pub t: usize,
    pub outcome: Outcome,
    pub nodes: u64,
    pub seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveConfig {
    /// Budget for the whole solve, bounds and heuristics included.
    pub time_limit: Duration,
    pub subsolver_time_limit: Duration,
    pub node_limit: Option<u64>,
    pub symmetry_breaking: bool,
    pub value_order: ValueOrder,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            time_limit: DEFAULT_TIME_LIMIT,
            subsolver_time_limit: DEFAULT_SUBSOLVER_LIMIT,
            node_limit: None,
            symmetry_breaking: true,
            value_order: ValueOrder::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub best_labeling: Option<Labeling>,
    pub lower_bound: usize,
    pub upper_bound: usize,
    pub status: Status,
    pub iterations: Vec<Iteration>,
    pub bounds: Option<BoundsReport>,
    /// Antibandwidth of the multi-start incumbent.
    pub heuristic_value: usize,
    pub elapsed: Duration,
}

/// Iterative exact algorithm: bounds, heuristic incumbent, then decision
/// searches for increasing targets.
pub fn solve(g: &Graph, config: &SolveConfig) -> Result<SolveResult> {
    let start = Instant::now();
    if g.m() == 0 {
        return Err(Error::Edgeless);
    }
    if !g.is_connected() {
        return Ok(SolveResult {
            best_labeling: None,
            lower_bound: 0,
            upper_bound: 0,
            status: Status::InfeasibleInput,
            iterations: Vec::new(),
            bounds: None,
            heuristic_value: 0,
            elapsed: start.elapsed(),
        });
    }
    let bounds = best_upper_bound(
        g,
        &BoundsConfig {
            subsolver_time_limit: config.subsolver_time_limit,
        },
    )?;
    let mut ub = bounds.best;
    let mut best = multi_start(g, ub)?;
    let mut lb = antibandwidth(g, &best)?;
    let heuristic_value = lb;
    let catalog = CliqueCatalog::build(g);
    let mut iterations = Vec::new();
    let mut exhausted = false;
    while lb < ub {
        let t = lb + 1;
        let Some(remaining) = config.time_limit.checked_sub(start.elapsed()) else {
            exhausted = true;
            break;
        };
        let dc = DecideConfig {
            time_limit: remaining,
            node_limit: config.node_limit,
            symmetry_breaking: config.symmetry_breaking,
            value_order: config.value_order,
        };
        let r = decide_with(g, &catalog, t, &dc)?;
        let outcome = match &r.decision {
            Decision::Feasible(_) => Outcome::Feasible,
            Decision::Infeasible => Outcome::Infeasible,
            Decision::Unknown => Outcome::Unknown,
        };
        log::debug!("t={t}: {outcome:?} after {} nodes in {:.2?}", r.nodes, r.elapsed);
        iterations.push(Iteration {
            t,
            outcome,
            nodes: r.nodes,
            seconds: r.elapsed.as_secs_f64(),
        });
        match r.decision {
            Decision::Feasible(f) => {
                lb = antibandwidth(g, &f)?;
                best = f;
            }
            Decision::Infeasible => ub = t - 1,
            Decision::Unknown => {
                exhausted = true;
                break;
            }
        }
    }
    let status = if lb == ub {
        Status::Optimal
    } else if exhausted {
        Status::Feasible
    } else {
        Status::Unknown
    };
    Ok(SolveResult {
        best_labeling: Some(best),
        lower_bound: lb,
        upper_bound: ub,
        status,
        iterations,
        bounds: Some(bounds),
        heuristic_value,
        elapsed: start.elapsed(),
    })
}

/// Exhaustive maximum over all labelings, for small graphs only. A labeling
/// and its reversal have the same antibandwidth, so vertex 0 only takes the
/// lower half of the labels.
pub fn brute_force(g: &Graph) -> Result<usize> {
    let n = g.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::TooLarge { n, max: BRUTE_FORCE_MAX_N });
    }
    if g.m() == 0 {
        return Err(Error::Edgeless);
    }
    fn extend(g: &Graph, labels: &mut [usize], used: &mut [bool], v: usize, current: usize, best: &mut usize) {
        let n = g.n();
        if v == n {
            *best = (*best).max(current);
            return;
        }
        let top = if v == 0 { n.div_ceil(2) } else { n };
        for l in 1..=top {
            if used[l] {
                continue;
            }
            let here = g
                .neighbors(v)
                .iter()
                .filter(|&&u| u < v)
                .map(|&u| labels[u].abs_diff(l))
                .min()
                .unwrap_or(usize::MAX)
                .min(current);
            if here <= *best {
                continue;
            }
            labels[v] = l;
            used[l] = true;
            extend(g, labels, used, v + 1, here, best);
            used[l] = false;
        }
    }
    let mut best = 0;
    extend(g, &mut vec![0; n], &mut vec![false; n + 1], 0, usize::MAX, &mut best);
    Ok(best)
}
