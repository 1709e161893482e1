//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Benchmark instances are read from `ANTIBAND_INSTANCE_DIR`, or from
//! `data/harwell-boeing/` at the workspace root. Criteria that need an
//! instance that is not on disk fail and name the missing files.

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use antiband_core::bounds::{coloring_bound, degree_bound, size_bound, stability_bound, best_upper_bound, BoundsConfig};
use antiband_core::exact::{brute_force, decide, solve, DecideConfig, Decision, SolveConfig, Status};
use antiband_core::graph::families::{complete, complete_bipartite, cycle, grid, path, star};
use antiband_core::heuristics::multi_start;
use antiband_core::io::read_instance;
use antiband_core::mip_export::{export, export_f, export_f_e_k, export_f_lit, lp, Formulation};
use antiband_core::{antibandwidth, Graph, Labeling};
use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

struct Row {
    name: &'static str,
    n: usize,
    m: usize,
    t1: usize,
    t2: usize,
    t3: usize,
    t4: usize,
    z_l: usize,
}

#[allow(clippy::too_many_arguments)]
const fn row(name: &'static str, n: usize, m: usize, t1: usize, t2: usize, t3: usize, t4: usize, z_l: usize) -> Row {
    Row { name, n, m, t1, t2, t3, t4, z_l }
}

// name, |V|, |E|, degree bound, size bound, stability bound, coloring bound, best known value
const TABLE: [Row; 24] = [
    row("pores1", 30, 103, 13, 16, 8, 9, 6),
    row("ibm32", 32, 90, 15, 19, 13, 10, 9),
    row("bcspwr01", 39, 46, 19, 29, 21, 19, 17),
    row("bcsstk01", 48, 176, 22, 29, 13, 9, 8),
    row("bcspwr02", 49, 59, 24, 38, 27, 24, 21),
    row("curtis54", 54, 124, 26, 38, 22, 13, 13),
    row("will57", 57, 127, 28, 41, 25, 14, 13),
    row("impcolb", 59, 281, 29, 35, 21, 8, 8),
    row("ash85", 85, 219, 42, 64, 29, 28, 21),
    row("nos4", 100, 247, 50, 78, 40, 49, 34),
    row("dwt234", 117, 162, 58, 99, 76, 58, 50),
    row("bcspwr03", 118, 179, 59, 99, 57, 39, 39),
    row("bcsstk06", 420, 3720, 210, 334, 72, 38, 32),
    row("bcsstk07", 420, 3720, 210, 334, 72, 38, 31),
    row("impcold", 425, 1267, 212, 375, 173, 141, 103),
    row("can445", 445, 1682, 221, 387, 120, 148, 82),
    row("494bus", 494, 586, 247, 460, 278, 246, 227),
    row("dwt503", 503, 2762, 250, 429, 127, 71, 53),
    row("sherman4", 546, 1341, 272, 494, 273, 545, 261),
    row("dwt592", 592, 2256, 295, 525, 150, 197, 113),
    row("662bus", 662, 906, 331, 619, 351, 220, 220),
    row("nos6", 675, 1290, 337, 624, 338, 674, 329),
    row("685bus", 685, 1282, 342, 634, 313, 136, 136),
    row("can715", 715, 2975, 357, 638, 208, 142, 115),
];

const SMALL: usize = 12;

// (instance, proven optimum)
const OPTIMA: [(&str, usize); 5] = [("bcspwr03", 39), ("impcolb", 8), ("curtis54", 13), ("bcspwr01", 17), ("ibm32", 9)];

fn instance_dir() -> PathBuf {
    match std::env::var_os("ANTIBAND_INSTANCE_DIR") {
        Some(d) => PathBuf::from(d),
        None => {
            let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/harwell-boeing");
            p.canonicalize().unwrap_or(p)
        }
    }
}

/// Collection file names differ from the short names used in the table.
fn aliases(name: &str) -> Vec<String> {
    let mut out = vec![name.to_string()];
    let extra: &[&str] = match name {
        "impcolb" => &["impcol_b"],
        "impcold" => &["impcol_d"],
        "can445" => &["can_445"],
        "can715" => &["can_715"],
        "494bus" => &["494_bus"],
        "662bus" => &["662_bus"],
        "685bus" => &["685_bus"],
        _ => &[],
    };
    out.extend(extra.iter().map(|s| s.to_string()));
    out.extend(out.clone().into_iter().map(|s| s.to_uppercase()));
    out
}

fn load(name: &str) -> Option<Graph> {
    let dir = instance_dir();
    for base in aliases(name) {
        for ext in ["mtx", "mtx.rnd", "rnd", "txt"] {
            let p = dir.join(format!("{base}.{ext}"));
            if p.is_file() {
                return match read_instance(&p) {
                    Ok(parsed) => Some(parsed.graph),
                    Err(e) => panic!("{}: {e}", p.display()),
                };
            }
        }
    }
    None
}

struct Instances {
    loaded: Vec<(&'static Row, Graph)>,
    missing: Vec<&'static str>,
}

impl Instances {
    fn load(rows: &'static [Row]) -> Instances {
        let mut loaded = Vec::new();
        let mut missing = Vec::new();
        for r in rows {
            match load(r.name) {
                Some(g) => loaded.push((r, g)),
                None => missing.push(r.name),
            }
        }
        Instances { loaded, missing }
    }
}

type Verdict = Result<String, String>;
type Check<'a> = Box<dyn Fn() -> Verdict + 'a>;

fn mismatch(errors: &[String]) -> Verdict {
    if errors.is_empty() {
        Ok(String::new())
    } else {
        Err(errors.join("; "))
    }
}

fn missing_note(missing: &[&str]) -> String {
    format!("instance files not found in {}: {}", instance_dir().display(), missing.join(", "))
}

// ---------------------------------------------------------------- oracle

fn oracle(g: &Graph) -> usize {
    let n = g.n();
    (1..=n)
        .permutations(n)
        .map(|p| g.edges().iter().map(|&(u, v)| p[u].abs_diff(p[v])).min().unwrap())
        .max()
        .unwrap()
}

fn random_connected(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let mut edges = HashSet::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.insert((u, v));
    }
    let p = rng.gen_range(0.1..0.7);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.insert((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Families on n ≤ 7 plus a handful of random connected graphs per order.
fn small_oracle_graphs() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for n in 2..=7 {
        out.push((format!("P{n}"), path(n)));
        out.push((format!("K{n}"), complete(n)));
        out.push((format!("S{}", n - 1), star(n - 1)));
        if n >= 3 {
            out.push((format!("C{n}"), cycle(n)));
        }
        for a in 1..=n / 2 {
            out.push((format!("K{a},{}", n - a), complete_bipartite(a, n - a)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 3..=7 {
        for i in 0..20 {
            out.push((format!("R{n}.{i}"), random_connected(&mut rng, n)));
        }
    }
    out
}

fn random_n8_graphs() -> Vec<(String, Graph)> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    (0..200).map(|i| (format!("R8.{i}"), random_connected(&mut rng, 8))).collect()
}

/// Every graph with at least one edge on 2..=max_n vertices, one per
/// isomorphism class.
fn all_graphs_up_to(max_n: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
        let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
        let index = |u: usize, v: usize| pairs.iter().position(|&p| p == (u.min(v), u.max(v))).unwrap();
        let relabel: Vec<Vec<usize>> = perms
            .iter()
            .map(|p| pairs.iter().map(|&(u, v)| index(p[u], p[v])).collect())
            .collect();
        let mut seen = HashSet::new();
        for mask in 1u32..(1 << pairs.len()) {
            let canon = relabel
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(i, _)| mask >> i & 1 == 1).fold(0u32, |acc, (_, &j)| acc | 1 << j))
                .min()
                .unwrap();
            if seen.insert(canon) {
                let edges = pairs.iter().enumerate().filter(|&(i, _)| canon >> i & 1 == 1).map(|(_, &e)| e);
                out.push(Graph::from_edges(n, edges).unwrap());
            }
        }
    }
    out
}

// -------------------------------------------------------------- criteria

fn formula_bounds() -> Verdict {
    let inst = Instances::load(&TABLE);
    if inst.loaded.is_empty() {
        return Err(missing_note(&inst.missing));
    }
    let start = Instant::now();
    let mut errors = Vec::new();
    for (r, g) in &inst.loaded {
        let got = (g.n(), g.m(), degree_bound(g).unwrap(), size_bound(g).unwrap());
        let want = (r.n, r.m, r.t1, r.t2);
        if got != want {
            errors.push(format!("{}: (n, m, T1.1, T1.2) = {got:?}, expected {want:?}", r.name));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(1) {
        errors.push(format!("took {elapsed:.2?}"));
    }
    mismatch(&errors)?;
    let names: Vec<_> = inst.loaded.iter().map(|(r, _)| r.name).collect();
    Ok(format!(
        "{} available instances match ({}) in {elapsed:.2?}; {} not on disk",
        names.len(),
        names.join(", "),
        inst.missing.len()
    ))
}

fn np_bounds() -> Verdict {
    let limit = Duration::from_secs(60);
    let inst = Instances::load(&TABLE[..SMALL]);
    let mut errors = Vec::new();
    let mut warnings = Vec::new();
    for (r, g) in &inst.loaded {
        let s = stability_bound(g, limit);
        let c = coloring_bound(g, limit).unwrap();
        for (what, entry, want) in [("T1.3", s, r.t3), ("T1.4", c, r.t4)] {
            if entry.optimal {
                if entry.value != want {
                    errors.push(format!("{}: {what} = {}, expected {want}", r.name, entry.value));
                }
            } else if entry.value < want {
                errors.push(format!("{}: {what} = {} after timeout is below {want}", r.name, entry.value));
            } else {
                warnings.push(format!("{}: {what} timed out at {} (table {want})", r.name, entry.value));
            }
        }
    }
    if !inst.missing.is_empty() {
        let names: Vec<_> = inst.loaded.iter().map(|(r, _)| r.name).collect();
        errors.push(format!("verified {}; {}", names.join(", "), missing_note(&inst.missing)));
    }
    mismatch(&errors)?;
    let mut note = format!("{} instances match", inst.loaded.len());
    if !warnings.is_empty() {
        note += &format!("; quality warnings: {}", warnings.join(", "));
    }
    Ok(note)
}

fn exact_optima() -> Verdict {
    let config = SolveConfig {
        time_limit: Duration::from_secs(600),
        subsolver_time_limit: Duration::from_secs(60),
        ..SolveConfig::default()
    };
    let mut errors = Vec::new();
    let mut missing = Vec::new();
    let mut done = Vec::new();
    for (name, opt) in OPTIMA {
        let Some(g) = load(name) else {
            missing.push(name);
            continue;
        };
        let r = solve(&g, &config).unwrap();
        let proven = r.status == Status::Optimal && r.lower_bound == opt && r.upper_bound == opt;
        let witness = r.best_labeling.as_ref().map(|f| antibandwidth(&g, f).unwrap());
        if !proven || witness != Some(opt) {
            errors.push(format!(
                "{name}: status {}, bounds [{}, {}], witness {witness:?}, expected {opt}",
                r.status.as_str(),
                r.lower_bound,
                r.upper_bound
            ));
        } else {
            done.push(format!("{name} = {opt} in {:.2?}", r.elapsed));
        }
    }
    if !missing.is_empty() {
        errors.push(format!("proved {}; {}", done.join(", "), missing_note(&missing)));
    }
    mismatch(&errors)?;
    Ok(done.join(", "))
}

fn oracle_equivalence(small: &[(String, Graph)]) -> Verdict {
    let start = Instant::now();
    let n8 = random_n8_graphs();
    let graphs: Vec<&(String, Graph)> = small.iter().chain(&n8).collect();
    let mut errors: Vec<String> = graphs
        .par_iter()
        .filter_map(|(name, g)| {
            let want = oracle(g);
            let bf = brute_force(g).unwrap();
            let r = solve(g, &SolveConfig::default()).unwrap();
            let ok = bf == want && r.lower_bound == want && r.upper_bound == want && r.status == Status::Optimal;
            (!ok).then(|| format!("{name}: oracle {want}, brute_force {bf}, solve [{}, {}] {}", r.lower_bound, r.upper_bound, r.status.as_str()))
        })
        .collect();
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(600) {
        errors.push(format!("took {elapsed:.1?}"));
    }
    mismatch(&errors)?;
    Ok(format!("{} graphs (n ≤ 8) agree in {elapsed:.1?}", graphs.len()))
}

fn heuristic_floor() -> Verdict {
    let mut errors = Vec::new();
    for n in 4..=12 {
        let g = path(n);
        if n <= 10 {
            assert_eq!(oracle(&g), n / 2, "path oracle");
        }
        let ub = best_upper_bound(&g, &BoundsConfig::default()).unwrap().best;
        let value = antibandwidth(&g, &multi_start(&g, ub).unwrap()).unwrap();
        if value != n / 2 {
            errors.push(format!("P{n}: {value}, expected {}", n / 2));
        }
    }
    let inst = Instances::load(&TABLE[..SMALL]);
    let mut reached = Vec::new();
    for (r, g) in &inst.loaded {
        let ub = best_upper_bound(g, &BoundsConfig::default()).unwrap().best;
        let value = antibandwidth(g, &multi_start(g, ub).unwrap()).unwrap();
        // ≥ 70 % of the best known value, in integers
        if 10 * value < 7 * r.z_l {
            errors.push(format!("{}: {value} < 70% of {}", r.name, r.z_l));
        } else {
            reached.push(format!("{} {value}/{}", r.name, r.z_l));
        }
    }
    if !inst.missing.is_empty() {
        errors.push(format!("P4..P12 exact, {}; {}", reached.join(", "), missing_note(&inst.missing)));
    }
    mismatch(&errors)?;
    Ok(format!("P4..P12 exact; {}", reached.join(", ")))
}

fn decide_all(g: &Graph, symmetry_breaking: bool) -> Vec<Decision> {
    let cfg = DecideConfig {
        symmetry_breaking,
        ..DecideConfig::default()
    };
    (1..g.n()).map(|t| decide(g, t, &cfg).unwrap().decision).collect()
}

fn monotone_boundary(small: &[(String, Graph)]) -> Verdict {
    let errors: Vec<String> = small
        .par_iter()
        .filter_map(|(name, g)| {
            let ab = oracle(g);
            let answers = decide_all(g, true);
            for (t, d) in (1..).zip(&answers) {
                let ok = match d {
                    Decision::Feasible(f) => t <= ab && antibandwidth(g, f).unwrap() >= t,
                    Decision::Infeasible => t > ab,
                    Decision::Unknown => false,
                };
                if !ok {
                    return Some(format!("{name}: t = {t} answered {d:?}, AB = {ab}"));
                }
            }
            None
        })
        .collect();
    mismatch(&errors)?;
    Ok(format!("{} graphs, no unknowns", small.len()))
}

fn export_integrity() -> Verdict {
    let mut errors = Vec::new();
    let g = grid(3, 3);
    let lit = export_f_lit(&g, None).unwrap().stats;
    let got = (lit.variables("x"), lit.variables("l"), lit.variables("y") + lit.variables("z"), lit.variables("b"));
    if got != (81, 9, 24, 1) {
        errors.push(format!("F_lit variables {got:?}"));
    }
    let f = export_f(&g, 8, false).unwrap().stats.constraints("OBJ-N");
    if f != 108 {
        errors.push(format!("F OBJ-N rows {f}"));
    }
    let fek = export_f_e_k(&g, 2).unwrap().stats.constraints("OBJ-k");
    if fek != 84 {
        errors.push(format!("F_E(2) OBJ-k rows {fek}"));
    }

    let graphs = all_graphs_up_to(6);
    let checked: Vec<Result<usize, String>> = graphs
        .par_iter()
        .map(|g| {
            let n = g.n();
            let labelings: Vec<Labeling> = (1..=n).permutations(n).map(|p| Labeling::new(p).unwrap()).collect();
            let mut models = 0;
            // the exporter only accepts targets k + 1 ≤ n − 1
            for k in 1..n - 1 {
                let text = export(g, &Formulation::FEk { k, clique_e: false }).map_err(|e| e.to_string())?;
                let model = lp::parse(&text.body).map_err(|e| e.to_string())?;
                for f in &labelings {
                    let value = |var: &str| {
                        let (_, i, l) = var.split('_').collect_tuple().unwrap();
                        i64::from(f.label(i.parse::<usize>().unwrap() - 1) == l.parse::<usize>().unwrap())
                    };
                    let accepted = model.violated(value).is_empty();
                    if accepted != (antibandwidth(g, f).unwrap() > k) {
                        return Err(format!("k = {k}, edges {:?}, labeling {:?}", g.edges(), f.as_slice()));
                    }
                }
                models += 1;
            }
            Ok(models)
        })
        .collect();
    let mut models = 0;
    for c in checked {
        match c {
            Ok(k) => models += k,
            Err(e) => errors.push(e),
        }
    }
    mismatch(&errors)?;
    Ok(format!("grid counts match; verifier agrees on {} graphs (n ≤ 6), {models} models", graphs.len()))
}

fn symmetry_safety(small: &[(String, Graph)]) -> Verdict {
    let errors: Vec<String> = small
        .par_iter()
        .filter_map(|(name, g)| {
            let on = decide_all(g, true);
            let off = decide_all(g, false);
            let feasible = |d: &Decision| matches!(d, Decision::Feasible(_));
            let known = |d: &Decision| !matches!(d, Decision::Unknown);
            (1..)
                .zip(on.iter().zip(&off))
                .find(|(_, (a, b))| !known(a) || !known(b) || feasible(a) != feasible(b))
                .map(|(t, (a, b))| format!("{name}: t = {t}: with {a:?}, without {b:?}"))
        })
        .collect();
    mismatch(&errors)?;
    Ok(format!("{} graphs agree", small.len()))
}

fn main() {
    let small = small_oracle_graphs();
    let criteria: Vec<(&str, Check)> = vec![
        ("formula bounds reproduce the table", Box::new(formula_bounds)),
        ("stability and coloring bounds on the small instances", Box::new(np_bounds)),
        ("exact optima on five small instances", Box::new(exact_optima)),
        ("solve agrees with brute force", Box::new(|| oracle_equivalence(&small))),
        ("heuristic floor", Box::new(heuristic_floor)),
        ("monotone decision boundary", Box::new(|| monotone_boundary(&small))),
        ("export integrity", Box::new(export_integrity)),
        ("symmetry breaking is safe", Box::new(|| symmetry_safety(&small))),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = check();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(note) => println!("criterion {}: PASS  {title} ({secs:.1} s) — {note}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {title} ({secs:.1} s) — {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
