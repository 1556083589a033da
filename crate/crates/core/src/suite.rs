//! Seeded property suites. Every case is a pure function of its seed, so a
//! suite run is reproducible byte for byte; `bench` prints the rows as CSV and
//! the acceptance tests assert on them.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::Range;

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::budgeted::{
    make_proper, solve_rooted_budgeted, solve_unrooted_budgeted, split_unclassified, trim_rooted, trim_unrooted, Backend,
    RootedTree, TreeClass,
};
use crate::error::{Error, Result};
use crate::generate::{gen_gap_instance, gen_random, verify_flow_solution, RandomParams, Topology, ValueRange};
use crate::graph::{normalize_demands, shortest_paths, CostFunction, NodeWeightedInstance, Vertex, VertexId};
use crate::oracle::{check_disk_facts, check_laminar_dual, exact_budgeted, exact_pcsf, replay_disk, OracleBudget};
use crate::pcsf::{build_iteration, solve_pcsf_traced, DualCertificate, IterationTrace};
use crate::rational::{format_rational, harmonic, int, ratio, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    PcsfRatio,
    DualReplay,
    TrimRooted,
    TrimUnrooted,
    BudgetedRooted,
    BudgetedUnrooted,
    TreeSplit,
    GapSweep,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::PcsfRatio,
        Suite::DualReplay,
        Suite::TrimRooted,
        Suite::TrimUnrooted,
        Suite::BudgetedRooted,
        Suite::BudgetedUnrooted,
        Suite::TreeSplit,
        Suite::GapSweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::PcsfRatio => "pcsf-ratio",
            Suite::DualReplay => "dual-replay",
            Suite::TrimRooted => "trim-rooted",
            Suite::TrimUnrooted => "trim-unrooted",
            Suite::BudgetedRooted => "budgeted-rooted",
            Suite::BudgetedUnrooted => "budgeted-unrooted",
            Suite::TreeSplit => "tree-split",
            Suite::GapSweep => "gap-sweep",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }

    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Suite::PcsfRatio => &["n", "h", "iterations", "objective", "optimum", "bound", "certificate", "laminar"],
            Suite::DualReplay => &["n", "iterations", "disks", "problems"],
            Suite::TrimRooted => &["n", "epsilon", "budget", "gamma", "cost", "prize", "case"],
            Suite::TrimUnrooted => &["n", "budget", "gamma", "cost", "prize", "case"],
            Suite::BudgetedRooted => &["n", "epsilon", "budget", "cost", "prize", "optimum"],
            Suite::BudgetedUnrooted => &["n", "budget", "cost", "prize", "optimum", "class"],
            Suite::TreeSplit => &["n", "budget", "prize", "flat_prize", "saddled_prize"],
            Suite::GapSweep => &["k", "fractional", "integral", "gap", "flow"],
        }
    }
}

/// One case: its seed, the suite-specific columns, and whether every
/// property held. `detail` explains a failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteRow {
    pub seed: u64,
    pub fields: Vec<String>,
    pub ok: bool,
    pub detail: String,
}

impl SuiteRow {
    fn new(seed: u64, fields: Vec<String>, problems: Vec<String>) -> Self {
        Self { seed, fields, ok: problems.is_empty(), detail: problems.join("; ") }
    }
}

fn rng_for(suite: Suite, seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ ((suite as u64 + 1) << 56))
}

fn fmt(r: &Rational) -> String {
    format_rational(r)
}

pub fn run_case(suite: Suite, seed: u64, oracle: &OracleBudget) -> Result<SuiteRow> {
    match suite {
        Suite::PcsfRatio => pcsf_ratio_case(seed, oracle),
        Suite::DualReplay => dual_replay_case(seed),
        Suite::TrimRooted => trim_rooted_case(seed),
        Suite::TrimUnrooted => trim_unrooted_case(seed),
        Suite::BudgetedRooted => budgeted_rooted_case(seed, oracle),
        Suite::BudgetedUnrooted => budgeted_unrooted_case(seed, oracle),
        Suite::TreeSplit => tree_split_case(seed),
        Suite::GapSweep => gap_case(seed),
    }
}

/// Runs the seeds in parallel; rows come back in seed order.
pub fn run_suite(suite: Suite, seeds: Range<u64>, oracle: &OracleBudget) -> Vec<Result<SuiteRow>> {
    seeds.collect::<Vec<_>>().into_par_iter().map(|s| run_case(suite, s, oracle)).collect()
}

pub fn to_csv(suite: Suite, rows: &[SuiteRow]) -> String {
    let mut out = csv::Writer::from_writer(Vec::new());
    let header = std::iter::once("seed").chain(suite.columns().iter().copied()).chain(["ok", "detail"]);
    out.write_record(header).expect("in-memory write");
    for row in rows {
        let record = std::iter::once(row.seed.to_string())
            .chain(row.fields.iter().cloned())
            .chain([row.ok.to_string(), row.detail.clone()]);
        out.write_record(record).expect("in-memory write");
    }
    String::from_utf8(out.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

/// The normalized random forest instance of the ratio suite: 3 to 12
/// vertices before normalization and 1 to 3 demands.
pub fn pcsf_instance(seed: u64) -> Result<NodeWeightedInstance> {
    let mut rng = rng_for(Suite::PcsfRatio, seed);
    pcsf_instance_with(&mut rng, seed, 3..=12)
}

/// A tiny forest instance (2 to 6 vertices before normalization).
pub fn micro_instance(seed: u64) -> Result<NodeWeightedInstance> {
    let mut rng = rng_for(Suite::DualReplay, seed);
    pcsf_instance_with(&mut rng, seed, 2..=6)
}

fn pcsf_instance_with(rng: &mut ChaCha8Rng, seed: u64, sizes: std::ops::RangeInclusive<usize>) -> Result<NodeWeightedInstance> {
    let n = rng.gen_range(sizes);
    let topology = if rng.gen_bool(0.5) {
        Topology::ErdosRenyi { p_num: rng.gen_range(2..=5), p_den: 10 }
    } else {
        Topology::TreePlusChords { chords: rng.gen_range(0..=n / 2) }
    };
    let denominator = *[1, 1, 2, 3].choose(rng).expect("nonempty");
    let params = RandomParams {
        seed,
        n,
        topology,
        cost: ValueRange::new(0, 6 * denominator, denominator),
        prize: ValueRange::zero(),
        penalty: ValueRange::new(1, 15, 1),
        demands: rng.gen_range(1..=3),
        root: false,
        budget: None,
        connected: rng.gen_ratio(4, 5),
    };
    Ok(normalize_demands(&gen_random(&params)?))
}

/// Replays every iteration of a solver run: the disks must be dual feasible
/// at the event radius and infeasible a thousandth beyond it.
pub fn laminar_audit(instance: &NodeWeightedInstance, trace: &[IterationTrace]) -> Result<Vec<String>> {
    let mut problems = Vec::new();
    let delta = ratio(1, 1000);
    for (i, it) in trace.iter().enumerate() {
        let sys = build_iteration(instance, &it.bought, &it.active)?;
        let at: Vec<(VertexId, Rational)> = sys.cores.iter().map(|c| (c.center, it.event.radius.clone())).collect();
        let past: Vec<(VertexId, Rational)> = at.iter().map(|(c, r)| (*c, r + &delta)).collect();
        let report = check_laminar_dual(instance, &sys.cost, &it.active, &at)?;
        if !report.feasible {
            problems.push(format!("iteration {i} infeasible at its radius: {}", report.violations.join(", ")));
        }
        if check_laminar_dual(instance, &sys.cost, &it.active, &past)?.feasible {
            problems.push(format!("iteration {i} still feasible past its radius"));
        }
    }
    Ok(problems)
}

/// Solver run on a ratio-suite instance together with everything the checks need.
pub struct PcsfRun {
    pub instance: NodeWeightedInstance,
    pub objective: Rational,
    pub certificate: DualCertificate,
    pub trace: Vec<IterationTrace>,
}

pub fn pcsf_run(seed: u64) -> Result<PcsfRun> {
    let instance = pcsf_instance(seed)?;
    let (solution, certificate, trace) = solve_pcsf_traced(&instance)?;
    Ok(PcsfRun { instance, objective: solution.objective, certificate, trace })
}

fn pcsf_ratio_case(seed: u64, oracle: &OracleBudget) -> Result<SuiteRow> {
    let run = pcsf_run(seed)?;
    let h = run.instance.demands().len();
    let (optimum, _) = exact_pcsf(&run.instance, oracle)?;
    let bound = int(2) * harmonic(2 * h) * &optimum;
    let mut problems = Vec::new();
    if run.objective > bound {
        problems.push(format!("objective {} above 2 H(2h) OPT = {}", run.objective, bound));
    }
    let certificate = run.certificate.check();
    if let Err(e) = &certificate {
        problems.push(format!("certificate: {e}"));
    }
    if run.certificate.objective != run.objective {
        problems.push("certificate objective differs from the solution".into());
    }
    let laminar = laminar_audit(&run.instance, &run.trace)?;
    let laminar_ok = laminar.is_empty();
    problems.extend(laminar);
    let original = run.instance.len() - 2 * h;
    Ok(SuiteRow::new(
        seed,
        vec![
            original.to_string(),
            h.to_string(),
            run.trace.len().to_string(),
            fmt(&run.objective),
            fmt(&optimum),
            fmt(&bound),
            certificate.is_ok().to_string(),
            laminar_ok.to_string(),
        ],
        problems,
    ))
}

fn dual_replay_case(seed: u64) -> Result<SuiteRow> {
    let instance = micro_instance(seed)?;
    let (_, _, trace) = solve_pcsf_traced(&instance)?;
    let mut problems = Vec::new();
    let mut disks = 0;
    for (i, it) in trace.iter().enumerate() {
        let sys = build_iteration(&instance, &it.bought, &it.active)?;
        let costs: Vec<Rational> = (0..instance.len()).map(|v| sys.cost.value(v)).collect();
        for core in &sys.cores {
            disks += 1;
            let replay = replay_disk(&instance, &costs, core.center, &it.event.radius);
            problems.extend(check_disk_facts(&instance, &costs, &replay).into_iter().map(|p| format!("iteration {i}: {p}")));
        }
    }
    let h = instance.demands().len();
    let count = problems.len();
    Ok(SuiteRow::new(
        seed,
        vec![(instance.len() - 2 * h).to_string(), trace.len().to_string(), disks.to_string(), count.to_string()],
        problems,
    ))
}

/// Random tree on `n` vertices built in order: the parent of the `v`-th is
/// uniform among the first `window` (or all earlier ones). Returns the vertex
/// id of each position, a random permutation, and the child-parent links.
fn random_links(rng: &mut ChaCha8Rng, n: usize, window: Option<usize>) -> (Vec<VertexId>, Vec<(VertexId, VertexId)>) {
    let mut label: Vec<VertexId> = (0..n).collect();
    label.shuffle(rng);
    let links = (1..n)
        .map(|v| {
            let hi = window.map_or(v, |w| v.min(w));
            (label[v], label[rng.gen_range(0..hi)])
        })
        .collect();
    (label, links)
}

/// Moves weights listed by construction position onto vertex ids.
fn placed(values: Vec<Rational>, label: &[VertexId]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); values.len()];
    for (i, x) in values.into_iter().enumerate() {
        out[label[i]] = x;
    }
    out
}

/// Costs and prizes by construction position for a trimming case. A third of
/// the seeds use independent uniform weights on arbitrary trees. The rest are
/// shallow trees where the vertices share one ratio (nearly) except near the
/// root, so that pruning at the tree's own ratio gets stuck and the selection
/// branches run: either the root has no prize, or the root has a little and
/// its first child none.
fn trim_weights(rng: &mut ChaCha8Rng, n: usize) -> (Vec<Rational>, Vec<Rational>, Option<usize>) {
    let denominator = rng.gen_range(1..=3);
    let mode = rng.gen_range(0..3);
    if mode == 0 {
        let costs = (0..n).map(|_| random_value(rng, 8, denominator)).collect();
        let prizes = (0..n).map(|_| random_value(rng, 10, 1)).collect();
        return (costs, prizes, None);
    }
    let mut costs: Vec<Rational> = (0..n).map(|_| random_value(rng, 6, denominator)).collect();
    let shared = rng.gen_range(2..=6);
    let jitter = rng.gen_bool(0.5);
    let mut prizes: Vec<Rational> = costs
        .iter()
        .map(|c| c * ratio(if jitter { shared + rng.gen_range(0..=1) } else { shared }, 2))
        .collect();
    prizes[0] = Rational::zero();
    if mode == 2 && n > 1 {
        prizes[0] = random_value(rng, 6, 1);
        costs[1] = ratio(rng.gen_range(4..=12) * denominator, denominator);
        prizes[1] = Rational::zero();
        return (costs, prizes, Some(2));
    }
    (costs, prizes, Some(rng.gen_range(1..=4)))
}

fn random_value(rng: &mut ChaCha8Rng, hi: i64, denominator: i64) -> Rational {
    ratio(rng.gen_range(0..=hi * denominator), denominator)
}

fn tree_instance(costs: &[Rational], prizes: &[Rational], edges: Vec<(VertexId, VertexId)>) -> Result<NodeWeightedInstance> {
    let vertices = costs
        .iter()
        .zip(prizes)
        .enumerate()
        .map(|(i, (c, p))| Vertex { name: format!("v{i}"), cost: c.clone(), prize: p.clone() })
        .collect();
    NodeWeightedInstance::new(vertices, edges, vec![], None, None)
}

const EPSILONS: [(i64, i64); 5] = [(1, 1), (1, 2), (1, 3), (1, 4), (2, 3)];

/// Checks that `tree` is a tree of `graph` with the weights of `graph`, and
/// returns its cost and prize recomputed from the graph.
fn recount(graph: &NodeWeightedInstance, tree: &RootedTree) -> (Rational, Rational, Vec<String>) {
    let mut problems = Vec::new();
    let vertices: Vec<VertexId> = tree.vertices().into_iter().collect();
    if !graph.is_connected_set(&vertices) {
        problems.push("output is not connected".into());
    }
    (graph.set_cost(&vertices), graph.set_prize(&vertices), problems)
}

fn trim_rooted_case(seed: u64) -> Result<SuiteRow> {
    let mut rng = rng_for(Suite::TrimRooted, seed);
    let n = rng.gen_range(2..=40);
    let (costs, prizes, window) = trim_weights(&mut rng, n);
    let (label, mut edges) = random_links(&mut rng, n, window);
    let (costs, prizes, root) = (placed(costs, &label), placed(prizes, &label), label[0]);
    let tree_links: BTreeMap<VertexId, VertexId> = edges.iter().copied().collect();
    for _ in 0..rng.gen_range(0..=n / 3) {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v && !edges.contains(&(u, v)) && !edges.contains(&(v, u)) {
            edges.push((u, v));
        }
    }
    let graph = tree_instance(&costs, &prizes, edges)?;
    let (en, ed) = EPSILONS[rng.gen_range(0..EPSILONS.len())];
    let epsilon = ratio(en, ed);
    let dist = shortest_paths(&graph, &CostFunction::base(&graph), &[root])?;
    let far = (0..n).filter_map(|v| dist.get(v).finite().cloned()).max().unwrap_or_else(Rational::zero);
    let budget = &far * ratio(4 + rng.gen_range(0..=4), 4);
    if !budget.is_positive() {
        return Err(Error::Precondition("generated tree has no cost".into()));
    }
    let proper = make_proper(&graph, root, &budget)?;
    if proper.instance.len() != n {
        return Err(Error::Precondition("generated graph is not proper".into()));
    }
    let local = |v: VertexId| proper.original_ids.binary_search(&v).expect("all vertices kept");
    let parent = tree_links.iter().map(|(&v, &p)| (local(v), local(p))).collect();
    let tree = RootedTree::with_weights(&proper.instance, proper.root, parent)?;
    let base_ratio = tree.ratio().unwrap_or_else(Rational::zero);
    let gamma = if window.is_some() { base_ratio } else { &base_ratio * ratio(rng.gen_range(1..=4), 4) };
    let mut fields = vec![n.to_string(), fmt(&epsilon), fmt(&budget), fmt(&gamma)];
    let floor = &epsilon * &budget / int(2);
    if tree.cost < floor {
        return Err(Error::Precondition("generated tree is below the cost floor".into()));
    }
    let mut problems = Vec::new();
    match trim_rooted(&tree, &proper, &gamma, &epsilon) {
        Ok(out) => {
            let (cost, prize, mut issues) = recount(&proper.instance, &out.tree);
            if !out.tree.vertices().contains(&proper.root) {
                issues.push("root missing".into());
            }
            if cost < floor || cost > (int(1) + &epsilon) * &budget {
                issues.push(format!("cost {cost} outside [{floor}, (1+ε)B]"));
            }
            if prize < &epsilon * &gamma / int(4) * &cost {
                issues.push(format!("ratio {prize}/{cost} below εγ/4"));
            }
            fields.extend([fmt(&cost), fmt(&prize), format!("{:?}", out.case)]);
            problems = issues;
        }
        Err(e) => {
            fields.extend(["".into(), "".into(), "error".into()]);
            problems.push(e.to_string());
        }
    }
    Ok(SuiteRow::new(seed, fields, problems))
}

fn trim_unrooted_case(seed: u64) -> Result<SuiteRow> {
    let mut rng = rng_for(Suite::TrimUnrooted, seed);
    let n = rng.gen_range(1..=40);
    let (costs, mut prizes, window) = trim_weights(&mut rng, n);
    prizes[rng.gen_range(0..n)] += int(1);
    let (label, edges) = random_links(&mut rng, n, window);
    let (costs, prizes, root) = (placed(costs, &label), placed(prizes, &label), label[0]);
    let graph = tree_instance(&costs, &prizes, edges.clone())?;
    let tree = RootedTree::with_weights(&graph, root, edges.into_iter().collect())?;
    let heaviest = costs.iter().max().cloned().unwrap_or_else(Rational::zero);
    let (lo, hi) = (int(2) * &heaviest, int(2) * &tree.cost);
    let budget = &lo + (&hi - &lo) * ratio(rng.gen_range(0..=8), 8) / int(if window.is_some() { 4 } else { 1 });
    let budget = budget.max(lo);
    let gamma = tree.ratio().unwrap_or_else(Rational::zero);
    let mut fields = vec![n.to_string(), fmt(&budget), fmt(&gamma)];
    let mut problems = Vec::new();
    match trim_unrooted(&tree, &budget) {
        Ok(out) => {
            let (cost, prize, mut issues) = recount(&graph, &out.tree);
            if cost < &budget / int(4) || cost > budget {
                issues.push(format!("cost {cost} outside [B/4, B]"));
            }
            if prize < &gamma / int(4) * &cost {
                issues.push(format!("ratio {prize}/{cost} below γ/4"));
            }
            fields.extend([fmt(&cost), fmt(&prize), format!("{:?}", out.case)]);
            problems = issues;
        }
        Err(e) => {
            fields.extend(["".into(), "".into(), "error".into()]);
            problems.push(e.to_string());
        }
    }
    Ok(SuiteRow::new(seed, fields, problems))
}

fn budgeted_graph(rng: &mut ChaCha8Rng, seed: u64, sizes: std::ops::RangeInclusive<usize>) -> Result<NodeWeightedInstance> {
    let n = rng.gen_range(sizes);
    let topology = if rng.gen_bool(0.5) {
        Topology::ErdosRenyi { p_num: rng.gen_range(2..=5), p_den: 10 }
    } else {
        Topology::TreePlusChords { chords: rng.gen_range(0..=n / 2) }
    };
    let params = RandomParams {
        seed,
        n,
        topology,
        cost: ValueRange::new(0, 8, 1),
        prize: ValueRange::new(0, 10, 1),
        penalty: ValueRange::zero(),
        demands: 0,
        root: false,
        budget: None,
        connected: rng.gen_ratio(4, 5),
    };
    gen_random(&params)
}

fn budgeted_rooted_case(seed: u64, oracle: &OracleBudget) -> Result<SuiteRow> {
    let mut rng = rng_for(Suite::BudgetedRooted, seed);
    let graph = budgeted_graph(&mut rng, seed, 2..=12)?;
    let root = rng.gen_range(0..graph.len());
    let budget = graph.cost(root) + int(rng.gen_range(0..=16));
    let epsilon = [int(1), ratio(1, 2), ratio(1, 4)][(seed % 3) as usize].clone();
    let (optimum, _) = exact_budgeted(&graph, Some(root), &budget, oracle)?;
    let sol = solve_rooted_budgeted(&graph, root, &budget, &epsilon, Backend::Exact, oracle)?;
    let (cost, prize, mut problems) = recount(&graph, &sol.tree);
    if !sol.tree.vertices().contains(&root) {
        problems.push("root missing".into());
    }
    if cost > (int(1) + &epsilon) * &budget {
        problems.push(format!("cost {cost} above (1+ε)B"));
    }
    let need = &epsilon * &epsilon / int(16) * &optimum;
    if prize < need {
        problems.push(format!("prize {prize} below ε²/16 OPT = {need}"));
    }
    Ok(SuiteRow::new(
        seed,
        vec![graph.len().to_string(), fmt(&epsilon), fmt(&budget), fmt(&cost), fmt(&prize), fmt(&optimum)],
        problems,
    ))
}

fn budgeted_unrooted_case(seed: u64, oracle: &OracleBudget) -> Result<SuiteRow> {
    let mut rng = rng_for(Suite::BudgetedUnrooted, seed);
    let graph = budgeted_graph(&mut rng, seed, 1..=12)?;
    let cheapest = (0..graph.len()).map(|v| graph.cost(v)).min().cloned().expect("nonempty");
    let budget = cheapest + int(rng.gen_range(0..=16));
    let (optimum, _) = exact_budgeted(&graph, None, &budget, oracle)?;
    let sol = solve_unrooted_budgeted(&graph, &budget, Backend::Exact, oracle)?;
    let (cost, prize, mut problems) = recount(&graph, &sol.tree);
    if cost > budget {
        problems.push(format!("cost {cost} above B"));
    }
    if prize < &optimum / int(64) {
        problems.push(format!("prize {prize} below OPT/64"));
    }
    let class = match sol.class {
        Some(TreeClass::Flat) => "flat".to_string(),
        Some(TreeClass::Saddled { apex }) => format!("saddled:{}", graph.name(apex)),
        None => String::new(),
    };
    Ok(SuiteRow::new(seed, vec![graph.len().to_string(), fmt(&budget), fmt(&cost), fmt(&prize), fmt(&optimum), class], problems))
}

/// A tree of cost at most `B = 24` that is neither flat nor saddled, with the
/// two most expensive vertices placed at random.
fn unclassified_tree(rng: &mut ChaCha8Rng) -> Result<(RootedTree, Rational)> {
    let b: i64 = 24;
    let heavy = rng.gen_range(13..=22);
    let second = rng.gen_range((b - heavy) / 2 + 1..=b - heavy);
    let mut costs = vec![int(heavy), int(second)];
    let mut left = b - heavy - second;
    for _ in 0..rng.gen_range(0..=8) {
        let c = rng.gen_range(0..=left);
        left -= c;
        costs.push(int(c));
    }
    let n = costs.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let costs: Vec<Rational> = order.iter().map(|&i| costs[i].clone()).collect();
    let prizes: Vec<Rational> = (0..n).map(|_| random_value(rng, 10, 1)).collect();
    let (label, edges) = random_links(rng, n, None);
    let root = label[0];
    let graph = tree_instance(&costs, &prizes, edges.clone())?;
    Ok((RootedTree::with_weights(&graph, root, edges.into_iter().collect())?, int(b)))
}

fn tree_split_case(seed: u64) -> Result<SuiteRow> {
    let mut rng = rng_for(Suite::TreeSplit, seed);
    let (tree, budget) = unclassified_tree(&mut rng)?;
    let mut problems = Vec::new();
    if TreeClass::of_tree(&tree, &budget).is_some() {
        problems.push("generated tree is classified".into());
    }
    let Some((flat, saddled)) = split_unclassified(&tree) else {
        return Ok(SuiteRow::new(seed, vec![tree.len().to_string(), fmt(&budget), fmt(&tree.prize), "".into(), "".into()], vec!["no split".into()]));
    };
    if TreeClass::of_tree(&flat, &budget) != Some(TreeClass::Flat) {
        problems.push("the part of the second heaviest vertex is not flat".into());
    }
    if !matches!(TreeClass::of_tree(&saddled, &budget), Some(TreeClass::Saddled { .. })) {
        problems.push("the part of the heaviest vertex is not saddled".into());
    }
    let union: BTreeSet<VertexId> = flat.vertices().union(&saddled.vertices()).copied().collect();
    if union != tree.vertices() || flat.len() + saddled.len() != tree.len() {
        problems.push("parts do not partition the tree".into());
    }
    if int(2) * flat.prize.clone().max(saddled.prize.clone()) < tree.prize {
        problems.push("neither part keeps half the prize".into());
    }
    Ok(SuiteRow::new(
        seed,
        vec![tree.len().to_string(), fmt(&budget), fmt(&tree.prize), fmt(&flat.prize), fmt(&saddled.prize)],
        problems,
    ))
}

/// Seed `k` is the instance with `B = k`; seeds below 1 are rejected.
fn gap_case(seed: u64) -> Result<SuiteRow> {
    let gap = gen_gap_instance(seed, seed)?;
    let oracle = OracleBudget::default().with_max_vertices(gap.node_weighted.len());
    let (integral, _) = exact_budgeted(&gap.node_weighted, Some(0), &int(seed as i64), &oracle)?;
    let mut problems = Vec::new();
    let flow_ok = verify_flow_solution(&gap);
    if !flow_ok {
        problems.push("flow solution rejected".into());
    }
    let k = int(seed as i64);
    let expected = &k * &k / (int(2) * &k - int(1));
    if gap.fractional_value != expected {
        problems.push(format!("fractional value {} differs from k²/(2k-1)", gap.fractional_value));
    }
    if !integral.is_positive() {
        problems.push("integral optimum is zero".into());
    }
    let ratio = if integral.is_zero() { Rational::zero() } else { &gap.fractional_value / &integral };
    Ok(SuiteRow::new(
        seed,
        vec![seed.to_string(), fmt(&gap.fractional_value), fmt(&integral), fmt(&ratio), flow_ok.to_string()],
        problems,
    ))
}
