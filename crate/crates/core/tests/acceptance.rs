//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::process::ExitCode;
use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use nwsteiner::generate::{gen_gap_instance, gen_random, gen_satnw, verify_flow_solution, Cnf, RandomParams, Topology, ValueRange};
use nwsteiner::graph::NodeWeightedInstance;
use nwsteiner::io::instance_to_json;
use nwsteiner::oracle::{exact_budgeted, exact_net_worth_edge_weighted, exact_pcsf, exact_quota_kmst, CoverProblem, OracleBudget};
use nwsteiner::rational::{harmonic, int, ratio, Rational};
use nwsteiner::reductions::{ksteiner_from_quota, ksteiner_to_kmst, quota_lift_bound, quota_to_ksteiner, rooted_to_unrooted_kmst};
use nwsteiner::suite::{laminar_audit, pcsf_run, run_suite, to_csv, Suite, SuiteRow};

const PCSF_SEEDS: u64 = 200;
const REPLAY_SEEDS: u64 = 100;
const TRIM_SEEDS: u64 = 500;
const BUDGETED_SEEDS: u64 = 210;
const SPLIT_SEEDS: u64 = 200;
const REDUCTION_SEEDS: u64 = 150;
/// Criterion 1 runtime target.
const PCSF_SECONDS: f64 = 120.0;
/// Radius overshoot for the infeasibility half of criterion 2.
const OVERSHOOT: (i64, i64) = (1, 1000);
const GAP_MIN: i64 = 5;
const SAT_EPSILON: (i64, i64) = (1, 2);
const SAT_MAX_CLAUSES: usize = 5;

struct Outcome {
    pass: bool,
    summary: String,
}

fn outcome(pass: bool, summary: impl Into<String>) -> Outcome {
    Outcome { pass, summary: summary.into() }
}

fn rows(suite: Suite, seeds: std::ops::Range<u64>) -> Result<Vec<SuiteRow>, String> {
    run_suite(suite, seeds, &OracleBudget::default())
        .into_iter()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| format!("{} errored: {e}", suite.name()))
}

fn failures(rows: &[SuiteRow]) -> Vec<String> {
    rows.iter().filter(|r| !r.ok).map(|r| format!("seed {}: {}", r.seed, r.detail)).collect()
}

fn suite_outcome(suite: Suite, seeds: std::ops::Range<u64>, what: &str) -> Outcome {
    match rows(suite, seeds) {
        Ok(rows) => {
            let bad = failures(&rows);
            let first = bad.first().cloned().unwrap_or_default();
            outcome(bad.is_empty(), format!("{} {what}, {} failures {first}", rows.len(), bad.len()))
        }
        Err(e) => outcome(false, e),
    }
}

fn pcsf_ratio() -> Outcome {
    let start = Instant::now();
    let oracle = OracleBudget::default();
    let results: Vec<Result<(Rational, Rational, usize), String>> = (0..PCSF_SEEDS)
        .into_par_iter()
        .map(|seed| {
            let run = pcsf_run(seed).map_err(|e| format!("seed {seed}: {e}"))?;
            let (opt, _) = exact_pcsf(&run.instance, &oracle).map_err(|e| format!("seed {seed}: {e}"))?;
            Ok((run.objective, opt, run.instance.demands().len()))
        })
        .collect();
    let mut violations = Vec::new();
    let mut worst = Rational::zero();
    for (seed, r) in results.into_iter().enumerate() {
        match r {
            Ok((objective, opt, h)) => {
                let bound = int(2) * harmonic(2 * h);
                if objective > &bound * &opt {
                    violations.push(format!("seed {seed}: {objective} > {bound} * {opt}"));
                }
                if !opt.is_zero() {
                    worst = worst.max(objective / opt);
                }
            }
            Err(e) => violations.push(e),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        violations.is_empty() && secs < PCSF_SECONDS,
        format!(
            "{PCSF_SEEDS} instances, {} violations, worst ratio {:.3}, {secs:.1}s {}",
            violations.len(),
            num_traits::ToPrimitive::to_f64(&worst).unwrap_or(f64::NAN),
            violations.first().cloned().unwrap_or_default()
        ),
    )
}

fn per_iteration_certificate() -> Outcome {
    let results: Vec<Result<(usize, Vec<String>), String>> = (0..PCSF_SEEDS)
        .into_par_iter()
        .map(|seed| {
            let run = pcsf_run(seed).map_err(|e| format!("seed {seed}: {e}"))?;
            let mut problems = Vec::new();
            let rounds = &run.certificate.rounds;
            for (i, round) in rounds.iter().enumerate() {
                if round.payment > int(2) * int(round.removed as i64) * &round.radius {
                    problems.push(format!("seed {seed} round {i}: P > 2hR"));
                }
                if let Some(next) = rounds.get(i + 1) {
                    if next.core_count >= round.core_count {
                        problems.push(format!("seed {seed} round {i}: core count does not decrease"));
                    }
                }
            }
            if let Err(e) = run.certificate.check() {
                problems.push(format!("seed {seed}: {e}"));
            }
            let audit = laminar_audit(&run.instance, &run.trace).map_err(|e| format!("seed {seed}: {e}"))?;
            problems.extend(audit.into_iter().map(|p| format!("seed {seed}: {p}")));
            Ok((run.trace.len(), problems))
        })
        .collect();
    let mut iterations = 0;
    let mut problems = Vec::new();
    for r in results {
        match r {
            Ok((n, p)) => {
                iterations += n;
                problems.extend(p);
            }
            Err(e) => problems.push(e),
        }
    }
    outcome(
        problems.is_empty(),
        format!(
            "{iterations} iterations replayed at R and R+{}/{}, {} problems {}",
            OVERSHOOT.0,
            OVERSHOOT.1,
            problems.len(),
            problems.first().cloned().unwrap_or_default()
        ),
    )
}

fn gap_family() -> Outcome {
    let mut notes = Vec::new();
    let gap = match gen_gap_instance(10, 10) {
        Ok(g) => g,
        Err(e) => return outcome(false, e.to_string()),
    };
    let flow = verify_flow_solution(&gap);
    let value_ok = gap.fractional_value == ratio(100, 19);
    let oracle = OracleBudget::default().with_max_vertices(gap.node_weighted.len());
    let integral = exact_budgeted(&gap.node_weighted, Some(0), &int(10), &oracle).map(|(v, _)| v);
    let integral_ok = matches!(&integral, Ok(v) if *v == int(1));
    let gap_ok = matches!(&integral, Ok(v) if !v.is_zero() && &gap.fractional_value / v >= int(GAP_MIN));
    if !(flow && value_ok && integral_ok && gap_ok) {
        notes.push(format!("B=k=10: flow {flow}, value {}, integral {integral:?}", gap.fractional_value));
    }
    let sweep = match rows(Suite::GapSweep, 2..11) {
        Ok(r) => r,
        Err(e) => return outcome(false, e),
    };
    let mut previous: Option<Rational> = None;
    for row in &sweep {
        let k = int(row.seed as i64);
        let expected = &k * &k / (int(2) * &k - int(1));
        let measured = nwsteiner::rational::parse_rational(&row.fields[3]).unwrap_or_else(|_| Rational::zero());
        if !row.ok || measured != expected {
            notes.push(format!("k={}: gap {} (expected {expected})", row.seed, row.fields[3]));
        }
        if previous.as_ref().is_some_and(|p| measured <= *p) {
            notes.push(format!("k={}: gap not increasing", row.seed));
        }
        previous = Some(measured);
    }
    outcome(
        notes.is_empty(),
        format!("B=k=10 value 100/19, integral 1, flow verified; sweep k=2..10 gap k²/(2k-1) increasing {}", notes.join("; ")),
    )
}

/// Clauses over `n` variables with 1 to 3 literals and no complementary pair.
fn clauses(n: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for mask in 1..(1u32 << n) {
        let vars: Vec<i64> = (0..n).filter(|v| mask & (1 << v) != 0).map(|v| v + 1).collect();
        if vars.len() > 3 {
            continue;
        }
        for signs in 0..(1u32 << vars.len()) {
            out.push(vars.iter().enumerate().map(|(i, &v)| if signs & (1 << i) != 0 { -v } else { v }).collect());
        }
    }
    out
}

/// Every formula with 1 to 3 variables whose augmented form has at most five
/// clauses. Original clauses are distinct and non-tautological; augmentation
/// adds one tautology per variable.
fn small_formulas() -> Vec<Cnf> {
    let mut out = Vec::new();
    for n in 1..=3i64 {
        let pool = clauses(n);
        let room = SAT_MAX_CLAUSES - n as usize;
        let mut chosen: Vec<Vec<usize>> = vec![vec![]];
        let mut frontier: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..room {
            let mut next = Vec::new();
            for set in &frontier {
                let start = set.last().map_or(0, |&l| l + 1);
                for c in start..pool.len() {
                    let mut s = set.clone();
                    s.push(c);
                    next.push(s);
                }
            }
            chosen.extend(next.iter().cloned());
            frontier = next;
        }
        for set in chosen {
            let formula = Cnf::new(n as usize, set.iter().map(|&c| pool[c].clone()).collect()).expect("valid literals");
            out.push(formula);
        }
    }
    out
}

fn hardness_gadget() -> Outcome {
    let formulas = small_formulas();
    let eps = ratio(SAT_EPSILON.0, SAT_EPSILON.1);
    let oracle = OracleBudget::default();
    let results: Vec<Result<(bool, bool), String>> = formulas
        .par_iter()
        .map(|f| {
            let k = int(f.num_vars as i64 + 1);
            let inst = gen_satnw(f, &eps, &k).map_err(|e| e.to_string())?;
            if inst.formula.clauses.len() > SAT_MAX_CLAUSES {
                return Err(format!("{f:?} augments past {SAT_MAX_CLAUSES} clauses"));
            }
            let nw = exact_net_worth_edge_weighted(&inst.edge_weighted, inst.root(), &oracle).map_err(|e| e.to_string())?;
            let sat = f.is_satisfiable();
            let ok = if sat { nw == &eps + int(1) } else { nw <= eps };
            Ok((sat, ok))
        })
        .collect();
    let mut bad = Vec::new();
    let (mut sat, mut unsat) = (0, 0);
    for (f, r) in formulas.iter().zip(results) {
        match r {
            Ok((s, ok)) => {
                if s {
                    sat += 1;
                } else {
                    unsat += 1;
                }
                if !ok {
                    bad.push(format!("{:?}", f.clauses));
                }
            }
            Err(e) => bad.push(e),
        }
    }
    outcome(
        bad.is_empty() && unsat > 0,
        format!("{} formulas ({sat} satisfiable, {unsat} unsatisfiable), {} mismatches {}", formulas.len(), bad.len(), bad.first().cloned().unwrap_or_default()),
    )
}

fn reduction_instance(seed: u64) -> (NodeWeightedInstance, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED_0010);
    let n = rng.gen_range(2..=8);
    let params = RandomParams {
        seed,
        n,
        topology: if rng.gen_bool(0.5) { Topology::TreePlusChords { chords: rng.gen_range(0..=3) } } else { Topology::ErdosRenyi { p_num: 2, p_den: 5 } },
        cost: ValueRange::new(0, 6, 1),
        prize: ValueRange::new(0, 6, 1),
        penalty: ValueRange::zero(),
        demands: 0,
        root: false,
        budget: None,
        connected: rng.gen_ratio(3, 4),
    };
    (gen_random(&params).expect("valid parameters"), rng)
}

#[derive(Default)]
struct ReductionTally {
    exact_checked: [usize; 3],
    mismatches: Vec<String>,
    quota_solved: usize,
    quota_equal: usize,
    quota_unreachable: usize,
    lift_failures: Vec<String>,
}

fn cost_of(x: &Option<(Rational, Vec<usize>)>) -> Option<Rational> {
    x.as_ref().map(|(c, _)| c.clone())
}

fn reductions_case(seed: u64) -> Result<ReductionTally, String> {
    let err = |e: nwsteiner::Error| format!("seed {seed}: {e}");
    let oracle = OracleBudget::default();
    let (inst, mut rng) = reduction_instance(seed);
    let n = inst.len();
    let mut t = ReductionTally::default();
    let mut terminals: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    if terminals.is_empty() {
        terminals.push(rng.gen_range(0..n));
    }
    let mut counts = vec![0u64; n];
    for &v in &terminals {
        counts[v] = 1;
    }
    let k = rng.gen_range(1..=terminals.len() as u64);

    // k-Steiner tree to unrooted k-MST
    let map = ksteiner_to_kmst(&inst, &terminals, k).map_err(err)?;
    let before = exact_quota_kmst(&inst, &CoverProblem::KSteiner { k, terminals: counts.clone(), root: None }, &oracle).map_err(err)?;
    let after = exact_quota_kmst(&map.transformed, &map.problem, &oracle).map_err(err)?;
    if cost_of(&before) != cost_of(&after) {
        t.mismatches.push(format!("seed {seed} k-Steiner→k-MST: {:?} vs {:?}", cost_of(&before), cost_of(&after)));
    }
    if let Some((c, w)) = &after {
        if inst.set_cost(&map.lift(w)) != *c {
            t.mismatches.push(format!("seed {seed} k-Steiner→k-MST lift changes the cost"));
        }
    }
    t.exact_checked[0] += 1;

    // rooted k-MST to unrooted k-MST
    let root = rng.gen_range(0..n);
    let km = rng.gen_range(1..=n as u64);
    let map = rooted_to_unrooted_kmst(&inst, root, km).map_err(err)?;
    let before = exact_quota_kmst(&inst, &CoverProblem::KMst { k: km, root: Some(root), multiplicity: None }, &oracle).map_err(err)?;
    let after = exact_quota_kmst(&map.transformed, &map.problem, &oracle).map_err(err)?;
    if cost_of(&before) != cost_of(&after) {
        t.mismatches.push(format!("seed {seed} rooted→unrooted k-MST: {:?} vs {:?}", cost_of(&before), cost_of(&after)));
    }
    t.exact_checked[1] += 1;

    // k-Steiner tree as a quota problem
    let map = ksteiner_from_quota(&inst, &terminals, k).map_err(err)?;
    let after = exact_quota_kmst(&map.transformed, &map.problem, &oracle).map_err(err)?;
    let before = exact_quota_kmst(&inst, &CoverProblem::KSteiner { k, terminals: counts, root: None }, &oracle).map_err(err)?;
    if cost_of(&before) != cost_of(&after) {
        t.mismatches.push(format!("seed {seed} k-Steiner→quota: {:?} vs {:?}", cost_of(&before), cost_of(&after)));
    }
    t.exact_checked[2] += 1;

    // quota to k-Steiner tree
    let total = inst.total_prize();
    if total.is_zero() {
        return Ok(t);
    }
    let quota = &total * ratio(rng.gen_range(1..=4), 4);
    let eps = [ratio(1, 2), ratio(1, 3), ratio(1, 4)][rng.gen_range(0..3)].clone();
    let map = quota_to_ksteiner(&inst, &quota, &eps).map_err(err)?;
    let before = exact_quota_kmst(&inst, &CoverProblem::Quota { quota: quota.clone(), root: None }, &oracle).map_err(err)?;
    let after = exact_quota_kmst(&map.transformed, &map.problem, &oracle).map_err(err)?;
    match (&before, &after) {
        (Some((q, _)), Some((s, w))) => {
            t.quota_solved += 1;
            if s == q {
                t.quota_equal += 1;
            }
            if s > q {
                t.lift_failures.push(format!("seed {seed}: k-Steiner optimum {s} above quota optimum {q}"));
            }
            let lifted = map.lift(w);
            let prize = inst.set_prize(&lifted);
            if prize <= quota_lift_bound(&quota, &eps) {
                t.lift_failures.push(format!("seed {seed}: lifted prize {prize} not above P(1-2ε)"));
            }
        }
        // a disconnected graph may hold the total prize in no single component
        (None, _) => t.quota_unreachable += 1,
        (Some(_), None) => t.lift_failures.push(format!("seed {seed}: k-Steiner side infeasible")),
    }
    Ok(t)
}

fn reductions() -> Outcome {
    let results: Vec<Result<ReductionTally, String>> = (0..REDUCTION_SEEDS).into_par_iter().map(reductions_case).collect();
    let mut total = ReductionTally::default();
    for r in results {
        match r {
            Ok(t) => {
                for i in 0..3 {
                    total.exact_checked[i] += t.exact_checked[i];
                }
                total.mismatches.extend(t.mismatches);
                total.quota_solved += t.quota_solved;
                total.quota_equal += t.quota_equal;
                total.quota_unreachable += t.quota_unreachable;
                total.lift_failures.extend(t.lift_failures);
            }
            Err(e) => total.mismatches.push(e),
        }
    }
    let pass = total.mismatches.is_empty() && total.lift_failures.is_empty() && total.quota_solved > 0;
    outcome(
        pass,
        format!(
            "exact optima agree on {}/{}/{} cases (k-Steiner→k-MST, rooted→unrooted, k-Steiner→quota); quota→k-Steiner: {} solved ({} quotas unreachable), \
             optima equal in {}, k-Steiner optimum never above the quota optimum, lifted prize > P(1-2ε) in all; {} problems {}",
            total.exact_checked[0],
            total.exact_checked[1],
            total.exact_checked[2],
            total.quota_solved,
            total.quota_unreachable,
            total.quota_equal,
            total.mismatches.len() + total.lift_failures.len(),
            total.mismatches.iter().chain(&total.lift_failures).next().cloned().unwrap_or_default()
        ),
    )
}

fn determinism() -> Outcome {
    let mut differing = Vec::new();
    let oracle = OracleBudget::default();
    for suite in Suite::ALL {
        let seeds = if suite == Suite::GapSweep { 2..8 } else { 0..40 };
        let once = run_suite(suite, seeds.clone(), &oracle).into_iter().collect::<Result<Vec<_>, _>>();
        let twice = run_suite(suite, seeds, &oracle).into_iter().collect::<Result<Vec<_>, _>>();
        match (once, twice) {
            (Ok(a), Ok(b)) if to_csv(suite, &a) == to_csv(suite, &b) => {}
            _ => differing.push(suite.name().to_string()),
        }
    }
    for seed in 0..40 {
        let (Ok(a), Ok(b)) = (pcsf_run(seed), pcsf_run(seed)) else {
            differing.push(format!("pcsf run {seed}"));
            continue;
        };
        if a.certificate.to_json() != b.certificate.to_json() || instance_to_json(&a.instance) != instance_to_json(&b.instance) {
            differing.push(format!("certificate {seed}"));
        }
    }
    let f = Cnf::new(2, vec![vec![1, -2], vec![2]]).expect("valid");
    let (a, b) = (gen_satnw(&f, &ratio(1, 2), &int(3)), gen_satnw(&f, &ratio(1, 2), &int(3)));
    if !matches!((&a, &b), (Ok(x), Ok(y)) if instance_to_json(&x.node_weighted) == instance_to_json(&y.node_weighted)) {
        differing.push("satnw".into());
    }
    outcome(differing.is_empty(), format!("{} suites, 40 certificates and generators rerun; differing: {:?}", Suite::ALL.len(), differing))
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("PCSF ratio <= 2 H(2h) against the exact optimum", Box::new(pcsf_ratio)),
        ("per-iteration certificate and laminar dual replay", Box::new(per_iteration_certificate)),
        ("dual replay identities", Box::new(|| suite_outcome(Suite::DualReplay, 0..REPLAY_SEEDS, "micro-instances"))),
        ("rooted trimming bounds", Box::new(|| suite_outcome(Suite::TrimRooted, 0..TRIM_SEEDS, "cases"))),
        ("unrooted trimming bounds", Box::new(|| suite_outcome(Suite::TrimUnrooted, 0..TRIM_SEEDS, "cases"))),
        ("rooted budgeted: cost <= (1+ε)B, prize >= ε²/16 OPT", Box::new(|| suite_outcome(Suite::BudgetedRooted, 0..BUDGETED_SEEDS, "instances"))),
        (
            "unrooted budgeted: cost <= B, prize >= OPT/64; flat/saddled split",
            Box::new(|| {
                let a = suite_outcome(Suite::BudgetedUnrooted, 0..BUDGETED_SEEDS, "instances");
                let b = suite_outcome(Suite::TreeSplit, 0..SPLIT_SEEDS, "trees split");
                outcome(a.pass && b.pass, format!("{}; {}", a.summary, b.summary))
            }),
        ),
        ("integrality gap family", Box::new(gap_family)),
        ("3-SAT net worth gadget", Box::new(hardness_gadget)),
        ("reductions", Box::new(reductions)),
        ("determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "[{}] {:>2}. {name}: {} ({:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.summary.trim_end(),
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
