use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use nwsteiner::budgeted::{make_proper, solve_rooted_budgeted, solve_unrooted_budgeted, trim_rooted, trim_unrooted, Backend, RootedTree, TreeClass};
use nwsteiner::generate::{gen_gap_instance, gen_random, gen_satnw, verify_flow_solution, Cnf, RandomParams, Topology, ValueRange};
use nwsteiner::graph::{normalize_demands, NodeWeightedInstance, VertexId};
use nwsteiner::io::{instance_to_json, read_instance};
use nwsteiner::oracle::{
    exact_budgeted, exact_net_worth, exact_pcsf, exact_quota_kmst, validate_solution, CoverProblem, OracleBudget, ProblemKind,
    LAMINAR_MAX_VERTICES,
};
use nwsteiner::pcsf::{pcst_demands, solve_pcsf_traced, DualCertificate};
use nwsteiner::rational::{format_rational, parse_rational, Rational};
use nwsteiner::reductions::{ksteiner_from_quota, ksteiner_to_kmst, quota_lift_bound, quota_to_ksteiner, rooted_to_unrooted_kmst, ReductionMap};
use nwsteiner::suite::{laminar_audit, run_suite, to_csv, Suite};
use nwsteiner::Error;

#[derive(Parser)]
#[command(name = "nwsteiner", version, about = "Node-weighted Steiner solvers, generators and exact oracles")]
struct Cli {
    /// Output format on stdout.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run a solver.
    #[command(subcommand)]
    Solve(SolveCmd),
    /// Trim a tree given as a vertex list.
    #[command(subcommand)]
    Trim(TrimCmd),
    /// Transform a covering problem.
    Reduce(ReduceArgs),
    /// Write a generated instance.
    #[command(subcommand)]
    Generate(GenerateCmd),
    /// Exact optimum by exhaustive search. Forest demands are normalized first, as for `solve pcsf`.
    Oracle(OracleArgs),
    /// Check certificates, solutions or the gap flow.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Run a seeded property suite and print CSV.
    Bench(BenchArgs),
}

#[derive(Subcommand)]
enum SolveCmd {
    /// Prize-collecting Steiner forest.
    Pcsf {
        instance: PathBuf,
        /// Write the dual certificate here.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Prize-collecting Steiner tree: prizes become penalties of demands to the root.
    Pcst {
        instance: PathBuf,
        #[arg(long)]
        root: Option<String>,
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Budgeted Steiner tree, rooted when a root is known.
    Budgeted {
        instance: PathBuf,
        #[arg(long)]
        root: Option<String>,
        #[arg(long)]
        budget: Option<String>,
        #[arg(long, default_value = "1")]
        epsilon: String,
        #[arg(long, value_enum, default_value_t = BackendArg::Exact)]
        backend: BackendArg,
        /// Ignore the instance root.
        #[arg(long)]
        unrooted: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Exact,
    Lagrangian,
}

#[derive(Subcommand)]
enum TrimCmd {
    Rooted {
        instance: PathBuf,
        /// Comma-separated vertex names spanning a connected subgraph.
        #[arg(long, value_delimiter = ',', required = true)]
        tree: Vec<String>,
        #[arg(long)]
        root: Option<String>,
        #[arg(long)]
        budget: Option<String>,
        #[arg(long)]
        epsilon: String,
        /// Defaults to the prize-to-cost ratio of the tree.
        #[arg(long)]
        gamma: Option<String>,
    },
    Unrooted {
        instance: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        tree: Vec<String>,
        #[arg(long)]
        budget: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReduceKind {
    KsteinerToKmst,
    RootedToUnrooted,
    QuotaToKsteiner,
    KsteinerFromQuota,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(value_enum)]
    kind: ReduceKind,
    instance: PathBuf,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    terminals: Vec<String>,
    #[arg(long)]
    root: Option<String>,
    #[arg(long)]
    quota: Option<String>,
    #[arg(long)]
    epsilon: Option<String>,
    /// Write the transformed graph with every counted pendant vertex explicit.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Solve both sides with the exact oracle and lift the solution back.
    #[arg(long)]
    solve: bool,
}

#[derive(Subcommand)]
enum GenerateCmd {
    /// Path into a star: the budgeted integrality-gap family.
    Gap {
        #[arg(long = "B")]
        budget: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Net worth instance of a CNF formula.
    Satnw {
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long)]
        epsilon: String,
        #[arg(long = "K")]
        clause_prize: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Seeded random instance.
    Random(RandomArgs),
}

#[derive(Args)]
struct RandomArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, value_enum, default_value_t = TopologyArg::Tree)]
    topology: TopologyArg,
    /// Edge probability for `er`.
    #[arg(long, default_value = "3/10")]
    p: String,
    /// Extra edges for `tree`.
    #[arg(long, default_value_t = 3)]
    chords: usize,
    /// `lo..hi` or `lo..hi/den`.
    #[arg(long, default_value = "0..6")]
    cost: String,
    #[arg(long, default_value = "0..0")]
    prize: String,
    #[arg(long, default_value = "1..12")]
    penalty: String,
    #[arg(long, default_value_t = 2)]
    demands: usize,
    /// Pick a random root.
    #[arg(long)]
    root: bool,
    #[arg(long)]
    budget: Option<String>,
    /// Skip joining the components.
    #[arg(long)]
    disconnected: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TopologyArg {
    Er,
    Tree,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleKind {
    Pcsf,
    Budgeted,
    Kmst,
    Quota,
    Networth,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(value_enum)]
    kind: OracleKind,
    instance: PathBuf,
    #[command(flatten)]
    problem: ProblemArgs,
    /// Override the vertex limit (default from NWST_ORACLE_MAX_VERTICES or 14).
    #[arg(long)]
    max_vertices: Option<usize>,
}

#[derive(Args)]
struct ProblemArgs {
    #[arg(long)]
    root: Option<String>,
    #[arg(long)]
    budget: Option<String>,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    quota: Option<String>,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Check a certificate's arithmetic, rerun the solver and replay the disks.
    Dual {
        certificate: PathBuf,
        instance: PathBuf,
        /// The certificate came from `solve pcst` with this root.
        #[arg(long)]
        root: Option<String>,
    },
    /// Validate a vertex set and recompute its objective.
    Solution {
        instance: PathBuf,
        #[arg(long, value_enum)]
        problem: OracleKind,
        #[arg(long, value_delimiter = ',')]
        vertices: Vec<String>,
        #[arg(long)]
        claimed: Option<String>,
        #[command(flatten)]
        params: ProblemArgs,
    },
    /// Check the analytic flow of the gap family against the path LP.
    Flow {
        #[arg(long = "B")]
        budget: u64,
        #[arg(long)]
        k: u64,
        /// Multiply flow and capacities before checking.
        #[arg(long)]
        scale: Option<String>,
    },
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    suite: String,
    /// `a..b` (exclusive) or `a..=b`.
    #[arg(long)]
    seeds: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// What a command produced: JSON for `--format json`, text otherwise, and
/// whether it counts as a failed check.
struct Report {
    json: Value,
    text: String,
    failed: bool,
}

impl Report {
    fn ok(json: Value, text: String) -> Self {
        Self { json, text, failed: false }
    }
}

type CmdResult = Result<Report, Error>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli.command) {
        Ok(report) => {
            let body = match format {
                Format::Json => serde_json::to_string_pretty(&report.json).expect("json") + "\n",
                Format::Text => report.text,
            };
            // a closed pipe downstream is not an error of ours
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            ExitCode::from(if report.failed { 1 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Infeasible(_) => 1,
        Error::OracleLimit(_) => 3,
        _ => 2,
    }
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Solve(c) => solve(c),
        Command::Trim(c) => trim(c),
        Command::Reduce(a) => reduce(a),
        Command::Generate(c) => generate(c),
        Command::Oracle(a) => oracle(a),
        Command::Verify(c) => verify(c),
        Command::Bench(a) => bench(a),
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

fn r(x: &Rational) -> String {
    format_rational(x)
}

fn vertex(inst: &NodeWeightedInstance, name: &str) -> Result<VertexId, Error> {
    inst.id_of(name).ok_or_else(|| usage(format!("no vertex named `{name}`")))
}

fn vertices(inst: &NodeWeightedInstance, names: &[String]) -> Result<Vec<VertexId>, Error> {
    names.iter().filter(|n| !n.is_empty()).map(|n| vertex(inst, n)).collect()
}

fn names(inst: &NodeWeightedInstance, ids: impl IntoIterator<Item = VertexId>) -> Vec<String> {
    ids.into_iter().map(|v| inst.name(v).to_string()).collect()
}

fn root_of(inst: &NodeWeightedInstance, flag: &Option<String>) -> Result<Option<VertexId>, Error> {
    match flag {
        Some(name) => Ok(Some(vertex(inst, name)?)),
        None => Ok(inst.root()),
    }
}

fn budget_of(inst: &NodeWeightedInstance, flag: &Option<String>) -> Result<Rational, Error> {
    match flag {
        Some(text) => parse_rational(text),
        None => inst.budget().cloned().ok_or_else(|| usage("a budget is required (--budget or in the instance)")),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text)?;
    Ok(())
}

fn solve(cmd: SolveCmd) -> CmdResult {
    match cmd {
        SolveCmd::Pcsf { instance, certificate } => {
            let inst = read_instance(&instance)?;
            solve_forest(&inst, certificate.as_deref())
        }
        SolveCmd::Pcst { instance, root, certificate } => {
            let inst = read_instance(&instance)?;
            let root = root_of(&inst, &root)?.ok_or_else(|| usage("pcst needs a root"))?;
            solve_forest(&pcst_demands(&inst, root)?, certificate.as_deref())
        }
        SolveCmd::Budgeted { instance, root, budget, epsilon, backend, unrooted } => {
            let inst = read_instance(&instance)?;
            let budget = budget_of(&inst, &budget)?;
            let backend = match backend {
                BackendArg::Exact => Backend::Exact,
                BackendArg::Lagrangian => Backend::Lagrangian,
            };
            let epsilon = parse_rational(&epsilon)?;
            if !epsilon.is_positive() || epsilon > Rational::one() {
                return Err(usage("--epsilon must lie in (0, 1]"));
            }
            let oracle = OracleBudget::from_env();
            let root = if unrooted { None } else { root_of(&inst, &root)? };
            let sol = match root {
                Some(root) => solve_rooted_budgeted(&inst, root, &budget, &epsilon, backend, &oracle)?,
                None => solve_unrooted_budgeted(&inst, &budget, backend, &oracle)?,
            };
            let verts = names(&inst, sol.tree.vertices());
            let class = match sol.class {
                Some(TreeClass::Flat) => Value::from("flat"),
                Some(TreeClass::Saddled { apex }) => json!({ "saddled": inst.name(apex) }),
                None => Value::Null,
            };
            let json = json!({
                "vertices": verts,
                "root": inst.name(sol.tree.root),
                "cost": r(&sol.tree.cost),
                "prize": r(&sol.tree.prize),
                "budget": r(&budget),
                "class": class,
                "trim": sol.trim.map(|t| format!("{t:?}")),
            });
            let text = format!("prize {}\ncost {}\nvertices {}\n", r(&sol.tree.prize), r(&sol.tree.cost), verts.join(" "));
            Ok(Report::ok(json, text))
        }
    }
}

fn solve_forest(inst: &NodeWeightedInstance, certificate: Option<&Path>) -> CmdResult {
    let normalized = if inst.is_normalized() { inst.clone() } else { normalize_demands(inst) };
    let (sol, cert, trace) = solve_pcsf_traced(&normalized)?;
    if let Some(path) = certificate {
        write_file(path, &cert.to_json())?;
    }
    let bought = names(&normalized, sol.bought.iter().copied());
    let json = json!({
        "objective": r(&sol.objective),
        "cost": r(&cert.total_cost),
        "penalties": r(&cert.total_penalty_paid),
        "lower_bound": r(&cert.lower_bound),
        "iterations": trace.len(),
        "vertices": bought,
        "satisfied": sol.satisfied,
        "paid": sol.paid,
    });
    let text = format!(
        "objective {}\ncost {}\npenalties {}\nlower bound {}\nvertices {}\n",
        r(&sol.objective),
        r(&cert.total_cost),
        r(&cert.total_penalty_paid),
        r(&cert.lower_bound),
        bought.join(" ")
    );
    Ok(Report::ok(json, text))
}

fn trim(cmd: TrimCmd) -> CmdResult {
    let (inst, tree, out) = match cmd {
        TrimCmd::Rooted { instance, tree, root, budget, epsilon, gamma } => {
            let inst = read_instance(&instance)?;
            let root = root_of(&inst, &root)?.ok_or_else(|| usage("rooted trimming needs a root"))?;
            let budget = budget_of(&inst, &budget)?;
            let proper = make_proper(&inst, root, &budget)?;
            let local: Vec<VertexId> = vertices(&inst, &tree)?
                .into_iter()
                .map(|v| proper.original_ids.binary_search(&v).map_err(|_| usage(format!("{} is farther than the budget from the root", inst.name(v)))))
                .collect::<Result<_, _>>()?;
            let t = RootedTree::spanning(&proper.instance, proper.root, &local.into_iter().collect())?;
            let gamma = match gamma {
                Some(g) => parse_rational(&g)?,
                None => t.ratio().unwrap_or_else(Rational::zero),
            };
            let out = trim_rooted(&t, &proper, &gamma, &parse_rational(&epsilon)?)?;
            let input = t.relabeled(&proper.original_ids);
            let trimmed = out.tree.relabeled(&proper.original_ids);
            (inst, input, (trimmed, out.case))
        }
        TrimCmd::Unrooted { instance, tree, budget } => {
            let inst = read_instance(&instance)?;
            let budget = budget_of(&inst, &budget)?;
            let ids = vertices(&inst, &tree)?;
            let first = *ids.first().ok_or_else(|| usage("the tree is empty"))?;
            let t = RootedTree::spanning(&inst, first, &ids.into_iter().collect())?;
            let out = trim_unrooted(&t, &budget)?;
            (inst, t, (out.tree, out.case))
        }
    };
    let (trimmed, case) = out;
    let verts = names(&inst, trimmed.vertices());
    let json = json!({
        "vertices": verts,
        "cost": r(&trimmed.cost),
        "prize": r(&trimmed.prize),
        "input_cost": r(&tree.cost),
        "input_prize": r(&tree.prize),
        "case": format!("{case:?}"),
    });
    let text = format!("cost {}\nprize {}\nvertices {}\n", r(&trimmed.cost), r(&trimmed.prize), verts.join(" "));
    Ok(Report::ok(json, text))
}

fn cover_json(inst: &NodeWeightedInstance, p: &CoverProblem) -> Value {
    let root = p.root().map(|v| inst.name(v).to_string());
    match p {
        CoverProblem::KMst { k, multiplicity, .. } => json!({ "problem": "k-mst", "k": k, "root": root, "multiplicity": multiplicity }),
        CoverProblem::KSteiner { k, terminals, .. } => json!({ "problem": "k-steiner", "k": k, "root": root, "terminals": terminals }),
        CoverProblem::Quota { quota, .. } => json!({ "problem": "quota", "quota": r(quota), "root": root }),
    }
}

fn reduce(a: ReduceArgs) -> CmdResult {
    let inst = read_instance(&a.instance)?;
    let need_k = || a.k.ok_or_else(|| usage("--k is required"));
    let terminals = vertices(&inst, &a.terminals)?;
    let root = root_of(&inst, &a.root)?;
    let mut counts = vec![0u64; inst.len()];
    for &t in &terminals {
        counts[t] = 1;
    }
    let (map, source): (ReductionMap, CoverProblem) = match a.kind {
        ReduceKind::KsteinerToKmst => {
            let k = need_k()?;
            (ksteiner_to_kmst(&inst, &terminals, k)?, CoverProblem::KSteiner { k, terminals: counts, root: None })
        }
        ReduceKind::RootedToUnrooted => {
            let k = need_k()?;
            let root = root.ok_or_else(|| usage("--root is required"))?;
            (rooted_to_unrooted_kmst(&inst, root, k)?, CoverProblem::KMst { k, root: Some(root), multiplicity: None })
        }
        ReduceKind::QuotaToKsteiner => {
            let quota = parse_rational(a.quota.as_deref().ok_or_else(|| usage("--quota is required"))?)?;
            let eps = parse_rational(a.epsilon.as_deref().ok_or_else(|| usage("--epsilon is required"))?)?;
            (quota_to_ksteiner(&inst, &quota, &eps)?, CoverProblem::Quota { quota, root })
        }
        ReduceKind::KsteinerFromQuota => {
            let k = need_k()?;
            (ksteiner_from_quota(&inst, &terminals, k)?, CoverProblem::KSteiner { k, terminals: counts, root })
        }
    };
    if let Some(path) = &a.output {
        let (explicit, _) = map.materialize()?;
        write_file(path, &instance_to_json(&explicit))?;
    }
    let mut json = json!({
        "kind": map.kind,
        "k_prime": map.k_prime,
        "source": cover_json(&inst, &source),
        "transformed": cover_json(&map.transformed, &map.problem),
    });
    let mut text = format!("k' {}\n", map.k_prime);
    let mut failed = false;
    if a.solve {
        let oracle = OracleBudget::from_env();
        let before = exact_quota_kmst(&inst, &source, &oracle)?;
        let after = exact_quota_kmst(&map.transformed, &map.problem, &oracle)?;
        let show = |x: &Option<(Rational, Vec<VertexId>)>| x.as_ref().map(|(c, _)| r(c));
        json["source_optimum"] = json!(show(&before));
        json["transformed_optimum"] = json!(show(&after));
        text += &format!(
            "source optimum {}\ntransformed optimum {}\n",
            show(&before).unwrap_or("infeasible".into()),
            show(&after).unwrap_or("infeasible".into())
        );
        if let Some((_, witness)) = &after {
            let lifted = map.lift(witness);
            let report = validate_solution(&inst, &lifted, None, &ProblemKind::Cover(source.clone()));
            json["lifted"] = json!(names(&inst, lifted.iter().copied()));
            json["lifted_cost"] = json!(r(&inst.set_cost(&lifted)));
            json["lifted_valid"] = json!(report.valid);
            text += &format!("lifted {} cost {}\n", names(&inst, lifted.iter().copied()).join(" "), r(&inst.set_cost(&lifted)));
            if let (ReduceKind::QuotaToKsteiner, CoverProblem::Quota { quota, .. }) = (a.kind, &source) {
                let eps = parse_rational(a.epsilon.as_deref().expect("checked above"))?;
                let bound = quota_lift_bound(quota, &eps);
                let prize = inst.set_prize(&lifted);
                json["lifted_prize"] = json!(r(&prize));
                json["lift_bound"] = json!(r(&bound));
                failed |= prize <= bound;
                text += &format!("lifted prize {} (needs > {})\n", r(&prize), r(&bound));
            } else {
                failed |= !report.valid;
            }
        }
    }
    Ok(Report { json, text, failed })
}

fn parse_range(text: &str) -> Result<ValueRange, Error> {
    let bad = || Error::Parse(format!("expected lo..hi or lo..hi/den, got `{text}`"));
    let (span, den) = match text.split_once('/') {
        Some((s, d)) => (s, d.trim().parse().map_err(|_| bad())?),
        None => (text, 1),
    };
    let (lo, hi) = span.split_once("..").ok_or_else(bad)?;
    Ok(ValueRange::new(lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?, den))
}

fn emit_instance(inst: &NodeWeightedInstance, output: &Option<PathBuf>, summary: Value, text: String) -> CmdResult {
    let body = instance_to_json(inst);
    match output {
        Some(path) => {
            write_file(path, &body)?;
            Ok(Report::ok(summary, text))
        }
        None => Ok(Report::ok(serde_json::from_str(&body)?, body + "\n")),
    }
}

fn generate(cmd: GenerateCmd) -> CmdResult {
    match cmd {
        GenerateCmd::Gap { budget, k, output } => {
            let gap = gen_gap_instance(budget, k)?;
            let summary = json!({
                "B": budget,
                "k": k,
                "vertices": gap.node_weighted.len(),
                "fractional_value": r(&gap.fractional_value),
                "flow_valid": verify_flow_solution(&gap),
            });
            let text = format!("fractional value {}\n", r(&gap.fractional_value));
            emit_instance(&gap.node_weighted, &output, summary, text)
        }
        GenerateCmd::Satnw { cnf, epsilon, clause_prize, output } => {
            let formula = Cnf::parse_dimacs(&fs::read_to_string(&cnf)?)?;
            let sat = gen_satnw(&formula, &parse_rational(&epsilon)?, &parse_rational(&clause_prize)?)?;
            let summary = json!({
                "variables": sat.formula.num_vars,
                "clauses": sat.formula.clauses.len(),
                "added_clauses": sat.added_clauses,
                "vertices": sat.node_weighted.len(),
                "satisfiable": formula.is_satisfiable(),
            });
            let text = format!("clauses {} (added {})\n", sat.formula.clauses.len(), sat.added_clauses.len());
            emit_instance(&sat.node_weighted, &output, summary, text)
        }
        GenerateCmd::Random(a) => {
            let topology = match a.topology {
                TopologyArg::Tree => Topology::TreePlusChords { chords: a.chords },
                TopologyArg::Er => {
                    let p = parse_rational(&a.p)?;
                    let num = u32::try_from(p.numer()).map_err(|_| usage("bad --p"))?;
                    let den = u32::try_from(p.denom()).map_err(|_| usage("bad --p"))?;
                    Topology::ErdosRenyi { p_num: num, p_den: den }
                }
            };
            let params = RandomParams {
                seed: a.seed,
                n: a.n,
                topology,
                cost: parse_range(&a.cost)?,
                prize: parse_range(&a.prize)?,
                penalty: parse_range(&a.penalty)?,
                demands: a.demands,
                root: a.root,
                budget: a.budget.as_deref().map(parse_rational).transpose()?,
                connected: !a.disconnected,
            };
            let inst = gen_random(&params)?;
            let summary = json!({ "vertices": inst.len(), "edges": inst.edges().len(), "demands": inst.demands().len() });
            let text = format!("vertices {} edges {}\n", inst.len(), inst.edges().len());
            emit_instance(&inst, &a.output, summary, text)
        }
    }
}

fn oracle_limits(max_vertices: Option<usize>) -> OracleBudget {
    let base = OracleBudget::from_env();
    match max_vertices {
        Some(n) => base.with_max_vertices(n),
        None => base,
    }
}

fn cover_problem(inst: &NodeWeightedInstance, kind: OracleKind, p: &ProblemArgs) -> Result<CoverProblem, Error> {
    let root = root_of(inst, &p.root)?;
    match kind {
        OracleKind::Kmst => Ok(CoverProblem::KMst { k: p.k.ok_or_else(|| usage("--k is required"))?, root, multiplicity: None }),
        _ => {
            let quota = parse_rational(p.quota.as_deref().ok_or_else(|| usage("--quota is required"))?)?;
            Ok(CoverProblem::Quota { quota, root })
        }
    }
}

fn oracle(a: OracleArgs) -> CmdResult {
    let inst = read_instance(&a.instance)?;
    let limits = oracle_limits(a.max_vertices);
    let (value, verts): (Option<Rational>, Vec<String>) = match a.kind {
        OracleKind::Pcsf => {
            let normalized = if inst.is_normalized() { inst.clone() } else { normalize_demands(&inst) };
            let (v, w) = exact_pcsf(&normalized, &limits)?;
            (Some(v), names(&normalized, w))
        }
        OracleKind::Budgeted => {
            let root = root_of(&inst, &a.problem.root)?;
            let (v, w) = exact_budgeted(&inst, root, &budget_of(&inst, &a.problem.budget)?, &limits)?;
            (Some(v), names(&inst, w))
        }
        OracleKind::Kmst | OracleKind::Quota => match exact_quota_kmst(&inst, &cover_problem(&inst, a.kind, &a.problem)?, &limits)? {
            Some((v, w)) => (Some(v), names(&inst, w)),
            None => (None, Vec::new()),
        },
        OracleKind::Networth => {
            let (v, w) = exact_net_worth(&inst, root_of(&inst, &a.problem.root)?, &limits)?;
            (Some(v), names(&inst, w))
        }
    };
    let Some(value) = value else {
        return Err(Error::Infeasible("no feasible solution".into()));
    };
    let json = json!({ "optimum": r(&value), "vertices": verts });
    Ok(Report::ok(json, format!("optimum {}\nvertices {}\n", r(&value), verts.join(" "))))
}

fn verify(cmd: VerifyCmd) -> CmdResult {
    match cmd {
        VerifyCmd::Dual { certificate, instance, root } => {
            let cert = DualCertificate::from_json(&fs::read_to_string(&certificate)?)?;
            let inst = read_instance(&instance)?;
            let inst = match root_of(&inst, &root)? {
                Some(rt) if root.is_some() => pcst_demands(&inst, rt)?,
                _ => inst,
            };
            let normalized = if inst.is_normalized() { inst.clone() } else { normalize_demands(&inst) };
            let mut problems = Vec::new();
            if let Err(e) = cert.check() {
                problems.push(e);
            }
            let (_, rerun, trace) = solve_pcsf_traced(&normalized)?;
            if rerun != cert {
                problems.push("certificate differs from a fresh solver run".into());
            }
            let replayed = normalized.len() <= LAMINAR_MAX_VERTICES;
            if replayed {
                problems.extend(laminar_audit(&normalized, &trace)?);
            }
            let ok = problems.is_empty();
            let json = json!({ "valid": ok, "rounds": cert.rounds.len(), "laminar_replay": replayed, "problems": problems });
            let mut text = format!("{}\n", if ok { "valid" } else { "INVALID" });
            for p in &problems {
                text += &format!("  {p}\n");
            }
            Ok(Report { json, text, failed: !ok })
        }
        VerifyCmd::Solution { instance, problem, vertices: list, claimed, params } => {
            let inst = read_instance(&instance)?;
            let ids = vertices(&inst, &list)?;
            let kind = match problem {
                OracleKind::Pcsf => ProblemKind::Pcsf,
                OracleKind::Budgeted => ProblemKind::Budgeted { root: root_of(&inst, &params.root)?, budget: budget_of(&inst, &params.budget)? },
                OracleKind::Kmst | OracleKind::Quota => ProblemKind::Cover(cover_problem(&inst, problem, &params)?),
                OracleKind::Networth => ProblemKind::NetWorth { root: root_of(&inst, &params.root)? },
            };
            let claimed = claimed.as_deref().map(parse_rational).transpose()?;
            let report = validate_solution(&inst, &ids, claimed.as_ref(), &kind);
            let json = json!({ "valid": report.valid, "objective": r(&report.objective), "issues": report.issues });
            let mut text = format!("{}\nobjective {}\n", if report.valid { "valid" } else { "INVALID" }, r(&report.objective));
            for i in &report.issues {
                text += &format!("  {i}\n");
            }
            Ok(Report { json, text, failed: !report.valid })
        }
        VerifyCmd::Flow { budget, k, scale } => {
            let mut gap = gen_gap_instance(budget, k)?;
            if let Some(s) = scale {
                let s = parse_rational(&s)?;
                if s.is_negative() {
                    return Err(usage("--scale must be nonnegative"));
                }
                for x in gap.flow.iter_mut().chain(gap.capacity.iter_mut()) {
                    *x *= &s;
                }
            }
            let ok = verify_flow_solution(&gap);
            let json = json!({ "valid": ok, "fractional_value": r(&gap.fractional_value) });
            let text = format!("{}\nfractional value {}\n", if ok { "valid" } else { "INVALID" }, r(&gap.fractional_value));
            Ok(Report { json, text, failed: !ok })
        }
    }
}

fn parse_seeds(text: &str) -> Result<std::ops::Range<u64>, Error> {
    let bad = || Error::Parse(format!("expected a..b or a..=b, got `{text}`"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b = match b.strip_prefix('=') {
        Some(b) => b.trim().parse::<u64>().map_err(|_| bad())? + 1,
        None => b.trim().parse().map_err(|_| bad())?,
    };
    Ok(a..b)
}

fn bench(a: BenchArgs) -> CmdResult {
    let suite = Suite::from_name(&a.suite).ok_or_else(|| {
        let known: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        usage(format!("unknown suite `{}`; known: {}", a.suite, known.join(", ")))
    })?;
    let seeds = parse_seeds(&a.seeds)?;
    let rows = run_suite(suite, seeds, &OracleBudget::from_env()).into_iter().collect::<Result<Vec<_>, _>>()?;
    let failures = rows.iter().filter(|r| !r.ok).count();
    let csv = to_csv(suite, &rows);
    if let Some(path) = &a.output {
        write_file(path, &csv)?;
    }
    let json = json!({ "suite": suite.name(), "rows": rows.len(), "failures": failures, "csv": csv });
    let text = if a.output.is_some() { format!("{} rows, {failures} failures\n", rows.len()) } else { csv };
    Ok(Report { json, text, failed: failures > 0 })
}
