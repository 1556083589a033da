use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{subdivide_edge_costs, EdgeWeightedInstance, NodeWeightedInstance, VertexId};
use crate::rational::{int, Rational};

/// A CNF formula; literal `i` is variable `i`, `-i` its negation (1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i64>>,
}

impl Cnf {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i64>>) -> Result<Self> {
        for c in &clauses {
            if c.is_empty() {
                return Err(Error::Parse("empty clause".into()));
            }
            if let Some(&l) = c.iter().find(|&&l| l == 0 || l.unsigned_abs() as usize > num_vars) {
                return Err(Error::Parse(format!("literal {l} outside 1..={num_vars}")));
            }
        }
        Ok(Self { num_vars, clauses })
    }

    /// DIMACS CNF: `c` comment lines, a `p cnf <vars> <clauses>` header and
    /// zero-terminated clauses.
    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if line.starts_with('p') {
                let parts: Vec<&str> = line.split_whitespace().collect();
                if parts.len() != 4 || parts[1] != "cnf" {
                    return Err(Error::Parse(format!("bad header `{line}`")));
                }
                let num = |s: &str| s.parse::<usize>().map_err(|_| Error::Parse(format!("bad number `{s}`")));
                header = Some((num(parts[2])?, num(parts[3])?));
                continue;
            }
            if header.is_none() {
                return Err(Error::Parse("clause before the `p cnf` header".into()));
            }
            for tok in line.split_whitespace() {
                let lit: i64 = tok.parse().map_err(|_| Error::Parse(format!("bad literal `{tok}`")))?;
                if lit == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else {
                    current.push(lit);
                }
            }
        }
        if !current.is_empty() {
            clauses.push(current);
        }
        let (vars, count) = header.ok_or_else(|| Error::Parse("missing `p cnf` header".into()))?;
        if count != clauses.len() {
            return Err(Error::Parse(format!("header announces {count} clauses, found {}", clauses.len())));
        }
        Self::new(vars, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                out.push_str(&format!("{l} "));
            }
            out.push_str("0\n");
        }
        out
    }

    pub fn is_satisfied_by(&self, assignment: u64) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|&l| {
                let value = assignment >> (l.unsigned_abs() - 1) & 1 == 1;
                value == (l > 0)
            })
        })
    }

    /// Brute force over all assignments.
    pub fn is_satisfiable(&self) -> bool {
        assert!(self.num_vars < 64, "brute force is for tiny formulas");
        (0..1u64 << self.num_vars).any(|a| self.is_satisfied_by(a))
    }

    fn has_tautology(&self, var: i64) -> bool {
        self.clauses.iter().any(|c| c.contains(&var) && c.contains(&-var))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatNwInstance {
    /// The formula after augmentation.
    pub formula: Cnf,
    /// Clauses added: one `x ∨ ¬x` per variable lacking it, then copies of the
    /// first of those until there are more clauses than variables.
    pub added_clauses: Vec<Vec<i64>>,
    pub epsilon: Rational,
    pub clause_prize: Rational,
    pub edge_weighted: EdgeWeightedInstance,
    pub node_weighted: NodeWeightedInstance,
}

impl SatNwInstance {
    pub fn root(&self) -> VertexId {
        0
    }

    /// The value the optimum attains exactly when the formula is satisfiable.
    pub fn satisfiable_value(&self) -> Rational {
        &self.epsilon + int(1)
    }
}

/// Four layers: root `r` (prize ε), `r'` behind a bridge of cost
/// `mK - (n+1) - m`, one vertex per literal on unit edges from `r'`, one vertex
/// per clause (prize `K`) on unit edges from its literals.
pub fn gen_satnw(formula: &Cnf, epsilon: &Rational, clause_prize: &Rational) -> Result<SatNwInstance> {
    if !epsilon.is_positive() || epsilon >= &int(1) {
        return Err(Error::Precondition("epsilon must lie in (0, 1)".into()));
    }
    let n = formula.num_vars;
    if n == 0 {
        return Err(Error::Precondition("the formula needs at least one variable".into()));
    }
    if clause_prize < &int(n as i64 + 1) {
        return Err(Error::Precondition(format!("K must be at least n + 1 = {}", n + 1)));
    }
    if let Some(c) = formula.clauses.iter().find(|c| c.len() > 3) {
        return Err(Error::Precondition(format!("clause {c:?} has more than three literals")));
    }
    let mut f = Cnf::new(n, formula.clauses.clone())?;
    let mut added = Vec::new();
    for x in 1..=n as i64 {
        if !f.has_tautology(x) {
            added.push(vec![x, -x]);
            f.clauses.push(vec![x, -x]);
        }
    }
    while f.clauses.len() < n + 1 {
        added.push(vec![1, -1]);
        f.clauses.push(vec![1, -1]);
    }
    let m = f.clauses.len();
    let k = clause_prize;
    let bridge = int(m as i64) * k - int(n as i64 + 1) - int(m as i64);

    let literal_vertex = |l: i64| -> VertexId {
        let v = l.unsigned_abs() as usize - 1;
        2 + 2 * v + usize::from(l < 0)
    };
    let mut vertices = vec![("r".to_string(), epsilon.clone()), ("r'".to_string(), Rational::zero())];
    for x in 1..=n {
        vertices.push((format!("x{x}"), Rational::zero()));
        vertices.push((format!("~x{x}"), Rational::zero()));
    }
    let mut edges = vec![(0, 1, bridge)];
    for x in 1..=n as i64 {
        edges.push((1, literal_vertex(x), int(1)));
        edges.push((1, literal_vertex(-x), int(1)));
    }
    for (j, clause) in f.clauses.iter().enumerate() {
        let cv = vertices.len();
        vertices.push((format!("c{}", j + 1), k.clone()));
        let lits: BTreeSet<VertexId> = clause.iter().map(|&l| literal_vertex(l)).collect();
        edges.extend(lits.into_iter().map(|lv| (lv, cv, int(1))));
    }
    let edge_weighted = EdgeWeightedInstance { vertices, edges, demands: Vec::new(), root: Some(0), budget: None };
    let node_weighted = subdivide_edge_costs(&edge_weighted)?;
    Ok(SatNwInstance {
        formula: f,
        added_clauses: added,
        epsilon: epsilon.clone(),
        clause_prize: k.clone(),
        edge_weighted,
        node_weighted,
    })
}
