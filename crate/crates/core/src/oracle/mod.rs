//! Exact solvers and independent verifiers for small instances.

use std::time::{Duration, Instant};

pub mod enumerate;
mod exact;
mod laminar;
mod validate;

pub use exact::{
    exact_budgeted, exact_budgeted_by_subsets, exact_budgeted_edge_weighted, exact_net_worth, exact_net_worth_edge_weighted,
    exact_pcsf, exact_pcsf_by_demand_subsets, exact_quota_kmst, exact_quota_kmst_by_subsets, CoverProblem,
};
pub use laminar::{check_disk_facts, check_laminar_dual, replay_disk, DiskReplay, LaminarReport, LAMINAR_MAX_VERTICES};
pub use validate::{validate_solution, ProblemKind, SolutionReport};

/// Size and time limits; oracles refuse larger inputs instead of running for hours.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleBudget {
    /// Number of free vertices the enumeration ranges over.
    pub max_vertices: usize,
    pub max_demands: usize,
    pub time_limit: Duration,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self { max_vertices: 14, max_demands: 4, time_limit: Duration::from_secs(60) }
    }
}

impl OracleBudget {
    /// Defaults overridden by `NWST_ORACLE_MAX_VERTICES`,
    /// `NWST_ORACLE_MAX_DEMANDS` and `NWST_ORACLE_TIME_LIMIT_SECS`.
    pub fn from_env() -> Self {
        let mut budget = Self::default();
        let read = |key: &str| std::env::var(key).ok().and_then(|v| v.trim().parse::<u64>().ok());
        if let Some(v) = read("NWST_ORACLE_MAX_VERTICES") {
            budget.max_vertices = v as usize;
        }
        if let Some(v) = read("NWST_ORACLE_MAX_DEMANDS") {
            budget.max_demands = v as usize;
        }
        if let Some(v) = read("NWST_ORACLE_TIME_LIMIT_SECS") {
            budget.time_limit = Duration::from_secs(v);
        }
        budget
    }

    pub fn with_max_vertices(mut self, n: usize) -> Self {
        self.max_vertices = n;
        self
    }

    pub(crate) fn deadline(&self) -> Instant {
        Instant::now() + self.time_limit
    }
}
