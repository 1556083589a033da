//! Primal-dual prize-collecting Steiner forest.
//!
//! Disks of a common radius grow around one terminal per core until either a
//! core exhausts its penalty budget or a vertex is fully paid for by two or
//! more disks. There is no pruning phase and disks never merge.

mod certificate;
mod disk;
mod solver;

use num_traits::Zero;

pub use certificate::{CertificateRound, DualCertificate, RoundKind};
pub use disk::{build_iteration, core_components, vertex_tight_radius, Core, CoreId, DiskSystem, EventKind, GrowthEvent};
pub use solver::{apply_event, solve_pcsf, solve_pcsf_traced, EventOutcome, IterationTrace, PcsfSolution};

use crate::error::{Error, Result};
use crate::graph::{Demand, NodeWeightedInstance, VertexId};

/// Prize-collecting Steiner tree as a forest instance: one demand from `root`
/// to every other vertex with positive prize, with the prize as penalty.
pub fn pcst_demands(instance: &NodeWeightedInstance, root: VertexId) -> Result<NodeWeightedInstance> {
    if root >= instance.len() {
        return Err(Error::InvalidInstance("root is not a vertex".into()));
    }
    let demands = (0..instance.len())
        .filter(|&v| v != root && !instance.prize(v).is_zero())
        .map(|v| Demand { s: root, t: v, penalty: instance.prize(v).clone() })
        .collect();
    instance.with_demands(demands)?.with_root(Some(root))
}
