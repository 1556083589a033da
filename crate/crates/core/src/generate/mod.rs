//! Instance generators: the budgeted integrality-gap family, the 3-SAT to net
//! worth construction and seeded random graphs.

mod gap;
mod random;
mod sat;

pub use gap::{gen_gap_instance, verify_flow_solution, GapInstance};
pub use random::{gen_random, RandomParams, Topology, ValueRange};
pub use sat::{gen_satnw, Cnf, SatNwInstance};
