#![allow(dead_code)]

use nwsteiner::generate::{gen_random, RandomParams, Topology, ValueRange};
use nwsteiner::NodeWeightedInstance;

/// A seeded random instance with `n` vertices, `demands` demand pairs and
/// small integer weights.
pub fn instance(seed: u64, n: usize, demands: usize, connected: bool) -> NodeWeightedInstance {
    let params = RandomParams {
        seed,
        n,
        topology: if seed.is_multiple_of(2) { Topology::TreePlusChords { chords: (seed % 4) as usize } } else { Topology::ErdosRenyi { p_num: 1, p_den: 3 } },
        cost: ValueRange::new(0, 5, 1 + (seed % 3) as i64),
        prize: ValueRange::new(0, 6, 1),
        penalty: ValueRange::new(0, 10, 1),
        demands,
        root: false,
        budget: None,
        connected,
    };
    gen_random(&params).expect("valid parameters")
}
