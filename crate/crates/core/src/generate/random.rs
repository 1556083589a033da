use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Demand, NodeWeightedInstance, Vertex, VertexId};
use crate::rational::{ratio, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    /// Each pair is an edge with probability `p_num / p_den`.
    ErdosRenyi { p_num: u32, p_den: u32 },
    /// Uniform random recursive tree plus `chords` extra distinct edges (fewer
    /// if the graph fills up).
    TreePlusChords { chords: usize },
}

/// Uniform over `{lo, lo+1, ..., hi} / denominator`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValueRange {
    pub lo: i64,
    pub hi: i64,
    pub denominator: i64,
}

impl ValueRange {
    pub const fn new(lo: i64, hi: i64, denominator: i64) -> Self {
        Self { lo, hi, denominator }
    }

    pub const fn zero() -> Self {
        Self::new(0, 0, 1)
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Rational {
        ratio(rng.gen_range(self.lo..=self.hi), self.denominator)
    }

    fn check(&self, what: &str) -> Result<()> {
        if self.lo > self.hi || self.lo < 0 || self.denominator <= 0 {
            return Err(Error::Precondition(format!("bad {what} range {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomParams {
    pub seed: u64,
    pub n: usize,
    pub topology: Topology,
    pub cost: ValueRange,
    pub prize: ValueRange,
    pub penalty: ValueRange,
    /// Number of demands, each between two distinct random vertices.
    pub demands: usize,
    /// Pick a random root.
    pub root: bool,
    pub budget: Option<Rational>,
    /// Join components with random edges until the graph is connected.
    pub connected: bool,
}

impl Default for RandomParams {
    fn default() -> Self {
        Self {
            seed: 0,
            n: 8,
            topology: Topology::TreePlusChords { chords: 3 },
            cost: ValueRange::new(0, 6, 1),
            prize: ValueRange::zero(),
            penalty: ValueRange::new(1, 12, 1),
            demands: 2,
            root: false,
            budget: None,
            connected: true,
        }
    }
}

pub fn gen_random(params: &RandomParams) -> Result<NodeWeightedInstance> {
    let n = params.n;
    params.cost.check("cost")?;
    params.prize.check("prize")?;
    params.penalty.check("penalty")?;
    if n == 0 {
        return Err(Error::Precondition("at least one vertex is required".into()));
    }
    if params.demands > 0 && n < 2 {
        return Err(Error::Precondition("demands need two vertices".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut edges: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    match params.topology {
        Topology::ErdosRenyi { p_num, p_den } => {
            if p_den == 0 || p_num > p_den {
                return Err(Error::Precondition("edge probability must lie in [0, 1]".into()));
            }
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_ratio(p_num, p_den) {
                        edges.insert((u, v));
                    }
                }
            }
        }
        Topology::TreePlusChords { chords } => {
            for v in 1..n {
                edges.insert((rng.gen_range(0..v), v));
            }
            let room = n * (n - 1) / 2 - edges.len();
            let mut missing: Vec<(VertexId, VertexId)> =
                (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|e| !edges.contains(e)).collect();
            missing.shuffle(&mut rng);
            edges.extend(missing.into_iter().take(chords.min(room)));
        }
    }
    if params.connected {
        connect(n, &mut edges, &mut rng);
    }
    let vertices = (0..n)
        .map(|i| Vertex { name: format!("v{i}"), cost: params.cost.sample(&mut rng), prize: params.prize.sample(&mut rng) })
        .collect();
    let demands = (0..params.demands)
        .map(|_| {
            let s = rng.gen_range(0..n);
            let t = (s + rng.gen_range(1..n)) % n;
            Demand { s, t, penalty: params.penalty.sample(&mut rng) }
        })
        .collect();
    let root = params.root.then(|| rng.gen_range(0..n));
    NodeWeightedInstance::new(vertices, edges.into_iter().collect(), demands, root, params.budget.clone())
}

fn connect(n: usize, edges: &mut BTreeSet<(VertexId, VertexId)>, rng: &mut ChaCha8Rng) {
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], v: usize) -> usize {
        let mut r = v;
        while label[r] != r {
            r = label[r];
        }
        label[v] = r;
        r
    }
    for &(u, v) in edges.iter() {
        let (a, b) = (find(&mut label, u), find(&mut label, v));
        label[a] = b;
    }
    let mut comps: Vec<Vec<VertexId>> = Vec::new();
    let mut index = vec![usize::MAX; n];
    for v in 0..n {
        let r = find(&mut label, v);
        if index[r] == usize::MAX {
            index[r] = comps.len();
            comps.push(Vec::new());
        }
        comps[index[r]].push(v);
    }
    for pair in comps.windows(2) {
        let u = *pair[0].choose(rng).expect("nonempty");
        let v = *pair[1].choose(rng).expect("nonempty");
        edges.insert((u.min(v), u.max(v)));
    }
}
