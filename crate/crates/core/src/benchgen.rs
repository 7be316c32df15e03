//! Planted-overlap benchmark graphs.
//!
//! A simplified stand-in for the LFR benchmark that keeps its parameter
//! vocabulary: mixing `mu`, target mean and maximum degree, a community size
//! range, the fraction of overlapping vertices `o_n` and the exact number of
//! memberships `o_m` of each overlapping vertex. Degrees and community sizes
//! are uniform rather than power-law.
//!
//! Construction:
//!
//! 1. Draw community sizes uniformly from the size range until they hold
//!    `n + ⌊o_n·n⌋·(o_m − 1)` memberships, then trim or pad to hit that total
//!    exactly.
//! 2. Sample `⌊o_n·n⌋` overlapping vertices. Each picks `o_m` distinct
//!    communities, drawn without replacement with weight equal to remaining
//!    capacity. The other vertices fill the remaining slots at random.
//! 3. Each vertex draws a degree uniformly from `[k/2, min(maxk, 3k/2)]`
//!    (mean `k`), and splits it into `round((1 − mu)·d)` internal stubs
//!    spread over its communities and the rest as external stubs.
//! 4. Internal stubs are paired within each community, external stubs across
//!    the whole graph between vertices sharing no community. Self-loops,
//!    repeats and (for external stubs) co-member pairs are resampled for a
//!    bounded number of rounds and then dropped.
//! 5. Any vertex left without an edge is tied to a member of its first
//!    community.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cover::Cover;
use crate::graph::{sorted_intersection_count, Graph, VertexId};
use crate::seed;

/// Resampling rounds for rejected stub pairs before they are dropped.
const PAIRING_ROUNDS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
}

/// Benchmark parameters.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct GenParams {
    pub n: usize,
    /// Fraction of each vertex's edges that leave its communities.
    pub mu: f64,
    pub avg_degree: f64,
    pub max_degree: usize,
    /// Inclusive community size range.
    pub size_range: (usize, usize),
    /// Fraction of vertices that are overlapping.
    pub o_n: f64,
    /// Exact membership count of each overlapping vertex.
    pub o_m: usize,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            n: 1000,
            mu: 0.3,
            avg_degree: 10.0,
            max_degree: 50,
            size_range: Self::SMALL,
            o_n: 0.1,
            o_m: 2,
            seed: 0,
        }
    }
}

impl GenParams {
    /// Community sizes 10 to 50.
    pub const SMALL: (usize, usize) = (10, 50);
    /// Community sizes 20 to 100.
    pub const BIG: (usize, usize) = (20, 100);

    /// Number of overlapping vertices, `⌊o_n · n⌋`.
    pub fn overlapping_count(&self) -> usize {
        // guard against 0.1 * 1000 = 99.999...
        libm::floor(self.o_n * self.n as f64 + 1e-9) as usize
    }

    fn degree_bounds(&self) -> (usize, usize) {
        let lo = (libm::round(self.avg_degree / 2.0) as usize).max(1);
        let hi = (libm::round(1.5 * self.avg_degree) as usize)
            .min(self.max_degree)
            .max(lo);
        (lo, hi)
    }

    pub fn validate(&self) -> Result<(), GenError> {
        let bad = |msg: String| Err(GenError::InvalidParam(msg));
        if self.n < 2 {
            return bad(format!("n must be at least 2, got {}", self.n));
        }
        if !(0.0..=1.0).contains(&self.mu) {
            return bad(format!("mu must lie in [0, 1], got {}", self.mu));
        }
        if !(0.0..=1.0).contains(&self.o_n) {
            return bad(format!("o_n must lie in [0, 1], got {}", self.o_n));
        }
        if self.o_m < 2 {
            return bad(format!("o_m must be at least 2, got {}", self.o_m));
        }
        if !(self.avg_degree.is_finite() && self.avg_degree >= 1.0) {
            return bad(format!("avg_degree must be at least 1, got {}", self.avg_degree));
        }
        if self.max_degree < 1 {
            return bad(String::from("max_degree must be at least 1"));
        }
        let (lo, hi) = self.size_range;
        if lo < 2 || lo > hi {
            return bad(format!("size_range must satisfy 2 <= min <= max, got ({lo}, {hi})"));
        }
        if hi > self.n {
            return bad(format!("largest community size {hi} exceeds n = {}", self.n));
        }
        Ok(())
    }
}

fn community_sizes(p: &GenParams, rng: &mut ChaCha8Rng) -> Result<Vec<usize>, GenError> {
    let (lo, hi) = p.size_range;
    let target = p.n + p.overlapping_count() * (p.o_m - 1);
    let mut sizes = Vec::new();
    let mut sum = 0;
    while sum < target {
        let s = rng.gen_range(lo..=hi);
        sizes.push(s);
        sum += s;
    }
    let mut excess = sum - target;
    let mut i = sizes.len();
    while excess > 0 && sizes.iter().any(|&s| s > lo) {
        i = if i == 0 { sizes.len() - 1 } else { i - 1 };
        if sizes[i] > lo {
            sizes[i] -= 1;
            excess -= 1;
        }
    }
    if excess > 0 {
        // every community is at the minimum: drop one and spread the deficit
        sizes.pop();
        let mut deficit = lo - excess;
        if sizes.is_empty() || sizes.len() * (hi - lo) < deficit {
            return Err(GenError::Infeasible(format!(
                "cannot split {target} memberships into communities of size {lo}..={hi}"
            )));
        }
        let mut i = 0;
        while deficit > 0 {
            if sizes[i] < hi {
                sizes[i] += 1;
                deficit -= 1;
            }
            i = (i + 1) % sizes.len();
        }
    }
    if p.overlapping_count() > 0 && sizes.len() < p.o_m {
        return Err(GenError::Infeasible(format!(
            "only {} communities for o_m = {} memberships per overlapping vertex",
            sizes.len(),
            p.o_m
        )));
    }
    Ok(sizes)
}

/// Pick `k` distinct communities, weighted by remaining capacity.
fn pick_communities(capacity: &mut [usize], k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    for _ in 0..k {
        let total: usize = capacity
            .iter()
            .enumerate()
            .filter(|(c, _)| !chosen.contains(c))
            .map(|(_, &cap)| cap)
            .sum();
        let pick = if total == 0 {
            // all preferred communities are full; overfill a random one
            let open: Vec<usize> = (0..capacity.len()).filter(|c| !chosen.contains(c)).collect();
            *open.choose(rng).expect("at least o_m communities exist")
        } else {
            let mut r = rng.gen_range(0..total);
            (0..capacity.len())
                .filter(|c| !chosen.contains(c))
                .find(|&c| {
                    if r < capacity[c] {
                        true
                    } else {
                        r -= capacity[c];
                        false
                    }
                })
                .expect("weighted draw lands in a community")
        };
        capacity[pick] = capacity[pick].saturating_sub(1);
        chosen.push(pick);
    }
    chosen
}

fn edge_key(u: VertexId, v: VertexId) -> u64 {
    (u64::from(u.min(v)) << 32) | u64::from(u.max(v))
}

/// Randomly pair stubs into new edges, resampling rejected pairs.
fn pair_stubs(
    mut pool: Vec<VertexId>,
    edges: &mut BTreeSet<u64>,
    rng: &mut ChaCha8Rng,
    allowed: impl Fn(VertexId, VertexId) -> bool,
) {
    for _ in 0..PAIRING_ROUNDS {
        if pool.len() < 2 {
            return;
        }
        pool.shuffle(rng);
        let mut rejected = Vec::new();
        let mut chunks = pool.chunks_exact(2);
        for pair in &mut chunks {
            let (u, v) = (pair[0], pair[1]);
            if u == v || !allowed(u, v) || !edges.insert(edge_key(u, v)) {
                rejected.extend_from_slice(pair);
            }
        }
        rejected.extend_from_slice(chunks.remainder());
        pool = rejected;
    }
}

/// Generate a graph and its planted ground-truth cover.
pub fn generate(p: &GenParams) -> Result<(Graph, Cover), GenError> {
    p.validate()?;
    let mut rng = seed::rng(p.seed, &[]);
    let n = p.n;
    let sizes = community_sizes(p, &mut rng)?;
    let k = sizes.len();

    let overlapping = index::sample(&mut rng, n, p.overlapping_count()).into_vec();
    let mut is_overlapping = vec![false; n];
    let mut capacity = sizes.clone();
    let mut memberships: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &v in &overlapping {
        is_overlapping[v] = true;
        memberships[v] = pick_communities(&mut capacity, p.o_m, &mut rng);
    }
    let mut slots: Vec<usize> = capacity
        .iter()
        .enumerate()
        .flat_map(|(c, &cap)| core::iter::repeat_n(c, cap))
        .collect();
    slots.shuffle(&mut rng);
    let mut rest: Vec<usize> = (0..n).filter(|&v| !is_overlapping[v]).collect();
    rest.shuffle(&mut rng);
    for (i, &v) in rest.iter().enumerate() {
        let c = match slots.get(i) {
            Some(&c) => c,
            None => rng.gen_range(0..k),
        };
        memberships[v].push(c);
    }

    let mut members: Vec<Vec<VertexId>> = vec![Vec::new(); k];
    for (v, cs) in memberships.iter().enumerate() {
        for &c in cs {
            members[c].push(v as VertexId);
        }
    }
    let sorted_memberships: Vec<Vec<usize>> = memberships
        .iter()
        .map(|cs| {
            let mut cs = cs.clone();
            cs.sort_unstable();
            cs
        })
        .collect();

    let (lo, hi) = p.degree_bounds();
    let mut internal: Vec<Vec<VertexId>> = vec![Vec::new(); k];
    let mut external: Vec<VertexId> = Vec::new();
    for (v, own) in memberships.iter().enumerate() {
        let degree = rng.gen_range(lo..=hi);
        let k_in = libm::round((1.0 - p.mu) * degree as f64) as usize;
        let k_in = k_in.min(degree);
        external.extend(core::iter::repeat_n(v as VertexId, degree - k_in));
        let mut cs = own.clone();
        cs.shuffle(&mut rng);
        let (base, extra) = (k_in / cs.len(), k_in % cs.len());
        for (i, &c) in cs.iter().enumerate() {
            let want = base + usize::from(i < extra);
            let stubs = want.min(members[c].len() - 1);
            internal[c].extend(core::iter::repeat_n(v as VertexId, stubs));
        }
    }

    let mut edges = BTreeSet::new();
    for pool in internal {
        pair_stubs(pool, &mut edges, &mut rng, |_, _| true);
    }
    let shares_community = |u: VertexId, v: VertexId| {
        let (a, b) = (&sorted_memberships[u as usize], &sorted_memberships[v as usize]);
        a.iter().any(|c| b.binary_search(c).is_ok())
    };
    pair_stubs(external, &mut edges, &mut rng, |u, v| !shares_community(u, v));

    let mut degree = vec![0usize; n];
    for &e in &edges {
        degree[(e >> 32) as usize] += 1;
        degree[(e & 0xffff_ffff) as usize] += 1;
    }
    for v in 0..n {
        if degree[v] > 0 {
            continue;
        }
        let home = &members[memberships[v][0]];
        let mates: Vec<VertexId> = home.iter().copied().filter(|&u| u as usize != v).collect();
        let partner = match mates.choose(&mut rng) {
            Some(&u) => u,
            None => loop {
                let u = rng.gen_range(0..n) as VertexId;
                if u as usize != v {
                    break u;
                }
            },
        };
        edges.insert(edge_key(v as VertexId, partner));
        degree[v] += 1;
        degree[partner as usize] += 1;
    }

    let (graph, _) = Graph::from_edges(
        n,
        edges
            .iter()
            .map(|&e| ((e >> 32) as VertexId, (e & 0xffff_ffff) as VertexId)),
    )
    .expect("generated edges are in range");
    let truth =
        Cover::new(n, members.into_iter().filter(|m| !m.is_empty()).collect()).expect("every vertex has a community");
    Ok((graph, truth))
}

/// Fraction of edges whose endpoints share at least one community of `cover`.
pub fn intra_community_fraction(graph: &Graph, cover: &Cover) -> f64 {
    let m = graph.edge_count();
    if m == 0 {
        return 0.0;
    }
    let intra = graph
        .edges()
        .filter(|&(u, v)| sorted_intersection_count(cover.memberships(u), cover.memberships(v)) > 0)
        .count();
    intra as f64 / m as f64
}
