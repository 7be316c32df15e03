//! Brute-force reference implementations for tests.
//!
//! Nothing here is used by the library itself. Each function recomputes a
//! quantity by the most literal route available (double loops, all-pairs
//! enumeration, contingency tables) so the optimised code can be checked
//! against it.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::cover::Cover;
use crate::graph::{Graph, VertexId};
use crate::seed;

/// Connected random graph: a random recursive tree plus `G(n, p)` edges.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = seed::rng(seed, &[0x6f72_6163]);
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v) as VertexId, v as VertexId));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u as VertexId, v as VertexId));
            }
        }
    }
    Graph::from_edges(n, edges).expect("ids in range").0
}

/// `|{w : w ∈ Γ(u) ∧ w ∈ Γ(v)}|` by a double loop.
pub fn common_neighbors_naive(g: &Graph, u: VertexId, v: VertexId) -> usize {
    let mut count = 0;
    for &a in g.neighbors(u) {
        for &b in g.neighbors(v) {
            if a == b {
                count += 1;
            }
        }
    }
    count
}

/// Leader set of `v` under the default agreement score, by exhaustive argmax.
pub fn argmax_leaders(g: &Graph, v: VertexId) -> Vec<VertexId> {
    let scores: Vec<(VertexId, usize)> = g
        .neighbors(v)
        .iter()
        .map(|&u| (u, common_neighbors_naive(g, v, u) + 1))
        .collect();
    let best = scores.iter().map(|&(_, s)| s).max().unwrap_or(0);
    let mut out: Vec<VertexId> = scores.into_iter().filter(|&(_, s)| s == best).map(|(u, _)| u).collect();
    out.sort_unstable();
    out
}

fn plogp(count: usize, n: usize) -> f64 {
    if count == 0 {
        0.0
    } else {
        let p = count as f64 / n as f64;
        -p * libm::log2(p)
    }
}

/// Mean normalised `H(X_k | Y)` computed from per-vertex cell counts.
fn conditional_bruteforce(x: &Cover, y: &Cover) -> f64 {
    let n = x.vertex_count();
    let mut sum = 0.0;
    for xk in x.communities() {
        let hx = plogp(xk.len(), n) + plogp(n - xk.len(), n);
        let mut best = f64::INFINITY;
        let mut identical = false;
        for yl in y.communities() {
            let mut cells = [0usize; 4]; // [00, 01, 10, 11] as (in x, in y)
            for v in 0..n as VertexId {
                let idx = (usize::from(xk.contains(&v)) << 1) | usize::from(yl.contains(&v));
                cells[idx] += 1;
            }
            let [c00, c01, c10, c11] = cells;
            if c01 == 0 && c10 == 0 {
                identical = true;
            }
            let (h00, h01, h10, h11) = (plogp(c00, n), plogp(c01, n), plogp(c10, n), plogp(c11, n));
            if h11 + h00 >= h01 + h10 {
                let h_y = plogp(c01 + c11, n) + plogp(c00 + c10, n);
                let cond = h00 + h01 + h10 + h11 - h_y;
                if cond < best {
                    best = cond;
                }
            }
        }
        sum += if hx == 0.0 {
            if identical {
                0.0
            } else {
                1.0
            }
        } else if best.is_finite() {
            best.clamp(0.0, hx) / hx
        } else {
            1.0
        };
    }
    sum / x.community_count() as f64
}

/// Overlapping NMI (LFK) by direct entropy summation.
pub fn nmi_bruteforce(x: &Cover, y: &Cover) -> f64 {
    assert_eq!(x.vertex_count(), y.vertex_count());
    (1.0 - 0.5 * (conditional_bruteforce(x, y) + conditional_bruteforce(y, x))).clamp(0.0, 1.0)
}

fn shared(c: &Cover, u: VertexId, v: VertexId) -> usize {
    c.communities()
        .iter()
        .filter(|m| m.contains(&u) && m.contains(&v))
        .count()
}

/// Omega index by enumerating every vertex pair.
pub fn omega_bruteforce(x: &Cover, y: &Cover) -> f64 {
    let n = x.vertex_count();
    assert_eq!(n, y.vertex_count());
    let pairs = (n * (n - 1) / 2) as f64;
    let mut agree = 0usize;
    let mut tx: BTreeMap<usize, usize> = BTreeMap::new();
    let mut ty: BTreeMap<usize, usize> = BTreeMap::new();
    for u in 0..n as VertexId {
        for v in u + 1..n as VertexId {
            let (a, b) = (shared(x, u, v), shared(y, u, v));
            if a == b {
                agree += 1;
            }
            *tx.entry(a).or_default() += 1;
            *ty.entry(b).or_default() += 1;
        }
    }
    let observed = agree as f64 / pairs;
    let expected: f64 = tx
        .iter()
        .map(|(j, &cx)| (cx as f64 / pairs) * (*ty.get(j).unwrap_or(&0) as f64 / pairs))
        .sum();
    if expected == 1.0 {
        return if observed == 1.0 { 1.0 } else { f64::NAN };
    }
    (observed - expected) / (1.0 - expected)
}

fn choose2(k: usize) -> f64 {
    (k * k.saturating_sub(1) / 2) as f64
}

/// Adjusted Rand index of two labelings, from the contingency table.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut table: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut rows: BTreeMap<usize, usize> = BTreeMap::new();
    let mut cols: BTreeMap<usize, usize> = BTreeMap::new();
    for (&i, &j) in a.iter().zip(b) {
        *table.entry((i, j)).or_default() += 1;
        *rows.entry(i).or_default() += 1;
        *cols.entry(j).or_default() += 1;
    }
    let index: f64 = table.values().map(|&k| choose2(k)).sum();
    let sum_a: f64 = rows.values().map(|&k| choose2(k)).sum();
    let sum_b: f64 = cols.values().map(|&k| choose2(k)).sum();
    let expected = sum_a * sum_b / choose2(a.len());
    let max = 0.5 * (sum_a + sum_b);
    if max == expected {
        return 1.0;
    }
    (index - expected) / (max - expected)
}

/// Random cover over `n` vertices: a random partition into up to `blocks`
/// parts, then each vertex joins one extra random block with probability
/// `extra`.
pub fn random_cover<R: Rng>(rng: &mut R, n: usize, blocks: usize, extra: f64) -> Cover {
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..blocks)).collect();
    let mut communities: Vec<Vec<VertexId>> = vec![Vec::new(); blocks];
    for (v, &l) in labels.iter().enumerate() {
        communities[l].push(v as VertexId);
        if rng.gen_bool(extra) {
            communities[rng.gen_range(0..blocks)].push(v as VertexId);
        }
    }
    communities.retain(|c| !c.is_empty());
    Cover::new(n, communities).expect("every vertex has a label")
}

/// Random partition labels over `n` vertices with up to `blocks` parts.
pub fn random_labels<R: Rng>(rng: &mut R, n: usize, blocks: usize) -> Vec<usize> {
    (0..n).map(|_| rng.gen_range(0..blocks)).collect()
}
