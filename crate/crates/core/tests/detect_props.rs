use std::collections::BTreeSet;

use locness_core::detect::{detect, detect_sequential, DetectConfig, Preference, TiePolicy};
use locness_core::{generate, oracle, GenParams, Graph, VertexId};
use proptest::prelude::*;
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_graph() -> impl Strategy<Value = Graph> {
    (2usize..60, 0.0f64..0.3, any::<u64>()).prop_map(|(n, p, seed)| oracle::random_graph(n, p, seed))
}

fn arb_config() -> impl Strategy<Value = DetectConfig> {
    (
        any::<u64>(),
        prop::sample::select(Preference::ALL.to_vec()),
        any::<bool>(),
    )
        .prop_map(|(seed, preference, lowest)| DetectConfig {
            seed,
            preference,
            tie_policy: if lowest { TiePolicy::LowestId } else { TiePolicy::Random },
            ..DetectConfig::default()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cover_invariants_hold(g in arb_graph(), cfg in arb_config()) {
        let d = detect(&g, &cfg).unwrap();
        prop_assert!(d.cover.check_invariants().is_ok());
        prop_assert!(d.leaders.check_invariants(&g, &cfg.preference).is_ok());
        for v in g.vertices() {
            prop_assert!(!d.cover.memberships(v).is_empty());
        }
        prop_assert!(d.cover.communities().iter().all(|c| !c.is_empty()));
    }

    #[test]
    fn memberships_bounded_by_leader_count(g in arb_graph(), cfg in arb_config()) {
        let d = detect(&g, &cfg).unwrap();
        for v in g.vertices() {
            let (k, a) = (d.cover.memberships(v).len(), d.leaders.leaders(v).len());
            prop_assert!(k <= a, "vertex {}: {} memberships, {} leaders", v, k, a);
            if k > 1 {
                prop_assert!(a > 1);
            }
        }
    }

    #[test]
    fn main_leader_shares_a_community(g in arb_graph(), cfg in arb_config()) {
        let d = detect(&g, &cfg).unwrap();
        for v in g.vertices() {
            let main = d.leaders.main_leader(v);
            let shared = d.cover.memberships(v).iter().any(|c| d.cover.memberships(main).contains(c));
            prop_assert!(shared, "vertex {} and main leader {}", v, main);
        }
    }

    #[test]
    fn engine_and_direct_pipelines_agree(g in arb_graph(), cfg in arb_config()) {
        let d = detect(&g, &cfg).unwrap();
        let (cover, leaders) = detect_sequential(&g, &cfg).unwrap();
        prop_assert_eq!(d.cover, cover);
        prop_assert_eq!(d.leaders, leaders);
    }

    #[test]
    fn leaders_match_exhaustive_argmax(g in arb_graph(), seed in any::<u64>()) {
        let d = detect(&g, &DetectConfig::with_seed(seed)).unwrap();
        for v in g.vertices() {
            prop_assert_eq!(d.leaders.leaders(v).to_vec(), oracle::argmax_leaders(&g, v));
        }
    }

    #[test]
    fn lowest_id_ignores_seed(g in arb_graph(), a in any::<u64>(), b in any::<u64>()) {
        let cfg = |seed| DetectConfig { seed, tie_policy: TiePolicy::LowestId, ..DetectConfig::default() };
        prop_assert_eq!(detect(&g, &cfg(a)).unwrap().cover, detect(&g, &cfg(b)).unwrap().cover);
    }

    #[test]
    fn fixed_seed_reproduces_cover(g in arb_graph(), seed in any::<u64>()) {
        let a = detect(&g, &DetectConfig::with_seed(seed)).unwrap();
        let b = detect(&g, &DetectConfig::with_seed(seed)).unwrap();
        prop_assert_eq!(a.cover, b.cover);
        prop_assert_eq!(a.stats, b.stats);
    }

    #[test]
    fn request_reply_sends_four_per_edge(g in arb_graph()) {
        let d = detect(&g, &DetectConfig::default()).unwrap();
        let m = g.edge_count() as u64;
        prop_assert_eq!(d.stats.total_messages, 4 * m);
        prop_assert_eq!(&d.stats.messages_per_superstep, &vec![2 * m, 2 * m, 0]);
    }
}

fn generated(n: usize, seed: u64) -> Graph {
    generate(&GenParams {
        n,
        seed,
        ..GenParams::default()
    })
    .unwrap()
    .0
}

#[test]
fn message_total_within_six_n_mean_degree() {
    for n in [500, 5000] {
        for seed in 0..3 {
            let g = generated(n, seed);
            let d = detect(&g, &DetectConfig::with_seed(seed)).unwrap();
            let bound = 6.0 * n as f64 * g.mean_degree();
            assert!(
                (d.stats.total_messages as f64) <= bound,
                "n={n} seed={seed}: {} > {bound}",
                d.stats.total_messages
            );
        }
    }
}

fn overlapping_set(g: &Graph, seed: u64) -> BTreeSet<VertexId> {
    detect(g, &DetectConfig::with_seed(seed))
        .unwrap()
        .cover
        .overlapping_vertices()
        .into_iter()
        .collect()
}

#[test]
fn one_percent_edge_removal_changes_few_overlapping_vertices() {
    let g = generated(5000, 11);
    let base = overlapping_set(&g, 11);
    assert!(!base.is_empty());
    let edges: Vec<(VertexId, VertexId)> = g.edges().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let trials = 10;
    let mut total = 0.0;
    for _ in 0..trials {
        let removed: Vec<_> = index::sample(&mut rng, edges.len(), edges.len() / 100)
            .into_iter()
            .map(|i| edges[i])
            .collect();
        let h = g.without_edges(&removed);
        let after = overlapping_set(&h, 11);
        total += base.symmetric_difference(&after).count() as f64 / base.len() as f64;
    }
    let mean = total / trials as f64;
    println!("mean relative change of the overlapping set: {mean:.4}");
    assert!(mean < 0.15, "mean change {mean}");
}
