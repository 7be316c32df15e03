use locness::io::{format_communities, load_edge_list, load_lfr_truth};
use locness::io::{read_cover, read_edge_list, write_edge_list, LabeledGraph};
use locness_core::{oracle, Graph};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::Path;

fn fixture(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn reload(g: &LabeledGraph) -> LabeledGraph {
    let mut text = Vec::new();
    write_edge_list(g, &mut text).unwrap();
    read_edge_list(text.as_slice()).unwrap()
}

proptest! {
    #[test]
    fn edge_list_round_trip(labels in proptest::collection::vec((0u64..1_000_000, 0u64..1_000_000), 1..200)) {
        let text: String = labels.iter().map(|(u, v)| format!("{u} {v}\n")).collect();
        let Ok(g) = read_edge_list(text.as_bytes()) else {
            // only self-loops
            prop_assert!(labels.iter().all(|(u, v)| u == v));
            return Ok(());
        };
        let h = reload(&g);
        // dense ids are assigned by first appearance, so compare by label
        let edges = |g: &LabeledGraph| {
            let mut e: Vec<(u64, u64)> = g.graph.edges().map(|(u, v)| {
                let (a, b) = (g.label(u), g.label(v));
                (a.min(b), a.max(b))
            }).collect();
            e.sort_unstable();
            e
        };
        prop_assert_eq!(edges(&g), edges(&h));
        // a second round trip is exact, dense ids included
        prop_assert_eq!(&reload(&h).graph, &h.graph);
        let sum: usize = g.graph.vertices().map(|v| g.graph.degree(v)).sum();
        prop_assert_eq!(sum, 2 * g.graph.edge_count());
    }

    #[test]
    fn cover_text_round_trip(seed in any::<u64>(), n in 2usize..60, blocks in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cover = oracle::random_cover(&mut rng, n, blocks, 0.3);
        let g = LabeledGraph::identity(Graph::from_edges(n, (1..n as u32).map(|v| (v - 1, v))).unwrap().0);
        let text = format_communities(&g, &cover);
        prop_assert_eq!(read_cover(&g, text.as_bytes()).unwrap(), cover);
    }
}

#[test]
fn karate_fixture_counts() {
    let g = load_edge_list(&fixture("karate.edges")).unwrap();
    assert_eq!((g.graph.vertex_count(), g.graph.edge_count()), (34, 78));
    let sum: usize = g.graph.vertices().map(|v| g.graph.degree(v)).sum();
    assert_eq!(sum, 156);
    let (a, b) = (g.vertex(1).unwrap(), g.vertex(34).unwrap());
    let expected = oracle::common_neighbors_naive(&g.graph, a, b);
    assert_eq!(g.graph.common_neighbor_count(a, b).unwrap(), expected);
    // networkx set intersection over the same fixture also gives 4
    assert_eq!(expected, 4);
}

#[test]
fn lfr_fixture_loads() {
    let g = load_edge_list(&fixture("lfr1000.edges")).unwrap();
    let truth = load_lfr_truth(&g, &fixture("lfr1000.community.dat")).unwrap();
    assert_eq!(g.graph.vertex_count(), 1000);
    assert!(truth.check_invariants().is_ok());
    assert!(g.graph.validate().is_ok());
}

#[test]
fn highschool_fixture_loads() {
    let g = load_edge_list(&fixture("highschool.edges")).unwrap();
    let truth = locness::io::load_cover(&g, &fixture("highschool.truth")).unwrap();
    assert_eq!(truth.community_count(), 6);
    assert!(truth.check_invariants().is_ok());
}
