//! Path lengths, robustness and crawl fidelity on generated graphs.

use std::collections::{BTreeSet, VecDeque};

use netlaw_core::crawl::{bfs_crawl, crawl_coverage, serve_snapshot};
use netlaw_core::diagnostics::{avg_path_length_sampled, removal_experiment, RemovalStrategy};
use netlaw_core::graph::DegreeMode;
use netlaw_core::io::{read_edge_list, write_edge_list};
use netlaw_core::synth::{generate_ba, generate_er, BaParams, ErParams};
use netlaw_core::Graph;

fn plain_adjacency(g: &Graph) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); g.node_count()];
    for (a, b) in g.edges() {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

/// Exact mean distance over every reachable ordered pair.
fn all_pairs_mean(adj: &[Vec<usize>]) -> f64 {
    let (mut sum, mut pairs) = (0u64, 0u64);
    for s in 0..adj.len() {
        let mut dist = vec![usize::MAX; adj.len()];
        dist[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for &u in &adj[v] {
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    sum += dist[u] as u64;
                    pairs += 1;
                    q.push_back(u);
                }
            }
        }
    }
    sum as f64 / pairs as f64
}

#[test]
fn sampled_path_length_tracks_exact_oracle() {
    let g = generate_ba(BaParams { n: 1_000, m: 3, seed: 8 }).unwrap();
    let exact = all_pairs_mean(&plain_adjacency(&g));
    let est = avg_path_length_sampled(&g, 100, 8).unwrap();
    assert!((est.mean_distance - exact).abs() / exact <= 0.05, "{} vs {exact}", est.mean_distance);
    assert!(est.mean_distance <= 2.5 * (1_000f64).ln());
    assert_eq!(est.unreachable_pairs, 0);

    let full = avg_path_length_sampled(&g, 1_000, 0).unwrap();
    assert!((full.mean_distance - exact).abs() < 1e-12);
}

#[test]
fn hubs_matter_more_than_random_nodes_in_ba() {
    let g = generate_ba(BaParams { n: 5_000, m: 3, seed: 2 }).unwrap();
    let targeted = removal_experiment(&g, 0.05, RemovalStrategy::Targeted, 1, 0).unwrap();
    let random = removal_experiment(&g, 0.05, RemovalStrategy::Random, 20, 2).unwrap();
    let wins = random
        .giant_fraction_per_trial
        .iter()
        .filter(|&&r| targeted.giant_fraction_mean < r)
        .count();
    assert!(wins >= 19, "targeted smaller in {wins}/20 trials");
}

#[test]
fn er_control_shows_small_gap() {
    let n = 5_000;
    let g = generate_er(ErParams { n, p: 6.0 / (n - 1) as f64, seed: 2 }).unwrap();
    let targeted = removal_experiment(&g, 0.05, RemovalStrategy::Targeted, 1, 0).unwrap();
    let random = removal_experiment(&g, 0.05, RemovalStrategy::Random, 20, 2).unwrap();
    assert!(random.giant_fraction_mean - targeted.giant_fraction_mean < 0.1);
}

#[test]
fn ample_crawl_recovers_component_and_degrees() {
    let g = generate_ba(BaParams { n: 2_000, m: 2, seed: 13 }).unwrap();
    let api = serve_snapshot(&g, 7).unwrap();
    let result = bfs_crawl(&api, &["1234".to_string()], usize::MAX).unwrap();
    assert!(!result.truncated);
    let cov = crawl_coverage(&result, &g);
    assert_eq!((cov.node_recall, cov.edge_recall), (1.0, 1.0));

    let crawled = result.to_graph(false);
    let mut got: Vec<usize> = crawled.degree_sequence(DegreeMode::Total).degrees().to_vec();
    let mut want: Vec<usize> = g.degree_sequence(DegreeMode::Total).degrees().to_vec();
    got.sort_unstable();
    want.sort_unstable();
    assert_eq!(got, want);
}

#[test]
fn edge_list_file_round_trip_preserves_graph() {
    let g = generate_ba(BaParams { n: 300, m: 3, seed: 1 }).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.tsv");
    write_edge_list(&g, std::fs::File::create(&path).unwrap()).unwrap();
    let text = std::fs::read(&path).unwrap();
    let back = read_edge_list(text.as_slice(), true).unwrap();
    assert!(!back.is_directed());
    let set = |g: &Graph| -> BTreeSet<(String, String)> {
        g.edges()
            .map(|(a, b)| {
                let (a, b) = (g.label(a).to_string(), g.label(b).to_string());
                if a < b { (a, b) } else { (b, a) }
            })
            .collect()
    };
    assert_eq!(set(&g), set(&back));
}
