//! Benchmark regression against independent closed-form oracles.

use netlaw_core::engage::{benchmark_rank, engagement_rate, fit_log_benchmark, EngagementRecord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn records(pairs: &[(u64, u64)]) -> Vec<EngagementRecord> {
    pairs
        .iter()
        .enumerate()
        .map(|(i, &(interactions, likes))| EngagementRecord {
            bpo_id: format!("p{i:04}"),
            interactions,
            likes,
        })
        .collect()
}

/// Slope and intercept from the 2x2 normal equations.
fn normal_equations(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let (sx, sy) = (x.iter().sum::<f64>(), y.iter().sum::<f64>());
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    (slope, (sy - slope * sx) / n)
}

fn noisy_sample(n: usize, seed: u64) -> Vec<EngagementRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(u64, u64)> = (0..n)
        .map(|_| {
            let likes = 10f64.powf(rng.gen_range(2.0..7.0)).round() as u64;
            let noise = 10f64.powf(rng.gen_range(-0.3..0.3));
            let inter = (0.05 * (likes as f64).powf(0.75) * noise).round().max(1.0) as u64;
            (inter, likes)
        })
        .collect();
    records(&pairs)
}

#[test]
fn noisy_slope_matches_normal_equations() {
    let recs = noisy_sample(1_000, 3);
    let bench = fit_log_benchmark(&recs).unwrap();
    let x: Vec<f64> = recs.iter().map(|r| (r.likes as f64).log10()).collect();
    let y: Vec<f64> = recs.iter().map(|r| (r.interactions as f64).log10()).collect();
    let (slope, intercept) = normal_equations(&x, &y);
    assert!((bench.slope - slope).abs() < 1e-9);
    assert!((bench.intercept - intercept).abs() < 1e-9);
    assert!((bench.slope - 0.75).abs() <= 0.02, "slope {}", bench.slope);
}

#[test]
fn ranking_matches_hand_computed_residuals() {
    let recs = noisy_sample(100, 9);
    let bench = fit_log_benchmark(&recs).unwrap();
    let x: Vec<f64> = recs.iter().map(|r| (r.likes as f64).log10()).collect();
    let y: Vec<f64> = recs.iter().map(|r| (r.interactions as f64).log10()).collect();
    let (slope, intercept) = normal_equations(&x, &y);
    let mut oracle: Vec<(String, f64)> = recs
        .iter()
        .zip(x.iter().zip(&y))
        .map(|(r, (xi, yi))| (r.bpo_id.clone(), yi - (intercept + slope * xi)))
        .collect();
    oracle.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    let ranked = benchmark_rank(&bench);
    let ids = |v: &[(String, f64)]| v.iter().map(|(id, _)| id.clone()).collect::<Vec<_>>();
    assert_eq!(ids(&ranked), ids(&oracle));
}

#[test]
fn raw_rate_penalises_size_but_benchmark_does_not() {
    // interactions = 0.01 * likes^0.8 with likes = 10^(5j), integral throughout
    let pairs: Vec<(u64, u64)> = (1..=3).map(|j| (10u64.pow(4 * j - 2), 10u64.pow(5 * j))).collect();
    let recs = records(&pairs);
    let rates: Vec<f64> = recs.iter().map(|r| engagement_rate(r).unwrap()).collect();
    assert!(rates.windows(2).all(|w| w[1] < w[0]));
    let bench = fit_log_benchmark(&recs).unwrap();
    assert!((bench.slope - 0.8).abs() < 1e-9);
    assert!(bench.residual_per_bpo.values().all(|r| r.abs() < 1e-9));
}
