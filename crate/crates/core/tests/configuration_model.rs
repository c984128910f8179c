use std::collections::HashMap;

use belyi_core::stats::uniform_chi_square;
use belyi_core::{degree_check, sample_graph, Seed};

const SAMPLES: u64 = 100_000;

/// Every perfect matching of `0..2m`, each as a sorted edge list.
fn all_matchings(stubs: usize) -> Vec<Vec<[usize; 2]>> {
    fn go(free: &mut Vec<usize>, cur: &mut Vec<[usize; 2]>, out: &mut Vec<Vec<[usize; 2]>>) {
        if free.is_empty() {
            let mut m = cur.clone();
            m.sort();
            out.push(m);
            return;
        }
        let first = free.remove(0);
        for j in 0..free.len() {
            let other = free.remove(j);
            cur.push([first, other]);
            go(free, cur, out);
            cur.pop();
            free.insert(j, other);
        }
        free.insert(0, first);
    }
    let mut out = Vec::new();
    go(&mut (0..stubs).collect(), &mut Vec::new(), &mut out);
    out
}

fn matching_counts(n: usize) -> (Vec<u64>, u64) {
    let index: HashMap<Vec<[usize; 2]>, usize> = all_matchings(6 * n)
        .into_iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let mut counts = vec![0u64; index.len()];
    let mut flipped = 0u64;
    for s in 0..SAMPLES {
        let g = sample_graph(n, Seed(s)).unwrap();
        let data = g.to_data();
        assert!(degree_check(&data));
        counts[index[&data.edges]] += 1;
        // vertex 0 rotation is [0, 1, 2] or [0, 2, 1]
        flipped += (data.rotation[0][1] == 2) as u64;
    }
    (counts, flipped)
}

#[test]
fn matchings_of_six_stubs() {
    assert_eq!(all_matchings(6).len(), 15);
    let (counts, flipped) = matching_counts(1);
    let p = 1.0 / 15.0;
    let sigma = (SAMPLES as f64 * p * (1.0 - p)).sqrt();
    for &c in &counts {
        assert!((c as f64 - SAMPLES as f64 * p).abs() < 3.0 * sigma, "{counts:?}");
    }
    assert!(uniform_chi_square(&counts).unwrap().p_value > 0.01);
    let half = SAMPLES as f64 / 2.0;
    assert!((flipped as f64 - half).abs() < 3.0 * (half / 2.0).sqrt());
}

#[test]
fn matchings_of_twelve_stubs() {
    assert_eq!(all_matchings(12).len(), 10_395);
    let (counts, _) = matching_counts(2);
    assert!(uniform_chi_square(&counts).unwrap().p_value > 0.01);
}

#[test]
fn loops_and_double_edges_occur() {
    let (mut loops, mut doubles) = (0, 0);
    for s in 0..500 {
        let g = sample_graph(10, Seed(s)).unwrap();
        loops += (g.loop_count() > 0) as u32;
        let data = g.to_data();
        let mut pairs: Vec<(usize, usize)> = data
            .edges
            .iter()
            .map(|e| (e[0] / 3, e[1] / 3))
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        pairs.sort();
        doubles += pairs.windows(2).any(|w| w[0] == w[1]) as u32;
        assert_eq!(data.edges.len(), 30);
    }
    assert!(loops > 0 && doubles > 0);
}
