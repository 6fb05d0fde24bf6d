use std::collections::BTreeMap;

use minchoice::enumerate::{
    enumerate_exact, sampled_law, sampled_vector_chain_law, total_variation,
};
use minchoice_core::ballsbins::{BinsState, LevelCounts};
use minchoice_core::{trial_rng, ModelSpec, Rule, UnitDraw};

/// Labelled-tree brute force: every ordered tuple of endpoint positions is
/// equally likely, ties split evenly over the tied positions. Weights are
/// integers over a common denominator, so the result is exact.
fn brute_force(edges: u64, spec: &ModelSpec) -> BTreeMap<Vec<u32>, f64> {
    const TIE_LCM: u128 = 60;
    let mut states: Vec<(Vec<u32>, Vec<u32>, u128)> = vec![(vec![1, 1], vec![0, 1], 1)];
    let mut denominator: u128 = 1;
    for j in 1..edges {
        let d = spec.choices_at(j);
        assert!(d <= 5);
        let slots = 2 * j as usize;
        let tuples = slots.pow(d);
        denominator *= tuples as u128 * TIE_LCM;
        let mut next = Vec::new();
        for (degrees, endpoints, weight) in &states {
            for code in 0..tuples {
                let mut c = code;
                let picks: Vec<u32> = (0..d)
                    .map(|_| {
                        let v = endpoints[c % slots];
                        c /= slots;
                        v
                    })
                    .collect();
                let degs = picks.iter().map(|&v| degrees[v as usize]);
                let best = match spec.rule {
                    Rule::Max => degs.max().unwrap(),
                    _ => degs.min().unwrap(),
                };
                let tied: Vec<u32> = picks
                    .iter()
                    .copied()
                    .filter(|&v| degrees[v as usize] == best)
                    .collect();
                for &target in &tied {
                    let mut deg = degrees.clone();
                    let mut ends = endpoints.clone();
                    let leaf = deg.len() as u32;
                    deg[target as usize] += 1;
                    deg.push(1);
                    ends.extend([leaf, target]);
                    next.push((deg, ends, weight * (TIE_LCM / tied.len() as u128)));
                }
            }
        }
        states = next;
    }
    let mut law: BTreeMap<Vec<u32>, u128> = BTreeMap::new();
    for (mut degrees, _, w) in states {
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        *law.entry(degrees).or_insert(0) += w;
    }
    law.into_iter()
        .map(|(k, w)| (k, w as f64 / denominator as f64))
        .collect()
}

fn specs() -> Vec<ModelSpec> {
    vec![
        ModelSpec::min_choice(2),
        ModelSpec::min_choice(3),
        ModelSpec::max_choice(2),
        ModelSpec::max_choice(3),
        ModelSpec::classic(),
    ]
}

#[test]
fn enumeration_matches_labelled_brute_force() {
    for spec in specs() {
        for m in 1..=4 {
            let brute = brute_force(m, &spec);
            let exact: BTreeMap<Vec<u32>, f64> = enumerate_exact(m, &spec)
                .unwrap()
                .outcomes
                .into_iter()
                .map(|o| (o.degrees, o.probability))
                .collect();
            assert_eq!(brute.len(), exact.len(), "{spec:?} m={m}");
            for (k, p) in &brute {
                assert!((p - exact[k]).abs() < 1e-14, "{spec:?} m={m} {k:?} {p} {}", exact[k]);
            }
        }
    }
}

#[test]
fn small_tree_probabilities() {
    let min = enumerate_exact(3, &ModelSpec::min_choice(2)).unwrap().max_degree_law();
    assert_eq!(min[&3], 0.25);
    let classic = enumerate_exact(3, &ModelSpec::classic()).unwrap().max_degree_law();
    assert_eq!(classic[&3], 0.5);
    // the star on 4 edges needs the hub chosen three times running
    let star = enumerate_exact(4, &ModelSpec::min_choice(2)).unwrap().max_degree_law();
    assert!((star[&4] - 0.25 * (3.0f64 / 6.0).powi(2)).abs() < 1e-15);
}

#[test]
fn simulation_matches_exact_law() {
    const RUNS: u64 = 200_000;
    for (i, spec) in specs().into_iter().enumerate() {
        for m in 2..=4 {
            let law = enumerate_exact(m, &spec).unwrap();
            let (max_degree, thresholds) = sampled_law(m, &spec, RUNS, 100 + i as u64).unwrap();
            let tv = total_variation(&law.max_degree_law(), &max_degree);
            assert!(tv <= 0.01, "{spec:?} m={m} tv={tv}");
            let tv = total_variation(&law.threshold_law(), &thresholds);
            assert!(tv <= 0.01, "{spec:?} m={m} tv={tv}");
        }
    }
}

#[test]
fn vector_chain_matches_tree_law() {
    for m in 2..=5 {
        let exact = enumerate_exact(m, &ModelSpec::min_choice(2)).unwrap().threshold_law();
        let sampled = sampled_vector_chain_law(m, 200_000, 7);
        let tv = total_variation(&exact, &sampled);
        assert!(tv <= 0.01, "m={m} tv={tv}");
    }
}

fn sorted_loads(loads: &[u32]) -> Vec<u32> {
    let mut v = loads.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// Exact law of the sorted load vector: all `n^2` ordered bin pairs, a fair
/// coin on equal loads.
fn bins_brute_force(n: usize, balls: u32) -> BTreeMap<Vec<u32>, f64> {
    let mut states = vec![(vec![0u32; n], 1.0)];
    for _ in 0..balls {
        let mut next = Vec::new();
        for (loads, p) in &states {
            for a in 0..n {
                for b in 0..n {
                    let q = p / (n * n) as f64;
                    let targets: Vec<(usize, f64)> = match loads[a].cmp(&loads[b]) {
                        std::cmp::Ordering::Less => vec![(a, q)],
                        std::cmp::Ordering::Greater => vec![(b, q)],
                        std::cmp::Ordering::Equal => vec![(a, q / 2.0), (b, q / 2.0)],
                    };
                    for (bin, q) in targets {
                        let mut l = loads.clone();
                        l[bin] += 1;
                        next.push((l, q));
                    }
                }
            }
        }
        states = next;
    }
    let mut law = BTreeMap::new();
    for (loads, p) in states {
        *law.entry(sorted_loads(&loads)).or_insert(0.0) += p;
    }
    law
}

fn levels_of(sorted: &[u32]) -> Vec<u64> {
    let top = sorted.first().copied().unwrap_or(0);
    (0..=top)
        .map(|l| sorted.iter().filter(|&&x| x >= l).count() as u64)
        .collect()
}

#[test]
fn bins_match_brute_force() {
    const RUNS: u64 = 200_000;
    for n in 1..=4usize {
        for balls in 1..=3u32 {
            let exact = bins_brute_force(n, balls);
            let total: f64 = exact.values().sum();
            assert!((total - 1.0).abs() < 1e-12);

            let mut rng = trial_rng(n as u64, u64::from(balls));
            let mut counts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
            let mut level_counts: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
            for _ in 0..RUNS {
                let mut state = BinsState::new(n);
                for _ in 0..balls {
                    state.place_two_choice(&mut rng);
                }
                assert_eq!(state.levels(), &state.recompute_levels());
                *counts.entry(sorted_loads(state.loads())).or_insert(0) += 1;

                let mut chain = LevelCounts::new(n as u64);
                for _ in 0..balls {
                    chain.level_chain_step(UnitDraw::draw(&mut rng));
                }
                *level_counts.entry(chain.as_slice().to_vec()).or_insert(0) += 1;
            }
            let sampled = counts.into_iter().map(|(k, c)| (k, c as f64 / RUNS as f64)).collect();
            let tv = total_variation(&exact, &sampled);
            assert!(tv <= 0.01, "n={n} balls={balls} tv={tv}");

            let mut exact_levels = BTreeMap::new();
            for (loads, p) in &exact {
                *exact_levels.entry(levels_of(loads)).or_insert(0.0) += p;
            }
            let sampled = level_counts
                .into_iter()
                .map(|(k, c)| (k, c as f64 / RUNS as f64))
                .collect();
            let tv = total_variation(&exact_levels, &sampled);
            assert!(tv <= 0.01, "levels n={n} balls={balls} tv={tv}");
        }
    }
}
