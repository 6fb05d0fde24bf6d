//! Exact distribution of the degree sequence for very small trees.
//!
//! Vertices of equal degree are interchangeable, so the process is tracked
//! on degree multisets. With class probabilities `p_delta` (total weight of
//! degree-`delta` vertices over the total), `d` i.i.d. candidates select
//! degree class `delta` with probability `S(delta)^d - S(delta + 1)^d` under
//! the min rule, where `S` is the upper tail of `p`, and with
//! `G(delta)^d - G(delta - 1)^d` under the max rule, where `G` is the CDF.

use std::collections::BTreeMap;

use minchoice_core::{trial_rng, ModelSpec, Rule, ThresholdVector, TreeState, UnitDraw};
use serde::Serialize;

use crate::Error;

/// Largest edge count [`enumerate_exact`] accepts.
pub const MAX_ENUMERATE_EDGES: u64 = 6;

/// One reachable degree multiset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    /// Degrees, largest first.
    pub degrees: Vec<u32>,
    pub probability: f64,
    pub max_degree: u32,
    /// `F(1..=max_degree)`.
    pub thresholds: Vec<u64>,
}

/// Law of the tree after `edges` edges.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactLaw {
    pub edges: u64,
    pub outcomes: Vec<Outcome>,
}

impl ExactLaw {
    /// `P(max degree = k)`, keyed by `k`.
    pub fn max_degree_law(&self) -> BTreeMap<u32, f64> {
        let mut law = BTreeMap::new();
        for o in &self.outcomes {
            *law.entry(o.max_degree).or_insert(0.0) += o.probability;
        }
        law
    }

    /// Law of the threshold vector `F(1..=max_degree)`.
    pub fn threshold_law(&self) -> BTreeMap<Vec<u64>, f64> {
        let mut law = BTreeMap::new();
        for o in &self.outcomes {
            *law.entry(o.thresholds.clone()).or_insert(0.0) += o.probability;
        }
        law
    }
}

fn thresholds(degrees: &[u32]) -> Vec<u64> {
    let top = degrees.iter().copied().max().unwrap_or(0);
    (1..=top)
        .map(|k| degrees.iter().filter(|&&d| d >= k).map(|&d| u64::from(d)).sum())
        .collect()
}

// (degree, count) pairs, ascending degree
fn classes(degrees: &[u32]) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = Vec::new();
    for &d in degrees.iter().rev() {
        match out.last_mut() {
            Some((deg, c)) if *deg == d => *c += 1,
            _ => out.push((d, 1)),
        }
    }
    out
}

/// Probability that each degree class receives the next leaf.
pub fn class_law(degrees: &[u32], spec: &ModelSpec, edges: u64) -> Vec<(u32, f64)> {
    let classes = classes(degrees);
    let weights: Vec<f64> = classes
        .iter()
        .map(|&(deg, c)| f64::from(c) * f64::from(deg).powf(spec.alpha))
        .collect();
    let total: f64 = weights.iter().sum();
    let p: Vec<f64> = weights.iter().map(|w| w / total).collect();
    let d = spec.choices_at(edges) as i32;
    let n = p.len();
    let chosen: Vec<f64> = match spec.rule {
        Rule::Classic => p.clone(),
        Rule::Min => {
            let mut tail = vec![0.0; n + 1];
            for i in (0..n).rev() {
                tail[i] = tail[i + 1] + p[i];
            }
            (0..n).map(|i| tail[i].powi(d) - tail[i + 1].powi(d)).collect()
        }
        Rule::Max => {
            let mut cdf = vec![0.0; n + 1];
            for i in 0..n {
                cdf[i + 1] = cdf[i] + p[i];
            }
            (0..n).map(|i| cdf[i + 1].powi(d) - cdf[i].powi(d)).collect()
        }
    };
    classes.iter().map(|&(deg, _)| deg).zip(chosen).collect()
}

/// Exact law after `edges` edges, for `1 <= edges <= MAX_ENUMERATE_EDGES`.
pub fn enumerate_exact(edges: u64, spec: &ModelSpec) -> Result<ExactLaw, Error> {
    if edges > MAX_ENUMERATE_EDGES {
        return Err(Error::EnumerationTooLarge(edges));
    }
    if edges == 0 {
        return Err(Error::Config("enumeration needs at least one edge".into()));
    }
    spec.validate()?;
    let mut states: BTreeMap<Vec<u32>, f64> = BTreeMap::from([(vec![1, 1], 1.0)]);
    for j in 1..edges {
        let mut next = BTreeMap::new();
        for (degrees, prob) in &states {
            for (deg, q) in class_law(degrees, spec, j) {
                if q <= 0.0 {
                    continue;
                }
                let mut child = degrees.clone();
                let pos = child.iter().position(|&x| x == deg).expect("class present");
                child[pos] += 1;
                child.push(1);
                child.sort_unstable_by(|a, b| b.cmp(a));
                *next.entry(child).or_insert(0.0) += prob * q;
            }
        }
        states = next;
    }
    let outcomes = states
        .into_iter()
        .map(|(degrees, probability)| Outcome {
            max_degree: degrees[0],
            thresholds: thresholds(&degrees),
            degrees,
            probability,
        })
        .collect();
    Ok(ExactLaw { edges, outcomes })
}

/// Total variation distance between two laws on the same key space.
pub fn total_variation<K: Ord>(a: &BTreeMap<K, f64>, b: &BTreeMap<K, f64>) -> f64 {
    let mut sum = 0.0;
    for (k, p) in a {
        sum += (p - b.get(k).copied().unwrap_or(0.0)).abs();
    }
    for (k, q) in b {
        if !a.contains_key(k) {
            sum += q;
        }
    }
    sum / 2.0
}

fn trimmed(values: &[u64]) -> Vec<u64> {
    let top = values.iter().rposition(|&f| f > 0).map_or(0, |i| i + 1);
    values[..top].to_vec()
}

fn normalize<K: Ord>(counts: BTreeMap<K, u64>, runs: u64) -> BTreeMap<K, f64> {
    counts.into_iter().map(|(k, c)| (k, c as f64 / runs as f64)).collect()
}

/// Max-degree law and threshold-vector law.
pub type SampledLaws = (BTreeMap<u32, f64>, BTreeMap<Vec<u64>, f64>);

/// Empirical max-degree and threshold laws of `runs` simulated trees.
pub fn sampled_law(edges: u64, spec: &ModelSpec, runs: u64, seed: u64) -> Result<SampledLaws, Error> {
    let mut rng = trial_rng(seed, 0);
    let mut max_degree = BTreeMap::new();
    let mut thresholds = BTreeMap::new();
    for _ in 0..runs {
        let mut tree = TreeState::init(*spec)?;
        while tree.edges() < edges {
            tree.step(&mut rng)?;
        }
        *max_degree.entry(tree.max_degree()).or_insert(0) += 1;
        *thresholds.entry(trimmed(tree.thresholds().values())).or_insert(0) += 1;
    }
    Ok((normalize(max_degree, runs), normalize(thresholds, runs)))
}

/// Empirical law of `F(1..=max)` after `edges` edges of the linear two-choice
/// min vector chain, which never looks at individual vertices.
pub fn sampled_vector_chain_law(edges: u64, runs: u64, seed: u64) -> BTreeMap<Vec<u64>, f64> {
    let mut rng = trial_rng(seed, 0);
    let mut counts = BTreeMap::new();
    let kmax = edges as usize + 2;
    for _ in 0..runs {
        let mut f = ThresholdVector::initial(kmax);
        while f.edges() < edges {
            f.vector_chain_step(UnitDraw::draw(&mut rng));
        }
        *counts.entry(trimmed(f.values())).or_insert(0) += 1;
    }
    normalize(counts, runs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_edges() {
        let min = enumerate_exact(3, &ModelSpec::min_choice(2)).unwrap().max_degree_law();
        assert!((min[&3] - 0.25).abs() < 1e-15);
        assert!((min[&2] - 0.75).abs() < 1e-15);
        let classic = enumerate_exact(3, &ModelSpec::classic()).unwrap().max_degree_law();
        assert!((classic[&3] - 0.5).abs() < 1e-15);
        let max = enumerate_exact(3, &ModelSpec::max_choice(2)).unwrap().max_degree_law();
        assert!((max[&3] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn probabilities_sum_to_one() {
        for spec in [
            ModelSpec::min_choice(3),
            ModelSpec::max_choice(2).with_alpha(0.5),
            ModelSpec::min_choice(2).with_log_growth(1.0),
        ] {
            let law = enumerate_exact(MAX_ENUMERATE_EDGES, &spec).unwrap();
            let total: f64 = law.outcomes.iter().map(|o| o.probability).sum();
            assert!((total - 1.0).abs() < 1e-12);
            for o in &law.outcomes {
                assert_eq!(o.degrees.iter().sum::<u32>() as u64, 2 * MAX_ENUMERATE_EDGES);
                assert_eq!(o.thresholds[0], 2 * MAX_ENUMERATE_EDGES);
            }
        }
    }

    #[test]
    fn refuses_large_trees() {
        assert!(matches!(
            enumerate_exact(7, &ModelSpec::min_choice(2)),
            Err(Error::EnumerationTooLarge(7))
        ));
        assert!(enumerate_exact(0, &ModelSpec::min_choice(2)).is_err());
    }

    #[test]
    fn tv_distance() {
        let a = BTreeMap::from([(1, 0.5), (2, 0.5)]);
        let b = BTreeMap::from([(2, 0.5), (3, 0.5)]);
        assert!((total_variation(&a, &b) - 0.5).abs() < 1e-15);
        assert_eq!(total_variation(&a, &a), 0.0);
    }
}
