//! Per-checkpoint statistics over trials.

use std::collections::BTreeMap;

use minchoice_core::theory;
use serde::Serialize;

use crate::config::seed_from_run_id;
use crate::records::CheckpointRecord;
use crate::Error;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stats {
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub q05: f64,
    pub median: f64,
    pub q95: f64,
}

impl Stats {
    /// Sample statistics; quantiles interpolate linearly between order statistics.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let mean = sorted.iter().sum::<f64>() / n;
        let var = if sorted.len() > 1 {
            sorted.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Some(Self {
            mean,
            std: var.sqrt(),
            min: sorted[0],
            max: sorted[sorted.len() - 1],
            q05: quantile(&sorted, 0.05),
            median: quantile(&sorted, 0.5),
            q95: quantile(&sorted, 0.95),
        })
    }
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckpointSummary {
    pub j: u64,
    pub trials: usize,
    pub max_degree: Stats,
    /// Mean of `F(k) / j` for `k = 1..=K`.
    pub mean_f_over_j: Vec<f64>,
    /// `ln ln j / ln d` for min-choice with `d >= 2` and `j >= 16`.
    pub reference_curve: Option<f64>,
    /// Mean max degree minus the reference curve.
    pub reference_delta: Option<f64>,
    /// `mean F(k)/j - alpha_k` for the linear two-choice min model.
    pub alpha_delta: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub run_id: String,
    pub model: String,
    pub d: u32,
    pub alpha: f64,
    pub seed: Option<u64>,
    pub trials: usize,
    pub edges: u64,
    pub checkpoints: Vec<CheckpointSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Software {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub software: Software,
    pub runs: Vec<RunSummary>,
}

pub fn software() -> Software {
    Software {
        name: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
    }
}

/// Groups rows by run id and checkpoint.
pub fn summarize(records: &[CheckpointRecord]) -> Result<Summary, Error> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut runs: BTreeMap<&str, BTreeMap<u64, Vec<&CheckpointRecord>>> = BTreeMap::new();
    for r in records {
        runs.entry(&r.run_id).or_default().entry(r.j).or_default().push(r);
    }
    let runs = runs
        .into_iter()
        .map(|(run_id, by_j)| {
            let first = by_j.values().next().and_then(|v| v.first()).copied().expect("nonempty group");
            let linear_two_min = first.model == "min" && first.alpha == 1.0 && by_j.values().all(|v| v.iter().all(|r| r.d == 2));
            let mut trials = std::collections::BTreeSet::new();
            let checkpoints: Vec<_> = by_j
                .iter()
                .map(|(&j, rows)| {
                    trials.extend(rows.iter().map(|r| r.trial));
                    checkpoint(j, rows, linear_two_min)
                })
                .collect();
            RunSummary {
                run_id: run_id.to_owned(),
                model: first.model.clone(),
                d: first.d,
                alpha: first.alpha,
                seed: seed_from_run_id(run_id),
                trials: trials.len(),
                edges: by_j.keys().next_back().copied().unwrap_or(0),
                checkpoints,
            }
        })
        .collect();
    Ok(Summary {
        software: software(),
        runs,
    })
}

fn checkpoint(j: u64, rows: &[&CheckpointRecord], linear_two_min: bool) -> CheckpointSummary {
    let degrees: Vec<f64> = rows.iter().map(|r| f64::from(r.max_degree)).collect();
    let stats = Stats::of(&degrees).expect("nonempty group");
    let width = rows.iter().map(|r| r.f.len()).max().unwrap_or(0);
    let mut mean_f = vec![0.0; width];
    for r in rows {
        for (acc, &f) in mean_f.iter_mut().zip(&r.f) {
            *acc += f as f64 / j as f64;
        }
    }
    for v in &mut mean_f {
        *v /= rows.len() as f64;
    }
    let d = rows[0].d;
    let reference = if rows[0].model == "min" && d >= 2 {
        theory::reference_curve_d(j as f64, d).ok().filter(|_| j >= 16)
    } else {
        None
    };
    let alpha_delta = linear_two_min.then(|| {
        theory::alpha_seq(width)
            .iter()
            .zip(&mean_f)
            .map(|(a, f)| f - a)
            .collect()
    });
    CheckpointSummary {
        j,
        trials: rows.len(),
        reference_delta: reference.map(|c| stats.mean - c),
        max_degree: stats,
        mean_f_over_j: mean_f,
        reference_curve: reference,
        alpha_delta,
    }
}
