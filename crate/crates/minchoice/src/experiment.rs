//! Seeded, parallel Monte Carlo trials.
//!
//! Trial `t` of a run with seed `s` draws from `trial_rng(s, t)` and nothing
//! else, and results are gathered in trial order, so the output does not
//! depend on the number of worker threads.

use std::time::Instant;

use minchoice_core::ballsbins::BinsState;
use minchoice_core::model::{CheckpointObserver, Snapshot, TreeOptions, TreeState};
use minchoice_core::trial_rng;
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::records::CheckpointRecord;
use crate::Error;

/// Worker threads to use when none are requested.
pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

struct Recorder<'a> {
    points: &'a [u64],
    run_id: &'a str,
    model: &'a str,
    alpha: f64,
    trial: u64,
    records: Vec<CheckpointRecord>,
    last: Instant,
}

impl CheckpointObserver for Recorder<'_> {
    fn next_checkpoint(&self, from: u64) -> Option<u64> {
        let i = self.points.partition_point(|&p| p < from);
        self.points.get(i).copied()
    }

    fn observe(&mut self, s: &Snapshot<'_>) {
        let now = Instant::now();
        self.records.push(CheckpointRecord {
            run_id: self.run_id.to_owned(),
            model: self.model.to_owned(),
            d: s.choices,
            alpha: self.alpha,
            trial: self.trial,
            j: s.edges,
            max_degree: s.max_degree,
            f: s.thresholds.values().to_vec(),
            elapsed_ns: now.duration_since(self.last).as_nanos() as u64,
        });
        self.last = now;
    }
}

/// Runs trial `trial` of `config` and returns its checkpoint rows in `j` order.
pub fn run_trial(config: &ExperimentConfig, trial: u64) -> Result<Vec<CheckpointRecord>, Error> {
    let spec = config.model_spec();
    let points = config.checkpoints.points(config.edges)?;
    let run_id = config.run_id();
    let options = TreeOptions {
        kmax: config.kmax,
        track_parents: false,
        capacity: config.edges,
    };
    let mut tree = TreeState::init_with(spec, options)?;
    let mut recorder = Recorder {
        points: &points,
        run_id: &run_id,
        model: config.model.name(),
        alpha: config.alpha,
        trial,
        records: Vec::with_capacity(points.len()),
        last: Instant::now(),
    };
    let mut rng = trial_rng(config.seed, trial);
    tree.grow(config.edges, &mut rng, &mut [&mut recorder])
        .map_err(|source| match source {
            minchoice_core::Error::KmaxExceeded { max_degree, kmax } => Error::Kmax {
                trial,
                max_degree,
                kmax,
            },
            source => Error::Trial { trial, source },
        })?;
    Ok(recorder.records)
}

/// Runs every trial on `workers` threads; rows sorted by `(trial, j)`.
pub fn run_trials(config: &ExperimentConfig, workers: usize) -> Result<Vec<CheckpointRecord>, Error> {
    config.validate()?;
    let per_trial = with_pool(workers, || {
        (0..config.trials)
            .into_par_iter()
            .map(|t| run_trial(config, t))
            .collect::<Vec<_>>()
    })?;
    let mut out = Vec::new();
    for rows in per_trial {
        out.extend(rows?);
    }
    Ok(out)
}

/// Maximum degree at `edges` for each trial, without checkpoint rows.
pub fn max_degrees(config: &ExperimentConfig, workers: usize) -> Result<Vec<u32>, Error> {
    let rows = run_trials(config, workers)?;
    Ok(rows
        .iter()
        .filter(|r| r.j == config.edges)
        .map(|r| r.max_degree)
        .collect())
}

/// Two-choice max load after `balls` balls in `bins` bins, one value per trial.
pub fn max_load_trials(bins: usize, balls: u64, trials: u64, seed: u64, workers: usize) -> Result<Vec<u32>, Error> {
    with_pool(workers, || {
        (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut state = BinsState::new(bins);
                let mut rng = trial_rng(seed, t);
                for _ in 0..balls {
                    state.place_two_choice(&mut rng);
                }
                state.max_load()
            })
            .collect()
    })
}

fn with_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T, Error> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()?;
    Ok(pool.install(job))
}
