//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use minchoice::config::{ExperimentConfig, RuleName, Schedule};
use minchoice::enumerate::{enumerate_exact, sampled_law, sampled_vector_chain_law, total_variation};
use minchoice::experiment::{default_workers, max_load_trials, run_trials};
use minchoice::records::{write_csv, CheckpointRecord};
use minchoice_core::ballsbins::coupled_run;
use minchoice_core::theory::{self, alpha_seq, derive_c1_c2, f_seq, K0};
use minchoice_core::{trial_rng, ModelSpec, TreeOptions, TreeState};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn mean(values: impl IntoIterator<Item = f64>) -> f64 {
    let (sum, n) = values.into_iter().fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    sum / n as f64
}

fn recurrence() -> Outcome {
    let start = Instant::now();
    let alpha = alpha_seq(10);
    let elapsed = start.elapsed();
    let bounds = [2.0, 1.5, 9.0 / 8.0, 0.8, 0.6, 0.4, 0.25, 0.125, 1.0 / 30.0, 1.0 / 300.0];
    let within = alpha.iter().zip(bounds).all(|(a, b)| *a <= b);
    let exact = 2.0 * 3f64.sqrt() - 2.0;
    let digits = ((alpha[1] - exact) / exact).abs() < 1e-12;
    outcome(
        within && digits && elapsed < Duration::from_millis(1),
        format!("alpha_2 = {:.15}, bounds ok = {within}, {elapsed:?}", alpha[1]),
    )
}

fn degree_distribution(rows: &[CheckpointRecord], m: u64) -> Outcome {
    let finals: Vec<&CheckpointRecord> = rows.iter().filter(|r| r.j == m && r.trial < 32).collect();
    let alpha = alpha_seq(5);
    let exact_one = finals.iter().all(|r| r.f[0] == 2 * m);
    let gaps: Vec<f64> = (0..5)
        .map(|k| (mean(finals.iter().map(|r| r.f[k] as f64 / m as f64)) - alpha[k]).abs())
        .collect();
    let worst = gaps.iter().copied().fold(0.0, f64::max);
    outcome(
        finals.len() == 32 && exact_one && worst <= 0.05,
        format!("{} trials, F(1) = 2m in all: {exact_one}, max |mean F(k)/m - alpha_k| = {worst:.4}", finals.len()),
    )
}

fn max_degree_band(rows: &[CheckpointRecord]) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    let mut means = BTreeMap::new();
    for m in [10_000u64, 100_000, 1_000_000] {
        let reference = theory::reference_curve(m as f64).unwrap();
        let (lo, hi) = (reference - 3.0, reference + 8.0);
        let deltas: Vec<f64> = rows.iter().filter(|r| r.j == m).map(|r| f64::from(r.max_degree)).collect();
        let (min, max) = deltas.iter().fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
        let inside = deltas.len() == 100 && deltas.iter().all(|&d| d >= lo && d <= hi);
        pass &= inside;
        let avg = mean(deltas.iter().copied());
        means.insert(m, avg);
        parts.push(format!("m={m}: range [{min},{max}] in [{lo:.2},{hi:.2}] mean {avg:.2}"));
    }
    let growth = means[&1_000_000] - means[&10_000];
    pass &= growth <= 1.5;
    parts.push(format!("growth {growth:.2}"));
    outcome(pass, parts.join("; "))
}

fn scale_separation(min_mean: f64, workers: usize) -> Outcome {
    let m = 1_000_000u64;
    let cfg = ExperimentConfig {
        model: RuleName::Classic,
        choices: 1,
        edges: m,
        trials: 100,
        seed: 4,
        checkpoints: Schedule::List(vec![m]),
        ..ExperimentConfig::default()
    };
    let rows = run_trials(&cfg, workers).expect("classic trials");
    let ratios: Vec<f64> = rows.iter().map(|r| f64::from(r.max_degree) / (m as f64).sqrt()).collect();
    let in_range = ratios.iter().filter(|&&x| (0.05..=20.0).contains(&x)).count();
    let classic_mean = mean(rows.iter().map(|r| f64::from(r.max_degree)));
    outcome(
        in_range >= 95 && classic_mean >= 100.0 * min_mean,
        format!(
            "{in_range}/100 ratios in [0.05, 20], mean classic {classic_mean:.1} vs 100 x min {:.1}",
            100.0 * min_mean
        ),
    )
}

fn coupling() -> Outcome {
    let mut comparisons = 0;
    let mut failures = Vec::new();
    for seed in 0..20 {
        match coupled_run(100_000, seed) {
            Ok(report) => comparisons += report.comparisons,
            Err(e) => failures.push(format!("seed {seed}: {e}")),
        }
    }
    outcome(
        failures.is_empty(),
        format!("20 seeds, {comparisons} comparisons, violations: {}", failures.len())
            + &failures.first().map(|f| format!(" ({f})")).unwrap_or_default(),
    )
}

fn balls_and_bins(workers: usize) -> Outcome {
    let n = 1_000_000usize;
    let loads = max_load_trials(n, n as u64, 50, 6, workers).expect("bins trials");
    let curve = (n as f64).ln().ln() / 2f64.ln();
    let (lo, hi) = (curve - 2.0, curve + 5.0);
    let inside = loads.iter().filter(|&&l| f64::from(l) >= lo && f64::from(l) <= hi).count();
    let (min, max) = (loads.iter().min().unwrap(), loads.iter().max().unwrap());
    outcome(
        inside == 50,
        format!("max loads in [{min},{max}], band [{lo:.2},{hi:.2}], {inside}/50 inside"),
    )
}

fn oracle() -> Outcome {
    const RUNS: u64 = 1_000_000;
    let min3 = enumerate_exact(3, &ModelSpec::min_choice(2)).unwrap().max_degree_law()[&3];
    let classic3 = enumerate_exact(3, &ModelSpec::classic()).unwrap().max_degree_law()[&3];
    let mut pass = min3 == 0.25 && classic3 == 0.5;
    let mut worst: f64 = 0.0;
    let specs = [
        ModelSpec::min_choice(2),
        ModelSpec::min_choice(3),
        ModelSpec::max_choice(2),
        ModelSpec::classic(),
    ];
    for (i, spec) in specs.iter().enumerate() {
        for m in 1..=4 {
            let law = enumerate_exact(m, spec).unwrap();
            let (max_degree, thresholds) = sampled_law(m, spec, RUNS, 40 + i as u64).unwrap();
            worst = worst
                .max(total_variation(&law.max_degree_law(), &max_degree))
                .max(total_variation(&law.threshold_law(), &thresholds));
        }
    }
    for m in 1..=4 {
        let exact = enumerate_exact(m, &ModelSpec::min_choice(2)).unwrap().threshold_law();
        worst = worst.max(total_variation(&exact, &sampled_vector_chain_law(m, RUNS, 90)));
    }
    pass &= worst <= 0.01;
    outcome(
        pass,
        format!("P(max=3 | m=3): min {min3}, classic {classic3}; worst TV {worst:.5} over 10^6 runs"),
    )
}

fn constants() -> Outcome {
    let e60 = derive_c1_c2(60).unwrap();
    let e40 = derive_c1_c2(40).unwrap();
    let c1_exact = e60.c1 == 100f64.ln() && e60.ratios[0] == e60.c1;
    let strict_start = e60.ratios[..50].windows(2).all(|w| w[1] < w[0]);
    let stable = (e60.c2 * 1000.0).round() == (e40.c2 * 1000.0).round() && (e60.c2 - e40.c2).abs() < 5e-4;
    let c = theory::choose_c(e60.c1).unwrap();
    let sandwich = e60.sandwich_holds(&f_seq(K0 + 60).unwrap());
    outcome(
        c1_exact && e60.decreasing && strict_start && stable && c == 101 && sandwich,
        format!(
            "c1 = {:.12}, c2(40) = {:.6}, c2(60) = {:.6}, C = {c}, sandwich {sandwich}",
            e60.c1, e40.c2, e60.c2
        ),
    )
}

fn performance() -> Outcome {
    let m = 10_000_000u64;
    let options = TreeOptions {
        capacity: m,
        ..TreeOptions::default()
    };
    let start = Instant::now();
    let mut tree = TreeState::init_with(ModelSpec::min_choice(2), options).unwrap();
    tree.grow(m, &mut trial_rng(1, 0), &mut []).unwrap();
    let elapsed = start.elapsed();

    let cfg = ExperimentConfig {
        edges: 100_000,
        trials: 8,
        seed: 12,
        ..ExperimentConfig::default()
    };
    let csv = |workers| {
        let mut buf = Vec::new();
        write_csv(&mut buf, &run_trials(&cfg, workers).unwrap()).unwrap();
        buf
    };
    let identical = csv(1) == csv(8);
    outcome(
        elapsed <= Duration::from_secs(10) && identical,
        format!("10^7 edges in {elapsed:.2?} (max degree {}), CSV identical at 1 and 8 workers: {identical}", tree.max_degree()),
    )
}

fn main() -> ExitCode {
    let workers = default_workers();
    let mut failed = 0;
    let mut report = |n: u32, name: &str, run: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {n} ({name}): {} [{:.1?}]", o.detail, start.elapsed());
        if !o.pass {
            failed += 1;
        }
    };

    report(1, "recurrence", &mut recurrence);

    let m = 1_000_000u64;
    let min_cfg = ExperimentConfig {
        edges: m,
        trials: 100,
        seed: 2,
        checkpoints: Schedule::List(vec![10_000, 100_000, m]),
        ..ExperimentConfig::default()
    };
    let start = Instant::now();
    let min_rows = run_trials(&min_cfg, workers).expect("min-choice trials");
    let shared = start.elapsed();
    report(2, "degree distribution", &mut || {
        let o = degree_distribution(&min_rows, m);
        outcome(o.pass, format!("{}, shared 100-trial run {shared:.1?}", o.detail))
    });
    report(3, "max-degree band", &mut || max_degree_band(&min_rows));
    let min_mean = mean(min_rows.iter().filter(|r| r.j == m).map(|r| f64::from(r.max_degree)));
    report(4, "scale separation", &mut || scale_separation(min_mean, workers));
    report(5, "coupling", &mut coupling);
    report(6, "balls and bins", &mut || balls_and_bins(workers));
    report(7, "exact oracle", &mut oracle);
    report(8, "constants", &mut constants);
    report(9, "performance", &mut performance);

    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
