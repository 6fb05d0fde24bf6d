//! Experiment configuration and checkpoint schedules.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use minchoice_core::{ChoiceCount, ModelSpec, Rule, DEFAULT_KMAX, MAX_EDGES};
use serde::{Deserialize, Serialize};

use crate::Error;

/// First edge count of a geometric schedule.
pub const GEOMETRIC_START: u64 = 10;

/// Edge counts at which a trial records a checkpoint.
#[derive(Debug, Clone, PartialEq)]
pub enum Schedule {
    /// `10, 10 r, 10 r^2, ...` (floored, deduplicated), always ending at the target.
    Geometric(f64),
    /// Explicit edge counts; entries above the target are dropped.
    List(Vec<u64>),
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule::Geometric(1.5)
    }
}

impl Schedule {
    /// Sorted, deduplicated checkpoints for a run to `target` edges.
    pub fn points(&self, target: u64) -> Result<Vec<u64>, Error> {
        let mut points = match self {
            Schedule::Geometric(ratio) => {
                if !(*ratio > 1.0 && ratio.is_finite()) {
                    return Err(Error::Config(format!("geometric ratio must exceed 1, got {ratio}")));
                }
                let mut points = Vec::new();
                let mut x = GEOMETRIC_START as f64;
                while x < target as f64 {
                    points.push(x as u64);
                    x *= ratio;
                }
                points.push(target);
                points
            }
            Schedule::List(list) => list.iter().copied().filter(|&j| j >= 1 && j <= target).collect(),
        };
        points.sort_unstable();
        points.dedup();
        if points.is_empty() {
            return Err(Error::Config("checkpoint list has no entry within the edge target".into()));
        }
        Ok(points)
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Schedule::Geometric(r) => write!(f, "geometric:{r}"),
            Schedule::List(list) => {
                f.write_str("list:")?;
                for (i, j) in list.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{j}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for Schedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Config(format!("checkpoints must be geometric:R or list:J1,J2,..., got {s:?}"));
        match s.split_once(':') {
            Some(("geometric", r)) => r.trim().parse().map(Schedule::Geometric).map_err(|_| bad()),
            Some(("list", items)) => items
                .split(',')
                .map(|j| j.trim().parse::<u64>())
                .collect::<Result<Vec<_>, _>>()
                .map(Schedule::List)
                .map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

impl Serialize for Schedule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Schedule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Selection rule as written in configs and files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RuleName {
    #[default]
    Min,
    Max,
    Classic,
}

impl From<RuleName> for Rule {
    fn from(r: RuleName) -> Rule {
        match r {
            RuleName::Min => Rule::Min,
            RuleName::Max => Rule::Max,
            RuleName::Classic => Rule::Classic,
        }
    }
}

/// Everything a `simulate` run needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: RuleName,
    pub choices: u32,
    pub alpha: f64,
    /// Coefficient `A` of `d(m) = max(1, floor(A ln m))`; fixed `choices` when absent.
    pub dgrow_a: Option<f64>,
    pub edges: u64,
    pub trials: u64,
    pub seed: u64,
    pub checkpoints: Schedule,
    pub kmax: usize,
    pub out: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            model: RuleName::Min,
            choices: 2,
            alpha: 1.0,
            dgrow_a: None,
            edges: 1_000_000,
            trials: 1,
            seed: 0,
            checkpoints: Schedule::default(),
            kmax: DEFAULT_KMAX,
            out: None,
            summary: None,
        }
    }
}

impl ExperimentConfig {
    /// Core model parameters.
    pub fn model_spec(&self) -> ModelSpec {
        let choices = match self.dgrow_a {
            Some(a) => ChoiceCount::Logarithmic(a),
            None => ChoiceCount::Fixed(if self.model == RuleName::Classic { 1 } else { self.choices }),
        };
        ModelSpec {
            rule: self.model.into(),
            choices,
            alpha: self.alpha,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        self.model_spec()
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.edges == 0 || self.edges > MAX_EDGES {
            return Err(Error::Config(format!("edges must be in 1..={MAX_EDGES}")));
        }
        if self.kmax == 0 {
            return Err(Error::Config("kmax must be at least 1".into()));
        }
        self.checkpoints.points(self.edges)?;
        Ok(())
    }

    /// Identifier written into every CSV row; ends in `-s<seed>`.
    pub fn run_id(&self) -> String {
        let choices = match self.dgrow_a {
            Some(a) => format!("dlog{a}"),
            None => format!("d{}", self.model_spec().choices_at(1)),
        };
        format!(
            "{}-{}-a{}-m{}-s{}",
            self.model.name(),
            choices,
            self.alpha,
            self.edges,
            self.seed
        )
    }
}

impl RuleName {
    pub fn name(self) -> &'static str {
        Rule::from(self).name()
    }
}

/// Seed encoded at the end of a run id, if any.
pub fn seed_from_run_id(run_id: &str) -> Option<u64> {
    run_id.rsplit_once("-s").and_then(|(_, s)| s.parse().ok())
}
