//! Tree growth under a choice rule.

use alloc::vec::Vec;

use rand_core::RngCore;

use crate::fstats::ThresholdVector;
use crate::rng::uniform_below;
use crate::sampler::{EndpointList, WeightIndex};
use crate::{Error, DEFAULT_KMAX, MAX_EDGES};

/// Which candidate receives the new leaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Smallest degree among the candidates.
    Min,
    /// Largest degree among the candidates.
    Max,
    /// Plain preferential attachment; always one candidate.
    Classic,
}

impl Rule {
    /// Short lowercase name used in files and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            Rule::Min => "min",
            Rule::Max => "max",
            Rule::Classic => "classic",
        }
    }
}

/// Number of candidates drawn per step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChoiceCount {
    /// Always `d`.
    Fixed(u32),
    /// `max(1, floor(A * ln m))` evaluated at the current edge count `m`.
    Logarithmic(f64),
}

/// Rule, candidate count and attachment exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    /// Selection rule.
    pub rule: Rule,
    /// Candidates per step; ignored by [`Rule::Classic`].
    pub choices: ChoiceCount,
    /// Candidates are drawn proportionally to `deg^alpha`.
    pub alpha: f64,
}

impl ModelSpec {
    /// Min-choice among `d` candidates, linear weights.
    pub fn min_choice(d: u32) -> Self {
        Self {
            rule: Rule::Min,
            choices: ChoiceCount::Fixed(d),
            alpha: 1.0,
        }
    }

    /// Max-choice among `d` candidates, linear weights.
    pub fn max_choice(d: u32) -> Self {
        Self {
            rule: Rule::Max,
            ..Self::min_choice(d)
        }
    }

    /// Classic preferential attachment.
    pub fn classic() -> Self {
        Self {
            rule: Rule::Classic,
            ..Self::min_choice(1)
        }
    }

    /// Replaces the attachment exponent.
    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    /// Switches to `d(m) = max(1, floor(coefficient * ln m))`.
    pub fn with_log_growth(mut self, coefficient: f64) -> Self {
        self.choices = ChoiceCount::Logarithmic(coefficient);
        self
    }

    /// Checks `d >= 1`, `A > 0` and `alpha >= 0`.
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidSpec("alpha must be finite and nonnegative"));
        }
        match self.choices {
            ChoiceCount::Fixed(0) => Err(Error::InvalidSpec("choices must be at least 1")),
            ChoiceCount::Logarithmic(a) if !(a > 0.0 && a.is_finite()) => {
                Err(Error::InvalidSpec("growth coefficient must be positive"))
            }
            _ => Ok(()),
        }
    }

    /// Candidate count for the step taken at edge count `edges`.
    #[inline]
    pub fn choices_at(&self, edges: u64) -> u32 {
        match (self.rule, self.choices) {
            (Rule::Classic, _) => 1,
            (_, ChoiceCount::Fixed(d)) => d,
            (_, ChoiceCount::Logarithmic(a)) => {
                let d = libm::floor(a * libm::log(edges as f64));
                if d >= 1.0 {
                    d.min(u32::MAX as f64) as u32
                } else {
                    1
                }
            }
        }
    }

    /// True when the maximum degree must stay below `kmax`.
    ///
    /// Holds for min-choice with `alpha <= 1`, where degrees stay near
    /// `log log m`. Other models track `F` truncated at `kmax` and follow the
    /// maximum degree directly.
    pub fn bounded_support(&self) -> bool {
        self.rule == Rule::Min && self.alpha <= 1.0
    }
}

/// Construction options for [`TreeState`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeOptions {
    /// Tracked thresholds `F(1..=kmax)`.
    pub kmax: usize,
    /// Keep the attachment target of every vertex.
    pub track_parents: bool,
    /// Edge count to reserve memory for.
    pub capacity: u64,
}

impl Default for TreeOptions {
    fn default() -> Self {
        Self {
            kmax: DEFAULT_KMAX,
            track_parents: false,
            capacity: 0,
        }
    }
}

/// Parent entry of the root vertex.
pub const NO_PARENT: u32 = u32::MAX;

#[derive(Debug, Clone)]
enum Sampler {
    Endpoints(EndpointList),
    Weighted(WeightIndex),
}

/// Result of one growth step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Attachment {
    /// Vertex that received the new leaf.
    pub target: u32,
    /// Its degree before the step.
    pub old_degree: u32,
    /// Id of the new leaf.
    pub leaf: u32,
}

/// Statistics handed to observers at a checkpoint.
#[derive(Debug, Clone, Copy)]
pub struct Snapshot<'a> {
    /// Edge count.
    pub edges: u64,
    /// Maximum degree.
    pub max_degree: u32,
    /// Choices that the next step would use.
    pub choices: u32,
    /// `F(1..=kmax)` at this edge count.
    pub thresholds: &'a ThresholdVector,
}

/// Receives snapshots while a tree grows.
pub trait CheckpointObserver {
    /// Smallest scheduled edge count `>= from`.
    fn next_checkpoint(&self, from: u64) -> Option<u64>;

    /// Called once per scheduled edge count reached.
    fn observe(&mut self, snapshot: &Snapshot<'_>);
}

/// A growing tree: degrees, sampler, threshold weights.
///
/// Vertex ids are dense in arrival order; `0` and `1` are the initial pair.
#[derive(Debug, Clone)]
pub struct TreeState {
    spec: ModelSpec,
    degrees: Vec<u32>,
    sampler: Sampler,
    thresholds: ThresholdVector,
    max_degree: u32,
    parents: Option<Vec<u32>>,
    scratch: Vec<u32>,
}

impl TreeState {
    /// The one-edge tree with default options.
    pub fn init(spec: ModelSpec) -> Result<Self, Error> {
        Self::init_with(spec, TreeOptions::default())
    }

    /// The one-edge tree.
    pub fn init_with(spec: ModelSpec, options: TreeOptions) -> Result<Self, Error> {
        spec.validate()?;
        if options.kmax == 0 {
            return Err(Error::InvalidSpec("kmax must be at least 1"));
        }
        let cap = options.capacity.min(MAX_EDGES) as usize;
        let mut degrees = Vec::with_capacity(cap + 1);
        degrees.extend([1, 1]);
        let sampler = if spec.alpha == 1.0 {
            let mut list = EndpointList::with_capacity(cap);
            list.record_edge(0, 1);
            Sampler::Endpoints(list)
        } else {
            Sampler::Weighted(WeightIndex::from_degrees(spec.alpha, &degrees)?)
        };
        let parents = options.track_parents.then(|| {
            let mut p = Vec::with_capacity(cap + 1);
            p.extend([NO_PARENT, 0]);
            p
        });
        Ok(Self {
            spec,
            degrees,
            sampler,
            thresholds: ThresholdVector::initial(options.kmax),
            max_degree: 1,
            parents,
            scratch: Vec::new(),
        })
    }

    /// Model in use.
    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    /// Edge count `m`.
    pub fn edges(&self) -> u64 {
        self.thresholds.edges()
    }

    /// Vertex count, `m + 1`.
    pub fn vertex_count(&self) -> usize {
        self.degrees.len()
    }

    /// Degrees indexed by vertex id.
    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Attachment target per vertex, if tracked; the root holds [`NO_PARENT`].
    pub fn parents(&self) -> Option<&[u32]> {
        self.parents.as_deref()
    }

    /// Incrementally maintained `F`.
    pub fn thresholds(&self) -> &ThresholdVector {
        &self.thresholds
    }

    /// `F` recomputed from the degree sequence.
    pub fn compute_thresholds(&self, kmax: usize) -> ThresholdVector {
        ThresholdVector::from_degrees(&self.degrees, kmax)
    }

    /// Largest degree.
    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// Endpoint list when `alpha == 1`.
    pub fn endpoints(&self) -> Option<&EndpointList> {
        match &self.sampler {
            Sampler::Endpoints(list) => Some(list),
            Sampler::Weighted(_) => None,
        }
    }

    /// Weight index when `alpha != 1`.
    pub fn weight_index(&self) -> Option<&WeightIndex> {
        match &self.sampler {
            Sampler::Weighted(index) => Some(index),
            Sampler::Endpoints(_) => None,
        }
    }

    /// Statistics at the current edge count.
    pub fn snapshot(&self) -> Snapshot<'_> {
        Snapshot {
            edges: self.edges(),
            max_degree: self.max_degree,
            choices: self.spec.choices_at(self.edges()),
            thresholds: &self.thresholds,
        }
    }

    #[inline]
    fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> Result<u32, Error> {
        match &self.sampler {
            Sampler::Endpoints(list) => list.sample_endpoint(rng),
            Sampler::Weighted(index) => index.sample_weighted(rng),
        }
    }

    /// Adds one leaf.
    ///
    /// Draw order: the `d` candidates in sequence, then one tie-break draw
    /// `uniform_below(t)` over the `t >= 2` tied candidate positions, if any.
    pub fn step<R: RngCore + ?Sized>(&mut self, rng: &mut R) -> Result<Attachment, Error> {
        if self.edges() >= MAX_EDGES {
            return Err(Error::EdgeTarget {
                target: self.edges() + 1,
                current: self.edges(),
            });
        }
        let d = self.spec.choices_at(self.edges());
        let prefer_small = self.spec.rule == Rule::Min;
        let target = match d {
            1 => self.sample(rng)?,
            2 => {
                let a = self.sample(rng)?;
                let b = self.sample(rng)?;
                let (da, db) = (self.degrees[a as usize], self.degrees[b as usize]);
                if da == db {
                    if uniform_below(rng, 2) == 0 {
                        a
                    } else {
                        b
                    }
                } else if (da < db) == prefer_small {
                    a
                } else {
                    b
                }
            }
            _ => self.select_among(d, prefer_small, rng)?,
        };
        self.attach(target)
    }

    fn select_among<R: RngCore + ?Sized>(
        &mut self,
        d: u32,
        prefer_small: bool,
        rng: &mut R,
    ) -> Result<u32, Error> {
        let mut scratch = core::mem::take(&mut self.scratch);
        scratch.clear();
        for _ in 0..d {
            scratch.push(self.sample(rng)?);
        }
        let degree = |v: &u32| self.degrees[*v as usize];
        let best = if prefer_small {
            scratch.iter().map(degree).min()
        } else {
            scratch.iter().map(degree).max()
        }
        .unwrap_or(0);
        let tied = scratch.iter().filter(|v| degree(v) == best).count() as u64;
        let pick = if tied >= 2 { uniform_below(rng, tied) as usize } else { 0 };
        let target = scratch
            .iter()
            .copied()
            .filter(|v| degree(v) == best)
            .nth(pick)
            .unwrap_or(scratch[0]);
        self.scratch = scratch;
        Ok(target)
    }

    fn attach(&mut self, target: u32) -> Result<Attachment, Error> {
        let old_degree = self.degrees[target as usize];
        let new_degree = old_degree + 1;
        let leaf = self.degrees.len() as u32;
        self.degrees[target as usize] = new_degree;
        self.degrees.push(1);
        match &mut self.sampler {
            Sampler::Endpoints(list) => list.record_edge(leaf, target),
            Sampler::Weighted(index) => {
                index.update_weight(target, new_degree)?;
                index.push_vertex(1)?;
            }
        }
        if let Some(parents) = &mut self.parents {
            parents.push(target);
        }
        self.thresholds.update_on_attach(old_degree)?;
        self.max_degree = self.max_degree.max(new_degree);
        if self.spec.bounded_support() && self.max_degree as usize >= self.thresholds.kmax() {
            return Err(Error::KmaxExceeded {
                max_degree: self.max_degree,
                kmax: self.thresholds.kmax(),
            });
        }
        Ok(Attachment {
            target,
            old_degree,
            leaf,
        })
    }

    /// Steps until `m_target` edges, calling observers at every scheduled edge
    /// count in `[current, m_target]`.
    pub fn grow<R: RngCore + ?Sized>(
        &mut self,
        m_target: u64,
        rng: &mut R,
        observers: &mut [&mut dyn CheckpointObserver],
    ) -> Result<(), Error> {
        if m_target < self.edges() || m_target > MAX_EDGES {
            return Err(Error::EdgeTarget {
                target: m_target,
                current: self.edges(),
            });
        }
        let mut from = self.edges();
        loop {
            let stop = observers
                .iter()
                .filter_map(|o| o.next_checkpoint(from))
                .filter(|&c| c <= m_target)
                .min();
            let Some(stop) = stop else {
                while self.edges() < m_target {
                    self.step(rng)?;
                }
                return Ok(());
            };
            while self.edges() < stop {
                self.step(rng)?;
            }
            let snapshot = self.snapshot();
            for o in observers.iter_mut() {
                if o.next_checkpoint(stop) == Some(stop) {
                    o.observe(&snapshot);
                }
            }
            from = stop + 1;
        }
    }
}
