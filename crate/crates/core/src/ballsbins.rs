//! Two-choice balls-and-bins and its coupling to the threshold chain.
//!
//! Both the level chain here and [`ThresholdVector::vector_chain_step`] pick
//! their level by inverse CDF from one shared [`UnitDraw`]:
//!
//! * bins: `L = max { l >= 0 : u < (N(l) / n)^2 }`, the load of the emptier of
//!   two uniform bins;
//! * tree: `D = max { d >= 1 : u < (F(d) / 2j)^2 }`, the degree of the smaller
//!   of two size-biased vertices.
//!
//! If `N(k) <= F(k)` for all `k >= 1` and `n >= 2j`, every threshold the bins
//! pass is also passed by the tree, so `L <= D` and the domination survives the
//! step. [`coupled_run`] checks this after every step.

use alloc::vec::Vec;

use rand_core::RngCore;

use crate::fstats::ThresholdVector;
use crate::rng::{trial_rng, uniform_below, UnitDraw};
use crate::{Error, DEFAULT_KMAX, MAX_EDGES};

/// Bin loads and level counts `N(k) = #{bins with load >= k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinsState {
    loads: Vec<u32>,
    levels: LevelCounts,
}

impl BinsState {
    /// `n` empty bins.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "need at least one bin");
        Self {
            loads: alloc::vec![0; n],
            levels: LevelCounts::new(n as u64),
        }
    }

    /// Places one ball in the emptier of two uniform bins.
    ///
    /// Draw order: two bin indices, then one fair coin only if their loads are
    /// equal. Returns the chosen bin's load before the placement.
    pub fn place_two_choice<R: RngCore + ?Sized>(&mut self, rng: &mut R) -> u32 {
        let n = self.loads.len() as u64;
        let a = uniform_below(rng, n) as usize;
        let b = uniform_below(rng, n) as usize;
        let (la, lb) = (self.loads[a], self.loads[b]);
        let bin = match la.cmp(&lb) {
            core::cmp::Ordering::Less => a,
            core::cmp::Ordering::Greater => b,
            core::cmp::Ordering::Equal => {
                if uniform_below(rng, 2) == 0 {
                    a
                } else {
                    b
                }
            }
        };
        let level = self.loads[bin];
        self.loads[bin] += 1;
        self.levels.raise(level);
        level
    }

    /// Loads per bin.
    pub fn loads(&self) -> &[u32] {
        &self.loads
    }

    /// Incrementally maintained level counts.
    pub fn levels(&self) -> &LevelCounts {
        &self.levels
    }

    /// Level counts recomputed from the loads.
    pub fn recompute_levels(&self) -> LevelCounts {
        let mut counts = LevelCounts::new(self.loads.len() as u64);
        for &load in &self.loads {
            for level in 0..load {
                counts.raise(level);
            }
        }
        counts
    }

    /// Largest load.
    pub fn max_load(&self) -> u32 {
        self.levels.max_level()
    }

    /// Balls placed.
    pub fn balls(&self) -> u64 {
        self.levels.balls
    }
}

/// `N(0..)` for `n` bins; `N(0) = n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LevelCounts {
    // counts[k] = N(k); trailing entry is nonzero
    counts: Vec<u64>,
    balls: u64,
}

impl LevelCounts {
    /// All bins empty.
    pub fn new(n: u64) -> Self {
        assert!(n >= 1, "need at least one bin");
        Self {
            counts: alloc::vec![n],
            balls: 0,
        }
    }

    /// `N(k)`, zero past the top level.
    #[inline]
    pub fn get(&self, k: usize) -> u64 {
        self.counts.get(k).copied().unwrap_or(0)
    }

    /// Bin count `n`.
    pub fn bins(&self) -> u64 {
        self.counts[0]
    }

    /// Balls placed.
    pub fn balls(&self) -> u64 {
        self.balls
    }

    /// `N(0..=max_level)`.
    pub fn as_slice(&self) -> &[u64] {
        &self.counts
    }

    /// Largest `k` with `N(k) > 0`, i.e. the maximum load.
    pub fn max_level(&self) -> u32 {
        (self.counts.len() - 1) as u32
    }

    /// A bin at load `level` gains a ball.
    #[inline]
    fn raise(&mut self, level: u32) {
        let k = level as usize + 1;
        if k == self.counts.len() {
            self.counts.push(0);
        }
        self.counts[k] += 1;
        self.balls += 1;
    }

    /// Load of the bin the two-choice rule would select under draw `u`.
    #[inline]
    pub fn chosen_level(&self, u: UnitDraw) -> u32 {
        let n = self.counts[0];
        let mut level = 0;
        while level + 1 < self.counts.len() && u.below_ratio_squared(self.counts[level + 1], n) {
            level += 1;
        }
        level as u32
    }

    /// One step of the level chain: `N(L + 1) += 1` for `L` from [`chosen_level`](Self::chosen_level).
    #[inline]
    pub fn level_chain_step(&mut self, u: UnitDraw) -> u32 {
        let level = self.chosen_level(u);
        self.raise(level);
        level
    }

    /// `N(0) = n`, non-increasing, and `sum_k (N(k) - N(k + 1)) * k = balls`.
    pub fn is_consistent(&self) -> bool {
        let monotone = self.counts.windows(2).all(|w| w[0] >= w[1]);
        let mass: u64 = (1..self.counts.len())
            .map(|k| (self.get(k) - self.get(k + 1)) * k as u64)
            .sum();
        let top_nonzero = self.counts.len() == 1 || self.counts.last() != Some(&0);
        monotone && mass == self.balls && top_nonzero
    }
}

/// Outcome of [`coupled_run`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingReport {
    /// Edges in the tree chain and balls in the bins chain.
    pub edges: u64,
    /// Bin count, `2 * edges`.
    pub bins: u64,
    /// Maximum load at the end.
    pub max_load: u32,
    /// Largest `k` with `F_m(k) > 0` at the end.
    pub max_degree: u32,
    /// Level comparisons made.
    pub comparisons: u64,
    /// Final level counts.
    pub levels: LevelCounts,
    /// Final threshold vector.
    pub thresholds: ThresholdVector,
}

/// Failure of [`coupled_run`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CouplingError {
    /// `N_j(k) > F_j(k)`; signals a bug in the construction.
    #[error("domination violated at j={j}, k={k}: N={n_level} > F={f_level}")]
    Violation {
        /// Step.
        j: u64,
        /// Level.
        k: usize,
        /// `N_j(k)`.
        n_level: u64,
        /// `F_j(k)`.
        f_level: u64,
        /// Full `N_j`.
        levels: LevelCounts,
        /// Full `F_j`.
        thresholds: ThresholdVector,
    },
    /// The tree chain reached `kmax`, so `F` above it is no longer known.
    #[error("tree chain reached kmax {0}")]
    Kmax(usize),
    /// `m` must be in `1..=MAX_EDGES`.
    #[error("edge count {0} out of range")]
    Edges(u64),
}

impl From<CouplingError> for Error {
    fn from(e: CouplingError) -> Self {
        match e {
            CouplingError::Kmax(kmax) => Error::KmaxExceeded {
                max_degree: kmax as u32,
                kmax,
            },
            CouplingError::Edges(m) => Error::EdgeTarget { target: m, current: 0 },
            CouplingError::Violation { j, k, .. } => Error::InconsistentDegree {
                degree: k as u32,
                edges: j,
            },
        }
    }
}

fn check_domination(
    j: u64,
    levels: &LevelCounts,
    f: &ThresholdVector,
) -> Result<u64, CouplingError> {
    let top = levels.as_slice().len().max(f.kmax() + 1);
    for k in 1..top {
        let (n_level, f_level) = (levels.get(k), f.get(k));
        if n_level > f_level {
            return Err(CouplingError::Violation {
                j,
                k,
                n_level,
                f_level,
                levels: levels.clone(),
                thresholds: f.clone(),
            });
        }
    }
    Ok(top as u64 - 1)
}

/// Runs the threshold chain and the level chain with `n = 2m` bins side by
/// side on one uniform stream, checking `N_j(k) <= F_j(k)` after every step.
///
/// The stream is [`trial_rng`]`(seed, 0)`. Draw `j` places ball `j`; draws
/// `2..=m` also move the tree from `j - 1` to `j` edges, starting from the
/// one-edge tree.
pub fn coupled_run(m: u64, seed: u64) -> Result<CouplingReport, CouplingError> {
    coupled_run_with(m, seed, DEFAULT_KMAX)
}

/// [`coupled_run`] with an explicit number of tracked thresholds.
pub fn coupled_run_with(m: u64, seed: u64, kmax: usize) -> Result<CouplingReport, CouplingError> {
    if m == 0 || m > MAX_EDGES {
        return Err(CouplingError::Edges(m));
    }
    let mut rng = trial_rng(seed, 0);
    let mut levels = LevelCounts::new(2 * m);
    let mut f = ThresholdVector::initial(kmax);
    levels.level_chain_step(UnitDraw::draw(&mut rng));
    let mut comparisons = check_domination(1, &levels, &f)?;
    for j in 2..=m {
        let u = UnitDraw::draw(&mut rng);
        let d = f.vector_chain_step(u);
        if d as usize + 1 >= kmax {
            return Err(CouplingError::Kmax(kmax));
        }
        levels.level_chain_step(u);
        comparisons += check_domination(j, &levels, &f)?;
    }
    Ok(CouplingReport {
        edges: m,
        bins: 2 * m,
        max_load: levels.max_level(),
        max_degree: f.top_level() as u32,
        comparisons,
        levels,
        thresholds: f,
    })
}
