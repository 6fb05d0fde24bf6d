//! Limited-choice preferential attachment trees.
//!
//! A tree grows one leaf at a time. Each step draws `d` candidate vertices
//! independently with probability proportional to `deg^alpha`, and the new
//! leaf attaches to the candidate selected by a [`Rule`]: the smallest degree
//! (min-choice), the largest degree (max-choice) or the single candidate of
//! classic preferential attachment. Ties are broken uniformly at random.
//!
//! Alongside the tree this crate tracks the threshold weights
//! `F_j(k) = sum_v deg(v) * 1{deg(v) >= k}` ([`ThresholdVector`]), runs the
//! vector-level Markov chain those weights follow, couples it to two-choice
//! balls-and-bins ([`ballsbins`]), and evaluates the recurrences and constants
//! that describe the limiting degree profile ([`theory`]).
//!
//! The crate is `no_std` and only needs `alloc`. Randomness comes from any
//! [`rand_core::RngCore`]; [`rng::trial_rng`] pins the generator used for
//! reproducible experiments.

#![no_std]
#![deny(missing_docs)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod ballsbins;
mod error;
pub mod fstats;
pub mod model;
pub mod rng;
pub mod sampler;
pub mod theory;

pub use crate::error::Error;
pub use crate::fstats::ThresholdVector;
pub use crate::model::{Attachment, ChoiceCount, ModelSpec, Rule, TreeOptions, TreeState};
pub use crate::rng::{trial_rng, TrialRng, UnitDraw};

/// Largest edge count representable with 32-bit vertex ids.
pub const MAX_EDGES: u64 = (1 << 31) - 2;

/// Default number of tracked degree thresholds.
pub const DEFAULT_KMAX: usize = 64;
