//! Degree-biased vertex sampling.
//!
//! [`EndpointList`] stores one entry per edge endpoint, so a uniform position
//! yields vertex `v` with probability `deg(v) / 2m` in constant time.
//! [`WeightIndex`] handles `deg^alpha` weights with a Fenwick tree and samples
//! in `O(log n)`.

use alloc::vec::Vec;

use rand_core::RngCore;

use crate::rng::{uniform_below, UnitDraw};
use crate::Error;

/// Every edge endpoint, in insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EndpointList {
    entries: Vec<u32>,
}

impl EndpointList {
    /// An empty list.
    pub fn new() -> Self {
        Self::default()
    }

    /// An empty list with room for `edges` edges.
    pub fn with_capacity(edges: usize) -> Self {
        Self {
            entries: Vec::with_capacity(2 * edges),
        }
    }

    /// Appends both endpoints of the edge `(u, v)`.
    #[inline]
    pub fn record_edge(&mut self, u: u32, v: u32) {
        self.entries.push(u);
        self.entries.push(v);
    }

    /// Vertex at a uniformly random position.
    #[inline]
    pub fn sample_endpoint<R: RngCore + ?Sized>(&self, rng: &mut R) -> Result<u32, Error> {
        if self.entries.is_empty() {
            return Err(Error::EmptySampler("endpoint list"));
        }
        let pos = uniform_below(rng, self.entries.len() as u64) as usize;
        Ok(self.entries[pos])
    }

    /// Number of endpoints, `2m`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// True when no edge has been recorded.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The raw entries.
    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// Occurrences of each vertex id below `vertices`. Linear scan, for audits.
    pub fn multiplicities(&self, vertices: usize) -> Vec<u32> {
        let mut counts = alloc::vec![0u32; vertices];
        for &v in &self.entries {
            if let Some(c) = counts.get_mut(v as usize) {
                *c += 1;
            }
        }
        counts
    }
}

/// Largest `alpha * log2(degree)` accepted by [`WeightIndex`].
pub const MAX_WEIGHT_LOG2: f64 = 1000.0;

/// Per-vertex weights `deg(v)^alpha` with prefix-sum search.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightIndex {
    alpha: f64,
    weights: Vec<f64>,
    // 1-based Fenwick tree; tree[0] unused
    tree: Vec<f64>,
    total: f64,
}

impl WeightIndex {
    /// An empty index with exponent `alpha >= 0`.
    pub fn new(alpha: f64) -> Result<Self, Error> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidSpec("alpha must be finite and nonnegative"));
        }
        Ok(Self {
            alpha,
            weights: Vec::new(),
            tree: alloc::vec![0.0],
            total: 0.0,
        })
    }

    /// Builds an index over the given degrees.
    pub fn from_degrees(alpha: f64, degrees: &[u32]) -> Result<Self, Error> {
        let mut index = Self::new(alpha)?;
        for &d in degrees {
            index.push_vertex(d)?;
        }
        Ok(index)
    }

    /// Exponent in use.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `degree^alpha`, guarded against leaving the floating-point range.
    pub fn weight_of(&self, degree: u32) -> Result<f64, Error> {
        if self.alpha == 1.0 {
            return Ok(f64::from(degree));
        }
        if self.alpha == 0.0 || degree <= 1 {
            return Ok(if degree == 0 { 0.0 } else { 1.0 });
        }
        if self.alpha * libm::log2(f64::from(degree)) >= MAX_WEIGHT_LOG2 {
            return Err(Error::WeightOverflow {
                degree,
                alpha: self.alpha,
            });
        }
        Ok(libm::pow(f64::from(degree), self.alpha))
    }

    /// Appends a new vertex of the given degree; its id is the previous length.
    pub fn push_vertex(&mut self, degree: u32) -> Result<u32, Error> {
        let w = self.weight_of(degree)?;
        let id = self.weights.len() as u32;
        self.weights.push(w);
        let i = self.weights.len();
        let lowbit = i & i.wrapping_neg();
        let mut node = w;
        let mut step = 1;
        while step < lowbit {
            node += self.tree[i - step];
            step <<= 1;
        }
        self.tree.push(node);
        self.total += w;
        Ok(id)
    }

    /// Sets vertex `v`'s weight to `new_degree^alpha`.
    pub fn update_weight(&mut self, v: u32, new_degree: u32) -> Result<(), Error> {
        let idx = v as usize;
        if idx >= self.weights.len() {
            return Err(Error::UnknownVertex(v));
        }
        let w = self.weight_of(new_degree)?;
        let delta = w - self.weights[idx];
        self.weights[idx] = w;
        self.total += delta;
        let mut i = idx + 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
        Ok(())
    }

    /// Vertex `v` with probability `w_v / W`.
    pub fn sample_weighted<R: RngCore + ?Sized>(&self, rng: &mut R) -> Result<u32, Error> {
        if !(self.total > 0.0) {
            return Err(Error::EmptySampler("weight index"));
        }
        let target = UnitDraw::draw(rng).as_f64() * self.total;
        Ok(self.search(target))
    }

    // largest prefix with sum <= target
    fn search(&self, target: f64) -> u32 {
        let n = self.weights.len();
        let mut pos = 0usize;
        let mut rem = target;
        let mut step = if n == 0 { 0 } else { 1usize << (usize::BITS - 1 - n.leading_zeros()) };
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] <= rem {
                pos = next;
                rem -= self.tree[next];
            }
            step >>= 1;
        }
        if pos >= n {
            // accumulated rounding pushed the target past the end
            pos = self.weights.iter().rposition(|&w| w > 0.0).unwrap_or(0);
        }
        pos as u32
    }

    /// Running total `W`.
    pub fn total(&self) -> f64 {
        self.total
    }

    /// Weight of vertex `v`.
    pub fn weight(&self, v: u32) -> Option<f64> {
        self.weights.get(v as usize).copied()
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    /// True when no vertex has been added.
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}
