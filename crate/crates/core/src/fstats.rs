//! Threshold weights `F_j(k)` and the vector-level chain they follow.
//!
//! `F_j(k)` is the total degree carried by vertices of degree at least `k`
//! after `j` edges. Only `k = 1..=kmax` is stored. Updates are exact for every
//! stored level even when a degree exceeds `kmax`; what is lost above `kmax` is
//! the identity of the largest degree, which callers guard separately.

use alloc::vec::Vec;

use crate::rng::UnitDraw;
use crate::Error;

/// `F(1..=kmax)` together with the edge count `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ThresholdVector {
    // values[k - 1] = F(k)
    values: Vec<u64>,
    edges: u64,
}

impl ThresholdVector {
    /// The one-edge tree: `F = [2, 0, ...]`, `j = 1`.
    ///
    /// # Panics
    ///
    /// Panics if `kmax == 0`.
    pub fn initial(kmax: usize) -> Self {
        assert!(kmax >= 1, "kmax must be at least 1");
        let mut values = alloc::vec![0; kmax];
        values[0] = 2;
        Self { values, edges: 1 }
    }

    /// Evaluates the defining sum over a degree sequence.
    ///
    /// `j` is taken as half the degree sum.
    pub fn from_degrees(degrees: &[u32], kmax: usize) -> Self {
        assert!(kmax >= 1, "kmax must be at least 1");
        // mass[k - 1] = degree mass of vertices with degree exactly k, capped at kmax
        let mut mass = alloc::vec![0u64; kmax];
        let mut sum = 0u64;
        for &d in degrees {
            sum += u64::from(d);
            if d >= 1 {
                mass[(d as usize).min(kmax) - 1] += u64::from(d);
            }
        }
        let mut acc = 0;
        for slot in mass.iter_mut().rev() {
            acc += *slot;
            *slot = acc;
        }
        Self {
            values: mass,
            edges: sum / 2,
        }
    }

    /// From explicit values `F(1..)`; checks `F(1) = 2j` and monotonicity.
    pub fn from_values(values: Vec<u64>, edges: u64) -> Result<Self, Error> {
        let v = Self { values, edges };
        if v.values.is_empty() || !v.is_consistent() {
            return Err(Error::InconsistentDegree { degree: 0, edges });
        }
        Ok(v)
    }

    /// `F(k)`; zero for `k == 0` is not defined, zero above `kmax` is not tracked.
    #[inline]
    pub fn get(&self, k: usize) -> u64 {
        match k {
            0 => 2 * self.edges,
            _ => self.values.get(k - 1).copied().unwrap_or(0),
        }
    }

    /// `F(1..=kmax)` as a slice.
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Edge count `j`.
    pub fn edges(&self) -> u64 {
        self.edges
    }

    /// Number of tracked thresholds.
    pub fn kmax(&self) -> usize {
        self.values.len()
    }

    /// Largest `k <= kmax` with `F(k) > 0`.
    pub fn top_level(&self) -> usize {
        self.values.iter().rposition(|&f| f > 0).map_or(0, |i| i + 1)
    }

    /// `F(1) = 2j` and `F` non-increasing.
    pub fn is_consistent(&self) -> bool {
        self.values.first() == Some(&(2 * self.edges))
            && self.values.windows(2).all(|w| w[0] >= w[1])
    }

    /// Applies one attachment to a vertex whose degree was `old_degree`.
    ///
    /// `F(1)` gains 2 (the new leaf and the chosen vertex), `F(k)` gains 1 for
    /// `2 <= k <= old_degree`, and `F(old_degree + 1)` gains `old_degree + 1`.
    pub fn update_on_attach(&mut self, old_degree: u32) -> Result<(), Error> {
        let d = old_degree as usize;
        let kmax = self.values.len();
        let present = d >= 1
            && if d < kmax {
                self.values[d - 1] - self.values[d] >= d as u64
            } else {
                self.values[kmax - 1] > 0
            };
        if !present {
            return Err(Error::InconsistentDegree {
                degree: old_degree,
                edges: self.edges,
            });
        }
        self.apply(d);
        Ok(())
    }

    #[inline]
    fn apply(&mut self, d: usize) {
        let kmax = self.values.len();
        self.values[0] += 2;
        for f in &mut self.values[1..d.min(kmax)] {
            *f += 1;
        }
        if d < kmax {
            self.values[d] += d as u64 + 1;
        }
        self.edges += 1;
    }

    /// Degree chosen by a min-of-two size-biased draw, by inverse CDF.
    ///
    /// Returns `max { d >= 1 : u < (F(d) / 2j)^2 }`, capped at `kmax` (a
    /// returned `kmax` means "at least `kmax`").
    #[inline]
    pub fn chosen_degree(&self, u: UnitDraw) -> u32 {
        let den = 2 * self.edges;
        let mut d = 1;
        while d < self.values.len() && u.below_ratio_squared(self.values[d], den) {
            d += 1;
        }
        d as u32
    }

    /// One step of the vector chain driven by `u`; returns the chosen degree
    /// (capped at `kmax` as in [`chosen_degree`](Self::chosen_degree)).
    #[inline]
    pub fn vector_chain_step(&mut self, u: UnitDraw) -> u32 {
        let d = self.chosen_degree(u);
        self.apply(d as usize);
        d
    }

    /// `F(k) / j` for every tracked `k`.
    pub fn empirical_alpha(&self) -> Vec<f64> {
        let j = self.edges as f64;
        self.values.iter().map(|&f| f as f64 / j).collect()
    }
}

/// Least-squares slope of `ln(F_j(k) / 2j)` against `ln j`.
///
/// Points with `F = 0` carry no log and are skipped.
pub fn decay_trace(history: &[(u64, u64)]) -> Result<f64, Error> {
    let points: Vec<(f64, f64)> = history
        .iter()
        .filter(|&&(j, f)| j > 0 && f > 0)
        .map(|&(j, f)| {
            let x = libm::log(j as f64);
            (x, libm::log(f as f64) - libm::log(2.0 * j as f64))
        })
        .collect();
    if points.len() < 3 {
        return Err(Error::TooFewPoints(points.len()));
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (sxy, sxx) = points.iter().fold((0.0, 0.0), |(sxy, sxx), &(x, y)| {
        (sxy + (x - mean_x) * (y - mean_y), sxx + (x - mean_x) * (x - mean_x))
    });
    if sxx == 0.0 {
        return Err(Error::TooFewPoints(1));
    }
    Ok(sxy / sxx)
}
