//! Pinned random primitives.
//!
//! Every draw in the crate goes through [`uniform_below`] or
//! [`UnitDraw::draw`], both of which consume whole `u64` words from the
//! underlying generator. Experiments use [`trial_rng`]: ChaCha8 seeded with
//! `seed_from_u64(seed)` and switched to stream `trial`, which gives each
//! trial an independent, platform-independent sequence.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Generator used for experiment trials.
pub type TrialRng = ChaCha8Rng;

/// The stream for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Uniform integer in `0..n` by Lemire's multiply-and-reject method.
///
/// Consumes one `u64` except on the rare rejection path.
///
/// # Panics
///
/// Panics if `n == 0`.
#[inline]
pub fn uniform_below<R: RngCore + ?Sized>(rng: &mut R, n: u64) -> u64 {
    assert!(n > 0, "uniform_below(0)");
    let mut wide = u128::from(rng.next_u64()) * u128::from(n);
    let mut low = wide as u64;
    if low < n {
        let threshold = n.wrapping_neg() % n;
        while low < threshold {
            wide = u128::from(rng.next_u64()) * u128::from(n);
            low = wide as u64;
        }
    }
    (wide >> 64) as u64
}

const UNIT_BITS: u32 = 53;
const UNIT_SCALE: f64 = (1u64 << UNIT_BITS) as f64;

/// A uniform variate on `[0, 1)` held exactly as `bits / 2^53`.
///
/// The level chains compare draws against squared ratios of integers; holding
/// the draw as an integer makes that comparison exact, so the selected level is
/// a deterministic function of the draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnitDraw(u64);

impl UnitDraw {
    /// Draws from the top 53 bits of one `u64`.
    #[inline]
    pub fn draw<R: RngCore + ?Sized>(rng: &mut R) -> Self {
        Self(rng.next_u64() >> (64 - UNIT_BITS))
    }

    /// Rounds `u` down onto the `2^-53` grid. `None` outside `[0, 1)`.
    pub fn from_f64(u: f64) -> Option<Self> {
        if !(0.0..1.0).contains(&u) {
            return None;
        }
        // exact: scaling by a power of two
        Some(Self(libm::floor(u * UNIT_SCALE) as u64))
    }

    /// From raw bits; `None` if `bits >= 2^53`.
    pub fn from_bits(bits: u64) -> Option<Self> {
        (bits < 1 << UNIT_BITS).then_some(Self(bits))
    }

    /// Raw numerator over `2^53`.
    pub fn bits(self) -> u64 {
        self.0
    }

    /// The draw as a float; exact.
    pub fn as_f64(self) -> f64 {
        self.0 as f64 / UNIT_SCALE
    }

    /// Exact test of `self < (num / den)^2`.
    ///
    /// # Panics
    ///
    /// Panics if `den == 0` or `den >= 2^37`.
    #[inline]
    pub fn below_ratio_squared(self, num: u64, den: u64) -> bool {
        assert!(den > 0 && den < 1 << 37, "denominator out of range");
        let den = u128::from(den);
        let num = u128::from(num.min(den as u64));
        u128::from(self.0) * den * den < (num * num) << UNIT_BITS
    }
}
