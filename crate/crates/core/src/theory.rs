//! Closed-form recurrences and constants for the min-of-two process.
//!
//! * `rho(k, t) = (sqrt(4 + (k-1) k t^2) - 2) / (k - 1)` is the fixed point of
//!   the mean drift of `F(k) / j` given that `F(k-1) / j` sits at `t`.
//! * `alpha_1 = 2`, `alpha_k = rho(k, alpha_{k-1})`: the limiting profile of
//!   `F_j(k) / j`.
//! * `f(10) = 1/100`, `f(k+1) = f(k)^2 (k+1)`: a doubly exponentially
//!   decaying envelope, with `exp(-c1 2^j) <= f(10 + j) <= exp(-c2 2^j)`.
//! * `C`, `rho_m(m)`, `phi(m, k)` and `k_*(m)` built from those constants.
//!
//! The asymptotic constants are very conservative at desk scale: with
//! `C = 101` the defining inequality for `k_*` already holds at `k = 0` for
//! every `m` below about `10^16`, so [`k_star`] floors it at 1.
//!
//! `rho` is evaluated as `k t^2 / (2 + sqrt(4 + (k-1) k t^2))`, which is the
//! same quantity without the cancellation in `sqrt(4 + x) - 2` for small `x`.

use alloc::vec::Vec;

use crate::Error;

/// First index of the `f` envelope.
pub const K0: u32 = 10;

/// Empirical upper band offset: observed max degree stays within
/// `reference_curve(m) + R_EMP`.
pub const R_EMP: u32 = 8;

/// Empirical lower band offset: observed max degree stays above
/// `reference_curve(m) - BAND_BELOW`.
pub const BAND_BELOW: u32 = 3;

/// `rho(k, t)` for `k >= 2`, `t >= 0`.
pub fn rho(k: u32, t: f64) -> Result<f64, Error> {
    if k < 2 {
        return Err(Error::Domain("rho needs k >= 2"));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain("rho needs finite t >= 0"));
    }
    let k = f64::from(k);
    let kt2 = k * t * t;
    Ok(kt2 / (2.0 + libm::sqrt(4.0 + (k - 1.0) * kt2)))
}

/// `ln rho(k, e^ln_t)`, usable after `rho` itself underflows.
pub fn ln_rho(k: u32, ln_t: f64) -> Result<f64, Error> {
    if k < 2 {
        return Err(Error::Domain("rho needs k >= 2"));
    }
    let kf = f64::from(k);
    let x = libm::exp(libm::log((kf - 1.0) * kf) + 2.0 * ln_t);
    Ok(libm::log(kf) + 2.0 * ln_t - libm::log(2.0 + libm::sqrt(4.0 + x)))
}

/// `alpha_1..=alpha_K`. Entries underflow to zero beyond `K` of about 15.
pub fn alpha_seq(count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    let mut a = 2.0;
    for k in 1..=count {
        if k >= 2 {
            a = rho(k as u32, a).unwrap_or(0.0);
        }
        out.push(a);
    }
    out
}

/// `ln alpha_1..=ln alpha_K`, finite for every `K`.
pub fn ln_alpha_seq(count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    let mut ln_a = libm::log(2.0);
    for k in 1..=count {
        if k >= 2 {
            ln_a = ln_rho(k as u32, ln_a).unwrap_or(f64::NEG_INFINITY);
        }
        out.push(ln_a);
    }
    out
}

/// `f(K0..=K)` stored as natural logs.
#[derive(Debug, Clone, PartialEq)]
pub struct FSequence {
    ln: Vec<f64>,
}

impl FSequence {
    /// `ln f(k)`, if `K0 <= k <= K`.
    pub fn ln(&self, k: u32) -> Option<f64> {
        k.checked_sub(K0).and_then(|i| self.ln.get(i as usize)).copied()
    }

    /// `f(k)`; underflows to zero for large `k`.
    pub fn value(&self, k: u32) -> Option<f64> {
        self.ln(k).map(libm::exp)
    }

    /// All logs from `K0` upward.
    pub fn ln_values(&self) -> &[f64] {
        &self.ln
    }

    /// Largest stored index.
    pub fn last_index(&self) -> u32 {
        K0 + self.ln.len() as u32 - 1
    }
}

/// `f(K0)..=f(k_last)`.
pub fn f_seq(k_last: u32) -> Result<FSequence, Error> {
    if k_last < K0 {
        return Err(Error::Domain("f sequence starts at k = 10"));
    }
    let mut ln = Vec::with_capacity((k_last - K0 + 1) as usize);
    let mut cur = -libm::log(100.0);
    ln.push(cur);
    for k in K0..k_last {
        cur = 2.0 * cur + libm::log(f64::from(k + 1));
        ln.push(cur);
    }
    Ok(FSequence { ln })
}

/// Envelope constants pinned as the extremes of `g(j) / 2^j`, `g(j) = -ln f(K0 + j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeConstants {
    /// `max_j g(j) / 2^j`.
    pub c1: f64,
    /// `min_j g(j) / 2^j`.
    pub c2: f64,
    /// `g(j) / 2^j` never increases over the computed range. Each step
    /// subtracts `ln(K0 + j + 1) / 2^(j+1)`, which drops below the float
    /// resolution of the ratio past `j` of about 50, so strict decrease is only
    /// visible up to there.
    pub decreasing: bool,
    /// `g(j) / 2^j` for `j = 0..=J`.
    pub ratios: Vec<f64>,
}

impl EnvelopeConstants {
    /// Checks `exp(-c1 2^j) <= f(K0 + j) <= exp(-c2 2^j)` in log space for
    /// every `j` covered by both `self` and `f`, with relative slack `1e-12`
    /// for rounding between the two recurrences.
    pub fn sandwich_holds(&self, f: &FSequence) -> bool {
        const SLACK: f64 = 1e-12;
        f.ln.iter().zip(0..self.ratios.len()).all(|(&ln_f, j)| {
            let scale = libm::exp2(j as f64);
            let g = -ln_f;
            g >= self.c2 * scale * (1.0 - SLACK) && g <= self.c1 * scale * (1.0 + SLACK)
        })
    }
}

/// `c1` and `c2` over `j = 0..=J`, `J >= 10`.
pub fn derive_c1_c2(j_last: u32) -> Result<EnvelopeConstants, Error> {
    if j_last < 10 {
        return Err(Error::Domain("derive_c1_c2 needs J >= 10"));
    }
    // g(j+1) = 2 g(j) - ln(K0 + j + 1), so the ratio telescopes
    let mut ratios = Vec::with_capacity(j_last as usize + 1);
    let mut ratio = libm::log(100.0);
    ratios.push(ratio);
    for j in 0..j_last {
        ratio -= libm::log(f64::from(K0 + j + 1)) * libm::exp2(-f64::from(j + 1));
        ratios.push(ratio);
    }
    let c1 = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let c2 = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let decreasing = ratios.windows(2).all(|w| w[1] <= w[0]);
    Ok(EnvelopeConstants {
        c1,
        c2,
        decreasing,
        ratios,
    })
}

/// Smallest integer `C` with `ln C > max(c1, ln 4 + c1 2^-K0)`.
pub fn choose_c(c1: f64) -> Result<u64, Error> {
    if !c1.is_finite() {
        return Err(Error::Domain("c1 must be finite"));
    }
    let bound = c1.max(libm::log(4.0) + c1 * libm::exp2(-f64::from(K0)));
    let ok = |c: u64| libm::log(c as f64) > bound;
    let mut c = (libm::floor(libm::exp(bound)) as u64).max(2);
    while c > 2 && ok(c - 1) {
        c -= 1;
    }
    while !ok(c) {
        c += 1;
    }
    Ok(c)
}

/// `C` for the envelope pinned by [`derive_c1_c2`]; equals 101.
pub fn default_c() -> u64 {
    // c1 is attained at j = 0 for any J, so J = 10 suffices
    derive_c1_c2(10)
        .and_then(|e| choose_c(e.c1))
        .expect("constants are finite")
}

/// Smallest integer `k` with `2^(k+1) ln C >= (ln m) / 2`, without the floor.
pub fn k_star_raw(m: f64, c: u64) -> Result<i64, Error> {
    if !(m >= 2.0) || c < 2 {
        return Err(Error::Domain("k_star needs m >= 2 and C >= 2"));
    }
    let need = libm::log(m) / (2.0 * libm::log(c as f64));
    // smallest integer e = k + 1 with 2^e >= need
    let mut e = libm::ceil(libm::log2(need)) as i64;
    while libm::exp2((e - 1) as f64) >= need {
        e -= 1;
    }
    while libm::exp2(e as f64) < need {
        e += 1;
    }
    Ok(e - 1)
}

/// [`k_star_raw`] floored at 1.
pub fn k_star(m: f64, c: u64) -> Result<u32, Error> {
    Ok(k_star_raw(m, c)?.max(1) as u32)
}

/// `ceil((ln ln m)^(1/3))`, for `m >= 16`.
pub fn rho_m(m: f64) -> Result<u64, Error> {
    if !(m >= 16.0) {
        return Err(Error::Domain("rho_m needs m >= 16"));
    }
    Ok(libm::ceil(libm::cbrt(libm::log(libm::log(m)))) as u64)
}

/// `ln phi(m, k) = ln rho_m(m) + 2^(k+1) ln C`.
pub fn phi_log(m: f64, k: u32, c: u64) -> Result<f64, Error> {
    let r = rho_m(m)?;
    Ok(libm::log(r as f64) + libm::exp2(f64::from(k) + 1.0) * libm::log(c as f64))
}

/// `ln ln m / ln 2`, for `m >= 16`.
pub fn reference_curve(m: f64) -> Result<f64, Error> {
    reference_curve_d(m, 2)
}

/// `ln ln m / ln d` for the `d`-choice variant, `d >= 2`, `m >= 16`.
pub fn reference_curve_d(m: f64, d: u32) -> Result<f64, Error> {
    if !(m >= 16.0) {
        return Err(Error::Domain("reference curve needs m >= 16"));
    }
    if d < 2 {
        return Err(Error::Domain("reference curve needs d >= 2"));
    }
    Ok(libm::log(libm::log(m)) / libm::log(f64::from(d)))
}

/// Everything above evaluated for one `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceTable {
    /// Edge count the per-`m` entries refer to.
    pub m: f64,
    /// `alpha_1..=alpha_kmax`.
    pub alpha: Vec<f64>,
    /// `ln alpha_1..=ln alpha_kmax`.
    pub ln_alpha: Vec<f64>,
    /// `ln f(K0..=K0 + 60)`.
    pub ln_f: Vec<f64>,
    /// Envelope constants over `J = 60`.
    pub envelope: EnvelopeConstants,
    /// `C`.
    pub c: u64,
    /// `k_*(m)` before the floor.
    pub k_star_raw: i64,
    /// `k_*(m)` floored at 1.
    pub k_star: u32,
    /// `rho_m(m)`, when `m >= 16`.
    pub rho_m: Option<u64>,
    /// `ln phi(m, k)` for `k = K0..=k_star.max(K0)`, when `m >= 16`.
    pub phi_log: Vec<(u32, f64)>,
    /// `ln ln m / ln 2`, when `m >= 16`.
    pub reference_curve: Option<f64>,
    /// Empirical upper band offset.
    pub r_emp: u32,
    /// Empirical lower band offset.
    pub band_below: u32,
}

impl RecurrenceTable {
    /// Builds the table for edge count `m >= 2`.
    pub fn build(m: f64, kmax: usize) -> Result<Self, Error> {
        const J: u32 = 60;
        let envelope = derive_c1_c2(J)?;
        let c = choose_c(envelope.c1)?;
        let ks = k_star(m, c)?;
        let phi = if m >= 16.0 {
            (K0..=ks.max(K0))
                .map(|k| phi_log(m, k, c).map(|v| (k, v)))
                .collect::<Result<Vec<_>, _>>()?
        } else {
            Vec::new()
        };
        Ok(Self {
            m,
            alpha: alpha_seq(kmax),
            ln_alpha: ln_alpha_seq(kmax),
            ln_f: f_seq(K0 + J)?.ln,
            c,
            k_star_raw: k_star_raw(m, c)?,
            k_star: ks,
            rho_m: rho_m(m).ok(),
            phi_log: phi,
            reference_curve: reference_curve(m).ok(),
            r_emp: R_EMP,
            band_below: BAND_BELOW,
            envelope,
        })
    }
}
