//! Laplace mechanism, per-location count perturbation and the capacity
//! margin that absorbs aggregated noise.

use rand::distr::Open01;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Privacy budget and total failure probability of a private solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrivacyParams {
    epsilon: f64,
    alpha: f64,
}

impl PrivacyParams {
    pub fn new(epsilon: f64, alpha: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::param(format!(
                "epsilon must be finite and > 0, got {epsilon}"
            )));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::param(format!(
                "alpha must lie in (0, 1), got {alpha}"
            )));
        }
        Ok(PrivacyParams { epsilon, alpha })
    }

    #[inline]
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Laplace scale for a sensitivity-1 count query.
    #[inline]
    pub fn noise_scale(&self) -> f64 {
        1.0 / self.epsilon
    }

    /// `(2/ε)·ln(2n/α)`, the per-unit-sqrt margin coefficient.
    pub fn margin_coefficient(&self, n: usize) -> f64 {
        2.0 / self.epsilon * (2.0 * n as f64 / self.alpha).ln()
    }
}

/// Perturbed client counts as received by the server.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoisyCounts {
    pub values: Vec<f64>,
    pub epsilon_used: f64,
}

impl NoisyCounts {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// One draw from Laplace(0, scale) by inverting the CDF.
///
/// `u` is uniform on the open interval (-1/2, 1/2) and
/// `x = -scale * sign(u) * ln(1 - 2|u|)`. Excluding the endpoint keeps every
/// draw finite.
pub fn laplace_sample<R: Rng + ?Sized>(scale: f64, rng: &mut R) -> Result<f64> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::param(format!(
            "Laplace scale must be finite and > 0, got {scale}"
        )));
    }
    Ok(laplace_unchecked(scale, rng))
}

#[inline]
pub(crate) fn laplace_unchecked<R: Rng + ?Sized>(scale: f64, rng: &mut R) -> f64 {
    let open: f64 = rng.sample(Open01);
    let u = open - 0.5;
    -scale * u.signum() * (1.0 - 2.0 * u.abs()).ln()
}

/// Local side of the mechanism: every location adds independent
/// Laplace(1/ε) noise to its own count, once, in location order.
pub fn perturb_counts<R: Rng + ?Sized>(
    counts: &[u64],
    params: &PrivacyParams,
    rng: &mut R,
) -> NoisyCounts {
    let scale = params.noise_scale();
    NoisyCounts {
        values: counts
            .iter()
            .map(|&b| b as f64 + laplace_unchecked(scale, rng))
            .collect(),
        epsilon_used: params.epsilon,
    }
}

/// Extra capacity `(2/ε)·√k·ln(2n/α)` for a facility serving `k` locations
/// out of `n`.
///
/// This is the sum-of-Laplace tail threshold for `k` draws at scale 1/ε with
/// per-facility failure budget `β = kα/n`: `ln(2n/α) = ln(2k/β)`.
pub fn margin(connected: usize, params: &PrivacyParams, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::param("n must be at least 1"));
    }
    if connected > n {
        return Err(Error::param(format!(
            "connected set size {connected} exceeds n = {n}"
        )));
    }
    Ok(margin_unchecked(connected, params, n))
}

#[inline]
pub(crate) fn margin_unchecked(connected: usize, params: &PrivacyParams, n: usize) -> f64 {
    params.margin_coefficient(n) * (connected as f64).sqrt()
}

/// Threshold `t = 2·scale·√k·ln(2k/β)` above which the sum of `k`
/// independent Laplace(scale) draws exceeds `t` in absolute value with
/// probability at most `β`.
pub fn laplace_sum_tail_threshold(k: usize, scale: f64, beta: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::param("k must be at least 1"));
    }
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::param(format!(
            "scale must be finite and > 0, got {scale}"
        )));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::param(format!("beta must lie in (0, 1), got {beta}")));
    }
    Ok(2.0 * scale * (k as f64).sqrt() * (2.0 * k as f64 / beta).ln())
}

/// Monte Carlo estimate of `Pr[|X_1 + ... + X_k| > t]` for i.i.d.
/// Laplace(scale) draws, at the threshold of [`laplace_sum_tail_threshold`].
pub fn laplace_sum_tail_check<R: Rng + ?Sized>(
    k: usize,
    scale: f64,
    beta: f64,
    trials: usize,
    rng: &mut R,
) -> Result<f64> {
    let t = laplace_sum_tail_threshold(k, scale, beta)?;
    if trials == 0 {
        return Err(Error::param("trials must be at least 1"));
    }
    let mut exceed = 0usize;
    for _ in 0..trials {
        let sum: f64 = (0..k).map(|_| laplace_unchecked(scale, rng)).sum();
        if sum.abs() > t {
            exceed += 1;
        }
    }
    Ok(exceed as f64 / trials as f64)
}
