//! Normal distribution helpers and one-dimensional Gaussian mixtures.

use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};

/// `Φ(z)`, accurate in both tails (erfc is used on the far side).
pub fn std_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / SQRT_2)
}

pub fn std_normal_pdf(z: f64) -> f64 {
    libm::exp(-0.5 * z * z) / libm::sqrt(2.0 * PI)
}

/// `Σ w_i N(m_i, s_i²)` with nonnegative weights summing to one and
/// strictly positive variances.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMixture {
    weights: Vec<f64>,
    means: Vec<f64>,
    variances: Vec<f64>,
    sds: Vec<f64>,
}

impl GaussianMixture {
    pub fn new(weights: Vec<f64>, means: Vec<f64>, variances: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyInput);
        }
        for len in [means.len(), variances.len()] {
            if len != weights.len() {
                return Err(Error::DimensionMismatch {
                    expected: weights.len(),
                    found: len,
                });
            }
        }
        if let Some(i) = weights.iter().position(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "weights",
                index: Some(i),
                reason: "weights must be finite and nonnegative",
            });
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter {
                name: "weights",
                index: None,
                reason: "weights must sum to 1",
            });
        }
        if let Some(i) = means.iter().position(|m| !m.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "means",
                index: Some(i),
                reason: "not finite",
            });
        }
        if let Some(i) = variances.iter().position(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::SingularComponent { index: i });
        }
        let sds = variances.iter().map(|&v| libm::sqrt(v)).collect();
        Ok(GaussianMixture {
            weights,
            means,
            variances,
            sds,
        })
    }

    /// Equal weights `1/k`.
    pub fn uniform(means: Vec<f64>, variances: Vec<f64>) -> Result<Self> {
        let k = means.len();
        let weights = alloc::vec![1.0 / k as f64; k];
        Self::new(weights, means, variances)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn variances(&self) -> &[f64] {
        &self.variances
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.weights
            .iter()
            .zip(&self.means)
            .zip(&self.sds)
            .map(|((w, m), s)| w * std_normal_pdf((x - m) / s) / s)
            .sum()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let c: f64 = self
            .weights
            .iter()
            .zip(&self.means)
            .zip(&self.sds)
            .map(|((w, m), s)| w * std_normal_cdf((x - m) / s))
            .sum();
        c.clamp(0.0, 1.0)
    }

    pub fn mean(&self) -> f64 {
        self.weights.iter().zip(&self.means).map(|(w, m)| w * m).sum()
    }

    /// Smallest and largest `mean ∓ k·sd` over all components.
    pub fn support_hint(&self, k: f64) -> (f64, f64) {
        let lo = self
            .means
            .iter()
            .zip(&self.sds)
            .map(|(m, s)| m - k * s)
            .fold(f64::INFINITY, f64::min);
        let hi = self
            .means
            .iter()
            .zip(&self.sds)
            .map(|(m, s)| m + k * s)
            .fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }
}
