//! Joint, marginal, symmetrized and mixture densities of `η`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::law::SpectralLaw;
use crate::error::{Error, Result};
use crate::numerics::{psd_factorize, GaussianMixture, PsdFactor};

/// Largest `N` accepted by the unordered joint density (`8! = 40 320` terms).
pub const MAX_UNORDERED_N: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum MixturePart {
    Re,
    Im,
}

/// A factorized multivariate Gaussian, reusable across many evaluations.
#[derive(Debug, Clone)]
pub struct OrderedJpdf {
    mean: Vec<f64>,
    factor: PsdFactor,
    log_norm: f64,
}

impl OrderedJpdf {
    fn new(mean: Vec<f64>, factor: PsdFactor, index_map: &[usize], full_mean: &[f64]) -> Result<Self> {
        if !factor.is_full_rank() {
            return Err(match factor.singular_error_with_mean(&mean) {
                Error::SingularCovariance {
                    rank,
                    dim,
                    mut deterministic,
                } => {
                    for d in &mut deterministic {
                        d.index = index_map[d.index];
                        d.forced_value = full_mean[d.index];
                    }
                    Error::SingularCovariance {
                        rank,
                        dim,
                        deterministic,
                    }
                }
                other => other,
            });
        }
        let dim = mean.len() as f64;
        let log_norm = -0.5 * dim * libm::log(2.0 * PI) - 0.5 * factor.log_det();
        Ok(OrderedJpdf { mean, factor, log_norm })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn log_density(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.mean.len() {
            return Err(Error::DimensionMismatch {
                expected: self.mean.len(),
                found: x.len(),
            });
        }
        let d: Vec<f64> = x.iter().zip(&self.mean).map(|(a, b)| a - b).collect();
        Ok(self.log_norm - 0.5 * self.factor.mahalanobis_sq(&d)?)
    }

    pub fn density(&self, x: &[f64]) -> Result<f64> {
        self.log_density(x).map(libm::exp)
    }
}

/// Eigenvalue indices that are exactly real when `b ≡ 0`: `{0}` for odd
/// `N`, `{0, N/2}` for even `N`.
pub fn forced_real_indices(n: usize) -> Vec<usize> {
    if n % 2 == 0 {
        vec![0, n / 2]
    } else {
        vec![0]
    }
}

fn log_sum_exp(mut terms: Vec<f64>) -> f64 {
    // Sorting first makes the sum independent of the order terms arrive in.
    terms.sort_by(f64::total_cmp);
    let max = match terms.last() {
        Some(&m) if m.is_finite() => m,
        Some(&m) => return m,
        None => return f64::NEG_INFINITY,
    };
    let s: f64 = terms.iter().map(|t| libm::exp(t - max)).sum();
    max + libm::log(s)
}

impl SpectralLaw {
    /// Factorize `𝒯` once for repeated evaluation of the ordered density.
    pub fn ordered_jpdf(&self) -> Result<OrderedJpdf> {
        let factor = psd_factorize(self.cov())?;
        let identity: Vec<usize> = (0..self.nu().len()).collect();
        OrderedJpdf::new(self.nu().to_vec(), factor, &identity, self.nu())
    }

    pub fn log_jpdf_ordered(&self, eta: &[f64]) -> Result<f64> {
        self.ordered_jpdf()?.log_density(eta)
    }

    /// Joint density of all `2N` coordinates, eigenvalues indexed by root of
    /// unity.
    pub fn jpdf_ordered(&self, eta: &[f64]) -> Result<f64> {
        self.log_jpdf_ordered(eta).map(libm::exp)
    }

    /// Gaussian restricted to the coordinates in `indices` (0-based into `η`).
    pub fn marginal(&self, indices: &[usize]) -> Result<OrderedJpdf> {
        if indices.is_empty() {
            return Err(Error::EmptyInput);
        }
        let dim = self.nu().len();
        for (k, &i) in indices.iter().enumerate() {
            if i >= dim || indices[..k].contains(&i) {
                return Err(Error::InvalidParameter {
                    name: "indices",
                    index: Some(k),
                    reason: "indices must be distinct and below 2N",
                });
            }
        }
        let sub = self.cov().select(indices, indices);
        let mean: Vec<f64> = indices.iter().map(|&i| self.nu()[i]).collect();
        let factor = psd_factorize(&sub)?;
        OrderedJpdf::new(mean, factor, indices, self.nu())
    }

    pub fn log_marginal_joint(&self, indices: &[usize], values: &[f64]) -> Result<f64> {
        self.marginal(indices)?.log_density(values)
    }

    pub fn marginal_joint(&self, indices: &[usize], values: &[f64]) -> Result<f64> {
        self.log_marginal_joint(indices, values).map(libm::exp)
    }

    /// Joint density of the eigenvalues with their labels forgotten: the
    /// average of the ordered density over all `N!` relabelings of the
    /// `(Re, Im)` pairs.
    pub fn log_jpdf_unordered(&self, eta: &[f64]) -> Result<f64> {
        let n = self.n();
        if n > MAX_UNORDERED_N {
            return Err(Error::Capacity {
                what: "unordered joint density eigenvalue count",
                requested: n,
                limit: MAX_UNORDERED_N,
            });
        }
        let jpdf = self.ordered_jpdf()?;
        if eta.len() != 2 * n {
            return Err(Error::DimensionMismatch {
                expected: 2 * n,
                found: eta.len(),
            });
        }
        let mut terms = Vec::new();
        let mut permuted = vec![0.0; 2 * n];
        let mut push = |perm: &[usize], terms: &mut Vec<f64>| -> Result<()> {
            for (k, &p) in perm.iter().enumerate() {
                permuted[2 * k] = eta[2 * p];
                permuted[2 * k + 1] = eta[2 * p + 1];
            }
            terms.push(jpdf.log_density(&permuted)?);
            Ok(())
        };
        // Heap's algorithm, iterative form.
        let mut perm: Vec<usize> = (0..n).collect();
        let mut c = vec![0usize; n];
        push(&perm, &mut terms)?;
        let mut i = 1;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(c[i], i);
                }
                push(&perm, &mut terms)?;
                c[i] += 1;
                i = 1;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        let count = terms.len() as f64;
        Ok(log_sum_exp(terms) - libm::log(count))
    }

    pub fn jpdf_unordered(&self, eta: &[f64]) -> Result<f64> {
        self.log_jpdf_unordered(eta).map(libm::exp)
    }

    /// Eigenvalue indices entering the mixture marginal.
    pub fn mixture_components(&self, exclude_forced_real: bool) -> Result<Vec<usize>> {
        let n = self.n();
        if !exclude_forced_real {
            return Ok((0..n).collect());
        }
        let min = if n % 2 == 0 { 4 } else { 3 };
        if n < min {
            return Err(Error::InvalidParameter {
                name: "exclude_forced_real",
                index: None,
                reason: "exclusion needs N >= 3 (odd) or N >= 4 (even)",
            });
        }
        let forced = forced_real_indices(n);
        Ok((0..n).filter(|j| !forced.contains(j)).collect())
    }

    /// Density of the real or imaginary part of a uniformly chosen
    /// eigenvalue: an equal-weight Gaussian mixture over the kept indices.
    pub fn mixture_law(&self, part: MixturePart, exclude_forced_real: bool) -> Result<GaussianMixture> {
        let keep = self.mixture_components(exclude_forced_real)?;
        let offset = match part {
            MixturePart::Re => 0,
            MixturePart::Im => 1,
        };
        let tol = self.degeneracy_tolerance();
        let mut means = Vec::with_capacity(keep.len());
        let mut vars = Vec::with_capacity(keep.len());
        for &j in &keep {
            let k = 2 * j + offset;
            let var = self.cov()[(k, k)];
            if !(var > tol) {
                return Err(Error::SingularComponent { index: j });
            }
            means.push(self.nu()[k]);
            vars.push(var);
        }
        GaussianMixture::uniform(means, vars)
    }

    pub fn mixture_marginal(&self, part: MixturePart, x: f64, exclude_forced_real: bool) -> Result<f64> {
        Ok(self.mixture_law(part, exclude_forced_real)?.pdf(x))
    }
}
