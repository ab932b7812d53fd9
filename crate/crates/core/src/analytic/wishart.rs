//! Laws of the modulus-squared eigenvalues `|λ_j|²` (the spectrum of `HH†`).

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::law::SpectralLaw;
use crate::error::{DeterministicDirection, Error, Result};
use crate::matrix::Matrix;
use crate::numerics::{bessel_i0_scaled, psd_factorize, quad_adaptive, UpperLimit};

/// Below this ratio `t⁻ / (t⁺ + t⁻)` the one-sided (χ²₁-type) limit is used.
const DEGENERATE_RATIO: f64 = 1e-12;

const CDF_TOL: f64 = 1e-12;

/// Which eigenvalue's `|λ|²` law to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WishartIndex {
    /// Eigenvalue `j` (0-based root-of-unity index).
    Ordered(usize),
    /// A uniformly chosen eigenvalue: the average over all `j`.
    Unordered,
}

/// Mean and covariance of one eigenvalue's `(Re λ_j, Im λ_j)`, with the
/// eigenvalues `t⁺ ≥ t⁻ ≥ 0` of the covariance block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoByTwoLaw {
    pub index: usize,
    pub nu2: [f64; 2],
    pub t2: [[f64; 2]; 2],
    pub tplus: f64,
    pub tminus: f64,
}

impl TwoByTwoLaw {
    pub fn from_block(index: usize, nu2: [f64; 2], t2: [[f64; 2]; 2]) -> Self {
        let (a, d) = (t2[0][0], t2[1][1]);
        let off = t2[0][1] * t2[1][0];
        let trace = a + d;
        let det = a * d - off;
        let disc = ((a - d) * (a - d) + 4.0 * off).max(0.0);
        let tplus = (0.5 * (trace + libm::sqrt(disc))).max(0.0);
        let tminus = if tplus > 0.0 { (det / tplus).max(0.0) } else { 0.0 };
        TwoByTwoLaw {
            index,
            nu2,
            t2,
            tplus,
            tminus,
        }
    }

    pub fn trace(&self) -> f64 {
        self.t2[0][0] + self.t2[1][1]
    }

    fn mean_abs(&self) -> f64 {
        self.nu2[0].abs().max(self.nu2[1].abs())
    }

    fn has_zero_mean(&self) -> bool {
        self.mean_abs() <= 1e-12 * libm::sqrt(self.trace().max(0.0))
    }

    fn point_mass_error(&self) -> Error {
        Error::SingularCovariance {
            rank: 0,
            dim: 2,
            deterministic: vec![
                DeterministicDirection {
                    index: 2 * self.index,
                    forced_value: self.nu2[0],
                },
                DeterministicDirection {
                    index: 2 * self.index + 1,
                    forced_value: self.nu2[1],
                },
            ],
        }
    }

    /// Density of `w = |λ_j|²` for a zero-mean eigenvalue.
    pub fn wishart_density(&self, w: f64) -> Result<f64> {
        if !self.has_zero_mean() {
            return Err(Error::UnsupportedMean {
                max_abs: self.mean_abs(),
            });
        }
        if !(w >= 0.0) {
            return Err(Error::Domain {
                what: "modulus-squared eigenvalue",
                value: w,
            });
        }
        let (tp, tm) = (self.tplus, self.tminus);
        if !(tp > 0.0) {
            return Err(self.point_mass_error());
        }
        let decay = libm::exp(-w / (2.0 * tp));
        if tm <= DEGENERATE_RATIO * (tp + tm) {
            if w == 0.0 {
                return Ok(f64::INFINITY);
            }
            return Ok(decay / libm::sqrt(2.0 * PI * tp * w));
        }
        let beta = 0.25 * (1.0 / tm - 1.0 / tp);
        Ok(decay * bessel_i0_scaled(beta * w) / (2.0 * libm::sqrt(tp * tm)))
    }

    /// Laplace transform `E[exp(−s|λ_j|²)]` for a zero-mean eigenvalue.
    pub fn laplace(&self, s: f64) -> f64 {
        1.0 / libm::sqrt((1.0 + 2.0 * s * self.tplus) * (1.0 + 2.0 * s * self.tminus))
    }
}

impl SpectralLaw {
    /// The `(Re λ_j, Im λ_j)` block of the law.
    pub fn ttilde_eigs(&self, j: usize) -> Result<TwoByTwoLaw> {
        self.check_index(j)?;
        let (r, i) = (2 * j, 2 * j + 1);
        let t = self.cov();
        Ok(TwoByTwoLaw::from_block(
            j,
            [self.nu()[r], self.nu()[i]],
            [[t[(r, r)], t[(r, i)]], [t[(i, r)], t[(i, i)]]],
        ))
    }

    fn wishart_blocks(&self, index: WishartIndex) -> Result<Vec<TwoByTwoLaw>> {
        let blocks = match index {
            WishartIndex::Ordered(j) => vec![self.ttilde_eigs(j)?],
            WishartIndex::Unordered => (0..self.n()).map(|j| self.ttilde_eigs(j)).collect::<Result<_>>()?,
        };
        if blocks.iter().any(|b| !b.has_zero_mean()) {
            let max_abs = blocks.iter().map(TwoByTwoLaw::mean_abs).fold(0.0, f64::max);
            return Err(Error::UnsupportedMean { max_abs });
        }
        Ok(blocks)
    }

    /// Density of `|λ_j|²` (ordered) or of `|λ|²` for a uniformly chosen
    /// eigenvalue (unordered). Requires `ν = 0` on the eigenvalues involved.
    pub fn wishart_density(&self, index: WishartIndex, w: f64) -> Result<f64> {
        let blocks = self.wishart_blocks(index)?;
        let mut sum = 0.0;
        for b in &blocks {
            sum += b.wishart_density(w)?;
        }
        Ok(sum / blocks.len() as f64)
    }

    /// `P(|λ|² ≤ w)` by adaptive quadrature of the density.
    pub fn wishart_cdf(&self, index: WishartIndex, w: f64) -> Result<f64> {
        Ok(self.wishart_cdf_sorted(index, &[w])?[0])
    }

    /// CDF at each point of a nondecreasing sequence, integrating the
    /// density piecewise between consecutive points.
    pub fn wishart_cdf_sorted(&self, index: WishartIndex, sorted: &[f64]) -> Result<Vec<f64>> {
        let blocks = self.wishart_blocks(index)?;
        for b in &blocks {
            b.wishart_density(0.0)?;
        }
        let density = |w: f64| {
            let s: f64 = blocks.iter().map(|b| b.wishart_density(w).unwrap_or(0.0)).sum();
            s / blocks.len() as f64
        };
        let mut out = Vec::with_capacity(sorted.len());
        let mut acc = 0.0;
        let mut prev = 0.0;
        for (i, &w) in sorted.iter().enumerate() {
            if !(w >= prev) {
                if w < 0.0 && i == 0 {
                    return Err(Error::Domain {
                        what: "modulus-squared eigenvalue",
                        value: w,
                    });
                }
                return Err(Error::InvalidParameter {
                    name: "points",
                    index: Some(i),
                    reason: "points must be nondecreasing and nonnegative",
                });
            }
            if w > prev {
                acc += quad_adaptive(density, prev, UpperLimit::Finite(w), CDF_TOL)?.value;
                prev = w;
            }
            out.push(acc.clamp(0.0, 1.0));
        }
        Ok(out)
    }

    /// Total mass of the `|λ|²` density on `[0, ∞)`.
    pub fn wishart_mass(&self, index: WishartIndex) -> Result<f64> {
        let blocks = self.wishart_blocks(index)?;
        let mut total = 0.0;
        for b in &blocks {
            b.wishart_density(0.0)?;
            let q = quad_adaptive(
                |w| b.wishart_density(w).unwrap_or(0.0),
                0.0,
                UpperLimit::Infinity,
                1e-10,
            )?;
            total += q.value;
        }
        Ok(total / blocks.len() as f64)
    }

    /// Joint Laplace transform `E[exp(−Σ_j s_j |λ_j|²)]`, valid for any `ν`
    /// and any positive-semidefinite `𝒯`.
    pub fn wishart_laplace(&self, s: &[f64]) -> Result<f64> {
        let n = self.n();
        if s.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: s.len(),
            });
        }
        if let Some(&bad) = s.iter().find(|x| !(**x >= 0.0) || !x.is_finite()) {
            return Err(Error::Domain {
                what: "Laplace variable",
                value: bad,
            });
        }
        // With D = S^{1/2} and M = 𝟙 + 2D𝒯D (symmetric positive definite),
        // Ψ = exp(−(Dν)ᵀ M⁻¹ (Dν)) / √det M.
        let dim = 2 * n;
        let root: Vec<f64> = (0..dim).map(|k| libm::sqrt(s[k / 2])).collect();
        let t = self.cov();
        let mut m = Matrix::identity(dim);
        for a in 0..dim {
            for b in 0..dim {
                m[(a, b)] += 2.0 * root[a] * t[(a, b)] * root[b];
            }
        }
        let factor = psd_factorize(&m)?;
        let y: Vec<f64> = (0..dim).map(|k| root[k] * self.nu()[k]).collect();
        let q = factor.mahalanobis_sq(&y)?;
        Ok(libm::exp(-q - 0.5 * factor.log_det()))
    }
}
