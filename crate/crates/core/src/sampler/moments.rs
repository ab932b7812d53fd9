use alloc::vec;
use alloc::vec::Vec;

use super::SampleMatrix;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Single-pass mean and co-moment accumulator (Welford updates, Chan
/// merges). Merging partial states in a fixed order gives the same result
/// no matter how the work was split.
#[derive(Debug, Clone, PartialEq)]
pub struct Moments {
    count: u64,
    mean: Vec<f64>,
    /// Upper triangle of `Σ (x − mean)(x − mean)ᵀ`, row-major.
    comoment: Vec<f64>,
}

impl Moments {
    pub fn new(dim: usize) -> Self {
        Moments {
            count: 0,
            mean: vec![0.0; dim],
            comoment: vec![0.0; dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn push(&mut self, x: &[f64]) {
        let d = self.dim();
        assert_eq!(x.len(), d, "sample length must match accumulator dimension");
        self.count += 1;
        let inv = 1.0 / self.count as f64;
        let delta: Vec<f64> = x.iter().zip(&self.mean).map(|(a, m)| a - m).collect();
        for (m, dl) in self.mean.iter_mut().zip(&delta) {
            *m += dl * inv;
        }
        for i in 0..d {
            let after_i = x[i] - self.mean[i];
            let row = &mut self.comoment[i * d..(i + 1) * d];
            for j in i..d {
                row[j] += after_i * delta[j];
            }
        }
    }

    pub fn merge(&mut self, other: &Moments) {
        assert_eq!(self.dim(), other.dim(), "merging accumulators of different dimension");
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = other.clone();
            return;
        }
        let d = self.dim();
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        let delta: Vec<f64> = other.mean.iter().zip(&self.mean).map(|(b, a)| b - a).collect();
        let w = na * nb / n;
        for i in 0..d {
            for j in i..d {
                self.comoment[i * d + j] += other.comoment[i * d + j] + delta[i] * delta[j] * w;
            }
        }
        for (m, dl) in self.mean.iter_mut().zip(&delta) {
            *m += dl * nb / n;
        }
        self.count += other.count;
    }

    /// Unbiased covariance (divisor `count − 1`).
    pub fn covariance(&self) -> Result<Matrix> {
        if self.count < 2 {
            return Err(Error::InsufficientData {
                needed: 2,
                found: self.count as usize,
            });
        }
        let d = self.dim();
        let div = (self.count - 1) as f64;
        let mut c = Matrix::zeros(d, d);
        for i in 0..d {
            for j in i..d {
                let v = self.comoment[i * d + j] / div;
                c[(i, j)] = v;
                c[(j, i)] = v;
            }
        }
        Ok(c)
    }
}

/// Column means and unbiased covariance of a sample table.
pub fn empirical_moments(samples: &SampleMatrix) -> Result<(Vec<f64>, Matrix)> {
    let mut m = Moments::new(samples.cols());
    for row in samples.iter_rows() {
        m.push(row);
    }
    let cov = m.covariance()?;
    Ok((m.mean, cov))
}
