//! Monte Carlo ensembles of eigenvalue observables.

mod histogram;
mod moments;

use alloc::vec;
use alloc::vec::Vec;

pub use histogram::{auto_edges, Histogram, Normalization, MAX_AUTO_BINS};
pub use moments::{empirical_moments, Moments};

use crate::error::{Error, Result};
use crate::model::{eigenvalues_into, sample_entries, EtaSample, ModelParams, TrigTables};
use crate::stream::substream;

/// Default cap on the number of stored sample values (160 MB of `f64`).
pub const DEFAULT_MAX_VALUES: usize = 20_000_000;

/// Per-matrix quantity recorded by an ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Observable {
    /// `η`: `(Re λ_j, Im λ_j)` for every `j`.
    #[default]
    EtaFull,
    /// `Re λ_j`, the spectrum of `(H + H†)/2`.
    WignerR,
    /// `Im λ_j`, the spectrum of `(H − H†)/2i`.
    WignerJ,
    /// `|λ_j|²`, the spectrum of `HH†`.
    WishartW,
}

impl Observable {
    /// Values per eigenvalue.
    pub fn values_per_eigenvalue(self) -> usize {
        match self {
            Observable::EtaFull => 2,
            _ => 1,
        }
    }

    /// Transform an `η` vector into this observable, written to `out`.
    pub fn extract(self, eta: &[f64], out: &mut [f64]) {
        let n = eta.len() / 2;
        match self {
            Observable::EtaFull => out.copy_from_slice(eta),
            Observable::WignerR => (0..n).for_each(|j| out[j] = eta[2 * j]),
            Observable::WignerJ => (0..n).for_each(|j| out[j] = eta[2 * j + 1]),
            Observable::WishartW => {
                (0..n).for_each(|j| out[j] = eta[2 * j] * eta[2 * j] + eta[2 * j + 1] * eta[2 * j + 1])
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnsembleConfig {
    /// Number of matrix realizations.
    pub m: usize,
    pub observable: Observable,
    /// Keep one row per matrix; otherwise pool one row per eigenvalue.
    pub ordered: bool,
    pub seed: u64,
    /// Largest number of stored values before a capacity error.
    pub max_values: usize,
}

impl EnsembleConfig {
    pub fn new(m: usize, observable: Observable, ordered: bool, seed: u64) -> Self {
        EnsembleConfig {
            m,
            observable,
            ordered,
            seed,
            max_values: DEFAULT_MAX_VALUES,
        }
    }
}

/// Row-major table of samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl SampleMatrix {
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(SampleMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.cols.max(1))
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        self.iter_rows().map(|r| r[c]).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }
}

/// Reproducible generator of per-matrix observables. Realization `i` is
/// drawn from its own substream of `seed`, so any subset of realizations
/// can be produced in any order or in parallel.
#[derive(Debug, Clone)]
pub struct EnsembleSampler {
    params: ModelParams,
    tables: TrigTables,
    observable: Observable,
    seed: u64,
}

impl EnsembleSampler {
    pub fn new(params: &ModelParams, observable: Observable, seed: u64) -> Self {
        EnsembleSampler {
            tables: TrigTables::new(params.n()).expect("ModelParams has n >= 1"),
            params: params.clone(),
            observable,
            seed,
        }
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }

    pub fn observable(&self) -> Observable {
        self.observable
    }

    /// Length of one matrix's observable vector.
    pub fn width(&self) -> usize {
        self.n() * self.observable.values_per_eigenvalue()
    }

    pub fn eta(&self, index: u64) -> EtaSample {
        let mut rng = substream(self.seed, index);
        let fc = sample_entries(&self.params, &mut rng);
        let mut eta = vec![0.0; 2 * self.n()];
        eigenvalues_into(fc.a(), fc.b(), &self.tables, &mut eta);
        EtaSample::from_vec(eta).expect("even length")
    }

    /// Write realization `index` into `out` (length [`width`](Self::width)).
    pub fn realization(&self, index: u64, out: &mut [f64]) {
        let eta = self.eta(index);
        self.observable.extract(eta.as_slice(), out);
    }

    /// Fill `out` with consecutive realizations starting at `first`.
    pub fn fill(&self, first: u64, out: &mut [f64]) {
        let w = self.width();
        for (k, chunk) in out.chunks_exact_mut(w).enumerate() {
            self.realization(first + k as u64, chunk);
        }
    }

    /// Streaming moments of realizations `first..first + count`, for use
    /// when the full sample table would exceed the memory budget.
    pub fn moments(&self, first: u64, count: u64) -> Moments {
        let mut acc = Moments::new(self.width());
        let mut buf = vec![0.0; self.width()];
        for i in first..first + count {
            self.realization(i, &mut buf);
            acc.push(&buf);
        }
        acc
    }
}

/// Shape of the sample table for `config`: `(rows, cols)`.
pub fn ensemble_shape(n: usize, config: &EnsembleConfig) -> (usize, usize) {
    let k = config.observable.values_per_eigenvalue();
    if config.ordered {
        (config.m, n * k)
    } else {
        (config.m * n, k)
    }
}

/// Reject empty ensembles and tables larger than `config.max_values`.
pub fn check_capacity(n: usize, config: &EnsembleConfig) -> Result<()> {
    if config.m == 0 {
        return Err(Error::InvalidParameter {
            name: "m",
            index: None,
            reason: "ensemble size must be at least 1",
        });
    }
    let values = config.m.saturating_mul(n * config.observable.values_per_eigenvalue());
    if values > config.max_values {
        return Err(Error::Capacity {
            what: "stored sample values",
            requested: values,
            limit: config.max_values,
        });
    }
    Ok(())
}

/// Draw `config.m` matrices and record the observable. Ordered output has
/// one row per matrix; unordered output pools one row per eigenvalue, with
/// the `N` rows of each matrix kept together in index order.
pub fn sample_ensemble(params: &ModelParams, config: &EnsembleConfig) -> Result<SampleMatrix> {
    check_capacity(params.n(), config)?;
    let sampler = EnsembleSampler::new(params, config.observable, config.seed);
    let (rows, cols) = ensemble_shape(params.n(), config);
    let mut data = vec![0.0; rows * cols];
    sampler.fill(0, &mut data);
    SampleMatrix::from_row_major(rows, cols, data)
}
