use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Bin-count cap for automatic (Freedman–Diaconis) binning.
pub const MAX_AUTO_BINS: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Normalization {
    Counts,
    #[default]
    Pdf,
}

/// One- or two-dimensional histogram. Bins are `[lo, hi)` except the last
/// bin on each axis, which is closed. Samples outside the edges (or NaN)
/// are tallied in `overflow`, never dropped.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Histogram {
    edges: Vec<Vec<f64>>,
    counts: Vec<u64>,
    total: u64,
    overflow: u64,
    normalization: Normalization,
}

fn check_edges(edges: &[f64]) -> Result<()> {
    if edges.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            found: edges.len(),
        });
    }
    if let Some(i) = edges
        .windows(2)
        .position(|w| !(w[0] < w[1]) || !w[1].is_finite() || !w[0].is_finite())
    {
        return Err(Error::InvalidParameter {
            name: "edges",
            index: Some(i + 1),
            reason: "edges must be finite and strictly increasing",
        });
    }
    Ok(())
}

fn locate(edges: &[f64], x: f64) -> Option<usize> {
    let last = edges.len() - 1;
    if !(x >= edges[0] && x <= edges[last]) {
        return None;
    }
    if x == edges[last] {
        return Some(last - 1);
    }
    Some(edges.partition_point(|&e| e <= x) - 1)
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = libm::floor(pos) as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Freedman–Diaconis edges for `samples`: width `2·IQR·n^{-1/3}`, at most
/// [`MAX_AUTO_BINS`] bins, spanning the finite sample range.
pub fn auto_edges(samples: &[f64]) -> Result<Vec<f64>> {
    let mut sorted: Vec<f64> = samples.iter().copied().filter(|x| x.is_finite()).collect();
    if sorted.is_empty() {
        return Err(Error::EmptyInput);
    }
    sorted.sort_by(f64::total_cmp);
    let (lo, hi) = (sorted[0], sorted[sorted.len() - 1]);
    if lo == hi {
        let pad = if lo == 0.0 { 0.5 } else { 0.5 * lo.abs() };
        return Ok(vec![lo - pad, hi + pad]);
    }
    let iqr = quantile(&sorted, 0.75) - quantile(&sorted, 0.25);
    let width = 2.0 * iqr / libm::cbrt(sorted.len() as f64);
    let bins = if width > 0.0 {
        (libm::ceil((hi - lo) / width) as usize).clamp(1, MAX_AUTO_BINS)
    } else {
        1
    };
    let step = (hi - lo) / bins as f64;
    let mut edges: Vec<f64> = (0..bins).map(|i| lo + step * i as f64).collect();
    edges.push(hi);
    Ok(edges)
}

impl Histogram {
    pub fn new_1d(edges: Vec<f64>) -> Result<Self> {
        check_edges(&edges)?;
        let bins = edges.len() - 1;
        Ok(Histogram {
            edges: vec![edges],
            counts: vec![0; bins],
            total: 0,
            overflow: 0,
            normalization: Normalization::default(),
        })
    }

    pub fn new_2d(x_edges: Vec<f64>, y_edges: Vec<f64>) -> Result<Self> {
        check_edges(&x_edges)?;
        check_edges(&y_edges)?;
        let bins = (x_edges.len() - 1) * (y_edges.len() - 1);
        Ok(Histogram {
            edges: vec![x_edges, y_edges],
            counts: vec![0; bins],
            total: 0,
            overflow: 0,
            normalization: Normalization::default(),
        })
    }

    /// Histogram of `samples` over explicit `edges`.
    pub fn from_samples(samples: &[f64], edges: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut h = Self::new_1d(edges)?;
        samples.iter().for_each(|&x| h.add(x));
        Ok(h)
    }

    /// Histogram of `samples` with Freedman–Diaconis edges.
    pub fn from_samples_auto(samples: &[f64]) -> Result<Self> {
        Self::from_samples(samples, auto_edges(samples)?)
    }

    /// Histogram of `(x, y)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)], x_edges: Vec<f64>, y_edges: Vec<f64>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut h = Self::new_2d(x_edges, y_edges)?;
        pairs.iter().for_each(|&(x, y)| h.add_2d(x, y));
        Ok(h)
    }

    pub fn from_pairs_auto(pairs: &[(f64, f64)]) -> Result<Self> {
        let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        Self::from_pairs(pairs, auto_edges(&xs)?, auto_edges(&ys)?)
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn add(&mut self, x: f64) {
        assert_eq!(self.dims(), 1, "add on a 2-D histogram");
        match locate(&self.edges[0], x) {
            Some(i) => {
                self.counts[i] += 1;
                self.total += 1;
            }
            None => self.overflow += 1,
        }
    }

    pub fn add_2d(&mut self, x: f64, y: f64) {
        assert_eq!(self.dims(), 2, "add_2d on a 1-D histogram");
        match (locate(&self.edges[0], x), locate(&self.edges[1], y)) {
            (Some(i), Some(j)) => {
                let ny = self.edges[1].len() - 1;
                self.counts[i * ny + j] += 1;
                self.total += 1;
            }
            _ => self.overflow += 1,
        }
    }

    /// Add the counts of a histogram with identical edges.
    pub fn merge(&mut self, other: &Histogram) -> Result<()> {
        if self.edges != other.edges {
            return Err(Error::InvalidParameter {
                name: "edges",
                index: None,
                reason: "histograms must share edges to merge",
            });
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total += other.total;
        self.overflow += other.overflow;
        Ok(())
    }

    pub fn dims(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self, axis: usize) -> &[f64] {
        &self.edges[axis]
    }

    /// Bin counts; row-major over `(x, y)` for 2-D.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// In-range sample count (equals the sum of `counts`).
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn overflow(&self) -> u64 {
        self.overflow
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn centers(&self, axis: usize) -> Vec<f64> {
        self.edges[axis].windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    pub fn bin_area(&self, bin: usize) -> f64 {
        let widths = |axis: usize, i: usize| self.edges[axis][i + 1] - self.edges[axis][i];
        match self.dims() {
            1 => widths(0, bin),
            _ => {
                let ny = self.edges[1].len() - 1;
                widths(0, bin / ny) * widths(1, bin % ny)
            }
        }
    }

    /// `count / (total · area)`: integrates to one over the in-range mass.
    pub fn density(&self) -> Vec<f64> {
        let total = self.total.max(1) as f64;
        (0..self.counts.len())
            .map(|b| self.counts[b] as f64 / (total * self.bin_area(b)))
            .collect()
    }

    /// Bin values in the histogram's normalization mode.
    pub fn values(&self) -> Vec<f64> {
        match self.normalization {
            Normalization::Counts => self.counts.iter().map(|&c| c as f64).collect(),
            Normalization::Pdf => self.density(),
        }
    }
}
