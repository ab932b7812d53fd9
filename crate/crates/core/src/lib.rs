//! Exact spectral statistics of the random circulant model `H = A + iB`.
//!
//! `A` and `B` are real circulant matrices whose first-column entries are
//! independent, non-identically distributed Gaussians. Every eigenvalue of
//! `H` is a fixed linear combination of those entries, so the vector of real
//! and imaginary parts of all eigenvalues is itself multivariate Gaussian.
//! This crate computes that law exactly, evaluates its joint, marginal and
//! symmetrized (unordered) densities, the Wigner-like and Wishart-like
//! derived laws, and samples matrix and random-circulant-graph ensembles for
//! comparison.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! the parallel drivers live in the `circ-spectra` companion crate.
//!
//! Indices are 0-based throughout the API: eigenvalue `j` has its real part
//! at `eta[2 * j]` and its imaginary part at `eta[2 * j + 1]`.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analytic;
mod error;
pub mod graphs;
pub mod matrix;
pub mod model;
pub mod numerics;
pub mod sampler;
pub mod stream;

pub use analytic::{spectral_law, LawMethod, MixturePart, SpectralLaw, TwoByTwoLaw, WishartIndex};
pub use error::{DeterministicDirection, Error, Result};
pub use graphs::{graph_spectrum, surrogate_params, GraphKind, GraphSampler, GraphSpec, TauScenario};

pub use model::{
    build_dense, build_transform_q, build_trig_tables, eigenvalues_closed_form, fourier_matrix, sample_entries,
    EtaSample, FirstColumn, ModelParams, TransformQ, TrigTables,
};
pub use sampler::{
    empirical_moments, sample_ensemble, EnsembleConfig, EnsembleSampler, Histogram, Moments, Normalization, Observable,
    SampleMatrix,
};
