//! Multi-threaded ensemble drivers.
//!
//! Work is cut into fixed blocks of [`BLOCK`] realizations. Each
//! realization draws from its own substream and partial accumulators are
//! merged in block order, so results do not depend on the thread count.

use circ_spectra_core::graphs::GraphSampler;
use circ_spectra_core::sampler::{check_capacity, ensemble_shape};
use circ_spectra_core::{
    EnsembleConfig, EnsembleSampler, FirstColumn, GraphSpec, Histogram, ModelParams, Moments, Observable, SampleMatrix,
};
use rayon::prelude::*;

use crate::error::{CliError, Result};

/// Realizations per work unit.
pub const BLOCK: usize = 512;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "CIRC_SPECTRA_THREADS";

/// Worker pool sized by `CIRC_SPECTRA_THREADS` (all cores when unset).
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => n,
            _ => {
                return Err(CliError::config(format!(
                    "{THREADS_ENV} must be a positive integer, got {s:?}"
                )))
            }
        },
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::config(e.to_string()))
}

fn blocks(m: usize) -> impl IndexedParallelIterator<Item = (u64, u64)> {
    (0..m.div_ceil(BLOCK)).into_par_iter().map(move |b| {
        let first = b * BLOCK;
        (first as u64, (BLOCK.min(m - first)) as u64)
    })
}

/// Parallel equivalent of [`circ_spectra_core::sample_ensemble`]; the
/// output is bit-identical.
pub fn sample_ensemble(params: &ModelParams, config: &EnsembleConfig) -> circ_spectra_core::Result<SampleMatrix> {
    check_capacity(params.n(), config)?;
    let sampler = EnsembleSampler::new(params, config.observable, config.seed);
    let (rows, cols) = ensemble_shape(params.n(), config);
    let mut data = vec![0.0; rows * cols];
    data.par_chunks_mut(BLOCK * sampler.width())
        .enumerate()
        .for_each(|(b, chunk)| sampler.fill((b * BLOCK) as u64, chunk));
    SampleMatrix::from_row_major(rows, cols, data)
}

/// Streaming mean and covariance of `m` realizations; memory use does
/// not grow with `m`.
pub fn ensemble_moments(params: &ModelParams, observable: Observable, seed: u64, m: usize) -> Moments {
    let sampler = EnsembleSampler::new(params, observable, seed);
    let parts: Vec<Moments> = blocks(m).map(|(first, count)| sampler.moments(first, count)).collect();
    let mut acc = Moments::new(sampler.width());
    parts.iter().for_each(|p| acc.merge(p));
    acc
}

/// Streaming histogram of pooled per-eigenvalue values. A 1-D `template`
/// bins the observable (the real part for `EtaFull`); a 2-D template bins
/// `(Re λ, Im λ)` and needs `EtaFull`.
pub fn ensemble_histogram(
    params: &ModelParams,
    observable: Observable,
    seed: u64,
    m: usize,
    template: &Histogram,
) -> Histogram {
    let sampler = EnsembleSampler::new(params, observable, seed);
    let k = observable.values_per_eigenvalue();
    let parts: Vec<Histogram> = blocks(m)
        .map(|(first, count)| {
            let mut h = template.clone();
            let mut buf = vec![0.0; sampler.width()];
            for i in first..first + count {
                sampler.realization(i, &mut buf);
                for v in buf.chunks_exact(k) {
                    match template.dims() {
                        1 => h.add(v[0]),
                        _ => h.add_2d(v[0], v[1]),
                    }
                }
            }
            h
        })
        .collect();
    let mut acc = template.clone();
    for p in &parts {
        acc.merge(p).expect("blocks share edges");
    }
    acc
}

/// Parallel equivalent of [`circ_spectra_core::graph_spectrum`].
pub fn graph_spectrum(spec: &GraphSpec, m: usize, seed: u64) -> Vec<(f64, f64)> {
    let sampler = GraphSampler::new(spec, seed);
    let n = spec.n();
    let mut eta = vec![0.0; 2 * n * m];
    eta.par_chunks_mut(BLOCK * 2 * n)
        .enumerate()
        .for_each(|(b, chunk)| sampler.fill((b * BLOCK) as u64, chunk));
    eta.chunks_exact(2).map(|p| (p[0], p[1])).collect()
}

pub fn graph_columns(spec: &GraphSpec, m: usize, seed: u64) -> Vec<FirstColumn> {
    let sampler = GraphSampler::new(spec, seed);
    (0..m as u64).into_par_iter().map(|i| sampler.first_column(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ModelParams {
        ModelParams::new(
            vec![1.0, -2.0, 0.5],
            vec![0.0, 3.0, 1.0],
            vec![1.0, 0.5, 2.0],
            vec![0.3, 0.0, 1.0],
        )
        .unwrap()
    }

    #[test]
    fn matches_serial_sampler() {
        let p = params();
        for (obs, ordered) in [(Observable::EtaFull, true), (Observable::WishartW, false)] {
            let config = EnsembleConfig::new(1300, obs, ordered, 9);
            let a = sample_ensemble(&p, &config).unwrap();
            let b = circ_spectra_core::sample_ensemble(&p, &config).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn independent_of_thread_count() {
        let p = params();
        let run = |threads| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| ensemble_moments(&p, Observable::EtaFull, 3, 2000))
        };
        let one = run(1);
        assert_eq!(one, run(4));
        assert_eq!(one.count(), 2000);
    }

    #[test]
    fn streaming_histogram_matches_stored_samples() {
        let p = params();
        let config = EnsembleConfig::new(700, Observable::WignerR, false, 5);
        let samples = sample_ensemble(&p, &config).unwrap();
        let edges: Vec<f64> = (0..=40).map(|i| -10.0 + 0.5 * i as f64).collect();
        let direct = Histogram::from_samples(samples.as_slice(), edges.clone()).unwrap();
        let template = Histogram::new_1d(edges).unwrap();
        let streamed = ensemble_histogram(&p, Observable::WignerR, 5, 700, &template);
        assert_eq!(direct, streamed);
    }

    #[test]
    fn graph_spectrum_matches_serial() {
        let spec = GraphSpec::double_directed(12, 0.3, 0.6).unwrap();
        assert_eq!(
            graph_spectrum(&spec, 1100, 4),
            circ_spectra_core::graph_spectrum(&spec, 1100, 4).unwrap()
        );
        assert_eq!(
            graph_columns(&spec, 3, 4)[2],
            GraphSampler::new(&spec, 4).first_column(2)
        );
    }
}
