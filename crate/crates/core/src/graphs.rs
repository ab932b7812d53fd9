//! Random circulant graphs and their Gaussian surrogate parameters.
//!
//! Three families are supported: directed graphs (`a_j ∈ {0, 1}`),
//! undirected graphs (mirrored `a_j = a_{N−j}`, giving a symmetric
//! adjacency matrix) and double-edged directed graphs with a second edge
//! type carried in the imaginary part (`h_j ∈ {0, 1, i, 1+i}`). Self-loops
//! are excluded, so `h_0 = 0`.
//!
//! For undirected graphs with even `N`, the middle entry `a_{N/2}` is its
//! own mirror and is drawn once; the surrogate mapping still assigns it
//! the doubled variance of the other entries. This is an approximation.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{eigenvalues_into, FirstColumn, ModelParams, TrigTables};
use crate::stream::substream;

/// Default `ε` of the epsilon scenario.
pub const DEFAULT_EPSILON: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum GraphKind {
    Directed,
    Undirected,
    DoubleDirected,
}

/// How surrogate variances that are exactly zero for `b` are treated.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum TauScenario {
    /// Keep `τ_j² = 0`; the law is singular along the forced-real
    /// directions.
    #[default]
    ExactZero,
    /// Replace every zero `τ_j²` by `ε²`.
    Epsilon(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GraphSpec {
    n: usize,
    kind: GraphKind,
    p1: f64,
    p2: Option<f64>,
    tau_scenario: TauScenario,
}

fn check_probability(name: &'static str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter {
            name,
            index: None,
            reason: "probability must lie in [0, 1]",
        });
    }
    Ok(())
}

impl GraphSpec {
    pub fn new(n: usize, kind: GraphKind, p1: f64, p2: Option<f64>, tau_scenario: TauScenario) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension { n });
        }
        check_probability("p1", p1)?;
        match (kind, p2) {
            (GraphKind::DoubleDirected, Some(p)) => check_probability("p2", p)?,
            (GraphKind::DoubleDirected, None) => {
                return Err(Error::InvalidParameter {
                    name: "p2",
                    index: None,
                    reason: "double-edged graphs need a second edge probability",
                })
            }
            (_, Some(_)) => {
                return Err(Error::InvalidParameter {
                    name: "p2",
                    index: None,
                    reason: "only double-edged graphs take a second edge probability",
                })
            }
            (_, None) => {}
        }
        if let TauScenario::Epsilon(eps) = tau_scenario {
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "epsilon",
                    index: None,
                    reason: "epsilon must be positive and finite",
                });
            }
        }
        Ok(GraphSpec {
            n,
            kind,
            p1,
            p2,
            tau_scenario,
        })
    }

    pub fn directed(n: usize, p: f64) -> Result<Self> {
        Self::new(n, GraphKind::Directed, p, None, TauScenario::ExactZero)
    }

    pub fn undirected(n: usize, p: f64) -> Result<Self> {
        Self::new(n, GraphKind::Undirected, p, None, TauScenario::ExactZero)
    }

    pub fn double_directed(n: usize, p1: f64, p2: f64) -> Result<Self> {
        Self::new(n, GraphKind::DoubleDirected, p1, Some(p2), TauScenario::ExactZero)
    }

    pub fn with_tau_scenario(self, tau_scenario: TauScenario) -> Result<Self> {
        Self::new(self.n, self.kind, self.p1, self.p2, tau_scenario)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> Option<f64> {
        self.p2
    }

    pub fn tau_scenario(&self) -> TauScenario {
        self.tau_scenario
    }
}

/// First column of a random circulant adjacency matrix.
pub fn sample_circulant_graph<R: Rng + ?Sized>(spec: &GraphSpec, rng: &mut R) -> FirstColumn {
    let n = spec.n;
    let mut a = vec![0.0; n];
    let mut b = vec![0.0; n];
    match spec.kind {
        GraphKind::Directed => {
            for x in a.iter_mut().skip(1) {
                *x = f64::from(u8::from(rng.random_bool(spec.p1)));
            }
        }
        GraphKind::Undirected => {
            for r in 1..=n / 2 {
                let x = f64::from(u8::from(rng.random_bool(spec.p1)));
                a[r] = x;
                a[n - r] = x;
            }
        }
        GraphKind::DoubleDirected => {
            let p2 = spec.p2.unwrap_or(0.0);
            for x in a.iter_mut().skip(1) {
                *x = f64::from(u8::from(rng.random_bool(spec.p1)));
            }
            for x in b.iter_mut().skip(1) {
                *x = f64::from(u8::from(rng.random_bool(p2)));
            }
        }
    }
    FirstColumn::new(a, b).expect("equal lengths")
}

/// Gaussian entry parameters matching the Bernoulli entries' means and
/// variances.
pub fn surrogate_params(spec: &GraphSpec) -> ModelParams {
    let n = spec.n;
    let bern = |p: f64| p * (1.0 - p);
    let mut u = vec![spec.p1; n];
    let mut sigma2 = vec![bern(spec.p1); n];
    let mut v = vec![0.0; n];
    let mut tau2 = vec![0.0; n];
    match spec.kind {
        GraphKind::Directed => {}
        GraphKind::Undirected => sigma2.iter_mut().for_each(|s| *s *= 2.0),
        GraphKind::DoubleDirected => {
            let p2 = spec.p2.unwrap_or(0.0);
            v.iter_mut().for_each(|x| *x = p2);
            tau2.iter_mut().for_each(|x| *x = bern(p2));
        }
    }
    u[0] = 0.0;
    sigma2[0] = 0.0;
    v[0] = 0.0;
    tau2[0] = 0.0;
    if let TauScenario::Epsilon(eps) = spec.tau_scenario {
        for t in tau2.iter_mut().filter(|t| **t == 0.0) {
            *t = eps * eps;
        }
    }
    ModelParams::new(u, v, sigma2, tau2).expect("surrogate parameters are valid")
}

/// Reproducible graph ensemble; graph `i` uses substream `i` of `seed`.
#[derive(Debug, Clone)]
pub struct GraphSampler {
    spec: GraphSpec,
    tables: TrigTables,
    seed: u64,
}

impl GraphSampler {
    pub fn new(spec: &GraphSpec, seed: u64) -> Self {
        GraphSampler {
            spec: *spec,
            tables: TrigTables::new(spec.n).expect("GraphSpec has n >= 1"),
            seed,
        }
    }

    pub fn first_column(&self, index: u64) -> FirstColumn {
        sample_circulant_graph(&self.spec, &mut substream(self.seed, index))
    }

    /// Eigenvalue coordinates `η` of graph `index` into `out` (length `2N`).
    pub fn spectrum_into(&self, index: u64, out: &mut [f64]) {
        let fc = self.first_column(index);
        eigenvalues_into(fc.a(), fc.b(), &self.tables, out);
    }

    /// `η` for graphs `first..first + out.len() / 2N`.
    pub fn fill(&self, first: u64, out: &mut [f64]) {
        for (k, chunk) in out.chunks_exact_mut(2 * self.spec.n).enumerate() {
            self.spectrum_into(first + k as u64, chunk);
        }
    }
}

/// Pooled `(Re λ, Im λ)` of `m` sampled graphs, `N` per graph in index
/// order.
pub fn graph_spectrum(spec: &GraphSpec, m: usize, seed: u64) -> Result<Vec<(f64, f64)>> {
    if m == 0 {
        return Err(Error::InvalidParameter {
            name: "m",
            index: None,
            reason: "ensemble size must be at least 1",
        });
    }
    let sampler = GraphSampler::new(spec, seed);
    let mut eta = vec![0.0; 2 * spec.n * m];
    sampler.fill(0, &mut eta);
    Ok(eta.chunks_exact(2).map(|p| (p[0], p[1])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{spectral_law, LawMethod, MixturePart};
    use crate::model::build_dense;
    use crate::numerics::ks_statistic;
    use rand::SeedableRng;

    #[test]
    fn validation() {
        assert!(GraphSpec::directed(0, 0.5).is_err());
        assert!(GraphSpec::directed(5, 1.5).is_err());
        assert!(GraphSpec::new(5, GraphKind::Directed, 0.5, Some(0.5), TauScenario::ExactZero).is_err());
        assert!(GraphSpec::new(5, GraphKind::DoubleDirected, 0.5, None, TauScenario::ExactZero).is_err());
        assert!(GraphSpec::directed(5, 0.5)
            .unwrap()
            .with_tau_scenario(TauScenario::Epsilon(0.0))
            .is_err());
    }

    #[test]
    fn extreme_probabilities() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(0);
        for spec in [
            GraphSpec::directed(7, 0.0).unwrap(),
            GraphSpec::undirected(7, 0.0).unwrap(),
            GraphSpec::double_directed(7, 0.0, 0.0).unwrap(),
        ] {
            let fc = sample_circulant_graph(&spec, &mut rng);
            assert!(fc.a().iter().chain(fc.b()).all(|&x| x == 0.0));
        }
        let fc = sample_circulant_graph(&GraphSpec::directed(6, 1.0).unwrap(), &mut rng);
        assert_eq!(fc.a(), &[0.0, 1.0, 1.0, 1.0, 1.0, 1.0]);
        assert!(fc.b().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn directed_entry_means() {
        let spec = GraphSpec::directed(100, 0.1).unwrap();
        let sampler = GraphSampler::new(&spec, 11);
        let m = 2000;
        let mut sums = vec![0.0; 100];
        for i in 0..m {
            let fc = sampler.first_column(i);
            for (s, a) in sums.iter_mut().zip(fc.a()) {
                *s += a;
            }
        }
        assert_eq!(sums[0], 0.0);
        let bound = 4.0 * libm::sqrt(0.09 / m as f64);
        for s in &sums[1..] {
            assert!((s / m as f64 - 0.1).abs() < bound);
        }
    }

    #[test]
    fn undirected_is_symmetric_with_real_spectrum() {
        for n in [1, 2, 9, 10, 51] {
            let spec = GraphSpec::undirected(n, 0.4).unwrap();
            let sampler = GraphSampler::new(&spec, n as u64);
            for i in 0..20 {
                let fc = sampler.first_column(i);
                let h = build_dense(&fc);
                for p in 0..n {
                    for q in 0..n {
                        assert_eq!(h[(p, q)], h[(q, p)]);
                    }
                }
                let mut eta = vec![0.0; 2 * n];
                sampler.spectrum_into(i, &mut eta);
                assert!(eta.iter().skip(1).step_by(2).all(|x| x.abs() < 1e-10));
            }
        }
    }

    #[test]
    fn directed_real_counts_and_out_degree() {
        for n in [7usize, 8] {
            let spec = GraphSpec::directed(n, 0.5).unwrap();
            let sampler = GraphSampler::new(&spec, 5);
            for i in 0..50 {
                let fc = sampler.first_column(i);
                let mut eta = vec![0.0; 2 * n];
                sampler.spectrum_into(i, &mut eta);
                let degree: f64 = fc.a().iter().sum();
                assert_eq!(eta[0], degree);
                let scale = 1.0 + degree;
                // Eigenvalues other than the forced-real ones are real only
                // on a null set; a generic draw has exactly 1 or 2.
                let real = (0..n).filter(|&j| eta[2 * j + 1].abs() < 1e-12 * scale).count();
                let forced = if n % 2 == 0 { 2 } else { 1 };
                assert!(real >= forced);
                assert_eq!(eta[1], 0.0);
                if n % 2 == 0 {
                    assert!(eta[n + 1].abs() < 1e-12 * scale);
                }
            }
        }
    }

    #[test]
    fn surrogate_values() {
        let p = surrogate_params(&GraphSpec::directed(100, 0.1).unwrap());
        assert_eq!((p.u()[0], p.sigma2()[0]), (0.0, 0.0));
        assert!((p.u()[5] - 0.1).abs() < 1e-16 && (p.sigma2()[5] - 0.09).abs() < 1e-16);
        assert!(p.tau2().iter().all(|&t| t == 0.0));

        let p = surrogate_params(&GraphSpec::undirected(50, 1.0 / 3.0).unwrap());
        assert!((p.sigma2()[1] - 4.0 / 9.0).abs() < 1e-15);

        let p = surrogate_params(&GraphSpec::double_directed(100, 0.5, 0.1).unwrap());
        assert_eq!(p.sigma2()[3], 0.25);
        assert!((p.tau2()[3] - 0.09).abs() < 1e-16 && (p.v()[3] - 0.1).abs() < 1e-16);
        assert_eq!((p.v()[0], p.tau2()[0]), (0.0, 0.0));

        let eps = GraphSpec::directed(10, 0.1)
            .unwrap()
            .with_tau_scenario(TauScenario::Epsilon(DEFAULT_EPSILON))
            .unwrap();
        assert!(surrogate_params(&eps).tau2().iter().all(|&t| (t - 1e-6).abs() < 1e-20));
        let eps = GraphSpec::double_directed(10, 0.5, 0.1)
            .unwrap()
            .with_tau_scenario(TauScenario::Epsilon(DEFAULT_EPSILON))
            .unwrap();
        let t = surrogate_params(&eps).tau2().to_vec();
        assert!((t[0] - 1e-6).abs() < 1e-20 && (t[1] - 0.09).abs() < 1e-16);
    }

    #[test]
    fn directed_real_parts_follow_surrogate() {
        let spec = GraphSpec::directed(100, 0.1).unwrap();
        let law = spectral_law(&surrogate_params(&spec), LawMethod::ClosedForm);
        let mix = law.mixture_law(MixturePart::Re, false).unwrap();
        let mut re: Vec<f64> = graph_spectrum(&spec, 2000, 7).unwrap().iter().map(|p| p.0).collect();
        re.sort_by(f64::total_cmp);
        let d = ks_statistic(&re, |x| mix.cdf(x)).unwrap();
        assert!(d < 0.02, "KS {d}");
    }
}
