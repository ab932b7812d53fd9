//! Goodness-of-fit statistics: Kolmogorov–Smirnov and binned chi-square.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// One-sample KS distance `D = max_i max(i/n − F(x_i), F(x_i) − (i−1)/n)`.
///
/// `sorted` must be in nondecreasing order.
pub fn ks_statistic<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> Result<f64> {
    if sorted.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(i) = sorted.windows(2).position(|w| !(w[0] <= w[1])) {
        return Err(Error::InvalidParameter {
            name: "samples",
            index: Some(i + 1),
            reason: "samples must be sorted and free of NaN",
        });
    }
    let n = sorted.len() as f64;
    let mut d = 0.0_f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let above = (i + 1) as f64 / n - f;
        let below = f - i as f64 / n;
        d = d.max(above.abs()).max(below.abs());
    }
    Ok(d)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    /// Number of pooled bins minus one.
    pub dof: usize,
    /// `(observed − expected) / √expected` for each pooled bin, with the
    /// pooled bin's `[lo, hi)` edges.
    pub residuals: Vec<(f64, f64, f64)>,
}

/// Pearson chi-square of binned counts against `cdf`. Adjacent bins are
/// pooled left to right until each expected count reaches `min_expected`;
/// a short final run is merged into the previous pooled bin.
pub fn chi_square<F: Fn(f64) -> f64>(edges: &[f64], counts: &[u64], cdf: F, min_expected: f64) -> Result<ChiSquare> {
    if counts.is_empty() {
        return Err(Error::EmptyInput);
    }
    if edges.len() != counts.len() + 1 {
        return Err(Error::DimensionMismatch {
            expected: counts.len() + 1,
            found: edges.len(),
        });
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::EmptyInput);
    }
    let lo_cdf = cdf(edges[0]);
    let mass = cdf(edges[edges.len() - 1]) - lo_cdf;
    if !(mass > 0.0) {
        return Err(Error::Domain {
            what: "model mass inside the histogram range",
            value: mass,
        });
    }
    // Expected counts conditional on landing inside the binned range.
    let n = total as f64;
    let mut pooled: Vec<(f64, f64, f64, f64)> = Vec::new();
    let mut acc = (edges[0], 0.0, 0.0);
    for (i, &c) in counts.iter().enumerate() {
        let expect = n * (cdf(edges[i + 1]) - cdf(edges[i])) / mass;
        acc.1 += c as f64;
        acc.2 += expect;
        if acc.2 >= min_expected {
            pooled.push((acc.0, edges[i + 1], acc.1, acc.2));
            acc = (edges[i + 1], 0.0, 0.0);
        }
    }
    if acc.2 > 0.0 || acc.1 > 0.0 {
        match pooled.last_mut() {
            Some(last) => {
                last.1 = edges[edges.len() - 1];
                last.2 += acc.1;
                last.3 += acc.2;
            }
            None => pooled.push((acc.0, edges[edges.len() - 1], acc.1, acc.2)),
        }
    }
    let mut statistic = 0.0;
    let mut residuals = Vec::with_capacity(pooled.len());
    for &(lo, hi, obs, exp) in &pooled {
        if exp > 0.0 {
            statistic += (obs - exp) * (obs - exp) / exp;
            residuals.push((lo, hi, (obs - exp) / libm::sqrt(exp)));
        } else {
            residuals.push((lo, hi, f64::INFINITY));
        }
    }
    Ok(ChiSquare {
        statistic,
        dof: pooled.len().saturating_sub(1),
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::std_normal_cdf;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn quantile_samples_are_close() {
        let n = 999;
        // Uniform CDF on [0, 1]; samples at i/(n+1).
        let xs: Vec<f64> = (1..=n).map(|i| i as f64 / (n + 1) as f64).collect();
        let d = ks_statistic(&xs, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!(d <= 1.0 / (n + 1) as f64 + 1e-12);
    }

    #[test]
    fn single_median_sample() {
        assert_eq!(ks_statistic(&[0.0], std_normal_cdf).unwrap(), 0.5);
    }

    #[test]
    fn errors() {
        assert_eq!(ks_statistic(&[], std_normal_cdf), Err(Error::EmptyInput));
        assert!(ks_statistic(&[1.0, 0.0], std_normal_cdf).is_err());
    }

    #[test]
    fn standard_normal_draws_stay_below_kolmogorov_bound() {
        // P(√n·D > 2.5) ≈ 2e-5, so 10⁴ draws give D < 0.025 with probability
        // far above 0.99; check that over 200 repetitions at most 2 exceed it.
        let mut rng = rand::rngs::StdRng::seed_from_u64(99);
        let mut exceed = 0;
        for _ in 0..200 {
            let mut xs: Vec<f64> = (0..10_000).map(|_| StandardNormal.sample(&mut rng)).collect();
            xs.sort_by(f64::total_cmp);
            if ks_statistic(&xs, std_normal_cdf).unwrap() >= 0.025 {
                exceed += 1;
            }
        }
        assert!(exceed <= 2, "exceed={exceed}");
    }

    #[test]
    fn ks_invariant_under_monotone_transform() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let mut xs: Vec<f64> = (0..500).map(|_| StandardNormal.sample(&mut rng)).collect();
        xs.sort_by(f64::total_cmp);
        let d = ks_statistic(&xs, std_normal_cdf).unwrap();
        let ys: Vec<f64> = xs.iter().map(|&x| libm::exp(x)).collect();
        let d2 = ks_statistic(&ys, |y| std_normal_cdf(libm::log(y))).unwrap();
        assert!((d - d2).abs() < 1e-12);
    }

    #[test]
    fn chi_square_of_exact_counts_is_zero() {
        let edges = vec![0.0, 0.25, 0.5, 0.75, 1.0];
        let counts = vec![25, 25, 25, 25];
        let c = chi_square(&edges, &counts, |x| x, 5.0).unwrap();
        assert!(c.statistic.abs() < 1e-12);
        assert_eq!(c.dof, 3);
    }

    #[test]
    fn chi_square_pools_sparse_bins() {
        let edges = vec![0.0, 0.1, 0.2, 0.3, 0.4, 1.0];
        let counts = vec![1, 1, 1, 1, 16];
        let c = chi_square(&edges, &counts, |x| x, 5.0).unwrap();
        // Expected 2,2,2,2,12 → pooled bins [0, 0.3) and [0.3, 1.0).
        assert_eq!(c.residuals.len(), 2);
        assert_eq!(c.residuals[1].1, 1.0);
    }
}
