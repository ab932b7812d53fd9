//! Diagonally pivoted Cholesky factorization of symmetric PSD matrices.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{DeterministicDirection, Error, Result};
use crate::matrix::Matrix;

/// `P T Pᵀ = L Lᵀ` with the largest remaining diagonal chosen as pivot at
/// each step. Elimination stops once every remaining pivot is below the
/// tolerance; those coordinates are the deterministic directions.
#[derive(Debug, Clone)]
pub struct PsdFactor {
    n: usize,
    /// `perm[k]` is the original index eliminated at step `k`.
    perm: Vec<usize>,
    /// Lower-triangular factor in pivot order; only the first `rank`
    /// columns are meaningful.
    l: Matrix,
    rank: usize,
    tol: f64,
}

/// Factor with the default tolerance `1e-12 · trace(T) / dim`.
pub fn psd_factorize(t: &Matrix) -> Result<PsdFactor> {
    if !t.is_square() {
        return Err(Error::DimensionMismatch {
            expected: t.rows(),
            found: t.cols(),
        });
    }
    let n = t.rows().max(1);
    let tol = 1e-12 * t.trace().max(0.0) / n as f64;
    PsdFactor::new(t, tol)
}

impl PsdFactor {
    /// Factor `t` treating pivots `<= tol` as zero. Only the lower triangle
    /// is read after symmetrizing.
    pub fn new(t: &Matrix, tol: f64) -> Result<Self> {
        if !t.is_square() {
            return Err(Error::DimensionMismatch {
                expected: t.rows(),
                found: t.cols(),
            });
        }
        let n = t.rows();
        let mut w = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = 0.5 * (t[(i, j)] + t[(j, i)]);
                w[(i, j)] = v;
                w[(j, i)] = v;
            }
        }
        let mut perm: Vec<usize> = (0..n).collect();
        let mut rank = n;
        for k in 0..n {
            let (p, pivot) =
                (k..n).map(|i| (i, w[(i, i)])).fold(
                    (k, f64::NEG_INFINITY),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
            if pivot <= tol {
                if let Some(i) = (k..n).find(|&i| w[(i, i)] < -tol.max(f64::MIN_POSITIVE)) {
                    return Err(Error::NotPositiveSemidefinite {
                        index: perm[i],
                        pivot: w[(i, i)],
                    });
                }
                rank = k;
                break;
            }
            if p != k {
                swap_sym(&mut w, k, p);
                perm.swap(k, p);
            }
            let lkk = libm::sqrt(pivot);
            w[(k, k)] = lkk;
            for i in k + 1..n {
                w[(i, k)] /= lkk;
            }
            for j in k + 1..n {
                let ljk = w[(j, k)];
                if ljk == 0.0 {
                    continue;
                }
                for i in j..n {
                    let lik = w[(i, k)];
                    w[(i, j)] -= lik * ljk;
                }
            }
            // Keep the trailing block symmetric for the next pivot search.
            for i in k + 1..n {
                for j in k + 1..i {
                    w[(j, i)] = w[(i, j)];
                }
            }
        }
        // Zero the strict upper triangle so `l` is a clean lower factor.
        for i in 0..n {
            for j in i + 1..n {
                w[(i, j)] = 0.0;
            }
        }
        Ok(PsdFactor {
            n,
            perm,
            l: w,
            rank,
            tol,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank == self.n
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    /// Pivot order: `permutation()[k]` is the original index of pivot `k`.
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// Squared pivots `L_kk²`, in pivot order, for the retained rank.
    pub fn pivots(&self) -> Vec<f64> {
        (0..self.rank).map(|k| self.l[(k, k)] * self.l[(k, k)]).collect()
    }

    /// Original indices of the directions eliminated as deterministic.
    pub fn deterministic(&self) -> &[usize] {
        &self.perm[self.rank..]
    }

    /// Log of the product of retained pivots; equals `ln det T` at full rank.
    pub fn log_det(&self) -> f64 {
        (0..self.rank).map(|k| 2.0 * libm::log(self.l[(k, k)])).sum()
    }

    fn singular_error(&self, forced: impl Fn(usize) -> f64) -> Error {
        Error::SingularCovariance {
            rank: self.rank,
            dim: self.n,
            deterministic: self
                .deterministic()
                .iter()
                .map(|&index| DeterministicDirection {
                    index,
                    forced_value: forced(index),
                })
                .collect(),
        }
    }

    /// Singular-covariance error whose forced values come from `mean`.
    pub fn singular_error_with_mean(&self, mean: &[f64]) -> Error {
        self.singular_error(|i| mean.get(i).copied().unwrap_or(f64::NAN))
    }

    /// `y = L₁₁⁻¹ (P b)[..rank]`.
    fn forward(&self, b_perm: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.rank];
        for k in 0..self.rank {
            let mut s = b_perm[k];
            for (m, ym) in y.iter().enumerate().take(k) {
                s -= self.l[(k, m)] * ym;
            }
            y[k] = s / self.l[(k, k)];
        }
        y
    }

    /// `(x)ᵀ T⁻¹ x` by forward substitution. Requires full rank.
    pub fn mahalanobis_sq(&self, x: &[f64]) -> Result<f64> {
        self.check_len(x.len())?;
        if !self.is_full_rank() {
            return Err(self.singular_error(|_| f64::NAN));
        }
        let xp: Vec<f64> = self.perm.iter().map(|&i| x[i]).collect();
        Ok(self.forward(&xp).iter().map(|y| y * y).sum())
    }

    /// Solve `T x = b`. On a rank-deficient factor the deterministic
    /// coordinates of `x` are set to zero, and `b` must be consistent with
    /// the range of `T`.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        self.check_len(b.len())?;
        let bp: Vec<f64> = self.perm.iter().map(|&i| b[i]).collect();
        let y = self.forward(&bp);
        let scale = 1.0 + b.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        for i in self.rank..self.n {
            let fitted: f64 = (0..self.rank).map(|k| self.l[(i, k)] * y[k]).sum();
            let residual = bp[i] - fitted;
            if residual.abs() > 1e-10 * scale {
                return Err(Error::NullSpaceComponent {
                    index: self.perm[i],
                    residual,
                });
            }
        }
        let mut z = y;
        for k in (0..self.rank).rev() {
            let mut s = z[k];
            for m in k + 1..self.rank {
                s -= self.l[(m, k)] * z[m];
            }
            z[k] = s / self.l[(k, k)];
        }
        let mut x = vec![0.0; self.n];
        for (k, &orig) in self.perm.iter().enumerate().take(self.rank) {
            x[orig] = z[k];
        }
        Ok(x)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: len,
            });
        }
        Ok(())
    }
}

fn swap_sym(w: &mut Matrix, a: usize, b: usize) {
    let n = w.rows();
    for c in 0..n {
        let t = w[(a, c)];
        w[(a, c)] = w[(b, c)];
        w[(b, c)] = t;
    }
    for r in 0..n {
        let t = w[(r, a)];
        w[(r, a)] = w[(r, b)];
        w[(r, b)] = t;
    }
}
