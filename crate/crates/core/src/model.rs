//! The random circulant model `H = A + iB` and its closed-form eigenvalues.
//!
//! `H` is fixed by its first column `h_r = a_r + i b_r`; entry `(p, q)` is
//! `h[(p - q) mod N]` (0-based). Its eigenvalues are
//!
//! ```text
//! λ_j = Σ_r h_r ω_j^(N - r)        ω_j = exp(2πi j / N),   j, r = 0..N-1
//! ```
//!
//! which, split into real and imaginary parts, reads
//! `Re λ_j = Σ_r (a_r C[j][r] − b_r S[j][r])` and
//! `Im λ_j = Σ_r (a_r S[j][r] + b_r C[j][r])` with
//! `C[j][r] + i S[j][r] = ω_j^(N - r)`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, Matrix};

/// Means and variances of the `2N` independent Gaussian entries of `H`.
///
/// `a_j ~ Normal(u_j, sigma2_j)` and `b_j ~ Normal(v_j, tau2_j)`. A zero
/// variance makes the entry the deterministic constant `u_j` (or `v_j`).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RawParams", into = "RawParams"))]
pub struct ModelParams {
    u: Vec<f64>,
    v: Vec<f64>,
    sigma2: Vec<f64>,
    tau2: Vec<f64>,
}

#[cfg(feature = "serde")]
#[derive(serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    n: usize,
    u: Vec<f64>,
    v: Vec<f64>,
    sigma2: Vec<f64>,
    tau2: Vec<f64>,
}

#[cfg(feature = "serde")]
impl TryFrom<RawParams> for ModelParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        let params = ModelParams::new(raw.u, raw.v, raw.sigma2, raw.tau2)?;
        if params.n() != raw.n {
            return Err(Error::DimensionMismatch {
                expected: raw.n,
                found: params.n(),
            });
        }
        Ok(params)
    }
}

#[cfg(feature = "serde")]
impl From<ModelParams> for RawParams {
    fn from(p: ModelParams) -> Self {
        RawParams {
            n: p.n(),
            u: p.u,
            v: p.v,
            sigma2: p.sigma2,
            tau2: p.tau2,
        }
    }
}

fn check_finite(name: &'static str, xs: &[f64]) -> Result<()> {
    match xs.iter().position(|x| !x.is_finite()) {
        Some(i) => Err(Error::InvalidParameter {
            name,
            index: Some(i),
            reason: "not finite",
        }),
        None => Ok(()),
    }
}

fn check_variance(name: &'static str, xs: &[f64]) -> Result<()> {
    check_finite(name, xs)?;
    match xs.iter().position(|&x| x < 0.0) {
        Some(i) => Err(Error::InvalidParameter {
            name,
            index: Some(i),
            reason: "negative variance",
        }),
        None => Ok(()),
    }
}

impl ModelParams {
    pub fn new(u: Vec<f64>, v: Vec<f64>, sigma2: Vec<f64>, tau2: Vec<f64>) -> Result<Self> {
        let n = u.len();
        if n == 0 {
            return Err(Error::InvalidDimension { n });
        }
        for len in [v.len(), sigma2.len(), tau2.len()] {
            if len != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: len,
                });
            }
        }
        check_finite("u", &u)?;
        check_finite("v", &v)?;
        check_variance("sigma2", &sigma2)?;
        check_variance("tau2", &tau2)?;
        Ok(ModelParams { u, v, sigma2, tau2 })
    }

    /// Every entry shares the same means and variances.
    pub fn uniform(n: usize, u: f64, v: f64, sigma2: f64, tau2: f64) -> Result<Self> {
        Self::new(vec![u; n], vec![v; n], vec![sigma2; n], vec![tau2; n])
    }

    /// Same as [`ModelParams::new`] but with standard deviations for the variances.
    pub fn from_std_devs(u: Vec<f64>, v: Vec<f64>, sigma: Vec<f64>, tau: Vec<f64>) -> Result<Self> {
        check_variance("sigma", &sigma)?;
        check_variance("tau", &tau)?;
        let sq = |xs: Vec<f64>| xs.into_iter().map(|x| x * x).collect();
        Self::new(u, v, sq(sigma), sq(tau))
    }

    pub fn n(&self) -> usize {
        self.u.len()
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn sigma2(&self) -> &[f64] {
        &self.sigma2
    }

    pub fn tau2(&self) -> &[f64] {
        &self.tau2
    }

    /// Mean of `h = (a_1, b_1, …, a_N, b_N)`.
    pub fn h_mean(&self) -> Vec<f64> {
        self.u.iter().zip(&self.v).flat_map(|(&u, &v)| [u, v]).collect()
    }

    /// Diagonal of the covariance of `h`.
    pub fn h_variance(&self) -> Vec<f64> {
        self.sigma2.iter().zip(&self.tau2).flat_map(|(&s, &t)| [s, t]).collect()
    }
}

/// First column of `H`, i.e. the entries `h_r = a_r + i b_r`.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstColumn {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl FirstColumn {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidDimension { n: 0 });
        }
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.len(),
                found: b.len(),
            });
        }
        Ok(FirstColumn { a, b })
    }

    /// A real first column (`b ≡ 0`).
    pub fn real(a: Vec<f64>) -> Result<Self> {
        let n = a.len();
        Self::new(a, vec![0.0; n])
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// Interleaved `h = (a_1, b_1, …, a_N, b_N)`.
    pub fn h(&self) -> Vec<f64> {
        self.a.iter().zip(&self.b).flat_map(|(&a, &b)| [a, b]).collect()
    }

    /// `alpha * self + beta * other`. Panics on dimension mismatch.
    pub fn combine(&self, alpha: f64, other: &FirstColumn, beta: f64) -> FirstColumn {
        assert_eq!(self.n(), other.n(), "first columns differ in dimension");
        let mix = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| alpha * p + beta * q).collect();
        FirstColumn {
            a: mix(&self.a, &other.a),
            b: mix(&self.b, &other.b),
        }
    }
}

/// `(cos, sin)` of `2π k / n` with exact values at multiples of `π/4`
/// boundaries and exact symmetry `sin(2π(n-k)/n) = -sin(2πk/n)`.
///
/// The angle is reduced with integer arithmetic to `[0, π/4]` before any
/// floating-point trig is evaluated.
pub(crate) fn unit_root(k: u64, n: u64) -> (f64, f64) {
    debug_assert!(n > 0);
    // Work in units of a full turn / (8n).
    let eighth = n as u128;
    let mut a = 8 * (k % n) as u128;
    let mut sin_sign = 1.0;
    let mut cos_sign = 1.0;
    let mut swap = false;
    if a > 4 * eighth {
        a = 8 * eighth - a;
        sin_sign = -1.0;
    }
    if a > 2 * eighth {
        a = 4 * eighth - a;
        cos_sign = -1.0;
    }
    if a > eighth {
        a = 2 * eighth - a;
        swap = true;
    }
    let phi = PI * (a as f64) / (4.0 * n as f64);
    let (s, c) = if a == 0 {
        (0.0, 1.0)
    } else {
        (libm::sin(phi), libm::cos(phi))
    };
    let (c, s) = if swap { (s, c) } else { (c, s) };
    (cos_sign * c, sin_sign * s)
}

/// `C[j][r] = cos(2π j (N - r) / N)` and `S[j][r] = sin(…)`, 0-based `j, r`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigTables {
    n: usize,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl TrigTables {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension { n });
        }
        let nn = n as u64;
        let mut cos = Vec::with_capacity(n * n);
        let mut sin = Vec::with_capacity(n * n);
        for j in 0..nn {
            for r in 0..nn {
                // (j·(N − r)) mod N, reduced before the multiplication reaches trig.
                let k = (j as u128 * (nn - r) as u128 % nn as u128) as u64;
                let (c, s) = unit_root(k, nn);
                cos.push(c);
                sin.push(s);
            }
        }
        Ok(TrigTables { n, cos, sin })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn c(&self, j: usize, r: usize) -> f64 {
        self.cos[j * self.n + r]
    }

    #[inline]
    pub fn s(&self, j: usize, r: usize) -> f64 {
        self.sin[j * self.n + r]
    }

    pub fn cos_row(&self, j: usize) -> &[f64] {
        &self.cos[j * self.n..(j + 1) * self.n]
    }

    pub fn sin_row(&self, j: usize) -> &[f64] {
        &self.sin[j * self.n..(j + 1) * self.n]
    }

    /// `t_j = (C[j][0], S[j][0], …, C[j][N-1], S[j][N-1])`.
    pub fn t(&self, j: usize) -> Vec<f64> {
        self.cos_row(j)
            .iter()
            .zip(self.sin_row(j))
            .flat_map(|(&c, &s)| [c, s])
            .collect()
    }
}

pub fn build_trig_tables(n: usize) -> Result<TrigTables> {
    TrigTables::new(n)
}

/// The `2N × 2N` matrix `Q` with column pairs `(K₁ t_j, K₂ t_j)`, where
/// `K₁ = 𝟙_N ⊗ σ_z` and `K₂ = 𝟙_N ⊗ σ_x`. It maps `h` to the eigenvalue
/// coordinates: `η = Qᵀ h`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformQ {
    n: usize,
    q: Matrix,
}

impl TransformQ {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Matrix {
        &self.q
    }

    /// `Qᵀ h`.
    pub fn apply_transpose(&self, h: &[f64]) -> Result<Vec<f64>> {
        if h.len() != 2 * self.n {
            return Err(Error::DimensionMismatch {
                expected: 2 * self.n,
                found: h.len(),
            });
        }
        Ok(self.q.tr_mul_vec(h))
    }
}

pub fn build_transform_q(tables: &TrigTables) -> TransformQ {
    let n = tables.n();
    let mut q = Matrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        for r in 0..n {
            let (c, s) = (tables.c(j, r), tables.s(j, r));
            // K₁ t_j = (C, −S, …); K₂ t_j = (S, C, …).
            q[(2 * r, 2 * j)] = c;
            q[(2 * r + 1, 2 * j)] = -s;
            q[(2 * r, 2 * j + 1)] = s;
            q[(2 * r + 1, 2 * j + 1)] = c;
        }
    }
    TransformQ { n, q }
}

/// Real and imaginary parts of all eigenvalues of one realization,
/// interleaved as `(Re λ_0, Im λ_0, Re λ_1, …)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaSample {
    eta: Vec<f64>,
}

impl EtaSample {
    pub fn from_vec(eta: Vec<f64>) -> Result<Self> {
        if eta.is_empty() || eta.len() % 2 != 0 {
            return Err(Error::InvalidParameter {
                name: "eta",
                index: None,
                reason: "length must be a positive even number",
            });
        }
        Ok(EtaSample { eta })
    }

    pub fn n(&self) -> usize {
        self.eta.len() / 2
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.eta
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.eta
    }

    pub fn re(&self, j: usize) -> f64 {
        self.eta[2 * j]
    }

    pub fn im(&self, j: usize) -> f64 {
        self.eta[2 * j + 1]
    }

    pub fn lambda(&self, j: usize) -> Complex64 {
        Complex64::new(self.re(j), self.im(j))
    }

    pub fn modulus_sq(&self, j: usize) -> f64 {
        self.re(j) * self.re(j) + self.im(j) * self.im(j)
    }
}

/// Draw the first column of `H` from the model. Standard normals are drawn
/// in `h` order `(a_1, b_1, a_2, b_2, …)`, one per entry even when its
/// variance is zero, so the stream layout never depends on the parameters.
pub fn sample_entries<R: Rng + ?Sized>(params: &ModelParams, rng: &mut R) -> FirstColumn {
    let n = params.n();
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    let draw = |mean: f64, var: f64, z: f64| {
        if var == 0.0 {
            mean
        } else {
            mean + libm::sqrt(var) * z
        }
    };
    for j in 0..n {
        let za: f64 = rng.sample(StandardNormal);
        let zb: f64 = rng.sample(StandardNormal);
        a.push(draw(params.u[j], params.sigma2[j], za));
        b.push(draw(params.v[j], params.tau2[j], zb));
    }
    FirstColumn { a, b }
}

/// Dense `H` with entry `(p, q) = h[(p - q) mod N]`.
pub fn build_dense(fc: &FirstColumn) -> ComplexMatrix {
    let n = fc.n();
    let mut h = ComplexMatrix::zeros(n);
    for p in 0..n {
        for q in 0..n {
            let r = (p + n - q) % n;
            h[(p, q)] = Complex64::new(fc.a[r], fc.b[r]);
        }
    }
    h
}

/// Unitary Fourier matrix `U[j][k] = ω_j^k / √N`. With it, `U† H U` is
/// diagonal with entries `λ_0, …, λ_{N-1}` in root-of-unity order.
pub fn fourier_matrix(n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::InvalidDimension { n });
    }
    let scale = 1.0 / libm::sqrt(n as f64);
    let mut u = ComplexMatrix::zeros(n);
    for j in 0..n {
        for k in 0..n {
            let (c, s) = unit_root((j * k % n) as u64, n as u64);
            u[(j, k)] = Complex64::new(c * scale, s * scale);
        }
    }
    Ok(u)
}

/// All eigenvalues of `H` in O(N²), ordered by root-of-unity index.
pub fn eigenvalues_closed_form(fc: &FirstColumn, tables: &TrigTables) -> Result<EtaSample> {
    let n = fc.n();
    if tables.n() != n {
        return Err(Error::DimensionMismatch {
            expected: tables.n(),
            found: n,
        });
    }
    let mut eta = vec![0.0; 2 * n];
    eigenvalues_into(fc.a(), fc.b(), tables, &mut eta);
    Ok(EtaSample { eta })
}

/// Closed-form eigenvalues written into `out` (length `2N`). Dimensions are
/// the caller's responsibility.
pub(crate) fn eigenvalues_into(a: &[f64], b: &[f64], tables: &TrigTables, out: &mut [f64]) {
    let n = tables.n();
    for j in 0..n {
        let (cos, sin) = (tables.cos_row(j), tables.sin_row(j));
        let mut re = 0.0;
        let mut im = 0.0;
        for r in 0..n {
            re += a[r] * cos[r] - b[r] * sin[r];
            im += a[r] * sin[r] + b[r] * cos[r];
        }
        out[2 * j] = re;
        out[2 * j + 1] = im;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::substream;

    #[test]
    fn trig_tables_small_cases() {
        let t1 = TrigTables::new(1).unwrap();
        assert_eq!((t1.c(0, 0), t1.s(0, 0)), (1.0, 0.0));

        // N = 2: angles π·j·(2 − r); hand-evaluated.
        let t2 = TrigTables::new(2).unwrap();
        assert_eq!(t2.cos_row(0), &[1.0, 1.0]);
        assert_eq!(t2.cos_row(1), &[1.0, -1.0]);
        assert!(t2.sin_row(0).iter().chain(t2.sin_row(1)).all(|&s| s == 0.0));

        // N = 4, j = 2, r = 4 (1-based): angle 2π·1·1/4 = π/2.
        let t4 = TrigTables::new(4).unwrap();
        assert_eq!(t4.c(1, 3), 0.0);
        assert_eq!(t4.s(1, 3), 1.0);
    }

    #[test]
    fn zero_dimension_rejected() {
        assert_eq!(TrigTables::new(0), Err(Error::InvalidDimension { n: 0 }));
        assert!(fourier_matrix(0).is_err());
    }

    #[test]
    fn unit_root_matches_direct_evaluation() {
        for n in 1..40u64 {
            for k in 0..n {
                let (c, s) = unit_root(k, n);
                // The direct angle itself carries up to ~2π·ε of rounding.
                let theta = 2.0 * PI * k as f64 / n as f64;
                assert!((c - libm::cos(theta)).abs() < 4e-15, "cos n={n} k={k}");
                assert!((s - libm::sin(theta)).abs() < 4e-15, "sin n={n} k={k}");
                let (c2, s2) = unit_root((n - k) % n, n);
                assert_eq!(c2, c);
                assert_eq!(s2, if k == 0 { s } else { -s });
            }
        }
    }

    #[test]
    fn trig_table_invariants() {
        for n in [1, 2, 3, 7, 12, 33] {
            let t = TrigTables::new(n).unwrap();
            for r in 0..n {
                assert_eq!(t.c(0, r), 1.0);
                assert_eq!(t.s(0, r), 0.0);
            }
            for j in 0..n {
                for k in 0..n {
                    let dot: f64 = (0..n).map(|r| t.c(j, r) * t.c(k, r) + t.s(j, r) * t.s(k, r)).sum();
                    let expect = if j == k { n as f64 } else { 0.0 };
                    assert!((dot - expect).abs() < 1e-10 * n as f64);
                }
                for r in 0..n {
                    let one = t.c(j, r) * t.c(j, r) + t.s(j, r) * t.s(j, r);
                    assert!((one - 1.0).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn params_validation() {
        assert!(matches!(
            ModelParams::new(vec![], vec![], vec![], vec![]),
            Err(Error::InvalidDimension { .. })
        ));
        assert!(matches!(
            ModelParams::new(vec![0.0; 2], vec![0.0; 3], vec![0.0; 2], vec![0.0; 2]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            ModelParams::new(vec![0.0], vec![0.0], vec![-1.0], vec![0.0]),
            Err(Error::InvalidParameter { name: "sigma2", .. })
        ));
        assert!(matches!(
            ModelParams::new(vec![f64::NAN], vec![0.0], vec![1.0], vec![0.0]),
            Err(Error::InvalidParameter { name: "u", .. })
        ));
        let p = ModelParams::from_std_devs(vec![1.0], vec![2.0], vec![3.0], vec![0.5]).unwrap();
        assert_eq!(p.sigma2(), &[9.0]);
        assert_eq!(p.tau2(), &[0.25]);
        assert_eq!(p.h_mean(), vec![1.0, 2.0]);
        assert_eq!(p.h_variance(), vec![9.0, 0.25]);
    }

    #[test]
    fn zero_variance_sampling_is_exact() {
        let p = ModelParams::new(vec![1.5, -2.0, 0.25], vec![3.0, 0.0, -7.0], vec![0.0; 3], vec![0.0; 3]).unwrap();
        let fc = sample_entries(&p, &mut substream(1, 0));
        assert_eq!(fc.a(), p.u());
        assert_eq!(fc.b(), p.v());
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let p = ModelParams::uniform(6, 0.5, -1.0, 2.0, 0.3).unwrap();
        let x = sample_entries(&p, &mut substream(42, 9));
        let y = sample_entries(&p, &mut substream(42, 9));
        let z = sample_entries(&p, &mut substream(43, 9));
        assert_eq!(x, y);
        assert_ne!(x, z);
    }

    #[test]
    fn dense_layout() {
        let fc = FirstColumn::real(vec![1.0, 2.0]).unwrap();
        let h = build_dense(&fc);
        assert_eq!(h[(0, 0)].re, 1.0);
        assert_eq!(h[(0, 1)].re, 2.0);
        assert_eq!(h[(1, 0)].re, 2.0);
        assert_eq!(h[(1, 1)].re, 1.0);

        let fc = FirstColumn::new(vec![1.0, 2.0, 3.0], vec![10.0, 20.0, 30.0]).unwrap();
        let h = build_dense(&fc);
        let col: Vec<f64> = (0..3).map(|p| h[(p, 0)].re).collect();
        let row: Vec<f64> = (0..3).map(|q| h[(0, q)].im).collect();
        assert_eq!(col, vec![1.0, 2.0, 3.0]);
        assert_eq!(row, vec![10.0, 30.0, 20.0]);

        let ones = build_dense(&FirstColumn::real(vec![1.0; 5]).unwrap());
        assert_eq!(ones.max_norm(), 1.0);
        assert!((0..5).all(|p| (0..5).all(|q| ones[(p, q)] == Complex64::new(1.0, 0.0))));
    }

    #[test]
    fn closed_form_small_cases() {
        let fc = FirstColumn::real(vec![1.0, 2.0]).unwrap();
        let eta = eigenvalues_closed_form(&fc, &TrigTables::new(2).unwrap()).unwrap();
        assert_eq!(eta.as_slice(), &[3.0, 0.0, -1.0, 0.0]);

        let fc = FirstColumn::new(vec![0.75], vec![-2.5]).unwrap();
        let eta = eigenvalues_closed_form(&fc, &TrigTables::new(1).unwrap()).unwrap();
        assert_eq!(eta.lambda(0), Complex64::new(0.75, -2.5));

        assert!(matches!(
            eigenvalues_closed_form(&fc, &TrigTables::new(3).unwrap()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn closed_form_matches_fourier_diagonalization() {
        let n = 8;
        let p = ModelParams::uniform(n, 0.3, -0.2, 1.0, 2.0).unwrap();
        let fc = sample_entries(&p, &mut substream(5, 0));
        let h = build_dense(&fc);
        let u = fourier_matrix(n).unwrap();
        let d = u.adjoint().matmul(&h).matmul(&u);
        let eta = eigenvalues_closed_form(&fc, &TrigTables::new(n).unwrap()).unwrap();
        let tol = 1e-10 * h.max_norm();
        for j in 0..n {
            assert!((d[(j, j)] - eta.lambda(j)).norm() < tol);
        }
        assert!(d.max_off_diagonal() < tol);
    }

    #[test]
    fn q_small_cases() {
        let q1 = build_transform_q(&TrigTables::new(1).unwrap());
        assert_eq!(q1.matrix(), &Matrix::identity(2));

        let q2 = build_transform_q(&TrigTables::new(2).unwrap());
        let qtq = q2.matrix().transpose().matmul(q2.matrix());
        assert_eq!(qtq, {
            let mut m = Matrix::identity(4);
            for i in 0..4 {
                m[(i, i)] = 2.0;
            }
            m
        });
    }

    #[test]
    fn q_transpose_reproduces_closed_form() {
        for n in [1, 2, 5, 16, 64] {
            let tables = TrigTables::new(n).unwrap();
            let q = build_transform_q(&tables);
            let p = ModelParams::uniform(n, 0.1, 0.2, 1.0, 1.0).unwrap();
            let fc = sample_entries(&p, &mut substream(n as u64, 0));
            let via_q = q.apply_transpose(&fc.h()).unwrap();
            let direct = eigenvalues_closed_form(&fc, &tables).unwrap();
            for (x, y) in via_q.iter().zip(direct.as_slice()) {
                assert!((x - y).abs() < 1e-12 * (1.0 + y.abs()), "n={n}");
            }
        }
    }
}
