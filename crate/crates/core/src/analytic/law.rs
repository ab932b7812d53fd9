use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::model::{build_transform_q, ModelParams, TrigTables};

/// How to assemble `(ν, 𝒯)` from the entry parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum LawMethod {
    /// `ν = Qᵀμ`, `𝒯 = QᵀΣQ` with the dense transform.
    MatrixProduct,
    /// Element-wise sums over the trigonometric tables.
    #[default]
    ClosedForm,
}

/// Mean `ν` (length `2N`) and covariance `𝒯` (`2N × 2N`) of the
/// eigenvalue coordinates `η`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralLaw {
    n: usize,
    nu: Vec<f64>,
    cov: Matrix,
}

impl SpectralLaw {
    /// Build a law from an explicit mean and covariance. The covariance
    /// must be square, `2N × 2N`, and symmetric to 1e-12.
    pub fn new(nu: Vec<f64>, cov: Matrix) -> Result<Self> {
        if nu.is_empty() || nu.len() % 2 != 0 {
            return Err(Error::InvalidDimension { n: nu.len() });
        }
        if cov.rows() != nu.len() || cov.cols() != nu.len() {
            return Err(Error::DimensionMismatch {
                expected: nu.len(),
                found: if cov.rows() != nu.len() { cov.rows() } else { cov.cols() },
            });
        }
        if let Some(i) = nu.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "nu",
                index: Some(i),
                reason: "not finite",
            });
        }
        if cov.as_slice().iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "covariance",
                index: None,
                reason: "not finite",
            });
        }
        if cov.max_asymmetry() > 1e-12 {
            return Err(Error::InvalidParameter {
                name: "covariance",
                index: None,
                reason: "not symmetric",
            });
        }
        Ok(SpectralLaw {
            n: nu.len() / 2,
            nu,
            cov,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nu(&self) -> &[f64] {
        &self.nu
    }

    pub fn cov(&self) -> &Matrix {
        &self.cov
    }

    /// Threshold below which a variance is treated as zero:
    /// `1e-12 · trace(𝒯) / 2N`.
    pub fn degeneracy_tolerance(&self) -> f64 {
        1e-12 * self.cov.trace().max(0.0) / (2 * self.n) as f64
    }

    pub(crate) fn check_index(&self, j: usize) -> Result<()> {
        if j >= self.n {
            return Err(Error::InvalidParameter {
                name: "eigenvalue index",
                index: Some(j),
                reason: "index must be below N",
            });
        }
        Ok(())
    }
}

/// The exact law of `η` for the given entry parameters.
pub fn spectral_law(params: &ModelParams, method: LawMethod) -> SpectralLaw {
    let tables = TrigTables::new(params.n()).expect("ModelParams has n >= 1");
    let (nu, cov) = match method {
        LawMethod::MatrixProduct => matrix_product(params, &tables),
        LawMethod::ClosedForm => closed_form(params, &tables),
    };
    SpectralLaw { n: params.n(), nu, cov }
}

fn matrix_product(params: &ModelParams, tables: &TrigTables) -> (Vec<f64>, Matrix) {
    let q = build_transform_q(tables);
    let q = q.matrix();
    let dim = q.rows();
    let nu = q.tr_mul_vec(&params.h_mean());
    let var = params.h_variance();
    // Σ is diagonal, so QᵀΣQ = Qᵀ (diag(var) Q).
    let mut scaled = q.clone();
    for (i, &s) in var.iter().enumerate() {
        for c in 0..dim {
            scaled[(i, c)] *= s;
        }
    }
    let mut cov = q.transpose().matmul(&scaled);
    for i in 0..dim {
        for j in 0..i {
            let m = 0.5 * (cov[(i, j)] + cov[(j, i)]);
            cov[(i, j)] = m;
            cov[(j, i)] = m;
        }
    }
    (nu, cov)
}

fn closed_form(params: &ModelParams, tables: &TrigTables) -> (Vec<f64>, Matrix) {
    let n = params.n();
    let (u, v) = (params.u(), params.v());
    let (s2, t2) = (params.sigma2(), params.tau2());
    let mut nu = vec![0.0; 2 * n];
    for l in 0..n {
        let (c, s) = (tables.cos_row(l), tables.sin_row(l));
        let mut re = 0.0;
        let mut im = 0.0;
        for r in 0..n {
            re += c[r] * u[r] - s[r] * v[r];
            im += c[r] * v[r] + s[r] * u[r];
        }
        nu[2 * l] = re;
        nu[2 * l + 1] = im;
    }
    let mut cov = Matrix::zeros(2 * n, 2 * n);
    for l in 0..n {
        let (cl, sl) = (tables.cos_row(l), tables.sin_row(l));
        for m in 0..n {
            let (cm, sm) = (tables.cos_row(m), tables.sin_row(m));
            let (mut rr, mut ri, mut ir, mut ii) = (0.0, 0.0, 0.0, 0.0);
            for r in 0..n {
                rr += s2[r] * cl[r] * cm[r] + t2[r] * sl[r] * sm[r];
                ri += s2[r] * cl[r] * sm[r] - t2[r] * sl[r] * cm[r];
                ir += s2[r] * sl[r] * cm[r] - t2[r] * cl[r] * sm[r];
                ii += s2[r] * sl[r] * sm[r] + t2[r] * cl[r] * cm[r];
            }
            cov[(2 * l, 2 * m)] = rr;
            cov[(2 * l, 2 * m + 1)] = ri;
            cov[(2 * l + 1, 2 * m)] = ir;
            cov[(2 * l + 1, 2 * m + 1)] = ii;
        }
    }
    let dim = 2 * n;
    for i in 0..dim {
        for j in 0..i {
            cov[(i, j)] = cov[(j, i)];
        }
    }
    (nu, cov)
}
