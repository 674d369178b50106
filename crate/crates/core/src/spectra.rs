//! Spectral data of quantum multiplication by `c1`, and the predicted growth
//! constants `T` for products and hypersurfaces.

use crate::builtin::{x3_classical, x3_quantum_matrix};
use crate::error::{Error, Result};
use crate::linalg::{char_poly, eigenvector, poly_roots, Matrix};
use crate::numeric::C64;
use serde::Serialize;
use std::f64::consts::PI;

/// Spectral radius of `c1 ⋆` on X3 that every X3 computation is checked against.
pub const X3_EXPECTED_T: f64 = 26.9877;
pub const X3_T_TOLERANCE: f64 = 1e-3;

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<C64>,
    pub spectral_radius: f64,
    /// Eigenvalues whose modulus equals the spectral radius.
    pub dominant: Vec<C64>,
    /// True when there is exactly one dominant eigenvalue and it is a simple root.
    pub dominant_simple: bool,
    /// `arg λ` in `[0, 2π)` for each dominant eigenvalue.
    pub theta_candidates: Vec<f64>,
    /// `‖Cv - λv‖ / ‖v‖` for each eigenvalue.
    pub residuals: Vec<f64>,
}

impl SpectrumReport {
    pub fn from_matrix(m: &Matrix) -> Self {
        let mut eigenvalues = poly_roots(&char_poly(m));
        eigenvalues.sort_by(|a, b| b.norm().total_cmp(&a.norm()).then(a.arg().total_cmp(&b.arg())));
        let residuals = eigenvalues.iter().map(|&l| eigenvector(m, l).1).collect();
        let spectral_radius = eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let tol = 1e-9 * spectral_radius.max(1.0);
        let dominant: Vec<C64> =
            eigenvalues.iter().copied().filter(|z| (z.norm() - spectral_radius).abs() <= tol).collect();
        let dominant_simple = dominant.len() == 1
            && eigenvalues.iter().filter(|z| (**z - dominant[0]).norm() <= 1e-6 * spectral_radius).count() == 1;
        let theta_candidates = dominant.iter().map(|z| z.arg().rem_euclid(2.0 * PI)).collect();
        SpectrumReport { eigenvalues, spectral_radius, dominant, dominant_simple, theta_candidates, residuals }
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// `c1 ⋆` on `QH*(P^N)` at `q = 1`: `(N+1)` times the cyclic shift.
pub fn pn_matrix(n: u32) -> Matrix {
    let len = n as usize + 1;
    let mut m = vec![vec![C64::new(0.0, 0.0); len]; len];
    for j in 0..len {
        m[(j + 1) % len][j] = C64::new(len as f64, 0.0);
    }
    m
}

/// Eigenvalues `(N+1)ξ^k` over the `(N+1)`-th roots of unity.
pub fn pn_spectrum(n: u32) -> SpectrumReport {
    SpectrumReport::from_matrix(&pn_matrix(n))
}

/// `A ⊗ I + I ⊗ B`, the action of `c1 ⋆` on a product.
pub fn kronecker_sum(a: &Matrix, b: &Matrix) -> Matrix {
    let (n1, n2) = (a.len(), b.len());
    let mut m = vec![vec![C64::new(0.0, 0.0); n1 * n2]; n1 * n2];
    for i in 0..n1 {
        for j in 0..n2 {
            for k in 0..n1 {
                m[i * n2 + j][k * n2 + j] += a[i][k];
            }
            for l in 0..n2 {
                m[i * n2 + j][i * n2 + l] += b[j][l];
            }
        }
    }
    m
}

/// `c1 ⋆` on the X3 basis at `q = 1`, checked against [`X3_EXPECTED_T`].
pub fn x3_spectrum() -> Result<SpectrumReport> {
    let ring = x3_classical();
    let report = SpectrumReport::from_matrix(&x3_quantum_matrix(&ring.c1));
    check_x3_presentation(&report)?;
    Ok(report)
}

/// Fails unless the dominant eigenvalue is unique, simple, real, negative and of modulus 26.9877.
pub fn check_x3_presentation(report: &SpectrumReport) -> Result<()> {
    if !report.dominant_simple {
        return Err(Error::Presentation("dominant eigenvalue of c1* on X3 is not simple".into()));
    }
    let l = report.dominant[0];
    if (report.spectral_radius - X3_EXPECTED_T).abs() > X3_T_TOLERANCE || l.im.abs() > 1e-9 || l.re >= 0.0 {
        return Err(Error::Presentation(format!(
            "X3 quantum ring gives dominant eigenvalue {l}, expected -{X3_EXPECTED_T}; \
             the ring presentation or quantum corrections are wrong"
        )));
    }
    if report.max_residual() > 1e-9 {
        return Err(Error::Presentation(format!("eigen residual {:.2e} too large", report.max_residual())));
    }
    Ok(())
}

pub fn product_t(t_x: f64, t_y: f64) -> f64 {
    t_x + t_y
}

/// Solves `((T_Z + c0)/r_Z)^{r_Z} = d^d (T_X/r_X)^{r_X}` for `T_Z`, with `r_Z = r_X - d`.
pub fn hypersurface_t(r_x: u32, t_x: f64, d: u32, c0: f64) -> Result<f64> {
    if d == 0 || d >= r_x {
        return Err(Error::Domain(format!("need 0 < d < r_X, got d = {d}, r_X = {r_x}")));
    }
    let r_z = r_x - d;
    let rhs = (d as f64).powi(d as i32) * (t_x / r_x as f64).powi(r_x as i32);
    Ok(r_z as f64 * rhs.powf(1.0 / r_z as f64) - c0)
}
