//! Output-field squeezing spectra.
//!
//! With the input field entering as `ȧ = Γa + Ω_P a† + √(2γ) a_in` and the
//! boundary condition `a_out = √(2γ) a − a_in`, the Fourier amplitudes obey
//!
//! ```text
//! M(ω) (ã, ã†)ᵀ = √(2γ) (ã_in, ã_in†)ᵀ,   M(ω) = [[−iω − Γ, −Ω_P], [−Ω_P*, −iω − Γ*]]
//! (ã_out, ã_out†)ᵀ = (2γ M(ω)⁻¹ − I) (ã_in, ã_in†)ᵀ
//! ```
//!
//! where `ã†(ω)` denotes the transform of `a†(t)`. Spectra are symmetrized
//! stationary spectral densities normalized so that vacuum gives 1/4.

use std::f64::consts::PI;

use nalgebra::Matrix2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SqueezeError};
use crate::grid::Grid;
use crate::model::{effective_drift, EffectiveDrift, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub omega: f64,
    /// Maps `(ã_in(ω), ã_in†(ω))` to `(ã_out(ω), ã_out†(ω))`.
    pub m_out_in: [[Complex64; 2]; 2],
}

impl TransferMatrix {
    pub fn m11(&self) -> Complex64 {
        self.m_out_in[0][0]
    }

    pub fn m12(&self) -> Complex64 {
        self.m_out_in[0][1]
    }

    /// `|m₁₁|² − |m₁₂|²`, equal to one when the output field is bosonic.
    pub fn commutator(&self) -> f64 {
        self.m11().norm_sqr() - self.m12().norm_sqr()
    }
}

pub fn transfer_matrix(drift: &EffectiveDrift, gamma: f64, omega: f64) -> Result<TransferMatrix> {
    if !drift.is_stable() {
        return Err(SqueezeError::UnstableSystem { determinant: drift.determinant() });
    }
    let iw = Complex64::new(0.0, omega);
    let g = drift.gamma_coef;
    let p = drift.omega_p;
    let m = Matrix2::new(-iw - g, -p, -p.conj(), -iw - g.conj());
    let det = m.determinant();
    if det.norm() <= f64::EPSILON * m.norm_squared() {
        return Err(SqueezeError::SingularAtFrequency { omega });
    }
    // 2x2 inverse by cofactors
    let inv = Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]) / det;
    let t = inv * Complex64::new(2.0 * gamma, 0.0) - Matrix2::identity();
    Ok(TransferMatrix {
        omega,
        m_out_in: [[t[(0, 0)], t[(0, 1)]], [t[(1, 0)], t[(1, 1)]]],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumMethod {
    /// Exact frequency-domain solution of the Langevin system.
    Rederived,
    /// Literal evaluation of the printed closed-form spectra.
    AsPrinted,
}

impl SpectrumMethod {
    pub fn name(&self) -> &'static str {
        match self {
            SpectrumMethod::Rederived => "rederived",
            SpectrumMethod::AsPrinted => "as_printed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumPoint {
    pub omega: f64,
    /// Spectral density of the output X₁ quadrature.
    pub s1: f64,
    /// Spectral density of the orthogonal X₂ quadrature.
    pub s2: f64,
    pub method: SpectrumMethod,
}

/// Coefficient of `ã_in(ω)` in the Fourier amplitude of the output quadrature
/// at phase `theta`.
fn quadrature_coefficient(at: &TransferMatrix, mirrored: &TransferMatrix, theta: f64) -> Complex64 {
    let phase = Complex64::from_polar(1.0, -0.5 * theta);
    // ã_out†(ω) picks up ã_in(ω) through conj(m₁₂(−ω))
    phase * at.m11() + phase.conj() * mirrored.m12().conj()
}

fn symmetrized_density(plus: &TransferMatrix, minus: &TransferMatrix, theta: f64) -> f64 {
    let c_plus = quadrature_coefficient(plus, minus, theta);
    let c_minus = quadrature_coefficient(minus, plus, theta);
    0.125 * (c_plus.norm_sqr() + c_minus.norm_sqr())
}

/// Output spectra of the quadrature at `theta` (S₁) and at `theta + π` (S₂).
pub fn output_spectrum(drift: &EffectiveDrift, gamma: f64, omega: f64, theta: f64) -> Result<SpectrumPoint> {
    let plus = transfer_matrix(drift, gamma, omega)?;
    let minus = transfer_matrix(drift, gamma, -omega)?;
    Ok(SpectrumPoint {
        omega,
        s1: symmetrized_density(&plus, &minus, theta),
        s2: symmetrized_density(&plus, &minus, theta + PI),
        method: SpectrumMethod::Rederived,
    })
}

/// Literal evaluation of the printed spectra, with
/// `Δ_c = ω_c + 4U₀(α − 1)`:
///
/// ```text
/// S₁ = ¼ [(ω² − ω_cΔ_c + γ²) + 4γ²ω_c²] / [(ω² − ω_cΔ_c + γ²) + 4γ²ω²]
/// S₂ = ¼ [(ω² − ω_cΔ_c + γ²) + 4γ²Δ_c²] / [(ω² − ω_cΔ_c + γ²) + 4γ²ω²]
/// ```
///
/// Kept for comparison only; these expressions are not dimensionally
/// consistent and tend to `1/(4(1 + 4γ²))` rather than ¼ at large |ω|.
pub fn spectrum_as_printed(params: &SystemParams, omega: f64) -> Result<SpectrumPoint> {
    let gamma = params.gamma();
    let omega_c = params.omega_c();
    let delta_c = omega_c + 4.0 * params.kappa();
    let common = omega * omega - omega_c * delta_c + gamma * gamma;
    let denom = common + 4.0 * gamma * gamma * omega * omega;
    if denom == 0.0 || !denom.is_finite() {
        return Err(SqueezeError::DivisionByZero { omega });
    }
    Ok(SpectrumPoint {
        omega,
        s1: 0.25 * (common + 4.0 * gamma * gamma * omega_c * omega_c) / denom,
        s2: 0.25 * (common + 4.0 * gamma * gamma * delta_c * delta_c) / denom,
        method: SpectrumMethod::AsPrinted,
    })
}

/// Spectrum over a frequency grid, in grid order.
pub fn spectrum_sweep(
    params: &SystemParams,
    grid: &Grid,
    method: SpectrumMethod,
    theta: f64,
) -> Result<Vec<SpectrumPoint>> {
    if grid.is_empty() {
        return Err(SqueezeError::EmptyRange);
    }
    let drift = effective_drift(params);
    grid.values()
        .into_par_iter()
        .map(|omega| match method {
            SpectrumMethod::Rederived => output_spectrum(&drift, params.gamma(), omega, theta),
            SpectrumMethod::AsPrinted => spectrum_as_printed(params, omega),
        })
        .collect()
}

/// Grid point with the smallest value of `pick`.
pub fn minimum_by<F: Fn(&SpectrumPoint) -> f64>(points: &[SpectrumPoint], pick: F) -> Option<SpectrumPoint> {
    points
        .iter()
        .copied()
        .min_by(|a, b| pick(a).total_cmp(&pick(b)))
}
