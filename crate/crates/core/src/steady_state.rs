//! Steady-state second moments, quadrature variances, photon number and the
//! superradiant critical coupling.
//!
//! The first moment ⟨a⟩ vanishes in the stable region (linear homogeneous
//! drift with zero-mean noise), so variances are raw second moments.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SqueezeError};
use crate::grid::Grid;
use crate::model::{effective_drift, EffectiveDrift, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentSource {
    ClosedForm,
    Lyapunov,
    MonteCarlo,
    FockOracle,
}

/// Statistical errors attached to Monte-Carlo moment estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentErrors {
    pub a_sq_re: f64,
    pub a_sq_im: f64,
    pub sym_number: f64,
}

/// Steady-state ⟨a²⟩, ⟨a†²⟩ and the symmetrized number ⟨aa† + a†a⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecondMoments {
    pub a_sq: Complex64,
    pub adag_sq: Complex64,
    pub sym_number: f64,
    pub source: MomentSource,
    pub stderr: Option<MomentErrors>,
}

impl SecondMoments {
    pub fn new(a_sq: Complex64, sym_number: f64, source: MomentSource) -> Self {
        Self { a_sq, adag_sq: a_sq.conj(), sym_number, source, stderr: None }
    }

    /// Normal-ordered photon number ⟨a†a⟩ = (A₂ − 1)/2.
    pub fn photon_number(&self) -> f64 {
        0.5 * (self.sym_number - 1.0)
    }
}

fn require_stable(drift: &EffectiveDrift) -> Result<()> {
    if drift.is_stable() {
        Ok(())
    } else {
        Err(SqueezeError::UnstableSystem { determinant: drift.determinant() })
    }
}

/// Closed-form steady state of the linear Langevin system.
pub fn closed_form_moments(drift: &EffectiveDrift) -> Result<SecondMoments> {
    require_stable(drift)?;
    let g = drift.gamma_coef;
    let p = drift.omega_p;
    // |Ω_P|² − ΓΓ*
    let denom = p.norm_sqr() - g.norm_sqr();
    let a1 = p * g.conj() / (2.0 * denom);
    let a2 = -g.norm_sqr() / denom;
    let a3 = p.conj() * g / (2.0 * denom);
    debug_assert!((a3 - a1.conj()).norm() <= 1e-12 * (1.0 + a1.norm()));
    Ok(SecondMoments::new(a1, a2, MomentSource::ClosedForm))
}

/// Steady state from the moment equations with the noise correlations
/// `⟨F a†⟩ = ⟨a F†⟩ = γ`:
///
/// ```text
/// 2Γ A₁ + Ω_P A₂                     = 0
/// 2Ω_P* A₁ + (Γ + Γ*) A₂ + 2Ω_P A₃   = −2γ
/// Ω_P* A₂ + 2Γ* A₃                   = 0
/// ```
pub fn lyapunov_moments(drift: &EffectiveDrift, gamma: f64) -> Result<SecondMoments> {
    require_stable(drift)?;
    let g = drift.gamma_coef;
    let p = drift.omega_p;
    let zero = Complex64::new(0.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    #[rustfmt::skip]
    let m = Matrix3::new(
        two * g,        p,              zero,
        two * p.conj(), g + g.conj(),   two * p,
        zero,           p.conj(),       two * g.conj(),
    );
    let rhs = Vector3::new(zero, Complex64::new(-2.0 * gamma, 0.0), zero);
    let x = m.lu().solve(&rhs).ok_or(SqueezeError::SingularSystem)?;
    if x.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(SqueezeError::SingularSystem);
    }
    let mut moments = SecondMoments::new(x[0], x[1].re, MomentSource::Lyapunov);
    moments.adag_sq = x[2];
    Ok(moments)
}

/// Variances of `X₁ = (a e^{−iθ/2} + a† e^{iθ/2})/2` and
/// `X₂ = (a e^{−iθ/2} − a† e^{iθ/2})/2i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureVariances {
    pub theta: f64,
    pub var_x1: f64,
    pub var_x2: f64,
}

impl QuadratureVariances {
    pub fn product(&self) -> f64 {
        self.var_x1 * self.var_x2
    }
}

pub fn quadrature_variances(moments: &SecondMoments, theta: f64) -> QuadratureVariances {
    let phase = Complex64::from_polar(1.0, -theta);
    let cross = phase * moments.a_sq + phase.conj() * moments.adag_sq;
    QuadratureVariances {
        theta,
        var_x1: 0.25 * (moments.sym_number + cross.re),
        var_x2: 0.25 * (moments.sym_number - cross.re),
    }
}

/// Intracavity photon number with the literal printed expression alongside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhotonNumber {
    /// ⟨a†a⟩ = (A₂ − 1)/2; `+∞` exactly at the transition.
    pub n: f64,
    /// −(γ² + (ω_c + 2κ)²) / (ω_c² + 4ω_cκ + γ²), which equals −A₂.
    pub as_printed: f64,
    pub determinant: f64,
    /// Set when the drift determinant is exactly zero.
    pub qpt_divergence: bool,
}

pub fn intracavity_photon_number(drift: &EffectiveDrift) -> Result<PhotonNumber> {
    let det = drift.determinant();
    let numerator = drift.damping().powi(2) + drift.shifted_frequency().powi(2);
    if det == 0.0 && drift.trace() < 0.0 {
        return Ok(PhotonNumber {
            n: f64::INFINITY,
            as_printed: f64::NEG_INFINITY,
            determinant: det,
            qpt_divergence: true,
        });
    }
    let moments = closed_form_moments(drift)?;
    Ok(PhotonNumber {
        n: moments.photon_number(),
        as_printed: -numerator / det,
        determinant: det,
        qpt_divergence: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalCoupling {
    /// Ω_c = sqrt(ω_eg (ω_c² + γ²) / (4ω_c))
    pub omega_crit: f64,
    /// U₀c = (ω_c² + γ²) / (4ω_c)
    pub u0_crit: f64,
}

/// Critical collective coupling for α = 0.
pub fn critical_coupling(omega_c: f64, omega_eg: f64, gamma: f64) -> Result<CriticalCoupling> {
    for (name, value) in [("omega_c", omega_c), ("omega_eg", omega_eg), ("gamma", gamma)] {
        if !(value > 0.0) || !value.is_finite() {
            return Err(SqueezeError::NonPositiveFrequency { name, value });
        }
    }
    let u0_crit = (omega_c * omega_c + gamma * gamma) / (4.0 * omega_c);
    Ok(CriticalCoupling { omega_crit: (omega_eg * u0_crit).sqrt(), u0_crit })
}

/// Locate the critical U₀ by bisection on the sign of the drift determinant,
/// holding ω_c, ω_eg, γ and α of `template` fixed. Returns `None` when the
/// system stays stable over `[0, u0_max]`.
pub fn bisect_critical_u0(template: &SystemParams, u0_max: f64, tol: f64) -> Result<Option<f64>> {
    let det_at = |u0: f64| -> Result<f64> {
        Ok(effective_drift(&template.with_u0(u0)?).determinant())
    };
    let mut lo = 0.0;
    let mut hi = u0_max;
    if det_at(lo)? <= 0.0 {
        return Ok(Some(0.0));
    }
    if det_at(hi)? > 0.0 {
        return Ok(None);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if det_at(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// True when the transition is forbidden at every coupling (α ≥ 1: κ ≥ 0 so
/// the determinant never drops below γ² + ω_c²).
pub fn no_go_check(params: &SystemParams) -> bool {
    params.alpha() >= 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    OmegaC,
    U0,
    Alpha,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::OmegaC => "omega_c",
            SweepAxis::U0 => "u0",
            SweepAxis::Alpha => "alpha",
        }
    }

    pub fn apply(&self, template: &SystemParams, value: f64) -> Result<SystemParams> {
        match self {
            SweepAxis::OmegaC => template.with_omega_c(value),
            SweepAxis::U0 => template.with_u0(value),
            SweepAxis::Alpha => template.with_alpha(value),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VarianceRow {
    pub axis_value: f64,
    pub kappa: f64,
    pub stable: bool,
    /// `None` past the transition.
    pub variances: Option<QuadratureVariances>,
}

/// Closed-form quadrature variances along one parameter axis. Unstable points
/// are kept with `stable = false`.
pub fn variance_sweep(
    template: &SystemParams,
    axis: SweepAxis,
    grid: &Grid,
    theta: f64,
) -> Result<Vec<VarianceRow>> {
    if grid.is_empty() {
        return Err(SqueezeError::EmptyRange);
    }
    grid.values()
        .into_par_iter()
        .map(|value| {
            let params = axis.apply(template, value)?;
            let drift = effective_drift(&params);
            let variances = match closed_form_moments(&drift) {
                Ok(m) => Some(quadrature_variances(&m, theta)),
                Err(SqueezeError::UnstableSystem { .. }) => None,
                Err(e) => return Err(e),
            };
            Ok(VarianceRow {
                axis_value: value,
                kappa: params.kappa(),
                stable: variances.is_some(),
                variances,
            })
        })
        .collect()
}
