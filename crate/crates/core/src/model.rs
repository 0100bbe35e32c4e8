//! Physical parameters and the linear drift model left after adiabatic
//! elimination of the atomic bright mode.
//!
//! All frequencies are in units of the cavity field decay rate γ. The atoms
//! enter only through the collective dispersive coupling `U₀ = Ω₀²/ω_eg` and
//! the diamagnetic (A²) strength `D = α U₀`. Their net effect on the field is
//! the single parametric strength `κ = U₀ (α − 1)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SqueezeError};

/// Ratio below which "≪" is considered satisfied.
pub const MUCH_LESS: f64 = 0.1;
/// Ratio above which "≫" is considered satisfied.
pub const MUCH_GREATER: f64 = 10.0;

/// Validated physical inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    omega_c: f64,
    omega_eg: f64,
    omega_0: f64,
    gamma: f64,
    alpha: f64,
}

fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(SqueezeError::NonFinite { name, value })
    }
}

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if finite(name, value)? > 0.0 {
        Ok(value)
    } else {
        Err(SqueezeError::NonPositiveFrequency { name, value })
    }
}

fn non_negative(name: &'static str, value: f64) -> Result<f64> {
    if finite(name, value)? >= 0.0 {
        Ok(value)
    } else {
        Err(SqueezeError::NegativeCoupling { name, value })
    }
}

/// Validate and bundle the physical inputs.
pub fn build_params(
    omega_c: f64,
    omega_eg: f64,
    omega_0: f64,
    gamma: f64,
    alpha: f64,
) -> Result<SystemParams> {
    Ok(SystemParams {
        omega_c: positive("omega_c", omega_c)?,
        omega_eg: positive("omega_eg", omega_eg)?,
        gamma: positive("gamma", gamma)?,
        omega_0: non_negative("omega_0", omega_0)?,
        alpha: non_negative("alpha", alpha)?,
    })
}

impl SystemParams {
    /// Build from the collective dispersive coupling instead of Ω₀, setting
    /// `Ω₀ = sqrt(U₀ ω_eg)`.
    pub fn from_dispersive_coupling(
        omega_c: f64,
        omega_eg: f64,
        u0: f64,
        gamma: f64,
        alpha: f64,
    ) -> Result<Self> {
        let u0 = non_negative("u0", u0)?;
        let omega_eg = positive("omega_eg", omega_eg)?;
        build_params(omega_c, omega_eg, (u0 * omega_eg).sqrt(), gamma, alpha)
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    pub fn omega_eg(&self) -> f64 {
        self.omega_eg
    }

    pub fn omega_0(&self) -> f64 {
        self.omega_0
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Collective dispersive coupling `U₀ = Ω₀²/ω_eg`.
    pub fn u0(&self) -> f64 {
        self.omega_0 * self.omega_0 / self.omega_eg
    }

    /// Effective parametric strength `κ = U₀ (α − 1)`.
    pub fn kappa(&self) -> f64 {
        self.u0() * (self.alpha - 1.0)
    }

    /// Diamagnetic coefficient `D = α U₀`.
    pub fn diamagnetic(&self) -> f64 {
        self.alpha * self.u0()
    }

    pub fn with_omega_c(self, omega_c: f64) -> Result<Self> {
        build_params(omega_c, self.omega_eg, self.omega_0, self.gamma, self.alpha)
    }

    pub fn with_alpha(self, alpha: f64) -> Result<Self> {
        build_params(self.omega_c, self.omega_eg, self.omega_0, self.gamma, alpha)
    }

    pub fn with_u0(self, u0: f64) -> Result<Self> {
        Self::from_dispersive_coupling(self.omega_c, self.omega_eg, u0, self.gamma, self.alpha)
    }
}

/// Coefficients of the linear Langevin system
/// `ȧ = Γ a + Ω_P a† + noise`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveDrift {
    /// Γ = −(i[ω_c + 2κ] + γ)
    pub gamma_coef: Complex64,
    /// Ω_P = −2iκ
    pub omega_p: Complex64,
}

impl EffectiveDrift {
    /// Build directly from the two coefficients, bypassing parameter
    /// validation. Used for integrator checks with switched-off damping.
    pub fn from_coefficients(gamma_coef: Complex64, omega_p: Complex64) -> Self {
        Self { gamma_coef, omega_p }
    }

    /// Drift matrix acting on `(a, a†)`.
    pub fn drift_matrix(&self) -> [[Complex64; 2]; 2] {
        [
            [self.gamma_coef, self.omega_p],
            [self.omega_p.conj(), self.gamma_coef.conj()],
        ]
    }

    /// Damping rate `−Re Γ`.
    pub fn damping(&self) -> f64 {
        -self.gamma_coef.re
    }

    /// Shifted cavity frequency `ω_c + 2κ = −Im Γ`.
    pub fn shifted_frequency(&self) -> f64 {
        -self.gamma_coef.im
    }

    /// `ΓΓ* − |Ω_P|²`, which equals `γ² + ω_c² + 4ω_cκ`.
    pub fn determinant(&self) -> f64 {
        self.gamma_coef.norm_sqr() - self.omega_p.norm_sqr()
    }

    pub fn trace(&self) -> f64 {
        2.0 * self.gamma_coef.re
    }

    pub fn is_stable(&self) -> bool {
        self.determinant() > 0.0 && self.trace() < 0.0
    }

    /// Deterministic part of the drift evaluated at a c-number amplitude.
    #[inline]
    pub fn apply(&self, amplitude: Complex64) -> Complex64 {
        self.gamma_coef * amplitude + self.omega_p * amplitude.conj()
    }
}

pub fn effective_drift(params: &SystemParams) -> EffectiveDrift {
    let kappa = params.kappa();
    EffectiveDrift {
        gamma_coef: -Complex64::new(params.gamma(), params.omega_c() + 2.0 * kappa),
        omega_p: Complex64::new(0.0, -2.0 * kappa),
    }
}

/// Regime flags derived from the RWA-validity inequalities.
///
/// The boolean flags use [`MUCH_LESS`] and [`MUCH_GREATER`]; the raw ratios
/// are exposed so callers can apply their own thresholds. The coupling used is
/// the collective Ω₀, not the single-atom g₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeReport {
    pub dispersive: bool,
    pub adiabatic: bool,
    pub strong_coupling: bool,
    /// Ω₀ / |ω_eg − ω_c|
    pub coupling_to_detuning: f64,
    /// ω_eg / ω_c
    pub atom_to_cavity: f64,
    /// Ω₀ / γ
    pub coupling_to_decay: f64,
}

pub fn classify_regime(params: &SystemParams) -> RegimeReport {
    let detuning = (params.omega_eg() - params.omega_c()).abs();
    let coupling_to_detuning = if detuning > 0.0 {
        params.omega_0() / detuning
    } else if params.omega_0() > 0.0 {
        f64::INFINITY
    } else {
        0.0
    };
    let atom_to_cavity = params.omega_eg() / params.omega_c();
    let coupling_to_decay = params.omega_0() / params.gamma();
    RegimeReport {
        dispersive: coupling_to_detuning < MUCH_LESS,
        adiabatic: atom_to_cavity < MUCH_LESS || atom_to_cavity > MUCH_GREATER,
        strong_coupling: coupling_to_detuning > MUCH_GREATER && coupling_to_decay > MUCH_GREATER,
        coupling_to_detuning,
        atom_to_cavity,
        coupling_to_decay,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    pub eigenvalues: [Complex64; 2],
    pub determinant: f64,
    pub trace: f64,
    /// Both eigenvalues have strictly negative real part.
    pub stable: bool,
}

impl StabilityReport {
    /// Determinant exactly zero: the transition point itself.
    pub fn marginal(&self) -> bool {
        self.determinant == 0.0
    }
}

/// Eigen-analysis of the 2×2 drift matrix.
pub fn stability(params: &SystemParams) -> StabilityReport {
    drift_stability(&effective_drift(params))
}

pub fn drift_stability(drift: &EffectiveDrift) -> StabilityReport {
    let trace = drift.trace();
    let determinant = drift.determinant();
    // λ = tr/2 ± sqrt(tr²/4 − det)
    let half = 0.5 * trace;
    let disc = Complex64::new(half * half - determinant, 0.0).sqrt();
    StabilityReport {
        eigenvalues: [half + disc, half - disc],
        determinant,
        trace,
        stable: trace < 0.0 && determinant > 0.0,
    }
}
