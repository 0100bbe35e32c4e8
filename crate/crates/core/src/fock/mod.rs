//! Exact Lindblad steady state in a truncated photon-number basis.
//!
//! The field-only model left after eliminating the atoms is generated by
//!
//! ```text
//! H = (ω_c + 2κ) a†a + κ (a² + a†²)
//! ρ̇ = −i[H, ρ] + 2γ (a ρ a† − ½{a†a, ρ})
//! ```
//!
//! whose Heisenberg equation for `a` is `ȧ = Γ a + Ω_P a†` plus the vacuum
//! input noise of a decay channel with rate 2γ. Nothing here shares code with
//! the Langevin solvers, which makes it a reference for all of them.

mod band;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SqueezeError};
use crate::model::SystemParams;
use crate::steady_state::{MomentSource, SecondMoments};

use band::BandMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FockConfig {
    /// Basis `|0⟩ … |n_max − 1⟩`.
    pub n_max: usize,
    /// Convergence threshold on moments between successive truncations.
    pub tolerance: f64,
    /// Largest admissible population in the top two Fock levels.
    pub leak_tolerance: f64,
}

impl Default for FockConfig {
    fn default() -> Self {
        Self { n_max: 32, tolerance: 1e-8, leak_tolerance: 1e-10 }
    }
}

impl FockConfig {
    pub fn with_n_max(n_max: usize) -> Self {
        Self { n_max, ..Self::default() }
    }
}

/// Sparse Liouvillian acting on `vec(ρ)` with `ρ_{mn}` at index `m·dim + n`.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    dim: usize,
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl Liouvillian {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Superoperator size `dim²`.
    pub fn size(&self) -> usize {
        self.dim * self.dim
    }

    pub fn rows(&self) -> &[Vec<(usize, Complex64)>] {
        &self.rows
    }

    pub fn apply(&self, rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let d = self.dim;
        assert_eq!(rho.shape(), (d, d));
        DMatrix::from_fn(d, d, |m, n| {
            self.rows[m * d + n]
                .iter()
                .map(|&(j, v)| v * rho[(j / d, j % d)])
                .sum()
        })
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let n = self.size();
        let mut out = DMatrix::zeros(n, n);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                out[(i, j)] += v;
            }
        }
        out
    }

    /// Largest `|Σ_n L[(n,n), j]|` over columns: zero when the adjoint
    /// annihilates the identity, i.e. the generator preserves trace.
    pub fn trace_defect(&self) -> f64 {
        let mut sums = vec![Complex64::new(0.0, 0.0); self.size()];
        for n in 0..self.dim {
            for &(j, v) in &self.rows[n * self.dim + n] {
                sums[j] += v;
            }
        }
        sums.iter().map(|s| s.norm()).fold(0.0, f64::max)
    }

    fn max_entry(&self) -> f64 {
        self.rows.iter().flatten().map(|(_, v)| v.norm()).fold(0.0, f64::max)
    }
}

pub fn build_liouvillian(params: &SystemParams, config: &FockConfig) -> Result<Liouvillian> {
    let d = config.n_max;
    if d < 4 {
        return Err(SqueezeError::TruncationTooSmall { n_max: d });
    }
    let gamma = params.gamma();
    let kappa = params.kappa();
    let shifted = params.omega_c() + 2.0 * kappa;
    let i = Complex64::new(0.0, 1.0);
    let idx = |m: usize, n: usize| m * d + n;
    let sqrt2 = |k: usize| ((k * (k + 1)) as f64).sqrt(); // sqrt(k (k + 1))
    let mut rows = Vec::with_capacity(d * d);
    for m in 0..d {
        for n in 0..d {
            let mut row = Vec::with_capacity(6);
            let (mf, nf) = (m as f64, n as f64);
            row.push((idx(m, n), -i * shifted * (mf - nf) - gamma * (mf + nf)));
            if kappa != 0.0 {
                if m + 2 < d {
                    row.push((idx(m + 2, n), -i * kappa * sqrt2(m + 1)));
                }
                if m >= 2 {
                    row.push((idx(m - 2, n), -i * kappa * sqrt2(m - 1)));
                }
                if n + 2 < d {
                    row.push((idx(m, n + 2), i * kappa * sqrt2(n + 1)));
                }
                if n >= 2 {
                    row.push((idx(m, n - 2), i * kappa * sqrt2(n - 1)));
                }
            }
            if m + 1 < d && n + 1 < d {
                let rate = 2.0 * gamma * (((m + 1) * (n + 1)) as f64).sqrt();
                row.push((idx(m + 1, n + 1), Complex64::new(rate, 0.0)));
            }
            rows.push(row);
        }
    }
    Ok(Liouvillian { dim: d, rows })
}

/// Truncated density matrix, `elements[(m, n)] = ρ_{mn}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub dim: usize,
    pub elements: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn from_elements(elements: DMatrix<Complex64>) -> Self {
        assert!(elements.is_square());
        Self { dim: elements.nrows(), elements }
    }

    /// Projector onto `|n⟩`.
    pub fn fock(dim: usize, n: usize) -> Self {
        let mut elements = DMatrix::zeros(dim, dim);
        elements[(n, n)] = Complex64::new(1.0, 0.0);
        Self::from_elements(elements)
    }

    pub fn trace(&self) -> Complex64 {
        self.elements.trace()
    }

    /// Largest `|ρ − ρ†|` entry.
    pub fn hermiticity_error(&self) -> f64 {
        (&self.elements - self.elements.adjoint()).iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let hermitian = (&self.elements + self.elements.adjoint()) * Complex64::new(0.5, 0.0);
        hermitian.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn population(&self, n: usize) -> f64 {
        self.elements[(n, n)].re
    }

    /// Population of the two highest Fock levels.
    pub fn top_population(&self) -> f64 {
        self.population(self.dim - 1) + self.population(self.dim - 2)
    }

    /// ⟨a†a⟩
    pub fn mean_photon_number(&self) -> f64 {
        (0..self.dim).map(|n| n as f64 * self.population(n)).sum()
    }

    /// ⟨a²⟩ = Σ_n sqrt((n+1)(n+2)) ρ_{n+2,n}
    pub fn a_squared(&self) -> Complex64 {
        (0..self.dim.saturating_sub(2))
            .map(|n| self.elements[(n + 2, n)] * (((n + 1) * (n + 2)) as f64).sqrt())
            .sum()
    }

    /// ⟨a†² a²⟩ = Σ_n n (n − 1) ρ_nn
    pub fn normal_fourth_moment(&self) -> f64 {
        (0..self.dim).map(|n| (n * n.saturating_sub(1)) as f64 * self.population(n)).sum()
    }
}

/// Trace-one null vector of the Liouvillian.
///
/// The equation for `ρ_00` is replaced by the normalization `ρ_00 = 1` (the
/// trace functional makes it redundant), the banded system is solved, and the
/// result rescaled to unit trace. A vanishing pivot means the null space is
/// not one-dimensional.
pub fn steady_state_density_matrix(liouvillian: &Liouvillian, config: &FockConfig) -> Result<DensityMatrix> {
    let d = liouvillian.dim;
    let n = liouvillian.size();
    let band = 2 * d;
    let scale = liouvillian.max_entry().max(1.0);
    let mut matrix = BandMatrix::zeros(n, band, band);
    for (i, row) in liouvillian.rows.iter().enumerate() {
        for &(j, v) in row {
            matrix.set(i, j, v);
        }
    }
    matrix.clear_row(0);
    matrix.set(0, 0, Complex64::new(1.0, 0.0));
    let mut rhs = vec![Complex64::new(0.0, 0.0); n];
    rhs[0] = Complex64::new(1.0, 0.0);
    let solution = matrix
        .solve(rhs, 1e-13 * scale)
        .map_err(|_| SqueezeError::DegenerateSteadyState)?;

    let mut elements = DMatrix::from_fn(d, d, |m, k| solution[m * d + k]);
    let trace = elements.trace();
    if !(trace.norm() > 0.0) || !trace.re.is_finite() {
        return Err(SqueezeError::NoConvergence(format!("steady-state trace {trace}")));
    }
    elements /= trace;
    let rho = DensityMatrix::from_elements(elements);

    let residual = liouvillian.apply(&rho.elements).iter().map(|v| v.norm()).fold(0.0, f64::max);
    if residual > 1e-9 * scale {
        return Err(SqueezeError::NoConvergence(format!(
            "steady-state residual {residual:e} at n_max = {}",
            config.n_max
        )));
    }
    Ok(rho)
}

/// Moments without the truncation-edge check.
fn raw_moments(rho: &DensityMatrix) -> SecondMoments {
    SecondMoments::new(rho.a_squared(), 2.0 * rho.mean_photon_number() + 1.0, MomentSource::FockOracle)
}

/// ⟨a²⟩ and ⟨aa† + a†a⟩ = 2⟨a†a⟩ + 1, refusing states that populate the
/// truncation edge.
pub fn oracle_moments(rho: &DensityMatrix, config: &FockConfig) -> Result<SecondMoments> {
    let population = rho.top_population();
    if population > config.leak_tolerance {
        return Err(SqueezeError::TruncationLeak { population, tolerance: config.leak_tolerance });
    }
    Ok(raw_moments(rho))
}

/// Build, solve and extract moments at one truncation.
pub fn solve_oracle(params: &SystemParams, config: &FockConfig) -> Result<(DensityMatrix, SecondMoments)> {
    let liouvillian = build_liouvillian(params, config)?;
    let rho = steady_state_density_matrix(&liouvillian, config)?;
    let moments = oracle_moments(&rho, config)?;
    Ok((rho, moments))
}

/// Try increasing truncations until the edge population is acceptable.
pub fn solve_adaptive(params: &SystemParams, ladder: &[usize], base: &FockConfig) -> Result<(usize, SecondMoments)> {
    let mut last_err = SqueezeError::EmptyRange;
    for &n_max in ladder {
        let config = FockConfig { n_max, ..*base };
        match solve_oracle(params, &config) {
            Ok((_, moments)) => return Ok((n_max, moments)),
            Err(e @ SqueezeError::TruncationLeak { .. }) => last_err = e,
            Err(e) => return Err(e),
        }
    }
    Err(last_err)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n_max: usize,
    pub moments: SecondMoments,
    pub top_population: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// First truncation whose moments differ from the previous one by less
    /// than the tolerance.
    pub converged_at: usize,
}

/// Tabulate moments against truncation.
pub fn convergence_check(params: &SystemParams, n_max_list: &[usize], config: &FockConfig) -> Result<ConvergenceReport> {
    if n_max_list.is_empty() {
        return Err(SqueezeError::EmptyRange);
    }
    if n_max_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SqueezeError::InvalidConfig("n_max list must be strictly ascending".into()));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(n_max_list.len());
    let mut converged_at = None;
    for &n_max in n_max_list {
        let cfg = FockConfig { n_max, ..*config };
        let rho = steady_state_density_matrix(&build_liouvillian(params, &cfg)?, &cfg)?;
        let moments = raw_moments(&rho);
        if let Some(prev) = rows.last() {
            let change = (moments.sym_number - prev.moments.sym_number)
                .abs()
                .max((moments.a_sq - prev.moments.a_sq).norm());
            if converged_at.is_none() && change < config.tolerance {
                converged_at = Some(n_max);
            }
        }
        rows.push(ConvergenceRow { n_max, moments, top_population: rho.top_population() });
    }
    match converged_at {
        Some(converged_at) => Ok(ConvergenceReport { rows, converged_at }),
        None => {
            let last = rows.last().expect("non-empty");
            Err(SqueezeError::NoConvergence(format!(
                "moments still changing at n_max = {} (A2 = {}, top population {:e})",
                last.n_max, last.moments.sym_number, last.top_population
            )))
        }
    }
}
