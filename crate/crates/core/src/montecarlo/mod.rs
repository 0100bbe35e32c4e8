//! Phase-space ensemble simulation of the linear Langevin system.
//!
//! The c-number amplitude α obeys
//!
//! ```text
//! dα = (Γ α + Ω_P α*) dt + dW,   ⟨dW dW*⟩ = γ dt,   ⟨dW dW⟩ = 0
//! ```
//!
//! For linear dynamics with Gaussian noise this reproduces symmetrized
//! operator moments exactly: `⟨α²⟩ ↔ ⟨a²⟩` and `2⟨|α|²⟩ ↔ ⟨aa† + a†a⟩`.
//!
//! Every trajectory draws its noise from its own stream keyed by
//! `(seed, trajectory_index)`, and ensemble reductions run in index order, so
//! results do not depend on the thread schedule. Trajectories are advanced in
//! small lockstep batches; each lane is computed independently, so the
//! batching never changes a trajectory's values.

mod stats;

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SqueezeError};
use crate::model::EffectiveDrift;
use crate::steady_state::{MomentErrors, MomentSource, SecondMoments};

pub use stats::{jackknife_mean, Estimate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// First order in dt for stationary moments.
    EulerMaruyama,
    /// Predictor–corrector (trapezoidal drift, same increments). Second order
    /// in dt for stationary moments of linear systems.
    Heun,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryConfig {
    /// Integration step [1/γ].
    pub dt: f64,
    /// Discarded transient [1/γ].
    pub t_burn: f64,
    /// Sampled duration [1/γ].
    pub t_sample: f64,
    pub n_traj: usize,
    pub seed: u64,
    pub scheme: Scheme,
}

impl Default for TrajectoryConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            t_burn: 20.0,
            t_sample: 200.0,
            n_traj: 4096,
            seed: 42,
            scheme: Scheme::Heun,
        }
    }
}

impl TrajectoryConfig {
    /// Largest admissible step: `0.01 / max(γ, |ω_c + 2κ|)`.
    pub fn max_dt(drift: &EffectiveDrift, gamma: f64) -> f64 {
        0.01 / gamma.max(drift.shifted_frequency().abs())
    }

    pub fn validate(&self, drift: &EffectiveDrift, gamma: f64) -> Result<()> {
        if !drift.is_stable() {
            return Err(SqueezeError::UnstableSystem { determinant: drift.determinant() });
        }
        if !(self.dt > 0.0) {
            return Err(SqueezeError::InvalidConfig(format!("dt must be positive, got {}", self.dt)));
        }
        let max = Self::max_dt(drift, gamma);
        if self.dt > max {
            return Err(SqueezeError::StepTooLarge { dt: self.dt, max });
        }
        if !(self.t_burn >= 10.0 / gamma) {
            return Err(SqueezeError::InvalidConfig(format!(
                "t_burn = {} is shorter than 10/gamma",
                self.t_burn
            )));
        }
        if !(self.t_sample > 0.0) || self.sample_steps() < 1 {
            return Err(SqueezeError::InvalidConfig(format!(
                "t_sample = {} yields no samples",
                self.t_sample
            )));
        }
        if self.n_traj < 2 {
            return Err(SqueezeError::InvalidConfig(format!(
                "n_traj must be at least 2, got {}",
                self.n_traj
            )));
        }
        Ok(())
    }

    pub fn burn_steps(&self) -> usize {
        (self.t_burn / self.dt).ceil() as usize
    }

    pub fn sample_steps(&self) -> usize {
        (self.t_sample / self.dt).round() as usize
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Noise stream of one trajectory, a pure function of `(seed, index)`.
pub fn trajectory_rng(seed: u64, trajectory_index: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(splitmix64(seed) ^ splitmix64(!trajectory_index))
}

/// Trajectories advanced together by one worker.
const LANES: usize = 4;

/// Single-step update rule for the amplitude SDE.
///
/// The drift is linear, so both schemes reduce to a real affine map on
/// `(Re α, Im α)`: `x' = P x + Q w` with `L` the real form of
/// `α ↦ Γα + Ω_P α*`,
///
/// ```text
/// Euler–Maruyama:  P = I + L dt,                 Q = I
/// Heun:            P = I + L dt + (L dt)²/2,     Q = I + L dt/2
/// ```
#[derive(Debug, Clone, Copy)]
pub struct Integrator {
    dt: f64,
    /// Standard deviation of each real component of dW.
    noise_sigma: f64,
    propagator: [[f64; 2]; 2],
    noise_map: [[f64; 2]; 2],
}

type Real2 = [[f64; 2]; 2];

fn mat_mul(a: &Real2, b: &Real2) -> Real2 {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

impl Integrator {
    pub fn new(drift: EffectiveDrift, gamma: f64, dt: f64, scheme: Scheme) -> Self {
        let g = drift.gamma_coef;
        let p = drift.omega_p;
        let ldt = [
            [(g.re + p.re) * dt, (p.im - g.im) * dt],
            [(g.im + p.im) * dt, (g.re - p.re) * dt],
        ];
        let (propagator, noise_map) = match scheme {
            Scheme::EulerMaruyama => (
                [[1.0 + ldt[0][0], ldt[0][1]], [ldt[1][0], 1.0 + ldt[1][1]]],
                [[1.0, 0.0], [0.0, 1.0]],
            ),
            Scheme::Heun => {
                let sq = mat_mul(&ldt, &ldt);
                (
                    [
                        [1.0 + ldt[0][0] + 0.5 * sq[0][0], ldt[0][1] + 0.5 * sq[0][1]],
                        [ldt[1][0] + 0.5 * sq[1][0], 1.0 + ldt[1][1] + 0.5 * sq[1][1]],
                    ],
                    [
                        [1.0 + 0.5 * ldt[0][0], 0.5 * ldt[0][1]],
                        [0.5 * ldt[1][0], 1.0 + 0.5 * ldt[1][1]],
                    ],
                )
            }
        };
        Self { dt, noise_sigma: (0.5 * gamma * dt).sqrt(), propagator, noise_map }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Draw a complex Wiener increment with `⟨|dW|²⟩ = γ dt`.
    #[inline]
    pub fn increment<R: rand::Rng>(&self, rng: &mut R) -> Complex64 {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(self.noise_sigma * re, self.noise_sigma * im)
    }

    #[inline]
    pub fn step(&self, alpha: Complex64, dw: Complex64) -> Complex64 {
        let p = &self.propagator;
        let q = &self.noise_map;
        Complex64::new(
            p[0][0] * alpha.re + p[0][1] * alpha.im + q[0][0] * dw.re + q[0][1] * dw.im,
            p[1][0] * alpha.re + p[1][1] * alpha.im + q[1][0] * dw.re + q[1][1] * dw.im,
        )
    }
}

/// Integrate trajectories `first..first + lanes` from α = 0 through burn-in,
/// calling `visit(lane, α_k, α_{k+1}, dW_k)` for each step of the sampling
/// window.
fn run_batch<F>(integrator: &Integrator, config: &TrajectoryConfig, first: u64, lanes: usize, mut visit: F)
where
    F: FnMut(usize, Complex64, Complex64, Complex64),
{
    debug_assert!(lanes <= LANES);
    let mut rngs: Vec<Xoshiro256PlusPlus> = (0..lanes as u64).map(|l| trajectory_rng(config.seed, first + l)).collect();
    let mut alpha = [Complex64::new(0.0, 0.0); LANES];
    for _ in 0..config.burn_steps() {
        for (a, rng) in alpha.iter_mut().zip(rngs.iter_mut()) {
            let dw = integrator.increment(rng);
            *a = integrator.step(*a, dw);
        }
    }
    for _ in 0..config.sample_steps() {
        for (lane, rng) in rngs.iter_mut().enumerate() {
            let dw = integrator.increment(rng);
            let next = integrator.step(alpha[lane], dw);
            visit(lane, alpha[lane], next, dw);
            alpha[lane] = next;
        }
    }
}

/// Map `per_batch` over lockstep batches covering `0..n_traj` and return
/// per-trajectory results in index order.
fn map_trajectories<T, F>(n_traj: usize, per_batch: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, usize) -> Vec<T> + Sync,
{
    let n_batches = n_traj.div_ceil(LANES);
    let batches: Vec<Vec<T>> = (0..n_batches)
        .into_par_iter()
        .map(|b| {
            let first = b * LANES;
            per_batch(first as u64, LANES.min(n_traj - first))
        })
        .collect();
    batches.into_iter().flatten().collect()
}

/// Amplitude samples α(t) over the sampling window (one per step, the first
/// taken at the end of burn-in). Bit-identical for identical inputs.
pub fn simulate_trajectory(
    drift: &EffectiveDrift,
    gamma: f64,
    config: &TrajectoryConfig,
    trajectory_index: u64,
) -> Result<Vec<Complex64>> {
    config.validate(drift, gamma)?;
    let integrator = Integrator::new(*drift, gamma, config.dt, config.scheme);
    let mut samples = Vec::with_capacity(config.sample_steps());
    run_batch(&integrator, config, trajectory_index, 1, |_, alpha, _, _| samples.push(alpha));
    if samples.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
        return Err(SqueezeError::UnstableSystem { determinant: drift.determinant() });
    }
    Ok(samples)
}

/// Ensemble spectral estimate at one frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumEstimate {
    pub omega: f64,
    pub s1: Estimate,
    pub s2: Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleEstimate {
    pub moments: SecondMoments,
    pub spectrum: Option<Vec<SpectrumEstimate>>,
    /// Bandwidth-normalized output power `τ⟨|ᾱ_out|²⟩` of the block-averaged
    /// output field; 1/2 for vacuum.
    pub output_power: Option<Estimate>,
}

#[derive(Debug, Clone, Copy, Default)]
struct MomentSums {
    a_sq: Complex64,
    abs_sq: f64,
    count: usize,
}

impl MomentSums {
    #[inline]
    fn push(&mut self, alpha: Complex64) {
        self.a_sq += alpha * alpha;
        self.abs_sq += alpha.norm_sqr();
        self.count += 1;
    }

    /// Per-trajectory time averages: (Re⟨α²⟩, Im⟨α²⟩, 2⟨|α|²⟩).
    fn averages(&self) -> [f64; 3] {
        let n = self.count as f64;
        [self.a_sq.re / n, self.a_sq.im / n, 2.0 * self.abs_sq / n]
    }
}

fn moments_from(per_traj: &[[f64; 3]]) -> SecondMoments {
    let column = |k: usize| -> Estimate {
        let values: Vec<f64> = per_traj.iter().map(|v| v[k]).collect();
        jackknife_mean(&values)
    };
    let re = column(0);
    let im = column(1);
    let sym = column(2);
    let mut moments = SecondMoments::new(Complex64::new(re.mean, im.mean), sym.mean, MomentSource::MonteCarlo);
    moments.stderr = Some(MomentErrors { a_sq_re: re.stderr, a_sq_im: im.stderr, sym_number: sym.stderr });
    moments
}

fn check_finite(per_traj: &[[f64; 3]], drift: &EffectiveDrift) -> Result<()> {
    if per_traj.iter().flatten().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(SqueezeError::UnstableSystem { determinant: drift.determinant() })
    }
}

/// Time-and-ensemble averaged second moments with jackknife errors over
/// trajectories.
pub fn ensemble_moments(drift: &EffectiveDrift, gamma: f64, config: &TrajectoryConfig) -> Result<EnsembleEstimate> {
    config.validate(drift, gamma)?;
    let integrator = Integrator::new(*drift, gamma, config.dt, config.scheme);
    let per_traj: Vec<[f64; 3]> = map_trajectories(config.n_traj, |first, lanes| {
        let mut sums = [MomentSums::default(); LANES];
        run_batch(&integrator, config, first, lanes, |lane, alpha, _, _| sums[lane].push(alpha));
        sums[..lanes].iter().map(MomentSums::averages).collect()
    });
    check_finite(&per_traj, drift)?;
    Ok(EnsembleEstimate { moments: moments_from(&per_traj), spectrum: None, output_power: None })
}

/// Welch layout of the block-averaged output signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelchLayout {
    /// Integration steps per output sample.
    pub block_steps: usize,
    /// Output samples per segment.
    pub segment_len: usize,
    /// Segment starts advance by half a segment.
    pub n_segments: usize,
}

impl WelchLayout {
    /// Output samples are averages over blocks of duration τ ≤ 0.1/ω_max
    /// (capped at 0.05/γ), which keeps the block-averaging filter within
    /// 1 − (ωτ)²/24 of unity on the grid. Segments span half the sampling
    /// window with 50% overlap.
    pub fn for_grid(config: &TrajectoryConfig, gamma: f64, omega_max: f64) -> Result<Self> {
        let mut tau = 0.05 / gamma;
        if omega_max > 0.0 {
            tau = tau.min(0.1 / omega_max);
        }
        let block_steps = ((tau / config.dt).floor() as usize).max(1);
        let n_blocks = config.sample_steps() / block_steps;
        let segment_len = n_blocks / 2;
        if segment_len < 8 {
            return Err(SqueezeError::InvalidConfig(format!(
                "sampling window too short for a spectral estimate ({n_blocks} output samples)"
            )));
        }
        let hop = segment_len / 2;
        let n_segments = (n_blocks - segment_len) / hop + 1;
        Ok(Self { block_steps, segment_len, n_segments })
    }

    pub fn block_duration(&self, dt: f64) -> f64 {
        self.block_steps as f64 * dt
    }

    /// Frequency resolution `2π / T_segment`.
    pub fn resolution(&self, dt: f64) -> f64 {
        TAU / (self.segment_len as f64 * self.block_duration(dt))
    }
}

fn hann(len: usize) -> Vec<f64> {
    (0..len)
        .map(|j| (PI * j as f64 / len as f64).sin().powi(2))
        .collect()
}

/// Window-weighted Fourier kernels `w_j e^{iωτj}` for one frequency.
fn fourier_kernel(window: &[f64], tau: f64, omega: f64) -> Vec<Complex64> {
    window
        .iter()
        .enumerate()
        .map(|(j, w)| Complex64::from_polar(*w, omega * tau * j as f64))
        .collect()
}

/// Windowed periodograms `τ |Σ w_j x_j e^{iωτj}|² / Σ w_j²` of both
/// quadratures of one segment.
fn segment_periodogram(segment: &[Complex64], kernel: &[Complex64], scale: f64) -> (f64, f64) {
    let mut f1 = Complex64::new(0.0, 0.0);
    let mut f2 = Complex64::new(0.0, 0.0);
    for (y, k) in segment.iter().zip(kernel) {
        f1 += k * y.re;
        f2 += k * y.im;
    }
    (scale * f1.norm_sqr(), scale * f2.norm_sqr())
}

/// Output-field quadrature spectra at θ = 0 (S₁ from Re α_out, S₂ from
/// Im α_out), estimated by Welch-averaged Hann periodograms of
/// `α_out = √(2γ) α − α_in`, where the input noise is built from the same
/// increments that drive α. Both sides are block-averaged over τ:
///
/// ```text
/// ᾱ_out = [√(2γ) ∫α dt − Σ dW / √(2γ)] / τ
/// ```
pub fn ensemble_spectrum(
    drift: &EffectiveDrift,
    gamma: f64,
    config: &TrajectoryConfig,
    omegas: &[f64],
) -> Result<EnsembleEstimate> {
    config.validate(drift, gamma)?;
    if omegas.is_empty() {
        return Err(SqueezeError::EmptyRange);
    }
    let omega_max = omegas.iter().fold(0.0f64, |m, w| m.max(w.abs()));
    let layout = WelchLayout::for_grid(config, gamma, omega_max)?;
    let resolution = layout.resolution(config.dt);
    let mut sorted = omegas.to_vec();
    sorted.sort_by(f64::total_cmp);
    for pair in sorted.windows(2) {
        let spacing = pair[1] - pair[0];
        if spacing > 0.0 && spacing < resolution {
            return Err(SqueezeError::GridTooFine { spacing, resolution });
        }
    }

    let integrator = Integrator::new(*drift, gamma, config.dt, config.scheme);
    let tau = layout.block_duration(config.dt);
    let window = hann(layout.segment_len);
    let scale = tau / window.iter().map(|w| w * w).sum::<f64>();
    let kernels: Vec<Vec<Complex64>> = omegas.iter().map(|&w| fourier_kernel(&window, tau, w)).collect();
    let root = (2.0 * gamma).sqrt();
    let half_dt = 0.5 * config.dt;
    let hop = layout.segment_len / 2;
    let n_blocks = layout.segment_len + (layout.n_segments - 1) * hop;

    struct PerTrajectory {
        moments: [f64; 3],
        power: f64,
        s1: Vec<f64>,
        s2: Vec<f64>,
    }

    #[derive(Clone)]
    struct Lane {
        sums: MomentSums,
        blocks: Vec<Complex64>,
        field_integral: Complex64,
        noise_sum: Complex64,
        in_block: usize,
    }

    let per_traj: Vec<PerTrajectory> = map_trajectories(config.n_traj, |first, lanes| {
        let fresh = Lane {
            sums: MomentSums::default(),
            blocks: Vec::with_capacity(n_blocks),
            field_integral: Complex64::new(0.0, 0.0),
            noise_sum: Complex64::new(0.0, 0.0),
            in_block: 0,
        };
        let mut state = vec![fresh; lanes];
        run_batch(&integrator, config, first, lanes, |lane, alpha, next, dw| {
            let st = &mut state[lane];
            st.sums.push(alpha);
            if st.blocks.len() == n_blocks {
                return;
            }
            st.field_integral += (alpha + next) * half_dt;
            st.noise_sum += dw;
            st.in_block += 1;
            if st.in_block == layout.block_steps {
                st.blocks.push((st.field_integral * root - st.noise_sum / root) / tau);
                st.field_integral = Complex64::new(0.0, 0.0);
                st.noise_sum = Complex64::new(0.0, 0.0);
                st.in_block = 0;
            }
        });
        state
            .into_iter()
            .map(|st| {
                let blocks = st.blocks;
                let power = tau * blocks.iter().map(|y| y.norm_sqr()).sum::<f64>() / blocks.len() as f64;
                let mut s1 = vec![0.0; omegas.len()];
                let mut s2 = vec![0.0; omegas.len()];
                for seg in 0..layout.n_segments {
                    let segment = &blocks[seg * hop..seg * hop + layout.segment_len];
                    for (k, kernel) in kernels.iter().enumerate() {
                        let (p1, p2) = segment_periodogram(segment, kernel, scale);
                        s1[k] += p1;
                        s2[k] += p2;
                    }
                }
                let n_seg = layout.n_segments as f64;
                s1.iter_mut().chain(s2.iter_mut()).for_each(|v| *v /= n_seg);
                PerTrajectory { moments: st.sums.averages(), power, s1, s2 }
            })
            .collect()
    });

    let moment_rows: Vec<[f64; 3]> = per_traj.iter().map(|p| p.moments).collect();
    check_finite(&moment_rows, drift)?;
    let spectrum = omegas
        .iter()
        .enumerate()
        .map(|(k, &omega)| {
            let s1: Vec<f64> = per_traj.iter().map(|p| p.s1[k]).collect();
            let s2: Vec<f64> = per_traj.iter().map(|p| p.s2[k]).collect();
            SpectrumEstimate { omega, s1: jackknife_mean(&s1), s2: jackknife_mean(&s2) }
        })
        .collect();
    let power: Vec<f64> = per_traj.iter().map(|p| p.power).collect();
    Ok(EnsembleEstimate {
        moments: moments_from(&moment_rows),
        spectrum: Some(spectrum),
        output_power: Some(jackknife_mean(&power)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{effective_drift, SystemParams};

    fn drift(omega_c: f64, u0: f64, alpha: f64) -> EffectiveDrift {
        effective_drift(&SystemParams::from_dispersive_coupling(omega_c, 100.0, u0, 1.0, alpha).unwrap())
    }

    fn small() -> TrajectoryConfig {
        TrajectoryConfig { dt: 2e-3, t_burn: 10.0, t_sample: 20.0, n_traj: 8, ..Default::default() }
    }

    #[test]
    fn deterministic_rotation() {
        let omega_c = 1.7;
        let rotor = EffectiveDrift::from_coefficients(Complex64::new(0.0, -omega_c), Complex64::new(0.0, 0.0));
        let start = Complex64::new(0.6, -0.3);
        for (scheme, tol) in [(Scheme::Heun, 1e-6), (Scheme::EulerMaruyama, 5e-3)] {
            let integrator = Integrator::new(rotor, 0.0, 1e-3, scheme);
            let mut alpha = start;
            for _ in 0..1000 {
                alpha = integrator.step(alpha, Complex64::new(0.0, 0.0));
            }
            let exact = start * Complex64::from_polar(1.0, -omega_c);
            assert!((alpha - exact).norm() < tol, "{scheme:?}: {}", (alpha - exact).norm());
        }
    }

    #[test]
    fn increments_have_the_stated_variance() {
        let integrator = Integrator::new(drift(1.0, 0.0, 0.0), 2.0, 0.01, Scheme::Heun);
        let mut rng = trajectory_rng(7, 0);
        let n = 200_000;
        let (mut abs2, mut sq) = (0.0, Complex64::new(0.0, 0.0));
        for _ in 0..n {
            let dw = integrator.increment(&mut rng);
            abs2 += dw.norm_sqr();
            sq += dw * dw;
        }
        let gamma_dt = 2.0 * 0.01;
        assert!((abs2 / n as f64 / gamma_dt - 1.0).abs() < 0.01);
        assert!((sq / n as f64).norm() / gamma_dt < 0.01);
    }

    #[test]
    fn trajectories_are_reproducible_and_distinct() {
        let d = drift(1.0, 1.1, 1.2);
        let a = simulate_trajectory(&d, 1.0, &small(), 3).unwrap();
        let b = simulate_trajectory(&d, 1.0, &small(), 3).unwrap();
        let c = simulate_trajectory(&d, 1.0, &small(), 4).unwrap();
        assert_eq!(a.len(), 10_000);
        assert!(a.iter().zip(&b).all(|(x, y)| x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits()));
        assert_ne!(a, c);
    }

    #[test]
    fn config_validation() {
        let d = drift(1.0, 0.01, 0.0);
        let ok = small();
        assert!(ok.validate(&d, 1.0).is_ok());
        let big = TrajectoryConfig { dt: 0.02, ..ok };
        assert!(matches!(big.validate(&d, 1.0), Err(SqueezeError::StepTooLarge { .. })));
        let short = TrajectoryConfig { t_burn: 5.0, ..ok };
        assert!(matches!(short.validate(&d, 1.0), Err(SqueezeError::InvalidConfig(_))));
        let lonely = TrajectoryConfig { n_traj: 1, ..ok };
        assert!(matches!(lonely.validate(&d, 1.0), Err(SqueezeError::InvalidConfig(_))));
        let unstable = drift(1.0, 0.7, 0.0);
        assert!(matches!(ok.validate(&unstable, 1.0), Err(SqueezeError::UnstableSystem { .. })));
    }

    #[test]
    fn ensemble_is_schedule_independent() {
        let d = drift(1.0, 1.1, 1.2);
        let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let parallel = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let a = serial.install(|| ensemble_moments(&d, 1.0, &small())).unwrap();
        let b = parallel.install(|| ensemble_moments(&d, 1.0, &small())).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn spectrum_grid_checks() {
        let d = drift(1.0, 0.1, 0.0);
        let cfg = small();
        assert!(matches!(ensemble_spectrum(&d, 1.0, &cfg, &[]), Err(SqueezeError::EmptyRange)));
        assert!(matches!(
            ensemble_spectrum(&d, 1.0, &cfg, &[0.0, 0.01]),
            Err(SqueezeError::GridTooFine { .. })
        ));
    }

    #[test]
    fn welch_layout() {
        let cfg = TrajectoryConfig::default();
        let layout = WelchLayout::for_grid(&cfg, 1.0, 5.0).unwrap();
        assert_eq!(layout.block_steps, 20);
        assert_eq!(layout.segment_len, 5000);
        assert_eq!(layout.n_segments, 3);
        assert!((layout.resolution(cfg.dt) - TAU / 100.0).abs() < 1e-12);
    }
}
