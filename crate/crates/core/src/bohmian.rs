//! Bohmian trajectories of the two coupled oscillators.
//!
//! The reduced guidance field
//!
//! `v₁ = −(ħ/m) x₂ cos sin / D`, `v₂ = +(ħ/m) x₁ cos sin / D`,
//! `D = x₁² sin²(δω t) + x₂² cos²(δω t)`,
//!
//! follows from the reduced phase `S = −ħ [atan2(x₁ sin, x₂ cos) − 2ω̄t]`.
//! It is singular where `D` vanishes; integration refuses to step closer than
//! [`singularity_floor`].

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DerivedFrequencies, OscillatorParams};
use crate::observables::{marginal_closed_form, MarginalIntegrator, Particle};
use crate::ode::{solve, OdeError, OdeProblem, OdeSolution, SolverOptions, SolverStats, StepRecord};
use crate::spectral::{FirstOrderForm, Wavefunction};

/// Singularity floor in units of `ħ/(mω̄)`.
pub const SINGULARITY_FLOOR_FACTOR: f64 = 1e-10;

/// `ε_D = 10⁻¹⁰ ħ/(mω̄)`.
pub fn singularity_floor(params: &OscillatorParams, freqs: &DerivedFrequencies) -> f64 {
    SINGULARITY_FLOOR_FACTOR * params.hbar / (params.m * freqs.omega_bar)
}

pub fn guidance_denominator(x1: f64, x2: f64, t: f64, freqs: &DerivedFrequencies) -> f64 {
    let (s, c) = (freqs.delta_omega * t).sin_cos();
    x1 * x1 * s * s + x2 * x2 * c * c
}

/// Reduced phase on the principal branch, in `(−πħ, πħ] + 2ħω̄t`.
pub fn phase_s(x1: f64, x2: f64, t: f64, params: &OscillatorParams, freqs: &DerivedFrequencies) -> Result<f64> {
    let (s, c) = (freqs.delta_omega * t).sin_cos();
    let (a, b) = (x1 * s, x2 * c);
    if a * a + b * b < singularity_floor(params, freqs) {
        return Err(Error::UndefinedPhase { x1, x2, t });
    }
    Ok(-params.hbar * (a.atan2(b) - 2.0 * freqs.omega_bar * t))
}

/// Analytic `∇S`.
pub fn phase_gradient(x1: f64, x2: f64, t: f64, params: &OscillatorParams, freqs: &DerivedFrequencies) -> Result<[f64; 2]> {
    let den = guidance_denominator(x1, x2, t, freqs);
    if den < singularity_floor(params, freqs) {
        return Err(Error::UndefinedPhase { x1, x2, t });
    }
    let (s, c) = (freqs.delta_omega * t).sin_cos();
    let g = params.hbar * s * c / den;
    Ok([-g * x2, g * x1])
}

/// Keeps `S` continuous along a sequence of nearby points by removing
/// `2πħ` jumps.
#[derive(Debug, Clone, Default)]
pub struct PhaseUnwrapper {
    last: Option<f64>,
}

impl PhaseUnwrapper {
    pub fn next(&mut self, x1: f64, x2: f64, t: f64, params: &OscillatorParams, freqs: &DerivedFrequencies) -> Result<f64> {
        let raw = phase_s(x1, x2, t, params, freqs)?;
        let period = 2.0 * PI * params.hbar;
        let s = match self.last {
            Some(prev) => raw + period * ((prev - raw) / period).round(),
            None => raw,
        };
        self.last = Some(s);
        Ok(s)
    }
}

/// Reduced guidance velocities `(v₁, v₂)`.
pub fn guidance_field(x1: f64, x2: f64, t: f64, params: &OscillatorParams, freqs: &DerivedFrequencies) -> Result<[f64; 2]> {
    let den = guidance_denominator(x1, x2, t, freqs);
    if !(den >= singularity_floor(params, freqs)) {
        return Err(Error::Singularity {
            t,
            x1,
            x2,
            last_good_t: t,
        });
    }
    let (s, c) = (freqs.delta_omega * t).sin_cos();
    let g = params.hbar / params.m * s * c / den;
    Ok([-g * x2, g * x1])
}

/// `(ħ/m) Im(∇ψ/ψ)` for an arbitrary evaluator.
pub fn guidance_from_wavefunction(
    wf: &dyn Wavefunction,
    x1: f64,
    x2: f64,
    t: f64,
    params: &OscillatorParams,
) -> Result<[f64; 2]> {
    let e = wf.eval(x1, x2, t);
    if !(e.density() > 0.0) {
        return Err(Error::Singularity {
            t,
            x1,
            x2,
            last_good_t: t,
        });
    }
    let k = params.hbar / params.m;
    let v = |g: Complex64| k * (g / e.value).im;
    Ok([v(e.grad[0]), v(e.grad[1])])
}

/// Which velocity field drives the particles.
#[derive(Clone, Copy)]
pub enum GuidanceModel<'a> {
    /// The reduced closed-form field.
    Reduced,
    /// `(ħ/m) Im(∇ψ/ψ)` of the given wavefunction.
    Wavefunction(&'a dyn Wavefunction),
}

impl GuidanceModel<'_> {
    pub fn velocity(&self, x1: f64, x2: f64, t: f64, params: &OscillatorParams, freqs: &DerivedFrequencies) -> Result<[f64; 2]> {
        match self {
            GuidanceModel::Reduced => guidance_field(x1, x2, t, params, freqs),
            GuidanceModel::Wavefunction(wf) => guidance_from_wavefunction(*wf, x1, x2, t, params),
        }
    }

    fn admissible(&self, x1: f64, x2: f64, t: f64, params: &OscillatorParams, freqs: &DerivedFrequencies) -> bool {
        match self {
            GuidanceModel::Reduced => guidance_denominator(x1, x2, t, freqs) >= singularity_floor(params, freqs),
            GuidanceModel::Wavefunction(wf) => {
                let a = params.m * freqs.omega_bar / params.hbar;
                wf.density(x1, x2, t) >= singularity_floor(params, freqs) * a * a * a
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryState {
    pub t: f64,
    pub x1: f64,
    pub x2: f64,
}

/// Accepted steps of one trajectory with their interpolants.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySample {
    pub states: Vec<TrajectoryState>,
    pub steps: Vec<StepRecord>,
    pub stats: SolverStats,
}

impl TrajectorySample {
    fn from_solution(sol: OdeSolution) -> Self {
        let states = sol
            .t
            .iter()
            .zip(&sol.y)
            .map(|(&t, y)| TrajectoryState { t, x1: y[0], x2: y[1] })
            .collect();
        Self {
            states,
            steps: sol.steps,
            stats: sol.stats,
        }
    }

    pub fn t_span(&self) -> (f64, f64) {
        (self.states[0].t, self.states[self.states.len() - 1].t)
    }

    pub fn last(&self) -> TrajectoryState {
        self.states[self.states.len() - 1]
    }

    /// Dense-output position; `None` outside the integrated span.
    pub fn eval(&self, t: f64) -> Option<TrajectoryState> {
        if self.states.len() == 1 && t == self.states[0].t {
            return Some(self.states[0]);
        }
        let idx = self.steps.partition_point(|s| s.t_end < t);
        let step = self.steps.get(idx).filter(|s| s.contains(t))?;
        let y = step.eval(t);
        Some(TrajectoryState { t, x1: y[0], x2: y[1] })
    }

    /// Dense-output positions at `n` evenly spaced times including both ends.
    pub fn resample(&self, n: usize) -> Vec<TrajectoryState> {
        let (t0, t1) = self.t_span();
        let n = n.max(2);
        (0..n)
            .filter_map(|i| {
                let t = if i + 1 == n {
                    t1
                } else {
                    t0 + (t1 - t0) * i as f64 / (n - 1) as f64
                };
                self.eval(t)
            })
            .collect()
    }
}

/// Integrates the reduced guidance equations from `x0` over `t_span`.
pub fn integrate_trajectory(
    x0: (f64, f64),
    t_span: (f64, f64),
    opts: &SolverOptions,
    params: &OscillatorParams,
) -> Result<TrajectorySample> {
    integrate_with_model(x0, t_span, opts, params, GuidanceModel::Reduced)
}

pub fn integrate_with_model(
    x0: (f64, f64),
    t_span: (f64, f64),
    opts: &SolverOptions,
    params: &OscillatorParams,
    model: GuidanceModel<'_>,
) -> Result<TrajectorySample> {
    let freqs = params.frequencies();
    // surfaces a singular start with the right error
    model.velocity(x0.0, x0.1, t_span.0, params, &freqs)?;
    if freqs.delta_omega == 0.0 && matches!(model, GuidanceModel::Reduced) {
        // field vanishes identically
        return Ok(static_trajectory(x0, t_span));
    }
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| match model.velocity(y[0], y[1], t, params, &freqs) {
        Ok(v) => dy.copy_from_slice(&v),
        Err(_) => dy.fill(f64::NAN),
    };
    let guard = |t: f64, y: &[f64]| model.admissible(y[0], y[1], t, params, &freqs);
    let problem = OdeProblem::new(rhs, t_span, vec![x0.0, x0.1]);
    match solve(problem, opts, Some(guard)) {
        Ok(sol) => Ok(TrajectorySample::from_solution(sol)),
        Err(OdeError::GuardTriggered { t, t_safe, y_safe }) => Err(Error::Singularity {
            t,
            x1: y_safe[0],
            x2: y_safe[1],
            last_good_t: t_safe,
        }),
        Err(e) => Err(e.into()),
    }
}

fn static_trajectory(x0: (f64, f64), (t0, t1): (f64, f64)) -> TrajectorySample {
    let y = vec![x0.0, x0.1];
    let zero = vec![0.0; 2];
    let step = StepRecord {
        t_start: t0,
        t_end: t1,
        y_start: y.clone(),
        y_end: y.clone(),
        coeffs: [y, zero.clone(), zero.clone(), zero.clone(), zero.clone(), zero.clone(), zero.clone(), zero],
        error: 0.0,
    };
    TrajectorySample {
        states: vec![
            TrajectoryState { t: t0, x1: x0.0, x2: x0.1 },
            TrajectoryState { t: t1, x1: x0.0, x2: x0.1 },
        ],
        steps: vec![step],
        stats: SolverStats::default(),
    }
}

/// Maps a trajectory computed at beat frequency `delta_old` onto the one at
/// `delta_new`: `t′ = (δω/δω′) t`, `xᵢ′ = √(δω/δω′) xᵢ`.
pub fn scaling_map(sample: &TrajectorySample, delta_old: f64, delta_new: f64) -> Result<TrajectorySample> {
    if !(delta_old > 0.0 && delta_new > 0.0) {
        return Err(Error::InvalidParams("beat frequencies must be positive".into()));
    }
    let a = delta_old / delta_new;
    let b = a.sqrt();
    let scale = |v: &[f64]| v.iter().map(|x| x * b).collect::<Vec<_>>();
    let states = sample
        .states
        .iter()
        .map(|s| TrajectoryState {
            t: a * s.t,
            x1: b * s.x1,
            x2: b * s.x2,
        })
        .collect();
    // interpolants are linear in y and parametrised by the step fraction
    let steps = sample
        .steps
        .iter()
        .map(|s| StepRecord {
            t_start: a * s.t_start,
            t_end: a * s.t_end,
            y_start: scale(&s.y_start),
            y_end: scale(&s.y_end),
            coeffs: std::array::from_fn(|k| scale(&s.coeffs[k])),
            error: s.error,
        })
        .collect();
    Ok(TrajectorySample {
        states,
        steps,
        stats: sample.stats,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantumPotential {
    pub q1: f64,
    pub q2: f64,
    /// Combined closed form; equals `q1 + q2` up to rounding.
    pub q: f64,
}

pub fn quantum_potential(x1: f64, x2: f64, t: f64, params: &OscillatorParams, freqs: &DerivedFrequencies) -> Result<QuantumPotential> {
    let den = guidance_denominator(x1, x2, t, freqs);
    if !(den >= singularity_floor(params, freqs)) {
        return Err(Error::Singularity {
            t,
            x1,
            x2,
            last_good_t: t,
        });
    }
    let (s, c) = (freqs.delta_omega * t).sin_cos();
    let (hb, m, w) = (params.hbar, params.m, freqs.omega_bar);
    let a = x1 * x1 * s * s;
    let b = x2 * x2 * c * c;
    let split = 0.5 * hb * w * (a - b) / den;
    let kin = 0.5 * hb * hb / m * s * s * c * c / (den * den);
    let q1 = hb * w - 0.5 * m * w * w * x1 * x1 + split - kin * x2 * x2;
    let q2 = hb * w - 0.5 * m * w * w * x2 * x2 - split - kin * x1 * x1;
    let r2 = x1 * x1 + x2 * x2;
    let q = 2.0 * hb * w - 0.5 * m * w * w * r2 - kin * r2;
    Ok(QuantumPotential { q1, q2, q })
}

/// `Qᵢ = −(ħ²/2m) ∂ᵢ²√P / √P` by central differences of `√|ψ|²` with step `h`.
pub fn quantum_potential_fd(
    wf: &dyn Wavefunction,
    x1: f64,
    x2: f64,
    t: f64,
    h: f64,
    params: &OscillatorParams,
) -> (f64, f64) {
    let r = |a: f64, b: f64| wf.density(a, b, t).sqrt();
    let r0 = r(x1, x2);
    let d1 = (r(x1 + h, x2) - 2.0 * r0 + r(x1 - h, x2)) / (h * h);
    let d2 = (r(x1, x2 + h) - 2.0 * r0 + r(x1, x2 - h)) / (h * h);
    let k = -params.hbar * params.hbar / (2.0 * params.m);
    (k * d1 / r0, k * d2 / r0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub k1: f64,
    pub k2: f64,
    pub v1: f64,
    pub v2: f64,
    pub q1: f64,
    pub q2: f64,
    /// Reduced closed forms.
    pub e1: f64,
    pub e2: f64,
    pub e_total: f64,
    /// `Kᵢ + Vᵢ + Qᵢ`.
    pub e1_assembled: f64,
    pub e2_assembled: f64,
}

/// Per-particle Bohmian energies with `Vᵢ = ½mω̄²xᵢ²`.
pub fn bohmian_energies(state: TrajectoryState, params: &OscillatorParams, freqs: &DerivedFrequencies) -> Result<EnergyBreakdown> {
    let TrajectoryState { t, x1, x2 } = state;
    let v = guidance_field(x1, x2, t, params, freqs)?;
    let q = quantum_potential(x1, x2, t, params, freqs)?;
    let (m, w, hb) = (params.m, freqs.omega_bar, params.hbar);
    let k1 = 0.5 * m * v[0] * v[0];
    let k2 = 0.5 * m * v[1] * v[1];
    let v1 = 0.5 * m * w * w * x1 * x1;
    let v2 = 0.5 * m * w * w * x2 * x2;
    let (s, c) = (freqs.delta_omega * t).sin_cos();
    let (a, b) = (x1 * x1 * s * s, x2 * x2 * c * c);
    let split = 0.5 * hb * w * (a - b) / (a + b);
    let e1 = hb * w + split;
    let e2 = hb * w - split;
    Ok(EnergyBreakdown {
        k1,
        k2,
        v1,
        v2,
        q1: q.q1,
        q2: q.q2,
        e1,
        e2,
        e_total: e1 + e2,
        e1_assembled: k1 + v1 + q.q1,
        e2_assembled: k2 + v2 + q.q2,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub count: usize,
    pub seed: u64,
    /// Times at which ensemble positions are reported.
    pub times: Vec<f64>,
}

impl EnsembleSpec {
    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidParams("ensemble count must be at least 1".into()));
        }
        if self.times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return Err(Error::InvalidParams("ensemble times must be finite and non-negative".into()));
        }
        Ok(())
    }
}

/// Draws `count` initial positions from `|φ₀(x₁)φ₁(x₂)|²` at frequency ω.
///
/// Trajectory `i` uses its own ChaCha stream `i` of the master seed, so the
/// sample does not depend on how the work is split.
pub fn sample_initial_ensemble(spec: &EnsembleSpec, params: &OscillatorParams) -> Result<Vec<(f64, f64)>> {
    spec.validate()?;
    let f = params.frequencies();
    let sigma = (params.hbar / (2.0 * params.m * f.omega)).sqrt();
    Ok((0..spec.count).map(|i| sample_one(spec.seed, i as u64, sigma)).collect())
}

fn sample_one(seed: u64, index: u64, sigma: f64) -> (f64, f64) {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let ground = Normal::new(0.0, sigma).expect("positive width");
    let x1 = ground.sample(&mut rng);
    // φ₁² ∝ x² e^{−x²/2σ²} under an N(0, 2σ²) proposal; the ratio
    // (x²/4σ²) e^{1 − x²/4σ²} peaks at 1.
    let proposal = Normal::new(0.0, std::f64::consts::SQRT_2 * sigma).expect("positive width");
    let x2 = loop {
        let x: f64 = proposal.sample(&mut rng);
        let z = x * x / (4.0 * sigma * sigma);
        if rng.random::<f64>() < z * (1.0 - z).exp() {
            break x;
        }
    };
    (x1, x2)
}

/// CDF of a density tabulated on a uniform grid.
#[derive(Debug, Clone)]
pub struct TabulatedCdf {
    lo: f64,
    step: f64,
    values: Vec<f64>,
}

impl TabulatedCdf {
    /// Cumulative trapezoid integral of `density` on `[lo, hi]` with `n` cells.
    pub fn from_density<F: FnMut(f64) -> Result<f64>>(mut density: F, lo: f64, hi: f64, n: usize) -> Result<Self> {
        let step = (hi - lo) / n as f64;
        let mut values = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        let mut prev = density(lo)?;
        values.push(0.0);
        for i in 1..=n {
            let cur = density(lo + step * i as f64)?;
            acc += 0.5 * step * (prev + cur);
            values.push(acc);
            prev = cur;
        }
        Ok(Self { lo, step, values })
    }

    pub fn total(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn eval(&self, x: f64) -> f64 {
        let u = (x - self.lo) / self.step;
        if u <= 0.0 {
            return 0.0;
        }
        let i = u.floor() as usize;
        if i + 1 >= self.values.len() {
            return self.total();
        }
        let f = u - i as f64;
        self.values[i] * (1.0 - f) + self.values[i + 1] * f
    }

    /// Kolmogorov–Smirnov distance to the empirical CDF of `samples`.
    pub fn ks_distance(&self, samples: &[f64]) -> f64 {
        let mut xs = samples.to_vec();
        xs.sort_by(f64::total_cmp);
        let n = xs.len() as f64;
        xs.iter()
            .enumerate()
            .map(|(i, &x)| {
                let c = self.eval(x);
                (c - i as f64 / n).abs().max((c - (i + 1) as f64 / n).abs())
            })
            .fold(0.0, f64::max)
    }
}

/// Reference marginals for the equivariance comparison.
pub struct MarginalReferences<'a> {
    /// Exact-series wavefunction for quadrature marginals, if available.
    pub exact: Option<&'a dyn Wavefunction>,
    /// Grid cells per CDF table.
    pub cells: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsDistances {
    /// Against the first-order closed-form marginal.
    pub closed_form: f64,
    /// Against the flipped variant of the closed form.
    pub flipped: f64,
    /// Against the quadrature marginal of the exact series.
    pub exact: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivarianceAtTime {
    pub t: f64,
    pub x1: KsDistances,
    pub x2: KsDistances,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivarianceReport {
    pub count: usize,
    /// Trajectories stopped by the singularity guard or step underflow.
    pub lost: usize,
    pub results: Vec<EquivarianceAtTime>,
    pub stats: SolverStats,
}

impl EquivarianceReport {
    pub fn lost_fraction(&self) -> f64 {
        self.lost as f64 / self.count as f64
    }
}

/// Positions of every trajectory at every requested time; `None` for lost
/// trajectories.
pub fn evolve_ensemble(
    spec: &EnsembleSpec,
    opts: &SolverOptions,
    params: &OscillatorParams,
    model: GuidanceModel<'_>,
) -> Result<(Vec<Option<Vec<TrajectoryState>>>, SolverStats)> {
    let starts = sample_initial_ensemble(spec, params)?;
    let t_end = spec.times.iter().copied().fold(0.0, f64::max);
    let results: Vec<(Option<Vec<TrajectoryState>>, SolverStats)> = starts
        .par_iter()
        .map(|&x0| {
            if t_end == 0.0 {
                let s = TrajectoryState { t: 0.0, x1: x0.0, x2: x0.1 };
                return (Some(spec.times.iter().map(|&t| TrajectoryState { t, ..s }).collect()), SolverStats::default());
            }
            match integrate_with_model(x0, (0.0, t_end), opts, params, model) {
                Ok(traj) => {
                    let pts = spec.times.iter().map(|&t| traj.eval(t)).collect::<Option<Vec<_>>>();
                    (pts, traj.stats)
                }
                Err(e) => {
                    log::debug!("trajectory from ({}, {}) lost: {e}", x0.0, x0.1);
                    (None, SolverStats::default())
                }
            }
        })
        .collect();
    let mut stats = SolverStats::default();
    for (_, s) in &results {
        stats.accepted += s.accepted;
        stats.rejected += s.rejected;
        stats.guard_rejections += s.guard_rejections;
        stats.rhs_evals += s.rhs_evals;
    }
    Ok((results.into_iter().map(|r| r.0).collect(), stats))
}

/// KS distances of the empirical marginals of `positions` at time `t`.
pub fn marginal_distances(
    positions: &[(f64, f64)],
    t: f64,
    params: &OscillatorParams,
    refs: &MarginalReferences<'_>,
) -> Result<[KsDistances; 2]> {
    let freqs = params.frequencies();
    let half_width = 10.0 * params.length_scale_sq().sqrt();
    let integrator = match refs.exact {
        Some(_) => Some(MarginalIntegrator::new(params, 64, false)?),
        None => None,
    };
    let mut out = [KsDistances {
        closed_form: 0.0,
        flipped: 0.0,
        exact: None,
    }; 2];
    for (slot, which) in out.iter_mut().zip([Particle::One, Particle::Two]) {
        let xs: Vec<f64> = positions
            .iter()
            .map(|p| match which {
                Particle::One => p.0,
                Particle::Two => p.1,
            })
            .collect();
        let table = |form| {
            TabulatedCdf::from_density(
                |x| Ok(marginal_closed_form(which, x, t, params, &freqs, form)),
                -half_width,
                half_width,
                refs.cells,
            )
        };
        slot.closed_form = table(FirstOrderForm::Corrected)?.ks_distance(&xs);
        slot.flipped = table(FirstOrderForm::Flipped)?.ks_distance(&xs);
        if let (Some(wf), Some(integ)) = (refs.exact, &integrator) {
            let cdf = TabulatedCdf::from_density(|x| integ.marginal(which, x, t, wf), -half_width, half_width, refs.cells)?;
            slot.exact = Some(cdf.ks_distance(&xs));
        }
    }
    Ok(out)
}

/// Evolves an equilibrium ensemble and compares its empirical marginals
/// with the reference marginals at each time in `spec.times`.
pub fn equivariance_check(
    spec: &EnsembleSpec,
    opts: &SolverOptions,
    params: &OscillatorParams,
    model: GuidanceModel<'_>,
    refs: &MarginalReferences<'_>,
) -> Result<EquivarianceReport> {
    let (paths, stats) = evolve_ensemble(spec, opts, params, model)?;
    let lost = paths.iter().filter(|p| p.is_none()).count();
    let kept: Vec<&Vec<TrajectoryState>> = paths.iter().flatten().collect();
    let mut results = Vec::with_capacity(spec.times.len());
    for (k, &t) in spec.times.iter().enumerate() {
        let positions: Vec<(f64, f64)> = kept.iter().map(|p| (p[k].x1, p[k].x2)).collect();
        let [x1, x2] = marginal_distances(&positions, t, params, refs)?;
        results.push(EquivarianceAtTime { t, x1, x2 });
    }
    Ok(EquivarianceReport {
        count: spec.count,
        lost,
        results,
        stats,
    })
}
