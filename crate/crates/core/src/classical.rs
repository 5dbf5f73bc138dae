//! Classical coupled oscillators: closed-form motion, energy exchange and a
//! numerical Hamilton-equation oracle.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{DerivedFrequencies, OscillatorParams};
use crate::ode::{self, OdeProblem, OdeSolution, SolverOptions};

/// Initial conditions of the two particles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalScenario {
    pub x1: f64,
    pub x2: f64,
    pub v1: f64,
    pub v2: f64,
}

impl ClassicalScenario {
    /// Both at rest, particle 1 at equilibrium, particle 2 displaced by `d`.
    pub fn canonical(d: f64) -> Self {
        Self {
            x1: 0.0,
            x2: d,
            v1: 0.0,
            v2: 0.0,
        }
    }

    /// Both at equilibrium, particle 1 kicked with velocity `v`.
    pub fn kicked(v: f64) -> Self {
        Self {
            x1: 0.0,
            x2: 0.0,
            v1: v,
            v2: 0.0,
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.x1 == 0.0 && self.v1 == 0.0 && self.v2 == 0.0
    }

    /// Normal-mode amplitudes and phases.
    pub fn solution(&self, freqs: &DerivedFrequencies) -> ClassicalSolution {
        // x1 = A/2 cos(ωt+θ) + A′/2 cos(ω′t+θ′), x2 = A/2 cos(ωt+θ) − A′/2 cos(ω′t+θ′)
        let (sp, sm) = (self.x1 + self.x2, self.x1 - self.x2);
        let (up, um) = (self.v1 + self.v2, self.v1 - self.v2);
        let amp = |x: f64, v: f64, w: f64| {
            let a = (x * x + (v / w).powi(2)).sqrt();
            let th = if a == 0.0 { 0.0 } else { (-v / w).atan2(x) };
            // prefer a signed amplitude with zero phase when the mode starts at rest
            if v == 0.0 {
                (x, 0.0)
            } else {
                (a, th)
            }
        };
        let (a, theta) = amp(sp, up, freqs.omega);
        let (a_prime, theta_prime) = amp(sm, um, freqs.omega_prime);
        ClassicalSolution {
            a,
            a_prime,
            theta,
            theta_prime,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalSolution {
    pub a: f64,
    pub a_prime: f64,
    pub theta: f64,
    pub theta_prime: f64,
}

impl ClassicalSolution {
    pub fn positions(&self, t: f64, freqs: &DerivedFrequencies) -> (f64, f64) {
        let p = 0.5 * self.a * (freqs.omega * t + self.theta).cos();
        let q = 0.5 * self.a_prime * (freqs.omega_prime * t + self.theta_prime).cos();
        (p + q, p - q)
    }

    pub fn velocities(&self, t: f64, freqs: &DerivedFrequencies) -> (f64, f64) {
        let p = -0.5 * self.a * freqs.omega * (freqs.omega * t + self.theta).sin();
        let q = -0.5 * self.a_prime * freqs.omega_prime * (freqs.omega_prime * t + self.theta_prime).sin();
        (p + q, p - q)
    }
}

/// Positions `(x₁, x₂)` from the two-cosine closed form.
pub fn classical_positions(t: f64, scenario: &ClassicalScenario, params: &OscillatorParams) -> (f64, f64) {
    let f = params.frequencies();
    scenario.solution(&f).positions(t, &f)
}

pub fn classical_velocities(t: f64, scenario: &ClassicalScenario, params: &OscillatorParams) -> (f64, f64) {
    let f = params.frequencies();
    scenario.solution(&f).velocities(t, &f)
}

/// Beat (envelope × carrier) form for the canonical scenario with displacement `d`:
/// `x₁ = D sin(δω t) sin(ω̄ t)`, `x₂ = D cos(δω t) cos(ω̄ t)`.
pub fn beat_positions(t: f64, d: f64, freqs: &DerivedFrequencies) -> (f64, f64) {
    let (sd, cd) = (freqs.delta_omega * t).sin_cos();
    let (sb, cb) = (freqs.omega_bar * t).sin_cos();
    (d * sd * sb, d * cd * cb)
}

/// Per-particle energies `Eᵢ = pᵢ²/2m + k xᵢ²/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalEnergies {
    /// Closed form first order in `δω/ω̄`.
    pub first_order: (f64, f64),
    /// From the exact closed-form positions and velocities.
    pub exact: (f64, f64),
    /// `λ(x₁ − x₂)²/2` on the exact path.
    pub interaction: f64,
}

pub fn classical_energies(t: f64, scenario: &ClassicalScenario, params: &OscillatorParams) -> ClassicalEnergies {
    let f = params.frequencies();
    let sol = scenario.solution(&f);
    let (x1, x2) = sol.positions(t, &f);
    let (v1, v2) = sol.velocities(t, &f);
    let e = |x: f64, v: f64| 0.5 * params.m * v * v + 0.5 * params.k * x * x;
    ClassicalEnergies {
        first_order: first_order_energies(t, scenario.x2, params, &f),
        exact: (e(x1, v1), e(x2, v2)),
        interaction: 0.5 * params.lambda * (x1 - x2).powi(2),
    }
}

/// `E₁ = (kD²/2) sin²(δω t)[1 + 4(δω/ω̄) cos²(ω̄ t)]` and the mirror for `E₂`.
pub fn first_order_energies(t: f64, d: f64, params: &OscillatorParams, freqs: &DerivedFrequencies) -> (f64, f64) {
    let e0 = 0.5 * params.k * d * d;
    let r = freqs.delta_ratio();
    let (sd, cd) = (freqs.delta_omega * t).sin_cos();
    let (sb, cb) = (freqs.omega_bar * t).sin_cos();
    (
        e0 * sd * sd * (1.0 + 4.0 * r * cb * cb),
        e0 * cd * cd * (1.0 + 4.0 * r * sb * sb),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TotalEnergy {
    /// `(kD²/2)(1 + 2δω/ω̄)`, first order.
    pub first_order: f64,
    /// Hamiltonian at the initial conditions.
    pub exact: f64,
}

pub fn classical_total_energy(scenario: &ClassicalScenario, params: &OscillatorParams) -> TotalEnergy {
    let f = params.frequencies();
    let d = scenario.x2;
    TotalEnergy {
        first_order: 0.5 * params.k * d * d * (1.0 + 2.0 * f.delta_ratio()),
        exact: hamiltonian(params, [scenario.x1, scenario.x2, params.m * scenario.v1, params.m * scenario.v2]),
    }
}

/// `H = (p₁² + p₂²)/2m + k(x₁² + x₂²)/2 + λ(x₁ − x₂)²/2` for state `[x₁, x₂, p₁, p₂]`.
pub fn hamiltonian(params: &OscillatorParams, s: [f64; 4]) -> f64 {
    let [x1, x2, p1, p2] = s;
    (p1 * p1 + p2 * p2) / (2.0 * params.m)
        + 0.5 * params.k * (x1 * x1 + x2 * x2)
        + 0.5 * params.lambda * (x1 - x2).powi(2)
}

/// Integrates Hamilton's equations for state `[x₁, x₂, p₁, p₂]`.
pub fn integrate_hamilton(
    scenario: &ClassicalScenario,
    params: &OscillatorParams,
    t_span: (f64, f64),
    opts: &SolverOptions,
) -> Result<OdeSolution> {
    let (m, k, lam) = (params.m, params.k, params.lambda);
    let rhs = move |_t: f64, y: &[f64], dy: &mut [f64]| {
        dy[0] = y[2] / m;
        dy[1] = y[3] / m;
        dy[2] = -k * y[0] - lam * (y[0] - y[1]);
        dy[3] = -k * y[1] + lam * (y[0] - y[1]);
    };
    let y0 = vec![scenario.x1, scenario.x2, m * scenario.v1, m * scenario.v2];
    let problem = OdeProblem::new(rhs, t_span, y0);
    Ok(ode::solve(problem, opts, None::<fn(f64, &[f64]) -> bool>)?)
}

/// Times of maxima of the slow part of a uniformly sampled signal.
///
/// The signal is averaged over a sliding window of one fast period, which
/// removes the carrier; maxima of the averaged curve that dominate a
/// neighbourhood of `min_separation` are refined by a parabola through the
/// neighbouring samples.
pub fn envelope_peaks(t: &[f64], y: &[f64], fast_period: f64, min_separation: f64) -> Vec<f64> {
    assert_eq!(t.len(), y.len());
    let n = y.len();
    if n < 3 {
        return Vec::new();
    }
    let dt = t[1] - t[0];
    let w = ((fast_period / dt).round() as usize).max(1);
    if n <= w + 2 {
        return Vec::new();
    }
    let mut cum = Vec::with_capacity(n + 1);
    cum.push(0.0);
    for v in y {
        cum.push(cum.last().unwrap() + v);
    }
    // centred average, defined at sample i + w/2
    let avg: Vec<f64> = (0..n - w).map(|i| (cum[i + w] - cum[i]) / w as f64).collect();
    let t_avg: Vec<f64> = (0..n - w).map(|i| t[i] + 0.5 * (w as f64 - 1.0) * dt).collect();
    let span = ((min_separation / dt) as usize).max(1);
    let mut peaks = Vec::new();
    for i in 1..avg.len() - 1 {
        if !(avg[i] >= avg[i - 1] && avg[i] > avg[i + 1]) {
            continue;
        }
        if i < span || i + span >= avg.len() {
            continue;
        }
        if avg[i - span..=i + span].iter().any(|&v| v > avg[i]) {
            continue;
        }
        let (a, b, c) = (avg[i - 1], avg[i], avg[i + 1]);
        let denom = a - 2.0 * b + c;
        let shift = if denom != 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
        peaks.push(t_avg[i] + shift * dt);
    }
    peaks
}
