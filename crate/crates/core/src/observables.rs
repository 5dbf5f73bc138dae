//! Densities, marginals and energy expectations.
//!
//! Every observable has two evaluation paths: the first-order closed form
//! and a quadrature over an evaluated wavefunction. Quadrature on the exact
//! series is the reference.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{mode_alpha, DerivedFrequencies, Mode, OscillatorParams};
use crate::quadrature::{gauss_hermite_rule, QuadratureRule, DEFAULT_ORDER, MAX_ORDER};
use crate::spectral::{FirstOrderForm, SpectralState, Wavefunction};

/// Relative change under order doubling tolerated for quadrature marginals.
pub const MARGINAL_STABILITY_LIMIT: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Particle {
    One,
    Two,
}

/// Where a curve or report came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    ClosedForm,
    ClosedFormFlipped,
    Quadrature,
}

/// `|ψ|²` from any evaluator.
pub fn joint_density(x1: f64, x2: f64, t: f64, wf: &dyn Wavefunction) -> f64 {
    wf.density(x1, x2, t)
}

/// Expanded first-order joint density.
///
/// `form` selects the sign of the `2x₁x₂[½ − αxᵢ²]δ` terms, following the
/// wavefunction it is derived from.
pub fn joint_density_closed_form(
    x1: f64,
    x2: f64,
    t: f64,
    params: &OscillatorParams,
    freqs: &DerivedFrequencies,
    form: FirstOrderForm,
) -> f64 {
    let wb = freqs.omega_bar;
    let dw = freqs.delta_omega;
    let a = params.m * wb / params.hbar;
    let d = freqs.delta_ratio();
    let sg = match form {
        FirstOrderForm::Corrected => -1.0,
        FirstOrderForm::Flipped => 1.0,
    };
    let (s, c) = (dw * t).sin_cos();
    let pa = (2.0 * wb + 3.0 * dw) * t;
    let pb = (2.0 * wb + dw) * t;
    let u = x1 - x2;
    let v = x1 + x2;
    let g1 = a * u * u - 1.0;
    let g3 = a * u * u - 3.0;
    let body = 4.0 * (x2 * x2 + 2.0 * sg * x1 * x2 * (0.5 - a * x2 * x2) * d) * c * c
        + 4.0 * (x1 * x1 + 2.0 * sg * x1 * x2 * (0.5 - a * x1 * x1) * d) * s * s
        + 2.0 * x2 * d * v * g1 * c * pb.cos()
        - 2.0 * x2 * d * u * g3 * c * pa.cos()
        - 2.0 * x1 * d * v * g1 * s * pb.sin()
        + 2.0 * x1 * d * u * g3 * s * pa.sin();
    a * a / (2.0 * PI) * (-a * (x1 * x1 + x2 * x2)).exp() * body
}

/// First-order closed-form marginal density of one particle.
///
/// With `A = (2ω̄ + 3δω)t`, `B = (2ω̄ + δω)t`, `α = mω̄/ħ`:
///
/// `P(x₁) = √(α/π) e^{−αx²} {c² + 2αx²s² − δ[(¼ − αx²/2)(3cos A − cos B)c + κ αx²(3/2 − αx²)(sin A − sin B)s]}`
///
/// `P(x₂) = √(α/π) e^{−αx²} {s² + 2αx²c² − δ[(¼ − αx²/2)(3sin A + sin B)s + κ αx²(3/2 − αx²)(cos A + cos B)c]}`
///
/// where `κ = +1` integrates the first-order density and `κ = −1` is the
/// flipped variant (`form = Flipped`), which differs at first order.
pub fn marginal_closed_form(
    which: Particle,
    x: f64,
    t: f64,
    params: &OscillatorParams,
    freqs: &DerivedFrequencies,
    form: FirstOrderForm,
) -> f64 {
    let wb = freqs.omega_bar;
    let dw = freqs.delta_omega;
    let a = params.m * wb / params.hbar;
    let d = freqs.delta_ratio();
    let kappa = match form {
        FirstOrderForm::Corrected => 1.0,
        FirstOrderForm::Flipped => -1.0,
    };
    let (s, c) = (dw * t).sin_cos();
    let pa = (2.0 * wb + 3.0 * dw) * t;
    let pb = (2.0 * wb + dw) * t;
    let ax2 = a * x * x;
    let q = 0.25 - 0.5 * ax2;
    let r = ax2 * (1.5 - ax2);
    let body = match which {
        Particle::One => {
            c * c + 2.0 * ax2 * s * s
                - d * (q * (3.0 * pa.cos() - pb.cos()) * c + kappa * r * (pa.sin() - pb.sin()) * s)
        }
        Particle::Two => {
            s * s + 2.0 * ax2 * c * c
                - d * (q * (3.0 * pa.sin() + pb.sin()) * s + kappa * r * (pa.cos() + pb.cos()) * c)
        }
    };
    (a / PI).sqrt() * (-ax2).exp() * body
}

/// Integrates `|ψ|²` over the other particle's coordinate.
pub struct MarginalIntegrator {
    rule: QuadratureRule,
    check: Option<QuadratureRule>,
}

impl MarginalIntegrator {
    /// Rule of the given order on the length scale `√(ħ/mω̄)`; with
    /// `check_stability` every value is recomputed at double order.
    pub fn new(params: &OscillatorParams, order: usize, check_stability: bool) -> Result<Self> {
        let s = params.length_scale_sq().sqrt();
        let rule = gauss_hermite_rule(order, s)?;
        let check = if check_stability {
            Some(gauss_hermite_rule((2 * order).min(MAX_ORDER), s)?)
        } else {
            None
        };
        Ok(Self { rule, check })
    }

    fn integrate(rule: &QuadratureRule, which: Particle, x: f64, t: f64, wf: &dyn Wavefunction) -> f64 {
        rule.integrate(|y| match which {
            Particle::One => wf.density(x, y, t),
            Particle::Two => wf.density(y, x, t),
        })
    }

    pub fn marginal(&self, which: Particle, x: f64, t: f64, wf: &dyn Wavefunction) -> Result<f64> {
        let v = Self::integrate(&self.rule, which, x, t, wf);
        if let Some(check) = &self.check {
            let w = Self::integrate(check, which, x, t, wf);
            let scale = v.abs().max(w.abs()).max(1e-300);
            let change = (v - w).abs();
            if change > MARGINAL_STABILITY_LIMIT * scale && change > 1e-14 {
                return Err(Error::QuadratureUnstable {
                    change,
                    limit: MARGINAL_STABILITY_LIMIT * scale,
                });
            }
        }
        Ok(v)
    }
}

/// How a marginal is evaluated.
#[derive(Clone, Copy)]
pub enum MarginalMethod<'a> {
    ClosedForm(FirstOrderForm),
    Quadrature(&'a MarginalIntegrator, &'a dyn Wavefunction),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginalCurve {
    pub which: Particle,
    pub t: f64,
    /// `(x, density)` in increasing `x`.
    pub samples: Vec<(f64, f64)>,
    pub source: Source,
}

impl MarginalCurve {
    pub fn trapezoid_integral(&self) -> f64 {
        self.samples
            .windows(2)
            .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[1].1 + w[0].1))
            .sum()
    }

    /// Most negative density value, zero if none.
    pub fn negativity(&self) -> f64 {
        self.samples.iter().map(|s| s.1).fold(0.0, f64::min)
    }

    pub fn peak(&self) -> f64 {
        self.samples.iter().map(|s| s.1).fold(0.0, f64::max)
    }
}

pub fn marginal(
    which: Particle,
    x: f64,
    t: f64,
    params: &OscillatorParams,
    method: MarginalMethod<'_>,
) -> Result<f64> {
    match method {
        MarginalMethod::ClosedForm(form) => {
            Ok(marginal_closed_form(which, x, t, params, &params.frequencies(), form))
        }
        MarginalMethod::Quadrature(integrator, wf) => integrator.marginal(which, x, t, wf),
    }
}

pub fn marginal_curve(
    which: Particle,
    xs: &[f64],
    t: f64,
    params: &OscillatorParams,
    method: MarginalMethod<'_>,
) -> Result<MarginalCurve> {
    let samples = xs
        .iter()
        .map(|&x| marginal(which, x, t, params, method).map(|p| (x, p)))
        .collect::<Result<Vec<_>>>()?;
    let source = match method {
        MarginalMethod::ClosedForm(FirstOrderForm::Corrected) => Source::ClosedForm,
        MarginalMethod::ClosedForm(FirstOrderForm::Flipped) => Source::ClosedFormFlipped,
        MarginalMethod::Quadrature(..) => Source::Quadrature,
    };
    Ok(MarginalCurve {
        which,
        t,
        samples,
        source,
    })
}

/// Per-particle energies, interaction and total.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub t: f64,
    pub e1: f64,
    pub e2: f64,
    pub e_interaction: f64,
    pub e_total: f64,
    pub source: Source,
}

/// `E₁ = ħω(½ + sin² δωt)`, `E₂ = ħω(½ + cos² δωt)`, `⟨Ĥ_I⟩ = 2ħδω`.
pub fn energy_expectations_closed_form(t: f64, params: &OscillatorParams, freqs: &DerivedFrequencies) -> EnergyReport {
    let hw = params.hbar * freqs.omega;
    let s2 = (freqs.delta_omega * t).sin().powi(2);
    let e1 = hw * (0.5 + s2);
    let e2 = hw * (1.5 - s2);
    let e_interaction = 2.0 * params.hbar * freqs.delta_omega;
    EnergyReport {
        t,
        e1,
        e2,
        e_interaction,
        e_total: e1 + e2 + e_interaction,
        source: Source::ClosedForm,
    }
}

/// Tensor rule in normal coordinates matched to the eigenmode widths.
pub struct NormalModeQuadrature {
    points: Vec<(f64, f64, f64)>,
}

impl NormalModeQuadrature {
    pub fn new(params: &OscillatorParams, order: usize) -> Result<Self> {
        let f = params.frequencies();
        let rp = gauss_hermite_rule(order, 1.0 / mode_alpha(Mode::Plus, params, &f).sqrt())?;
        let rm = gauss_hermite_rule(order, 1.0 / mode_alpha(Mode::Minus, params, &f).sqrt())?;
        let (wp, wm) = (rp.plain_weights(), rm.plain_weights());
        let mut points = Vec::with_capacity(order * order);
        for (i, &xp) in rp.nodes.iter().enumerate() {
            for (j, &xm) in rm.nodes.iter().enumerate() {
                let (x1, x2) = crate::model::from_normal_coords(xp, xm);
                points.push((x1, x2, wp[i] * wm[j]));
            }
        }
        Ok(Self { points })
    }

    pub fn with_default_order(params: &OscillatorParams) -> Result<Self> {
        Self::new(params, DEFAULT_ORDER)
    }

    /// `∫∫ f(x₁, x₂) dx₁ dx₂`.
    pub fn integrate<F: FnMut(f64, f64) -> f64>(&self, mut f: F) -> f64 {
        self.points.iter().map(|&(x1, x2, w)| w * f(x1, x2)).sum()
    }

    /// `∫∫ |ψ|²` at time `t`.
    pub fn norm(&self, wf: &dyn Wavefunction, t: f64) -> f64 {
        self.integrate(|x1, x2| wf.density(x1, x2, t))
    }
}

/// `⟨Ĥ₁⟩`, `⟨Ĥ₂⟩`, `⟨Ĥ_I⟩` by applying each operator to the series and
/// integrating `ψ* Ĥ ψ`, with `Ĥᵢ = −(ħ²/2m)∂ᵢ² + ½kxᵢ²` and `Ĥ_I = ½λ(x₁ − x₂)²`.
pub fn energy_expectations_quadrature(state: &SpectralState, t: f64, quad: &NormalModeQuadrature) -> EnergyReport {
    let p = &state.params;
    let kin = p.hbar * p.hbar / (2.0 * p.m);
    let (mut e1, mut e2, mut ei) = (0.0, 0.0, 0.0);
    for &(x1, x2, w) in &quad.points {
        let (psi, d2) = state.eval_second(x1, x2, t);
        let rho = psi.norm_sqr();
        e1 += w * ((psi.conj() * d2[0]).re * -kin + 0.5 * p.k * x1 * x1 * rho);
        e2 += w * ((psi.conj() * d2[1]).re * -kin + 0.5 * p.k * x2 * x2 * rho);
        ei += w * 0.5 * p.lambda * (x1 - x2).powi(2) * rho;
    }
    EnergyReport {
        t,
        e1,
        e2,
        e_interaction: ei,
        e_total: e1 + e2 + ei,
        source: Source::Quadrature,
    }
}

/// `⟨n₁|⟨n₂| Ĥ_I |n₁⟩|n₂⟩ = (λ/2)(⟨x₁²⟩ + ⟨x₂²⟩)` for uncoupled Fock states.
pub fn fock_interaction_energy(n1: u32, n2: u32, params: &OscillatorParams, freqs: &DerivedFrequencies) -> f64 {
    let x2 = |n: u32| params.hbar / (params.m * freqs.omega) * (f64::from(n) + 0.5);
    0.5 * params.lambda * (x2(n1) + x2(n2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherentPoint {
    /// `arg β − arg α`.
    pub phase: f64,
    /// `(λ/2)[(⟨x₁⟩ − ⟨x₂⟩)² + ħ/(mω)]`.
    pub bare: f64,
    /// Vacuum-subtracted `(λ/2)(⟨x₁⟩ − ⟨x₂⟩)²`.
    pub normal_ordered: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherentScan {
    pub points: Vec<CoherentPoint>,
    pub min_phase: f64,
    pub min_bare: f64,
    pub min_normal_ordered: f64,
}

/// Interaction energy at `t = 0` of `|α⟩ ⊗ |β⟩` over relative phases, with
/// `α` real and `β = |β| e^{iφ}`.
pub fn coherent_interaction_scan(
    alpha_mag: f64,
    beta_mag: f64,
    phases: &[f64],
    params: &OscillatorParams,
) -> Result<CoherentScan> {
    if !(alpha_mag >= 0.0 && beta_mag >= 0.0) {
        return Err(Error::InvalidParams("coherent amplitudes must be non-negative".into()));
    }
    if phases.is_empty() {
        return Err(Error::InvalidParams("empty phase grid".into()));
    }
    let f = params.frequencies();
    let len2 = params.hbar / (params.m * f.omega);
    // ⟨x⟩ = √(2ħ/mω) Re α
    let x_scale = (2.0 * len2).sqrt();
    let points: Vec<CoherentPoint> = phases
        .iter()
        .map(|&phase| {
            let dx = x_scale * (alpha_mag - beta_mag * phase.cos());
            let normal_ordered = 0.5 * params.lambda * dx * dx;
            CoherentPoint {
                phase,
                bare: normal_ordered + 0.5 * params.lambda * len2,
                normal_ordered,
            }
        })
        .collect();
    let best = points
        .iter()
        .min_by(|a, b| a.bare.total_cmp(&b.bare))
        .copied()
        .expect("non-empty grid");
    Ok(CoherentScan {
        min_phase: best.phase,
        min_bare: best.bare,
        min_normal_ordered: best.normal_ordered,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DEFAULT_HBAR;
    use crate::spectral::{project_initial_state, FirstOrderWavefunction, Truncation};
    use approx::assert_relative_eq;

    fn beat(r: f64) -> OscillatorParams {
        OscillatorParams::from_beat(1.0, 1.0, r, DEFAULT_HBAR).unwrap()
    }

    #[test]
    fn closed_form_density_matches_modulus_squared() {
        let p = beat(0.05);
        let f = p.frequencies();
        let r = f.delta_ratio();
        for form in [FirstOrderForm::Corrected, FirstOrderForm::Flipped] {
            let wf = FirstOrderWavefunction::new(&p, form);
            let mut worst: f64 = 0.0;
            let mut peak: f64 = 0.0;
            for i in 0..21 {
                for j in 0..21 {
                    let (x1, x2) = (-6.0 + 0.6 * f64::from(i), -6.0 + 0.6 * f64::from(j));
                    for t in [0.0, 4.0, 9.5, 20.0] {
                        let a = joint_density(x1, x2, t, &wf);
                        let b = joint_density_closed_form(x1, x2, t, &p, &f, form);
                        worst = worst.max((a - b).abs());
                        peak = peak.max(a);
                    }
                }
            }
            assert!(worst < 3.0 * r * r * peak, "{form:?}: {worst} vs {peak}");
        }
        assert_eq!(joint_density_closed_form(0.0, 0.0, 3.0, &p, &f, FirstOrderForm::Corrected), 0.0);
    }

    #[test]
    fn closed_form_marginals_integrate_to_one() {
        let p = beat(0.1);
        let f = p.frequencies();
        let r = f.delta_ratio();
        let rule = gauss_hermite_rule(64, p.length_scale_sq().sqrt()).unwrap();
        for i in 0..8 {
            let t = 4.1 * f64::from(i);
            for which in [Particle::One, Particle::Two] {
                let n = rule.integrate(|x| marginal_closed_form(which, x, t, &p, &f, FirstOrderForm::Corrected));
                assert!((n - 1.0).abs() < 2.0 * r * r + 1e-8, "t={t} {which:?}: {n}");
            }
        }
    }

    #[test]
    fn marginal_at_start_is_ground_and_excited_state() {
        let p = beat(0.1);
        let f = p.frequencies();
        let a = p.m * f.omega_bar / p.hbar;
        for x in [-2.0, 0.0, 1.3] {
            let g = (a / PI).sqrt() * (-a * x * x).exp();
            let p1 = marginal_closed_form(Particle::One, x, 0.0, &p, &f, FirstOrderForm::Corrected);
            let p2 = marginal_closed_form(Particle::Two, x, 0.0, &p, &f, FirstOrderForm::Corrected);
            // t = 0: brackets reduce to 1 − 2δ(¼ − αx²/2) and 2αx²[1 − δ(3/2 − αx²)]
            assert_relative_eq!(p1, g * (1.0 - 0.5 * f.delta_ratio() * (1.0 - 2.0 * a * x * x)), epsilon = 1e-14);
            assert_relative_eq!(
                p2,
                g * 2.0 * a * x * x * (1.0 - f.delta_ratio() * (1.5 - a * x * x)),
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn quadrature_marginals_track_closed_form() {
        let p = beat(0.1);
        let f = p.frequencies();
        let r = f.delta_ratio();
        let st = project_initial_state(&p, Truncation::default()).unwrap();
        let integ = MarginalIntegrator::new(&p, 64, true).unwrap();
        let xs: Vec<f64> = (0..161).map(|i| -16.0 + 0.2 * f64::from(i)).collect();
        for t in [0.0, 7.0, 15.0] {
            for which in [Particle::One, Particle::Two] {
                let q = marginal_curve(which, &xs, t, &p, MarginalMethod::Quadrature(&integ, &st)).unwrap();
                let c = marginal_curve(which, &xs, t, &p, MarginalMethod::ClosedForm(FirstOrderForm::Corrected))
                    .unwrap();
                let diff = q
                    .samples
                    .iter()
                    .zip(&c.samples)
                    .map(|(a, b)| (a.1 - b.1).abs())
                    .fold(0.0, f64::max);
                assert!(diff < 4.0 * r * r * q.peak(), "t={t} {which:?}: {diff}");
                assert!(q.negativity() == 0.0);
                assert!((q.trapezoid_integral() - 1.0).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn quadrature_energies() {
        let p = beat(0.1);
        let f = p.frequencies();
        let st = project_initial_state(&p, Truncation::default()).unwrap();
        let quad = NormalModeQuadrature::with_default_order(&p).unwrap();
        let e0 = energy_expectations_quadrature(&st, 0.0, &quad);
        // particle 1 starts in the ground state of frequency ω
        assert_relative_eq!(e0.e1, 0.5 * p.hbar * f.omega, epsilon = 1e-6);
        assert_relative_eq!(e0.e2, 1.5 * p.hbar * f.omega, epsilon = 1e-6);
        assert_relative_eq!(e0.e_interaction, fock_interaction_energy(0, 1, &p, &f), max_relative = 1e-5);
        for t in [3.0, 12.0, 25.0] {
            let e = energy_expectations_quadrature(&st, t, &quad);
            assert!((e.e_total - st.energy()).abs() < 1e-8 * st.energy());
        }
        assert!((quad.norm(&st, 9.0) - st.norm_sq()).abs() < 1e-12);
    }

    #[test]
    fn closed_form_energy_examples() {
        let p = OscillatorParams::with_default_hbar(1.0, 1.0, 0.0).unwrap();
        let e = energy_expectations_closed_form(0.0, &p, &p.frequencies());
        assert_eq!((e.e1, e.e2, e.e_interaction), (5.0, 15.0, 0.0));
        let p = beat(0.1);
        let f = p.frequencies();
        let e = energy_expectations_closed_form(0.0, &p, &f);
        assert_relative_eq!(e.e_interaction, 2.0, epsilon = 1e-12);
        assert_relative_eq!(e.e_total, 2.0 * p.hbar * f.omega_bar, epsilon = 1e-12);
        let period = 2.0 * PI / f.delta_omega;
        for t in [1.0, 5.5, 13.0] {
            let a = energy_expectations_closed_form(t, &p, &f).e1;
            let b = energy_expectations_closed_form(t + period, &p, &f).e1;
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn fock_interaction_values() {
        let p = OscillatorParams::with_default_hbar(1.0, 1.0, 0.02).unwrap();
        let f = p.frequencies();
        let e00 = fock_interaction_energy(0, 0, &p, &f);
        assert_relative_eq!(e00, 0.5 * p.lambda * p.hbar / (p.m * f.omega), epsilon = 1e-15);
        assert!((e00 - p.hbar * f.delta_omega).abs() < 0.01 * e00);
        let e01 = fock_interaction_energy(0, 1, &p, &f);
        assert!((e01 - 2.0 * p.hbar * f.delta_omega).abs() < 0.02 * e01);
        let mut last = 0.0;
        for n in 0..10 {
            let e = fock_interaction_energy(n, n / 2, &p, &f);
            assert!(e > last);
            last = e;
        }
    }

    #[test]
    fn coherent_scan() {
        let p = beat(0.1);
        let phases: Vec<f64> = (0..=64).map(|i| -PI + 2.0 * PI * f64::from(i) / 64.0).collect();
        let scan = coherent_interaction_scan(1.5, 1.5, &phases, &p).unwrap();
        assert!(scan.min_phase.abs() < 1e-12);
        assert!(scan.min_normal_ordered.abs() < 1e-24);
        let vac = 0.5 * p.lambda * p.hbar / (p.m * p.frequencies().omega);
        assert_relative_eq!(scan.min_bare, vac, epsilon = 1e-12);
        let worst = scan.points.iter().max_by(|a, b| a.normal_ordered.total_cmp(&b.normal_ordered)).unwrap();
        assert!((worst.phase.abs() - PI).abs() < 1e-12);
        assert!(scan.points.iter().all(|q| q.bare >= vac));
        assert!(coherent_interaction_scan(-1.0, 1.0, &phases, &p).is_err());
    }
}
