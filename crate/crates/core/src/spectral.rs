//! Eigenbasis evolution of the coupled system.
//!
//! The initial state is projected onto products `φ₊⁽ⁿ⁾(ξ₊) φ₋⁽ⁿ′⁾(ξ₋)` by 2-D
//! Gauss–Hermite quadrature in normal coordinates; each term then evolves
//! with its own phase `e^{−i(E_n + E′_{n′})t/ħ}`. The first-order closed-form
//! wavefunction (four retained modes, terms linear in `δω/ω̄`) is provided
//! alongside as an approximation to be validated against the series.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    eigenfunctions_with_derivative, mode_alpha, DerivedFrequencies, Mode, ModeIndex, OscillatorParams,
};
use crate::quadrature::{gauss_hermite_rule, QuadratureRule, DEFAULT_ORDER, MAX_ORDER};

/// Largest change under order doubling accepted for projected coefficients.
pub const PROJECTION_STABILITY_LIMIT: f64 = 1e-8;

/// Retained quantum numbers: `n ≤ n_max`, `n′ ≤ n_prime_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub n_max: u32,
    pub n_prime_max: u32,
}

impl Default for Truncation {
    fn default() -> Self {
        Self {
            n_max: 1,
            n_prime_max: 7,
        }
    }
}

impl Truncation {
    pub fn new(n_max: u32, n_prime_max: u32) -> Self {
        Self { n_max, n_prime_max }
    }

    fn len(&self) -> usize {
        (self.n_max as usize + 1) * (self.n_prime_max as usize + 1)
    }

    /// Smallest quadrature order accepted for this truncation.
    pub fn min_quadrature_order(&self) -> usize {
        2 * self.n_prime_max.max(self.n_max) as usize + 16
    }
}

/// `ψ(x₁, x₂, 0)`: particle 1 in the ground state, particle 2 in the first
/// excited state of the uncoupled oscillator.
pub fn initial_state(x1: f64, x2: f64, params: &OscillatorParams) -> f64 {
    let a = (params.m * params.k).sqrt() / params.hbar;
    (2.0 / PI).sqrt() * a * x2 * (-0.5 * a * (x1 * x1 + x2 * x2)).exp()
}

/// Truncated coefficient set of the exact state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralState {
    pub params: OscillatorParams,
    pub freqs: DerivedFrequencies,
    pub truncation: Truncation,
    /// Row-major over `(n, n′)`.
    pub coefficients: Vec<f64>,
    /// Estimated norm outside the truncation.
    pub tail_bound: f64,
    /// Quadrature norm of the projected function.
    pub source_norm: f64,
    pub quadrature_order: usize,
}

impl SpectralState {
    /// Builds a state from explicit coefficients (e.g. the closed forms).
    pub fn from_coefficients(
        params: OscillatorParams,
        truncation: Truncation,
        coefficients: Vec<f64>,
    ) -> Result<Self> {
        if coefficients.len() != truncation.len() {
            return Err(Error::InvalidParams(format!(
                "expected {} coefficients, got {}",
                truncation.len(),
                coefficients.len()
            )));
        }
        let norm: f64 = coefficients.iter().map(|c| c * c).sum();
        Ok(Self {
            params,
            freqs: params.frequencies(),
            truncation,
            coefficients,
            tail_bound: (1.0 - norm).max(0.0),
            source_norm: 1.0,
            quadrature_order: 0,
        })
    }

    fn index(&self, n: u32, n_prime: u32) -> Option<usize> {
        (n <= self.truncation.n_max && n_prime <= self.truncation.n_prime_max)
            .then(|| n as usize * (self.truncation.n_prime_max as usize + 1) + n_prime as usize)
    }

    /// `C_{n,n′}`, zero outside the truncation.
    pub fn coefficient(&self, idx: ModeIndex) -> f64 {
        self.index(idx.n, idx.n_prime).map_or(0.0, |i| self.coefficients[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (ModeIndex, f64)> + '_ {
        let np = self.truncation.n_prime_max + 1;
        self.coefficients
            .iter()
            .enumerate()
            .map(move |(i, &c)| (ModeIndex::new(i as u32 / np, i as u32 % np), c))
    }

    /// `Σ C²`.
    pub fn norm_sq(&self) -> f64 {
        self.coefficients.iter().map(|c| c * c).sum()
    }

    /// `E_n + E′_{n′}` of one product state.
    pub fn mode_energy(&self, idx: ModeIndex) -> f64 {
        self.params.hbar
            * (self.freqs.omega * (f64::from(idx.n) + 0.5)
                + self.freqs.omega_prime * (f64::from(idx.n_prime) + 0.5))
    }

    /// `⟨Ĥ⟩ = Σ C² (E_n + E′_{n′})`, time independent.
    pub fn energy(&self) -> f64 {
        self.iter().map(|(idx, c)| c * c * self.mode_energy(idx)).sum()
    }

    fn mode_tables(&self, x1: f64, x2: f64) -> ModeTables {
        let (xp, xm) = crate::model::to_normal_coords(x1, x2);
        let (vp, dp) = eigenfunctions_with_derivative(Mode::Plus, self.truncation.n_max, xp, &self.params, &self.freqs);
        let (vm, dm) =
            eigenfunctions_with_derivative(Mode::Minus, self.truncation.n_prime_max, xm, &self.params, &self.freqs);
        ModeTables { xp, xm, vp, dp, vm, dm }
    }

    fn phases(&self, t: f64) -> impl Iterator<Item = (ModeIndex, f64, Complex64)> + '_ {
        self.iter().map(move |(idx, c)| {
            let w = self.mode_energy(idx) / self.params.hbar;
            (idx, c, Complex64::from_polar(1.0, -w * t))
        })
    }

    /// Value and gradient of the truncated series.
    pub fn eval(&self, x1: f64, x2: f64, t: f64) -> WavefunctionEval {
        let tab = self.mode_tables(x1, x2);
        let mut value = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        let mut dm = Complex64::new(0.0, 0.0);
        for (idx, c, ph) in self.phases(t) {
            if c == 0.0 {
                continue;
            }
            let (n, q) = (idx.n as usize, idx.n_prime as usize);
            let a = ph * c;
            value += a * (tab.vp[n] * tab.vm[q]);
            dp += a * (tab.dp[n] * tab.vm[q]);
            dm += a * (tab.vp[n] * tab.dm[q]);
        }
        WavefunctionEval {
            value,
            grad: [(dp + dm) * FRAC_1_SQRT_2, (dp - dm) * FRAC_1_SQRT_2],
            kind: EvalKind::ExactSeries,
        }
    }

    /// Value and the second derivatives `∂²ψ/∂x₁²`, `∂²ψ/∂x₂²`.
    pub fn eval_second(&self, x1: f64, x2: f64, t: f64) -> (Complex64, [Complex64; 2]) {
        let tab = self.mode_tables(x1, x2);
        let ap = mode_alpha(Mode::Plus, &self.params, &self.freqs);
        let am = mode_alpha(Mode::Minus, &self.params, &self.freqs);
        let mut value = Complex64::new(0.0, 0.0);
        let (mut dpp, mut dmm, mut dpm) = (value, value, value);
        for (idx, c, ph) in self.phases(t) {
            if c == 0.0 {
                continue;
            }
            let (n, q) = (idx.n as usize, idx.n_prime as usize);
            let a = ph * c;
            // φ″ = (α²ξ² − α(2n + 1)) φ
            let spp = ap * (ap * tab.xp * tab.xp - (2.0 * n as f64 + 1.0));
            let smm = am * (am * tab.xm * tab.xm - (2.0 * q as f64 + 1.0));
            value += a * (tab.vp[n] * tab.vm[q]);
            dpp += a * (spp * tab.vp[n] * tab.vm[q]);
            dmm += a * (tab.vp[n] * smm * tab.vm[q]);
            dpm += a * (tab.dp[n] * tab.dm[q]);
        }
        (
            value,
            [(dpp + dmm) * 0.5 + dpm, (dpp + dmm) * 0.5 - dpm],
        )
    }
}

struct ModeTables {
    xp: f64,
    xm: f64,
    vp: Vec<f64>,
    dp: Vec<f64>,
    vm: Vec<f64>,
    dm: Vec<f64>,
}

/// Which evaluator produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EvalKind {
    ExactSeries,
    FirstOrder,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavefunctionEval {
    pub value: Complex64,
    /// `(∂ψ/∂x₁, ∂ψ/∂x₂)`.
    pub grad: [Complex64; 2],
    pub kind: EvalKind,
}

impl WavefunctionEval {
    pub fn density(&self) -> f64 {
        self.value.norm_sqr()
    }
}

/// Anything that can evaluate `ψ(x₁, x₂, t)` with its gradient.
pub trait Wavefunction: Sync {
    fn eval(&self, x1: f64, x2: f64, t: f64) -> WavefunctionEval;

    fn density(&self, x1: f64, x2: f64, t: f64) -> f64 {
        self.eval(x1, x2, t).density()
    }
}

impl Wavefunction for SpectralState {
    fn eval(&self, x1: f64, x2: f64, t: f64) -> WavefunctionEval {
        SpectralState::eval(self, x1, x2, t)
    }
}

/// Quadrature rules for `ξ₊` and `ξ₋` matched to the initial-state overlaps.
fn normal_mode_rules(params: &OscillatorParams, freqs: &DerivedFrequencies, order: usize) -> Result<(QuadratureRule, QuadratureRule)> {
    let a0 = (params.m * params.k).sqrt() / params.hbar;
    let ap = mode_alpha(Mode::Plus, params, freqs);
    let am = mode_alpha(Mode::Minus, params, freqs);
    let rp = gauss_hermite_rule(order, (2.0 / (ap + a0)).sqrt())?;
    let rm = gauss_hermite_rule(order, (2.0 / (am + a0)).sqrt())?;
    Ok((rp, rm))
}

fn project_once<F>(
    initial: &F,
    truncation: Truncation,
    params: &OscillatorParams,
    freqs: &DerivedFrequencies,
    order: usize,
) -> Result<(Vec<f64>, f64)>
where
    F: Fn(f64, f64) -> f64,
{
    let (rp, rm) = normal_mode_rules(params, freqs, order)?;
    let wp = rp.plain_weights();
    let wm = rm.plain_weights();
    let tp: Vec<Vec<f64>> = rp
        .nodes
        .iter()
        .map(|&x| crate::model::eigenfunctions_with_derivative(Mode::Plus, truncation.n_max, x, params, freqs).0)
        .collect();
    let tm: Vec<Vec<f64>> = rm
        .nodes
        .iter()
        .map(|&x| crate::model::eigenfunctions_with_derivative(Mode::Minus, truncation.n_prime_max, x, params, freqs).0)
        .collect();
    let np = truncation.n_prime_max as usize + 1;
    let mut c = vec![0.0; truncation.len()];
    let mut norm = 0.0;
    // inner sums over ξ₋ first, then contract with the + mode
    let mut inner = vec![0.0; np];
    for (i, &xp) in rp.nodes.iter().enumerate() {
        inner.iter_mut().for_each(|v| *v = 0.0);
        for (j, &xm) in rm.nodes.iter().enumerate() {
            let (x1, x2) = crate::model::from_normal_coords(xp, xm);
            let f = initial(x1, x2);
            if f == 0.0 {
                continue;
            }
            let w = wm[j] * f;
            norm += wp[i] * wm[j] * f * f;
            for (q, v) in inner.iter_mut().enumerate() {
                *v += w * tm[j][q];
            }
        }
        for n in 0..=truncation.n_max as usize {
            let a = wp[i] * tp[i][n];
            for q in 0..np {
                c[n * np + q] += a * inner[q];
            }
        }
    }
    Ok((c, norm))
}

/// Projects a real initial state onto the truncated eigenbasis.
///
/// The result is recomputed at a second quadrature order (doubled, or
/// halved at the maximum) and rejected if any coefficient moves by more than
/// [`PROJECTION_STABILITY_LIMIT`].
pub fn project_coefficients<F>(
    initial: F,
    truncation: Truncation,
    order: usize,
    params: &OscillatorParams,
) -> Result<SpectralState>
where
    F: Fn(f64, f64) -> f64,
{
    params.validate()?;
    let min = truncation.min_quadrature_order();
    if order < min || order > MAX_ORDER {
        return Err(Error::QuadratureOrder {
            requested: order,
            min,
            max: MAX_ORDER,
        });
    }
    let freqs = params.frequencies();
    let (c, norm) = project_once(&initial, truncation, params, &freqs, order)?;
    let check_order = if 2 * order <= MAX_ORDER { 2 * order } else { order / 2 };
    if check_order >= min {
        let (c2, _) = project_once(&initial, truncation, params, &freqs, check_order)?;
        let change = c.iter().zip(&c2).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if change > PROJECTION_STABILITY_LIMIT {
            return Err(Error::QuadratureUnstable {
                change,
                limit: PROJECTION_STABILITY_LIMIT,
            });
        }
    }
    let sum: f64 = c.iter().map(|v| v * v).sum();
    Ok(SpectralState {
        params: *params,
        freqs,
        truncation,
        coefficients: c,
        tail_bound: (norm - sum).max(0.0) + 8.0 * f64::EPSILON * norm,
        source_norm: norm,
        quadrature_order: order,
    })
}

/// Projection of [`initial_state`] at the default quadrature order.
pub fn project_initial_state(params: &OscillatorParams, truncation: Truncation) -> Result<SpectralState> {
    let order = DEFAULT_ORDER.max(truncation.min_quadrature_order());
    project_coefficients(|x1, x2| initial_state(x1, x2, params), truncation, order, params)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Closed-form `C_{n,n′}` for [`initial_state`].
///
/// Nonzero only for `n = 1, n′ = 2j` and `n = 0, n′ = 2j + 1`.
pub fn coefficient_closed_form(n: u32, n_prime: u32, freqs: &DerivedFrequencies) -> f64 {
    let (w, wp) = (freqs.omega, freqs.omega_prime);
    let s = w + wp;
    let pre = w.sqrt()
        * (w / (4f64.powi(n as i32) * factorial(n).powi(2))).powf(0.25)
        * (wp / (4f64.powi(n_prime as i32) * factorial(n_prime).powi(2))).powf(0.25)
        * (2.0 / s).sqrt();
    let r = (wp - w) / s;
    match (n, n_prime % 2) {
        (1, 0) => {
            let j = n_prime / 2;
            pre * r.powi(j as i32) * (1.0 / w).sqrt() * factorial(2 * j) / factorial(j)
        }
        (0, 1) => {
            let j = (n_prime - 1) / 2;
            -pre * r.powi(j as i32) * (2.0 / s).sqrt() * factorial(2 * j + 1) / factorial(j) * (2.0 * wp / s).sqrt()
        }
        _ => 0.0,
    }
}

/// The four first-order coefficients `C₁₀ ≅ √2/2`, `C₀₁ ≅ −√2/2`,
/// `C₁₂ ≅ ½ δω/ω̄`, `C₀₃ ≅ −(√3/2) δω/ω̄`.
pub fn first_order_coefficients(freqs: &DerivedFrequencies) -> [(ModeIndex, f64); 4] {
    let r = freqs.delta_ratio();
    [
        (ModeIndex::new(1, 0), FRAC_1_SQRT_2),
        (ModeIndex::new(0, 1), -FRAC_1_SQRT_2),
        (ModeIndex::new(1, 2), 0.5 * r),
        (ModeIndex::new(0, 3), -0.5 * 3f64.sqrt() * r),
    ]
}

/// Variant of the first-order closed form.
///
/// `Flipped` carries `+` inside both slow brackets,
/// `x₁ + x₂[½ − αx₁²]δ` and `x₂ + x₁[½ − αx₂²]δ`; expanding the four-mode
/// sum gives `−` there (`Corrected`). The flipped form deviates from the
/// exact series at first order in `δ = δω/ω̄`, the corrected one at second.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FirstOrderForm {
    #[default]
    Corrected,
    Flipped,
}

impl FirstOrderForm {
    fn bracket_sign(self) -> f64 {
        match self {
            Self::Corrected => -1.0,
            Self::Flipped => 1.0,
        }
    }
}

/// First-order closed-form wavefunction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderWavefunction {
    pub params: OscillatorParams,
    pub freqs: DerivedFrequencies,
    pub form: FirstOrderForm,
}

impl FirstOrderWavefunction {
    pub fn new(params: &OscillatorParams, form: FirstOrderForm) -> Self {
        params.warn_if_not_perturbative("first-order wavefunction");
        Self {
            params: *params,
            freqs: params.frequencies(),
            form,
        }
    }
}

impl Wavefunction for FirstOrderWavefunction {
    fn eval(&self, x1: f64, x2: f64, t: f64) -> WavefunctionEval {
        psi_first_order(x1, x2, t, &self.params, &self.freqs, self.form)
    }
}

/// `ψ = (α/√(2π)) e^{−α(x₁² + x₂²)/2} e^{−2iω̄t} B(x₁, x₂, t)`, `α = mω̄/ħ`, with
///
/// `B = 2i(x₁ + σx₂[½ − αx₁²]δ) sin δωt + 2(x₂ + σx₁[½ − αx₂²]δ) cos δωt
///    + ½δ(x₁ + x₂)[αu² − 1] e^{−i(2ω̄+δω)t} − ½δ u[αu² − 3] e^{−i(2ω̄+3δω)t}`,
///
/// `u = x₁ − x₂`, `δ = δω/ω̄` and `σ` set by `form`.
pub fn psi_first_order(
    x1: f64,
    x2: f64,
    t: f64,
    params: &OscillatorParams,
    freqs: &DerivedFrequencies,
    form: FirstOrderForm,
) -> WavefunctionEval {
    let wb = freqs.omega_bar;
    let dw = freqs.delta_omega;
    let a = params.m * wb / params.hbar;
    let d = freqs.delta_ratio();
    let sg = form.bracket_sign();
    let (s, c) = (dw * t).sin_cos();
    let u = x1 - x2;
    let v = x1 + x2;
    let e1 = Complex64::from_polar(1.0, -(2.0 * wb + dw) * t);
    let e3 = Complex64::from_polar(1.0, -(2.0 * wb + 3.0 * dw) * t);
    let i = Complex64::i();

    let b = i * (2.0 * (x1 + sg * x2 * (0.5 - a * x1 * x1) * d) * s)
        + 2.0 * (x2 + sg * x1 * (0.5 - a * x2 * x2) * d) * c
        + e1 * (0.5 * d * v * (a * u * u - 1.0))
        - e3 * (0.5 * d * u * (a * u * u - 3.0));
    let cross = 1.0 - 2.0 * sg * a * x1 * x2 * d;
    let b1 = i * (2.0 * cross * s)
        + 2.0 * sg * d * (0.5 - a * x2 * x2) * c
        + e1 * (0.5 * d * (a * u * u - 1.0 + 2.0 * a * u * v))
        - e3 * (1.5 * d * (a * u * u - 1.0));
    let b2 = i * (2.0 * sg * d * (0.5 - a * x1 * x1) * s)
        + 2.0 * cross * c
        + e1 * (0.5 * d * (a * u * u - 1.0 - 2.0 * a * u * v))
        + e3 * (1.5 * d * (a * u * u - 1.0));

    let pre = Complex64::from_polar(
        a / (2.0 * PI).sqrt() * (-0.5 * a * (x1 * x1 + x2 * x2)).exp(),
        -2.0 * wb * t,
    );
    WavefunctionEval {
        value: pre * b,
        grad: [pre * (b1 - b * (a * x1)), pre * (b2 - b * (a * x2))],
        kind: EvalKind::FirstOrder,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DEFAULT_HBAR;
    use approx::assert_relative_eq;

    fn beat(r: f64) -> OscillatorParams {
        OscillatorParams::from_beat(1.0, 1.0, r, DEFAULT_HBAR).unwrap()
    }

    #[test]
    fn initial_state_properties() {
        let p = beat(0.1);
        assert_eq!(initial_state(1.3, 0.0, &p), 0.0);
        assert_eq!(initial_state(0.4, -0.7, &p), -initial_state(0.4, 0.7, &p));
        let s = (p.hbar / (p.m * p.frequencies().omega)).sqrt();
        let r = gauss_hermite_rule(64, s).unwrap();
        let norm: f64 = r
            .tensor_plain()
            .iter()
            .map(|&(x, y, w)| w * initial_state(x, y, &p).powi(2))
            .sum();
        assert!((norm - 1.0).abs() < 1e-10);
    }

    #[test]
    fn uncoupled_projection_is_rotated_fock_state() {
        let p = OscillatorParams::with_default_hbar(1.0, 1.0, 0.0).unwrap();
        let st = project_initial_state(&p, Truncation::default()).unwrap();
        for (idx, c) in st.iter() {
            let want = match (idx.n, idx.n_prime) {
                (1, 0) => FRAC_1_SQRT_2,
                (0, 1) => -FRAC_1_SQRT_2,
                _ => 0.0,
            };
            assert!((c - want).abs() < 1e-12, "{idx:?}: {c}");
        }
    }

    #[test]
    fn parity_and_closed_form_agreement() {
        for r in [0.01, 0.05, 0.1] {
            let p = beat(r);
            let st = project_initial_state(&p, Truncation::default()).unwrap();
            for (idx, c) in st.iter() {
                if (idx.n + idx.n_prime) % 2 == 0 {
                    assert!(c.abs() < 1e-12);
                }
                let cf = coefficient_closed_form(idx.n, idx.n_prime, &st.freqs);
                assert!((c - cf).abs() < 1e-10, "{idx:?}: {c} vs {cf}");
            }
            assert!(1.0 - st.norm_sq() <= st.tail_bound);
        }
    }

    #[test]
    fn closed_form_ratios() {
        let f = beat(0.1).frequencies();
        let r = (f.omega_prime - f.omega) / (f.omega + f.omega_prime);
        for q in [1u32, 3, 5] {
            let ratio = coefficient_closed_form(0, q + 2, &f) / coefficient_closed_form(0, q, &f);
            assert_relative_eq!(ratio, r * (f64::from(q + 2) / f64::from(q + 1)).sqrt(), max_relative = 1e-12);
        }
        for q in [0u32, 2, 4] {
            let ratio = coefficient_closed_form(1, q + 2, &f) / coefficient_closed_form(1, q, &f);
            assert_relative_eq!(ratio, r * (f64::from(q + 1) / f64::from(q + 2)).sqrt(), max_relative = 1e-12);
        }
    }

    #[test]
    fn order_checks() {
        let p = beat(0.1);
        let t = Truncation::new(1, 20);
        let f = |x1: f64, x2: f64| initial_state(x1, x2, &p);
        assert!(matches!(
            project_coefficients(f, t, 40, &p),
            Err(Error::QuadratureOrder { .. })
        ));
        assert!(project_coefficients(f, t, 56, &p).is_ok());
    }

    #[test]
    fn exact_series_reproduces_initial_state() {
        let p = beat(0.1);
        let st = project_initial_state(&p, Truncation::default()).unwrap();
        for &(x1, x2) in &[(0.3, -1.2), (2.0, 1.0), (-3.1, 0.4)] {
            let v = st.eval(x1, x2, 0.0).value;
            assert!(v.im.abs() < 1e-15);
            assert!((v.re - initial_state(x1, x2, &p)).abs() < 1e-5);
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        let p = beat(0.1);
        let st = project_initial_state(&p, Truncation::default()).unwrap();
        let fo = FirstOrderWavefunction::new(&p, FirstOrderForm::Corrected);
        let pr = FirstOrderWavefunction::new(&p, FirstOrderForm::Flipped);
        let evals: [&dyn Wavefunction; 3] = [&st, &fo, &pr];
        let h = 1e-5;
        for w in evals {
            for &(x1, x2, t) in &[(0.7, -1.1, 3.3), (-2.0, 0.5, 11.0)] {
                let g = w.eval(x1, x2, t).grad;
                let d1 = (w.eval(x1 + h, x2, t).value - w.eval(x1 - h, x2, t).value) / (2.0 * h);
                let d2 = (w.eval(x1, x2 + h, t).value - w.eval(x1, x2 - h, t).value) / (2.0 * h);
                assert!((g[0] - d1).norm() < 1e-7, "{:?}", w.eval(x1, x2, t).kind);
                assert!((g[1] - d2).norm() < 1e-7);
            }
        }
    }

    #[test]
    fn second_derivatives_match_finite_differences() {
        let p = beat(0.1);
        let st = project_initial_state(&p, Truncation::default()).unwrap();
        let h = 1e-4;
        let (x1, x2, t) = (0.9, -0.6, 5.0);
        let (_, d) = st.eval_second(x1, x2, t);
        let f = |a, b| st.eval(a, b, t).value;
        let d11 = (f(x1 + h, x2) - f(x1, x2) * 2.0 + f(x1 - h, x2)) / (h * h);
        let d22 = (f(x1, x2 + h) - f(x1, x2) * 2.0 + f(x1, x2 - h)) / (h * h);
        assert!((d[0] - d11).norm() < 1e-5);
        assert!((d[1] - d22).norm() < 1e-5);
    }

    #[test]
    fn first_order_vanishes_at_origin() {
        let p = beat(0.1);
        for form in [FirstOrderForm::Corrected, FirstOrderForm::Flipped] {
            for t in [0.0, 1.0, 17.0, 31.4] {
                assert_eq!(psi_first_order(0.0, 0.0, t, &p, &p.frequencies(), form).value.norm(), 0.0);
            }
        }
    }
}
