//! Physical parameters, derived frequencies, normal coordinates and the
//! harmonic-oscillator eigenbasis.
//!
//! Units are electron masses, Ångström and femtoseconds throughout. The
//! default reduced Planck constant is `ħ = 10 mₑ·Å²·fs⁻¹`; the physical value
//! in these units is about 11.577 and can be supplied explicitly.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default `ħ` in mₑ·Å²·fs⁻¹.
pub const DEFAULT_HBAR: f64 = 10.0;

/// Coupling ratio `ε = 2λ/k` above which first-order closed forms are flagged.
pub const FIRST_ORDER_EPSILON_LIMIT: f64 = 0.2;

/// Two identical oscillators of mass `m` and spring `k`, coupled by a spring `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorParams {
    pub m: f64,
    pub k: f64,
    pub lambda: f64,
    pub hbar: f64,
    /// Equilibrium offset. The shift `x = X ± d` removes it from every
    /// dynamical quantity; it is carried only for bookkeeping.
    #[serde(default)]
    pub d: f64,
}

impl OscillatorParams {
    pub fn new(m: f64, k: f64, lambda: f64, hbar: f64) -> Result<Self> {
        let params = Self {
            m,
            k,
            lambda,
            hbar,
            d: 0.0,
        };
        params.validate()?;
        Ok(params)
    }

    /// Parameters in the default unit system (`ħ = 10`).
    pub fn with_default_hbar(m: f64, k: f64, lambda: f64) -> Result<Self> {
        Self::new(m, k, lambda, DEFAULT_HBAR)
    }

    /// Builds parameters from the mean frequency `ω̄` and the ratio `δω/ω̄`,
    /// the way the reference scenarios are specified.
    ///
    /// `ω = ω̄(1 − r)` and `ω′ = ω̄(1 + r)`, hence `k = mω²` and
    /// `λ = m(ω′² − ω²)/2 = 2mω̄²r`.
    pub fn from_beat(m: f64, omega_bar: f64, delta_ratio: f64, hbar: f64) -> Result<Self> {
        if !(omega_bar > 0.0) || !(0.0..1.0).contains(&delta_ratio) {
            return Err(Error::InvalidParams(format!(
                "need omega_bar > 0 and 0 <= delta_ratio < 1, got {omega_bar}, {delta_ratio}"
            )));
        }
        let omega = omega_bar * (1.0 - delta_ratio);
        let k = m * omega * omega;
        let lambda = 2.0 * m * omega_bar * omega_bar * delta_ratio;
        Self::new(m, k, lambda, hbar)
    }

    pub fn with_offset(mut self, d: f64) -> Self {
        self.d = d;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.m > 0.0
            && self.k > 0.0
            && self.hbar > 0.0
            && self.lambda >= 0.0
            && [self.m, self.k, self.lambda, self.hbar, self.d]
                .iter()
                .all(|v| v.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!(
                "require m > 0, k > 0, hbar > 0, lambda >= 0 (got m={}, k={}, lambda={}, hbar={})",
                self.m, self.k, self.lambda, self.hbar
            )))
        }
    }

    pub fn epsilon(&self) -> f64 {
        2.0 * self.lambda / self.k
    }

    /// `true` when first-order closed forms are inside their stated validity range.
    pub fn is_perturbative(&self) -> bool {
        self.epsilon() <= FIRST_ORDER_EPSILON_LIMIT
    }

    /// Logs a warning if a first-order formula is about to be used outside
    /// `ε ≤ 0.2`. Returns whether the parameters are perturbative.
    pub fn warn_if_not_perturbative(&self, what: &str) -> bool {
        let ok = self.is_perturbative();
        if !ok {
            log::warn!(
                "{what}: epsilon = {:.4} exceeds {FIRST_ORDER_EPSILON_LIMIT}; first-order closed forms are outside their validity range",
                self.epsilon()
            );
        }
        ok
    }

    pub fn frequencies(&self) -> DerivedFrequencies {
        derive_frequencies(self)
    }

    /// Squared natural length `ħ/(mω̄)`.
    pub fn length_scale_sq(&self) -> f64 {
        self.hbar / (self.m * self.frequencies().omega_bar)
    }
}

/// Normal-mode frequencies and the beat parametrisation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedFrequencies {
    pub omega: f64,
    pub omega_prime: f64,
    pub delta_omega: f64,
    pub omega_bar: f64,
    pub epsilon: f64,
}

impl DerivedFrequencies {
    /// `δω/ω̄`, the expansion parameter of every first-order formula.
    pub fn delta_ratio(&self) -> f64 {
        if self.omega_bar == 0.0 {
            0.0
        } else {
            self.delta_omega / self.omega_bar
        }
    }

    pub fn mode_frequency(&self, mode: Mode) -> f64 {
        match mode {
            Mode::Plus => self.omega,
            Mode::Minus => self.omega_prime,
        }
    }
}

/// Exact normal-mode frequencies. `δω` is evaluated as `λ/(m(ω + ω′))`,
/// which equals `(ω′ − ω)/2` without cancellation.
pub fn derive_frequencies(params: &OscillatorParams) -> DerivedFrequencies {
    let omega = (params.k / params.m).sqrt();
    let omega_prime = ((params.k + 2.0 * params.lambda) / params.m).sqrt();
    let delta_omega = params.lambda / (params.m * (omega + omega_prime));
    let omega_bar = 0.5 * (omega + omega_prime);
    DerivedFrequencies {
        omega,
        omega_prime,
        delta_omega,
        omega_bar,
        epsilon: params.epsilon(),
    }
}

/// Weak-coupling estimate `δω ≈ λ/(2√(km))`. Diagnostic only.
pub fn perturbative_delta_omega(params: &OscillatorParams) -> f64 {
    params.lambda / (2.0 * (params.k * params.m).sqrt())
}

/// Normal mode selector: `Plus` is `ξ₊` at frequency `ω`, `Minus` is `ξ₋` at `ω′`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    Plus,
    Minus,
}

/// Quantum numbers `(n, n′)` of the `+` and `−` modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModeIndex {
    pub n: u32,
    pub n_prime: u32,
}

impl ModeIndex {
    pub const fn new(n: u32, n_prime: u32) -> Self {
        Self { n, n_prime }
    }
}

/// `ξ± = (x₁ ± x₂)/√2`.
pub fn to_normal_coords(x1: f64, x2: f64) -> (f64, f64) {
    ((x1 + x2) * FRAC_1_SQRT_2, (x1 - x2) * FRAC_1_SQRT_2)
}

pub fn from_normal_coords(xi_plus: f64, xi_minus: f64) -> (f64, f64) {
    (
        (xi_plus + xi_minus) * FRAC_1_SQRT_2,
        (xi_plus - xi_minus) * FRAC_1_SQRT_2,
    )
}

/// Physicists' Hermite polynomial by `H_{n+1} = 2xH_n − 2nH_{n−1}`.
pub fn hermite(n: u32, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for j in 1..n {
        let next = 2.0 * x * cur - 2.0 * f64::from(j) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Orthonormal Hermite functions `h_j(y) = (2^j j! √π)^{-1/2} H_j(y) e^{−y²/2}`
/// for `j = 0..=nmax`, by the normalised three-term recurrence.
pub fn hermite_functions(nmax: u32, y: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(nmax as usize + 1);
    out.push(PI.powf(-0.25) * (-0.5 * y * y).exp());
    if nmax >= 1 {
        out.push(std::f64::consts::SQRT_2 * y * out[0]);
    }
    for j in 1..nmax as usize {
        let jf = j as f64;
        let next = (2.0 / (jf + 1.0)).sqrt() * y * out[j] - (jf / (jf + 1.0)).sqrt() * out[j - 1];
        out.push(next);
    }
    out
}

/// Values and first derivatives (with respect to `y`) of the orthonormal
/// Hermite functions, using `h_j′ = √(2j) h_{j−1} − y h_j`.
pub fn hermite_functions_with_derivative(nmax: u32, y: f64) -> (Vec<f64>, Vec<f64>) {
    let vals = hermite_functions(nmax, y);
    let ders = vals
        .iter()
        .enumerate()
        .map(|(j, &h)| {
            let lower = if j == 0 {
                0.0
            } else {
                (2.0 * j as f64).sqrt() * vals[j - 1]
            };
            lower - y * h
        })
        .collect();
    (vals, ders)
}

/// Inverse squared length of a mode, `mω/ħ`.
pub fn mode_alpha(mode: Mode, params: &OscillatorParams, freqs: &DerivedFrequencies) -> f64 {
    params.m * freqs.mode_frequency(mode) / params.hbar
}

/// Normalised eigenfunction `φ±⁽ⁿ⁾(ξ)` of the `+` (frequency `ω`) or `−`
/// (frequency `ω′`) mode, in Å^(−1/2).
pub fn eigenfunction(
    mode: Mode,
    n: u32,
    xi: f64,
    params: &OscillatorParams,
    freqs: &DerivedFrequencies,
) -> f64 {
    let alpha = mode_alpha(mode, params, freqs);
    let y = alpha.sqrt() * xi;
    alpha.powf(0.25) * hermite_functions(n, y)[n as usize]
}

/// All eigenfunctions `φ⁽⁰⁾..φ⁽ⁿᵐᵃˣ⁾` and their `ξ`-derivatives at one point.
pub fn eigenfunctions_with_derivative(
    mode: Mode,
    nmax: u32,
    xi: f64,
    params: &OscillatorParams,
    freqs: &DerivedFrequencies,
) -> (Vec<f64>, Vec<f64>) {
    let alpha = mode_alpha(mode, params, freqs);
    let sa = alpha.sqrt();
    let norm = alpha.powf(0.25);
    let (mut v, mut d) = hermite_functions_with_derivative(nmax, sa * xi);
    v.iter_mut().for_each(|x| *x *= norm);
    d.iter_mut().for_each(|x| *x *= norm * sa);
    (v, d)
}

/// `E = ħω(n + ½)` for the `+` mode, `ħω′(n′ + ½)` for the `−` mode.
pub fn eigenvalue(mode: Mode, n: u32, params: &OscillatorParams, freqs: &DerivedFrequencies) -> f64 {
    params.hbar * freqs.mode_frequency(mode) * (f64::from(n) + 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_params(k: f64, lambda: f64) -> OscillatorParams {
        OscillatorParams::with_default_hbar(1.0, k, lambda).unwrap()
    }

    #[test]
    fn zero_coupling_frequencies_coincide() {
        let f = unit_params(1.0, 0.0).frequencies();
        assert_eq!(f.omega, 1.0);
        assert_eq!(f.omega_prime, 1.0);
        assert_eq!(f.omega_bar, 1.0);
        assert_eq!(f.delta_omega, 0.0);
    }

    #[test]
    fn exact_frequencies_for_weak_coupling() {
        let f = unit_params(1.0, 0.1).frequencies();
        assert_relative_eq!(f.omega_prime, 1.2f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(f.delta_omega, (1.2f64.sqrt() - 1.0) / 2.0, epsilon = 1e-15);
        assert_relative_eq!(f.delta_omega, 0.047722557505166, epsilon = 1e-12);
        assert_relative_eq!(f.omega_bar, 1.047722557505166, epsilon = 1e-12);
    }

    #[test]
    fn perturbative_estimate_is_second_order_off() {
        let p = unit_params(1.0, 0.2);
        let exact = p.frequencies().delta_omega;
        let approx = perturbative_delta_omega(&p);
        assert_relative_eq!(approx, 0.1, epsilon = 1e-15);
        assert_relative_eq!(exact, 0.091607978309962, epsilon = 1e-12);
        // O(λ²) with a modest constant
        assert!((exact - approx).abs() < 0.25 * 0.2 * 0.2);
    }

    #[test]
    fn from_beat_recovers_mean_and_split() {
        let p = OscillatorParams::from_beat(1.0, 1.0, 0.1, DEFAULT_HBAR).unwrap();
        let f = p.frequencies();
        assert_relative_eq!(f.omega_bar, 1.0, epsilon = 1e-14);
        assert_relative_eq!(f.delta_omega, 0.1, epsilon = 1e-14);
        assert_relative_eq!(f.omega, 0.9, epsilon = 1e-14);
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(OscillatorParams::new(0.0, 1.0, 0.0, 10.0).is_err());
        assert!(OscillatorParams::new(1.0, -1.0, 0.0, 10.0).is_err());
        assert!(OscillatorParams::new(1.0, 1.0, -0.1, 10.0).is_err());
        assert!(OscillatorParams::new(1.0, 1.0, 0.1, 0.0).is_err());
        assert!(OscillatorParams::new(1.0, 1.0, f64::NAN, 10.0).is_err());
    }

    #[test]
    fn perturbative_flag() {
        assert!(unit_params(1.0, 0.1).is_perturbative());
        assert!(!unit_params(1.0, 0.11).is_perturbative());
    }

    #[test]
    fn normal_coordinate_examples() {
        assert_eq!(to_normal_coords(0.0, 0.0), (0.0, 0.0));
        let (p, m) = to_normal_coords(1.0, 1.0);
        assert_relative_eq!(p, 2f64.sqrt(), epsilon = 1e-15);
        assert_eq!(m, 0.0);
        let (p, m) = to_normal_coords(1.0, -1.0);
        assert_eq!(p, 0.0);
        assert_relative_eq!(m, 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn hermite_examples() {
        assert_eq!(hermite(0, 3.7), 1.0);
        assert_eq!(hermite(2, 2.0), 14.0);
        assert_eq!(hermite(3, 1.0), -4.0);
    }

    #[test]
    fn hermite_matches_explicit_polynomials() {
        let explicit: [fn(f64) -> f64; 6] = [
            |_| 1.0,
            |x| 2.0 * x,
            |x| 4.0 * x * x - 2.0,
            |x| 8.0 * x.powi(3) - 12.0 * x,
            |x| 16.0 * x.powi(4) - 48.0 * x * x + 12.0,
            |x| 32.0 * x.powi(5) - 160.0 * x.powi(3) + 120.0 * x,
        ];
        for i in 0..100 {
            let x = -5.0 + 10.0 * f64::from(i) / 99.0;
            for (n, h) in explicit.iter().enumerate() {
                let want = h(x);
                let got = hermite(n as u32, x);
                assert!(
                    (got - want).abs() <= 1e-12 * want.abs().max(1.0),
                    "H_{n}({x}) = {got}, want {want}"
                );
            }
        }
    }

    #[test]
    fn eigenfunction_matches_textbook_form() {
        let p = unit_params(1.0, 0.1);
        let f = p.frequencies();
        for n in 0..8u32 {
            for &xi in &[-2.3, -0.4, 0.0, 0.9, 3.1] {
                let alpha = p.m * f.omega_prime / p.hbar;
                let norm = (alpha / PI).powf(0.25)
                    / (2f64.powi(n as i32) * (1..=n).map(f64::from).product::<f64>()).sqrt();
                let want = norm * hermite(n, alpha.sqrt() * xi) * (-alpha * xi * xi / 2.0).exp();
                let got = eigenfunction(Mode::Minus, n, xi, &p, &f);
                assert_relative_eq!(got, want, epsilon = 1e-13, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn eigenfunction_parity_and_peak() {
        let p = unit_params(1.0, 0.2);
        let f = p.frequencies();
        assert_eq!(eigenfunction(Mode::Plus, 1, 0.0, &p, &f), 0.0);
        let peak = (p.m * f.omega_prime / (PI * p.hbar)).powf(0.25);
        assert_relative_eq!(eigenfunction(Mode::Minus, 0, 0.0, &p, &f), peak, epsilon = 1e-15);
    }

    #[test]
    fn eigenvalue_examples() {
        let p = unit_params(1.0, 0.0);
        let f = p.frequencies();
        assert_eq!(eigenvalue(Mode::Plus, 0, &p, &f), 5.0);
        let f12 = DerivedFrequencies {
            omega_prime: 1.2,
            ..f
        };
        assert_relative_eq!(eigenvalue(Mode::Minus, 1, &p, &f12), 18.0, epsilon = 1e-14);
        for n in 1..20 {
            let gap = eigenvalue(Mode::Plus, n, &p, &f) - eigenvalue(Mode::Plus, n - 1, &p, &f);
            assert_relative_eq!(gap, p.hbar * f.omega, epsilon = 1e-12);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let p = unit_params(1.0, 0.1);
        let f = p.frequencies();
        let h = 1e-5;
        for &xi in &[-1.7, 0.3, 2.2] {
            let (_, d) = eigenfunctions_with_derivative(Mode::Plus, 6, xi, &p, &f);
            for n in 0..=6u32 {
                let fd = (eigenfunction(Mode::Plus, n, xi + h, &p, &f)
                    - eigenfunction(Mode::Plus, n, xi - h, &p, &f))
                    / (2.0 * h);
                assert_relative_eq!(d[n as usize], fd, epsilon = 1e-8);
            }
        }
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn normal_coords_round_trip(x1 in -1e3f64..1e3, x2 in -1e3f64..1e3) {
                let (p, m) = to_normal_coords(x1, x2);
                let (y1, y2) = from_normal_coords(p, m);
                prop_assert!((y1 - x1).abs() <= 4.0 * f64::EPSILON * x1.abs().max(x2.abs()).max(1.0));
                prop_assert!((y2 - x2).abs() <= 4.0 * f64::EPSILON * x1.abs().max(x2.abs()).max(1.0));
                let r2 = x1 * x1 + x2 * x2;
                prop_assert!((p * p + m * m - r2).abs() <= 8.0 * f64::EPSILON * r2.max(1e-300));
            }

            #[test]
            fn frequency_identities(m in 0.1f64..10.0, k in 0.1f64..10.0, lam in 0.0f64..5.0) {
                let f = OscillatorParams::new(m, k, lam, 10.0).unwrap().frequencies();
                prop_assert!(f.omega_prime >= f.omega);
                prop_assert!(f.delta_omega >= 0.0);
                prop_assert!(f.omega <= f.omega_bar && f.omega_bar <= f.omega_prime);
                let tol = 4.0 * f64::EPSILON * f.omega_prime;
                prop_assert!((f.omega_bar + f.delta_omega - f.omega_prime).abs() <= tol);
                prop_assert!((f.omega_bar - f.delta_omega - f.omega).abs() <= tol);
            }
        }
    }
}
