//! JSON scenario files.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classical::ClassicalScenario;
use crate::error::{Error, Result};
use crate::model::{OscillatorParams, DEFAULT_HBAR};
use crate::ode::SolverOptions;
use crate::spectral::{FirstOrderForm, Truncation};
use crate::validation::{reference_params, BEAT_RATIO_COARSE, BEAT_RATIO_FINE, BEAT_RATIO_FINEST};

fn default_hbar() -> f64 {
    DEFAULT_HBAR
}

/// Physical parameters, either directly or through the beat parametrisation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ParamsSpec {
    Direct {
        m: f64,
        k: f64,
        lambda: f64,
        #[serde(default = "default_hbar")]
        hbar: f64,
        #[serde(default)]
        d: f64,
    },
    Beat {
        m: f64,
        omega_bar: f64,
        delta_ratio: f64,
        #[serde(default = "default_hbar")]
        hbar: f64,
        #[serde(default)]
        d: f64,
    },
}

impl ParamsSpec {
    pub fn resolve(&self) -> Result<OscillatorParams> {
        match *self {
            ParamsSpec::Direct { m, k, lambda, hbar, d } => Ok(OscillatorParams::new(m, k, lambda, hbar)?.with_offset(d)),
            ParamsSpec::Beat {
                m,
                omega_bar,
                delta_ratio,
                hbar,
                d,
            } => Ok(OscillatorParams::from_beat(m, omega_bar, delta_ratio, hbar)?.with_offset(d)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rtol: 1e-9, atol: 1e-12 }
    }
}

impl Tolerances {
    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions::with_tolerances(self.rtol, self.atol)
    }

    fn validate(&self) -> Result<()> {
        if self.rtol > 0.0 && self.atol > 0.0 && self.rtol < 1.0 {
            Ok(())
        } else {
            Err(Error::Config(format!("tolerances must satisfy 0 < rtol < 1, atol > 0 (got {}, {})", self.rtol, self.atol)))
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MarginalSourceSetting {
    ClosedForm,
    Quadrature,
    #[default]
    Both,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GuidanceSetting {
    /// Reduced closed-form field.
    #[default]
    Reduced,
    /// `(ħ/m) Im(∇ψ/ψ)` of the exact series.
    ExactSeries,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassicalSettings {
    /// Initial conditions; defaults to particle 2 displaced by `params.d`
    /// (or 1 Å when `d` is zero).
    pub initial: Option<ClassicalScenario>,
    /// Defaults to one beat period `2π/δω`.
    pub t_end: Option<f64>,
    pub samples: usize,
    /// Also integrate Hamilton's equations and report the deviation.
    pub verify: bool,
    pub tolerances: Tolerances,
}

impl Default for ClassicalSettings {
    fn default() -> Self {
        Self {
            initial: None,
            t_end: None,
            samples: 2001,
            verify: true,
            tolerances: Tolerances { rtol: 1e-12, atol: 1e-14 },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MarginalSettings {
    /// Defaults to `π/δω`.
    pub t_end: Option<f64>,
    pub t_samples: usize,
    /// Defaults to five natural lengths `√(ħ/mω̄)`.
    pub x_half_width: Option<f64>,
    pub x_samples: usize,
    pub source: MarginalSourceSetting,
    pub form: FirstOrderForm,
    pub quadrature_order: usize,
}

impl Default for MarginalSettings {
    fn default() -> Self {
        Self {
            t_end: None,
            t_samples: 41,
            x_half_width: None,
            x_samples: 201,
            source: MarginalSourceSetting::Both,
            form: FirstOrderForm::Corrected,
            quadrature_order: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnergySettings {
    /// Defaults to `2π/δω`.
    pub t_end: Option<f64>,
    pub samples: usize,
    pub quadrature_order: usize,
}

impl Default for EnergySettings {
    fn default() -> Self {
        Self {
            t_end: None,
            samples: 101,
            quadrature_order: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrajectorySettings {
    pub x0: [f64; 2],
    /// Defaults to `π/δω`.
    pub t_end: Option<f64>,
    /// Dense-output samples written to the CSV.
    pub samples: usize,
    pub tolerances: Tolerances,
    pub guidance: GuidanceSetting,
}

impl Default for TrajectorySettings {
    fn default() -> Self {
        Self {
            x0: [0.0, -1.0],
            t_end: None,
            samples: 2001,
            tolerances: Tolerances::default(),
            guidance: GuidanceSetting::Reduced,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnsembleSettings {
    pub count: usize,
    pub seed: u64,
    /// Defaults to `[0, π/(2δω)]`.
    pub times: Option<Vec<f64>>,
    pub tolerances: Tolerances,
    pub guidance: GuidanceSetting,
    /// Compare against quadrature marginals of the exact series as well.
    pub exact_reference: bool,
}

impl Default for EnsembleSettings {
    fn default() -> Self {
        Self {
            count: 10_000,
            seed: 1,
            times: None,
            tolerances: Tolerances::default(),
            guidance: GuidanceSetting::Reduced,
            exact_reference: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidateSettings {
    /// Criterion ids to run; all when absent.
    pub criteria: Option<Vec<u8>>,
    pub ensemble_count: usize,
    pub seed: u64,
    pub exact_field_companion: bool,
}

impl Default for ValidateSettings {
    fn default() -> Self {
        let v = crate::validation::ValidationOptions::default();
        Self {
            criteria: None,
            ensemble_count: v.ensemble_count,
            seed: v.seed,
            exact_field_companion: v.exact_field_companion,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum RunSettings {
    Classical(ClassicalSettings),
    Marginals(MarginalSettings),
    Energies(EnergySettings),
    Trajectory(TrajectorySettings),
    Ensemble(EnsembleSettings),
    Validate(ValidateSettings),
}

impl RunSettings {
    pub fn mode_name(&self) -> &'static str {
        match self {
            RunSettings::Classical(_) => "classical",
            RunSettings::Marginals(_) => "marginals",
            RunSettings::Energies(_) => "energies",
            RunSettings::Trajectory(_) => "trajectory",
            RunSettings::Ensemble(_) => "ensemble",
            RunSettings::Validate(_) => "validate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub params: ParamsSpec,
    #[serde(default)]
    pub truncation: Truncation,
    pub run: RunSettings,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be positive and finite, got {v}")))
    }
}

fn at_least(name: &str, v: usize, min: usize) -> Result<()> {
    if v >= min {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be at least {min}, got {v}")))
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialises")
    }

    /// Checks every setting against the ranges the computation accepts.
    pub fn validate(&self) -> Result<()> {
        let params = self.params.resolve()?;
        let f = params.frequencies();
        let needs_beat = |what: &str| {
            if f.delta_omega > 0.0 {
                Ok(())
            } else {
                Err(Error::Config(format!("{what} defaults to a multiple of the beat period; set it explicitly when lambda = 0")))
            }
        };
        let t = self.truncation;
        if t.n_max > 40 || t.n_prime_max > 80 {
            return Err(Error::Config(format!("truncation ({}, {}) too large", t.n_max, t.n_prime_max)));
        }
        match &self.run {
            RunSettings::Classical(c) => {
                at_least("samples", c.samples, 2)?;
                match c.t_end {
                    Some(v) => positive("t_end", v)?,
                    None => needs_beat("t_end")?,
                }
                c.tolerances.validate()?;
            }
            RunSettings::Marginals(c) => {
                at_least("t_samples", c.t_samples, 1)?;
                at_least("x_samples", c.x_samples, 2)?;
                match c.t_end {
                    Some(v) => positive("t_end", v)?,
                    None => needs_beat("t_end")?,
                }
                if let Some(w) = c.x_half_width {
                    positive("x_half_width", w)?;
                }
                if c.quadrature_order < t.min_quadrature_order() || c.quadrature_order > crate::quadrature::MAX_ORDER / 2 {
                    return Err(Error::Config(format!(
                        "quadrature_order must lie in [{}, {}]",
                        t.min_quadrature_order(),
                        crate::quadrature::MAX_ORDER / 2
                    )));
                }
            }
            RunSettings::Energies(c) => {
                at_least("samples", c.samples, 1)?;
                match c.t_end {
                    Some(v) => positive("t_end", v)?,
                    None => needs_beat("t_end")?,
                }
                if c.quadrature_order < t.min_quadrature_order() || c.quadrature_order > crate::quadrature::MAX_ORDER {
                    return Err(Error::Config(format!(
                        "quadrature_order must lie in [{}, {}]",
                        t.min_quadrature_order(),
                        crate::quadrature::MAX_ORDER
                    )));
                }
            }
            RunSettings::Trajectory(c) => {
                at_least("samples", c.samples, 2)?;
                match c.t_end {
                    Some(v) => positive("t_end", v)?,
                    None => needs_beat("t_end")?,
                }
                if !c.x0.iter().all(|v| v.is_finite()) {
                    return Err(Error::Config("x0 must be finite".into()));
                }
                c.tolerances.validate()?;
            }
            RunSettings::Ensemble(c) => {
                at_least("count", c.count, 1)?;
                match &c.times {
                    Some(ts) => {
                        if ts.is_empty() || ts.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
                            return Err(Error::Config("times must be a non-empty list of non-negative values".into()));
                        }
                    }
                    None => needs_beat("times")?,
                }
                c.tolerances.validate()?;
            }
            RunSettings::Validate(c) => {
                at_least("ensemble_count", c.ensemble_count, 1)?;
                if let Some(ids) = &c.criteria {
                    let known = crate::validation::all_ids();
                    if let Some(bad) = ids.iter().find(|i| !known.contains(i)) {
                        return Err(Error::Config(format!("unknown criterion {bad}")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Built-in reference scenarios: marginals at beat ratio 0.1 and trajectories at 0.01 and 0.005.
pub fn reference_scenarios(mode: &str) -> Vec<Scenario> {
    let beat = |delta_ratio: f64| ParamsSpec::Beat {
        m: 1.0,
        omega_bar: 1.0,
        delta_ratio,
        hbar: DEFAULT_HBAR,
        d: 0.0,
    };
    let dw = |r: f64| reference_params(r).expect("valid figure parameters").frequencies().delta_omega;
    let scenario = |name: &str, r: f64, run: RunSettings| Scenario {
        name: name.to_string(),
        params: beat(r),
        truncation: Truncation::default(),
        run,
    };
    match mode {
        "marginals" => vec![scenario(
            "beat-0.1-marginals",
            BEAT_RATIO_COARSE,
            RunSettings::Marginals(MarginalSettings {
                t_end: Some(PI / dw(BEAT_RATIO_COARSE)),
                ..MarginalSettings::default()
            }),
        )],
        "trajectory" => vec![
            scenario(
                "beat-0.01-trajectory",
                BEAT_RATIO_FINE,
                RunSettings::Trajectory(TrajectorySettings {
                    x0: [0.0, -1.0],
                    t_end: Some(PI / dw(BEAT_RATIO_FINE)),
                    ..TrajectorySettings::default()
                }),
            ),
            scenario(
                "beat-0.005-trajectory",
                BEAT_RATIO_FINEST,
                RunSettings::Trajectory(TrajectorySettings {
                    x0: [0.0, -std::f64::consts::SQRT_2],
                    t_end: Some(PI / dw(BEAT_RATIO_FINEST)),
                    ..TrajectorySettings::default()
                }),
            ),
        ],
        "classical" => vec![scenario("beat-0.1-classical", BEAT_RATIO_COARSE, RunSettings::Classical(ClassicalSettings::default()))],
        "energies" => vec![scenario("beat-0.1-energies", BEAT_RATIO_COARSE, RunSettings::Energies(EnergySettings::default()))],
        "ensemble" => vec![scenario("beat-0.1-ensemble", BEAT_RATIO_COARSE, RunSettings::Ensemble(EnsembleSettings::default()))],
        "validate" => vec![scenario("validate", BEAT_RATIO_COARSE, RunSettings::Validate(ValidateSettings::default()))],
        _ => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_scenario() {
        let s = Scenario::from_json(
            r#"{"name": "t", "params": {"beat": {"m": 1, "omega_bar": 1, "delta_ratio": 0.1}},
                "run": {"mode": "trajectory", "x0": [0.5, -1.0]}}"#,
        )
        .unwrap();
        match s.run {
            RunSettings::Trajectory(t) => {
                assert_eq!(t.x0, [0.5, -1.0]);
                assert_eq!(t.tolerances, Tolerances::default());
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(s.params.resolve().unwrap().hbar, DEFAULT_HBAR);
    }

    #[test]
    fn rejects_bad_input() {
        let bad = [
            r#"{"name": "t", "params": {"beat": {"m": 1, "omega_bar": 1, "delta_ratio": 0.1}}, "run": {"mode": "nope"}}"#,
            r#"{"name": "t", "params": {"beat": {"m": 1, "omega_bar": 1, "delta_ratio": 0.1}}, "run": {"mode": "trajectory", "bogus": 1}}"#,
            r#"{"name": "t", "params": {"direct": {"m": -1, "k": 1, "lambda": 0}}, "run": {"mode": "energies"}}"#,
            r#"{"name": "t", "params": {"direct": {"m": 1, "k": 1, "lambda": 0}}, "run": {"mode": "trajectory"}}"#,
            r#"{"name": "t", "params": {"beat": {"m": 1, "omega_bar": 1, "delta_ratio": 0.1}}, "run": {"mode": "ensemble", "count": 0}}"#,
            r#"{"name": "t", "params": {"beat": {"m": 1, "omega_bar": 1, "delta_ratio": 0.1}}, "run": {"mode": "validate", "criteria": [12]}}"#,
        ];
        for text in bad {
            assert!(Scenario::from_json(text).is_err(), "{text}");
        }
    }

    #[test]
    fn figure_scenarios_round_trip() {
        for mode in ["classical", "marginals", "energies", "trajectory", "ensemble", "validate"] {
            let list = reference_scenarios(mode);
            assert!(!list.is_empty());
            for s in list {
                assert_eq!(s.run.mode_name(), mode);
                let back = Scenario::from_json(&s.to_json()).unwrap();
                assert_eq!(back, s);
            }
        }
    }
}
