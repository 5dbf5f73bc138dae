use cho_core::model::{eigenfunction, mode_alpha, Mode, OscillatorParams, DEFAULT_HBAR};
use cho_core::quadrature::gauss_hermite_rule;
use cho_core::spectral::{project_initial_state, SpectralState, Truncation, Wavefunction};

fn beat(r: f64) -> OscillatorParams {
    OscillatorParams::from_beat(1.0, 1.0, r, DEFAULT_HBAR).unwrap()
}

#[test]
fn eigenfunctions_are_orthonormal_under_quadrature() {
    let p = beat(0.1);
    let f = p.frequencies();
    for mode in [Mode::Plus, Mode::Minus] {
        let rule = gauss_hermite_rule(64, 1.0 / mode_alpha(mode, &p, &f).sqrt()).unwrap();
        for m in 0..=10 {
            for n in 0..=m {
                let overlap = rule.integrate(|x| eigenfunction(mode, m, x, &p, &f) * eigenfunction(mode, n, x, &p, &f));
                let expected = if m == n { 1.0 } else { 0.0 };
                assert!((overlap - expected).abs() < 1e-12, "{mode:?} <{m}|{n}> = {overlap}");
            }
        }
    }
}

/// `∂ρ/∂t + ∇·j` by central differences, `j = (ħ/m) Im(ψ* ∇ψ)`.
fn continuity_residual(state: &SpectralState, x1: f64, x2: f64, t: f64, h: f64) -> (f64, f64) {
    let p = &state.params;
    let current = |a: f64, b: f64| {
        let e = state.eval(a, b, t);
        let c = e.value.conj();
        [(c * e.grad[0]).im * p.hbar / p.m, (c * e.grad[1]).im * p.hbar / p.m]
    };
    let drho = (state.density(x1, x2, t + h) - state.density(x1, x2, t - h)) / (2.0 * h);
    let div = (current(x1 + h, x2)[0] - current(x1 - h, x2)[0]) / (2.0 * h)
        + (current(x1, x2 + h)[1] - current(x1, x2 - h)[1]) / (2.0 * h);
    (drho + div, drho.abs())
}

#[test]
fn exact_series_satisfies_continuity_equation() {
    let p = beat(0.1);
    let state = project_initial_state(&p, Truncation::default()).unwrap();
    let points = [(0.7, -1.3, 2.0), (2.1, 0.4, 9.0), (-1.5, 2.5, 15.7), (3.0, -3.5, 24.0)];
    for &(x1, x2, t) in &points {
        let (r1, scale) = continuity_residual(&state, x1, x2, t, 1e-2);
        let (r2, _) = continuity_residual(&state, x1, x2, t, 5e-3);
        // second-order differences: halving h quarters the residual
        let ratio = r1.abs() / r2.abs();
        assert!((3.0..5.0).contains(&ratio), "ratio {ratio} at ({x1}, {x2}, {t})");
        assert!(r2.abs() < 1e-3 * scale.max(1e-6), "residual {r2} vs rate {scale}");
    }
}
