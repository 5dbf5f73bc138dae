//! Adaptive explicit Runge–Kutta integration with dense output.
//!
//! The scheme is the Dormand–Prince 8th-order pair of Hairer, Nørsett and
//! Wanner (DOP853): twelve stages for the 8th-order solution, a combined
//! 5th/3rd-order local error estimate, and a 7th-order continuous extension
//! that costs three extra right-hand-side evaluations per accepted step.
//!
//! A guard predicate is checked on every stage state before the right-hand
//! side is evaluated there. A failing stage rejects the step and shrinks it;
//! once the step would underflow, integration stops with
//! [`OdeError::GuardTriggered`] carrying the last accepted state.

// tableau constants are kept to full quoted precision
#![allow(clippy::excessive_precision, clippy::needless_range_loop)]

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError {
    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64, y: Vec<f64> },

    #[error("guard rejected every step near t = {t}; last safe time {t_safe}")]
    GuardTriggered { t: f64, t_safe: f64, y_safe: Vec<f64> },

    #[error("maximum number of steps ({0}) exceeded")]
    MaxSteps(usize),

    #[error("right-hand side not finite at the initial point")]
    NonFiniteStart,

    #[error("invalid problem: {0}")]
    InvalidProblem(String),
}

/// Initial value problem `y′ = f(t, y)`, `y(t0) = y0`, on `[t0, t1]`.
pub struct OdeProblem<F> {
    pub rhs: F,
    pub t_span: (f64, f64),
    pub y0: Vec<f64>,
}

impl<F> OdeProblem<F>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    pub fn new(rhs: F, t_span: (f64, f64), y0: Vec<f64>) -> Self {
        Self { rhs, t_span, y0 }
    }

    pub fn dimension(&self) -> usize {
        self.y0.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; estimated when `None`.
    pub h0: Option<f64>,
    pub h_max: Option<f64>,
    pub max_steps: usize,
    /// Keep per-step records and dense-output coefficients.
    pub dense: bool,
    pub safety: f64,
    /// Bounds on `h_new / h`.
    pub growth_min: f64,
    pub growth_max: f64,
    /// Proportional gain of the PI controller.
    pub beta: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-9,
            atol: 1e-12,
            h0: None,
            h_max: None,
            max_steps: 1_000_000,
            dense: true,
            safety: 0.9,
            growth_min: 0.2,
            growth_max: 5.0,
            beta: 0.04,
        }
    }
}

impl SolverOptions {
    pub fn with_tolerances(rtol: f64, atol: f64) -> Self {
        Self {
            rtol,
            atol,
            ..Self::default()
        }
    }

    pub fn endpoints_only(mut self) -> Self {
        self.dense = false;
        self
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SolverStats {
    pub accepted: usize,
    pub rejected: usize,
    pub guard_rejections: usize,
    pub rhs_evals: usize,
}

/// One accepted step with its 7th-order interpolant.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub t_start: f64,
    pub t_end: f64,
    pub y_start: Vec<f64>,
    pub y_end: Vec<f64>,
    /// Dense-output coefficient vectors `cont1..cont8`.
    pub coeffs: [Vec<f64>; 8],
    /// Scaled local error estimate (≤ 1 for accepted steps).
    pub error: f64,
}

impl StepRecord {
    pub fn contains(&self, t: f64) -> bool {
        t >= self.t_start && t <= self.t_end
    }

    fn theta(&self, t: f64) -> f64 {
        (t - self.t_start) / (self.t_end - self.t_start)
    }

    /// Interpolated state; exact at both step endpoints.
    pub fn eval(&self, t: f64) -> Vec<f64> {
        if t == self.t_start {
            return self.y_start.clone();
        }
        if t == self.t_end {
            return self.y_end.clone();
        }
        let s = self.theta(t);
        let s1 = 1.0 - s;
        let c = &self.coeffs;
        (0..self.y_start.len())
            .map(|i| {
                let conpar = c[4][i] + (c[5][i] + (c[6][i] + c[7][i] * s) * s1) * s;
                c[0][i] + (c[1][i] + (c[2][i] + (c[3][i] + conpar * s1) * s) * s1) * s
            })
            .collect()
    }

    /// Time derivative of the interpolant.
    pub fn eval_derivative(&self, t: f64) -> Vec<f64> {
        let h = self.t_end - self.t_start;
        let s = self.theta(t);
        let s1 = 1.0 - s;
        let c = &self.coeffs;
        (0..self.y_start.len())
            .map(|i| {
                let u = c[6][i] + s * c[7][i];
                let du = c[7][i];
                let r = c[5][i] + s1 * u;
                let dr = -u + s1 * du;
                let q = c[4][i] + s * r;
                let dq = r + s * dr;
                let v = c[3][i] + s1 * q;
                let dv = -q + s1 * dq;
                let w = c[2][i] + s * v;
                let dw = v + s * dv;
                let x = c[1][i] + s1 * w;
                let dx = -w + s1 * dw;
                (x + s * dx) / h
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OdeSolution {
    /// Accepted step endpoints, starting with `t0`.
    pub t: Vec<f64>,
    pub y: Vec<Vec<f64>>,
    /// Present when the solver ran with `dense = true`.
    pub steps: Vec<StepRecord>,
    pub stats: SolverStats,
}

impl OdeSolution {
    pub fn t_final(&self) -> f64 {
        *self.t.last().expect("solution has at least the initial point")
    }

    pub fn y_final(&self) -> &[f64] {
        self.y.last().expect("solution has at least the initial point")
    }

    pub fn has_dense_output(&self) -> bool {
        !self.steps.is_empty() || self.t.len() == 1
    }

    fn step_index(&self, t: f64) -> Option<usize> {
        if self.steps.is_empty() {
            return None;
        }
        let idx = self.steps.partition_point(|s| s.t_end < t);
        (idx < self.steps.len() && self.steps[idx].contains(t)).then_some(idx)
    }

    /// Dense-output value at `t`; `None` outside the integrated span or when
    /// no dense output was recorded.
    pub fn eval(&self, t: f64) -> Option<Vec<f64>> {
        if self.t.len() == 1 && t == self.t[0] {
            return Some(self.y[0].clone());
        }
        self.step_index(t).map(|i| self.steps[i].eval(t))
    }

    pub fn eval_derivative(&self, t: f64) -> Option<Vec<f64>> {
        self.step_index(t).map(|i| self.steps[i].eval_derivative(t))
    }
}

/// Integrates `problem` with the 8th-order pair.
///
/// `guard(t, y)` must return `true` for admissible states.
pub fn solve<F, G>(
    mut problem: OdeProblem<F>,
    opts: &SolverOptions,
    guard: Option<G>,
) -> Result<OdeSolution, OdeError>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    G: Fn(f64, &[f64]) -> bool,
{
    let (t0, t1) = problem.t_span;
    let n = problem.dimension();
    if n == 0 {
        return Err(OdeError::InvalidProblem("empty state".into()));
    }
    if !(t1 > t0) {
        return Err(OdeError::InvalidProblem(format!("need t1 > t0, got ({t0}, {t1})")));
    }
    if !(opts.rtol > 0.0 && opts.atol > 0.0) {
        return Err(OdeError::InvalidProblem("tolerances must be positive".into()));
    }
    let admissible = |t: f64, y: &[f64]| guard.as_ref().is_none_or(|g| g(t, y));

    let mut stats = SolverStats::default();
    let mut y = problem.y0.clone();
    let mut t = t0;
    if !admissible(t, &y) {
        return Err(OdeError::GuardTriggered {
            t,
            t_safe: t,
            y_safe: y,
        });
    }
    let mut k1 = vec![0.0; n];
    (problem.rhs)(t, &y, &mut k1);
    stats.rhs_evals += 1;
    if k1.iter().any(|v| !v.is_finite()) {
        return Err(OdeError::NonFiniteStart);
    }

    let span = t1 - t0;
    let h_max = opts.h_max.unwrap_or(span).min(span);
    let mut h = match opts.h0 {
        Some(h0) => h0.min(h_max),
        None => initial_step(&mut problem.rhs, t, &y, &k1, opts, h_max, &mut stats),
    };

    let mut out = OdeSolution {
        t: vec![t],
        y: vec![y.clone()],
        steps: Vec::new(),
        stats,
    };

    let mut stages = Stages::new(n);
    let mut facold: f64 = 1e-4;
    let expo1 = 1.0 / 8.0 - opts.beta * 0.2;
    let mut last_rejected = false;

    loop {
        if out.stats.accepted + out.stats.rejected >= opts.max_steps {
            return Err(OdeError::MaxSteps(opts.max_steps));
        }
        let remaining = t1 - t;
        let last = h >= remaining * (1.0 - 4.0 * f64::EPSILON);
        if last {
            h = remaining;
        }
        let h_min = 16.0 * f64::EPSILON * t.abs().max(span);
        if h < h_min {
            return Err(OdeError::StepUnderflow { t, h, y });
        }

        match stages.attempt(&mut problem.rhs, &admissible, t, &y, &k1, h, &mut out.stats) {
            Attempt::Guard => {
                out.stats.guard_rejections += 1;
                out.stats.rejected += 1;
                last_rejected = true;
                h *= opts.growth_min;
                if h < h_min {
                    return Err(OdeError::GuardTriggered {
                        t: t + h,
                        t_safe: t,
                        y_safe: y,
                    });
                }
                continue;
            }
            Attempt::Done => {}
        }

        let err = stages.error_norm(&y, h, opts);
        if !err.is_finite() {
            out.stats.rejected += 1;
            last_rejected = true;
            h *= opts.growth_min;
            continue;
        }

        let fac11 = err.powf(expo1);
        let fac = (fac11 / facold.powf(opts.beta) / opts.safety)
            .clamp(1.0 / opts.growth_max, 1.0 / opts.growth_min);
        let mut h_new = h / fac;

        if err <= 1.0 {
            facold = err.max(1e-4);
            let t_new = if last { t1 } else { t + h };
            let y_new = stages.y_new.clone();
            // FSAL derivative at the new point
            let mut k_new = vec![0.0; n];
            (problem.rhs)(t_new, &y_new, &mut k_new);
            out.stats.rhs_evals += 1;

            if opts.dense {
                let coeffs = stages.dense_coefficients(
                    &mut problem.rhs,
                    t,
                    &y,
                    &k1,
                    &y_new,
                    &k_new,
                    h,
                    &mut out.stats,
                );
                out.steps.push(StepRecord {
                    t_start: t,
                    t_end: t_new,
                    y_start: y.clone(),
                    y_end: y_new.clone(),
                    coeffs,
                    error: err,
                });
            }
            out.stats.accepted += 1;
            t = t_new;
            y = y_new;
            k1 = k_new;
            out.t.push(t);
            out.y.push(y.clone());
            if last {
                return Ok(out);
            }
            if last_rejected {
                h_new = h_new.min(h);
            }
            last_rejected = false;
            h = h_new.min(h_max);
        } else {
            out.stats.rejected += 1;
            last_rejected = true;
            h /= (fac11 / opts.safety).min(1.0 / opts.growth_min);
        }
    }
}

enum Attempt {
    Done,
    Guard,
}

struct Stages {
    k: Vec<Vec<f64>>,
    tmp: Vec<f64>,
    incr: Vec<f64>,
    y_new: Vec<f64>,
}

impl Stages {
    fn new(n: usize) -> Self {
        Self {
            k: vec![vec![0.0; n]; 16],
            tmp: vec![0.0; n],
            incr: vec![0.0; n],
            y_new: vec![0.0; n],
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn attempt<F, G>(
        &mut self,
        rhs: &mut F,
        admissible: &G,
        t: f64,
        y: &[f64],
        k1: &[f64],
        h: f64,
        stats: &mut SolverStats,
    ) -> Attempt
    where
        F: FnMut(f64, &[f64], &mut [f64]),
        G: Fn(f64, &[f64]) -> bool,
    {
        let n = y.len();
        self.k[0].copy_from_slice(k1);
        for s in 1..12 {
            for i in 0..n {
                let mut acc = 0.0;
                for (j, &a) in tableau::A[s][..s].iter().enumerate() {
                    if a != 0.0 {
                        acc += a * self.k[j][i];
                    }
                }
                self.tmp[i] = y[i] + h * acc;
            }
            let ts = t + tableau::C[s] * h;
            if !admissible(ts, &self.tmp) {
                return Attempt::Guard;
            }
            let (head, tail) = self.k.split_at_mut(s);
            let _ = head;
            rhs(ts, &self.tmp, &mut tail[0]);
            stats.rhs_evals += 1;
            if tail[0].iter().any(|v| !v.is_finite()) {
                return Attempt::Guard;
            }
        }
        for i in 0..n {
            let mut acc = 0.0;
            for (j, &b) in tableau::B.iter().enumerate() {
                if b != 0.0 {
                    acc += b * self.k[j][i];
                }
            }
            self.incr[i] = acc;
            self.y_new[i] = y[i] + h * acc;
        }
        if !admissible(t + h, &self.y_new) {
            return Attempt::Guard;
        }
        Attempt::Done
    }

    fn error_norm(&self, y: &[f64], h: f64, opts: &SolverOptions) -> f64 {
        let n = y.len();
        let k = &self.k;
        let mut err5 = 0.0;
        let mut err3 = 0.0;
        for i in 0..n {
            let sk = opts.atol + opts.rtol * y[i].abs().max(self.y_new[i].abs());
            let e3 = self.incr[i]
                - tableau::BHH[0] * k[0][i]
                - tableau::BHH[1] * k[8][i]
                - tableau::BHH[2] * k[11][i];
            err3 += (e3 / sk).powi(2);
            let e5: f64 = tableau::ER
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0.0)
                .map(|(j, &e)| e * k[j][i])
                .sum();
            err5 += (e5 / sk).powi(2);
        }
        let mut deno = err5 + 0.01 * err3;
        if deno <= 0.0 {
            deno = 1.0;
        }
        h.abs() * err5 * (1.0 / (deno * n as f64)).sqrt()
    }

    #[allow(clippy::too_many_arguments)]
    fn dense_coefficients<F>(
        &mut self,
        rhs: &mut F,
        t: f64,
        y: &[f64],
        k1: &[f64],
        y_new: &[f64],
        k_new: &[f64],
        h: f64,
        stats: &mut SolverStats,
    ) -> [Vec<f64>; 8]
    where
        F: FnMut(f64, &[f64], &mut [f64]),
    {
        let n = y.len();
        // stage 13 is the FSAL derivative at the new point
        self.k[12].copy_from_slice(k_new);
        self.k[0].copy_from_slice(k1);
        for s in 13..16 {
            for i in 0..n {
                let mut acc = 0.0;
                for (j, &a) in tableau::A_DENSE[s - 13].iter().enumerate() {
                    if a != 0.0 {
                        acc += a * self.k[j][i];
                    }
                }
                self.tmp[i] = y[i] + h * acc;
            }
            let (_, tail) = self.k.split_at_mut(s);
            rhs(t + tableau::C_DENSE[s - 13] * h, &self.tmp, &mut tail[0]);
            stats.rhs_evals += 1;
        }
        let mut c: [Vec<f64>; 8] = std::array::from_fn(|_| vec![0.0; n]);
        for i in 0..n {
            let ydiff = y_new[i] - y[i];
            let bspl = h * k1[i] - ydiff;
            c[0][i] = y[i];
            c[1][i] = ydiff;
            c[2][i] = bspl;
            c[3][i] = ydiff - h * k_new[i] - bspl;
            for (row, d) in tableau::D.iter().enumerate() {
                let acc: f64 = d
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0.0)
                    .map(|(j, &v)| v * self.k[j][i])
                    .sum();
                c[4 + row][i] = h * acc;
            }
        }
        c
    }
}

fn initial_step<F>(
    rhs: &mut F,
    t: f64,
    y: &[f64],
    f0: &[f64],
    opts: &SolverOptions,
    h_max: f64,
    stats: &mut SolverStats,
) -> f64
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let n = y.len();
    let sk: Vec<f64> = y.iter().map(|v| opts.atol + opts.rtol * v.abs()).collect();
    let norm = |v: &[f64]| -> f64 {
        (v.iter().zip(&sk).map(|(a, s)| (a / s).powi(2)).sum::<f64>() / n as f64).sqrt()
    };
    let d0 = norm(y);
    let d1 = norm(f0);
    let mut h = if d0 < 1e-10 || d1 < 1e-10 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    h = h.min(h_max);
    let y1: Vec<f64> = y.iter().zip(f0).map(|(a, b)| a + h * b).collect();
    let mut f1 = vec![0.0; n];
    rhs(t + h, &y1, &mut f1);
    stats.rhs_evals += 1;
    let diff: Vec<f64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
    let d2 = norm(&diff) / h;
    let d = d1.max(d2);
    let h1 = if !d.is_finite() {
        h * 1e-3
    } else if d <= 1e-15 {
        (h * 1e-3).max(1e-6)
    } else {
        (0.01 / d).powf(1.0 / 8.0)
    };
    (100.0 * h).min(h1).min(h_max)
}

/// Butcher tableau of the 8th-order pair and its dense-output extension.
pub mod tableau {
    pub const C: [f64; 12] = [
        0.0,
        0.526001519587677318785587544488E-01,
        0.789002279381515978178381316732E-01,
        0.118350341907227396726757197510E+00,
        0.281649658092772603273242802490E+00,
        0.333333333333333333333333333333E+00,
        0.25E+00,
        0.307692307692307692307692307692E+00,
        0.651282051282051282051282051282E+00,
        0.6E+00,
        0.857142857142857142857142857142E+00,
        1.0,
    ];

    pub const A: [[f64; 12]; 12] = {
        let mut a = [[0.0; 12]; 12];
        a[1][0] = 5.26001519587677318785587544488E-2;
        a[2][0] = 1.97250569845378994544595329183E-2;
        a[2][1] = 5.91751709536136983633785987549E-2;
        a[3][0] = 2.95875854768068491816892993775E-2;
        a[3][2] = 8.87627564304205475450678981324E-2;
        a[4][0] = 2.41365134159266685502369798665E-1;
        a[4][2] = -8.84549479328286085344864962717E-1;
        a[4][3] = 9.24834003261792003115737966543E-1;
        a[5][0] = 3.7037037037037037037037037037E-2;
        a[5][3] = 1.70828608729473871279604482173E-1;
        a[5][4] = 1.25467687566822425016691814123E-1;
        a[6][0] = 3.7109375E-2;
        a[6][3] = 1.70252211019544039314978060272E-1;
        a[6][4] = 6.02165389804559606850219397283E-2;
        a[6][5] = -1.7578125E-2;
        a[7][0] = 3.70920001185047927108779319836E-2;
        a[7][3] = 1.70383925712239993810214054705E-1;
        a[7][4] = 1.07262030446373284651809199168E-1;
        a[7][5] = -1.53194377486244017527936158236E-2;
        a[7][6] = 8.27378916381402288758473766002E-3;
        a[8][0] = 6.24110958716075717114429577812E-1;
        a[8][3] = -3.36089262944694129406857109825E0;
        a[8][4] = -8.68219346841726006818189891453E-1;
        a[8][5] = 2.75920996994467083049415600797E1;
        a[8][6] = 2.01540675504778934086186788979E1;
        a[8][7] = -4.34898841810699588477366255144E1;
        a[9][0] = 4.77662536438264365890433908527E-1;
        a[9][3] = -2.48811461997166764192642586468E0;
        a[9][4] = -5.90290826836842996371446475743E-1;
        a[9][5] = 2.12300514481811942347288949897E1;
        a[9][6] = 1.52792336328824235832596922938E1;
        a[9][7] = -3.32882109689848629194453265587E1;
        a[9][8] = -2.03312017085086261358222928593E-2;
        a[10][0] = -9.3714243008598732571704021658E-1;
        a[10][3] = 5.18637242884406370830023853209E0;
        a[10][4] = 1.09143734899672957818500254654E0;
        a[10][5] = -8.14978701074692612513997267357E0;
        a[10][6] = -1.85200656599969598641566180701E1;
        a[10][7] = 2.27394870993505042818970056734E1;
        a[10][8] = 2.49360555267965238987089396762E0;
        a[10][9] = -3.0467644718982195003823669022E0;
        a[11][0] = 2.27331014751653820792359768449E0;
        a[11][3] = -1.05344954667372501984066689879E1;
        a[11][4] = -2.00087205822486249909675718444E0;
        a[11][5] = -1.79589318631187989172765950534E1;
        a[11][6] = 2.79488845294199600508499808837E1;
        a[11][7] = -2.85899827713502369474065508674E0;
        a[11][8] = -8.87285693353062954433549289258E0;
        a[11][9] = 1.23605671757943030647266201528E1;
        a[11][10] = 6.43392746015763530355970484046E-1;
        a
    };

    pub const B: [f64; 12] = [
        5.42937341165687622380535766363E-2,
        0.0,
        0.0,
        0.0,
        0.0,
        4.45031289275240888144113950566E0,
        1.89151789931450038304281599044E0,
        -5.8012039600105847814672114227E0,
        3.1116436695781989440891606237E-1,
        -1.52160949662516078556178806805E-1,
        2.01365400804030348374776537501E-1,
        4.47106157277725905176885569043E-2,
    ];

    /// Weights of the embedded 3rd-order estimate (stages 1, 9, 12).
    pub const BHH: [f64; 3] = [
        0.244094488188976377952755905512E+00,
        0.733846688281611857341361741547E+00,
        0.220588235294117647058823529412E-01,
    ];

    /// Coefficients of the 5th-order error estimate.
    pub const ER: [f64; 12] = [
        0.1312004499419488073250102996E-01,
        0.0,
        0.0,
        0.0,
        0.0,
        -0.1225156446376204440720569753E+01,
        -0.4957589496572501915214079952E+00,
        0.1664377182454986536961530415E+01,
        -0.3503288487499736816886487290E+00,
        0.3341791187130174790297318841E+00,
        0.8192320648511571246570742613E-01,
        -0.2235530786388629525884427845E-01,
    ];

    pub const C_DENSE: [f64; 3] = [0.1, 0.2, 0.777777777777777777777777777778];

    /// Rows for stages 14, 15, 16 over stages 1..=15 (index 12 is the FSAL stage).
    pub const A_DENSE: [[f64; 15]; 3] = {
        let mut a = [[0.0; 15]; 3];
        a[0][0] = 5.61675022830479523392909219681E-2;
        a[0][6] = 2.53500210216624811088794765333E-1;
        a[0][7] = -2.46239037470802489917441475441E-1;
        a[0][8] = -1.24191423263816360469010140626E-1;
        a[0][9] = 1.5329179827876569731206322685E-1;
        a[0][10] = 8.20105229563468988491666602057E-3;
        a[0][11] = 7.56789766054569976138603589584E-3;
        a[0][12] = -8.298E-3;

        a[1][0] = 3.18346481635021405060768473261E-2;
        a[1][5] = 2.83009096723667755288322961402E-2;
        a[1][6] = 5.35419883074385676223797384372E-2;
        a[1][7] = -5.49237485713909884646569340306E-2;
        a[1][10] = -1.08347328697249322858509316994E-4;
        a[1][11] = 3.82571090835658412954920192323E-4;
        a[1][12] = -3.40465008687404560802977114492E-4;
        a[1][13] = 1.41312443674632500278074618366E-1;

        a[2][0] = -4.28896301583791923408573538692E-1;
        a[2][5] = -4.69762141536116384314449447206E0;
        a[2][6] = 7.68342119606259904184240953878E0;
        a[2][7] = 4.06898981839711007970213554331E0;
        a[2][8] = 3.56727187455281109270669543021E-1;
        a[2][12] = -1.39902416515901462129418009734E-3;
        a[2][13] = 2.9475147891527723389556272149E0;
        a[2][14] = -9.15095847217987001081870187138E0;
        a
    };

    /// Dense-output weights for `cont5..cont8` over stages 1..=16.
    pub const D: [[f64; 16]; 4] = {
        let mut d = [[0.0; 16]; 4];
        d[0][0] = -0.84289382761090128651353491142E+01;
        d[0][5] = 0.56671495351937776962531783590E+00;
        d[0][6] = -0.30689499459498916912797304727E+01;
        d[0][7] = 0.23846676565120698287728149680E+01;
        d[0][8] = 0.21170345824450282767155149946E+01;
        d[0][9] = -0.87139158377797299206789907490E+00;
        d[0][10] = 0.22404374302607882758541771650E+01;
        d[0][11] = 0.63157877876946881815570249290E+00;
        d[0][12] = -0.88990336451333310820698117400E-01;
        d[0][13] = 0.18148505520854727256656404962E+02;
        d[0][14] = -0.91946323924783554000451984436E+01;
        d[0][15] = -0.44360363875948939664310572000E+01;

        d[1][0] = 0.10427508642579134603413151009E+02;
        d[1][5] = 0.24228349177525818288430175319E+03;
        d[1][6] = 0.16520045171727028198505394887E+03;
        d[1][7] = -0.37454675472269020279518312152E+03;
        d[1][8] = -0.22113666853125306036270938578E+02;
        d[1][9] = 0.77334326684722638389603898808E+01;
        d[1][10] = -0.30674084731089398182061213626E+02;
        d[1][11] = -0.93321305264302278729567221706E+01;
        d[1][12] = 0.15697238121770843886131091075E+02;
        d[1][13] = -0.31139403219565177677282850411E+02;
        d[1][14] = -0.93529243588444783865713862664E+01;
        d[1][15] = 0.35816841486394083752465898540E+02;

        d[2][0] = 0.19985053242002433820987653617E+02;
        d[2][5] = -0.38703730874935176555105901742E+03;
        d[2][6] = -0.18917813819516756882830838328E+03;
        d[2][7] = 0.52780815920542364900561016686E+03;
        d[2][8] = -0.11573902539959630126141871134E+02;
        d[2][9] = 0.68812326946963000169666922661E+01;
        d[2][10] = -0.10006050966910838403183860980E+01;
        d[2][11] = 0.77771377980534432092869265740E+00;
        d[2][12] = -0.27782057523535084065932004339E+01;
        d[2][13] = -0.60196695231264120758267380846E+02;
        d[2][14] = 0.84320405506677161018159903784E+02;
        d[2][15] = 0.11992291136182789328035130030E+02;

        d[3][0] = -0.25693933462703749003312586129E+02;
        d[3][5] = -0.15418974869023643374053993627E+03;
        d[3][6] = -0.23152937917604549567536039109E+03;
        d[3][7] = 0.35763911791061412378285349910E+03;
        d[3][8] = 0.93405324183624310003907691704E+02;
        d[3][9] = -0.37458323136451633156875139351E+02;
        d[3][10] = 0.10409964950896230045147246184E+03;
        d[3][11] = 0.29840293426660503123344363579E+02;
        d[3][12] = -0.43533456590011143754432175058E+02;
        d[3][13] = 0.96324553959188282948394950600E+02;
        d[3][14] = -0.39177261675615439165231486172E+02;
        d[3][15] = -0.14972683625798562581422125276E+03;
        d
    };
}
