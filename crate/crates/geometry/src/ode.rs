//! The frame ODE along e₃ = ∂/∂s and an adaptive Dormand-Prince 5(4)
//! integrator with singularity and blow-up guards.

use serde::Serialize;

use crate::frame::FrameState;
use crate::GeometryError;

/// Which system is integrated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Model {
    /// μ ≡ α + γ; the state is (α, β, γ).
    IdealSlice,
    /// μ carried as a fourth state with μ′ = `mu_rate`.
    FreeMu { mu_rate: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    RangeEnd,
    BetaSingular,
    BlowUp,
    StepUnderflow,
}

impl StopReason {
    pub fn label(self) -> &'static str {
        match self {
            StopReason::RangeEnd => "range-end",
            StopReason::BetaSingular => "beta-singular",
            StopReason::BlowUp => "blow-up",
            StopReason::StepUnderflow => "step-underflow",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntegrateOptions {
    pub s_end: f64,
    pub tol: f64,
    /// Stop once |β| falls below this.
    pub eps_beta: f64,
    /// Stop once any component exceeds this in magnitude.
    pub blow_up: f64,
    pub h_min: f64,
    pub max_steps: usize,
}

impl IntegrateOptions {
    pub fn new(s_end: f64, tol: f64) -> Self {
        IntegrateOptions { s_end, tol, eps_beta: 1e-6, blow_up: 1e8, h_min: 1e-12, max_steps: 5_000_000 }
    }
}

/// Accepted step size and its scaled error estimate; the first sample has
/// `h = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StepMeta {
    pub h: f64,
    pub err: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub model: Model,
    pub initial: FrameState,
    pub samples: Vec<FrameState>,
    pub steps: Vec<StepMeta>,
    pub rejected: usize,
    pub stop: StopReason,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last(&self) -> Option<&FrameState> {
        self.samples.last()
    }

    /// Wraps samples read back from disk.
    pub fn from_samples(samples: Vec<FrameState>) -> Self {
        let initial =
            samples.first().copied().unwrap_or(FrameState { s: 0.0, alpha: 0.0, beta: 0.0, gamma: 0.0, mu: 0.0 });
        let steps = samples
            .iter()
            .enumerate()
            .map(|(i, st)| StepMeta { h: if i == 0 { 0.0 } else { st.s - samples[i - 1].s }, err: 0.0 })
            .collect();
        Trajectory { model: Model::IdealSlice, initial, samples, steps, rejected: 0, stop: StopReason::RangeEnd }
    }
}

/// Right-hand side with μ given:
/// α′ = β(α+γ−3μ), β′ = β²+γ²+μ(α−2γ)+1, γ′ = (γ−μ)(γ²−αγ−1)/β + β(2γ+μ).
pub fn rhs_general(alpha: f64, beta: f64, gamma: f64, mu: f64) -> Result<[f64; 3], GeometryError> {
    if beta == 0.0 || !beta.is_finite() {
        return Err(GeometryError::Singular(beta));
    }
    Ok([
        beta * (alpha + gamma - 3.0 * mu),
        beta * beta + gamma * gamma + mu * (alpha - 2.0 * gamma) + 1.0,
        (gamma - mu) * (gamma * gamma - alpha * gamma - 1.0) / beta + beta * (2.0 * gamma + mu),
    ])
}

/// (α′, β′, γ′) on the ideal slice μ = α + γ.
pub fn rhs_2hopf(state: &FrameState) -> Result<[f64; 3], GeometryError> {
    rhs_general(state.alpha, state.beta, state.gamma, state.alpha + state.gamma)
}

fn field(model: Model, y: &[f64; 4]) -> Option<[f64; 4]> {
    let mu = match model {
        Model::IdealSlice => y[0] + y[2],
        Model::FreeMu { .. } => y[3],
    };
    let [da, db, dg] = rhs_general(y[0], y[1], y[2], mu).ok()?;
    let dm = match model {
        Model::IdealSlice => da + dg,
        Model::FreeMu { mu_rate } => mu_rate,
    };
    let out = [da, db, dg, dm];
    out.iter().all(|v| v.is_finite()).then_some(out)
}

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights (equal to the last row of `A`).
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

/// One Dormand-Prince step of the autonomous system; returns the fifth-order solution and the
/// difference to the embedded fourth-order one.
fn dp_step(model: Model, y: &[f64; 4], h: f64) -> Option<([f64; 4], [f64; 4])> {
    let mut k = [[0.0; 4]; 7];
    k[0] = field(model, y)?;
    for i in 1..7 {
        let mut yi = *y;
        for (j, kj) in k.iter().enumerate().take(i) {
            for n in 0..4 {
                yi[n] += h * A[i][j] * kj[n];
            }
        }
        k[i] = field(model, &yi)?;
    }
    let mut y5 = *y;
    let mut e = [0.0; 4];
    for n in 0..4 {
        for i in 0..7 {
            y5[n] += h * B5[i] * k[i][n];
            e[n] += h * (B5[i] - B4[i]) * k[i][n];
        }
    }
    Some((y5, e))
}

fn state_of(model: Model, s: f64, y: &[f64; 4]) -> FrameState {
    let mu = match model {
        Model::IdealSlice => y[0] + y[2],
        Model::FreeMu { .. } => y[3],
    };
    FrameState { s, alpha: y[0], beta: y[1], gamma: y[2], mu }
}

/// Integrates from `initial.s` to `opts.s_end`.
///
/// A step is accepted when each component's embedded error estimate is at
/// most `tol · max(1, |y|)`, so control is relative once the state grows.
/// Step sizes follow a PI controller.
pub fn integrate_2hopf(
    initial: FrameState,
    model: Model,
    opts: &IntegrateOptions,
) -> Result<Trajectory, GeometryError> {
    let (lo, hi) = (initial.s, opts.s_end);
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(GeometryError::Usage(format!("invalid s-range {lo}:{hi}")));
    }
    if !(opts.tol.is_finite() && opts.tol > 0.0) {
        return Err(GeometryError::Usage(format!("tolerance must be positive (got {})", opts.tol)));
    }
    if initial.beta == 0.0 || !initial.beta.is_finite() {
        return Err(GeometryError::Singular(initial.beta));
    }

    const ORDER: f64 = 5.0;
    const SAFETY: f64 = 0.9;
    let mut y = [initial.alpha, initial.beta, initial.gamma, initial.mu];
    if model == Model::IdealSlice {
        y[3] = y[0] + y[2];
    }
    let first = state_of(model, lo, &y);
    let mut samples = vec![first];
    let mut steps = vec![StepMeta { h: 0.0, err: 0.0 }];
    let mut s = lo;
    let mut h = ((hi - lo) * 1e-3).max(opts.h_min * 10.0);
    let mut err_prev: f64 = 1.0;
    let mut rejected = 0usize;

    let stop = loop {
        if s >= hi || hi - s <= opts.h_min * (1.0 + s.abs()) {
            break StopReason::RangeEnd;
        }
        if samples.len() > opts.max_steps {
            break StopReason::StepUnderflow;
        }
        let h_try = h.min(hi - s);
        if h_try < opts.h_min {
            break StopReason::StepUnderflow;
        }
        let trial = dp_step(model, &y, h_try);
        let err = match &trial {
            Some((y5, e)) => {
                (0..4).map(|n| e[n].abs() / (opts.tol * 1f64.max(y[n].abs()).max(y5[n].abs()))).fold(0.0, f64::max)
            }
            None => f64::INFINITY,
        };
        if err <= 1.0 {
            let (y5, _) = trial.expect("finite error implies a trial");
            s = if h_try == hi - s { hi } else { s + h_try };
            y = y5;
            let st = state_of(model, s, &y);
            samples.push(st);
            steps.push(StepMeta { h: h_try, err });
            let e = err.max(1e-10);
            let fac = SAFETY * e.powf(-0.7 / ORDER) * err_prev.powf(0.4 / ORDER);
            h = h_try * fac.clamp(0.2, 5.0);
            err_prev = e;
            if st.beta.abs() < opts.eps_beta {
                break StopReason::BetaSingular;
            }
            if y.iter().any(|v| v.abs() > opts.blow_up) {
                break StopReason::BlowUp;
            }
        } else {
            rejected += 1;
            let fac = if err.is_finite() { (SAFETY * err.powf(-1.0 / ORDER)).max(0.2) } else { 0.2 };
            h = h_try * fac;
        }
    };
    Ok(Trajectory { model, initial: first, samples, steps, rejected, stop })
}

/// Least-squares slope of −log(error) against log(step count) over
/// `(steps, error)` pairs.
pub fn observed_order(points: &[(usize, f64)]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|p| (p.0 as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| -p.1.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}
