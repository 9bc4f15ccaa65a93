//! Fixed-step integration with threshold-crossing spike detection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::neuron::{apply_reset, vector_field, NeuronParams, NeuronState};

/// Largest step accepted by [`IntegratorConfig::validate`] (ms).
pub const MAX_DT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Rk4,
    Euler,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorConfig {
    /// Step size (ms).
    pub dt: f64,
    /// Simulation horizon (ms).
    pub t_end: f64,
    pub method: Method,
    pub record_trajectory: bool,
    /// Steps between recorded trajectory samples.
    pub trajectory_stride: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            dt: 0.1,
            t_end: 12000.0,
            method: Method::Euler,
            record_trajectory: false,
            trajectory_stride: 10,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt <= MAX_DT) {
            return Err(Error::InvalidParameter(format!(
                "dt must lie in (0, {MAX_DT}] ms, got {}",
                self.dt
            )));
        }
        if !(self.t_end.is_finite() && self.t_end >= self.dt) {
            return Err(Error::InvalidParameter(format!(
                "t_end must be finite and >= dt, got {}",
                self.t_end
            )));
        }
        if self.trajectory_stride == 0 {
            return Err(Error::InvalidParameter("trajectory_stride must be >= 1".into()));
        }
        Ok(())
    }

    pub fn n_steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

/// Ordered spike times of one neuron (ms).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpikeTrain {
    pub neuron_id: usize,
    pub times: Vec<f64>,
}

impl SpikeTrain {
    pub fn new(neuron_id: usize, times: Vec<f64>) -> Self {
        Self { neuron_id, times }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Inter-spike intervals (ms).
    pub fn isis(&self) -> Vec<f64> {
        self.times.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

/// A detected spike: neuron index and interpolated time (ms).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spike {
    pub neuron: usize,
    pub time: f64,
}

/// Phase-plane sample of a single neuron.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub v: f64,
    pub w: f64,
}

/// Advances one neuron by `dt` with the coupling input held fixed. No spike handling.
///
/// Intermediate stages are evaluated with `V` capped at `v_peak`; once a stage
/// has passed the cutoff the spike is certain and the uncapped upswing would
/// only inject garbage into `w`.
#[inline]
pub fn advance(state: &NeuronState, params: &NeuronParams, g_sum_in: f64, dt: f64, method: Method) -> NeuronState {
    let f = |s: &NeuronState| {
        let capped = NeuronState { v: s.v.min(params.v_peak), ..*s };
        vector_field(&capped, params, g_sum_in)
    };
    let shift = |s: &NeuronState, h: f64, k: &crate::neuron::Derivative| NeuronState {
        v: s.v + h * k.dv,
        w: s.w + h * k.dw,
        g: s.g + h * k.dg,
    };
    match method {
        Method::Euler => shift(state, dt, &f(state)),
        Method::Rk4 => {
            let k1 = f(state);
            let k2 = f(&shift(state, 0.5 * dt, &k1));
            let k3 = f(&shift(state, 0.5 * dt, &k2));
            let k4 = f(&shift(state, dt, &k3));
            let h6 = dt / 6.0;
            NeuronState {
                v: state.v + h6 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv),
                w: state.w + h6 * (k1.dw + 2.0 * k2.dw + 2.0 * k3.dw + k4.dw),
                g: state.g + h6 * (k1.dg + 2.0 * k2.dg + 2.0 * k3.dg + k4.dg),
            }
        }
    }
}

/// Linear interpolation of the instant `V` reached `v_peak` within `[t, t + dt]`.
pub fn crossing_time(t: f64, dt: f64, v_before: f64, v_after: f64, v_peak: f64) -> f64 {
    let span = v_after - v_before;
    let frac = if span > 0.0 { (v_peak - v_before) / span } else { 1.0 };
    t + dt * frac.clamp(0.0, 1.0)
}

/// Advances every neuron one step from the same snapshot.
///
/// `coupling[i]` is `sum_j M_ij g_j` evaluated at the start of the step.
/// Neurons crossing `v_peak` are reset at the end of the step; the returned
/// spikes carry the interpolated crossing time and are ordered by neuron index.
pub fn step(
    states: &mut [NeuronState],
    params: &NeuronParams,
    coupling: &[f64],
    cfg: &IntegratorConfig,
    t: f64,
    coupled: bool,
) -> Result<Vec<Spike>> {
    if coupling.len() != states.len() {
        return Err(Error::DimensionMismatch { expected: states.len(), got: coupling.len() });
    }
    let mut spikes = Vec::new();
    for (i, (state, &g_in)) in states.iter_mut().zip(coupling).enumerate() {
        let before = state.v;
        let next = advance(state, params, g_in, cfg.dt, cfg.method);
        if !next.is_finite() {
            return Err(Error::NumericalBlowup { neuron: i, t });
        }
        if next.v >= params.v_peak {
            spikes.push(Spike { neuron: i, time: crossing_time(t, cfg.dt, before, next.v, params.v_peak) });
            *state = apply_reset(&next, params, coupled);
        } else {
            *state = next;
        }
    }
    Ok(spikes)
}

/// Integrates an isolated neuron from `(v0, w0, g = 0)` until `cfg.t_end`.
pub fn simulate_single(
    params: &NeuronParams,
    v0: f64,
    w0: f64,
    cfg: &IntegratorConfig,
) -> Result<(SpikeTrain, Option<Vec<TrajectoryPoint>>)> {
    params.validate()?;
    cfg.validate()?;
    if !(v0.is_finite() && w0.is_finite()) {
        return Err(Error::InvalidState(format!("initial state V={v0}, w={w0}")));
    }
    let mut state = [NeuronState::new(v0, w0, 0.0)];
    let mut times = Vec::new();
    let mut trajectory = cfg.record_trajectory.then(Vec::new);
    if let Some(tr) = trajectory.as_mut() {
        tr.push(TrajectoryPoint { t: 0.0, v: v0, w: w0 });
    }
    for k in 0..cfg.n_steps() {
        let t = k as f64 * cfg.dt;
        for spike in step(&mut state, params, &[0.0], cfg, t, false)? {
            times.push(spike.time);
        }
        if let Some(tr) = trajectory.as_mut() {
            if (k + 1) % cfg.trajectory_stride == 0 {
                tr.push(TrajectoryPoint { t: (k + 1) as f64 * cfg.dt, v: state[0].v, w: state[0].w });
            }
        }
    }
    Ok((SpikeTrain::new(0, times), trajectory))
}
