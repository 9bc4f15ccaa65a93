//! Adaptive exponential integrate-and-fire (aEIF) neuron model.
//!
//! Units throughout: mV, ms, pA, nS, pF. With these the membrane equation
//! closes without conversion factors (pA / pF = mV/ms, nS * mV = pA).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on the dimensionless exponent `(V - V_T) / Delta_T`.
///
/// Keeps `exp` finite during the spike upswing when the cutoff sits far
/// above `V_T`.
pub const EXP_ARG_MAX: f64 = 40.0;

/// Physiological constants shared by every neuron in a network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NeuronParams {
    /// Membrane capacitance (pF).
    pub c_m: f64,
    /// Leak conductance (nS).
    pub g_l: f64,
    /// Resting potential (mV).
    pub e_l: f64,
    /// Threshold potential (mV).
    pub v_t: f64,
    /// Slope factor (mV).
    pub delta_t: f64,
    /// Adaptation time constant (ms).
    pub tau_w: f64,
    /// Subthreshold adaptation conductance (nS).
    pub a: f64,
    /// Spike-triggered adaptation increment (pA).
    pub b: f64,
    /// Reset potential (mV).
    pub v_reset: f64,
    /// Injected current (pA).
    pub i_ext: f64,
    /// Synaptic time constant (ms).
    pub tau_g: f64,
    /// Synaptic reversal potential (mV).
    pub v_rev: f64,
    /// Synaptic conductance increment per presynaptic spike (nS).
    pub g_exc: f64,
    /// Spike-detection cutoff (mV). Defaults to `V_T + 5 Delta_T`.
    pub v_peak: f64,
}

impl Default for NeuronParams {
    /// The regular-bursting parameter set: `I = 660 pA`, `V_r = -44 mV`.
    fn default() -> Self {
        Self {
            c_m: 281.0,
            g_l: 30.0,
            e_l: -70.6,
            v_t: -50.4,
            delta_t: 2.0,
            tau_w: 20.0,
            a: 4.0,
            b: 500.0,
            v_reset: -44.0,
            i_ext: 660.0,
            tau_g: 2.728,
            v_rev: 0.0,
            g_exc: 0.05,
            v_peak: -40.4,
        }
    }
}

impl NeuronParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("c_m", self.c_m),
            ("g_l", self.g_l),
            ("e_l", self.e_l),
            ("v_t", self.v_t),
            ("delta_t", self.delta_t),
            ("tau_w", self.tau_w),
            ("a", self.a),
            ("b", self.b),
            ("v_reset", self.v_reset),
            ("i_ext", self.i_ext),
            ("tau_g", self.tau_g),
            ("v_rev", self.v_rev),
            ("g_exc", self.g_exc),
            ("v_peak", self.v_peak),
        ];
        if let Some((name, _)) = fields.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("{name} must be finite")));
        }
        let positive = [
            ("c_m", self.c_m),
            ("g_l", self.g_l),
            ("delta_t", self.delta_t),
            ("tau_w", self.tau_w),
            ("tau_g", self.tau_g),
        ];
        if let Some((name, v)) = positive.iter().find(|(_, v)| *v <= 0.0) {
            return Err(Error::InvalidParameter(format!("{name} must be > 0, got {v}")));
        }
        if self.g_exc < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "g_exc must be >= 0, got {}",
                self.g_exc
            )));
        }
        if self.v_peak <= self.v_t {
            return Err(Error::InvalidParameter(format!(
                "v_peak ({}) must lie above v_t ({})",
                self.v_peak, self.v_t
            )));
        }
        if self.v_reset >= self.v_peak {
            return Err(Error::InvalidParameter(format!(
                "v_reset ({}) must lie below v_peak ({})",
                self.v_reset, self.v_peak
            )));
        }
        Ok(())
    }

    /// Exponential spike-initiation current `g_L * Delta_T * exp((V - V_T) / Delta_T)`,
    /// with the exponent clamped at [`EXP_ARG_MAX`].
    #[inline]
    fn exp_current(&self, v: f64) -> f64 {
        let x = ((v - self.v_t) / self.delta_t).min(EXP_ARG_MAX);
        self.g_l * self.delta_t * x.exp()
    }
}

/// Dynamical variables of one neuron.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeuronState {
    /// Membrane potential (mV).
    pub v: f64,
    /// Adaptation current (pA).
    pub w: f64,
    /// Synaptic conductance (nS).
    pub g: f64,
}

impl NeuronState {
    pub fn new(v: f64, w: f64, g: f64) -> Self {
        Self { v, w, g }
    }

    /// Rest-like initial condition used by every run: `w = g = 0`.
    pub fn at_potential(v: f64) -> Self {
        Self { v, w: 0.0, g: 0.0 }
    }

    pub fn is_finite(&self) -> bool {
        self.v.is_finite() && self.w.is_finite() && self.g.is_finite()
    }
}

/// Time derivatives of a [`NeuronState`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivative {
    /// mV/ms
    pub dv: f64,
    /// pA/ms
    pub dw: f64,
    /// nS/ms
    pub dg: f64,
}

/// Vector field of the coupled aEIF network for one neuron.
///
/// `g_sum_in` is the summed conductance of the presynaptic neighbours
/// (`sum_j M_ij g_j`); pass `0.0` for an isolated neuron.
pub fn derivative(state: &NeuronState, params: &NeuronParams, g_sum_in: f64) -> Result<Derivative> {
    if !state.is_finite() || !g_sum_in.is_finite() {
        return Err(Error::InvalidState(format!(
            "non-finite input (V={}, w={}, g={}, g_sum_in={})",
            state.v, state.w, state.g, g_sum_in
        )));
    }
    Ok(vector_field(state, params, g_sum_in))
}

/// Unchecked vector field used on the integrator's hot path.
#[inline]
pub(crate) fn vector_field(state: &NeuronState, p: &NeuronParams, g_sum_in: f64) -> Derivative {
    let v = state.v;
    let current = -p.g_l * (v - p.e_l) + p.exp_current(v) - state.w
        + p.i_ext
        + (p.v_rev - v) * g_sum_in;
    Derivative {
        dv: current / p.c_m,
        dw: (p.a * (v - p.e_l) - state.w) / p.tau_w,
        dg: -state.g / p.tau_g,
    }
}

/// Discrete map applied after a detected spike.
///
/// `V -> V_r`, `w -> w + b`, and when `coupled`, `g -> g + g_exc`.
pub fn apply_reset(state: &NeuronState, params: &NeuronParams, coupled: bool) -> NeuronState {
    NeuronState {
        v: params.v_reset,
        w: state.w + params.b,
        g: if coupled { state.g + params.g_exc } else { state.g },
    }
}

/// V- and w-nullclines of the isolated neuron, sampled at `v_samples`.
///
/// Returns `(w on the V-nullcline, w on the w-nullcline)` in pA.
/// The V-nullcline uses the unclamped exponential.
pub fn nullclines(params: &NeuronParams, v_samples: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let p = params;
    let v_null = v_samples
        .iter()
        .map(|&v| {
            -p.g_l * (v - p.e_l) + p.g_l * p.delta_t * ((v - p.v_t) / p.delta_t).exp() + p.i_ext
        })
        .collect();
    let w_null = v_samples.iter().map(|&v| p.a * (v - p.e_l)).collect();
    (v_null, w_null)
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn finite_for_finite_inputs(v in -1e6f64..1e6, w in -1e5f64..1e5, g in 0.0f64..10.0, gin in 0.0f64..10.0) {
            let p = NeuronParams::default();
            let d = derivative(&NeuronState::new(v, w, g), &p, gin).unwrap();
            prop_assert!(d.dv.is_finite() && d.dw.is_finite() && d.dg.is_finite());
        }

        #[test]
        fn subthreshold_drift_bound(v in -120.0f64..-50.4, w in 0.0f64..2000.0) {
            let p = NeuronParams { i_ext: 0.0, ..NeuronParams::default() };
            let d = derivative(&NeuronState::new(v, w, 0.0), &p, 0.0).unwrap();
            let bound = p.g_l * p.delta_t / p.c_m + p.g_l * (p.e_l - v) / p.c_m;
            prop_assert!(d.dv <= bound + 1e-12);
        }

        #[test]
        fn zero_coupling_is_isolated_field(v in -90.0f64..-30.0, w in -500.0f64..2000.0, g in 0.0f64..1.0) {
            let p = NeuronParams::default();
            let s = NeuronState::new(v, w, g);
            let d = derivative(&s, &p, 0.0).unwrap();
            let isolated = (-p.g_l * (v - p.e_l)
                + p.g_l * p.delta_t * ((v - p.v_t) / p.delta_t).exp()
                - w + p.i_ext) / p.c_m;
            prop_assert!((d.dv - isolated).abs() <= 1e-12 * isolated.abs().max(1.0));
        }
    }
}
