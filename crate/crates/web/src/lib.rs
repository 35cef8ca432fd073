//! Browser bindings for single-neuron GLIF traces.
//!
//! Three operations back the demo page: a full trace for one gate setting,
//! a sweep of one gate across several values, and the cosine conductance
//! schedule. The pure functions (`trace`, `gate_sweep`, `conductance`) are
//! plain Rust so they can be tested natively; the `#[wasm_bindgen]` wrappers
//! only convert errors.

use glif_core::dynamics::{cosine_conductance, simulate_trace, with_gate, ConductanceConstraint, InputProgram, TraceSpec};
use glif_core::neuron::{Formulation, Gates, UnitParams};
use wasm_bindgen::prelude::*;

/// Neuron settings edited by the page's sliders.
#[wasm_bindgen]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NeuronKnobs {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub tau_exp: f64,
    pub tau_lin: f64,
    pub v_re: f64,
    pub v_th: f64,
    pub g: f64,
    /// Replace `g` by the cosine schedule.
    pub cosine: bool,
    /// Drop the gates and sum the primitives directly.
    pub fused: bool,
}

impl Default for NeuronKnobs {
    fn default() -> Self {
        NeuronKnobs {
            alpha: 0.5,
            beta: 0.5,
            gamma: 0.5,
            tau_exp: 0.25,
            tau_lin: 0.0625,
            v_re: 0.5,
            v_th: 0.5,
            g: 0.5,
            cosine: false,
            fused: false,
        }
    }
}

#[wasm_bindgen]
impl NeuronKnobs {
    #[wasm_bindgen(constructor)]
    pub fn new() -> NeuronKnobs {
        NeuronKnobs::default()
    }
}

impl NeuronKnobs {
    fn spec(&self, current: f64, steps: usize) -> TraceSpec {
        let formulation = if self.fused {
            Formulation::Fused
        } else {
            Formulation::Gated(Gates {
                alpha: self.alpha,
                beta: self.beta,
                gamma: self.gamma,
            })
        };
        let params = UnitParams {
            formulation,
            tau_lin: self.tau_lin,
            tau_exp: self.tau_exp,
            v_re: self.v_re,
            v_th: self.v_th,
            g: vec![self.g; steps],
        };
        let mut spec = TraceSpec::new(params, steps, InputProgram::Constant(current));
        if self.cosine {
            spec.g_constraint = ConductanceConstraint::Cosine;
        }
        spec
    }
}

/// Columns of one simulated trace.
#[wasm_bindgen]
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TraceView {
    u: Vec<f64>,
    s: Vec<f64>,
    l: Vec<f64>,
    i: Vec<f64>,
    f: Vec<f64>,
    g: Vec<f64>,
}

#[wasm_bindgen]
impl TraceView {
    pub fn u(&self) -> Vec<f64> {
        self.u.clone()
    }
    pub fn s(&self) -> Vec<f64> {
        self.s.clone()
    }
    pub fn l(&self) -> Vec<f64> {
        self.l.clone()
    }
    pub fn i(&self) -> Vec<f64> {
        self.i.clone()
    }
    pub fn f(&self) -> Vec<f64> {
        self.f.clone()
    }
    pub fn g(&self) -> Vec<f64> {
        self.g.clone()
    }
}

fn check(knobs: &NeuronKnobs, steps: usize) -> Result<(), String> {
    if steps == 0 || steps > 10_000 {
        return Err(format!("steps = {steps} must lie in 1..=10000"));
    }
    for (name, v) in [("alpha", knobs.alpha), ("beta", knobs.beta), ("gamma", knobs.gamma)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(format!("{name} = {v} must lie in [0, 1]"));
        }
    }
    for (name, v) in [("tau_exp", knobs.tau_exp), ("tau_lin", knobs.tau_lin), ("g", knobs.g)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(format!("{name} = {v} must lie in (0, 1)"));
        }
    }
    if !(knobs.v_re.is_finite() && knobs.v_th.is_finite()) {
        return Err("v_re and v_th must be finite".into());
    }
    Ok(())
}

/// Simulates one unit under a constant input current.
pub fn trace(knobs: &NeuronKnobs, current: f64, steps: usize) -> Result<TraceView, String> {
    check(knobs, steps)?;
    let record = simulate_trace(&knobs.spec(current, steps)).map_err(|e| e.to_string())?;
    let col = |f: fn(&glif_core::dynamics::TraceRow) -> f64| record.rows.iter().map(f).collect();
    Ok(TraceView {
        u: col(|r| r.u),
        s: col(|r| r.s),
        l: col(|r| r.l),
        i: col(|r| r.i),
        f: col(|r| r.f),
        g: col(|r| r.g),
    })
}

/// Potentials for each value of one gate (`"alpha"`, `"beta"` or `"gamma"`),
/// concatenated: row `k` holds the `steps` potentials for `values[k]`.
pub fn gate_sweep(
    knobs: &NeuronKnobs,
    gate: &str,
    values: &[f64],
    current: f64,
    steps: usize,
) -> Result<Vec<f64>, String> {
    let key = match gate {
        "alpha" => 'a',
        "beta" => 'b',
        "gamma" => 'g',
        other => return Err(format!("unknown gate {other:?}")),
    };
    if knobs.fused {
        return Err("the fused formulation has no gates to sweep".into());
    }
    let mut out = Vec::with_capacity(values.len() * steps);
    for &v in values {
        let mut k = *knobs;
        match key {
            'a' => k.alpha = v,
            'b' => k.beta = v,
            _ => k.gamma = v,
        }
        check(&k, steps)?;
        let spec = knobs.spec(current, steps);
        let swept = TraceSpec {
            params: with_gate(&spec.params, key, v),
            ..spec
        };
        let record = simulate_trace(&swept).map_err(|e| e.to_string())?;
        out.extend(record.potentials());
    }
    Ok(out)
}

/// The cosine conductance schedule over `steps`.
pub fn conductance(steps: usize) -> Vec<f64> {
    (0..steps).map(|t| cosine_conductance(t, steps)).collect()
}

#[wasm_bindgen(js_name = simulate)]
pub fn simulate_js(knobs: &NeuronKnobs, current: f64, steps: usize) -> Result<TraceView, JsError> {
    trace(knobs, current, steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = sweepGate)]
pub fn sweep_js(
    knobs: &NeuronKnobs,
    gate: &str,
    values: Vec<f64>,
    current: f64,
    steps: usize,
) -> Result<Vec<f64>, JsError> {
    gate_sweep(knobs, gate, &values, current, steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = cosineConductance)]
pub fn conductance_js(steps: usize) -> Vec<f64> {
    conductance(steps)
}
