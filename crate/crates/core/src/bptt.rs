//! Reverse-mode backpropagation through time over a [`ForwardTape`].
//!
//! The spike derivative is the rectangular surrogate `H(0.5 - |u - v_th|)`. In
//! relaxed mode that is also the exact derivative of the forward, which lets a
//! central finite difference check every other partial.
//!
//! Reduction order: each unit accumulates its partials over time in reverse,
//! then units are summed into their sharing group in index order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{forward, forward_logits, ForwardTape, Matrix, NetworkSpec, ParamSelector};
use crate::neuron::{
    sigmoid, surrogate_grad, Formulation, Gates, ParamField, RawParamSet, SpikeMode, UnitParams,
};

/// Gradient of a scalar loss with respect to every learnable value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradientSet {
    pub layers: Vec<LayerGradient>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerGradient {
    pub weights: Matrix,
    /// One entry per sharing group, in raw (pre-sigmoid) coordinates.
    pub params: Vec<RawParamSet>,
}

impl GradientSet {
    pub fn zeros_like(net: &NetworkSpec) -> Self {
        GradientSet {
            layers: net
                .layers
                .iter()
                .map(|l| LayerGradient {
                    weights: Matrix::zeros(l.out_dim, l.in_dim),
                    params: vec![RawParamSet::zeros(net.time_steps); l.neuron_params.len()],
                })
                .collect(),
        }
    }

    pub fn get(&self, sel: ParamSelector) -> f64 {
        match sel {
            ParamSelector::Weight { layer, row, col } => self.layers[layer].weights.get(row, col),
            ParamSelector::Neuron {
                layer,
                group,
                field,
            } => self.layers[layer].params[group].get(field),
        }
    }

    pub fn get_mut(&mut self, sel: ParamSelector) -> &mut f64 {
        match sel {
            ParamSelector::Weight { layer, row, col } => {
                self.layers[layer].weights.get_mut(row, col)
            }
            ParamSelector::Neuron {
                layer,
                group,
                field,
            } => self.layers[layer].params[group].get_mut(field),
        }
    }

    /// Every scalar in a fixed order: per layer, weights then groups.
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.layers.iter().flat_map(|l| {
            l.weights.data.iter().copied().chain(
                l.params
                    .iter()
                    .flat_map(|p| p.fields().map(move |f| p.get(f)).collect::<Vec<_>>()),
            )
        })
    }

    pub fn add_assign(&mut self, other: &GradientSet) {
        for (a, b) in self.layers.iter_mut().zip(&other.layers) {
            a.weights
                .data
                .iter_mut()
                .zip(&b.weights.data)
                .for_each(|(x, y)| *x += y);
            for (pa, pb) in a.params.iter_mut().zip(&b.params) {
                for field in pb.fields() {
                    *pa.get_mut(field) += pb.get(field);
                }
            }
        }
    }

    pub fn scale(&mut self, factor: f64) {
        for layer in &mut self.layers {
            layer.weights.data.iter_mut().for_each(|x| *x *= factor);
            for p in &mut layer.params {
                for field in ParamField::SCALARS {
                    *p.get_mut(field) *= factor;
                }
                p.raw_g.iter_mut().for_each(|x| *x *= factor);
            }
        }
    }
}

/// Softmax cross-entropy of one sample; returns `(loss, d loss / d logits)`.
pub fn softmax_cross_entropy(logits: &[f64], label: usize) -> (f64, Vec<f64>) {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&z| (z - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    let loss = sum.ln() + max - logits[label];
    let grad = exps
        .iter()
        .enumerate()
        .map(|(i, &e)| e / sum - if i == label { 1.0 } else { 0.0 })
        .collect();
    (loss, grad)
}

/// Index of the largest logit; ties go to the lowest index.
pub fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

/// Gradients with respect to the resolved (post-sigmoid) parameters.
#[derive(Clone, Debug, Default)]
struct EffectiveGrad {
    alpha: f64,
    beta: f64,
    gamma: f64,
    tau_lin: f64,
    tau_exp: f64,
    v_re: f64,
    v_th: f64,
    g: Vec<f64>,
}

impl EffectiveGrad {
    fn zeros(time_steps: usize) -> Self {
        EffectiveGrad {
            g: vec![0.0; time_steps],
            ..Default::default()
        }
    }

    fn add(&mut self, other: &EffectiveGrad) {
        self.alpha += other.alpha;
        self.beta += other.beta;
        self.gamma += other.gamma;
        self.tau_lin += other.tau_lin;
        self.tau_exp += other.tau_exp;
        self.v_re += other.v_re;
        self.v_th += other.v_th;
        self.g.iter_mut().zip(&other.g).for_each(|(a, b)| *a += b);
    }

    /// Chains through the sigmoid; gates only count when the mode reads them.
    fn to_raw(&self, raw: &RawParamSet, gates_live: bool) -> RawParamSet {
        let d = |x: f64| {
            let s = sigmoid(x);
            s * (1.0 - s)
        };
        let gate = |g: f64, x: f64| if gates_live { g * d(x) } else { 0.0 };
        RawParamSet {
            raw_alpha: gate(self.alpha, raw.raw_alpha),
            raw_beta: gate(self.beta, raw.raw_beta),
            raw_gamma: gate(self.gamma, raw.raw_gamma),
            raw_tau_lin: self.tau_lin * d(raw.raw_tau_lin),
            raw_tau_exp: self.tau_exp * d(raw.raw_tau_exp),
            raw_v_re: self.v_re * d(raw.raw_v_re),
            raw_v_th: self.v_th * d(raw.raw_v_th),
            raw_g: self
                .g
                .iter()
                .zip(&raw.raw_g)
                .map(|(&g, &x)| g * d(x))
                .collect(),
        }
    }
}

/// Accumulates `dU` times the partials of `U` with respect to each
/// effective parameter of a unit.
fn accumulate_membrane_partials(
    acc: &mut EffectiveGrad,
    params: &UnitParams,
    t: usize,
    du: f64,
    u_prev: f64,
    s_prev: f64,
    c: f64,
) {
    match params.formulation {
        Formulation::Gated(Gates { alpha, beta, gamma }) => {
            let tau_exp = params.tau_exp;
            let a_l = 1.0 - alpha * (1.0 - tau_exp);
            let exp_part = u_prev * (1.0 - s_prev * gamma);
            acc.alpha += du * (params.tau_lin - (1.0 - tau_exp) * exp_part);
            acc.tau_exp += du * alpha * exp_part;
            acc.tau_lin += du * -(1.0 - alpha);
            acc.beta += du * -(1.0 - params.g[t]) * c;
            acc.g[t] += du * beta * c;
            acc.gamma += du * s_prev * (params.v_re - a_l * u_prev);
            acc.v_re += du * -s_prev * (1.0 - gamma);
        }
        Formulation::Fused => {
            acc.tau_exp += du * u_prev * (1.0 - s_prev);
            acc.tau_lin -= du;
            acc.g[t] += du * c;
            acc.v_re -= du * s_prev;
        }
    }
}

fn check_tape(net: &NetworkSpec, tape: &ForwardTape, loss_grad: &[f64]) -> Result<()> {
    if tape.time_steps() != net.time_steps || tape.num_layers() != net.layers.len() {
        return Err(Error::Shape(format!(
            "tape is {} steps x {} layers, network is {} x {}",
            tape.time_steps(),
            tape.num_layers(),
            net.time_steps,
            net.layers.len()
        )));
    }
    if loss_grad.len() != net.output_dim() {
        return Err(Error::Shape(format!(
            "loss gradient has {} entries, network has {} outputs",
            loss_grad.len(),
            net.output_dim()
        )));
    }
    for step in &tape.steps {
        for (rec, layer) in step.iter().zip(&net.layers) {
            if rec.input.len() != layer.in_dim
                || rec.c.len() != layer.out_dim
                || rec.state.len() != layer.out_dim
            {
                return Err(Error::Shape("tape record does not match layer shape".into()));
            }
        }
    }
    Ok(())
}

/// Backpropagates `loss_grad` (d loss / d logits) through the tape.
pub fn backward(net: &NetworkSpec, tape: &ForwardTape, loss_grad: &[f64]) -> Result<GradientSet> {
    net.validate()?;
    check_tape(net, tape, loss_grad)?;
    let time_steps = net.time_steps;
    let n_layers = net.layers.len();
    let params: Vec<Vec<UnitParams>> = net
        .layers
        .iter()
        .map(|l| l.group_params())
        .collect::<Result<_>>()?;

    let mut grads = GradientSet::zeros_like(net);
    let mut unit_grads: Vec<Vec<EffectiveGrad>> = net
        .layers
        .iter()
        .map(|l| vec![EffectiveGrad::zeros(time_steps); l.out_dim])
        .collect();
    // Gradients reaching U[t] and S[t] through step t + 1.
    let mut carry_u: Vec<Vec<f64>> = net.layers.iter().map(|l| vec![0.0; l.out_dim]).collect();
    let mut carry_s = carry_u.clone();
    let readout: Vec<f64> = loss_grad.iter().map(|g| g / time_steps as f64).collect();

    for t in (0..time_steps).rev() {
        let mut ds_above = readout.clone();
        for li in (0..n_layers).rev() {
            let layer = &net.layers[li];
            let rec = tape.record(t, li);
            let prev = tape.state_before(t, li);
            let mut dc = vec![0.0; layer.out_dim];
            for unit in 0..layer.out_dim {
                let p = &params[li][layer.sharing.group_of(unit)];
                let acc = &mut unit_grads[li][unit];
                let ds = ds_above[unit] + carry_s[li][unit];
                let sg = surrogate_grad(rec.state.u[unit] - p.v_th);
                let du = ds * sg + carry_u[li][unit];
                acc.v_th -= ds * sg;
                let (u_prev, s_prev, c) = (prev.u[unit], prev.s[unit], rec.c[unit]);
                accumulate_membrane_partials(acc, p, t, du, u_prev, s_prev, c);
                let co = p.coefficients(t);
                dc[unit] = du * co.k;
                carry_u[li][unit] = du * co.a_l * (1.0 - s_prev * co.r_h);
                carry_s[li][unit] = du * (-co.r_h * co.a_l * u_prev - co.b_f);
                if !du.is_finite() {
                    return Err(Error::NonFinite {
                        what: "gradient",
                        layer: li,
                        t,
                    });
                }
            }
            let w_grad = &mut grads.layers[li].weights;
            for (row, &d) in dc.iter().enumerate() {
                if d != 0.0 {
                    for (col, &x) in rec.input.iter().enumerate() {
                        *w_grad.get_mut(row, col) += d * x;
                    }
                }
            }
            if li > 0 {
                ds_above = vec![0.0; layer.in_dim];
                for (row, &d) in dc.iter().enumerate() {
                    for (acc, &w) in ds_above.iter_mut().zip(layer.weights.row(row)) {
                        *acc += w * d;
                    }
                }
            }
        }
    }

    for (li, layer) in net.layers.iter().enumerate() {
        let mut groups = vec![EffectiveGrad::zeros(time_steps); layer.neuron_params.len()];
        for (unit, g) in unit_grads[li].iter().enumerate() {
            groups[layer.sharing.group_of(unit)].add(g);
        }
        let gates_live = matches!(
            layer.mode,
            crate::neuron::NeuronMode::Glif | crate::neuron::NeuronMode::GlifStaticGates
        );
        grads.layers[li].params = groups
            .iter()
            .zip(&layer.neuron_params)
            .map(|(g, raw)| g.to_raw(raw, gates_live))
            .collect();
        if grads.layers[li]
            .params
            .iter()
            .any(|p| p.fields().any(|f| !p.get(f).is_finite()))
            || grads.layers[li].weights.data.iter().any(|w| !w.is_finite())
        {
            return Err(Error::NonFinite {
                what: "gradient",
                layer: li,
                t: 0,
            });
        }
    }
    Ok(grads)
}

/// One labelled input sequence (`time_steps x input_dim`).
pub type Sample<'a> = (&'a [Vec<f64>], usize);

/// Mean cross-entropy over `samples`.
pub fn batch_loss(net: &NetworkSpec, samples: &[Sample<'_>], spike_mode: SpikeMode) -> Result<f64> {
    let mut total = 0.0;
    for &(x, label) in samples {
        let logits = forward_logits(net, x, spike_mode)?;
        total += softmax_cross_entropy(&logits, label).0;
    }
    Ok(total / samples.len() as f64)
}

/// Loss, correct count and mean gradient over a batch.
#[derive(Clone, Debug)]
pub struct BatchResult {
    pub loss: f64,
    pub correct: usize,
    pub grads: GradientSet,
}

/// Forward and backward over every sample; per-sample gradients are summed in
/// sample order, then divided by the batch size.
pub fn batch_gradient(
    net: &NetworkSpec,
    samples: &[Sample<'_>],
    spike_mode: SpikeMode,
) -> Result<BatchResult> {
    let mut grads = GradientSet::zeros_like(net);
    let mut loss = 0.0;
    let mut correct = 0;
    for &(x, label) in samples {
        let (logits, tape) = forward(net, x, spike_mode)?;
        let (l, g) = softmax_cross_entropy(&logits, label);
        loss += l;
        if argmax(&logits) == label {
            correct += 1;
        }
        grads.add_assign(&backward(net, &tape, &g)?);
    }
    let n = samples.len().max(1) as f64;
    grads.scale(1.0 / n);
    Ok(BatchResult {
        loss: loss / n,
        correct,
        grads,
    })
}

/// `(f(x + h) - f(x - h)) / 2h`.
pub fn central_difference(mut f: impl FnMut(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Central-difference estimate of the relaxed-mode batch loss gradient for
/// each selected parameter.
pub fn finite_difference_oracle(
    net: &NetworkSpec,
    samples: &[Sample<'_>],
    selectors: &[ParamSelector],
    h: f64,
) -> Result<Vec<f64>> {
    if h.is_nan() || h <= 0.0 {
        return Err(Error::InvalidParameter(format!("step h = {h} must be positive")));
    }
    let mut probe = net.clone();
    selectors
        .iter()
        .map(|&sel| {
            let x0 = net.param(sel);
            *probe.param_mut(sel) = x0 + h;
            let plus = batch_loss(&probe, samples, SpikeMode::Relaxed)?;
            *probe.param_mut(sel) = x0 - h;
            let minus = batch_loss(&probe, samples, SpikeMode::Relaxed)?;
            *probe.param_mut(sel) = x0;
            Ok((plus - minus) / (2.0 * h))
        })
        .collect()
}

/// `|a - b| / max(|a|, |b|, floor)`.
pub fn relative_error(analytic: f64, numeric: f64, floor: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(floor)
}
