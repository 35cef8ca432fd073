//! Fully connected feed-forward spiking networks built from GLIF layers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::neuron::{
    resolve_params, unit_step, LayerState, NeuronGroupConfig, NeuronMode, ParamField,
    RawParamSet, SpikeMode, StepIntermediates, UnitParams,
};

/// How units of a layer share their neuron parameters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SharingScheme {
    /// One parameter set per unit (a dense layer's channel is a single unit).
    #[default]
    ChannelWise,
    /// One parameter set for the whole layer.
    LayerWise,
}

impl SharingScheme {
    pub fn groups(self, units: usize) -> usize {
        match self {
            SharingScheme::ChannelWise => units,
            SharingScheme::LayerWise => 1,
        }
    }

    pub fn group_of(self, unit: usize) -> usize {
        match self {
            SharingScheme::ChannelWise => unit,
            SharingScheme::LayerWise => 0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SharingScheme::ChannelWise => "channel-wise",
            SharingScheme::LayerWise => "layer-wise",
        }
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut f64 {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
}

/// `C = W S`.
pub fn synaptic_current(weights: &Matrix, s_in: &[f64]) -> Result<Vec<f64>> {
    if weights.cols != s_in.len() || weights.data.len() != weights.rows * weights.cols {
        return Err(Error::Shape(format!(
            "weights are {}x{} but input has {} entries",
            weights.rows,
            weights.cols,
            s_in.len()
        )));
    }
    Ok((0..weights.rows)
        .map(|r| weights.row(r).iter().zip(s_in).map(|(w, s)| w * s).sum())
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerSpec {
    pub in_dim: usize,
    pub out_dim: usize,
    /// `out_dim x in_dim`.
    pub weights: Matrix,
    pub neuron_params: Vec<RawParamSet>,
    pub sharing: SharingScheme,
    pub mode: NeuronMode,
}

impl LayerSpec {
    pub fn zeroed(
        in_dim: usize,
        out_dim: usize,
        time_steps: usize,
        sharing: SharingScheme,
        mode: NeuronMode,
    ) -> Self {
        LayerSpec {
            in_dim,
            out_dim,
            weights: Matrix::zeros(out_dim, in_dim),
            neuron_params: vec![RawParamSet::zeros(time_steps); sharing.groups(out_dim)],
            sharing,
            mode,
        }
    }

    pub fn validate(&self, time_steps: usize) -> Result<()> {
        if self.in_dim == 0 || self.out_dim == 0 {
            return Err(Error::Shape("layer dimensions must be positive".into()));
        }
        if self.weights.rows != self.out_dim
            || self.weights.cols != self.in_dim
            || self.weights.data.len() != self.out_dim * self.in_dim
        {
            return Err(Error::Shape(format!(
                "weights are {}x{} ({} values), layer is {}x{}",
                self.weights.rows,
                self.weights.cols,
                self.weights.data.len(),
                self.out_dim,
                self.in_dim
            )));
        }
        if let Some(w) = self.weights.data.iter().find(|w| !w.is_finite()) {
            return Err(Error::InvalidParameter(format!("weight {w}")));
        }
        let expected = self.sharing.groups(self.out_dim);
        if self.neuron_params.len() != expected {
            return Err(Error::Shape(format!(
                "{} parameter sets for {} sharing over {} units (expected {expected})",
                self.neuron_params.len(),
                self.sharing.label(),
                self.out_dim
            )));
        }
        for p in &self.neuron_params {
            p.validate(time_steps)?;
        }
        Ok(())
    }

    pub fn group_configs(&self) -> Result<Vec<NeuronGroupConfig>> {
        self.neuron_params.iter().map(resolve_params).collect()
    }

    /// Effective parameters per sharing group.
    pub fn group_params(&self) -> Result<Vec<UnitParams>> {
        Ok(self
            .group_configs()?
            .iter()
            .map(|cfg| self.mode.unit_params(cfg))
            .collect())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Readout {
    /// Mean over time of the final layer's spikes.
    #[default]
    SpikeCountMean,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub layers: Vec<LayerSpec>,
    pub time_steps: usize,
    #[serde(default)]
    pub readout: Readout,
}

/// Addresses one learnable scalar of a network.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParamSelector {
    Weight {
        layer: usize,
        row: usize,
        col: usize,
    },
    Neuron {
        layer: usize,
        group: usize,
        field: ParamField,
    },
}

impl std::fmt::Display for ParamSelector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParamSelector::Weight { layer, row, col } => write!(f, "layer{layer}.w[{row},{col}]"),
            ParamSelector::Neuron {
                layer,
                group,
                field,
            } => write!(f, "layer{layer}.group{group}.{field}"),
        }
    }
}

impl NetworkSpec {
    /// A network with zero weights and zero raw parameters; `dims` lists the
    /// input width followed by every layer's width.
    pub fn zeroed(
        dims: &[usize],
        time_steps: usize,
        sharing: SharingScheme,
        mode: NeuronMode,
    ) -> Self {
        NetworkSpec {
            layers: dims
                .windows(2)
                .map(|w| LayerSpec::zeroed(w[0], w[1], time_steps, sharing, mode))
                .collect(),
            time_steps,
            readout: Readout::SpikeCountMean,
        }
    }

    pub fn input_dim(&self) -> usize {
        self.layers.first().map_or(0, |l| l.in_dim)
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().map_or(0, |l| l.out_dim)
    }

    pub fn validate(&self) -> Result<()> {
        if self.time_steps == 0 {
            return Err(Error::InvalidParameter("time_steps must be positive".into()));
        }
        if self.layers.is_empty() {
            return Err(Error::Shape("network has no layers".into()));
        }
        for (i, layer) in self.layers.iter().enumerate() {
            layer.validate(self.time_steps)?;
            if i > 0 && self.layers[i - 1].out_dim != layer.in_dim {
                return Err(Error::Shape(format!(
                    "layer {} outputs {} units but layer {i} expects {}",
                    i - 1,
                    self.layers[i - 1].out_dim,
                    layer.in_dim
                )));
            }
        }
        Ok(())
    }

    pub fn set_mode(&mut self, mode: NeuronMode) {
        for layer in &mut self.layers {
            layer.mode = mode;
        }
    }

    /// Every learnable scalar, layer by layer: weights row-major, then groups.
    pub fn param_selectors(&self) -> Vec<ParamSelector> {
        let mut out = Vec::new();
        for (li, layer) in self.layers.iter().enumerate() {
            for row in 0..layer.out_dim {
                for col in 0..layer.in_dim {
                    out.push(ParamSelector::Weight { layer: li, row, col });
                }
            }
            for (group, p) in layer.neuron_params.iter().enumerate() {
                out.extend(p.fields().map(|field| ParamSelector::Neuron {
                    layer: li,
                    group,
                    field,
                }));
            }
        }
        out
    }

    pub fn param(&self, sel: ParamSelector) -> f64 {
        match sel {
            ParamSelector::Weight { layer, row, col } => self.layers[layer].weights.get(row, col),
            ParamSelector::Neuron {
                layer,
                group,
                field,
            } => self.layers[layer].neuron_params[group].get(field),
        }
    }

    pub fn param_mut(&mut self, sel: ParamSelector) -> &mut f64 {
        match sel {
            ParamSelector::Weight { layer, row, col } => {
                self.layers[layer].weights.get_mut(row, col)
            }
            ParamSelector::Neuron {
                layer,
                group,
                field,
            } => self.layers[layer].neuron_params[group].get_mut(field),
        }
    }
}

/// What one layer saw and produced at one time step.
#[derive(Clone, Debug, PartialEq)]
pub struct LayerRecord {
    /// Spikes (or encoded currents) entering the layer.
    pub input: Vec<f64>,
    pub c: Vec<f64>,
    pub inter: StepIntermediates,
    /// State after the update.
    pub state: LayerState,
}

/// Cached forward pass, indexed `[t][layer]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ForwardTape {
    pub steps: Vec<Vec<LayerRecord>>,
    pub logits: Vec<f64>,
    pub spike_mode: SpikeMode,
}

impl ForwardTape {
    pub fn time_steps(&self) -> usize {
        self.steps.len()
    }

    pub fn num_layers(&self) -> usize {
        self.steps.first().map_or(0, Vec::len)
    }

    pub fn record(&self, t: usize, layer: usize) -> &LayerRecord {
        &self.steps[t][layer]
    }

    /// State of `layer` before step `t` (resting state at `t = 0`).
    pub fn state_before(&self, t: usize, layer: usize) -> LayerState {
        match t {
            0 => LayerState::zeros(self.steps[0][layer].state.len()),
            _ => self.steps[t - 1][layer].state.clone(),
        }
    }
}

/// Repeats `x` across `time_steps` steps.
pub fn encode_constant(x: &[f64], time_steps: usize) -> Vec<Vec<f64>> {
    vec![x.to_vec(); time_steps]
}

fn check_input(net: &NetworkSpec, input: &[Vec<f64>]) -> Result<()> {
    if input.len() != net.time_steps {
        return Err(Error::Shape(format!(
            "input has {} time steps, network expects {}",
            input.len(),
            net.time_steps
        )));
    }
    if let Some(row) = input.iter().find(|r| r.len() != net.input_dim()) {
        return Err(Error::Shape(format!(
            "input rows have {} entries, network expects {}",
            row.len(),
            net.input_dim()
        )));
    }
    Ok(())
}

fn run(
    net: &NetworkSpec,
    input: &[Vec<f64>],
    spike_mode: SpikeMode,
    mut tape: Option<&mut Vec<Vec<LayerRecord>>>,
) -> Result<Vec<f64>> {
    net.validate()?;
    check_input(net, input)?;
    let params: Vec<Vec<UnitParams>> = net
        .layers
        .iter()
        .map(LayerSpec::group_params)
        .collect::<Result<_>>()?;
    let mut states: Vec<LayerState> = net
        .layers
        .iter()
        .map(|l| LayerState::zeros(l.out_dim))
        .collect();
    let mut logits = vec![0.0; net.output_dim()];

    for (t, x) in input.iter().enumerate() {
        let mut s_in = x.clone();
        let mut records = Vec::with_capacity(net.layers.len());
        for (li, layer) in net.layers.iter().enumerate() {
            let c = synaptic_current(&layer.weights, &s_in)?;
            let prev = &states[li];
            let mut next = LayerState {
                u: Vec::with_capacity(layer.out_dim),
                s: Vec::with_capacity(layer.out_dim),
            };
            let mut inter = StepIntermediates::with_capacity(layer.out_dim);
            for unit in 0..layer.out_dim {
                let p = &params[li][layer.sharing.group_of(unit)];
                let step = unit_step(prev.u[unit], prev.s[unit], c[unit], t, p, spike_mode);
                if !step.u.is_finite() {
                    return Err(Error::NonFinite {
                        what: "membrane potential",
                        layer: li,
                        t,
                    });
                }
                next.u.push(step.u);
                next.s.push(step.s);
                inter.l_total.push(step.l_total);
                inter.l_exp_part.push(step.l_exp);
                inter.i_incr.push(step.i);
                inter.f_reset.push(step.f);
            }
            let s_out = next.s.clone();
            if tape.is_some() {
                records.push(LayerRecord {
                    input: std::mem::take(&mut s_in),
                    c,
                    inter,
                    state: next.clone(),
                });
            }
            states[li] = next;
            s_in = s_out;
        }
        for (acc, s) in logits.iter_mut().zip(&s_in) {
            *acc += s;
        }
        if let Some(tape) = tape.as_deref_mut() {
            tape.push(records);
        }
    }
    let scale = 1.0 / net.time_steps as f64;
    logits.iter_mut().for_each(|v| *v *= scale);
    Ok(logits)
}

/// Runs the network over `input` (`time_steps x input_dim`) and keeps the tape.
pub fn forward(
    net: &NetworkSpec,
    input: &[Vec<f64>],
    spike_mode: SpikeMode,
) -> Result<(Vec<f64>, ForwardTape)> {
    let mut steps = Vec::with_capacity(net.time_steps);
    let logits = run(net, input, spike_mode, Some(&mut steps))?;
    Ok((
        logits.clone(),
        ForwardTape {
            steps,
            logits,
            spike_mode,
        },
    ))
}

/// Forward pass without a tape.
pub fn forward_logits(net: &NetworkSpec, input: &[Vec<f64>], spike_mode: SpikeMode) -> Result<Vec<f64>> {
    run(net, input, spike_mode, None)
}
