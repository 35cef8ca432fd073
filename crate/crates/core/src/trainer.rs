//! SGD with momentum, cosine annealing and the GLIF parameter-group rules.
//!
//! Synaptic weights get coupled weight decay; raw GLIF parameters never do.
//! The three raw gate parameters run at `gate_lr_scale` times the base
//! learning rate, and only move at all when the layer's mode learns gates.

use rand::Rng;
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bptt::{argmax, batch_gradient, softmax_cross_entropy, GradientSet, Sample};
use crate::datasets::LabeledSpikeDataset;
use crate::error::{Error, Result};
use crate::network::{forward_logits, NetworkSpec};
use crate::neuron::{logit, ParamField, SpikeMode};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainConfig {
    pub lr0: f64,
    pub momentum: f64,
    pub weight_decay: f64,
    pub gate_lr_scale: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
    /// Cosine period in epochs; defaults to `epochs`.
    pub t_max: Option<usize>,
    pub spike_mode: SpikeMode,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            lr0: 0.1,
            momentum: 0.9,
            weight_decay: 5e-5,
            gate_lr_scale: 0.1,
            epochs: 200,
            batch_size: 64,
            seed: 0,
            t_max: None,
            spike_mode: SpikeMode::Spiking,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.lr0 >= 0.0 && self.lr0.is_finite()) {
            return bad(format!("lr0 = {} must be a finite non-negative number", self.lr0));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return bad(format!("momentum = {} must lie in [0, 1)", self.momentum));
        }
        if !(self.weight_decay >= 0.0 && self.weight_decay.is_finite()) {
            return bad(format!("weight_decay = {} must be >= 0", self.weight_decay));
        }
        if !(self.gate_lr_scale > 0.0 && self.gate_lr_scale.is_finite()) {
            return bad(format!("gate_lr_scale = {} must be > 0", self.gate_lr_scale));
        }
        if self.batch_size == 0 {
            return bad("batch_size must be positive".into());
        }
        if self.t_max == Some(0) {
            return bad("t_max must be positive".into());
        }
        Ok(())
    }

    pub fn t_max(&self) -> usize {
        self.t_max.unwrap_or(self.epochs).max(1)
    }
}

/// `0.5 lr0 (1 + cos(pi min(epoch, t_max) / t_max))`, stepped per epoch.
pub fn cosine_lr(epoch: usize, cfg: &TrainConfig) -> f64 {
    let t_max = cfg.t_max();
    let progress = epoch.min(t_max) as f64 / t_max as f64;
    0.5 * cfg.lr0 * (1.0 + (std::f64::consts::PI * progress).cos())
}

/// Momentum buffers shaped like the network's parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerState {
    pub velocity: GradientSet,
}

impl OptimizerState {
    pub fn new(net: &NetworkSpec) -> Self {
        OptimizerState {
            velocity: GradientSet::zeros_like(net),
        }
    }
}

/// `v <- momentum v + g + wd theta`, `theta <- theta - lr v`.
pub fn sgd_step(
    net: &mut NetworkSpec,
    grads: &GradientSet,
    state: &mut OptimizerState,
    lr_now: f64,
    cfg: &TrainConfig,
) -> Result<()> {
    let shape_ok = grads.layers.len() == net.layers.len()
        && state.velocity.layers.len() == net.layers.len()
        && net.layers.iter().zip(&grads.layers).zip(&state.velocity.layers).all(
            |((l, g), v)| {
                g.weights.data.len() == l.weights.data.len()
                    && v.weights.data.len() == l.weights.data.len()
                    && g.params.len() == l.neuron_params.len()
                    && v.params.len() == l.neuron_params.len()
                    && g.params.iter().chain(&v.params).all(|p| p.time_steps() == net.time_steps)
            },
        );
    if !shape_ok {
        return Err(Error::Shape("gradient or optimizer state does not match network".into()));
    }
    let m = cfg.momentum;
    for ((layer, g), v) in net
        .layers
        .iter_mut()
        .zip(&grads.layers)
        .zip(&mut state.velocity.layers)
    {
        for ((w, &gw), vw) in layer
            .weights
            .data
            .iter_mut()
            .zip(&g.weights.data)
            .zip(&mut v.weights.data)
        {
            *vw = m * *vw + gw + cfg.weight_decay * *w;
            *w -= lr_now * *vw;
        }
        let learns_gates = layer.mode.learns_gates();
        for ((raw, gp), vp) in layer.neuron_params.iter_mut().zip(&g.params).zip(&mut v.params) {
            for field in ParamField::SCALARS
                .into_iter()
                .chain((0..raw.raw_g.len()).map(ParamField::G))
            {
                let lr = if field.is_gate() {
                    if !learns_gates {
                        continue;
                    }
                    lr_now * cfg.gate_lr_scale
                } else {
                    lr_now
                };
                let vel = vp.get_mut(field);
                *vel = m * *vel + gp.get(field);
                *raw.get_mut(field) -= lr * *vel;
            }
        }
    }
    Ok(())
}

/// Initial values for GLIF parameters and weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitTable {
    pub v_th: f64,
    pub v_re: f64,
    pub g: f64,
    pub tau_exp: f64,
    pub tau_lin: f64,
    /// Gate values are drawn uniformly from `[gate_low, gate_high)`.
    pub gate_low: f64,
    pub gate_high: f64,
    /// Weights are uniform on `[(weight_shift - 1) * b, (weight_shift + 1) * b)`
    /// with `b = weight_gain * sqrt(6 / fan_in)`. Spike inputs are
    /// non-negative and layers have no bias, so a zero-mean draw leaves about
    /// half of the units below the surrogate window for every input; the
    /// small positive shift starts them near threshold instead.
    pub weight_gain: f64,
    pub weight_shift: f64,
}

impl Default for InitTable {
    fn default() -> Self {
        InitTable {
            v_th: 0.5,
            v_re: 0.5,
            g: 0.5,
            tau_exp: 0.25,
            tau_lin: 0.0625,
            gate_low: 0.4502,
            gate_high: 0.5498,
            weight_gain: 0.5,
            weight_shift: 0.2,
        }
    }
}

impl InitTable {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("v_th", self.v_th),
            ("v_re", self.v_re),
            ("g", self.g),
            ("tau_exp", self.tau_exp),
            ("tau_lin", self.tau_lin),
            ("gate_low", self.gate_low),
            ("gate_high", self.gate_high),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "initial {name} = {v} is outside (0, 1)"
                )));
            }
        }
        if self.gate_low >= self.gate_high {
            return Err(Error::InvalidParameter("gate_low must be below gate_high".into()));
        }
        if !(self.weight_gain >= 0.0 && self.weight_gain.is_finite()) {
            return Err(Error::InvalidParameter("weight_gain must be finite and >= 0".into()));
        }
        if !self.weight_shift.is_finite() {
            return Err(Error::InvalidParameter("weight_shift must be finite".into()));
        }
        Ok(())
    }
}

/// Draws weights and gates, and sets every primitive to its table value.
pub fn init_params(net: &mut NetworkSpec, init: &InitTable, rng: &mut impl Rng) -> Result<()> {
    init.validate()?;
    for layer in &mut net.layers {
        let bound = init.weight_gain * (6.0 / layer.in_dim as f64).sqrt();
        for w in &mut layer.weights.data {
            let centre = init.weight_shift * bound;
            *w = if bound > 0.0 { centre + rng.random_range(-bound..bound) } else { 0.0 };
        }
        for p in &mut layer.neuron_params {
            p.raw_alpha = logit(rng.random_range(init.gate_low..init.gate_high));
            p.raw_beta = logit(rng.random_range(init.gate_low..init.gate_high));
            p.raw_gamma = logit(rng.random_range(init.gate_low..init.gate_high));
            p.raw_tau_lin = logit(init.tau_lin);
            p.raw_tau_exp = logit(init.tau_exp);
            p.raw_v_re = logit(init.v_re);
            p.raw_v_th = logit(init.v_th);
            p.raw_g.iter_mut().for_each(|g| *g = logit(init.g));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochMetrics {
    pub epoch: usize,
    pub lr: f64,
    pub train_loss: f64,
    pub train_acc: f64,
    pub eval_acc: f64,
}

/// Mean loss and accuracy over a dataset.
pub fn evaluate(
    net: &NetworkSpec,
    data: &LabeledSpikeDataset,
    spike_mode: SpikeMode,
) -> Result<(f64, f64)> {
    if data.is_empty() {
        return Ok((f64::NAN, f64::NAN));
    }
    let mut loss = 0.0;
    let mut correct = 0usize;
    for sample in &data.samples {
        let logits = forward_logits(net, &sample.input, spike_mode)?;
        loss += softmax_cross_entropy(&logits, sample.label).0;
        correct += usize::from(argmax(&logits) == sample.label);
    }
    let n = data.len() as f64;
    Ok((loss / n, correct as f64 / n))
}

/// Trains in place. Batches are drawn from a per-epoch shuffle seeded by
/// `cfg.seed`; training accuracy is the running accuracy over the epoch.
pub fn train(
    net: &mut NetworkSpec,
    train_set: &LabeledSpikeDataset,
    eval_set: Option<&LabeledSpikeDataset>,
    cfg: &TrainConfig,
) -> Result<Vec<EpochMetrics>> {
    cfg.validate()?;
    net.validate()?;
    if train_set.is_empty() {
        return Err(Error::Dataset("training set is empty".into()));
    }
    if train_set.dim != net.input_dim() || train_set.time_steps != net.time_steps {
        return Err(Error::Shape(format!(
            "dataset is {}x{} (T x dim), network expects {}x{}",
            train_set.time_steps,
            train_set.dim,
            net.time_steps,
            net.input_dim()
        )));
    }
    if train_set.num_classes > net.output_dim() {
        return Err(Error::Shape(format!(
            "{} classes but only {} output units",
            train_set.num_classes,
            net.output_dim()
        )));
    }

    let mut rng = crate::datasets::rng_for(cfg.seed, crate::datasets::Stream::Shuffle);
    let mut opt = OptimizerState::new(net);
    let mut order: Vec<usize> = (0..train_set.len()).collect();
    let mut history = Vec::with_capacity(cfg.epochs);

    for epoch in 0..cfg.epochs {
        let lr = cosine_lr(epoch, cfg);
        order.shuffle(&mut rng);
        let mut loss_sum = 0.0;
        let mut correct = 0usize;
        for (batch, idx) in order.chunks(cfg.batch_size).enumerate() {
            let samples: Vec<Sample<'_>> = idx
                .iter()
                .map(|&i| {
                    let s = &train_set.samples[i];
                    (s.input.as_slice(), s.label)
                })
                .collect();
            let res = batch_gradient(net, &samples, cfg.spike_mode).map_err(|e| match e {
                Error::NonFinite { .. } => Error::Diverged {
                    epoch,
                    batch,
                    loss: f64::NAN,
                },
                other => other,
            })?;
            if !res.loss.is_finite() {
                return Err(Error::Diverged {
                    epoch,
                    batch,
                    loss: res.loss,
                });
            }
            loss_sum += res.loss * idx.len() as f64;
            correct += res.correct;
            sgd_step(net, &res.grads, &mut opt, lr, cfg)?;
            if !net.param_selectors().into_iter().all(|s| net.param(s).is_finite()) {
                return Err(Error::Diverged {
                    epoch,
                    batch,
                    loss: res.loss,
                });
            }
        }
        let n = train_set.len() as f64;
        let eval_acc = match eval_set {
            Some(eval) if !eval.is_empty() => evaluate(net, eval, cfg.spike_mode)?.1,
            _ => f64::NAN,
        };
        history.push(EpochMetrics {
            epoch,
            lr,
            train_loss: loss_sum / n,
            train_acc: correct as f64 / n,
            eval_acc,
        });
    }
    Ok(history)
}

/// Writes `epoch,lr,train_loss,train_acc,eval_acc`.
pub fn write_metrics_csv(history: &[EpochMetrics], path: &std::path::Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    for m in history {
        w.serialize(m).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn csv_err(path: &std::path::Path, e: csv::Error) -> Error {
    Error::io(path, std::io::Error::other(e))
}

/// Convenience used by experiments: seeded init followed by training.
pub fn init_and_train(
    net: &mut NetworkSpec,
    init: &InitTable,
    train_set: &LabeledSpikeDataset,
    eval_set: Option<&LabeledSpikeDataset>,
    cfg: &TrainConfig,
) -> Result<Vec<EpochMetrics>> {
    let mut rng: ChaCha8Rng = crate::datasets::rng_for(cfg.seed, crate::datasets::Stream::Init);
    init_params(net, init, &mut rng)?;
    train(net, train_set, eval_set, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::SharingScheme;
    use crate::neuron::{resolve_params, NeuronMode};

    fn cfg(lr0: f64, momentum: f64, wd: f64) -> TrainConfig {
        TrainConfig {
            lr0,
            momentum,
            weight_decay: wd,
            ..TrainConfig::default()
        }
    }

    fn one_weight_net() -> NetworkSpec {
        NetworkSpec::zeroed(&[1, 1], 2, SharingScheme::ChannelWise, NeuronMode::Glif)
    }

    #[test]
    fn plain_sgd_step() {
        let mut net = one_weight_net();
        let mut g = GradientSet::zeros_like(&net);
        g.layers[0].weights.data[0] = 1.0;
        let mut st = OptimizerState::new(&net);
        let c = cfg(0.1, 0.0, 0.0);
        sgd_step(&mut net, &g, &mut st, 0.1, &c).unwrap();
        assert_eq!(net.layers[0].weights.data[0], -0.1);
    }

    #[test]
    fn gate_lr_is_scaled_but_primitives_are_not() {
        let mut net = one_weight_net();
        let mut g = GradientSet::zeros_like(&net);
        g.layers[0].weights.data[0] = 1.0;
        let p = &mut g.layers[0].params[0];
        p.raw_alpha = 1.0;
        p.raw_beta = 1.0;
        p.raw_gamma = 1.0;
        p.raw_tau_exp = 1.0;
        p.raw_g[1] = 1.0;
        let mut st = OptimizerState::new(&net);
        sgd_step(&mut net, &g, &mut st, 0.1, &cfg(0.1, 0.0, 0.0)).unwrap();
        let w = net.layers[0].weights.data[0];
        let raw = &net.layers[0].neuron_params[0];
        assert!((raw.raw_alpha - w / 10.0).abs() < 1e-17);
        assert_eq!(raw.raw_beta, raw.raw_alpha);
        assert_eq!(raw.raw_gamma, raw.raw_alpha);
        assert_eq!(raw.raw_tau_exp, w);
        assert_eq!(raw.raw_g[1], w);
    }

    #[test]
    fn weight_decay_only_on_weights() {
        let mut net = one_weight_net();
        net.layers[0].weights.data[0] = 1.0;
        net.layers[0].neuron_params[0].raw_v_th = 1.0;
        net.layers[0].neuron_params[0].raw_alpha = -0.7;
        let before = net.layers[0].neuron_params[0].clone();
        let g = GradientSet::zeros_like(&net);
        let mut st = OptimizerState::new(&net);
        sgd_step(&mut net, &g, &mut st, 0.1, &cfg(0.1, 0.0, 5e-5)).unwrap();
        assert_eq!(net.layers[0].weights.data[0], 1.0 - 0.1 * 5e-5);
        assert_eq!(net.layers[0].neuron_params[0], before);
    }

    #[test]
    fn static_gates_do_not_move() {
        let mut net = one_weight_net();
        net.set_mode(NeuronMode::GlifStaticGates);
        let mut g = GradientSet::zeros_like(&net);
        g.layers[0].params[0].raw_alpha = 1.0;
        g.layers[0].params[0].raw_v_re = 1.0;
        let mut st = OptimizerState::new(&net);
        sgd_step(&mut net, &g, &mut st, 0.1, &cfg(0.1, 0.9, 0.0)).unwrap();
        assert_eq!(net.layers[0].neuron_params[0].raw_alpha, 0.0);
        assert_eq!(net.layers[0].neuron_params[0].raw_v_re, -0.1);
    }

    #[test]
    fn momentum_accumulates() {
        let mut net = one_weight_net();
        let mut g = GradientSet::zeros_like(&net);
        g.layers[0].weights.data[0] = 1.0;
        let mut st = OptimizerState::new(&net);
        let c = cfg(0.1, 0.9, 0.0);
        sgd_step(&mut net, &g, &mut st, 0.1, &c).unwrap();
        sgd_step(&mut net, &g, &mut st, 0.1, &c).unwrap();
        assert!((net.layers[0].weights.data[0] - -(0.1 + 0.19)).abs() < 1e-15);
    }

    #[test]
    fn sgd_rejects_mismatched_shapes() {
        let mut net = one_weight_net();
        let other = NetworkSpec::zeroed(&[2, 1], 2, SharingScheme::ChannelWise, NeuronMode::Glif);
        let g = GradientSet::zeros_like(&other);
        let mut st = OptimizerState::new(&net);
        assert!(sgd_step(&mut net, &g, &mut st, 0.1, &cfg(0.1, 0.0, 0.0)).is_err());
    }

    #[test]
    fn cosine_schedule_points() {
        let c = TrainConfig {
            lr0: 0.2,
            epochs: 10,
            ..TrainConfig::default()
        };
        assert_eq!(cosine_lr(0, &c), 0.2);
        assert!(cosine_lr(10, &c).abs() < 1e-17);
        assert!((cosine_lr(5, &c) - 0.1).abs() < 1e-16);
        assert!(cosine_lr(25, &c).abs() < 1e-17);
        let c = TrainConfig { t_max: Some(4), ..c };
        assert!((cosine_lr(2, &c) - 0.1).abs() < 1e-16);
    }

    #[test]
    fn init_hits_table_constants() {
        let mut net = NetworkSpec::zeroed(&[4, 6, 3], 5, SharingScheme::ChannelWise, NeuronMode::Glif);
        let mut rng = crate::datasets::rng_for(3, crate::datasets::Stream::Init);
        init_params(&mut net, &InitTable::default(), &mut rng).unwrap();
        for layer in &net.layers {
            for raw in &layer.neuron_params {
                let c = resolve_params(raw).unwrap();
                for gate in [c.alpha, c.beta, c.gamma] {
                    assert!((0.4502..0.5498).contains(&gate));
                }
                assert!((c.tau_exp - 0.25).abs() < 1e-12);
                assert!((c.tau_lin - 0.0625).abs() < 1e-12);
                assert!((c.v_th - 0.5).abs() < 1e-12);
                assert!((c.v_re - 0.5).abs() < 1e-12);
                assert!(c.g.iter().all(|g| (g - 0.5).abs() < 1e-12));
            }
            let bound = (6.0 / layer.in_dim as f64).sqrt();
            assert!(layer.weights.data.iter().all(|w| w.abs() < bound));
        }
    }

    #[test]
    fn init_rejects_out_of_range_constants() {
        let mut net = one_weight_net();
        let mut rng = crate::datasets::rng_for(0, crate::datasets::Stream::Init);
        let bad = InitTable {
            tau_exp: 1.0,
            ..InitTable::default()
        };
        assert!(init_params(&mut net, &bad, &mut rng).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(TrainConfig::default().validate().is_ok());
        assert!(cfg(0.1, 1.0, 0.0).validate().is_err());
        assert!(cfg(-0.1, 0.5, 0.0).validate().is_err());
        assert!(cfg(0.1, 0.5, -1.0).validate().is_err());
        let c = TrainConfig {
            gate_lr_scale: 0.0,
            ..TrainConfig::default()
        };
        assert!(c.validate().is_err());
    }
}
