//! Randomized comparison of relaxed-mode BPTT against central differences.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bptt::{batch_gradient, finite_difference_oracle, relative_error, Sample};
use crate::datasets::{rng_for, Stream};
use crate::error::Result;
use crate::network::{forward, ForwardTape, NetworkSpec, ParamSelector, SharingScheme};
use crate::neuron::{NeuronMode, SpikeMode};

/// Relative errors divide by at least this much, so parameters with
/// near-zero gradients are compared in absolute terms.
pub const REL_FLOOR: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq)]
pub struct GradCheckConfig {
    pub seed: u64,
    pub networks: usize,
    pub max_layers: usize,
    pub max_units: usize,
    pub max_time_steps: usize,
    pub samples_per_net: usize,
    pub h: f64,
    pub tol: f64,
    /// Networks whose tape has any `|u - v_th|` within this distance of the
    /// relaxed spike's kinks at 0.5 are redrawn.
    pub kink_margin: f64,
    /// Scales every analytic gradient by 1.01 before comparison.
    pub corrupt_backward: bool,
}

impl Default for GradCheckConfig {
    fn default() -> Self {
        GradCheckConfig {
            seed: 0,
            networks: 20,
            max_layers: 2,
            max_units: 8,
            max_time_steps: 8,
            samples_per_net: 2,
            h: 1e-6,
            tol: 1e-5,
            kink_margin: 1e-4,
            corrupt_backward: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KindReport {
    pub kind: String,
    pub checked: usize,
    pub max_rel_err: f64,
    pub worst: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradCheckReport {
    pub networks_checked: usize,
    pub networks_redrawn: usize,
    pub kinds: Vec<KindReport>,
    pub max_rel_err: f64,
    pub passed: bool,
    pub warnings: Vec<String>,
}

/// Distance from the closest `|u - v_th|` on the tape to the kink at 0.5.
pub fn kink_distance(net: &NetworkSpec, tape: &ForwardTape) -> Result<f64> {
    let v_th: Vec<Vec<f64>> = net
        .layers
        .iter()
        .map(|l| Ok(l.group_configs()?.iter().map(|c| c.v_th).collect()))
        .collect::<Result<_>>()?;
    let mut best = f64::INFINITY;
    for step in &tape.steps {
        for (li, rec) in step.iter().enumerate() {
            let layer = &net.layers[li];
            for (unit, &u) in rec.state.u.iter().enumerate() {
                let x = u - v_th[li][layer.sharing.group_of(unit)];
                best = best.min((x.abs() - 0.5).abs());
            }
        }
    }
    Ok(best)
}

fn pick_mode(i: usize, rng: &mut ChaCha8Rng) -> (NeuronMode, SharingScheme) {
    match i % 6 {
        0 => (NeuronMode::Glif, SharingScheme::ChannelWise),
        1 => (NeuronMode::Glif, SharingScheme::LayerWise),
        2 => (NeuronMode::GlifFused, SharingScheme::ChannelWise),
        3 => (NeuronMode::GlifStaticGates, SharingScheme::ChannelWise),
        4 => (NeuronMode::simplex_all()[rng.random_range(0..8)], SharingScheme::ChannelWise),
        _ => (NeuronMode::VanillaLif, SharingScheme::LayerWise),
    }
}

/// Owned `(input, label)` pairs.
pub type OwnedBatch = Vec<(Vec<Vec<f64>>, usize)>;

/// A small random network and batch drawn from `rng`.
pub fn random_problem(
    i: usize,
    cfg: &GradCheckConfig,
    rng: &mut ChaCha8Rng,
) -> (NetworkSpec, OwnedBatch) {
    let (mode, sharing) = pick_mode(i, rng);
    let n_layers = rng.random_range(1..=cfg.max_layers.max(1));
    let time_steps = rng.random_range(2..=cfg.max_time_steps.max(2));
    let mut dims = vec![rng.random_range(2..=4)];
    for _ in 0..n_layers {
        dims.push(rng.random_range(2..=cfg.max_units.max(2)));
    }
    let mut net = NetworkSpec::zeroed(&dims, time_steps, sharing, mode);
    for layer in &mut net.layers {
        for w in &mut layer.weights.data {
            *w = rng.random_range(-1.5..1.5);
        }
        for p in &mut layer.neuron_params {
            for field in p.fields().collect::<Vec<_>>() {
                *p.get_mut(field) = rng.random_range(-1.5..1.5);
            }
        }
    }
    let classes = net.output_dim();
    let samples = (0..cfg.samples_per_net)
        .map(|_| {
            let x = (0..time_steps)
                .map(|_| (0..dims[0]).map(|_| rng.random_range(0.0..1.0)).collect())
                .collect();
            (x, rng.random_range(0..classes))
        })
        .collect();
    (net, samples)
}

pub fn run_gradcheck(cfg: &GradCheckConfig) -> Result<GradCheckReport> {
    let mut rng = rng_for(cfg.seed, Stream::GradCheck);
    let mut warnings = Vec::new();
    if cfg.h < 1e-8 {
        warnings.push(format!(
            "step h = {:e} is in the round-off-dominated regime; differences lose most significant digits",
            cfg.h
        ));
    } else if cfg.h > 1e-3 {
        warnings.push(format!(
            "step h = {:e} is large; truncation error and kink crossings may dominate",
            cfg.h
        ));
    }
    let mut kinds: BTreeMap<String, KindReport> = BTreeMap::new();
    let mut checked = 0;
    let mut redrawn = 0;
    let mut attempt = 0;
    while checked < cfg.networks {
        let (net, owned) = random_problem(attempt, cfg, &mut rng);
        attempt += 1;
        let samples: Vec<Sample<'_>> = owned.iter().map(|(x, y)| (x.as_slice(), *y)).collect();
        let mut near_kink = false;
        for &(x, _) in &samples {
            let (_, tape) = forward(&net, x, SpikeMode::Relaxed)?;
            near_kink |= kink_distance(&net, &tape)? < cfg.kink_margin;
        }
        if near_kink {
            redrawn += 1;
            continue;
        }
        checked += 1;
        let analytic = batch_gradient(&net, &samples, SpikeMode::Relaxed)?.grads;
        let selectors = net.param_selectors();
        let numeric = finite_difference_oracle(&net, &samples, &selectors, cfg.h)?;
        for (sel, n) in selectors.iter().zip(numeric) {
            let mut a = analytic.get(*sel);
            if cfg.corrupt_backward {
                a *= 1.01;
            }
            let err = relative_error(a, n, REL_FLOOR);
            let kind = match sel {
                ParamSelector::Weight { .. } => "weight".to_string(),
                ParamSelector::Neuron { field, .. } => field.kind().to_string(),
            };
            let entry = kinds.entry(kind.clone()).or_insert(KindReport {
                kind,
                checked: 0,
                max_rel_err: 0.0,
                worst: String::new(),
            });
            entry.checked += 1;
            if err > entry.max_rel_err || entry.worst.is_empty() {
                entry.max_rel_err = entry.max_rel_err.max(err);
                entry.worst = format!("net{} {sel} (analytic {a:.6e}, numeric {n:.6e})", checked - 1);
            }
        }
    }
    let kinds: Vec<KindReport> = kinds.into_values().collect();
    let max_rel_err = kinds.iter().map(|k| k.max_rel_err).fold(0.0, f64::max);
    Ok(GradCheckReport {
        networks_checked: checked,
        networks_redrawn: redrawn,
        passed: max_rel_err <= cfg.tol,
        max_rel_err,
        kinds,
        warnings,
    })
}
