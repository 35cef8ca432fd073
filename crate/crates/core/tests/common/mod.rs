#![allow(dead_code)]

use glif_core::network::{NetworkSpec, SharingScheme};
use glif_core::neuron::{Formulation, Gates, NeuronMode, ParamField, UnitParams};

/// The 2-3-2, T = 4 network whose reference values live in `oracle/values.txt`.
pub const ORACLE_DIMS: [usize; 3] = [2, 3, 2];
pub const ORACLE_T: usize = 4;

fn field_index(f: ParamField) -> usize {
    match f {
        ParamField::Alpha => 0,
        ParamField::Beta => 1,
        ParamField::Gamma => 2,
        ParamField::TauLin => 3,
        ParamField::TauExp => 4,
        ParamField::VRe => 5,
        ParamField::VTh => 6,
        ParamField::G(t) => 7 + t,
    }
}

pub fn oracle_net() -> NetworkSpec {
    let mut net = NetworkSpec::zeroed(&ORACLE_DIMS, ORACLE_T, SharingScheme::ChannelWise, NeuronMode::Glif);
    for (l, layer) in net.layers.iter_mut().enumerate() {
        for r in 0..layer.out_dim {
            for c in 0..layer.in_dim {
                *layer.weights.get_mut(r, c) = ((r * 5 + c * 3 + l * 7) % 13) as f64 / 13.0 * 2.4 - 0.2;
            }
        }
        for (u, p) in layer.neuron_params.iter_mut().enumerate() {
            for f in p.fields().collect::<Vec<_>>() {
                *p.get_mut(f) = ((field_index(f) * 7 + l * 3 + u * 5) % 11) as f64 / 11.0 * 2.0 - 1.0;
            }
        }
    }
    net
}

pub fn oracle_input() -> Vec<Vec<f64>> {
    (0..ORACLE_T)
        .map(|t| (0..ORACLE_DIMS[0]).map(|i| ((t * 3 + i * 5) % 7) as f64 / 7.0).collect())
        .collect()
}

pub fn gated(alpha: f64, beta: f64, gamma: f64, tau_exp: f64, v_th: f64, steps: usize) -> UnitParams {
    UnitParams {
        formulation: Formulation::Gated(Gates { alpha, beta, gamma }),
        tau_lin: 0.0625,
        tau_exp,
        v_re: 0.5,
        v_th,
        g: vec![0.5; steps],
    }
}

pub fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
    assert!((a - b).abs() <= tol, "{what}: {a} vs {b} (|diff| = {:e}, tol {tol:e})", (a - b).abs());
}

/// A network with weights and raw parameters drawn uniformly from `+-spread`.
pub fn random_net(
    seed: u64,
    dims: &[usize],
    time_steps: usize,
    sharing: SharingScheme,
    mode: NeuronMode,
    spread: f64,
) -> NetworkSpec {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut net = NetworkSpec::zeroed(dims, time_steps, sharing, mode);
    for layer in &mut net.layers {
        for w in &mut layer.weights.data {
            *w = rng.random_range(-spread..spread);
        }
        for p in &mut layer.neuron_params {
            for f in p.fields().collect::<Vec<_>>() {
                *p.get_mut(f) = rng.random_range(-spread..spread);
            }
        }
    }
    net
}

pub fn random_input(seed: u64, time_steps: usize, dim: usize) -> Vec<Vec<f64>> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    (0..time_steps)
        .map(|_| (0..dim).map(|_| rng.random_range(0.0..1.0)).collect())
        .collect()
}
