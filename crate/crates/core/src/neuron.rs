//! The gated LIF membrane update and its specializations.
//!
//! A GLIF unit carries three gating factors (`alpha`, `beta`, `gamma`) and five
//! primitives (`tau_lin`, `tau_exp`, `v_re`, `v_th` and the per-step conductance
//! `g[t]`). Each membrane update is the sum of three terms:
//!
//! ```text
//! L = [1 - alpha (1 - tau_exp)] U_prev - (1 - alpha) tau_lin      (leakage)
//! I = [1 - beta (1 - g[t])] C                                     (integration)
//! F = -gamma L_exp - (1 - gamma) v_re                             (reset)
//! U = L + I + F * S_prev
//! S = H(U - v_th)
//! ```
//!
//! where `L_exp = [1 - alpha (1 - tau_exp)] U_prev` is the exponential-decay part
//! of the leakage. Every learnable value lives on the real line and is mapped
//! into `(0, 1)` by a sigmoid.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Inverse of [`sigmoid`] on `(0, 1)`.
pub fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

/// Unconstrained learnable values for one parameter-sharing group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawParamSet {
    pub raw_alpha: f64,
    pub raw_beta: f64,
    pub raw_gamma: f64,
    pub raw_tau_lin: f64,
    pub raw_tau_exp: f64,
    pub raw_v_re: f64,
    pub raw_v_th: f64,
    /// One entry per time step.
    pub raw_g: Vec<f64>,
}

/// Addresses one scalar inside a [`RawParamSet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParamField {
    Alpha,
    Beta,
    Gamma,
    TauLin,
    TauExp,
    VRe,
    VTh,
    G(usize),
}

impl ParamField {
    pub const SCALARS: [ParamField; 7] = [
        ParamField::Alpha,
        ParamField::Beta,
        ParamField::Gamma,
        ParamField::TauLin,
        ParamField::TauExp,
        ParamField::VRe,
        ParamField::VTh,
    ];

    pub fn is_gate(self) -> bool {
        matches!(self, ParamField::Alpha | ParamField::Beta | ParamField::Gamma)
    }

    /// Field name without the time index, e.g. `"g"` for every `G(t)`.
    pub fn kind(self) -> &'static str {
        match self {
            ParamField::Alpha => "alpha",
            ParamField::Beta => "beta",
            ParamField::Gamma => "gamma",
            ParamField::TauLin => "tau_lin",
            ParamField::TauExp => "tau_exp",
            ParamField::VRe => "v_re",
            ParamField::VTh => "v_th",
            ParamField::G(_) => "g",
        }
    }
}

impl fmt::Display for ParamField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamField::G(t) => write!(f, "g[{t}]"),
            other => f.write_str(other.kind()),
        }
    }
}

impl RawParamSet {
    pub fn zeros(time_steps: usize) -> Self {
        RawParamSet {
            raw_alpha: 0.0,
            raw_beta: 0.0,
            raw_gamma: 0.0,
            raw_tau_lin: 0.0,
            raw_tau_exp: 0.0,
            raw_v_re: 0.0,
            raw_v_th: 0.0,
            raw_g: vec![0.0; time_steps],
        }
    }

    pub fn time_steps(&self) -> usize {
        self.raw_g.len()
    }

    /// Every field in `ParamField` order, time-indexed conductances last.
    pub fn fields(&self) -> impl Iterator<Item = ParamField> {
        ParamField::SCALARS
            .into_iter()
            .chain((0..self.raw_g.len()).map(ParamField::G))
    }

    pub fn get(&self, field: ParamField) -> f64 {
        match field {
            ParamField::Alpha => self.raw_alpha,
            ParamField::Beta => self.raw_beta,
            ParamField::Gamma => self.raw_gamma,
            ParamField::TauLin => self.raw_tau_lin,
            ParamField::TauExp => self.raw_tau_exp,
            ParamField::VRe => self.raw_v_re,
            ParamField::VTh => self.raw_v_th,
            ParamField::G(t) => self.raw_g[t],
        }
    }

    pub fn get_mut(&mut self, field: ParamField) -> &mut f64 {
        match field {
            ParamField::Alpha => &mut self.raw_alpha,
            ParamField::Beta => &mut self.raw_beta,
            ParamField::Gamma => &mut self.raw_gamma,
            ParamField::TauLin => &mut self.raw_tau_lin,
            ParamField::TauExp => &mut self.raw_tau_exp,
            ParamField::VRe => &mut self.raw_v_re,
            ParamField::VTh => &mut self.raw_v_th,
            ParamField::G(t) => &mut self.raw_g[t],
        }
    }

    pub fn validate(&self, time_steps: usize) -> Result<()> {
        if self.raw_g.len() != time_steps {
            return Err(Error::Shape(format!(
                "raw_g has {} entries, expected {time_steps}",
                self.raw_g.len()
            )));
        }
        for field in self.fields() {
            let v = self.get(field);
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("raw {field} = {v}")));
            }
        }
        Ok(())
    }
}

/// Resolved, sigmoid-bounded parameters of one sharing group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeuronGroupConfig {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub tau_lin: f64,
    pub tau_exp: f64,
    pub v_re: f64,
    pub v_th: f64,
    pub g: Vec<f64>,
}

impl NeuronGroupConfig {
    pub fn time_steps(&self) -> usize {
        self.g.len()
    }

    /// Checks the open-interval invariant on every field.
    pub fn validate(&self) -> Result<()> {
        let scalars = [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("tau_lin", self.tau_lin),
            ("tau_exp", self.tau_exp),
            ("v_re", self.v_re),
            ("v_th", self.v_th),
        ];
        for (name, v) in scalars
            .into_iter()
            .chain(self.g.iter().map(|&v| ("g", v)))
        {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {v} is outside (0, 1)"
                )));
            }
        }
        Ok(())
    }
}

/// Maps every raw value through the sigmoid.
pub fn resolve_params(raw: &RawParamSet) -> Result<NeuronGroupConfig> {
    raw.validate(raw.time_steps())?;
    Ok(NeuronGroupConfig {
        alpha: sigmoid(raw.raw_alpha),
        beta: sigmoid(raw.raw_beta),
        gamma: sigmoid(raw.raw_gamma),
        tau_lin: sigmoid(raw.raw_tau_lin),
        tau_exp: sigmoid(raw.raw_tau_exp),
        v_re: sigmoid(raw.raw_v_re),
        v_th: sigmoid(raw.raw_v_th),
        g: raw.raw_g.iter().map(|&x| sigmoid(x)).collect(),
    })
}

/// Which membrane formulation a layer uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum NeuronMode {
    /// Learnable gates.
    Glif,
    /// Gates frozen to binary values; names follow the `alpha beta gamma` bit
    /// order, so `101` is exponential decay, uniform coding and hard reset.
    SimplexFrozen { alpha: bool, beta: bool, gamma: bool },
    /// Gates fixed at their initial values.
    GlifStaticGates,
    /// Primitives summed without gates.
    GlifFused,
    /// Exponential decay with hard reset, `tau = tau_exp`.
    VanillaLif,
}

impl NeuronMode {
    /// The eight simplex models in `000..=111` order.
    pub fn simplex_all() -> [NeuronMode; 8] {
        std::array::from_fn(|i| NeuronMode::SimplexFrozen {
            alpha: i & 0b100 != 0,
            beta: i & 0b010 != 0,
            gamma: i & 0b001 != 0,
        })
    }

    pub fn label(self) -> String {
        match self {
            NeuronMode::Glif => "glif".into(),
            NeuronMode::SimplexFrozen { alpha, beta, gamma } => {
                format!("{}{}{}", alpha as u8, beta as u8, gamma as u8)
            }
            NeuronMode::GlifStaticGates => "glif_s".into(),
            NeuronMode::GlifFused => "glif_f".into(),
            NeuronMode::VanillaLif => "vanilla".into(),
        }
    }

    /// Whether the optimizer may move the raw gate parameters.
    pub fn learns_gates(self) -> bool {
        matches!(self, NeuronMode::Glif)
    }

    /// Effective per-unit parameters for this mode.
    pub fn unit_params(self, cfg: &NeuronGroupConfig) -> UnitParams {
        let formulation = match self {
            NeuronMode::Glif | NeuronMode::GlifStaticGates => Formulation::Gated(Gates {
                alpha: cfg.alpha,
                beta: cfg.beta,
                gamma: cfg.gamma,
            }),
            NeuronMode::SimplexFrozen { alpha, beta, gamma } => Formulation::Gated(Gates {
                alpha: alpha as u8 as f64,
                beta: beta as u8 as f64,
                gamma: gamma as u8 as f64,
            }),
            NeuronMode::VanillaLif => Formulation::Gated(Gates::VANILLA),
            NeuronMode::GlifFused => Formulation::Fused,
        };
        UnitParams {
            formulation,
            tau_lin: cfg.tau_lin,
            tau_exp: cfg.tau_exp,
            v_re: cfg.v_re,
            v_th: cfg.v_th,
            g: cfg.g.clone(),
        }
    }
}

impl fmt::Display for NeuronMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for NeuronMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "glif" => Ok(NeuronMode::Glif),
            "glif_s" => Ok(NeuronMode::GlifStaticGates),
            "glif_f" => Ok(NeuronMode::GlifFused),
            "vanilla" => Ok(NeuronMode::VanillaLif),
            bits if bits.len() == 3 && bits.bytes().all(|b| b == b'0' || b == b'1') => {
                let b = bits.as_bytes();
                Ok(NeuronMode::SimplexFrozen {
                    alpha: b[0] == b'1',
                    beta: b[1] == b'1',
                    gamma: b[2] == b'1',
                })
            }
            other => Err(Error::InvalidParameter(format!(
                "unknown neuron mode {other:?} (expected glif, glif_s, glif_f, vanilla or a gate triple like 101)"
            ))),
        }
    }
}

impl TryFrom<String> for NeuronMode {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<NeuronMode> for String {
    fn from(mode: NeuronMode) -> String {
        mode.label()
    }
}

/// Forward spike nonlinearity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpikeMode {
    /// Heaviside step with `H(0) = 1`.
    #[default]
    Spiking,
    /// `clamp(x + 0.5, 0, 1)`, whose derivative is the rectangular surrogate.
    Relaxed,
}

/// Gate values on the closed interval, so binary simplex gates are expressible.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gates {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Gates {
    pub const VANILLA: Gates = Gates {
        alpha: 1.0,
        beta: 0.0,
        gamma: 1.0,
    };
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Formulation {
    Gated(Gates),
    /// Primitives stacked directly: `L = tau_exp U - tau_lin`, `I = g C`,
    /// `F = -tau_exp U - v_re`.
    Fused,
}

/// Effective parameters driving one unit's update.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitParams {
    pub formulation: Formulation,
    pub tau_lin: f64,
    pub tau_exp: f64,
    pub v_re: f64,
    pub v_th: f64,
    pub g: Vec<f64>,
}

/// The update written as `U = a_l U_prev - b_l + k C + S_prev (-r_h a_l U_prev - b_f)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coefficients {
    pub a_l: f64,
    pub b_l: f64,
    pub k: f64,
    pub r_h: f64,
    pub b_f: f64,
}

impl UnitParams {
    pub fn time_steps(&self) -> usize {
        self.g.len()
    }

    pub fn coefficients(&self, t: usize) -> Coefficients {
        let g = self.g[t];
        match self.formulation {
            Formulation::Gated(Gates { alpha, beta, gamma }) => Coefficients {
                a_l: 1.0 - alpha * (1.0 - self.tau_exp),
                b_l: (1.0 - alpha) * self.tau_lin,
                k: 1.0 - beta * (1.0 - g),
                r_h: gamma,
                b_f: (1.0 - gamma) * self.v_re,
            },
            Formulation::Fused => Coefficients {
                a_l: self.tau_exp,
                b_l: self.tau_lin,
                k: g,
                r_h: 1.0,
                b_f: self.v_re,
            },
        }
    }
}

/// Membrane potentials and last spikes of one layer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerState {
    pub u: Vec<f64>,
    pub s: Vec<f64>,
}

impl LayerState {
    /// Resting state `U = 0, S = 0`.
    pub fn zeros(n: usize) -> Self {
        LayerState {
            u: vec![0.0; n],
            s: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }
}

/// Per-step terms cached for the backward pass.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepIntermediates {
    pub l_total: Vec<f64>,
    pub l_exp_part: Vec<f64>,
    pub i_incr: Vec<f64>,
    pub f_reset: Vec<f64>,
}

impl StepIntermediates {
    pub fn with_capacity(n: usize) -> Self {
        StepIntermediates {
            l_total: Vec::with_capacity(n),
            l_exp_part: Vec::with_capacity(n),
            i_incr: Vec::with_capacity(n),
            f_reset: Vec::with_capacity(n),
        }
    }
}

/// Leakage gate. Returns `(l_total, l_exp_part)`.
pub fn gate_alpha(u_prev: &[f64], alpha: f64, tau_lin: f64, tau_exp: f64) -> (Vec<f64>, Vec<f64>) {
    let a_l = 1.0 - alpha * (1.0 - tau_exp);
    let b_l = (1.0 - alpha) * tau_lin;
    let l_exp: Vec<f64> = u_prev.iter().map(|&u| a_l * u).collect();
    let l_total = l_exp.iter().map(|&l| l - b_l).collect();
    (l_total, l_exp)
}

/// Integration gate at time step `t`.
pub fn gate_beta(c: &[f64], t: usize, beta: f64, g: &[f64]) -> Result<Vec<f64>> {
    let g_t = *g.get(t).ok_or(Error::TimeIndex {
        t,
        time_steps: g.len(),
    })?;
    let k = 1.0 - beta * (1.0 - g_t);
    Ok(c.iter().map(|&c| k * c).collect())
}

/// Reset gate, applied to the exponential part of the leakage only.
pub fn gate_gamma(l_exp_part: &[f64], gamma: f64, v_re: f64) -> Vec<f64> {
    l_exp_part
        .iter()
        .map(|&l| -gamma * l - (1.0 - gamma) * v_re)
        .collect()
}

/// Spike value for a single overshoot `x = u - v_th`.
pub fn spike_value(x: f64, mode: SpikeMode) -> f64 {
    match mode {
        SpikeMode::Spiking => {
            if x >= 0.0 {
                1.0
            } else {
                0.0
            }
        }
        SpikeMode::Relaxed => (x + 0.5).clamp(0.0, 1.0),
    }
}

pub fn spike(u: &[f64], v_th: f64, mode: SpikeMode) -> Vec<f64> {
    u.iter().map(|&u| spike_value(u - v_th, mode)).collect()
}

/// Rectangular pseudo-derivative of the spike, `H(0.5 - |x|)`.
pub fn surrogate_grad(x: f64) -> f64 {
    if x.abs() <= 0.5 {
        1.0
    } else {
        0.0
    }
}

/// One unit's update, with every intermediate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitStep {
    pub l_total: f64,
    pub l_exp: f64,
    pub i: f64,
    pub f: f64,
    pub u: f64,
    pub s: f64,
}

pub fn unit_step(
    u_prev: f64,
    s_prev: f64,
    c: f64,
    t: usize,
    params: &UnitParams,
    spike_mode: SpikeMode,
) -> UnitStep {
    let co = params.coefficients(t);
    let l_exp = co.a_l * u_prev;
    let l_total = l_exp - co.b_l;
    let i = co.k * c;
    let f = -co.r_h * l_exp - co.b_f;
    let u = l_total + i + f * s_prev;
    UnitStep {
        l_total,
        l_exp,
        i,
        f,
        u,
        s: spike_value(u - params.v_th, spike_mode),
    }
}

fn check_step_shapes(state: &LayerState, c: &[f64], t: usize, time_steps: usize) -> Result<()> {
    if state.u.len() != state.s.len() || state.u.len() != c.len() {
        return Err(Error::Shape(format!(
            "state has u:{} s:{} entries but input has {}",
            state.u.len(),
            state.s.len(),
            c.len()
        )));
    }
    if t >= time_steps {
        return Err(Error::TimeIndex { t, time_steps });
    }
    Ok(())
}

/// Advances a group of units sharing `params` by one time step.
pub fn step_with(
    state: &LayerState,
    c: &[f64],
    t: usize,
    params: &UnitParams,
    spike_mode: SpikeMode,
) -> Result<(LayerState, StepIntermediates)> {
    check_step_shapes(state, c, t, params.time_steps())?;
    let n = c.len();
    let mut next = LayerState {
        u: Vec::with_capacity(n),
        s: Vec::with_capacity(n),
    };
    let mut inter = StepIntermediates::with_capacity(n);
    for ((&u_prev, &s_prev), &c) in state.u.iter().zip(&state.s).zip(c) {
        let step = unit_step(u_prev, s_prev, c, t, params, spike_mode);
        next.u.push(step.u);
        next.s.push(step.s);
        inter.l_total.push(step.l_total);
        inter.l_exp_part.push(step.l_exp);
        inter.i_incr.push(step.i);
        inter.f_reset.push(step.f);
    }
    Ok((next, inter))
}

/// GLIF update for one sharing group under `mode`.
pub fn glif_step(
    state: &LayerState,
    c: &[f64],
    t: usize,
    cfg: &NeuronGroupConfig,
    mode: NeuronMode,
    spike_mode: SpikeMode,
) -> Result<(LayerState, StepIntermediates)> {
    step_with(state, c, t, &mode.unit_params(cfg), spike_mode)
}

/// Reference LIF: `U = tau U_prev (1 - S_prev) + C`, `S = H(U - v_th)`.
pub fn vanilla_lif_step(state: &LayerState, c: &[f64], tau: f64, v_th: f64) -> Result<LayerState> {
    check_step_shapes(state, c, 0, 1)?;
    let u: Vec<f64> = state
        .u
        .iter()
        .zip(&state.s)
        .zip(c)
        .map(|((&u, &s), &c)| tau * u * (1.0 - s) + c)
        .collect();
    let s = spike(&u, v_th, SpikeMode::Spiking);
    Ok(LayerState { u, s })
}

/// Gate-free reference: primitives stacked directly.
pub fn glif_f_step(
    state: &LayerState,
    c: &[f64],
    t: usize,
    cfg: &NeuronGroupConfig,
    spike_mode: SpikeMode,
) -> Result<LayerState> {
    check_step_shapes(state, c, t, cfg.time_steps())?;
    let g_t = cfg.g[t];
    let u: Vec<f64> = state
        .u
        .iter()
        .zip(&state.s)
        .zip(c)
        .map(|((&u_prev, &s_prev), &c)| {
            let l = cfg.tau_exp * u_prev - cfg.tau_lin;
            let i = g_t * c;
            let f = -cfg.tau_exp * u_prev - cfg.v_re;
            l + i + f * s_prev
        })
        .collect();
    let s = spike(&u, cfg.v_th, spike_mode);
    Ok(LayerState { u, s })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(alpha: f64, beta: f64, gamma: f64, tau_exp: f64, v_th: f64, t: usize) -> NeuronGroupConfig {
        NeuronGroupConfig {
            alpha,
            beta,
            gamma,
            tau_lin: 0.0625,
            tau_exp,
            v_re: 0.5,
            v_th,
            g: vec![0.5; t],
        }
    }

    #[test]
    fn resolve_params_known_values() {
        let mut raw = RawParamSet::zeros(2);
        raw.raw_alpha = -0.2;
        raw.raw_beta = 0.2;
        raw.raw_gamma = logit(0.25);
        let cfg = resolve_params(&raw).unwrap();
        assert!((cfg.alpha - 0.450_166_002_687_522).abs() < 1e-12);
        assert!((cfg.beta - 0.549_833_997_312_478).abs() < 1e-12);
        assert!((cfg.gamma - 0.25).abs() < 1e-12);
        assert_eq!(cfg.tau_lin, 0.5);
        assert_eq!(cfg.g, vec![0.5, 0.5]);
    }

    #[test]
    fn resolve_params_rejects_non_finite() {
        let mut raw = RawParamSet::zeros(3);
        raw.raw_g[1] = f64::NAN;
        assert!(matches!(resolve_params(&raw), Err(Error::InvalidParameter(_))));
        raw.raw_g[1] = 0.0;
        raw.raw_v_th = f64::INFINITY;
        assert!(resolve_params(&raw).is_err());
    }

    #[test]
    fn gate_alpha_limits_and_value() {
        let u = [1.0, -0.4, 2.5];
        let (l0, _) = gate_alpha(&u, 0.0, 0.0625, 0.25);
        let (l1, e1) = gate_alpha(&u, 1.0, 0.0625, 0.25);
        for i in 0..3 {
            assert_eq!(l0[i], u[i] - 0.0625);
            assert_eq!(l1[i], 0.25 * u[i]);
            assert_eq!(e1[i], l1[i]);
        }
        let (l, e) = gate_alpha(&[1.0], 0.5, 0.0625, 0.25);
        assert_eq!(l[0], 0.59375);
        assert_eq!(e[0], 0.625);
    }

    #[test]
    fn gate_beta_limits_value_and_range() {
        let g = [0.5, 0.3];
        assert_eq!(gate_beta(&[2.0], 1, 0.0, &g).unwrap(), vec![2.0]);
        assert!((gate_beta(&[2.0], 1, 1.0, &g).unwrap()[0] - 0.6).abs() < 1e-15);
        assert_eq!(gate_beta(&[2.0], 0, 0.5, &g).unwrap(), vec![1.5]);
        assert!(matches!(
            gate_beta(&[2.0], 2, 0.5, &g),
            Err(Error::TimeIndex { t: 2, time_steps: 2 })
        ));
    }

    #[test]
    fn gate_gamma_limits_and_value() {
        assert_eq!(gate_gamma(&[0.8], 1.0, 0.5), vec![-0.8]);
        assert_eq!(gate_gamma(&[0.8], 0.0, 0.5), vec![-0.5]);
        assert!((gate_gamma(&[0.8], 0.5, 0.5)[0] + 0.65).abs() < 1e-15);
    }

    #[test]
    fn spike_threshold_convention() {
        assert_eq!(spike(&[0.5], 0.5, SpikeMode::Spiking), vec![1.0]);
        assert_eq!(spike(&[0.25], 0.5, SpikeMode::Relaxed), vec![0.25]);
        assert_eq!(spike(&[2.5], 0.5, SpikeMode::Spiking), vec![1.0]);
        assert_eq!(spike(&[2.5], 0.5, SpikeMode::Relaxed), vec![1.0]);
        assert_eq!(spike(&[0.49], 0.5, SpikeMode::Spiking), vec![0.0]);
    }

    #[test]
    fn surrogate_window_is_closed() {
        assert_eq!(surrogate_grad(0.0), 1.0);
        assert_eq!(surrogate_grad(0.6), 0.0);
        assert_eq!(surrogate_grad(0.5), 1.0);
        assert_eq!(surrogate_grad(-0.5), 1.0);
        assert_eq!(surrogate_grad(-0.500001), 0.0);
    }

    #[test]
    fn frozen_101_hand_trace() {
        let cfg = cfg(0.5, 0.5, 0.5, 0.5, 0.5, 4);
        let mode: NeuronMode = "101".parse().unwrap();
        let mut state = LayerState::zeros(1);
        let mut us = Vec::new();
        let mut ss = Vec::new();
        for t in 0..4 {
            state = glif_step(&state, &[0.3], t, &cfg, mode, SpikeMode::Spiking).unwrap().0;
            us.push(state.u[0]);
            ss.push(state.s[0]);
        }
        let expect = [0.3, 0.45, 0.525, 0.3];
        for (u, e) in us.iter().zip(expect) {
            assert!((u - e).abs() < 1e-15, "{us:?}");
        }
        assert_eq!(ss, vec![0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn hard_reset_cancels_exponential_part() {
        let cfg = cfg(0.5, 0.5, 0.5, 0.25, 0.5, 1);
        let params = UnitParams {
            formulation: Formulation::Gated(Gates { alpha: 1.0, beta: 0.3, gamma: 1.0 }),
            ..NeuronMode::Glif.unit_params(&cfg)
        };
        let state = LayerState { u: vec![0.9], s: vec![1.0] };
        let (next, _) = step_with(&state, &[0.0], 0, &params, SpikeMode::Spiking).unwrap();
        assert_eq!(next.u[0], 0.0);
    }

    #[test]
    fn vanilla_hand_values() {
        let state = LayerState { u: vec![0.8], s: vec![1.0] };
        assert_eq!(vanilla_lif_step(&state, &[0.1], 0.5, 0.5).unwrap().u, vec![0.1]);
        let state = LayerState { u: vec![0.8], s: vec![0.0] };
        assert_eq!(vanilla_lif_step(&state, &[0.7], 0.0, 0.5).unwrap().u, vec![0.7]);
    }

    #[test]
    fn glif_f_hand_values() {
        let cfg = NeuronGroupConfig {
            alpha: 0.5,
            beta: 0.5,
            gamma: 0.5,
            tau_lin: 0.1,
            tau_exp: 0.3,
            v_re: 0.4,
            v_th: 0.5,
            g: vec![0.7],
        };
        let fired = LayerState { u: vec![0.9], s: vec![1.0] };
        let next = glif_f_step(&fired, &[0.0], 0, &cfg, SpikeMode::Spiking).unwrap();
        assert!((next.u[0] - (-0.1 - 0.4)).abs() < 1e-15);
        let quiet = LayerState { u: vec![0.9], s: vec![0.0] };
        let next = glif_f_step(&quiet, &[0.2], 0, &cfg, SpikeMode::Spiking).unwrap();
        assert!((next.u[0] - (0.3 * 0.9 - 0.1 + 0.7 * 0.2)).abs() < 1e-15);
    }

    #[test]
    fn shape_errors() {
        let cfg = cfg(0.5, 0.5, 0.5, 0.25, 0.5, 2);
        let state = LayerState::zeros(2);
        assert!(matches!(
            glif_step(&state, &[1.0], 0, &cfg, NeuronMode::Glif, SpikeMode::Spiking),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            glif_step(&state, &[1.0, 1.0], 5, &cfg, NeuronMode::Glif, SpikeMode::Spiking),
            Err(Error::TimeIndex { .. })
        ));
        assert!(vanilla_lif_step(&state, &[1.0], 0.5, 0.5).is_err());
    }

    #[test]
    fn mode_labels_round_trip() {
        let simplex = NeuronMode::simplex_all();
        let labels: Vec<String> = simplex.iter().map(|m| m.label()).collect();
        assert_eq!(labels, ["000", "001", "010", "011", "100", "101", "110", "111"]);
        for mode in simplex
            .into_iter()
            .chain([NeuronMode::Glif, NeuronMode::GlifStaticGates, NeuronMode::GlifFused, NeuronMode::VanillaLif])
        {
            assert_eq!(mode.label().parse::<NeuronMode>().unwrap(), mode);
        }
        assert!("102".parse::<NeuronMode>().is_err());
        assert!("lif".parse::<NeuronMode>().is_err());
    }

    #[test]
    fn config_validate_open_interval() {
        let mut c = cfg(0.5, 0.5, 0.5, 0.25, 0.5, 2);
        assert!(c.validate().is_ok());
        c.g[1] = 1.0;
        assert!(c.validate().is_err());
    }
}
