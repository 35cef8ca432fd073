//! `glif simulate`: flags to a single-unit trace.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use glif_core::dynamics::{
    export_trace_csv, simulate_trace, write_trace_csv, ConductanceConstraint, InputProgram, TraceSpec,
};
use glif_core::neuron::{Formulation, Gates, NeuronMode, SpikeMode, UnitParams};
use glif_core::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SimMode {
    /// Gated update with the gate values given by `--alpha/--beta/--gamma` or `--frozen`.
    Glif,
    /// Exponential decay, uniform coding, hard reset (`tau = --tauexp`).
    Vanilla,
    /// Primitives summed without gates.
    Fused,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = SimMode::Glif)]
    mode: SimMode,
    /// Leakage gate in [0, 1]: 1 is exponential decay, 0 linear.
    #[arg(long, conflicts_with = "frozen")]
    alpha: Option<f64>,
    /// Integration gate in [0, 1]: 0 is uniform coding, 1 uses `g`.
    #[arg(long, conflicts_with = "frozen")]
    beta: Option<f64>,
    /// Reset gate in [0, 1]: 1 is hard reset, 0 soft reset to `v_re`.
    #[arg(long, conflicts_with = "frozen")]
    gamma: Option<f64>,
    /// Binary gate triple such as `101`.
    #[arg(long)]
    frozen: Option<String>,
    #[arg(long, default_value_t = 0.25)]
    tauexp: f64,
    #[arg(long, default_value_t = 0.0625)]
    taulin: f64,
    #[arg(long, default_value_t = 0.5)]
    vre: f64,
    #[arg(long, default_value_t = 0.5)]
    vth: f64,
    /// Conductance used at every step.
    #[arg(long, default_value_t = 0.5, conflicts_with = "cosine")]
    g: f64,
    /// Use a cosine conductance over one period of `--steps` instead of `--g`.
    #[arg(long)]
    cosine: bool,
    /// `const:C`, `silence`, or `spikes:c0,c1,...` (one current per step).
    #[arg(long, default_value = "const:0.3")]
    input: String,
    /// Number of steps; defaults to the spike-train length or 50.
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    u0: f64,
    #[arg(long, default_value_t = 0.0)]
    s0: f64,
    /// Use the clamp spike `clamp(U - v_th + 0.5, 0, 1)`.
    #[arg(long)]
    relaxed: bool,
    /// Destination CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    overwrite: bool,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn parse_input(text: &str) -> Result<InputProgram, Error> {
    let bad = || usage(format!("--input {text:?}: expected const:C, silence or spikes:c0,c1,..."));
    if text == "silence" {
        return Ok(InputProgram::Silence);
    }
    if let Some(v) = text.strip_prefix("const:") {
        let c: f64 = v.trim().parse().map_err(|_| bad())?;
        return if c.is_finite() { Ok(InputProgram::Constant(c)) } else { Err(bad()) };
    }
    if let Some(list) = text.strip_prefix("spikes:") {
        let values = list
            .split(',')
            .map(|s| s.trim().parse::<f64>().ok().filter(|v| v.is_finite()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(bad)?;
        return Ok(InputProgram::SpikeTrain(values));
    }
    Err(bad())
}

fn gates(args: &SimulateArgs) -> Result<Gates, Error> {
    if let Some(bits) = &args.frozen {
        return match bits.parse::<NeuronMode>() {
            Ok(NeuronMode::SimplexFrozen { alpha, beta, gamma }) => Ok(Gates {
                alpha: alpha as u8 as f64,
                beta: beta as u8 as f64,
                gamma: gamma as u8 as f64,
            }),
            _ => Err(usage(format!("--frozen {bits:?}: expected three binary digits such as 101"))),
        };
    }
    let g = Gates {
        alpha: args.alpha.unwrap_or(Gates::VANILLA.alpha),
        beta: args.beta.unwrap_or(Gates::VANILLA.beta),
        gamma: args.gamma.unwrap_or(Gates::VANILLA.gamma),
    };
    for (name, v) in [("alpha", g.alpha), ("beta", g.beta), ("gamma", g.gamma)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(usage(format!("--{name} = {v} must lie in [0, 1]")));
        }
    }
    Ok(g)
}

/// Builds the trace spec, rejecting flag combinations that do not apply.
pub fn trace_spec(args: &SimulateArgs) -> Result<TraceSpec, Error> {
    let gate_flags = args.alpha.is_some() || args.beta.is_some() || args.gamma.is_some() || args.frozen.is_some();
    let formulation = match args.mode {
        SimMode::Glif => Formulation::Gated(gates(args)?),
        SimMode::Vanilla | SimMode::Fused if gate_flags => {
            return Err(usage("gate flags (--alpha/--beta/--gamma/--frozen) require --mode glif"));
        }
        SimMode::Vanilla => Formulation::Gated(Gates::VANILLA),
        SimMode::Fused => Formulation::Fused,
    };
    for (name, v) in [("tauexp", args.tauexp), ("taulin", args.taulin), ("g", args.g)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(usage(format!("--{name} = {v} must lie in (0, 1)")));
        }
    }
    for (name, v) in [("vre", args.vre), ("vth", args.vth), ("u0", args.u0)] {
        if !v.is_finite() {
            return Err(usage(format!("--{name} must be finite")));
        }
    }
    if args.s0 != 0.0 && args.s0 != 1.0 {
        return Err(usage("--s0 must be 0 or 1"));
    }
    let input = parse_input(&args.input)?;
    let steps = match (&input, args.steps) {
        (_, Some(0)) => return Err(usage("--steps must be positive")),
        (InputProgram::SpikeTrain(v), Some(n)) if v.len() < n => {
            return Err(usage(format!("--input has {} currents for {n} steps", v.len())));
        }
        (_, Some(n)) => n,
        (InputProgram::SpikeTrain(v), None) => v.len(),
        (_, None) => 50,
    };
    let params = UnitParams {
        formulation,
        tau_lin: args.taulin,
        tau_exp: args.tauexp,
        v_re: args.vre,
        v_th: args.vth,
        g: vec![args.g; steps],
    };
    let mut spec = TraceSpec::new(params, steps, input);
    if args.cosine {
        spec.g_constraint = ConductanceConstraint::Cosine;
    }
    spec.u0 = args.u0;
    spec.s0 = args.s0;
    if args.relaxed {
        spec.spike_mode = SpikeMode::Relaxed;
    }
    Ok(spec)
}

pub fn run(args: &SimulateArgs) -> Result<(), Error> {
    let spec = trace_spec(args)?;
    if args.cosine && matches!(spec.params.formulation, Formulation::Gated(g) if g.beta == 0.0) {
        eprintln!("note: with beta = 0 the conductance has no effect (uniform coding)");
    }
    let record = simulate_trace(&spec)?;
    match &args.out {
        Some(path) => {
            if path.exists() && !args.overwrite {
                return Err(usage(format!("{} exists (pass --overwrite to replace it)", path.display())));
            }
            export_trace_csv(&record, path)?;
            let last = record.rows.last().map_or(f64::NAN, |r| r.u);
            let first = record
                .first_spike()
                .map_or_else(|| "none".to_string(), |t| format!("t = {t}"));
            println!(
                "wrote {} steps to {}; final U = {last:.6}; first spike: {first}",
                record.rows.len(),
                path.display()
            );
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write_trace_csv(&record, &mut lock)
                .map_err(|e| Error::Io { path: "<stdout>".into(), source: std::io::Error::other(e) })?;
            lock.flush().map_err(|e| Error::Io { path: "<stdout>".into(), source: e })?;
        }
    }
    Ok(())
}
