//! Single-unit trace simulation, closed-form checks and parameter histograms.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::NetworkSpec;
use crate::neuron::{resolve_params, unit_step, Formulation, SpikeMode, UnitParams};

/// Input current fed to the unit at each step.
#[derive(Clone, Debug, PartialEq)]
pub enum InputProgram {
    Constant(f64),
    /// One current per time step.
    SpikeTrain(Vec<f64>),
    Silence,
}

impl InputProgram {
    fn at(&self, t: usize) -> f64 {
        match self {
            InputProgram::Constant(c) => *c,
            InputProgram::SpikeTrain(v) => v[t],
            InputProgram::Silence => 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ConductanceConstraint {
    /// Use the configured `g[t]` table.
    #[default]
    Free,
    /// Replace `g[t]` by [`cosine_conductance`].
    Cosine,
}

/// Offset keeping the cosine conductance strictly inside `(0, 1)`.
pub const COSINE_MARGIN: f64 = 1e-3;

/// `0.5 (1 + cos(2 pi t / T))`, squeezed into `[margin, 1 - margin]`.
pub fn cosine_conductance(t: usize, time_steps: usize) -> f64 {
    let phase = 2.0 * std::f64::consts::PI * t as f64 / time_steps as f64;
    COSINE_MARGIN + (1.0 - 2.0 * COSINE_MARGIN) * 0.5 * (1.0 + phase.cos())
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceSpec {
    /// Gates may sit anywhere in `[0, 1]`, so simplex configurations are
    /// expressible directly.
    pub params: UnitParams,
    pub time_steps: usize,
    pub input: InputProgram,
    pub g_constraint: ConductanceConstraint,
    pub u0: f64,
    pub s0: f64,
    pub spike_mode: SpikeMode,
}

impl TraceSpec {
    pub fn new(params: UnitParams, time_steps: usize, input: InputProgram) -> Self {
        TraceSpec {
            params,
            time_steps,
            input,
            g_constraint: ConductanceConstraint::Free,
            u0: 0.0,
            s0: 0.0,
            spike_mode: SpikeMode::Spiking,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let InputProgram::SpikeTrain(v) = &self.input {
            if v.len() < self.time_steps {
                return Err(Error::Shape(format!(
                    "spike train has {} entries for {} steps",
                    v.len(),
                    self.time_steps
                )));
            }
        }
        if self.g_constraint == ConductanceConstraint::Free
            && self.params.g.len() < self.time_steps
        {
            return Err(Error::Shape(format!(
                "g table has {} entries for {} steps",
                self.params.g.len(),
                self.time_steps
            )));
        }
        Ok(())
    }

    /// Parameters actually used, with the conductance constraint applied.
    pub fn effective_params(&self) -> UnitParams {
        let mut p = self.params.clone();
        if self.g_constraint == ConductanceConstraint::Cosine {
            p.g = (0..self.time_steps)
                .map(|t| cosine_conductance(t, self.time_steps))
                .collect();
        }
        p
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub t: usize,
    #[serde(rename = "U")]
    pub u: f64,
    #[serde(rename = "S")]
    pub s: f64,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "I")]
    pub i: f64,
    #[serde(rename = "F")]
    pub f: f64,
    pub g: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TraceRecord {
    pub rows: Vec<TraceRow>,
}

impl TraceRecord {
    pub fn potentials(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.u).collect()
    }

    pub fn spikes(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.s).collect()
    }

    pub fn first_spike(&self) -> Option<usize> {
        self.rows.iter().position(|r| r.s > 0.0)
    }
}

/// Iterates the unit update over the input program.
pub fn simulate_trace(spec: &TraceSpec) -> Result<TraceRecord> {
    spec.validate()?;
    let params = spec.effective_params();
    let (mut u, mut s) = (spec.u0, spec.s0);
    let rows = (0..spec.time_steps)
        .map(|t| {
            let step = unit_step(u, s, spec.input.at(t), t, &params, spec.spike_mode);
            u = step.u;
            s = step.s;
            TraceRow {
                t,
                u,
                s,
                l: step.l_total,
                i: step.i,
                f: step.f,
                g: params.g[t],
            }
        })
        .collect();
    Ok(TraceRecord { rows })
}

/// Fixed point of the spike-free recurrence `U = a_l U - b_l + k c`, i.e.
/// `c / (1 - tau_exp)` for pure exponential decay with uniform coding.
pub fn saturation_point(params: &UnitParams, c: f64) -> Result<f64> {
    let co = params.coefficients(0);
    if (1..params.time_steps()).any(|t| params.coefficients(t).k != co.k) {
        return Err(Error::InvalidParameter(
            "integration weight varies over time; no fixed point".into(),
        ));
    }
    if co.a_l >= 1.0 {
        return Err(Error::InvalidParameter(
            "leakage has no exponential component; the potential does not saturate".into(),
        ));
    }
    Ok((co.k * c - co.b_l) / (1.0 - co.a_l))
}

/// Per-step contraction `(U[t+1] - U*) / (U[t] - U*)` for each consecutive pair.
pub fn convergence_ratios(trace: &TraceRecord, fixed_point: f64) -> Vec<f64> {
    trace
        .rows
        .windows(2)
        .map(|w| (w[1].u - fixed_point) / (w[0].u - fixed_point))
        .collect()
}

fn csv_io(path: &Path, e: csv::Error) -> Error {
    Error::io(path, std::io::Error::other(e))
}

/// Writes `t,U,S,L,I,F,g`.
pub fn export_trace_csv(record: &TraceRecord, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_trace_csv(record, file).map_err(|e| csv_io(path, e))
}

pub fn write_trace_csv(record: &TraceRecord, out: impl std::io::Write) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(["t", "U", "S", "L", "I", "F", "g"])?;
    for row in &record.rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trace_csv(path: &Path) -> Result<TraceRecord> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_io(path, e))?;
    let rows = r
        .deserialize()
        .enumerate()
        .map(|(i, row)| {
            row.map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                location: format!("line {}", i + 2),
                message: e.to_string(),
            })
        })
        .collect::<Result<Vec<TraceRow>>>()?;
    Ok(TraceRecord { rows })
}

/// One histogram bin of one resolved parameter kind in one layer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramRow {
    pub layer: usize,
    pub param: String,
    pub bin_lo: f64,
    pub bin_hi: f64,
    pub count: usize,
}

/// Histograms of every resolved parameter over sharing groups, with `bins`
/// equal-width bins over `(0, 1)`. Conductances pool all time steps.
pub fn param_histograms(net: &NetworkSpec, bins: usize) -> Result<Vec<HistogramRow>> {
    if bins == 0 {
        return Err(Error::InvalidParameter("bins must be positive".into()));
    }
    let mut rows = Vec::new();
    for (li, layer) in net.layers.iter().enumerate() {
        let cfgs = layer
            .neuron_params
            .iter()
            .map(resolve_params)
            .collect::<Result<Vec<_>>>()?;
        let kinds: [(&str, Vec<f64>); 8] = [
            ("alpha", cfgs.iter().map(|c| c.alpha).collect()),
            ("beta", cfgs.iter().map(|c| c.beta).collect()),
            ("gamma", cfgs.iter().map(|c| c.gamma).collect()),
            ("tau_lin", cfgs.iter().map(|c| c.tau_lin).collect()),
            ("tau_exp", cfgs.iter().map(|c| c.tau_exp).collect()),
            ("v_re", cfgs.iter().map(|c| c.v_re).collect()),
            ("v_th", cfgs.iter().map(|c| c.v_th).collect()),
            ("g", cfgs.iter().flat_map(|c| c.g.iter().copied()).collect()),
        ];
        for (name, values) in kinds {
            let mut counts = vec![0usize; bins];
            for v in values {
                let b = ((v * bins as f64).floor() as usize).min(bins - 1);
                counts[b] += 1;
            }
            for (b, count) in counts.into_iter().enumerate() {
                rows.push(HistogramRow {
                    layer: li,
                    param: name.to_string(),
                    bin_lo: b as f64 / bins as f64,
                    bin_hi: (b + 1) as f64 / bins as f64,
                    count,
                });
            }
        }
    }
    Ok(rows)
}

/// Writes `layer,param,bin_lo,bin_hi,count`.
pub fn export_param_histograms(net: &NetworkSpec, path: &Path, bins: usize) -> Result<()> {
    let rows = param_histograms(net, bins)?;
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
    for row in rows {
        w.serialize(row).map_err(|e| csv_io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Convenience for sweeps: a copy of `params` with one gate replaced.
pub fn with_gate(params: &UnitParams, gate: char, value: f64) -> UnitParams {
    let mut p = params.clone();
    if let Formulation::Gated(ref mut g) = p.formulation {
        match gate {
            'a' => g.alpha = value,
            'b' => g.beta = value,
            'g' => g.gamma = value,
            _ => {}
        }
    }
    p
}
