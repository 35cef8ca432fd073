use glif_web::{conductance, gate_sweep, trace, NeuronKnobs};

fn exponential(tau_exp: f64, v_th: f64) -> NeuronKnobs {
    NeuronKnobs {
        alpha: 1.0,
        beta: 0.0,
        gamma: 1.0,
        tau_exp,
        v_th,
        ..NeuronKnobs::default()
    }
}

#[test]
fn saturating_trace_reaches_fixed_point() {
    let view = trace(&exponential(0.5, 10.0), 0.3, 60).unwrap();
    let u = view.u();
    assert_eq!(u.len(), 60);
    assert!((u[59] - 0.6).abs() < 1e-12);
    assert!(view.s().iter().all(|&s| s == 0.0));
}

#[test]
fn sweep_rows_match_individual_traces() {
    let knobs = NeuronKnobs::default();
    let values = [0.0, 0.5, 1.0];
    let flat = gate_sweep(&knobs, "alpha", &values, 0.3, 12).unwrap();
    assert_eq!(flat.len(), 36);
    for (k, &a) in values.iter().enumerate() {
        let single = trace(&NeuronKnobs { alpha: a, ..knobs }, 0.3, 12).unwrap().u();
        assert_eq!(&flat[k * 12..(k + 1) * 12], single.as_slice());
    }
}

#[test]
fn cosine_schedule_stays_inside_unit_interval() {
    let g = conductance(8);
    assert!(g.iter().all(|&v| v > 0.0 && v < 1.0));
    assert!(g[0] > g[4]);
    let knobs = NeuronKnobs { cosine: true, ..NeuronKnobs::default() };
    assert_eq!(trace(&knobs, 0.3, 8).unwrap().g(), g);
}

#[test]
fn bad_inputs_are_reported() {
    let knobs = NeuronKnobs::default();
    assert!(trace(&knobs, 0.3, 0).is_err());
    assert!(trace(&NeuronKnobs { alpha: 1.5, ..knobs }, 0.3, 5).is_err());
    assert!(trace(&NeuronKnobs { tau_exp: 1.0, ..knobs }, 0.3, 5).is_err());
    assert!(gate_sweep(&knobs, "delta", &[0.5], 0.3, 5).is_err());
    assert!(gate_sweep(&knobs, "beta", &[2.0], 0.3, 5).is_err());
    assert!(gate_sweep(&NeuronKnobs { fused: true, ..knobs }, "alpha", &[0.5], 0.3, 5).is_err());
}
