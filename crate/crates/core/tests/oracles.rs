//! Values frozen from the independent reference in `oracle/gen_values.py`.

// Reference values keep every digit the oracle printed.
#![allow(clippy::excessive_precision)]

mod common;

use common::{assert_close, oracle_input, oracle_net};
use glif_core::bptt::{backward, relative_error, softmax_cross_entropy};
use glif_core::dynamics::{simulate_trace, InputProgram, TraceSpec};
use glif_core::network::{forward, ParamSelector};
use glif_core::neuron::{logit, resolve_params, sigmoid, Formulation, Gates, ParamField, RawParamSet, SpikeMode, UnitParams};

#[test]
fn sigmoid_reference_points() {
    assert_close(sigmoid(-0.2), 0.450_166_002_687_522_1, 1e-15, "sigmoid(-0.2)");
    assert_close(sigmoid(0.2), 0.549_833_997_312_477_9, 1e-15, "sigmoid(0.2)");
    assert_close(logit(0.25), -1.098_612_288_668_109_7, 1e-15, "logit(0.25)");
    let mut raw = RawParamSet::zeros(2);
    raw.raw_tau_exp = logit(0.25);
    assert_close(resolve_params(&raw).unwrap().tau_exp, 0.25, 1e-12, "round trip");
}

/// Exact-rational trace of a generic gated unit with a time-varying `g`.
const GATED_TRACE: [(f64, f64); 10] = [
    (0.1380681818181818, 0.0),
    (0.26688920454545456, 0.0),
    (0.3885436789772727, 0.0),
    (0.5046440784801136, 1.0),
    (0.13822023774857956, 0.0),
    (0.35427977516424003, 0.0),
    (0.5435440984795588, 1.0),
    (0.22779279560278098, 0.0),
    (0.48915305295579165, 0.0),
    (0.7135254342225567, 1.0),
];

#[test]
fn gated_unit_trace_matches_exact_reference() {
    let params = UnitParams {
        formulation: Formulation::Gated(Gates { alpha: 0.3, beta: 0.6, gamma: 0.2 }),
        tau_lin: 0.0625,
        tau_exp: 0.25,
        v_re: 0.5,
        v_th: 0.5,
        g: (1..=10).map(|k| k as f64 / 11.0).collect(),
    };
    let record = simulate_trace(&TraceSpec::new(params, 10, InputProgram::Constant(0.4))).unwrap();
    for (row, &(u, s)) in record.rows.iter().zip(&GATED_TRACE) {
        assert_close(row.u, u, 1e-12, &format!("U at t = {}", row.t));
        assert_eq!(row.s, s, "S at t = {}", row.t);
    }
}

const LOGITS: [f64; 2] = [0.567_183_035_415_511_97, 0.031_837_871_073_424_974];
const LOSS: f64 = 0.996_224_274_534_557_45;

const WEIGHT_GRADS: [f64; 12] = [
    0.0,
    0.0,
    0.150_484_348_639_958_57,
    0.145_880_499_528_300_21,
    -0.092_556_584_116_264_744,
    -0.074_515_474_217_834_225,
    0.0,
    0.210_948_178_775_663_69,
    0.084_046_796_067_348_462,
    0.0,
    -0.184_642_537_525_041_10,
    -0.086_495_933_988_001_812,
];

/// Layer 0 unit 1, then layer 1 unit 0: seven scalars, then `g[0..4]`.
const PARAM_GRADS: [[f64; 11]; 2] = [
    [
        0.037_172_441_238_947_359,
        -0.030_496_273_050_238_515,
        0.006_704_007_562_765_379_5,
        -0.074_596_585_102_232_105,
        0.013_139_115_536_656_902,
        -0.032_395_967_108_015_014,
        -0.104_411_058_129_883_87,
        0.009_226_678_166_165_747_6,
        0.007_456_917_374_742_221_5,
        0.004_295_066_111_824_781_1,
        0.002_601_076_589_111_232_4,
    ],
    [
        0.041_795_199_826_000_924,
        -0.067_688_605_365_703_885,
        -0.000_503_641_550_266_952_80,
        -0.092_948_996_011_619_240,
        0.014_318_843_186_418_005,
        -0.044_348_545_295_949_053,
        -0.082_690_389_359_829_729,
        0.029_143_463_700_137_135,
        0.021_215_515_749_875_122,
        0.032_478_431_201_406_878,
        0.002_048_241_193_221_782_2,
    ],
];

#[test]
fn relaxed_network_matches_high_precision_reference() {
    let net = oracle_net();
    let (logits, tape) = forward(&net, &oracle_input(), SpikeMode::Relaxed).unwrap();
    for (a, b) in logits.iter().zip(LOGITS) {
        assert_close(*a, b, 1e-14, "logit");
    }
    let (loss, dlogits) = softmax_cross_entropy(&logits, 1);
    assert_close(loss, LOSS, 1e-14, "loss");
    let grads = backward(&net, &tape, &dlogits).unwrap();

    let mut k = 0;
    for (l, layer) in net.layers.iter().enumerate() {
        for row in 0..layer.out_dim {
            for col in 0..layer.in_dim {
                let got = grads.get(ParamSelector::Weight { layer: l, row, col });
                assert!(
                    relative_error(got, WEIGHT_GRADS[k], 1e-12) < 1e-9,
                    "w[{l}][{row},{col}]: {got} vs {}",
                    WEIGHT_GRADS[k]
                );
                k += 1;
            }
        }
    }
    let fields = ParamField::SCALARS.into_iter().chain((0..4).map(ParamField::G));
    for (i, field) in fields.enumerate() {
        for (j, &(layer, group)) in [(0, 1), (1, 0)].iter().enumerate() {
            let got = grads.get(ParamSelector::Neuron { layer, group, field });
            let want = PARAM_GRADS[j][i];
            assert!(
                relative_error(got, want, 1e-12) < 1e-9,
                "layer {layer} group {group} {field}: {got} vs {want}"
            );
        }
    }
}
