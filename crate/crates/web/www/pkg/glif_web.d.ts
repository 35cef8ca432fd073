/* tslint:disable */
/* eslint-disable */

/**
 * Neuron settings edited by the page's sliders.
 */
export class NeuronKnobs {
    free(): void;
    [Symbol.dispose](): void;
    constructor();
    alpha: number;
    beta: number;
    /**
     * Replace `g` by the cosine schedule.
     */
    cosine: boolean;
    /**
     * Drop the gates and sum the primitives directly.
     */
    fused: boolean;
    g: number;
    gamma: number;
    tau_exp: number;
    tau_lin: number;
    v_re: number;
    v_th: number;
}

/**
 * Columns of one simulated trace.
 */
export class TraceView {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    f(): Float64Array;
    g(): Float64Array;
    i(): Float64Array;
    l(): Float64Array;
    s(): Float64Array;
    u(): Float64Array;
}

export function cosineConductance(steps: number): Float64Array;

export function simulate(knobs: NeuronKnobs, current: number, steps: number): TraceView;

export function sweepGate(knobs: NeuronKnobs, gate: string, values: Float64Array, current: number, steps: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_get_neuronknobs_alpha: (a: number) => number;
    readonly __wbg_get_neuronknobs_beta: (a: number) => number;
    readonly __wbg_get_neuronknobs_cosine: (a: number) => number;
    readonly __wbg_get_neuronknobs_fused: (a: number) => number;
    readonly __wbg_get_neuronknobs_g: (a: number) => number;
    readonly __wbg_get_neuronknobs_gamma: (a: number) => number;
    readonly __wbg_get_neuronknobs_tau_exp: (a: number) => number;
    readonly __wbg_get_neuronknobs_tau_lin: (a: number) => number;
    readonly __wbg_get_neuronknobs_v_re: (a: number) => number;
    readonly __wbg_get_neuronknobs_v_th: (a: number) => number;
    readonly __wbg_neuronknobs_free: (a: number, b: number) => void;
    readonly __wbg_set_neuronknobs_alpha: (a: number, b: number) => void;
    readonly __wbg_set_neuronknobs_beta: (a: number, b: number) => void;
    readonly __wbg_set_neuronknobs_cosine: (a: number, b: number) => void;
    readonly __wbg_set_neuronknobs_fused: (a: number, b: number) => void;
    readonly __wbg_set_neuronknobs_g: (a: number, b: number) => void;
    readonly __wbg_set_neuronknobs_gamma: (a: number, b: number) => void;
    readonly __wbg_set_neuronknobs_tau_exp: (a: number, b: number) => void;
    readonly __wbg_set_neuronknobs_tau_lin: (a: number, b: number) => void;
    readonly __wbg_set_neuronknobs_v_re: (a: number, b: number) => void;
    readonly __wbg_set_neuronknobs_v_th: (a: number, b: number) => void;
    readonly __wbg_traceview_free: (a: number, b: number) => void;
    readonly cosineConductance: (a: number) => [number, number];
    readonly neuronknobs_new: () => number;
    readonly simulate: (a: number, b: number, c: number) => [number, number, number];
    readonly sweepGate: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly traceview_f: (a: number) => [number, number];
    readonly traceview_g: (a: number) => [number, number];
    readonly traceview_i: (a: number) => [number, number];
    readonly traceview_l: (a: number) => [number, number];
    readonly traceview_s: (a: number) => [number, number];
    readonly traceview_u: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
