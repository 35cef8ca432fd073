/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_get_neuronknobs_alpha: (a: number) => number;
export const __wbg_get_neuronknobs_beta: (a: number) => number;
export const __wbg_get_neuronknobs_cosine: (a: number) => number;
export const __wbg_get_neuronknobs_fused: (a: number) => number;
export const __wbg_get_neuronknobs_g: (a: number) => number;
export const __wbg_get_neuronknobs_gamma: (a: number) => number;
export const __wbg_get_neuronknobs_tau_exp: (a: number) => number;
export const __wbg_get_neuronknobs_tau_lin: (a: number) => number;
export const __wbg_get_neuronknobs_v_re: (a: number) => number;
export const __wbg_get_neuronknobs_v_th: (a: number) => number;
export const __wbg_neuronknobs_free: (a: number, b: number) => void;
export const __wbg_set_neuronknobs_alpha: (a: number, b: number) => void;
export const __wbg_set_neuronknobs_beta: (a: number, b: number) => void;
export const __wbg_set_neuronknobs_cosine: (a: number, b: number) => void;
export const __wbg_set_neuronknobs_fused: (a: number, b: number) => void;
export const __wbg_set_neuronknobs_g: (a: number, b: number) => void;
export const __wbg_set_neuronknobs_gamma: (a: number, b: number) => void;
export const __wbg_set_neuronknobs_tau_exp: (a: number, b: number) => void;
export const __wbg_set_neuronknobs_tau_lin: (a: number, b: number) => void;
export const __wbg_set_neuronknobs_v_re: (a: number, b: number) => void;
export const __wbg_set_neuronknobs_v_th: (a: number, b: number) => void;
export const __wbg_traceview_free: (a: number, b: number) => void;
export const cosineConductance: (a: number) => [number, number];
export const neuronknobs_new: () => number;
export const simulate: (a: number, b: number, c: number) => [number, number, number];
export const sweepGate: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
export const traceview_f: (a: number) => [number, number];
export const traceview_g: (a: number) => [number, number];
export const traceview_i: (a: number) => [number, number];
export const traceview_l: (a: number) => [number, number];
export const traceview_s: (a: number) => [number, number];
export const traceview_u: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
