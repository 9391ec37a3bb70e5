/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_comparison_free: (a: number, b: number) => void;
export const __wbg_curve_free: (a: number, b: number) => void;
export const __wbg_fitdemo_free: (a: number, b: number) => void;
export const compare_estimators: (a: number, b: number, c: number, d: number, e: bigint) => [number, number, number];
export const comparison_failures: (a: number) => [number, number];
export const comparison_means: (a: number) => [number, number];
export const comparison_names: (a: number) => [number, number];
export const comparison_variances: (a: number) => [number, number];
export const curve_xs: (a: number) => [number, number];
export const curve_ys: (a: number) => [number, number];
export const fit_demo: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: bigint) => [number, number, number];
export const fitdemo_centers: (a: number) => [number, number];
export const fitdemo_curve_fit: (a: number) => [number, number];
export const fitdemo_curve_start: (a: number) => [number, number];
export const fitdemo_curve_true: (a: number) => [number, number];
export const fitdemo_curve_x: (a: number) => [number, number];
export const fitdemo_estimate: (a: number) => [number, number];
export const fitdemo_histogram: (a: number) => [number, number];
export const fitdemo_iterations: (a: number) => number;
export const fitdemo_mle: (a: number) => number;
export const fitdemo_start: (a: number) => [number, number];
export const fitdemo_termination: (a: number) => [number, number];
export const fitdemo_trace_lyapunov: (a: number) => [number, number];
export const fitdemo_trace_sigma: (a: number) => [number, number];
export const fitdemo_widths: (a: number) => [number, number];
export const residual_curve: (a: number, b: number, c: number, d: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_drop_slice: (a: number, b: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
