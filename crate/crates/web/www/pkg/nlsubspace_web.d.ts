/* tslint:disable */
/* eslint-disable */

/**
 * Per-estimator mean, variance and failure count at one record size.
 */
export class Comparison {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly failures: Uint32Array;
    readonly means: Float64Array;
    readonly names: string[];
    readonly variances: Float64Array;
}

/**
 * Sampled curve `ys(xs)`.
 */
export class Curve {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly xs: Float64Array;
    readonly ys: Float64Array;
}

/**
 * One fitted record: histogram, density curves and the descent trace.
 */
export class FitDemo {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly centers: Float64Array;
    readonly curve_fit: Float64Array;
    readonly curve_start: Float64Array;
    readonly curve_true: Float64Array;
    readonly curve_x: Float64Array;
    /**
     * Final parameters: `[σ]`, or `[σ, μ]` for the lognormal.
     */
    readonly estimate: Float64Array;
    readonly histogram: Float64Array;
    readonly iterations: number;
    /**
     * Unbiased Rayleigh MLE of the same record; NaN for other models.
     */
    readonly mle: number;
    readonly start: Float64Array;
    readonly termination: string;
    readonly trace_lyapunov: Float64Array;
    /**
     * Scale parameter at every accepted iterate.
     */
    readonly trace_sigma: Float64Array;
    readonly widths: Float64Array;
}

export function compare_estimators(sigma0: number, k: number, n_bins: number, trials: number, seed: bigint): Comparison;

export function fit_demo(model: string, sigma0: number, mu0: number, k: number, n_bins: number, xi0_sigma: number, xi0_mu: number, seed: bigint): FitDemo;

export function residual_curve(sigma0: number, lo: number, hi: number, step: number): Curve;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_comparison_free: (a: number, b: number) => void;
    readonly __wbg_curve_free: (a: number, b: number) => void;
    readonly __wbg_fitdemo_free: (a: number, b: number) => void;
    readonly compare_estimators: (a: number, b: number, c: number, d: number, e: bigint) => [number, number, number];
    readonly comparison_failures: (a: number) => [number, number];
    readonly comparison_means: (a: number) => [number, number];
    readonly comparison_names: (a: number) => [number, number];
    readonly comparison_variances: (a: number) => [number, number];
    readonly curve_xs: (a: number) => [number, number];
    readonly curve_ys: (a: number) => [number, number];
    readonly fit_demo: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: bigint) => [number, number, number];
    readonly fitdemo_centers: (a: number) => [number, number];
    readonly fitdemo_curve_fit: (a: number) => [number, number];
    readonly fitdemo_curve_start: (a: number) => [number, number];
    readonly fitdemo_curve_true: (a: number) => [number, number];
    readonly fitdemo_curve_x: (a: number) => [number, number];
    readonly fitdemo_estimate: (a: number) => [number, number];
    readonly fitdemo_histogram: (a: number) => [number, number];
    readonly fitdemo_iterations: (a: number) => number;
    readonly fitdemo_mle: (a: number) => number;
    readonly fitdemo_start: (a: number) => [number, number];
    readonly fitdemo_termination: (a: number) => [number, number];
    readonly fitdemo_trace_lyapunov: (a: number) => [number, number];
    readonly fitdemo_trace_sigma: (a: number) => [number, number];
    readonly fitdemo_widths: (a: number) => [number, number];
    readonly residual_curve: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_drop_slice: (a: number, b: number) => void;
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
