/* tslint:disable */
/* eslint-disable */

export class Optimum {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    c: number;
    iterations: number;
    kappa: number;
    p: string;
    q: string;
    r: number;
}

/**
 * `(t, |zeta(1/2 + it)|, |V psi(sigma0 + it)|)` at `n` points of
 * `[t_lo, t_hi]`, flattened. The mollifier uses `T = t_hi`.
 */
export function critical_line(p: string, q: string, r: number, theta: number, t_lo: number, t_hi: number, n: number): Float64Array;

/**
 * Samples `(R, c, kappa)` at `n` evenly spaced `R` in `[r_min, r_max]`,
 * flattened row by row. `kappa` is NaN where `R = 0`.
 */
export function kappa_curve(p: string, q: string, theta: number, r_min: number, r_max: number, n: number): Float64Array;

export function optimize(deg_p: number, deg_q: number, theta: number, r_min: number, r_max: number): Optimum;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_get_optimum_c: (a: number) => number;
    readonly __wbg_get_optimum_iterations: (a: number) => number;
    readonly __wbg_get_optimum_kappa: (a: number) => number;
    readonly __wbg_get_optimum_p: (a: number) => [number, number];
    readonly __wbg_get_optimum_q: (a: number) => [number, number];
    readonly __wbg_get_optimum_r: (a: number) => number;
    readonly __wbg_optimum_free: (a: number, b: number) => void;
    readonly __wbg_set_optimum_c: (a: number, b: number) => void;
    readonly __wbg_set_optimum_iterations: (a: number, b: number) => void;
    readonly __wbg_set_optimum_kappa: (a: number, b: number) => void;
    readonly __wbg_set_optimum_p: (a: number, b: number, c: number) => void;
    readonly __wbg_set_optimum_q: (a: number, b: number, c: number) => void;
    readonly __wbg_set_optimum_r: (a: number, b: number) => void;
    readonly critical_line: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number, number];
    readonly kappa_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
    readonly optimize: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
