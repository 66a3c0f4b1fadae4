/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_get_optimum_c: (a: number) => number;
export const __wbg_get_optimum_iterations: (a: number) => number;
export const __wbg_get_optimum_kappa: (a: number) => number;
export const __wbg_get_optimum_p: (a: number) => [number, number];
export const __wbg_get_optimum_q: (a: number) => [number, number];
export const __wbg_get_optimum_r: (a: number) => number;
export const __wbg_optimum_free: (a: number, b: number) => void;
export const __wbg_set_optimum_c: (a: number, b: number) => void;
export const __wbg_set_optimum_iterations: (a: number, b: number) => void;
export const __wbg_set_optimum_kappa: (a: number, b: number) => void;
export const __wbg_set_optimum_p: (a: number, b: number, c: number) => void;
export const __wbg_set_optimum_q: (a: number, b: number, c: number) => void;
export const __wbg_set_optimum_r: (a: number, b: number) => void;
export const critical_line: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number, number];
export const kappa_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
export const optimize: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
