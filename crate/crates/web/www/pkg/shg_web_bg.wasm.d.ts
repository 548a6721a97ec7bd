/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_heatmap_free: (a: number, b: number) => void;
export const bilinear_ratio: (a: number, b: number, c: number, d: bigint) => [number, number, number];
export const heatmap_data: (a: number) => [number, number];
export const heatmap_height: (a: number) => number;
export const heatmap_max_abs: (a: number) => number;
export const heatmap_width: (a: number) => number;
export const render_field: (a: number, b: bigint, c: number, d: number) => [number, number, number];
export const resonance_table: (a: bigint, b: bigint, c: bigint, d: bigint) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
