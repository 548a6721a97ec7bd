/* tslint:disable */
/* eslint-disable */

/**
 * Real part of a field sampled on the colatitude × longitude grid, row-major
 * (north pole first).
 */
export class Heatmap {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    data(): Float64Array;
    max_abs(): number;
    readonly height: number;
    readonly width: number;
}

export function bilinear_ratio(k: number, l: number, trials: number, seed: bigint): number;

export function render_field(band: number, seed: bigint, decay: number, t: number): Heatmap;

export function resonance_table(n: bigint, l: bigint, beta: bigint, theta: bigint): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_heatmap_free: (a: number, b: number) => void;
    readonly bilinear_ratio: (a: number, b: number, c: number, d: bigint) => [number, number, number];
    readonly heatmap_data: (a: number) => [number, number];
    readonly heatmap_height: (a: number) => number;
    readonly heatmap_max_abs: (a: number) => number;
    readonly heatmap_width: (a: number) => number;
    readonly render_field: (a: number, b: bigint, c: number, d: number) => [number, number, number];
    readonly resonance_table: (a: bigint, b: bigint, c: bigint, d: bigint) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
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
