/* tslint:disable */
/* eslint-disable */

/**
 * Generates an instance, runs one coloring and samples an independent set.
 */
export function color_demo(family: string, n: number, d: number, r: number, q: number, seed: bigint): string;

/**
 * Exact expectations on a loose path of `edges` edges (uniformity `r` for
 * hypergraphs, local colorability `r` for graphs).
 */
export function oracle_path(kind: string, r: number, edges: number, p0: string): string;

/**
 * Proof ratio and α at `points` log-spaced degeneracies in `[d_min, d_max]`.
 */
export function regime_curve(kind: string, r: number, eps: number, d_min: number, d_max: number, points: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly color_demo: (a: number, b: number, c: number, d: number, e: number, f: number, g: bigint) => [number, number];
    readonly oracle_path: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
    readonly regime_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
