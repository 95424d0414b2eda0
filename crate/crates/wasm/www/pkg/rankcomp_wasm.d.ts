/* tslint:disable */
/* eslint-disable */

/**
 * Complementarity heatmap and group means of a synthetic score table.
 */
export function complementarity_demo(seed: bigint, humans: number, automatics: number, systems: number, utterances: number, rho: number): string;

/**
 * Borda against exact Kemeny on random families.
 */
export function kemeny_demo(samples: number, max_voters: number, max_items: number, seed: bigint): string;

/**
 * PCA map of the metrics with Louvain cluster colors.
 */
export function structure_demo(seed: bigint, humans: number, automatics: number, systems: number, utterances: number, rho: number, utterance_level: boolean, resolution: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly complementarity_demo: (a: bigint, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly kemeny_demo: (a: number, b: number, c: number, d: bigint) => [number, number, number, number];
    readonly structure_demo: (a: bigint, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
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
