/* tslint:disable */
/* eslint-disable */

/**
 * Violator search, endomorphism dimension and the geometric test.
 */
export function check_json(datum: string, budget: number, seed: number): string;

/**
 * `log cap(V, σ; Σ)` on a `grid × grid` lattice where source `axis_x` has
 * `Σ = e^x I`, source `axis_y` has `Σ = e^y I`, all other sources `I`, and
 * `x, y ∈ [−span, span]`. Values are row-major with `y` increasing by row;
 * singular points are `null`.
 */
export function landscape(datum: string, axis_x: number, axis_y: number, span: number, grid: number): string;

/**
 * Runs the solver and returns status, capacity, best constant, the
 * capacity trace and the extremizer.
 */
export function solve_json(datum: string, tol: number, max_iter: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly check_json: (a: number, b: number, c: number, d: number) => [number, number];
    readonly landscape: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
    readonly solve_json: (a: number, b: number, c: number, d: number) => [number, number];
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
