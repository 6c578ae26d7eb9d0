/* tslint:disable */
/* eslint-disable */

/**
 * Parse an AMR and show every derived form: triples, the variable-free
 * tree, and the character/super-character token line.
 */
export function analyze(text: string, super_relations: boolean, depth_parens: boolean): string;

/**
 * SMATCH and the full fine-grained breakdown between two AMRs.
 */
export function compare(pred: string, gold: string, restarts: number, seed: number): string;

/**
 * Run raw model output through the restoration pipeline stage by stage.
 */
export function postprocess_line(raw: string, prune_method: number, coref: boolean, gazetteer_tsv: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly analyze: (a: number, b: number, c: number, d: number) => [number, number];
    readonly compare: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
    readonly postprocess_line: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
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
