/* tslint:disable */
/* eslint-disable */

export class Portrait {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    crit_chi(): Float64Array;
    crit_kind(): string[];
    crit_phi(): Float64Array;
    level_chi(): Float64Array;
    /**
     * Upper branch `χ ≥ 0` of the zero level set; the lower branch is its mirror image.
     */
    level_phi(): Float64Array;
    /**
     * The homoclinic orbit traced by shooting; empty when no ground state exists.
     */
    orbit_chi(): Float64Array;
    orbit_phi(): Float64Array;
}

export class Profile {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    peak(): number;
    phi(): Float64Array;
    width(): number;
    xs(): Float64Array;
}

/**
 * A running evolution that the page advances a few steps per animation frame.
 */
export class Simulation {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Takes `steps` RK4 steps. On a singularity the field keeps its last good value.
     */
    advance(steps: number): void;
    /**
     * `|E(t) - E(0)| / |E(0)|`.
     */
    energy_drift(): number;
    linf(): number;
    modulus(): Float64Array;
    constructor(a: number, b: number, alpha: number, kind: string, amplitude: number, n: number, l: number, dt: number);
    stability_number(): number;
    time(): number;
    xs(): Float64Array;
}

export function ground_state_profile(a: number, b: number, alpha: number, half_width: number, n: number): Profile;

export function phase_portrait(a: number, b: number, alpha: number, samples: number): Portrait;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_portrait_free: (a: number, b: number) => void;
    readonly __wbg_profile_free: (a: number, b: number) => void;
    readonly __wbg_simulation_free: (a: number, b: number) => void;
    readonly ground_state_profile: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly phase_portrait: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly portrait_crit_chi: (a: number) => [number, number];
    readonly portrait_crit_kind: (a: number) => [number, number];
    readonly portrait_crit_phi: (a: number) => [number, number];
    readonly portrait_level_chi: (a: number) => [number, number];
    readonly portrait_level_phi: (a: number) => [number, number];
    readonly portrait_orbit_chi: (a: number) => [number, number];
    readonly portrait_orbit_phi: (a: number) => [number, number];
    readonly profile_peak: (a: number) => number;
    readonly profile_phi: (a: number) => [number, number];
    readonly profile_width: (a: number) => number;
    readonly profile_xs: (a: number) => [number, number];
    readonly simulation_advance: (a: number, b: number) => [number, number];
    readonly simulation_energy_drift: (a: number) => number;
    readonly simulation_linf: (a: number) => number;
    readonly simulation_modulus: (a: number) => [number, number];
    readonly simulation_new: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number];
    readonly simulation_stability_number: (a: number) => number;
    readonly simulation_time: (a: number) => number;
    readonly simulation_xs: (a: number) => [number, number];
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
