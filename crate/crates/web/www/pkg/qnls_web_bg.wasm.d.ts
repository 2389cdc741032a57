/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_portrait_free: (a: number, b: number) => void;
export const __wbg_profile_free: (a: number, b: number) => void;
export const __wbg_simulation_free: (a: number, b: number) => void;
export const ground_state_profile: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const phase_portrait: (a: number, b: number, c: number, d: number) => [number, number, number];
export const portrait_crit_chi: (a: number) => [number, number];
export const portrait_crit_kind: (a: number) => [number, number];
export const portrait_crit_phi: (a: number) => [number, number];
export const portrait_level_chi: (a: number) => [number, number];
export const portrait_level_phi: (a: number) => [number, number];
export const portrait_orbit_chi: (a: number) => [number, number];
export const portrait_orbit_phi: (a: number) => [number, number];
export const profile_peak: (a: number) => number;
export const profile_phi: (a: number) => [number, number];
export const profile_width: (a: number) => number;
export const profile_xs: (a: number) => [number, number];
export const simulation_advance: (a: number, b: number) => [number, number];
export const simulation_energy_drift: (a: number) => number;
export const simulation_linf: (a: number) => number;
export const simulation_modulus: (a: number) => [number, number];
export const simulation_new: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number];
export const simulation_stability_number: (a: number) => number;
export const simulation_time: (a: number) => number;
export const simulation_xs: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_drop_slice: (a: number, b: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
