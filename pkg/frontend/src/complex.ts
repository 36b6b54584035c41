/**
 * Complex 3-vectors in the wire format of the game API: each component
 * travels as an [re, im] pair of IEEE doubles.
 *
 * Nothing here touches game rules.  These are display and input
 * helpers only; the server stays the sole judge of every move.
 */

export type Pair = [number, number];
export type Vec3 = [Pair, Pair, Pair];

// matches the engine's projector tolerance
export const UNIT_TOL = 1e-9;

export function normOf(v: Vec3): number {
  let total = 0;
  for (const [re, im] of v) total += re * re + im * im;
  return Math.sqrt(total);
}

// <a|b> with the conjugate on the left slot
export function inner(a: Vec3, b: Vec3): Pair {
  let re = 0;
  let im = 0;
  for (let k = 0; k < 3; k++) {
    const [ar, ai] = a[k];
    const [br, bi] = b[k];
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return [re, im];
}

export function overlap(a: Vec3, b: Vec3): number {
  const [re, im] = inner(a, b);
  return Math.hypot(re, im);
}

export function isUnit(v: Vec3, tol: number = UNIT_TOL): boolean {
  return Math.abs(normOf(v) - 1) <= tol;
}

export function normalized(v: Vec3): Vec3 | null {
  const n = normOf(v);
  if (n === 0) return null;
  return v.map(([re, im]) => [re / n, im / n]) as Vec3;
}

/**
 * 17 significant digits: enough decimal text to parse back to the
 * exact double the server sent.
 */
export function format17(x: number): string {
  return x.toPrecision(17);
}

export function formatRect(p: Pair): string {
  const [re, im] = p;
  const sign = im < 0 || Object.is(im, -0) ? "-" : "+";
  return `${format17(re)} ${sign} ${format17(Math.abs(im))}i`;
}

export function formatPolar(p: Pair): string {
  const r = Math.hypot(p[0], p[1]);
  const theta = Math.atan2(p[1], p[0]);
  return `${r.toPrecision(6)}·e^(${theta.toPrecision(6)}i)`;
}

/** Numeric input field text -> number; blank counts as zero. */
export function parseField(text: string): number | null {
  const trimmed = text.trim();
  if (trimmed === "") return 0;
  const value = Number(trimmed);
  return Number.isFinite(value) ? value : null;
}

const R2 = Math.SQRT1_2;
const R3 = 1 / Math.sqrt(3);

export interface Preset {
  label: string;
  vector: Vec3;
}

export const PRESETS: Preset[] = [
  { label: "e1", vector: [[1, 0], [0, 0], [0, 0]] },
  { label: "e2", vector: [[0, 0], [1, 0], [0, 0]] },
  { label: "e3", vector: [[0, 0], [0, 0], [1, 0]] },
  { label: "(1,1,1)/√3", vector: [[R3, 0], [R3, 0], [R3, 0]] },
  { label: "(1,i,0)/√2", vector: [[R2, 0], [0, R2], [0, 0]] },
];

// the probe the real-vector cheat reconstructs from
export const REAL_CHEAT_PRESET = PRESETS[4];
